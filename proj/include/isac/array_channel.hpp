// SPDX-License-Identifier: Apache-2.0
//
// isac-sim: compressed-sampling ISAC link-level simulator
// Copyright (C) 2026 The isac-sim authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#pragma once

#include "isac/types.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace isac {

enum class ArrayKind { Csa, Wsa, Ut };

/// Uniform planar array; element spacing in wavelengths.
struct ArrayGeometry {
  Index n_x = 1;
  Index n_y = 1;
  double spacing = 0.5;
  ArrayKind kind = ArrayKind::Csa;

  Index size() const { return n_x * n_y; }
  void validate() const;

  static ArrayGeometry csa(Index n_x, Index n_y = 1) { return {n_x, n_y, 0.5, ArrayKind::Csa}; }
  static ArrayGeometry ut(Index m_x, Index m_y = 1) { return {m_x, m_y, 0.5, ArrayKind::Ut}; }
  static ArrayGeometry wsa(Index n_x, Index n_y, double spacing) {
    return {n_x, n_y, spacing, ArrayKind::Wsa};
  }
};

/// Unit-norm ULA response, element k = exp(-j 2 pi spacing k mu) / sqrt(count).
template <typename Real>
CVector<Real> steering_vector(Real mu, Index count, Real spacing) {
  CVector<Real> a(count);
  const Real scale = Real(1) / std::sqrt(static_cast<Real>(count));
  const Real step = Real(-2) * std::numbers::pi_v<Real> * spacing * mu;
  for (Index k = 0; k < count; ++k) a(k) = std::polar(scale, step * static_cast<Real>(k));
  return a;
}

inline double virtual_azimuth(double azimuth, double elevation) {
  return std::cos(azimuth) * std::sin(elevation);
}
inline double virtual_elevation(double azimuth, double elevation) {
  return std::sin(azimuth) * std::sin(elevation);
}

/// a(mu; n_x) kron a(nu; n_y).
VectorXcd upa_steering_virtual(double mu, double nu, const ArrayGeometry& geometry);
VectorXcd upa_steering(double azimuth, double elevation, const ArrayGeometry& geometry);

/// Raised cosine truncated to |tau| <= half_duration (zero outside).
struct RaisedCosinePulse {
  double rolloff = 0.8;
  double symbol_period = 5e-9;
  double half_duration = 30e-9;

  double operator()(double tau) const;
};

struct PathComponent {
  cx gain{0.0, 0.0};  // at t = 0
  double rx_azimuth = 0.0;
  double rx_elevation = 0.0;
  double tx_azimuth = 0.0;
  double tx_elevation = 0.0;
  double delay = 0.0;
  double doppler = 0.0;

  cx gain_at(double t) const { return gain * std::polar(1.0, 2.0 * kPi * doppler * t); }
  double rx_mu() const { return virtual_azimuth(rx_azimuth, rx_elevation); }
  double rx_nu() const { return virtual_elevation(rx_azimuth, rx_elevation); }
  double tx_mu() const { return virtual_azimuth(tx_azimuth, tx_elevation); }
  double tx_nu() const { return virtual_elevation(tx_azimuth, tx_elevation); }
};

struct Cluster {
  double central_azimuth = 0.0;
  double central_elevation = 0.0;
  double central_delay = 0.0;
  double doppler = 0.0;
  double distance = 0.0;  // radar targets only
  double rcs = 0.0;       // radar targets only
  std::vector<PathComponent> paths;
};

enum class LinkKind { CommDownlink, Radar };

struct ChannelRealization {
  LinkKind kind = LinkKind::CommDownlink;
  ArrayGeometry rx;
  ArrayGeometry tx;
  std::optional<PathComponent> los;
  std::vector<Cluster> clusters;
  double rician_factor_db = 0.0;
  double distance = 0.0;  // UT distance (comm)

  std::vector<PathComponent> paths() const;
  double max_delay() const;
};

/// Scenario parameters shared by the communication and radar links.
struct ScenarioParams {
  double carrier_hz = 77e9;
  double sampling_period = 5e-9;
  Index taps = 32;
  double pulse_rolloff = 0.8;
  double pulse_half_samples = 6.0;

  ArrayGeometry cu = ArrayGeometry::csa(16);
  ArrayGeometry ru = ArrayGeometry::wsa(8, 1, 1.5);
  ArrayGeometry ut = ArrayGeometry::ut(8);

  Index comm_clusters = 6;
  Index comm_paths = 15;
  double rician_factor_db = 20.0;
  double ut_distance_min = 10.0;
  double ut_distance_max = 20.0;

  Index radar_clusters = 6;
  Index radar_paths = 15;
  double target_distance_min = 5.0;
  double target_distance_max = 10.0;
  double rcs_min = 0.5;
  double rcs_max = 5.0;

  double doppler_max_hz = 7.1e3;
  double angle_spread_deg = 7.5;
  double delay_spread_samples = 0.3;
  double central_elevation_max = kPi / 3.0;

  double wavelength() const { return kSpeedOfLight / carrier_hz; }
  double pulse_half_duration() const { return pulse_half_samples * sampling_period; }
  RaisedCosinePulse pulse() const { return {pulse_rolloff, sampling_period, pulse_half_duration()}; }
  /// Upper end of the central delay-offset law, (L - 1) T_s - 2 tau_p.
  double max_central_delay() const {
    return static_cast<double>(taps - 1) * sampling_period - 2.0 * pulse_half_duration();
  }
  void validate() const;
};

/// Throws ConfigError when some path would not fit into the L-tap CIR.
void check_delay_fit(const ChannelRealization& channel, Index taps, double sampling_period,
                     double pulse_half_duration);

ChannelRealization generate_comm_channel(const ScenarioParams& params, std::uint64_t seed);
ChannelRealization generate_radar_channel(const ScenarioParams& params, std::uint64_t seed);

/// L spatial matrices H_0 .. H_{L-1}; taps outside [0, L) are zero.
struct CirTensor {
  std::vector<MatrixXcd> taps;
  double sampling_period = 5e-9;

  CirTensor() = default;
  CirTensor(Index length, Index rows, Index cols, double ts)
      : taps(static_cast<std::size_t>(length), MatrixXcd::Zero(rows, cols)), sampling_period(ts) {}

  Index length() const { return static_cast<Index>(taps.size()); }
  Index rows() const { return taps.empty() ? 0 : taps.front().rows(); }
  Index cols() const { return taps.empty() ? 0 : taps.front().cols(); }
  MatrixXcd& operator[](Index l) { return taps[static_cast<std::size_t>(l)]; }
  const MatrixXcd& operator[](Index l) const { return taps[static_cast<std::size_t>(l)]; }

  /// [H_0 H_1 ... H_{L-1}], rows x (L * cols).
  MatrixXcd spatial_delay() const;
  static CirTensor from_spatial_delay(const MatrixXcd& sd, Index length, double ts);
  double squared_norm() const;
};

CirTensor sample_cir(const ChannelRealization& channel, double t, const RaisedCosinePulse& pulse,
                     Index taps);

/// Adds one path's contribution g * a_rx a_tx^H * p(l T_s - tau - tau_p) to every tap.
void accumulate_path(CirTensor& cir, const PathComponent& path, cx gain, const ArrayGeometry& rx,
                     const ArrayGeometry& tx, const RaisedCosinePulse& pulse);

}  // namespace isac
