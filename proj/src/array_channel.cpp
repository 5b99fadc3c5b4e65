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

#include "isac/array_channel.hpp"
#include "isac/random.hpp"

#include <algorithm>
#include <string>

namespace isac {

void ArrayGeometry::validate() const {
  if (n_x < 1 || n_y < 1) throw ConfigError("array: antenna counts must be >= 1");
  if (!(spacing > 0.0)) throw ConfigError("array: spacing must be positive");
  if (kind == ArrayKind::Wsa) {
    if (!(spacing > 0.5)) throw ConfigError("array: WSA spacing must exceed half a wavelength");
  } else if (spacing != 0.5) {
    throw ConfigError("array: CSA/UT spacing must be half a wavelength");
  }
}

VectorXcd upa_steering_virtual(double mu, double nu, const ArrayGeometry& g) {
  const VectorXcd ax = steering_vector(mu, g.n_x, g.spacing);
  if (g.n_y == 1) return ax;
  const VectorXcd ay = steering_vector(nu, g.n_y, g.spacing);
  VectorXcd out(g.size());
  for (Index i = 0; i < g.n_x; ++i) out.segment(i * g.n_y, g.n_y) = ax(i) * ay;
  return out;
}

VectorXcd upa_steering(double azimuth, double elevation, const ArrayGeometry& g) {
  return upa_steering_virtual(virtual_azimuth(azimuth, elevation),
                              virtual_elevation(azimuth, elevation), g);
}

double RaisedCosinePulse::operator()(double tau) const {
  if (std::abs(tau) > half_duration * (1.0 + 1e-12)) return 0.0;
  const double x = tau / symbol_period;
  const double sinc = (x == 0.0) ? 1.0 : std::sin(kPi * x) / (kPi * x);
  const double den = 1.0 - 4.0 * rolloff * rolloff * x * x;
  if (std::abs(den) < 1e-10) {
    // Removable singularity at |x| = 1 / (2 rolloff).
    const double z = 1.0 / (2.0 * rolloff);
    return kPi / 4.0 * std::sin(kPi * z) / (kPi * z);
  }
  return sinc * std::cos(kPi * rolloff * x) / den;
}

std::vector<PathComponent> ChannelRealization::paths() const {
  std::vector<PathComponent> out;
  if (los) out.push_back(*los);
  for (const auto& c : clusters) out.insert(out.end(), c.paths.begin(), c.paths.end());
  return out;
}

double ChannelRealization::max_delay() const {
  double m = 0.0;
  for (const auto& p : paths()) m = std::max(m, p.delay);
  return m;
}

void ScenarioParams::validate() const {
  cu.validate();
  ru.validate();
  ut.validate();
  if (!(carrier_hz > 0.0) || !(sampling_period > 0.0)) throw ConfigError("scenario: fc and Ts must be positive");
  if (taps < 1) throw ConfigError("scenario: L must be >= 1");
  if (!(pulse_rolloff > 0.0 && pulse_rolloff <= 1.0)) throw ConfigError("scenario: roll-off must be in (0, 1]");
  if (!(pulse_half_samples >= 0.0)) throw ConfigError("scenario: tau_p must be >= 0");
  if (comm_clusters < 0 || radar_clusters < 0) throw ConfigError("scenario: cluster counts must be >= 0");
  if (comm_paths < 1 || radar_paths < 1) throw ConfigError("scenario: paths per cluster must be >= 1");
  if (!(ut_distance_min > 0.0 && ut_distance_max >= ut_distance_min))
    throw ConfigError("scenario: invalid UT distance range");
  if (!(target_distance_min > 0.0 && target_distance_max >= target_distance_min))
    throw ConfigError("scenario: invalid target distance range");
  if (!(rcs_min > 0.0 && rcs_max >= rcs_min)) throw ConfigError("scenario: invalid RCS range");
  if (!(doppler_max_hz >= 0.0) || !(angle_spread_deg >= 0.0) || !(delay_spread_samples >= 0.0))
    throw ConfigError("scenario: spreads must be non-negative");
  if (!(central_elevation_max >= 0.0 && central_elevation_max < kPi / 2.0))
    throw ConfigError("scenario: central elevation bound must be in [0, pi/2)");
  if (max_central_delay() < 0.0) throw ConfigError("scenario: L too short for the pulse duration");
  // The largest drawn delay must keep the pulse inside the L taps.
  if (!(max_central_delay() + 0.5 * delay_spread_samples * sampling_period + 2.0 * pulse_half_duration() <
        static_cast<double>(taps) * sampling_period))
    throw ConfigError("scenario: delay spread does not fit into L taps");
}

void check_delay_fit(const ChannelRealization& channel, Index taps, double ts, double tau_p) {
  if (!(channel.max_delay() + 2.0 * tau_p < static_cast<double>(taps) * ts))
    throw ConfigError("channel: max delay + 2 tau_p must be below L T_s");
}

namespace {

struct Direction {
  double azimuth;
  double elevation;
};

// Folds a negative elevation back into [0, pi/2) by flipping the azimuth;
// both describe the same direction cosines.
Direction normalize(double azimuth, double elevation) {
  if (elevation < 0.0) {
    elevation = -elevation;
    azimuth += kPi;
  }
  azimuth = std::fmod(azimuth, 2.0 * kPi);
  if (azimuth < 0.0) azimuth += 2.0 * kPi;
  return {azimuth, elevation};
}

Direction draw_central(Rng& rng, const ScenarioParams& p) {
  const double azi = uniform(rng, 0.0, 2.0 * kPi);
  const double ele = uniform(rng, 0.0, p.central_elevation_max);
  return {azi, ele};
}

Direction draw_offset(Rng& rng, const ScenarioParams& p, Direction c, bool spread) {
  if (!spread) return c;
  const double half = 0.5 * p.angle_spread_deg * kPi / 180.0;
  const double azi = c.azimuth + uniform(rng, -half, half);
  const double ele = c.elevation + uniform(rng, -half, half);
  return normalize(azi, ele);
}

double draw_delay_offset(Rng& rng, const ScenarioParams& p, double central, bool spread) {
  if (!spread) return central;
  const double half = 0.5 * p.delay_spread_samples * p.sampling_period;
  return std::max(0.0, central + uniform(rng, -half, half));
}

}  // namespace

ChannelRealization generate_comm_channel(const ScenarioParams& p, std::uint64_t seed) {
  p.validate();
  Rng rng(seed);
  ChannelRealization ch;
  ch.kind = LinkKind::CommDownlink;
  ch.rx = p.ut;
  ch.tx = p.cu;
  ch.rician_factor_db = p.rician_factor_db;
  ch.distance = uniform(rng, p.ut_distance_min, p.ut_distance_max);

  const double lambda = p.wavelength();
  const double los_mag = lambda / (4.0 * kPi * ch.distance);

  PathComponent los;
  const Direction aoa = draw_central(rng, p);
  const Direction aod = draw_central(rng, p);
  los.rx_azimuth = aoa.azimuth;
  los.rx_elevation = aoa.elevation;
  los.tx_azimuth = aod.azimuth;
  los.tx_elevation = aod.elevation;
  los.delay = uniform(rng, 0.0, p.max_central_delay());
  los.doppler = uniform(rng, -p.doppler_max_hz, p.doppler_max_hz);
  los.gain = std::polar(los_mag, uniform_phase(rng));
  ch.los = los;

  const double kf = db_to_linear(p.rician_factor_db);
  const double nlos_mag =
      los_mag / std::sqrt(kf * static_cast<double>(std::max<Index>(p.comm_clusters, 1) * p.comm_paths));
  const bool spread = p.comm_paths > 1;
  for (Index c = 0; c < p.comm_clusters; ++c) {
    Cluster cl;
    const Direction caoa = draw_central(rng, p);
    const Direction caod = draw_central(rng, p);
    cl.central_azimuth = caod.azimuth;
    cl.central_elevation = caod.elevation;
    cl.central_delay = uniform(rng, 0.0, p.max_central_delay());
    cl.doppler = uniform(rng, -p.doppler_max_hz, p.doppler_max_hz);
    for (Index k = 0; k < p.comm_paths; ++k) {
      PathComponent path;
      const Direction r = draw_offset(rng, p, caoa, spread);
      const Direction t = draw_offset(rng, p, caod, spread);
      path.rx_azimuth = r.azimuth;
      path.rx_elevation = r.elevation;
      path.tx_azimuth = t.azimuth;
      path.tx_elevation = t.elevation;
      path.delay = draw_delay_offset(rng, p, cl.central_delay, spread);
      path.doppler = cl.doppler;
      path.gain = std::polar(nlos_mag, uniform_phase(rng));
      cl.paths.push_back(path);
    }
    ch.clusters.push_back(std::move(cl));
  }
  check_delay_fit(ch, p.taps, p.sampling_period, p.pulse_half_duration());
  return ch;
}

ChannelRealization generate_radar_channel(const ScenarioParams& p, std::uint64_t seed) {
  p.validate();
  Rng rng(seed);
  ChannelRealization ch;
  ch.kind = LinkKind::Radar;
  ch.rx = p.ru;
  ch.tx = p.cu;

  const double lambda = p.wavelength();
  const double four_pi_cubed = std::pow(4.0 * kPi, 3);
  const bool spread = p.radar_paths > 1;
  for (Index c = 0; c < p.radar_clusters; ++c) {
    Cluster cl;
    const Direction dir = draw_central(rng, p);
    cl.central_azimuth = dir.azimuth;
    cl.central_elevation = dir.elevation;
    cl.central_delay = uniform(rng, 0.0, p.max_central_delay());
    cl.doppler = uniform(rng, -p.doppler_max_hz, p.doppler_max_hz);
    cl.distance = uniform(rng, p.target_distance_min, p.target_distance_max);
    cl.rcs = uniform(rng, p.rcs_min, p.rcs_max);
    const double mag = std::sqrt(cl.rcs * lambda * lambda /
                                 (static_cast<double>(p.radar_paths) * four_pi_cubed * std::pow(cl.distance, 4)));
    for (Index k = 0; k < p.radar_paths; ++k) {
      PathComponent path;
      // Co-located CU and RU see each scatterer at the same angle.
      const Direction d = draw_offset(rng, p, dir, spread);
      path.rx_azimuth = path.tx_azimuth = d.azimuth;
      path.rx_elevation = path.tx_elevation = d.elevation;
      path.delay = draw_delay_offset(rng, p, cl.central_delay, spread);
      path.doppler = cl.doppler;
      path.gain = std::polar(mag, uniform_phase(rng));
      cl.paths.push_back(path);
    }
    ch.clusters.push_back(std::move(cl));
  }
  check_delay_fit(ch, p.taps, p.sampling_period, p.pulse_half_duration());
  return ch;
}

MatrixXcd CirTensor::spatial_delay() const {
  MatrixXcd sd(rows(), length() * cols());
  for (Index l = 0; l < length(); ++l) sd.middleCols(l * cols(), cols()) = (*this)[l];
  return sd;
}

CirTensor CirTensor::from_spatial_delay(const MatrixXcd& sd, Index length, double ts) {
  if (length < 1 || sd.cols() % length != 0) throw ConfigError("cir: column count is not a multiple of L");
  const Index n = sd.cols() / length;
  CirTensor out(length, sd.rows(), n, ts);
  for (Index l = 0; l < length; ++l) out[l] = sd.middleCols(l * n, n);
  return out;
}

double CirTensor::squared_norm() const {
  double s = 0.0;
  for (const auto& h : taps) s += h.squaredNorm();
  return s;
}

void accumulate_path(CirTensor& cir, const PathComponent& path, cx gain, const ArrayGeometry& rx,
                     const ArrayGeometry& tx, const RaisedCosinePulse& pulse) {
  const double ts = cir.sampling_period;
  const Index first = std::max<Index>(0, static_cast<Index>(std::floor(path.delay / ts)) - 1);
  const Index last = std::min<Index>(cir.length() - 1,
                                     static_cast<Index>(std::ceil((path.delay + 2.0 * pulse.half_duration) / ts)) + 1);
  if (first > last) return;
  const VectorXcd ar = upa_steering_virtual(path.rx_mu(), path.rx_nu(), rx);
  const VectorXcd at = upa_steering_virtual(path.tx_mu(), path.tx_nu(), tx);
  const MatrixXcd outer = gain * ar * at.adjoint();
  for (Index l = first; l <= last; ++l) {
    const double w = pulse(static_cast<double>(l) * ts - path.delay - pulse.half_duration);
    if (w != 0.0) cir[l] += w * outer;
  }
}

CirTensor sample_cir(const ChannelRealization& ch, double t, const RaisedCosinePulse& pulse, Index taps) {
  CirTensor cir(taps, ch.rx.size(), ch.tx.size(), pulse.symbol_period);
  for (const auto& path : ch.paths()) accumulate_path(cir, path, path.gain_at(t), ch.rx, ch.tx, pulse);
  return cir;
}

}  // namespace isac
