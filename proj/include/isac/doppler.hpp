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

#include "isac/array_channel.hpp"
#include "isac/recovery.hpp"

#include <cstdint>
#include <vector>

namespace isac {

struct DataPhaseBeams {
  std::vector<VectorXcd> ut_beams;  // w_{D,u}
  MatrixXcd cu_beams;               // F_D = [f_{D,1} ... f_{D,U}]
};

/// Beam steering towards the estimated LoS angles.
DataPhaseBeams steer_beams(const std::vector<LosEstimate>& estimates, const ArrayGeometry& ut, const ArrayGeometry& cu);

/// Greedy pick of at most n_rf UTs in input order. A UT is accepted when, against every
/// accepted UT, its CU-side angle distance is >= 2 / n_x or its delay distance is >= 2 tau_p.
std::vector<Index> schedule_uts(const std::vector<LosEstimate>& estimates, Index n_rf, Index n_x, double tau_p);

struct DopplerSeries {
  VectorXcd samples;
  double interval = 0.0;  // T_D
};

struct ImpulsePilotParams {
  Index pilots = 2;          // P_D
  Index frame_length = 1024; // N_D
  Index taps = 32;           // L
  double sampling_period = 5e-9;
  double noise_power = 0.0;
  std::vector<double> powers;  // P^UT per UT, watts

  double interval() const { return static_cast<double>(2 * taps + frame_length) * sampling_period; }
};

/// Uplink impulse pilots from every UT through its full channel; RF chain u samples the
/// combined signal at the estimated LoS tap of UT u. Channels hold downlink (UT x CU) paths.
std::vector<DopplerSeries> simulate_impulse_pilots(const std::vector<ChannelRealization>& channels,
                                                   const DataPhaseBeams& beams, const std::vector<Index>& sample_taps,
                                                   const ImpulsePilotParams& params, const RaisedCosinePulse& pulse,
                                                   std::uint64_t seed);

/// w_1 .. w_K of the weighted normalized autocorrelation predictor, K = floor(P / 2).
VectorXd wnalp_weights(Index pilots);

/// Frequency estimate in Hz; no gating.
double wnalp(const VectorXcd& y, double interval);

bool passes_energy_gate(const DopplerSeries& series, double noise_power);

struct DopplerEstimate {
  double frequency = 0.0;
  bool reliable = true;  // false when the energy gate rejected the series
};

DopplerEstimate estimate_doppler(const DopplerSeries& series, double noise_power);

/// 6 / (snr P (P^2 - 1)), in normalized rad^2.
double crb_reference(double snr, Index pilots);

/// Sample n multiplied by exp(-j 2 pi f (t0 + n T_s)).
VectorXcd compensate_doppler(const VectorXcd& x, double frequency, double sampling_period, double t0 = 0.0);

}  // namespace isac
