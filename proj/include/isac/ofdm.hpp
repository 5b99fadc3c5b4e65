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

#include <cstdint>
#include <optional>
#include <vector>

namespace isac {

/// Gray-mapped square 16-QAM with unit average energy; bits are taken LSB first.
cx qam16_map(unsigned bits);
unsigned qam16_demap(cx symbol);

struct OfdmLinkParams {
  Index subcarriers = 1024;   // N_D
  Index cyclic_prefix = 32;
  Index guard = 32;           // zero padding after each impulse pilot
  Index taps = 32;            // L
  double sampling_period = 5e-9;
  double frame_interval = 0.0;  // spacing of the impulse pilots (T_D)
  Index frames = 1;           // data frames, frame k follows the pilot at t = k T_D
  double power = 1e3;         // transmit power
  double noise_power = 0.0;
};

struct BerCount {
  std::uint64_t errors = 0;
  std::uint64_t bits = 0;
  double ber() const { return bits ? static_cast<double>(errors) / static_cast<double>(bits) : 0.0; }
};

/// Beam-steered scalar channel taps of one Doppler group (LoS or one cluster).
struct DopplerGroup {
  double frequency = 0.0;
  VectorXcd taps;  // L taps at t = 0
};

/// Splits the beamformed channel w^H H_l(t) f into groups that share a Doppler frequency.
/// The LoS group, when present, is first.
std::vector<DopplerGroup> beamformed_groups(const ChannelRealization& ch, const VectorXcd& w_ut, const VectorXcd& f_cu,
                                            const RaisedCosinePulse& pulse, Index taps);

/// Uncoded 16-QAM CP-OFDM downlink over the time-varying beamformed channel. Each data frame is
/// equalized with the LoS response at its preceding impulse pilot. With a frequency estimate the
/// receiver de-rotates sample n by exp(-j 2 pi f (t_n - t_pilot)) before the DFT.
BerCount simulate_ofdm_ber(const std::vector<DopplerGroup>& groups, std::optional<double> f_hat,
                           const OfdmLinkParams& params, std::uint64_t seed);

/// Mean per-subcarrier |H_k|^2 of the LoS group at t = 0.
double los_subcarrier_gain(const std::vector<DopplerGroup>& groups);

}  // namespace isac
