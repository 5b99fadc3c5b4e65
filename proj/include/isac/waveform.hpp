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
#include <vector>

namespace isac {

/// Pilot-block parameters. Lengths are in samples; power in watts.
struct WaveformParams {
  Index pilot_length = 200;  // P
  Index taps = 32;           // L
  Index dwell_cu = 30;       // T_RF at the CU
  Index dwell_ut = 30;       // T_RF at the UT
  Index guard = 10;          // T_GI
  Index ut_offset = 0;       // UT sub-frame boundaries lag the CU ones by this many samples
  Index n_rf = 4;
  double power_dl = 1e3;     // P_DL

  Index q() const { return pilot_length + taps - 1; }
  Index n_cb() const { return (pilot_length + dwell_cu - 1) / dwell_cu; }
  Index m_cb() const { return (q() + dwell_ut - 1) / dwell_ut; }
  void validate() const;
};

struct Codebooks {
  std::vector<MatrixXcd> precoders;  // N x N_RF, entries exp(j phi) / sqrt(N)
  std::vector<VectorXcd> combiners;  // M x 1, entries exp(j phi) / sqrt(M)
};

Codebooks build_codebooks(Index n, Index n_rf, Index n_cb, Index m, Index m_cb, std::uint64_t seed);

struct PilotFrame {
  WaveformParams params;
  Codebooks codebooks;
  std::vector<Index> precoder_index;  // 1-based codebook entry per pilot sample, 0 = reconfiguring
  std::vector<Index> combiner_index;  // 1-based codebook entry per receive sample, 0 = reconfiguring
  std::vector<MatrixXcd> precoders;   // F_p, random unit-modulus while reconfiguring
  MatrixXcd symbols;                  // s_p as columns, N_RF x P
  MatrixXcd pilots;                   // p_p = F_p s_p as columns, N x P
  MatrixXcd combiners;                // w_n as columns, M x Q

  Index n() const { return pilots.rows(); }
  Index m() const { return combiners.rows(); }
  bool cu_guard(Index p) const { return precoder_index[static_cast<std::size_t>(p)] == 0; }
  bool ut_guard(Index n) const { return combiner_index[static_cast<std::size_t>(n)] == 0; }
};

/// n: CU antennas, m: UT antennas.
PilotFrame schedule_pilots(const WaveformParams& params, Index n, Index m, std::uint64_t seed);

/// p_p for 0 <= p < P.
VectorXcd transmit_pilot(const PilotFrame& frame, Index p);

struct MeasurementMatrices {
  MatrixXcd phi_radar;              // LN x Q, column q-1 stacks [p_{q-1}; ...; p_{q-L}]
  MatrixXcd phi_comm_valid;         // card(I_valid) x LNM
  std::vector<Index> valid_indices; // 1-based rows of the full comm measurement matrix
  Index taps = 0;
};

/// Φ̄ alone (the radar path never needs the comm matrix).
MatrixXcd radar_measurement_matrix(const PilotFrame& frame, Index taps);

/// Ordered 1-based I_valid.
std::vector<Index> valid_indices(const PilotFrame& frame);

MeasurementMatrices build_measurement_matrices(const PilotFrame& frame, Index taps, bool with_comm = true);

}  // namespace isac
