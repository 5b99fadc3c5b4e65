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

#include "isac/waveform.hpp"
#include "isac/random.hpp"

namespace isac {

void WaveformParams::validate() const {
  if (pilot_length < 1 || taps < 1) throw ConfigError("waveform: P and L must be >= 1");
  if (dwell_cu < 1 || dwell_ut < 1) throw ConfigError("waveform: dwell lengths must be >= 1");
  if (guard < 0) throw ConfigError("waveform: guard must be >= 0");
  if (guard >= std::min(dwell_cu, dwell_ut)) throw ConfigError("waveform: guard must be shorter than both dwell lengths");
  if (ut_offset < 0 || ut_offset >= dwell_ut) throw ConfigError("waveform: UT offset must be in [0, T_RF^UT)");
  if (n_rf < 1) throw ConfigError("waveform: N_RF must be >= 1");
  if (!(power_dl >= 0.0)) throw ConfigError("waveform: P_DL must be non-negative");
}

namespace {

MatrixXcd random_unit_modulus(Rng& rng, Index rows, Index cols) {
  const double scale = 1.0 / std::sqrt(static_cast<double>(rows));
  MatrixXcd out(rows, cols);
  for (Index j = 0; j < cols; ++j)
    for (Index i = 0; i < rows; ++i) out(i, j) = std::polar(scale, uniform_phase(rng));
  return out;
}

// 1-based sub-frame entry for sample k with dwell T and guard G, 0 inside a guard window.
Index subframe_entry(Index k, Index dwell, Index guard, Index count) {
  const Index entry = std::min(k / dwell + 1, count);
  if (entry == count) return entry;
  return (k % dwell < dwell - guard) ? entry : 0;
}

}  // namespace

Codebooks build_codebooks(Index n, Index n_rf, Index n_cb, Index m, Index m_cb, std::uint64_t seed) {
  if (n < 1 || n_rf < 1 || n_cb < 1 || m < 1 || m_cb < 1) throw ConfigError("codebooks: counts must be >= 1");
  Rng rng(seed);
  Codebooks cb;
  for (Index i = 0; i < n_cb; ++i) cb.precoders.push_back(random_unit_modulus(rng, n, n_rf));
  for (Index i = 0; i < m_cb; ++i) cb.combiners.push_back(random_unit_modulus(rng, m, 1));
  return cb;
}

PilotFrame schedule_pilots(const WaveformParams& wp, Index n, Index m, std::uint64_t seed) {
  wp.validate();
  PilotFrame f;
  f.params = wp;
  f.codebooks = build_codebooks(n, wp.n_rf, wp.n_cb(), m, wp.m_cb(), derive_seed(seed, 1));

  // Separate streams so that the symbol draw does not depend on the array sizes.
  Rng sym_rng(derive_seed(seed, 2));
  Rng glitch_rng(derive_seed(seed, 3));
  const Index P = wp.pilot_length;
  const Index Q = wp.q();
  const double amp = std::sqrt(wp.power_dl / static_cast<double>(wp.n_rf));
  std::bernoulli_distribution coin(0.5);

  f.precoder_index.resize(static_cast<std::size_t>(P));
  f.precoders.resize(static_cast<std::size_t>(P));
  f.symbols = MatrixXcd::Zero(wp.n_rf, P);
  f.pilots = MatrixXcd::Zero(n, P);
  for (Index p = 0; p < P; ++p) {
    const Index e = subframe_entry(p, wp.dwell_cu, wp.guard, wp.n_cb());
    f.precoder_index[static_cast<std::size_t>(p)] = e;
    for (Index r = 0; r < wp.n_rf; ++r) {
      const double s = coin(sym_rng) ? amp : -amp;
      if (e != 0) f.symbols(r, p) = s;
    }
    auto& F = f.precoders[static_cast<std::size_t>(p)];
    F = (e != 0) ? f.codebooks.precoders[static_cast<std::size_t>(e - 1)] : random_unit_modulus(glitch_rng, n, wp.n_rf);
    f.pilots.col(p) = F * f.symbols.col(p);
  }

  f.combiner_index.resize(static_cast<std::size_t>(Q));
  f.combiners.resize(m, Q);
  for (Index k = 0; k < Q; ++k) {
    Index e = 1;
    if (k >= wp.ut_offset) e = subframe_entry(k - wp.ut_offset, wp.dwell_ut, wp.guard, wp.m_cb());
    f.combiner_index[static_cast<std::size_t>(k)] = e;
    f.combiners.col(k) =
        (e != 0) ? f.codebooks.combiners[static_cast<std::size_t>(e - 1)] : random_unit_modulus(glitch_rng, m, 1).col(0);
  }
  return f;
}

VectorXcd transmit_pilot(const PilotFrame& frame, Index p) {
  if (p < 0 || p >= frame.params.pilot_length) throw ConfigError("transmit_pilot: sample index out of range");
  return frame.pilots.col(p);
}

MatrixXcd radar_measurement_matrix(const PilotFrame& frame, Index L) {
  const Index N = frame.n();
  const Index P = frame.params.pilot_length;
  const Index Q = P + L - 1;
  MatrixXcd phi = MatrixXcd::Zero(L * N, Q);
  for (Index q = 0; q < Q; ++q)
    for (Index l = 0; l < L; ++l) {
      const Index p = q - l;
      if (p >= 0 && p < P) phi.block(l * N, q, N, 1) = frame.pilots.col(p);
    }
  return phi;
}

std::vector<Index> valid_indices(const PilotFrame& frame) {
  std::vector<Index> out;
  const Index Q = static_cast<Index>(frame.combiner_index.size());
  for (Index k = 0; k < Q; ++k)
    if (!frame.ut_guard(k)) out.push_back(k + 1);
  return out;
}

MeasurementMatrices build_measurement_matrices(const PilotFrame& frame, Index L, bool with_comm) {
  if (L != frame.params.taps) throw ConfigError("measurement matrices: L does not match the pilot frame");
  MeasurementMatrices mm;
  mm.taps = L;
  mm.phi_radar = radar_measurement_matrix(frame, L);
  mm.valid_indices = valid_indices(frame);
  if (!with_comm) return mm;

  const Index M = frame.m();
  const Index LN = mm.phi_radar.rows();
  mm.phi_comm_valid.resize(static_cast<Index>(mm.valid_indices.size()), LN * M);
  for (std::size_t r = 0; r < mm.valid_indices.size(); ++r) {
    const Index q = mm.valid_indices[r] - 1;
    const VectorXcd w = frame.combiners.col(q).conjugate();
    // Row q is (b_q kron w*_{q-1})^T with b_q the q-th column of Φ̄.
    for (Index j = 0; j < LN; ++j)
      mm.phi_comm_valid.block(static_cast<Index>(r), j * M, 1, M) = mm.phi_radar(j, q) * w.transpose();
  }
  return mm;
}

}  // namespace isac
