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
#include "isac/dictionary.hpp"
#include "isac/link_sim.hpp"
#include "isac/waveform.hpp"

#include <functional>
#include <utility>
#include <vector>

namespace isac {

/// Column-major unpacking of a 1-based linear index: J = ceil(z / X), I = z - (J - 1) X.
std::pair<Index, Index> ind2sub(Index x, Index y, Index z);

/// Adds the multiple of 1/spacing that brings mu_fine closest to mu_coarse.
double resolve_ambiguity(double mu_coarse, double mu_fine, double spacing);

struct TraceEntry {
  Index iteration = 0;
  Index atom = 0;  // 1-based column of the sensing matrix
  double residual_norm = 0.0;
};

struct RecoveryResult {
  std::vector<Index> support;  // 1-based atom indices, selection order
  std::vector<double> delays;  // seconds
  std::vector<double> azimuths;
  std::vector<double> elevations;
  std::vector<Index> taps;     // 0-based delay tap of each atom
  VectorXcd gains;
  CirTensor cir_estimate;
  Index iterations = 0;        // completed iterations
  bool early_stop = false;
  std::vector<TraceEntry> trace;
  /// (iteration count, reconstructed CIR) for every requested snapshot that was reached.
  std::vector<std::pair<Index, CirTensor>> snapshots;
};

/// Problem data shared by the greedy solvers.
struct RadarProblem {
  const MatrixXcd* y = nullptr;    // N̄ x Q
  const MatrixXcd* phi = nullptr;  // LN x Q
  const Dictionary* wsa = nullptr;
  const Dictionary* cu = nullptr;
  Index taps = 0;
  double sampling_period = 5e-9;
  double pulse_half_duration = 30e-9;
};

struct OmpOptions {
  Index max_iters = 150;
  bool refine = true;                  // false: plain OMP with grid readout
  std::vector<Index> snapshot_iters;   // reconstructions to keep along the way
  bool trace = false;
  double independence_tol = 1e-10;     // relative residual norm of a new atom below which it is dropped
  /// What to do with a numerically dependent atom: stop (default) or skip it and keep iterating.
  bool stop_on_dependent = true;
};

RecoveryResult omp_recover(const RadarProblem& problem, const OmpOptions& options);

RecoveryResult omp_sr(const RadarObservation& obs, const MeasurementMatrices& mm, const Dictionary& wsa,
                      const Dictionary& cu, Index max_iters, double ts, double tau_p);

RecoveryResult omp_plain(const RadarObservation& obs, const MeasurementMatrices& mm, const Dictionary& wsa,
                         const Dictionary& cu, Index max_iters, double ts, double tau_p);

/// Greedy selection over delay taps with a joint least-squares refit of every selected tap.
RecoveryResult block_omp(const RadarObservation& obs, const MeasurementMatrices& mm, Index taps, Index block_iters,
                         double ts, double tau_p);

struct LosEstimate {
  double mu_ut = 0.0;
  double nu_ut = 0.0;
  double mu_cu = 0.0;
  double nu_cu = 0.0;
  double tau = 0.0;
  Index tap = 0;  // 0-based delay tap, i_d - 1
  double peak = 0.0;
};

/// Single correlation step over ((I_L kron A_CU^T) kron A_UT^H) Φ_valid^H y_valid.
LosEstimate ce_ut(const CommObservation& obs, const MeasurementMatrices& mm, const Dictionary& ut,
                  const Dictionary& cu, double ts, double tau_p);

/// Same estimate without forming Φ_valid: uses the frame's combiners and Φ̄ directly.
LosEstimate ce_ut_fast(const CommObservation& obs, const PilotFrame& frame, const MatrixXcd& phi_radar,
                       const Dictionary& ut, const Dictionary& cu, double ts, double tau_p);

}  // namespace isac
