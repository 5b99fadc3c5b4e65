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

#include "isac/metrics.hpp"

#include <unsupported/Eigen/FFT>

#include <vector>

namespace isac {

double nmse(const CirTensor& truth, const CirTensor& estimate) {
  if (truth.length() != estimate.length() || truth.rows() != estimate.rows() || truth.cols() != estimate.cols())
    throw ConfigError("nmse: shapes differ");
  double err = 0.0;
  double ref = 0.0;
  for (Index l = 0; l < truth.length(); ++l) {
    err += (estimate[l] - truth[l]).squaredNorm();
    ref += truth[l].squaredNorm();
  }
  if (!(ref > 0.0)) throw NumericalError("nmse: zero-energy reference channel");
  return err / ref;
}

double ase_beams(const CirTensor& h, const VectorXcd& w, const VectorXcd& f, double snr_scale, Index n_sub) {
  if (n_sub < h.length()) throw ConfigError("ase: N_D must be >= L");
  std::vector<cx> taps(static_cast<std::size_t>(n_sub), cx(0.0));
  for (Index l = 0; l < h.length(); ++l) taps[static_cast<std::size_t>(l)] = w.dot(h[l] * f);
  std::vector<cx> bins;
  Eigen::FFT<double> fft;
  fft.fwd(bins, taps);
  double acc = 0.0;
  for (const cx& b : bins) acc += std::log2(1.0 + snr_scale * std::norm(b));
  return acc / static_cast<double>(n_sub);
}

double ase(const CirTensor& h, double mu_ut, double nu_ut, double mu_cu, double nu_cu, const ArrayGeometry& ut,
           const ArrayGeometry& cu, double power_dl, double noise_power, Index n_rf, Index n_sub) {
  if (!(noise_power > 0.0) || n_rf < 1) throw ConfigError("ase: noise power and N_RF must be positive");
  const VectorXcd w = upa_steering_virtual(mu_ut, nu_ut, ut);
  const VectorXcd f = upa_steering_virtual(mu_cu, nu_cu, cu);
  return ase_beams(h, w, f, power_dl / (noise_power * static_cast<double>(n_rf)), n_sub);
}

}  // namespace isac
