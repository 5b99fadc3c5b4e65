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

#include "isac/link_sim.hpp"
#include "isac/random.hpp"

#include <algorithm>

namespace isac {

double quantize_scalar(double x, int bits, double clip) {
  if (bits <= 0) return x;
  if (!(clip > 0.0)) return 0.0;
  const double levels = std::ldexp(1.0, bits);
  const double step = 2.0 * clip / levels;
  const double idx = std::clamp(std::floor((x + clip) / step), 0.0, levels - 1.0);
  return -clip + (idx + 0.5) * step;
}

MatrixXcd quantize_fixed(const MatrixXcd& x, int bits, double clip_re, double clip_im) {
  if (bits <= 0) return x;
  MatrixXcd out(x.rows(), x.cols());
  for (Index j = 0; j < x.cols(); ++j)
    for (Index i = 0; i < x.rows(); ++i)
      out(i, j) = {quantize_scalar(x(i, j).real(), bits, clip_re), quantize_scalar(x(i, j).imag(), bits, clip_im)};
  return out;
}

MatrixXcd quantize(const MatrixXcd& x, const QuantizerSpec& spec) {
  if (spec.infinite()) return x;
  if (!(spec.clip_scale > 0.0)) throw ConfigError("quantizer: clip scale must be positive");
  if (x.size() == 0) return x;
  const double n = static_cast<double>(x.size());
  const double rms_re = std::sqrt(x.real().array().square().sum() / n);
  const double rms_im = std::sqrt(x.imag().array().square().sum() / n);
  return quantize_fixed(x, spec.bits, spec.clip_scale * rms_re, spec.clip_scale * rms_im);
}

RadarObservation simulate_radar_rx(const CirTensor& cir, const MatrixXcd& phi, const QuantizerSpec& q,
                                   double noise_power, std::uint64_t seed) {
  const MatrixXcd sd = cir.spatial_delay();
  if (sd.cols() != phi.rows()) throw ConfigError("radar rx: CIR and measurement matrix do not conform");
  MatrixXcd y = sd * phi;
  if (noise_power > 0.0) {
    Rng rng(seed);
    y += complex_gaussian(rng, y.rows(), y.cols(), noise_power);
  }
  return {quantize(y, q), noise_power};
}

MatrixXcd direct_convolution(const CirTensor& cir, const PilotFrame& frame) {
  const Index L = cir.length();
  const Index P = frame.params.pilot_length;
  const Index Q = P + L - 1;
  MatrixXcd y = MatrixXcd::Zero(cir.rows(), Q);
  for (Index n = 0; n < Q; ++n)
    for (Index l = 0; l < L; ++l) {
      const Index p = n - l;
      if (p < 0 || p >= P) continue;
      for (Index i = 0; i < cir.rows(); ++i) {
        cx acc = 0.0;
        for (Index k = 0; k < cir.cols(); ++k) acc += cir[l](i, k) * frame.pilots(k, p);
        y(i, n) += acc;
      }
    }
  return y;
}

CommObservation simulate_ut_rx(const CirTensor& cir, const PilotFrame& frame, double noise_power,
                               std::uint64_t seed) {
  if (cir.cols() != frame.n() || cir.rows() != frame.m()) throw ConfigError("ut rx: CIR and pilot frame do not conform");
  const Index L = cir.length();
  const Index Q = frame.params.pilot_length + L - 1;
  if (frame.combiners.cols() != Q) throw ConfigError("ut rx: pilot frame was scheduled for a different L");
  const MatrixXcd received = cir.spatial_delay() * radar_measurement_matrix(frame, L);  // M x Q
  Rng rng(seed);
  const auto idx = valid_indices(frame);
  CommObservation obs;
  obs.noise_power = noise_power;
  obs.y_valid.resize(static_cast<Index>(idx.size()));
  // Noise is drawn for every sample so that I_valid does not shift the stream.
  std::size_t r = 0;
  for (Index k = 0; k < Q; ++k) {
    VectorXcd v = received.col(k);
    if (noise_power > 0.0) v += complex_gaussian(rng, v.size(), 1, noise_power);
    if (r < idx.size() && idx[r] == k + 1) obs.y_valid(static_cast<Index>(r++)) = frame.combiners.col(k).dot(v);
  }
  return obs;
}

}  // namespace isac
