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
#include "isac/waveform.hpp"

#include <cstdint>
#include <limits>

namespace isac {

/// Uniform mid-rise quantizer with 2^bits levels per real component.
/// bits == 0 stands for an ideal (infinite-resolution) converter.
struct QuantizerSpec {
  int bits = 0;
  double clip_scale = 3.0;  // clip level in multiples of the per-component RMS

  bool infinite() const { return bits <= 0; }
  static QuantizerSpec ideal() { return {0, 3.0}; }
  static QuantizerSpec with_bits(int b, double clip = 3.0) { return {b, clip}; }
};

/// Quantizes each real component independently with clip = clip_scale * RMS(component).
MatrixXcd quantize(const MatrixXcd& x, const QuantizerSpec& spec);

/// Same quantizer with explicit clip levels for the real and imaginary parts.
MatrixXcd quantize_fixed(const MatrixXcd& x, int bits, double clip_re, double clip_im);

/// Scalar mid-rise quantizer; exposed for tests.
double quantize_scalar(double x, int bits, double clip);

struct RadarObservation {
  MatrixXcd y;  // N̄ x Q
  double noise_power = 0.0;
};

struct CommObservation {
  VectorXcd y_valid;
  double noise_power = 0.0;
};

/// Y̅ = Q{H̄_SD Φ̄ + N̄}.
RadarObservation simulate_radar_rx(const CirTensor& cir, const MatrixXcd& phi_radar, const QuantizerSpec& q,
                                   double noise_power, std::uint64_t seed);

/// y_n = w_n^H (sum_l H_l p_{n-l} + n_n), restricted to I_valid.
CommObservation simulate_ut_rx(const CirTensor& cir, const PilotFrame& frame, double noise_power,
                               std::uint64_t seed);

/// Noiseless linear convolution sum_l H_l p_{n-l} for 0 <= n < Q, written as a plain loop.
MatrixXcd direct_convolution(const CirTensor& cir, const PilotFrame& frame);

}  // namespace isac
