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

#include "catch2/catch_amalgamated.hpp"
#include "isac/link_sim.hpp"
#include "isac/random.hpp"
#include "oracles.hpp"

#include <set>

using namespace isac;
using Catch::Approx;

namespace {

PilotFrame frame(Index P, Index L, Index n, Index m, std::uint64_t seed) {
  WaveformParams w;
  w.pilot_length = P;
  w.taps = L;
  w.dwell_cu = 12;
  w.dwell_ut = 9;
  w.guard = 3;
  w.n_rf = std::min<Index>(2, n);
  w.power_dl = 4.0;
  return schedule_pilots(w, n, m, seed);
}

CirTensor random_cir(Rng& rng, Index L, Index rows, Index cols) {
  CirTensor c(L, rows, cols, 5e-9);
  for (Index l = 0; l < L; ++l) c[l] = complex_gaussian(rng, rows, cols, 1.0);
  return c;
}

}  // namespace

TEST_CASE("noiseless radar observation", "[link]") {
  Rng rng(1);
  const PilotFrame f = frame(40, 5, 4, 2, 3);
  const MatrixXcd phi = radar_measurement_matrix(f, 5);
  const CirTensor zero(5, 3, 4, 5e-9);
  CHECK(simulate_radar_rx(zero, phi, QuantizerSpec::ideal(), 0.0, 1).y.isZero(0.0));
  CHECK(simulate_radar_rx(zero, phi, QuantizerSpec::with_bits(4), 0.0, 1).y.isZero(0.0));

  const CirTensor c = random_cir(rng, 5, 3, 4);
  const MatrixXcd y = simulate_radar_rx(c, phi, QuantizerSpec::ideal(), 0.0, 1).y;
  CHECK((y - c.spatial_delay() * phi).norm() == 0.0);
  CHECK((y - direct_convolution(c, f)).norm() < 1e-12 * y.norm());
}

TEST_CASE("one-bit quantizer has two levels per component", "[link]") {
  Rng rng(2);
  const PilotFrame f = frame(40, 5, 4, 2, 3);
  const CirTensor c = random_cir(rng, 5, 3, 4);
  const MatrixXcd y = simulate_radar_rx(c, radar_measurement_matrix(f, 5), QuantizerSpec::with_bits(1), 0.5, 9).y;
  std::set<double> re, im;
  for (Index i = 0; i < y.size(); ++i) {
    re.insert(y.data()[i].real());
    im.insert(y.data()[i].imag());
  }
  CHECK(re.size() == 2);
  CHECK(im.size() == 2);
}

TEST_CASE("scalar quantizer", "[link]") {
  CHECK(quantize_scalar(0.3, 1, 1.0) == 0.5);
  CHECK(quantize_scalar(-0.3, 1, 1.0) == -0.5);
  CHECK(quantize_scalar(7.0, 3, 1.0) == Approx(0.875));
  CHECK(quantize_scalar(-7.0, 3, 1.0) == Approx(-0.875));
  CHECK(quantize_scalar(0.123, 0, 1.0) == 0.123);
  Rng rng(3);
  for (int b = 1; b <= 10; ++b)
    for (int i = 0; i < 200; ++i) {
      const double q = quantize_scalar(uniform(rng, -3.0, 3.0), b, 1.5);
      CHECK(quantize_scalar(q, b, 1.5) == q);
    }
}

// Expected per-component distortion of the clipped mid-rise quantizer on N(0, v), by quadrature.
double expected_sqnr_db(int bits, double clip_scale) {
  const double sd = std::sqrt(0.5);
  const double clip = clip_scale * sd;
  double err = 0.0;
  const int steps = 400000;
  const double lo = -12.0 * sd, hi = 12.0 * sd, dx = (hi - lo) / steps;
  for (int i = 0; i < steps; ++i) {
    const double x = lo + (i + 0.5) * dx;
    const double pdf = std::exp(-x * x / (2.0 * sd * sd)) / (sd * std::sqrt(2.0 * kPi));
    const double e = quantize_scalar(x, bits, clip) - x;
    err += e * e * pdf * dx;
  }
  return linear_to_db(0.5 / err);
}

TEST_CASE("five-bit quantizer distortion on Gaussian input", "[link]") {
  Rng rng(4);
  const MatrixXcd x = complex_gaussian(rng, 1000, 100, 1.0);
  const MatrixXcd q = quantize(x, QuantizerSpec::with_bits(5, 3.0));
  const double sqnr = linear_to_db(x.squaredNorm() / (q - x).squaredNorm());
  const double expected = expected_sqnr_db(5, 3.0);
  CHECK(sqnr == Approx(expected).margin(0.2));
  CHECK(sqnr > 24.0);
  CHECK(quantize(x, QuantizerSpec::ideal()) == x);
}

TEST_CASE("UT observation", "[link]") {
  Rng rng(5);
  const PilotFrame f = frame(30, 4, 4, 3, 6);
  const CirTensor zero(4, 3, 4, 5e-9);
  CHECK(simulate_ut_rx(zero, f, 0.0, 1).y_valid.isZero(0.0));

  // P = 1, L = 1: y_0 = w_0^H H_0 p_0.
  WaveformParams w;
  w.pilot_length = 1;
  w.taps = 1;
  w.dwell_cu = 2;
  w.dwell_ut = 2;
  w.guard = 1;
  w.n_rf = 1;
  const PilotFrame one = schedule_pilots(w, 3, 2, 7);
  CirTensor h(1, 2, 3, 5e-9);
  const VectorXcd a = complex_gaussian(rng, 2, 1, 1.0);
  const VectorXcd b = complex_gaussian(rng, 3, 1, 1.0);
  h[0] = a * b.adjoint();
  const CommObservation obs = simulate_ut_rx(h, one, 0.0, 1);
  REQUIRE(obs.y_valid.size() == 1);
  CHECK(std::abs(obs.y_valid(0) - one.combiners.col(0).dot(h[0] * one.pilots.col(0))) < 1e-14);

  const CirTensor c = random_cir(rng, 4, 3, 4);
  std::vector<MatrixXcd> taps(c.taps.begin(), c.taps.end());
  const MatrixXcd full = oracle::convolve(taps, f.pilots);
  const CommObservation clean = simulate_ut_rx(c, f, 0.0, 1);
  const auto idx = valid_indices(f);
  for (std::size_t r = 0; r < idx.size(); ++r) {
    const Index n = idx[r] - 1;
    CHECK(std::abs(clean.y_valid(static_cast<Index>(r)) - f.combiners.col(n).dot(full.col(n))) < 1e-12);
  }
}

TEST_CASE("UT noise variance after unit-norm combining", "[link]") {
  WaveformParams w;
  w.pilot_length = 10000;
  w.taps = 1;
  w.dwell_cu = 10000;
  w.dwell_ut = 10000;
  w.guard = 0;
  w.n_rf = 1;
  const PilotFrame f = schedule_pilots(w, 2, 4, 8);
  const CirTensor zero(1, 4, 2, 5e-9);
  const double sigma2 = 0.37;
  const CommObservation obs = simulate_ut_rx(zero, f, sigma2, 12);
  REQUIRE(obs.y_valid.size() == 10000);
  CHECK(obs.y_valid.squaredNorm() / 10000.0 == Approx(sigma2).epsilon(0.05));
}
