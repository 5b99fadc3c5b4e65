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
#include "isac/dictionary.hpp"
#include "isac/random.hpp"
#include "oracles.hpp"

using namespace isac;
using Catch::Approx;

TEST_CASE("Dirichlet kernel against the direct sum", "[dictionary]") {
  Rng rng(1);
  for (int i = 0; i < 300; ++i) {
    const Index n = std::uniform_int_distribution<Index>(1, 32)(rng);
    const double x = uniform(rng, -20.0, 20.0);
    CHECK(std::abs(dirichlet(n, x)) == Approx(oracle::dirichlet_abs(n, x)).margin(1e-12));
  }
  CHECK(dirichlet(8, 0.0) == 1.0);
  CHECK(dirichlet(8, 2.0 * kPi) == -1.0);
  CHECK(dirichlet(7, 2.0 * kPi) == 1.0);
}

TEST_CASE("correlation profile peak, nulls and period", "[dictionary]") {
  const double mu = 0.21;
  const Index n = 8;
  const double s = 1.5;
  VectorXd alpha(3);
  alpha << mu, mu + 1.0 / (n * s), mu + 3.0 / (n * s);
  const VectorXd v = correlation_profile(mu, alpha, n, s);
  CHECK(v(0) == Approx(1.0));
  CHECK(v(1) < 1e-12);
  CHECK(v(2) < 1e-12);

  const VectorXd grid = VectorXd::LinSpaced(101, -1.0, 1.0);
  const VectorXd shifted = (grid.array() + 1.0 / s).matrix();
  CHECK((correlation_profile(mu, grid, n, s) - correlation_profile(mu, shifted, n, s)).cwiseAbs().maxCoeff() < 1e-10);

  // The profile is the magnitude of the inner product of two steering vectors.
  for (Index i = 0; i < grid.size(); ++i) {
    const double direct = std::abs(steering_vector<double>(mu, n, s).dot(steering_vector<double>(grid(i), n, s)));
    CHECK(correlation_profile(mu, grid.segment(i, 1), n, s)(0) == Approx(direct).margin(1e-12));
  }
}

TEST_CASE("ambiguity sets", "[dictionary]") {
  CHECK(ambiguity_set(0.3, 0.5) == std::vector<double>{0.3});
  const auto a = ambiguity_set(0.5, 1.5);
  REQUIRE(a.size() == 3);
  CHECK(a[0] == Approx(-5.0 / 6.0));
  CHECK(a[1] == Approx(-1.0 / 6.0));
  CHECK(a[2] == Approx(0.5));
  CHECK(ambiguity_set(-1.0 + 1e-6, 1.5).size() == 3);
  for (double m : ambiguity_set(0.1, 2.0)) CHECK(std::abs(std::remainder(m - 0.1, 0.5)) < 1e-12);
}

TEST_CASE("angular grid and critical sampling", "[dictionary]") {
  const VectorXd g = angular_grid<double>(4, 1.5);
  CHECK(g(0) == Approx(-1.0));
  CHECK(g(1) == Approx(-5.0 / 6.0));
  CHECK(g(2) == Approx(-2.0 / 3.0));
  CHECK(g(3) == Approx(-0.5));

  for (Index n : {1, 2, 5, 8, 16}) {
    const Dictionary d = build_dictionary(ArrayGeometry::csa(n), n);
    CHECK((d.matrix.adjoint() * d.matrix).isIdentity(1e-12));
  }
  const Dictionary upa = build_dictionary(ArrayGeometry::csa(4, 2), 4, 2);
  CHECK(upa.atoms() == 8);
  CHECK((upa.matrix.adjoint() * upa.matrix).isIdentity(1e-12));
  CHECK((upa.matrix.col(2 * 2 + 1) - upa_steering_virtual(upa.grid_azi(2), upa.grid_ele(1), upa.geometry)).norm() < 1e-14);
}

TEST_CASE("adjacent atoms of a redundant dictionary correlate like the profile", "[dictionary]") {
  for (double s : {0.5, 1.5}) {
    const Dictionary d = build_dictionary(ArrayGeometry{8, 1, s, s > 0.5 ? ArrayKind::Wsa : ArrayKind::Csa}, 16);
    for (Index g = 0; g + 1 < 16; ++g) {
      const double direct = std::abs(d.matrix.col(g).dot(d.matrix.col(g + 1)));
      CHECK(direct == Approx(correlation_profile(d.grid_azi(g), d.grid_azi.segment(g + 1, 1), 8, s)(0)).margin(1e-12));
    }
  }
}

TEST_CASE("angular transform", "[dictionary]") {
  Rng rng(3);
  const Dictionary rx = build_dictionary(ArrayGeometry::csa(4), 4);
  const Dictionary tx = build_dictionary(ArrayGeometry::csa(8), 8);
  CirTensor c(3, 4, 8, 5e-9);
  for (Index l = 0; l < 3; ++l) c[l] = complex_gaussian(rng, 4, 8, 1.0);
  const CirTensor back = angular_inverse(angular_transform(c, rx, tx), rx, tx);
  for (Index l = 0; l < 3; ++l) CHECK((back[l] - c[l]).norm() < 1e-10);

  CirTensor single(2, 4, 8, 5e-9);
  single[1] = cx(0.7, 0.2) * rx.matrix.col(1) * tx.matrix.col(5).adjoint();
  const CirTensor a = angular_transform(single, rx, tx);
  CHECK(a[0].norm() < 1e-12);
  Index nonzero = 0;
  for (Index i = 0; i < a[1].size(); ++i) nonzero += std::abs(a[1].data()[i]) > 1e-10 ? 1 : 0;
  CHECK(nonzero == 1);
  CHECK(std::abs(a[1](1, 5)) == Approx(std::abs(cx(0.7, 0.2))));

  const Dictionary rx2 = build_dictionary(ArrayGeometry::csa(4), 8);
  const Dictionary tx2 = build_dictionary(ArrayGeometry::csa(8), 16);
  const double mu_r = rx2.grid_azi(3) + 0.2 / (0.5 * 8);
  const double mu_t = tx2.grid_azi(11) - 0.2 / (0.5 * 16);
  CirTensor off(1, 4, 8, 5e-9);
  off[0] = steering_vector<double>(mu_r, 4, 0.5) * steering_vector<double>(mu_t, 8, 0.5).adjoint();
  const CirTensor ao = angular_transform(off, rx2, tx2);
  Index r = 0, col = 0;
  ao[0].cwiseAbs().maxCoeff(&r, &col);
  CHECK(r == 3);
  CHECK(col == 11);
}
