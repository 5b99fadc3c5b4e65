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

#include "isac/dictionary.hpp"

#include <cmath>

namespace isac {

Dictionary build_dictionary(const ArrayGeometry& geometry, Index g_x, Index g_y) {
  geometry.validate();
  if (g_x < geometry.n_x || g_y < geometry.n_y) throw ConfigError("dictionary: grid must not be smaller than the array");
  Dictionary d;
  d.geometry = geometry;
  d.g_x = g_x;
  d.g_y = g_y;
  d.grid_azi = angular_grid(g_x, geometry.spacing);
  d.grid_ele = angular_grid(g_y, geometry.spacing);
  d.azi = steering_matrix(d.grid_azi, geometry.n_x, geometry.spacing);
  d.ele = steering_matrix(d.grid_ele, geometry.n_y, geometry.spacing);
  d.matrix.resize(geometry.size(), g_x * g_y);
  for (Index ix = 0; ix < g_x; ++ix)
    for (Index iy = 0; iy < g_y; ++iy)
      for (Index kx = 0; kx < geometry.n_x; ++kx)
        d.matrix.block(kx * geometry.n_y, ix * g_y + iy, geometry.n_y, 1) = d.azi(kx, ix) * d.ele.col(iy);
  return d;
}

double dirichlet(Index n, double x) {
  const double half = 0.5 * x;
  const double k = std::round(x / (2.0 * kPi));
  if (std::abs(x - 2.0 * kPi * k) < 1e-12) {
    const long long e = static_cast<long long>(k) * static_cast<long long>(n - 1);
    return (e % 2 == 0) ? 1.0 : -1.0;
  }
  return std::sin(static_cast<double>(n) * half) / (static_cast<double>(n) * std::sin(half));
}

VectorXd correlation_profile(double mu, const VectorXd& alpha, Index count, double spacing) {
  if (count < 1) throw ConfigError("correlation profile: count must be >= 1");
  VectorXd out(alpha.size());
  for (Index i = 0; i < alpha.size(); ++i)
    out(i) = std::abs(dirichlet(count, 2.0 * kPi * spacing * (alpha(i) - mu)));
  return out;
}

std::vector<double> ambiguity_set(double mu, double spacing) {
  std::vector<double> out;
  const long long lo = static_cast<long long>(std::floor((-1.0 - mu) * spacing)) - 1;
  const long long hi = static_cast<long long>(std::ceil((1.0 - mu) * spacing)) + 1;
  for (long long k = lo; k <= hi; ++k) {
    const double a = mu + static_cast<double>(k) / spacing;
    if (a > -1.0 && a < 1.0) out.push_back(a);
  }
  return out;
}

namespace {

// Right pseudo-inverse helper: returns A^H (A A^H + eps I)^{-1}.
MatrixXcd ridge_left(const MatrixXcd& A) {
  constexpr double eps = 1e-9;
  const MatrixXcd gram = A * A.adjoint() + eps * MatrixXcd::Identity(A.rows(), A.rows());
  return A.adjoint() * gram.ldlt().solve(MatrixXcd::Identity(A.rows(), A.rows()));
}

}  // namespace

CirTensor angular_transform(const CirTensor& cir, const Dictionary& rx, const Dictionary& tx) {
  if (cir.rows() != rx.matrix.rows() || cir.cols() != tx.matrix.rows())
    throw ConfigError("angular transform: dictionary dimensions do not conform");
  const bool square = rx.atoms() == rx.matrix.rows() && tx.atoms() == tx.matrix.rows();
  const MatrixXcd left = square ? MatrixXcd(rx.matrix.adjoint()) : ridge_left(rx.matrix);
  const MatrixXcd right = square ? tx.matrix : MatrixXcd(ridge_left(tx.matrix).adjoint());
  CirTensor out(cir.length(), rx.atoms(), tx.atoms(), cir.sampling_period);
  for (Index l = 0; l < cir.length(); ++l) out[l] = left * cir[l] * right;
  return out;
}

CirTensor angular_inverse(const CirTensor& angular, const Dictionary& rx, const Dictionary& tx) {
  if (angular.rows() != rx.atoms() || angular.cols() != tx.atoms())
    throw ConfigError("angular inverse: dictionary dimensions do not conform");
  CirTensor out(angular.length(), rx.matrix.rows(), tx.matrix.rows(), angular.sampling_period);
  for (Index l = 0; l < angular.length(); ++l) out[l] = rx.matrix * angular[l] * tx.matrix.adjoint();
  return out;
}

}  // namespace isac
