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

#include <vector>

namespace isac {

/// Left-closed grid -1 + g / (spacing * count), g = 0 .. count-1.
/// For half-wavelength arrays this spans [-1, 1); for a WSA it spans one alias period.
template <typename Real>
RVector<Real> angular_grid(Index count, Real spacing) {
  RVector<Real> g(count);
  for (Index i = 0; i < count; ++i)
    g(i) = Real(-1) + static_cast<Real>(i) / (spacing * static_cast<Real>(count));
  return g;
}

/// Columns are steering vectors at the grid samples.
template <typename Real>
CMatrix<Real> steering_matrix(const RVector<Real>& grid, Index count, Real spacing) {
  CMatrix<Real> A(count, grid.size());
  for (Index g = 0; g < grid.size(); ++g) A.col(g) = steering_vector<Real>(grid(g), count, spacing);
  return A;
}

struct Dictionary {
  ArrayGeometry geometry;
  Index g_x = 0;
  Index g_y = 0;
  VectorXd grid_azi;
  VectorXd grid_ele;
  MatrixXcd azi;     // n_x x g_x
  MatrixXcd ele;     // n_y x g_y
  MatrixXcd matrix;  // azi kron ele, column index = i_azi * g_y + i_ele

  Index atoms() const { return g_x * g_y; }
};

Dictionary build_dictionary(const ArrayGeometry& geometry, Index g_x, Index g_y = 1);

/// Dirichlet kernel sin(N x / 2) / (N sin(x / 2)) with the value (-1)^{k(N-1)} at x = 2 k pi.
double dirichlet(Index n, double x);

/// |Ξ_count(2 pi spacing (alpha - mu))| for every alpha.
VectorXd correlation_profile(double mu, const VectorXd& alpha, Index count, double spacing);

/// Every alias mu + k / spacing inside the open interval (-1, 1), ascending.
std::vector<double> ambiguity_set(double mu, double spacing);

/// Angular-delay representation per tap. Square dictionaries give A_rx^H H A_tx;
/// redundant ones use the ridge-regularized minimum-norm solution.
CirTensor angular_transform(const CirTensor& cir, const Dictionary& rx, const Dictionary& tx);

/// Inverse map A_rx H^A A_tx^H per tap.
CirTensor angular_inverse(const CirTensor& angular, const Dictionary& rx, const Dictionary& tx);

}  // namespace isac
