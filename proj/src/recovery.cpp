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

#include "isac/recovery.hpp"

#include <algorithm>
#include <limits>

namespace isac {

std::pair<Index, Index> ind2sub(Index x, Index y, Index z) {
  if (x < 1 || y < 1 || z < 1 || z > x * y) throw std::out_of_range("ind2sub: linear index out of range");
  const Index j = (z + x - 1) / x;
  return {z - (j - 1) * x, j};
}

double resolve_ambiguity(double mu_coarse, double mu_fine, double spacing) {
  const double k = std::round((mu_coarse - mu_fine) * spacing);
  return mu_fine + k / spacing;
}

namespace {

// Shifts by whole alias periods into [-1, 1); a no-op for values already inside.
double fold_alias(double mu, double spacing) {
  const double period = 1.0 / spacing;
  while (mu >= 1.0) mu -= period;
  while (mu < -1.0) mu += period;
  return mu;
}

struct Atom {
  Index tap = 0;
  VectorXcd rx;  // steering vector on the receive (WSA) side
  VectorXcd tx;  // steering vector on the transmit (CU) side
};

CirTensor reconstruct(const std::vector<Atom>& atoms, const VectorXcd& gains, Index taps, Index rows, Index cols,
                      double ts) {
  // The pulse is sampled at (l - tap) T_s, where the raised cosine is 1 at zero and
  // vanishes at every other integer multiple of T_s, so each atom lands on a single tap.
  CirTensor cir(taps, rows, cols, ts);
  for (std::size_t k = 0; k < atoms.size(); ++k)
    cir[atoms[k].tap] += gains(static_cast<Index>(k)) * atoms[k].rx * atoms[k].tx.adjoint();
  return cir;
}

// Incremental orthonormal basis of the selected columns (classical Gram-Schmidt, two passes).
class IncrementalQr {
 public:
  IncrementalQr(Index rows, Index capacity) : q_(rows, capacity), r_(MatrixXcd::Zero(capacity, capacity)) {}

  Index size() const { return k_; }

  // Returns false and leaves the basis untouched when the column is numerically dependent.
  bool append(const VectorXcd& col, double tol) {
    const double norm = col.norm();
    if (!(norm > 0.0)) return false;
    VectorXcd v = col;
    VectorXcd h = VectorXcd::Zero(k_);
    for (int pass = 0; pass < 2 && k_ > 0; ++pass) {
      const VectorXcd hp = q_.leftCols(k_).adjoint() * v;
      v.noalias() -= q_.leftCols(k_) * hp;
      h += hp;
    }
    const double rho = v.norm();
    if (rho < tol * norm) return false;
    if (k_ == q_.cols()) grow();
    q_.col(k_) = v / rho;
    r_.block(0, k_, k_, 1) = h;
    r_(k_, k_) = rho;
    ++k_;
    return true;
  }

  auto column(Index k) const { return q_.col(k); }

  VectorXcd solve(const VectorXcd& coeffs) const {
    return r_.topLeftCorner(k_, k_).triangularView<Eigen::Upper>().solve(coeffs.head(k_));
  }

 private:
  void grow() {
    const Index cap = std::max<Index>(2 * q_.cols(), 8);
    MatrixXcd q(q_.rows(), cap);
    q.leftCols(k_) = q_.leftCols(k_);
    MatrixXcd r = MatrixXcd::Zero(cap, cap);
    r.topLeftCorner(k_, k_) = r_.topLeftCorner(k_, k_);
    q_.swap(q);
    r_.swap(r);
  }

  MatrixXcd q_;
  MatrixXcd r_;
  Index k_ = 0;
};

void check_problem(const RadarProblem& p) {
  if (!p.y || !p.phi || !p.wsa || !p.cu) throw ConfigError("recovery: incomplete problem");
  if (p.taps < 1) throw ConfigError("recovery: L must be >= 1");
  if (p.phi->rows() != p.taps * p.cu->matrix.rows()) throw ConfigError("recovery: measurement matrix rows != L N");
  if (p.phi->cols() != p.y->cols()) throw ConfigError("recovery: observation and measurement matrix disagree on Q");
  if (p.wsa->matrix.rows() != p.y->rows()) throw ConfigError("recovery: WSA dictionary rows != N̄");
}

}  // namespace

RecoveryResult omp_recover(const RadarProblem& p, const OmpOptions& opt) {
  check_problem(p);
  if (opt.max_iters < 1) throw ConfigError("recovery: max_iters must be >= 1");
  const MatrixXcd& Y = *p.y;
  const MatrixXcd& phi = *p.phi;
  const Dictionary& wsa = *p.wsa;
  const Dictionary& cu = *p.cu;
  const Index nbar = Y.rows();
  const Index Q = Y.cols();
  const Index N = cu.matrix.rows();
  const Index L = p.taps;
  const Index G = cu.atoms();
  const Index Gbar = wsa.atoms();
  const Index rows = nbar * Q;

  // B = Φ̄^T (I_L kron A_CU^*); the sensing matrix is B kron Ā, never formed.
  MatrixXcd Bconj(Q, L * G);
  for (Index l = 0; l < L; ++l)
    Bconj.middleCols(l * G, G).noalias() = phi.middleRows(l * N, N).adjoint() * cu.matrix;
  const MatrixXcd abar_h = wsa.matrix.adjoint();

  const Eigen::Map<const VectorXcd> y(Y.data(), rows);
  MatrixXcd R = Y;
  Eigen::Map<VectorXcd> r(R.data(), rows);

  RecoveryResult res;
  std::vector<Atom> atoms;
  std::vector<char> used(static_cast<std::size_t>(Gbar * L * G), 0);
  IncrementalQr qr(rows, std::min<Index>(opt.max_iters, rows));
  VectorXcd coeffs(std::min<Index>(opt.max_iters, rows));
  std::vector<Index> snaps = opt.snapshot_iters;
  std::sort(snaps.begin(), snaps.end());
  auto next_snap = snaps.begin();
  MatrixXcd C(Gbar, L * G);

  auto snapshot = [&](Index iters) {
    const VectorXcd g = qr.solve(coeffs);
    res.snapshots.emplace_back(iters, reconstruct(atoms, g, L, nbar, N, p.sampling_period));
  };

  for (Index it = 1; it <= opt.max_iters; ++it) {
    if (r.squaredNorm() == 0.0) break;
    C.noalias() = abar_h * (R * Bconj);

    Index best = -1;
    double best_val = 0.0;
    for (Index z = 0; z < C.size(); ++z) {
      if (used[static_cast<std::size_t>(z)]) continue;
      const double v = std::norm(C.data()[z]);
      if (v > best_val) {
        best_val = v;
        best = z;
      }
    }
    if (best < 0) break;
    used[static_cast<std::size_t>(best)] = 1;

    const Index z = best + 1;
    const auto [i_aoa, i_aux] = ind2sub(Gbar, L * G, z);
    const auto [i_aod, i_d] = ind2sub(G, L, i_aux);
    const auto [i_ele_aod, i_azi_aod] = ind2sub(cu.g_y, cu.g_x, i_aod);
    const auto [i_ele_aoa, i_azi_aoa] = ind2sub(wsa.g_y, wsa.g_x, i_aoa);

    Atom atom;
    atom.tap = i_d - 1;
    double mu = wsa.grid_azi(i_azi_aoa - 1);
    double nu = wsa.grid_ele(i_ele_aoa - 1);
    VectorXcd bcol;
    if (opt.refine) {
      const double s = wsa.geometry.spacing;
      mu = fold_alias(resolve_ambiguity(cu.grid_azi(i_azi_aod - 1), mu, s), s);
      nu = fold_alias(resolve_ambiguity(cu.grid_ele(i_ele_aod - 1), nu, s), s);
      atom.tx = upa_steering_virtual(mu, nu, cu.geometry);
      atom.rx = upa_steering_virtual(mu, nu, wsa.geometry);
      bcol = phi.middleRows(atom.tap * N, N).transpose() * atom.tx.conjugate();
    } else {
      atom.tx = cu.matrix.col(i_aod - 1);
      atom.rx = wsa.matrix.col(i_aoa - 1);
      bcol = Bconj.col(i_aux - 1).conjugate();
    }

    // Column (b kron ā) = vec(ā b^T); the WSA side keeps the grid atom as listed.
    VectorXcd col(rows);
    Eigen::Map<MatrixXcd>(col.data(), nbar, Q).noalias() = wsa.matrix.col(i_aoa - 1) * bcol.transpose();
    if (qr.append(col, opt.independence_tol)) {
      const Index k = qr.size() - 1;
      coeffs(k) = qr.column(k).dot(y);
      r.noalias() -= coeffs(k) * qr.column(k);

      res.support.push_back(z);
      res.taps.push_back(atom.tap);
      res.delays.push_back(static_cast<double>(atom.tap) * p.sampling_period - p.pulse_half_duration);
      res.azimuths.push_back(mu);
      res.elevations.push_back(nu);
      atoms.push_back(std::move(atom));
    } else if (opt.stop_on_dependent) {
      res.early_stop = true;
      break;
    }
    // A skipped dependent atom still spends one iteration of the budget; the residual is unchanged.
    res.iterations = it;
    if (opt.trace) res.trace.push_back({it, z, r.norm()});
    while (next_snap != snaps.end() && *next_snap <= it) {
      if (*next_snap == it) snapshot(it);
      ++next_snap;
    }
  }
  // Snapshots past an early stop reuse the final support.
  for (; next_snap != snaps.end(); ++next_snap) snapshot(*next_snap);

  res.gains = qr.solve(coeffs);
  res.cir_estimate = reconstruct(atoms, res.gains, L, nbar, N, p.sampling_period);
  return res;
}

RecoveryResult omp_sr(const RadarObservation& obs, const MeasurementMatrices& mm, const Dictionary& wsa,
                      const Dictionary& cu, Index max_iters, double ts, double tau_p) {
  RadarProblem p{&obs.y, &mm.phi_radar, &wsa, &cu, mm.taps, ts, tau_p};
  OmpOptions opt;
  opt.max_iters = max_iters;
  return omp_recover(p, opt);
}

RecoveryResult omp_plain(const RadarObservation& obs, const MeasurementMatrices& mm, const Dictionary& wsa,
                         const Dictionary& cu, Index max_iters, double ts, double tau_p) {
  RadarProblem p{&obs.y, &mm.phi_radar, &wsa, &cu, mm.taps, ts, tau_p};
  OmpOptions opt;
  opt.max_iters = max_iters;
  opt.refine = false;
  return omp_recover(p, opt);
}

RecoveryResult block_omp(const RadarObservation& obs, const MeasurementMatrices& mm, Index L, Index block_iters,
                         double ts, double tau_p) {
  if (block_iters < 1) throw ConfigError("block OMP: iterations must be >= 1");
  const MatrixXcd& Y = obs.y;
  const MatrixXcd& phi = mm.phi_radar;
  if (L < 1 || phi.rows() % L != 0 || phi.cols() != Y.cols()) throw ConfigError("block OMP: dimensions do not conform");
  const Index N = phi.rows() / L;
  const Index nbar = Y.rows();

  RecoveryResult res;
  std::vector<char> used(static_cast<std::size_t>(L), 0);
  std::vector<Index> sel;
  MatrixXcd R = Y;
  MatrixXcd H;  // nbar x |S| N
  for (Index it = 1; it <= std::min(block_iters, L); ++it) {
    if (R.squaredNorm() == 0.0) break;
    Index best = -1;
    double best_val = 0.0;
    for (Index l = 0; l < L; ++l) {
      if (used[static_cast<std::size_t>(l)]) continue;
      const double v = (R * phi.middleRows(l * N, N).adjoint()).squaredNorm();
      if (v > best_val) {
        best_val = v;
        best = l;
      }
    }
    if (best < 0) break;
    used[static_cast<std::size_t>(best)] = 1;
    sel.push_back(best);

    MatrixXcd phi_s(static_cast<Index>(sel.size()) * N, Y.cols());
    for (std::size_t k = 0; k < sel.size(); ++k) phi_s.middleRows(static_cast<Index>(k) * N, N) = phi.middleRows(sel[k] * N, N);
    Eigen::CompleteOrthogonalDecomposition<MatrixXcd> cod(phi_s.transpose());
    if (cod.rank() < phi_s.rows()) {
      sel.pop_back();
      res.early_stop = true;
      break;
    }
    H = cod.solve(MatrixXcd(Y.transpose())).transpose();
    R = Y - H * phi_s;
    res.iterations = it;
    res.support.push_back(best + 1);
    res.taps.push_back(best);
    res.delays.push_back(static_cast<double>(best) * ts - tau_p);
    res.trace.push_back({it, best + 1, R.norm()});
  }
  res.cir_estimate = CirTensor(L, nbar, N, ts);
  for (std::size_t k = 0; k < sel.size(); ++k) res.cir_estimate[sel[k]] = H.middleCols(static_cast<Index>(k) * N, N);
  return res;
}

namespace {

LosEstimate pick_los(const MatrixXcd& X, const Dictionary& ut, const Dictionary& cu, Index L, double ts,
                     double tau_p) {
  const Index M = ut.matrix.rows();
  const Index N = cu.matrix.rows();
  const Index G = cu.atoms();
  if (X.rows() != M || X.cols() != L * N) throw ConfigError("ce_ut: dictionaries do not conform");
  MatrixXcd C(ut.atoms(), L * G);
  const MatrixXcd aut_h = ut.matrix.adjoint();
  for (Index l = 0; l < L; ++l) C.middleCols(l * G, G).noalias() = aut_h * X.middleCols(l * N, N) * cu.matrix;

  Index best = 0;
  double best_val = -1.0;
  for (Index z = 0; z < C.size(); ++z) {
    const double v = std::norm(C.data()[z]);
    if (v > best_val) {
      best_val = v;
      best = z;
    }
  }
  const auto [i_ut, i_aux] = ind2sub(ut.atoms(), L * G, best + 1);
  const auto [i_cu, i_d] = ind2sub(G, L, i_aux);
  const auto [i_ele_cu, i_azi_cu] = ind2sub(cu.g_y, cu.g_x, i_cu);
  const auto [i_ele_ut, i_azi_ut] = ind2sub(ut.g_y, ut.g_x, i_ut);
  LosEstimate e;
  e.mu_ut = -1.0 + 2.0 * static_cast<double>(i_azi_ut - 1) / static_cast<double>(ut.g_x);
  e.nu_ut = -1.0 + 2.0 * static_cast<double>(i_ele_ut - 1) / static_cast<double>(ut.g_y);
  e.mu_cu = -1.0 + 2.0 * static_cast<double>(i_azi_cu - 1) / static_cast<double>(cu.g_x);
  e.nu_cu = -1.0 + 2.0 * static_cast<double>(i_ele_cu - 1) / static_cast<double>(cu.g_y);
  e.tap = i_d - 1;
  e.tau = static_cast<double>(e.tap) * ts - tau_p;
  e.peak = std::sqrt(best_val);
  return e;
}

}  // namespace

LosEstimate ce_ut(const CommObservation& obs, const MeasurementMatrices& mm, const Dictionary& ut,
                  const Dictionary& cu, double ts, double tau_p) {
  if (mm.phi_comm_valid.rows() != obs.y_valid.size()) throw ConfigError("ce_ut: observation length != card(I_valid)");
  const Index M = ut.matrix.rows();
  const VectorXcd v = mm.phi_comm_valid.adjoint() * obs.y_valid;
  const Eigen::Map<const MatrixXcd> X(v.data(), M, v.size() / M);
  return pick_los(X, ut, cu, mm.taps, ts, tau_p);
}

LosEstimate ce_ut_fast(const CommObservation& obs, const PilotFrame& frame, const MatrixXcd& phi,
                       const Dictionary& ut, const Dictionary& cu, double ts, double tau_p) {
  const auto idx = valid_indices(frame);
  if (static_cast<Index>(idx.size()) != obs.y_valid.size()) throw ConfigError("ce_ut: observation length != card(I_valid)");
  const Index V = obs.y_valid.size();
  MatrixXcd W(frame.m(), V);
  MatrixXcd B(phi.rows(), V);
  for (Index k = 0; k < V; ++k) {
    const Index q = idx[static_cast<std::size_t>(k)] - 1;
    W.col(k) = frame.combiners.col(q) * obs.y_valid(k);
    B.col(k) = phi.col(q);
  }
  const MatrixXcd X = W * B.adjoint();
  return pick_los(X, ut, cu, frame.params.taps, ts, tau_p);
}

}  // namespace isac
