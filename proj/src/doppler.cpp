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

#include "isac/doppler.hpp"
#include "isac/random.hpp"

namespace isac {

DataPhaseBeams steer_beams(const std::vector<LosEstimate>& est, const ArrayGeometry& ut, const ArrayGeometry& cu) {
  DataPhaseBeams b;
  b.cu_beams.resize(cu.size(), static_cast<Index>(est.size()));
  for (std::size_t u = 0; u < est.size(); ++u) {
    b.ut_beams.push_back(upa_steering_virtual(est[u].mu_ut, est[u].nu_ut, ut));
    b.cu_beams.col(static_cast<Index>(u)) = upa_steering_virtual(est[u].mu_cu, est[u].nu_cu, cu);
  }
  return b;
}

std::vector<Index> schedule_uts(const std::vector<LosEstimate>& est, Index n_rf, Index n_x, double tau_p) {
  if (n_rf < 1) throw ConfigError("schedule: N_RF must be >= 1");
  const double min_angle = 2.0 / static_cast<double>(n_x);
  const double min_delay = 2.0 * tau_p;
  // Tiny slack so that exactly-met thresholds survive rounding of the inputs.
  constexpr double slack = 1e-12;
  std::vector<Index> out;
  for (std::size_t u = 0; u < est.size() && static_cast<Index>(out.size()) < n_rf; ++u) {
    bool ok = true;
    for (Index v : out) {
      const auto& a = est[u];
      const auto& b = est[static_cast<std::size_t>(v)];
      const double dang = std::max(std::abs(a.mu_cu - b.mu_cu), std::abs(a.nu_cu - b.nu_cu));
      const double ddel = std::abs(a.tau - b.tau);
      if (!(dang >= min_angle - slack || ddel >= min_delay - slack * min_delay)) {
        ok = false;
        break;
      }
    }
    if (ok) out.push_back(static_cast<Index>(u));
  }
  return out;
}

std::vector<DopplerSeries> simulate_impulse_pilots(const std::vector<ChannelRealization>& channels,
                                                   const DataPhaseBeams& beams, const std::vector<Index>& sample_taps,
                                                   const ImpulsePilotParams& prm, const RaisedCosinePulse& pulse,
                                                   std::uint64_t seed) {
  const std::size_t U = channels.size();
  if (beams.ut_beams.size() != U || static_cast<std::size_t>(beams.cu_beams.cols()) != U || sample_taps.size() != U ||
      prm.powers.size() != U)
    throw ConfigError("impulse pilots: per-UT inputs disagree in size");
  if (prm.pilots < 2) throw ConfigError("impulse pilots: P_D must be >= 2");
  const Index N = beams.cu_beams.rows();
  const double td = prm.interval();

  std::vector<DopplerSeries> out(U);
  for (auto& s : out) {
    s.samples.resize(prm.pilots);
    s.interval = td;
  }
  Rng rng(seed);
  for (Index n = 0; n < prm.pilots; ++n) {
    const double t = static_cast<double>(n) * td;
    // Noise at the CU antennas for every tap of this impulse response window.
    const MatrixXcd noise = prm.noise_power > 0.0 ? complex_gaussian(rng, N, prm.taps, prm.noise_power)
                                                  : MatrixXcd::Zero(N, prm.taps);
    MatrixXcd rx = noise;  // N x L received uplink signal
    for (std::size_t v = 0; v < U; ++v) {
      const CirTensor h = sample_cir(channels[v], t, pulse, prm.taps);
      const VectorXcd w = beams.ut_beams[v].conjugate() * std::sqrt(prm.powers[v]);
      for (Index l = 0; l < prm.taps; ++l) rx.col(l).noalias() += h[l].transpose() * w;
    }
    for (std::size_t u = 0; u < U; ++u) {
      const Index l = sample_taps[u];
      if (l < 0 || l >= prm.taps) throw ConfigError("impulse pilots: sample tap outside [0, L)");
      out[u].samples(n) = beams.cu_beams.col(static_cast<Index>(u)).transpose() * rx.col(l);
    }
  }
  return out;
}

VectorXd wnalp_weights(Index P) {
  if (P < 2) throw ConfigError("WNALP: at least two samples are required");
  const double p = static_cast<double>(P);
  const Index K = P / 2;
  const double k = static_cast<double>(K);
  const double den = k * (4.0 * k * k - 6.0 * k * p + 3.0 * p * p - 1.0);
  VectorXd w(K);
  for (Index m = 1; m <= K; ++m) {
    const double mm = static_cast<double>(m);
    w(m - 1) = 3.0 * ((p - mm) * (p - mm + 1.0) - k * (p - k)) / den;
  }
  return w;
}

double wnalp(const VectorXcd& y, double interval) {
  const Index P = y.size();
  const VectorXd w = wnalp_weights(P);
  const Index K = w.size();
  auto autocorr = [&](Index m) {
    cx acc = 0.0;
    for (Index n = m; n < P; ++n) acc += y(n) * std::conj(y(n - m));
    return acc / static_cast<double>(P - m);
  };
  double phase = 0.0;
  cx prev = autocorr(0);
  for (Index m = 1; m <= K; ++m) {
    const cx cur = autocorr(m);
    phase += w(m - 1) * std::arg(cur * std::conj(prev));
    prev = cur;
  }
  return phase / (2.0 * kPi * interval);
}

bool passes_energy_gate(const DopplerSeries& s, double noise_power) {
  return s.samples.norm() >= 10.0 * std::sqrt(static_cast<double>(s.samples.size()) * noise_power);
}

DopplerEstimate estimate_doppler(const DopplerSeries& s, double noise_power) {
  return {wnalp(s.samples, s.interval), passes_energy_gate(s, noise_power)};
}

double crb_reference(double snr, Index P) {
  if (!(snr > 0.0) || P < 2) throw ConfigError("CRB: snr must be positive and P_D >= 2");
  const double p = static_cast<double>(P);
  return 6.0 / (snr * p * (p * p - 1.0));
}

VectorXcd compensate_doppler(const VectorXcd& x, double f, double ts, double t0) {
  VectorXcd out(x.size());
  for (Index n = 0; n < x.size(); ++n)
    out(n) = x(n) * std::polar(1.0, -2.0 * kPi * f * (t0 + static_cast<double>(n) * ts));
  return out;
}

}  // namespace isac
