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

#include "isac/ofdm.hpp"
#include "isac/random.hpp"

#include <unsupported/Eigen/FFT>

#include <bit>
#include <vector>

namespace isac {

namespace {

constexpr double kQamScale = 0.31622776601683794;  // 1 / sqrt(10)

// Gray code on two bits: 00 -> -3, 01 -> -1, 11 -> +1, 10 -> +3.
double pam4(unsigned b) {
  static constexpr double lv[4] = {-3.0, -1.0, 3.0, 1.0};
  return lv[b & 3u];
}

unsigned pam4_inv(double x) {
  if (x < -2.0) return 0u;
  if (x < 0.0) return 1u;
  if (x < 2.0) return 3u;
  return 2u;
}

}  // namespace

cx qam16_map(unsigned bits) { return {pam4(bits) * kQamScale, pam4(bits >> 2) * kQamScale}; }

unsigned qam16_demap(cx s) { return pam4_inv(s.real() / kQamScale) | (pam4_inv(s.imag() / kQamScale) << 2); }

std::vector<DopplerGroup> beamformed_groups(const ChannelRealization& ch, const VectorXcd& w, const VectorXcd& f,
                                            const RaisedCosinePulse& pulse, Index L) {
  auto add_path = [&](DopplerGroup& g, const PathComponent& p) {
    const VectorXcd ar = upa_steering_virtual(p.rx_mu(), p.rx_nu(), ch.rx);
    const VectorXcd at = upa_steering_virtual(p.tx_mu(), p.tx_nu(), ch.tx);
    const cx c = p.gain * w.dot(ar) * at.dot(f);
    for (Index l = 0; l < L; ++l) {
      const double v = pulse(static_cast<double>(l) * pulse.symbol_period - p.delay - pulse.half_duration);
      if (v != 0.0) g.taps(l) += c * v;
    }
  };
  std::vector<DopplerGroup> out;
  if (ch.los) {
    out.push_back({ch.los->doppler, VectorXcd::Zero(L)});
    add_path(out.back(), *ch.los);
  }
  for (const auto& cl : ch.clusters) {
    out.push_back({cl.doppler, VectorXcd::Zero(L)});
    for (const auto& p : cl.paths) add_path(out.back(), p);
  }
  return out;
}

double los_subcarrier_gain(const std::vector<DopplerGroup>& groups) {
  // Parseval: the mean of |H_k|^2 over the DFT bins equals the tap energy.
  return groups.empty() ? 0.0 : groups.front().taps.squaredNorm();
}

BerCount simulate_ofdm_ber(const std::vector<DopplerGroup>& groups, std::optional<double> f_hat,
                           const OfdmLinkParams& prm, std::uint64_t seed) {
  if (prm.cyclic_prefix < prm.taps) throw ConfigError("ofdm: cyclic prefix shorter than the channel");
  if (groups.empty()) throw ConfigError("ofdm: empty channel");
  const Index nd = prm.subcarriers;
  const Index cp = prm.cyclic_prefix;
  const Index L = prm.taps;
  const double ts = prm.sampling_period;
  const double amp = std::sqrt(prm.power);
  Eigen::FFT<double> fft;
  Rng rng(seed);
  std::uniform_int_distribution<unsigned> nibble(0u, 15u);

  BerCount count;
  std::vector<cx> freq(static_cast<std::size_t>(nd));
  std::vector<cx> time;
  std::vector<unsigned> sent(static_cast<std::size_t>(nd));
  for (Index k = 0; k < prm.frames; ++k) {
    const double t_ref = static_cast<double>(k) * prm.frame_interval;
    for (Index i = 0; i < nd; ++i) {
      sent[static_cast<std::size_t>(i)] = nibble(rng);
      freq[static_cast<std::size_t>(i)] = qam16_map(sent[static_cast<std::size_t>(i)]);
    }
    fft.inv(time, freq);  // includes the 1/N_D factor
    const double norm = amp * std::sqrt(static_cast<double>(nd));
    std::vector<cx> tx(static_cast<std::size_t>(cp + nd));
    for (Index i = 0; i < cp + nd; ++i) tx[static_cast<std::size_t>(i)] = norm * time[static_cast<std::size_t>((i - cp + nd) % nd)];

    // Received samples after the CP; the zero guard precedes the CP, so only CP samples feed the taps.
    std::vector<cx> rx(static_cast<std::size_t>(nd));
    for (Index i = cp; i < cp + nd; ++i) {
      const double t = t_ref + static_cast<double>(prm.guard + i) * ts;
      cx acc = 0.0;
      for (const auto& g : groups) {
        cx s = 0.0;
        for (Index l = 0; l < L; ++l) s += g.taps(l) * tx[static_cast<std::size_t>(i - l)];
        acc += s * std::polar(1.0, 2.0 * kPi * g.frequency * t);
      }
      if (prm.noise_power > 0.0) acc += complex_gaussian(rng, prm.noise_power);
      if (f_hat) acc *= std::polar(1.0, -2.0 * kPi * *f_hat * (t - t_ref));
      rx[static_cast<std::size_t>(i - cp)] = acc;
    }
    std::vector<cx> bins;
    fft.fwd(bins, rx);

    // One-tap equalizer from the LoS response at the pilot instant.
    std::vector<cx> h(static_cast<std::size_t>(nd), cx(0.0));
    const cx rot = std::polar(1.0, 2.0 * kPi * groups.front().frequency * t_ref);
    for (Index l = 0; l < L; ++l) h[static_cast<std::size_t>(l)] = groups.front().taps(l) * rot;
    std::vector<cx> hf;
    fft.fwd(hf, h);
    for (Index i = 0; i < nd; ++i) {
      const cx est = bins[static_cast<std::size_t>(i)] / (norm * hf[static_cast<std::size_t>(i)]);
      const unsigned got = qam16_demap(est);
      count.errors += static_cast<std::uint64_t>(std::popcount(got ^ sent[static_cast<std::size_t>(i)]));
      count.bits += 4;
    }
  }
  return count;
}

}  // namespace isac
