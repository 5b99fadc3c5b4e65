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
#include "isac/link_sim.hpp"
#include "isac/waveform.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace isac {

/// Everything a preset needs. Defaults are the reference scenario; powers in dBm.
struct ExperimentConfig {
  std::string preset = "fig9";
  std::uint64_t seed = 1;
  Index trials = 50;
  unsigned threads = 0;  // 0: hardware concurrency

  ScenarioParams scenario;
  double noise_psd_dbm_hz = -174.0;
  double bandwidth_hz = 200e6;

  Index pilot_length = 200;
  Index dwell_cu = 30;
  Index dwell_ut = 30;
  Index guard = 10;
  Index ut_offset = 0;
  Index n_rf = 4;
  double power_dl_dbm = 60.0;

  double wsa_grid_ratio = 2.0;  // Ḡ_x / N̄_x
  double cu_grid_ratio = 2.0;   // G^CU / N
  double ut_grid_ratio = 2.0;   // G^UT / M
  Index iterations = 150;
  Index block_iterations = 10;
  int adc_bits = 5;             // 0: infinite resolution
  double clip_scale = 3.0;
  bool stop_on_dependent = false;  // skip (false) or stop at a numerically dependent OMP atom

  Index doppler_pilots = 2;     // P_D
  Index frame_length = 1024;    // N_D
  Index users = 4;              // U
  double ut_power_dbm = 23.0;   // P^UT
  double ber_doppler_hz = 7.1e3;  // |f_D| of the served UT's LoS in the BER preset, 0: drawn
  Index ber_frames = 4;
  bool energy_gate = true;      // keep only Doppler series passing the energy gate

  std::vector<double> sweep;    // overrides the preset's main sweep axis when non-empty

  double noise_power() const {
    return dbm_to_watt(noise_psd_dbm_hz + 10.0 * std::log10(bandwidth_hz));
  }
  double power_dl() const { return dbm_to_watt(power_dl_dbm); }
  QuantizerSpec quantizer() const { return {adc_bits, clip_scale}; }
  WaveformParams waveform() const;
  void validate() const;
};

/// Applies one "section.key = value" setting; throws ConfigError for unknown keys or bad values.
void apply_setting(ExperimentConfig& cfg, const std::string& section, const std::string& key,
                   const std::vector<std::string>& values);

/// INI-style text: [section] headers, key = value lines, # or ; comments.
ExperimentConfig parse_config(std::istream& in, ExperimentConfig base = {});
ExperimentConfig load_config(const std::string& path, ExperimentConfig base = {});

}  // namespace isac
