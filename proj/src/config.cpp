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

#include "isac/config.hpp"

#include "CLI11.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <map>

namespace isac {

WaveformParams ExperimentConfig::waveform() const {
  WaveformParams w;
  w.pilot_length = pilot_length;
  w.taps = scenario.taps;
  w.dwell_cu = dwell_cu;
  w.dwell_ut = dwell_ut;
  w.guard = guard;
  w.ut_offset = ut_offset;
  w.n_rf = n_rf;
  w.power_dl = power_dl();
  return w;
}

void ExperimentConfig::validate() const {
  scenario.validate();
  waveform().validate();
  if (trials < 1) throw ConfigError("config: trials must be >= 1");
  if (!(bandwidth_hz > 0.0)) throw ConfigError("config: bandwidth must be positive");
  if (!(wsa_grid_ratio >= 1.0 && cu_grid_ratio >= 1.0 && ut_grid_ratio >= 1.0))
    throw ConfigError("config: grid ratios must be >= 1");
  if (iterations < 1 || block_iterations < 1) throw ConfigError("config: iteration counts must be >= 1");
  if (adc_bits < 0 || adc_bits > 30) throw ConfigError("config: adc_bits must be in [0, 30]");
  if (!(clip_scale > 0.0)) throw ConfigError("config: clip_scale must be positive");
  if (doppler_pilots < 2) throw ConfigError("config: doppler pilots must be >= 2");
  if (frame_length < scenario.taps) throw ConfigError("config: frame length must be >= L");
  if (users < 1) throw ConfigError("config: users must be >= 1");
  if (ber_frames < 1) throw ConfigError("config: ber_frames must be >= 1");
}

namespace {

double to_double(const std::string& key, const std::string& s) {
  double v = 0.0;
  const auto* end = s.data() + s.size();
  const auto r = std::from_chars(s.data(), end, v);
  if (r.ec != std::errc() || r.ptr != end) throw ConfigError("config: " + key + " expects a number, got '" + s + "'");
  return v;
}

template <typename Int>
Int to_int(const std::string& key, const std::string& s) {
  Int v = 0;
  const auto* end = s.data() + s.size();
  const auto r = std::from_chars(s.data(), end, v);
  if (r.ec != std::errc() || r.ptr != end) throw ConfigError("config: " + key + " expects an integer, got '" + s + "'");
  return v;
}

using Setter = std::function<void(ExperimentConfig&, const std::string&, const std::vector<std::string>&)>;

const std::string& single(const std::string& key, const std::vector<std::string>& v) {
  if (v.size() != 1) throw ConfigError("config: " + key + " expects a single value");
  return v.front();
}

Setter real(double ExperimentConfig::*m) {
  return [m](ExperimentConfig& c, const std::string& k, const std::vector<std::string>& v) { c.*m = to_double(k, single(k, v)); };
}
Setter integer(Index ExperimentConfig::*m) {
  return [m](ExperimentConfig& c, const std::string& k, const std::vector<std::string>& v) {
    c.*m = to_int<Index>(k, single(k, v));
  };
}
Setter boolean(bool ExperimentConfig::*m) {
  return [m](ExperimentConfig& c, const std::string& k, const std::vector<std::string>& v) {
    const std::string& s = single(k, v);
    if (s == "true" || s == "1") c.*m = true;
    else if (s == "false" || s == "0") c.*m = false;
    else throw ConfigError("config: " + k + " expects true or false");
  };
}
Setter scen_real(double ScenarioParams::*m) {
  return [m](ExperimentConfig& c, const std::string& k, const std::vector<std::string>& v) {
    c.scenario.*m = to_double(k, single(k, v));
  };
}
Setter scen_int(Index ScenarioParams::*m) {
  return [m](ExperimentConfig& c, const std::string& k, const std::vector<std::string>& v) {
    c.scenario.*m = to_int<Index>(k, single(k, v));
  };
}
Setter antennas(ArrayGeometry ScenarioParams::*g, Index ArrayGeometry::*m) {
  return [g, m](ExperimentConfig& c, const std::string& k, const std::vector<std::string>& v) {
    (c.scenario.*g).*m = to_int<Index>(k, single(k, v));
  };
}

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = {
      {"run.preset", [](ExperimentConfig& c, const std::string& k, const std::vector<std::string>& v) { c.preset = single(k, v); }},
      {"run.seed", [](ExperimentConfig& c, const std::string& k, const std::vector<std::string>& v) {
         c.seed = to_int<std::uint64_t>(k, single(k, v));
       }},
      {"run.trials", integer(&ExperimentConfig::trials)},
      {"run.threads", [](ExperimentConfig& c, const std::string& k, const std::vector<std::string>& v) {
         c.threads = to_int<unsigned>(k, single(k, v));
       }},

      {"scenario.carrier_hz", scen_real(&ScenarioParams::carrier_hz)},
      {"scenario.sampling_period_s", scen_real(&ScenarioParams::sampling_period)},
      {"scenario.taps", scen_int(&ScenarioParams::taps)},
      {"scenario.rolloff", scen_real(&ScenarioParams::pulse_rolloff)},
      {"scenario.pulse_half_samples", scen_real(&ScenarioParams::pulse_half_samples)},
      {"scenario.comm_clusters", scen_int(&ScenarioParams::comm_clusters)},
      {"scenario.comm_paths", scen_int(&ScenarioParams::comm_paths)},
      {"scenario.radar_clusters", scen_int(&ScenarioParams::radar_clusters)},
      {"scenario.radar_paths", scen_int(&ScenarioParams::radar_paths)},
      {"scenario.rician_factor_db", scen_real(&ScenarioParams::rician_factor_db)},
      {"scenario.ut_distance_min_m", scen_real(&ScenarioParams::ut_distance_min)},
      {"scenario.ut_distance_max_m", scen_real(&ScenarioParams::ut_distance_max)},
      {"scenario.target_distance_min_m", scen_real(&ScenarioParams::target_distance_min)},
      {"scenario.target_distance_max_m", scen_real(&ScenarioParams::target_distance_max)},
      {"scenario.rcs_min_m2", scen_real(&ScenarioParams::rcs_min)},
      {"scenario.rcs_max_m2", scen_real(&ScenarioParams::rcs_max)},
      {"scenario.doppler_max_hz", scen_real(&ScenarioParams::doppler_max_hz)},
      {"scenario.angle_spread_deg", scen_real(&ScenarioParams::angle_spread_deg)},
      {"scenario.delay_spread_samples", scen_real(&ScenarioParams::delay_spread_samples)},
      {"scenario.cu_antennas", antennas(&ScenarioParams::cu, &ArrayGeometry::n_x)},
      {"scenario.cu_antennas_y", antennas(&ScenarioParams::cu, &ArrayGeometry::n_y)},
      {"scenario.ru_antennas", antennas(&ScenarioParams::ru, &ArrayGeometry::n_x)},
      {"scenario.ru_antennas_y", antennas(&ScenarioParams::ru, &ArrayGeometry::n_y)},
      {"scenario.ut_antennas", antennas(&ScenarioParams::ut, &ArrayGeometry::n_x)},
      {"scenario.ut_antennas_y", antennas(&ScenarioParams::ut, &ArrayGeometry::n_y)},
      {"scenario.ru_spacing", [](ExperimentConfig& c, const std::string& k, const std::vector<std::string>& v) {
         c.scenario.ru.spacing = to_double(k, single(k, v));
       }},
      {"scenario.noise_psd_dbm_hz", real(&ExperimentConfig::noise_psd_dbm_hz)},
      {"scenario.bandwidth_hz", real(&ExperimentConfig::bandwidth_hz)},

      {"waveform.pilot_length", integer(&ExperimentConfig::pilot_length)},
      {"waveform.dwell_cu", integer(&ExperimentConfig::dwell_cu)},
      {"waveform.dwell_ut", integer(&ExperimentConfig::dwell_ut)},
      {"waveform.guard", integer(&ExperimentConfig::guard)},
      {"waveform.ut_offset", integer(&ExperimentConfig::ut_offset)},
      {"waveform.n_rf", integer(&ExperimentConfig::n_rf)},
      {"waveform.power_dl_dbm", real(&ExperimentConfig::power_dl_dbm)},

      {"recovery.wsa_grid_ratio", real(&ExperimentConfig::wsa_grid_ratio)},
      {"recovery.cu_grid_ratio", real(&ExperimentConfig::cu_grid_ratio)},
      {"recovery.ut_grid_ratio", real(&ExperimentConfig::ut_grid_ratio)},
      {"recovery.iterations", integer(&ExperimentConfig::iterations)},
      {"recovery.block_iterations", integer(&ExperimentConfig::block_iterations)},
      {"recovery.adc_bits", [](ExperimentConfig& c, const std::string& k, const std::vector<std::string>& v) {
         const std::string& s = single(k, v);
         c.adc_bits = (s == "inf" || s == "infinite") ? 0 : to_int<int>(k, s);
       }},
      {"recovery.clip_scale", real(&ExperimentConfig::clip_scale)},
      {"recovery.stop_on_dependent", boolean(&ExperimentConfig::stop_on_dependent)},

      {"doppler.pilots", integer(&ExperimentConfig::doppler_pilots)},
      {"doppler.frame_length", integer(&ExperimentConfig::frame_length)},
      {"doppler.users", integer(&ExperimentConfig::users)},
      {"doppler.ut_power_dbm", real(&ExperimentConfig::ut_power_dbm)},
      {"doppler.ber_doppler_hz", real(&ExperimentConfig::ber_doppler_hz)},
      {"doppler.ber_frames", integer(&ExperimentConfig::ber_frames)},
      {"doppler.energy_gate", boolean(&ExperimentConfig::energy_gate)},

      {"sweep.values", [](ExperimentConfig& c, const std::string& k, const std::vector<std::string>& v) {
         c.sweep.clear();
         for (const auto& s : v) c.sweep.push_back(to_double(k, s));
       }},
  };
  return table;
}

}  // namespace

void apply_setting(ExperimentConfig& cfg, const std::string& section, const std::string& key,
                   const std::vector<std::string>& values) {
  const std::string full = section + "." + key;
  const auto& t = setters();
  const auto it = t.find(full);
  if (it == t.end()) throw ConfigError("config: unknown key '" + full + "'");
  it->second(cfg, full, values);
}

ExperimentConfig parse_config(std::istream& in, ExperimentConfig cfg) {
  std::vector<CLI::ConfigItem> items;
  try {
    items = CLI::ConfigINI().from_config(in);
  } catch (const CLI::Error& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  for (const auto& item : items) {
    if (item.name == "++" || item.name == "--") continue;
    if (item.parents.size() != 1) throw ConfigError("config: key '" + item.name + "' must sit inside one [section]");
    apply_setting(cfg, item.parents.front(), item.name, item.inputs);
  }
  cfg.validate();
  return cfg;
}

ExperimentConfig load_config(const std::string& path, ExperimentConfig base) {
  std::ifstream f(path);
  if (!f) throw ConfigError("config: cannot open '" + path + "'");
  return parse_config(f, std::move(base));
}

}  // namespace isac
