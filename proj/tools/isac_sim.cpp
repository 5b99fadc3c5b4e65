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

// isac-sim: command-line front end of the Monte-Carlo presets.
//
//   isac-sim run --preset fig9 --trials 50 --out results
//   isac-sim run --config my.ini --out results --trace
//   isac-sim profile --mu 0.3 --count 8 --spacing 1.5 > profile.csv

#include "isac/config.hpp"
#include "isac/dictionary.hpp"
#include "isac/experiments.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

namespace fs = std::filesystem;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

std::ofstream open_out(const fs::path& path) {
  std::ofstream f(path);
  if (!f) throw isac::ConfigError("cannot write '" + path.string() + "'");
  return f;
}

isac::ExperimentConfig resolve_config(const std::string& preset, const std::string& config_path) {
  using namespace isac;
  if (config_path.empty()) {
    if (preset.empty()) throw ConfigError("either --preset or --config is required");
    return preset_config(preset);
  }
  // The file may name the preset itself; preset defaults go first, the file on top.
  std::string name = preset;
  if (name.empty()) name = load_config(config_path).preset;
  ExperimentConfig cfg = load_config(config_path, preset_config(name));
  cfg.preset = name;
  return cfg;
}

void write_scatter(std::ostream& os, const std::vector<isac::ScatterPoint>& pts) {
  os << "kind,range_m,virtual_angle,amplitude\n";
  for (const auto& p : pts)
    os << p.kind << ',' << isac::format_number(p.range_m) << ',' << isac::format_number(p.virtual_angle) << ','
       << isac::format_number(p.amplitude) << '\n';
}

void dump_measurement_matrix(const isac::ExperimentConfig& cfg, const fs::path& path) {
  const auto trial = isac::make_radar_trial(cfg, isac::trial_seed(cfg, 0));
  const auto& phi = trial.mm.phi_radar;
  auto f = open_out(path);
  f << "row,col,re,im\n";
  for (isac::Index j = 0; j < phi.cols(); ++j)
    for (isac::Index i = 0; i < phi.rows(); ++i)
      f << i << ',' << j << ',' << isac::format_number(phi(i, j).real()) << ','
        << isac::format_number(phi(i, j).imag()) << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ISAC compressed-sampling simulator"};
  app.require_subcommand(1);

  std::string preset, config_path, out_dir = ".";
  std::optional<std::uint64_t> seed;
  std::optional<isac::Index> trials;
  std::optional<unsigned> threads;
  bool trace = false, dump_phi = false;
  auto* run = app.add_subcommand("run", "Run one preset experiment and write its CSV");
  run->add_option("--preset", preset, "fig6|fig7|fig8|fig9|fig10|fig11|fig12|ase");
  run->add_option("--config", config_path, "INI file; keys mirror the ExperimentConfig fields")->check(CLI::ExistingFile);
  run->add_option("--seed", seed, "Master seed");
  run->add_option("--trials", trials, "Monte-Carlo trials");
  run->add_option("--threads", threads, "Worker threads (0: all cores)");
  run->add_option("--out", out_dir, "Output directory");
  run->add_flag("--trace", trace, "Write the OMP-SR iteration trace of trial 0");
  run->add_flag("--dump-measurement-matrix", dump_phi, "Write the radar measurement matrix of trial 0");

  double mu = 0.0, spacing = 0.5;
  isac::Index count = 8, points = 2001;
  auto* profile = app.add_subcommand("profile", "Print |correlation| against a steering vector over [-1, 1)");
  profile->add_option("--mu", mu, "Virtual angle of the reference steering vector")->required();
  profile->add_option("--count", count, "Antennas");
  profile->add_option("--spacing", spacing, "Element spacing in wavelengths");
  profile->add_option("--points", points, "Samples of alpha");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (*profile) {
      if (count < 1 || points < 2) throw isac::ConfigError("profile: count >= 1 and points >= 2 required");
      isac::VectorXd alpha(points);
      for (isac::Index i = 0; i < points; ++i) alpha(i) = -1.0 + 2.0 * static_cast<double>(i) / static_cast<double>(points);
      const isac::VectorXd c = isac::correlation_profile(mu, alpha, count, spacing);
      std::cout << "alpha,value\n";
      for (isac::Index i = 0; i < points; ++i)
        std::cout << isac::format_number(alpha(i)) << ',' << isac::format_number(c(i)) << '\n';
      return 0;
    }

    isac::ExperimentConfig cfg = resolve_config(preset, config_path);
    if (seed) cfg.seed = *seed;
    if (trials) cfg.trials = *trials;
    if (threads) cfg.threads = *threads;
    cfg.validate();

    fs::create_directories(out_dir);
    const fs::path dir(out_dir);
    if (dump_phi) dump_measurement_matrix(cfg, dir / "measurement_matrix.csv");

    const isac::ExperimentOutput result = isac::run_experiment(cfg, trace);
    if (cfg.preset == "fig10") {
      auto f = open_out(dir / "fig10.csv");
      write_scatter(f, result.scatter);
      auto s = open_out(dir / "fig10_summary.csv");
      isac::write_metrics_csv(s, result.records);
    } else {
      auto f = open_out(dir / (cfg.preset + ".csv"));
      isac::write_metrics_csv(f, result.records);
    }
    if (trace) {
      auto f = open_out(dir / (cfg.preset + "_trace.csv"));
      f << "iteration,atom,residual_norm\n";
      for (const auto& e : result.trace)
        f << e.iteration << ',' << e.atom << ',' << isac::format_number(e.residual_norm) << '\n';
    }
    return 0;
  } catch (const isac::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const isac::NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << " (trial seed " << e.seed() << ")\n";
    return kExitNumerical;
  }
}
