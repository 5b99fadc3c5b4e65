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

#include "isac/config.hpp"
#include "isac/dictionary.hpp"
#include "isac/doppler.hpp"
#include "isac/harness.hpp"
#include "isac/ofdm.hpp"
#include "isac/recovery.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace isac {

/// Preset defaults; a config file is applied on top of these.
ExperimentConfig preset_config(const std::string& preset);
const std::vector<std::string>& preset_names();

struct Dictionaries {
  Dictionary wsa;
  Dictionary cu;
  Dictionary ut;
};

Index grid_size(Index antennas, double ratio);
Dictionaries build_dictionaries(const ExperimentConfig& cfg);

std::uint64_t trial_seed(const ExperimentConfig& cfg, Index trial);

// ---- radar ----------------------------------------------------------------

struct RadarTrial {
  ChannelRealization channel;
  CirTensor truth;  // H̄_SD at t = 0
  PilotFrame frame;
  MeasurementMatrices mm;  // radar part only
  double noise_power = 0.0;
  std::uint64_t noise_seed = 0;
};

RadarTrial make_radar_trial(const ExperimentConfig& cfg, std::uint64_t seed);

/// Same noise realization for every quantizer.
RadarObservation observe(const RadarTrial& trial, const QuantizerSpec& q);

enum class Solver { OmpSr, Omp, BlockOmp };

RecoveryResult recover(const ExperimentConfig& cfg, const Dictionaries& dicts, const RadarTrial& trial,
                       const RadarObservation& obs, Solver solver, const std::vector<Index>& snapshots = {},
                       bool trace = false);

struct ScatterPoint {
  std::string kind;  // truth, omp_sr, omp
  double range_m = 0.0;
  double virtual_angle = 0.0;
  double amplitude = 0.0;
};

struct SensingSnapshot {
  std::vector<ScatterPoint> truth;
  std::vector<ScatterPoint> omp_sr;  // gated
  std::vector<ScatterPoint> omp;     // gated
  double gate = 0.0;
};

/// One point-target realization: truth and amplitude-gated estimates of both OMP variants.
SensingSnapshot sensing_snapshot(const ExperimentConfig& cfg, std::uint64_t seed);

// ---- communication --------------------------------------------------------

struct UserLink {
  ChannelRealization channel;
  LosEstimate estimate;
};

/// `count` UTs sharing one downlink pilot block; each runs the single-step estimator.
std::vector<UserLink> make_users(const ExperimentConfig& cfg, const Dictionaries& dicts, Index count, bool los_only,
                                 std::uint64_t seed);

struct DopplerOutcome {
  std::vector<double> estimate;  // f_hat per UT, Hz
  std::vector<double> sq_error;  // |2 pi T_D (f_hat - f)|^2 per UT
  std::vector<double> crb;       // single-tone bound at each UT's own snr
  std::vector<char> reliable;    // energy gate verdict
  std::vector<char> resolved;    // CE found the LoS path (see los_resolved)
};

/// True when the estimate lies within one grid step of the LoS angles on both sides and its
/// tap covers the LoS pulse peak (|tap - (tau + tau_p) / T_s| < 1).
bool los_resolved(const LosEstimate& est, const ChannelRealization& ch, const Dictionaries& dicts,
                  double sampling_period, double pulse_half_duration);

DopplerOutcome doppler_trial(const ExperimentConfig& cfg, const Dictionaries& dicts, const std::vector<UserLink>& users,
                             double ut_power_dbm, Index pilots, std::uint64_t seed);

struct BerSetup {
  std::vector<DopplerGroup> groups;  // served UT, beamformed
  double f_true = 0.0;
  double f_hat = 0.0;
  bool reliable = true;
  double los_gain = 0.0;
};

BerSetup make_ber_setup(const ExperimentConfig& cfg, const Dictionaries& dicts, std::uint64_t seed);

enum class Compensation { None, Perfect, Estimated };

/// snr_db: per-subcarrier LoS SNR, P_DL mean|H_LoS,k|^2 / sigma^2.
BerCount ber_run(const ExperimentConfig& cfg, const BerSetup& setup, Compensation mode, double snr_db,
                 std::uint64_t seed);

// ---- presets ---------------------------------------------------------------

struct ExperimentOutput {
  std::vector<MetricRecord> records;
  std::vector<ScatterPoint> scatter;
  std::vector<TraceEntry> trace;
};

ExperimentOutput run_fig6(const ExperimentConfig& cfg);
ExperimentOutput run_fig7(const ExperimentConfig& cfg);
ExperimentOutput run_fig8(const ExperimentConfig& cfg);
ExperimentOutput run_fig9(const ExperimentConfig& cfg);
ExperimentOutput run_fig10(const ExperimentConfig& cfg);
ExperimentOutput run_fig11(const ExperimentConfig& cfg);
ExperimentOutput run_fig12(const ExperimentConfig& cfg);
ExperimentOutput run_ase(const ExperimentConfig& cfg);

/// Dispatches on cfg.preset; throws ConfigError for unknown presets.
ExperimentOutput run_experiment(const ExperimentConfig& cfg, bool trace = false);

/// CU codebook sizes reachable with a dwell T > T_GI, i.e. n = ceil(P / T); ascending, capped at max_size.
std::vector<Index> feasible_codebook_sizes(Index pilot_length, Index guard, Index max_size);

/// Smallest dwell T > T_GI with ceil(P / T) = n, or 0 when there is none.
Index dwell_for_codebook_size(Index pilot_length, Index guard, Index n);

}  // namespace isac
