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

#include "isac/types.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <exception>
#include <iosfwd>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace isac {

/// Runs body(i) for 0 <= i < count on up to `threads` workers (0: hardware concurrency).
/// The first exception thrown by any body is rethrown after all workers joined.
template <typename Body>
void parallel_for(Index count, unsigned threads, Body&& body) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<Index>(threads, std::max<Index>(count, 1)));
  if (threads <= 1) {
    for (Index i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<Index> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&] {
    for (Index i = next++; i < count; i = next++) {
      try {
        body(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
        next = count;
      }
    }
  };
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

/// Welford mean/variance with a merge step; merging is order-independent up to rounding,
/// so the harness always folds per-trial values in trial order.
class RunningStats {
 public:
  void add(double x) {
    ++n_;
    const double d = x - mean_;
    mean_ += d / static_cast<double>(n_);
    m2_ += d * (x - mean_);
  }
  void merge(const RunningStats& o) {
    if (o.n_ == 0) return;
    const std::uint64_t n = n_ + o.n_;
    const double d = o.mean_ - mean_;
    mean_ += d * static_cast<double>(o.n_) / static_cast<double>(n);
    m2_ += o.m2_ + d * d * static_cast<double>(n_) * static_cast<double>(o.n_) / static_cast<double>(n);
    n_ = n;
  }
  std::uint64_t count() const { return n_; }
  double mean() const { return mean_; }
  /// Sample standard deviation; 0 for fewer than two values.
  double stddev() const { return n_ > 1 ? std::sqrt(m2_ / static_cast<double>(n_ - 1)) : 0.0; }

 private:
  std::uint64_t n_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
};

RunningStats summarize(const std::vector<double>& values);

struct MetricRecord {
  std::string experiment;
  std::string sweep_name;
  double sweep_value = 0.0;
  std::string metric;
  double mean = 0.0;
  double std = 0.0;
  std::uint64_t trials = 0;
  std::uint64_t seed = 0;
};

MetricRecord make_record(const std::string& experiment, const std::string& sweep_name, double sweep_value,
                         const std::string& metric, const std::vector<double>& values, std::uint64_t seed);

/// Shortest round-trip decimal representation.
std::string format_number(double v);

void write_metrics_csv(std::ostream& out, const std::vector<MetricRecord>& records);

}  // namespace isac
