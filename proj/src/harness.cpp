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

#include "isac/harness.hpp"

#include <charconv>
#include <ostream>

namespace isac {

RunningStats summarize(const std::vector<double>& values) {
  RunningStats s;
  for (double v : values) s.add(v);
  return s;
}

MetricRecord make_record(const std::string& experiment, const std::string& sweep_name, double sweep_value,
                         const std::string& metric, const std::vector<double>& values, std::uint64_t seed) {
  const RunningStats s = summarize(values);
  return {experiment, sweep_name, sweep_value, metric, s.mean(), s.stddev(), s.count(), seed};
}

std::string format_number(double v) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, r.ptr);
}

void write_metrics_csv(std::ostream& out, const std::vector<MetricRecord>& records) {
  out << "experiment,sweep_name,sweep_value,metric,mean,std,trials,seed\n";
  for (const auto& r : records)
    out << r.experiment << ',' << r.sweep_name << ',' << format_number(r.sweep_value) << ',' << r.metric << ','
        << format_number(r.mean) << ',' << format_number(r.std) << ',' << r.trials << ',' << r.seed << '\n';
}

}  // namespace isac
