/* Copyright 2026 The elastic-sched Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include "elastic/sim.hpp"
#include "elastic/types.hpp"

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

namespace elastic {

struct MetricsReport {
  std::string label;
  double opt_sch_time = 0.0;    // GPU-seconds
  double act_sch_time = 0.0;    // GPU-seconds
  double sjs_efficiency = 0.0;  // opt / act
  double job_drop_ratio = 0.0;
  double avg_jct = 0.0;         // seconds, arrival to completion
  std::size_t total_jobs = 0;
  std::size_t scheduled_jobs = 0;
  std::size_t completed_jobs = 0;
  std::size_t dropped_jobs = 0;
  std::vector<std::pair<double, std::size_t>> completed_curve;
  std::vector<JobId> job_ids;  // sorted; identifies the workload

  /// Completions at or before t.
  std::size_t completed_by(double t) const;
};

/// Throws ValidationError if the trace is not from a finished simulation.
MetricsReport compute_metrics(const SimTrace& trace, std::string label = {});

struct RatioLine {
  std::string metric;
  double a;
  double b;
  double ratio;  // b / a; 1 when both are zero
};

struct Comparison {
  std::string label_a;
  std::string label_b;
  std::vector<RatioLine> lines;

  const RatioLine& at(std::string_view metric) const;
};

/// Pairwise ratios of jobs completed, avg JCT, SJS and drop ratio. Throws
/// ValidationError naming the differing job ids when workloads differ.
Comparison compare_runs(const MetricsReport& a, const MetricsReport& b);

}  // namespace elastic
