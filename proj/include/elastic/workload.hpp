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

#include "elastic/jsa.hpp"
#include "elastic/types.hpp"

#include <cstdint>
#include <map>
#include <vector>

namespace elastic {

enum class ArrivalPattern { High, Low, Bursty };
enum class BatchPolicy { MaxBS, MinBS, RandomBS };

/// Benchmark row for one category (weights, batch range, boundedness).
JobCategory category_template(CategoryId id);

/// Stochastic arrival workload description. Rates follow the benchmark
/// definitions: High = k_max * lambda, Low = lambda * k_max / 4, Bursty
/// alternates High and Low every `burst_period` seconds starting with High.
struct WorkloadConfig {
  double horizon = 4 * 3600.0;  // seconds
  double base_rate_lambda = 0.0;  // jobs / s
  ArrivalPattern pattern = ArrivalPattern::High;
  double burst_period = 3600.0;
  std::map<CategoryId, double> category_mix;
  int k_max = 10;
  BatchPolicy batch_policy = BatchPolicy::RandomBS;
  std::uint64_t seed = 1;

  /// Single-GPU length of each category at its baseline batch, seconds.
  std::map<CategoryId, double> job_length_seconds = default_job_lengths();
  std::map<CategoryId, HardwareParams> hardware = default_hardware_table();
  int grid_points = 8;

  static std::map<CategoryId, double> default_job_lengths();
  static std::map<CategoryId, HardwareParams> default_hardware_table();

  /// Throws ValidationError naming the offending field.
  void validate() const;
};

/// Mean arrival rate in force at time t.
double arrival_rate(const WorkloadConfig& config, double t);

/// Reciprocal of the expected single-GPU job length under the category mix.
double reference_base_rate(const WorkloadConfig& config);

/// Shared per-category profiles built from the config's hardware table.
std::map<CategoryId, ProfilePtr> build_profiles(const WorkloadConfig& config);

/// Sorted by arrival_time (job ids ascending). Deterministic given the seed.
///
/// Draws consume a single mt19937_64 in a fixed order per job: inter-arrival
/// gap(s), category, then requested batch.
std::vector<JobSpec> generate_workload(const WorkloadConfig& config);

}  // namespace elastic
