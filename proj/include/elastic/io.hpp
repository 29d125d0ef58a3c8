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

// JSON and CSV formats for workloads, profiles, configs, allocations,
// traces and reports.

#include "elastic/autoscaler.hpp"
#include "elastic/jsa.hpp"
#include "elastic/metrics.hpp"
#include "elastic/optimizer.hpp"
#include "elastic/sim.hpp"
#include "elastic/workload.hpp"

#include <json.hpp>

#include <filesystem>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace elastic {

using json = nlohmann::json;

json read_json_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);

std::string to_string(ArrivalPattern p);
std::string to_string(BatchPolicy p);
std::string to_string(QueueMode m);
std::string to_string(BatchMode m);
ArrivalPattern parse_pattern(const std::string& s);
BatchPolicy parse_batch_policy(const std::string& s);
QueueMode parse_queue_mode(const std::string& s);
BatchMode parse_batch_mode(const std::string& s);

json profile_to_json(const ProcessingProfile& p);
ProcessingProfile profile_from_json(const json& j);

/// Calibration fixture: {category, grid: [[bpg, t_proc]...], bpg_cap,
/// comm: {alpha, beta}}.
struct ProfileFixture {
  CategoryId category;
  ProcessingProfile profile;
  CommParams comm;
};
ProfileFixture load_profile_fixture(const std::filesystem::path& path);
ProfileFixture profile_fixture_from_json(const json& j);

json comm_params_to_json(const CommParams& c);
CommParams comm_params_from_json(const json& j);

json job_to_json(const JobSpec& job);
JobSpec job_from_json(const json& j);
json workload_to_json(const std::vector<JobSpec>& jobs);
std::vector<JobSpec> workload_from_json(const json& j);

json workload_config_to_json(const WorkloadConfig& c);
WorkloadConfig workload_config_from_json(const json& j);

json policy_to_json(const PolicyConfig& p);
PolicyConfig policy_from_json(const json& j);

struct ClusterConfig {
  int total_gpus = 40;
  int k_max = 10;
  CommParams comm = default_comm_params();
};

/// Everything one experiment needs. `workload` is either an inline
/// generator config or a path to a workload file.
struct ExperimentConfig {
  std::variant<WorkloadConfig, std::filesystem::path> workload;
  ClusterConfig cluster;
  PolicyConfig policy;
  std::filesystem::path output = "out";
  int repeats = 1;
  std::uint64_t seed = 1;

  void validate() const;
};
ExperimentConfig experiment_from_json(const json& j);
json experiment_to_json(const ExperimentConfig& c);

/// {total_gpus, mode, comm: {alpha, beta}, jobs: [...]}.
struct OptimizeRequestFile {
  AllocationRequest request;
  CommParams comm;
};
OptimizeRequestFile optimize_request_from_json(const json& j);
json allocation_to_json(const Allocation& a);

json trace_summary_to_json(const SimTrace& t);

json report_to_json(const MetricsReport& r);
MetricsReport report_from_json(const json& j);

/// "time,count,label" rows.
std::string curve_to_csv(const MetricsReport& r);

json comparison_to_json(const Comparison& c);

}  // namespace elastic
