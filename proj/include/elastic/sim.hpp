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

#include "elastic/autoscaler.hpp"
#include "elastic/jsa.hpp"
#include "elastic/types.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace elastic {

/// Progress ledger of one job inside the simulator.
struct JobRuntime {
  JobSpec job;
  double remaining_work = 0.0;  // samples
  int current_k = 0;
  int current_b = 0;
  double last_update = 0.0;
  std::optional<double> admitted_at;
  std::optional<double> completed_at;
};

/// Consumes rate * (now - last_update) samples, floored at zero. Throws
/// std::logic_error when time would run backwards.
JobRuntime advance_progress(JobRuntime rt, double now, double rate);

enum class TraceKind { Arrival, Admit, Rescale, Complete, Drop };
std::string_view to_string(TraceKind kind);

struct TraceEvent {
  double time;
  JobId job_id;
  TraceKind kind;
  int k = 0;
  int b = 0;
};

struct JobRecord {
  JobId job_id;
  CategoryId category;
  double arrival_time;
  double total_work;
  double single_gpu_seconds;  // total_work / T_j(b_max, 1)
  int requested_bs;
  std::optional<double> admitted_at;
  std::optional<double> completed_at;
  bool dropped = false;
};

struct GpuUsageSample {
  double time;
  int used;
};

struct SimTrace {
  int total_gpus = 0;
  PolicyConfig policy;
  std::vector<TraceEvent> events;   // processing order
  std::vector<JobRecord> jobs;      // workload order
  std::vector<GpuUsageSample> gpu_usage;
  bool complete = false;
  double end_time = 0.0;
  std::uint64_t events_processed = 0;
  std::uint64_t ticks_fired = 0;

  /// "time,job_id,event,k,b" rows; byte-stable for identical runs.
  std::string to_csv() const;
};

struct SimOptions {
  std::uint64_t max_events = 50'000'000;
};

/// Discrete-event run of the autoscaler over a workload sorted by arrival.
/// Reallocation happens only on ticks every policy.delta_seconds; completions
/// free GPUs at once, which then idle until the next tick.
SimTrace run(std::span<const JobSpec> workload, int total_gpus, const PolicyConfig& policy,
             const CommModel& comm, const SimOptions& options = {});

}  // namespace elastic
