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
#include "elastic/optimizer.hpp"
#include "elastic/types.hpp"

#include <memory>
#include <vector>

namespace elastic {

enum class QueueMode { Drop, Queue };

struct PolicyConfig {
  QueueMode mode = QueueMode::Drop;
  BatchMode policy = BatchMode::Elastic;
  double delta_seconds = 600.0;
  double restart_penalty_seconds = 0.0;

  void validate() const;
};

/// A job as seen by the autoscaler: its spec plus the scaling table the
/// analyzer attached on arrival.
struct ScheduledJob {
  JobSpec spec;
  JobTable table;
};
using JobHandle = std::shared_ptr<const ScheduledJob>;

/// Runs the analyzer on an arriving job under the given batch policy.
JobHandle analyze_arrival(const JobSpec& spec, const CommModel& comm, BatchMode mode,
                          int total_gpus);

struct ExecutingJob {
  JobHandle job;
  int k = 0;
  int b = 0;
  double factor = 0.0;
};

struct SchedulerState {
  std::vector<ExecutingJob> executing;  // admission order
  std::vector<JobHandle> arrived;       // FIFO
  std::vector<JobId> finished;          // since the last tick
  std::vector<JobId> dropped;
  QueueMode mode = QueueMode::Drop;
  double delta = 600.0;
  double last_tick = 0.0;
};

enum class ActionKind { Spawn, Rescale, NoChange, Drop };

struct ScalingAction {
  ActionKind kind;
  JobId job_id;
  int new_k = 0;
  int new_b = 0;

  bool operator==(const ScalingAction&) const = default;
};

struct TickResult {
  SchedulerState state;
  std::vector<ScalingAction> actions;
};

/// true iff a full period has elapsed and there is something to decide.
bool should_tick(double now, const SchedulerState& state);

/// One autoscaler pass. Finished jobs leave; each arrival is tried in FIFO
/// order against the executing set and admitted iff the optimizer finds the
/// trial set feasible. Infeasible arrivals are dropped (Drop) or kept
/// (Queue). Executing jobs then adopt the optimum for the final set.
/// `finished` is cleared; last_tick is left to the caller.
TickResult make_scaling_decisions(const SchedulerState& state, int total_gpus);

}  // namespace elastic
