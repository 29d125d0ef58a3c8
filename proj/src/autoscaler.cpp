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

#include "elastic/autoscaler.hpp"

#include "elastic/errors.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>
#include <unordered_set>

namespace elastic {

void PolicyConfig::validate() const {
  if (!(delta_seconds > 0.0) || !std::isfinite(delta_seconds))
    throw ValidationError("delta_seconds", "must be > 0");
  if (!(restart_penalty_seconds >= 0.0))
    throw ValidationError("restart_penalty_seconds", "must be >= 0");
}

JobHandle analyze_arrival(const JobSpec& spec, const CommModel& comm, BatchMode mode,
                          int total_gpus) {
  return std::make_shared<const ScheduledJob>(
      ScheduledJob{spec, tabulate_job(spec, comm, mode, total_gpus)});
}

bool should_tick(double now, const SchedulerState& state) {
  return now - state.last_tick >= state.delta &&
         (!state.arrived.empty() || !state.finished.empty());
}

TickResult make_scaling_decisions(const SchedulerState& state, int total_gpus) {
  TickResult out;
  SchedulerState& next = out.state;
  next.mode = state.mode;
  next.delta = state.delta;
  next.last_tick = state.last_tick;
  next.dropped = state.dropped;

  const std::unordered_set<JobId> finished(state.finished.begin(), state.finished.end());
  std::unordered_map<JobId, ExecutingJob> previous;
  for (const auto& e : state.executing) {
    if (finished.contains(e.job->spec.job_id)) continue;
    previous.emplace(e.job->spec.job_id, e);
    next.executing.push_back(e);
  }

  IncrementalAllocator dp(total_gpus);
  for (const auto& e : next.executing) dp.push(e.job->table);

  for (const auto& candidate : state.arrived) {
    if (dp.feasible_with(candidate->table)) {
      dp.push(candidate->table);
      next.executing.push_back({candidate, 0, 0, 0.0});
    } else if (state.mode == QueueMode::Drop) {
      next.dropped.push_back(candidate->spec.job_id);
      out.actions.push_back({ActionKind::Drop, candidate->spec.job_id, 0, 0});
    } else {
      next.arrived.push_back(candidate);
    }
  }

  if (next.executing.empty()) return out;

  const Allocation alloc = dp.allocation();
  // The executing set stays feasible: it was feasible before this tick and
  // removing jobs or adding feasible candidates keeps it so.
  if (!alloc.feasible())
    throw SimulationError("executing set became infeasible");

  for (std::size_t i = 0; i < next.executing.size(); ++i) {
    auto& e = next.executing[i];
    const auto& a = alloc.jobs[i];
    const JobId id = e.job->spec.job_id;
    e.k = a.k;
    e.b = a.b;
    e.factor = a.factor;
    auto it = previous.find(id);
    ActionKind kind = ActionKind::Spawn;
    if (it != previous.end())
      kind = (it->second.k == a.k && it->second.b == a.b) ? ActionKind::NoChange
                                                          : ActionKind::Rescale;
    out.actions.push_back({kind, id, a.k, a.b});
  }
  return out;
}

}  // namespace elastic
