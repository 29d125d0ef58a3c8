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

#include "elastic/sim.hpp"

#include "elastic/errors.hpp"

#include <algorithm>
#include <cstdio>
#include <queue>
#include <stdexcept>
#include <unordered_map>

namespace elastic {

JobRuntime advance_progress(JobRuntime rt, double now, double rate) {
  const double elapsed = now - rt.last_update;
  if (elapsed < 0.0) throw std::logic_error("advance_progress: negative elapsed time");
  if (elapsed > 0.0) rt.remaining_work = std::max(0.0, rt.remaining_work - rate * elapsed);
  rt.last_update = now;
  return rt;
}

std::string_view to_string(TraceKind kind) {
  switch (kind) {
    case TraceKind::Arrival: return "arrival";
    case TraceKind::Admit: return "admit";
    case TraceKind::Rescale: return "rescale";
    case TraceKind::Complete: return "complete";
    case TraceKind::Drop: return "drop";
  }
  return "?";
}

std::string SimTrace::to_csv() const {
  std::string out = "time,job_id,event,k,b\n";
  char line[128];
  for (const auto& e : events) {
    std::snprintf(line, sizeof line, "%.6f,%lld,%s,%d,%d\n", e.time,
                  static_cast<long long>(e.job_id), to_string(e.kind).data(), e.k, e.b);
    out += line;
  }
  return out;
}

namespace {

// Same-time ordering: arrivals, then completions, then the tick.
enum class EventKind : int { Arrival = 0, Completion = 1, Tick = 2 };

struct Event {
  double time;
  EventKind kind;
  JobId job_id;
  std::uint64_t generation;
};

struct Later {
  bool operator()(const Event& a, const Event& b) const {
    if (a.time != b.time) return a.time > b.time;
    if (a.kind != b.kind) return a.kind > b.kind;
    return a.job_id > b.job_id;
  }
};

struct Slot {
  JobRuntime rt;
  double rate = 0.0;
  double remaining_at_tick = 0.0;
  std::uint64_t generation = 0;
  bool running = false;
};

class Simulation {
 public:
  Simulation(std::span<const JobSpec> workload, int total_gpus, const PolicyConfig& policy,
             const CommModel& comm, const SimOptions& options)
      : workload_(workload), total_gpus_(total_gpus), policy_(policy), comm_(comm),
        options_(options) {
    state_.mode = policy.mode;
    state_.delta = policy.delta_seconds;
    state_.last_tick = 0.0;
    trace_.total_gpus = total_gpus;
    trace_.policy = policy;
    slots_.reserve(workload.size());
    for (std::size_t i = 0; i < workload.size(); ++i) {
      const auto& job = workload[i];
      index_.emplace(job.job_id, i);
      Slot slot;
      slot.rt.job = job;
      slot.rt.remaining_work = job.total_work;
      slots_.push_back(std::move(slot));
      const double base = baseline_rate(job, comm);
      trace_.jobs.push_back({job.job_id, job.category, job.arrival_time, job.total_work,
                             is_infeasible(base) ? 0.0 : job.total_work / base,
                             job.requested_bs, std::nullopt, std::nullopt, false});
      events_.push({job.arrival_time, EventKind::Arrival, job.job_id, 0});
    }
    if (!workload.empty()) schedule_tick(1);
  }

  SimTrace finish() && {
    while (!events_.empty()) {
      if (++trace_.events_processed > options_.max_events)
        throw SimulationError("event cap of " + std::to_string(options_.max_events) +
                              " exceeded");
      const Event ev = events_.top();
      events_.pop();
      now_ = ev.time;
      switch (ev.kind) {
        case EventKind::Arrival: on_arrival(ev.job_id); break;
        case EventKind::Completion: on_completion(ev.job_id, ev.generation); break;
        case EventKind::Tick: on_tick(); break;
      }
    }
    trace_.complete = true;
    trace_.end_time = now_;
    return std::move(trace_);
  }

 private:
  Slot& slot(JobId id) { return slots_[index_.at(id)]; }

  void schedule_tick(std::uint64_t n) {
    next_tick_ = n;
    events_.push({static_cast<double>(n) * policy_.delta_seconds, EventKind::Tick, 0, 0});
  }

  void record(JobId id, TraceKind kind, int k = 0, int b = 0) {
    trace_.events.push_back({now_, id, kind, k, b});
  }

  void sample_usage() {
    if (!trace_.gpu_usage.empty() && trace_.gpu_usage.back().time == now_)
      trace_.gpu_usage.back().used = gpus_in_use_;
    else
      trace_.gpu_usage.push_back({now_, gpus_in_use_});
  }

  void on_arrival(JobId id) {
    ++arrived_count_;
    const auto& s = slot(id);
    record(id, TraceKind::Arrival, 0, s.rt.job.requested_bs);
    state_.arrived.push_back(
        analyze_arrival(s.rt.job, comm_, policy_.policy, total_gpus_));
  }

  void on_completion(JobId id, std::uint64_t generation) {
    Slot& s = slot(id);
    if (!s.running || s.generation != generation) return;  // superseded
    s.rt = advance_progress(std::move(s.rt), now_, s.rate);
    s.rt.remaining_work = 0.0;
    s.rt.completed_at = now_;
    s.running = false;
    gpus_in_use_ -= s.rt.current_k;
    record(id, TraceKind::Complete, s.rt.current_k, s.rt.current_b);
    trace_.jobs[index_.at(id)].completed_at = now_;
    state_.finished.push_back(id);
    sample_usage();
  }

  void schedule_completion(Slot& s) {
    ++s.generation;
    const double eta = now_ + s.rt.remaining_work / s.rate;
    events_.push({eta, EventKind::Completion, s.rt.job.job_id, s.generation});
  }

  void on_tick() {
    if (should_tick(now_, state_)) fire_tick();
    const bool pending = arrived_count_ < workload_.size() || !state_.arrived.empty() ||
                         !state_.finished.empty() || running_count() > 0;
    if (pending) schedule_tick(next_tick_ + 1);
  }

  std::size_t running_count() const {
    return static_cast<std::size_t>(std::count_if(
        slots_.begin(), slots_.end(), [](const Slot& s) { return s.running; }));
  }

  void fire_tick() {
    ++trace_.ticks_fired;
    for (auto& e : state_.executing) {
      Slot& s = slot(e.job->spec.job_id);
      if (s.running) s.rt = advance_progress(std::move(s.rt), now_, s.rate);
    }

    TickResult result = make_scaling_decisions(state_, total_gpus_);
    state_ = std::move(result.state);
    state_.last_tick = now_;

    for (const auto& action : result.actions) {
      Slot& s = slot(action.job_id);
      switch (action.kind) {
        case ActionKind::Drop:
          record(action.job_id, TraceKind::Drop);
          trace_.jobs[index_.at(action.job_id)].dropped = true;
          break;
        case ActionKind::NoChange:
          break;
        case ActionKind::Spawn:
          s.rt.admitted_at = now_;
          trace_.jobs[index_.at(action.job_id)].admitted_at = now_;
          s.rt.last_update = now_;
          s.running = true;
          apply_allocation(s, action);
          record(action.job_id, TraceKind::Admit, action.new_k, action.new_b);
          break;
        case ActionKind::Rescale: {
          if (policy_.restart_penalty_seconds > 0.0) {
            const double since_tick = s.remaining_at_tick - s.rt.remaining_work;
            const double lost =
                std::min(policy_.restart_penalty_seconds * s.rate, std::max(since_tick, 0.0));
            s.rt.remaining_work = std::min(s.rt.job.total_work, s.rt.remaining_work + lost);
          }
          apply_allocation(s, action);
          record(action.job_id, TraceKind::Rescale, action.new_k, action.new_b);
          break;
        }
      }
    }
    gpus_in_use_ = 0;
    for (auto& e : state_.executing) {
      Slot& s = slot(e.job->spec.job_id);
      s.remaining_at_tick = s.rt.remaining_work;
      gpus_in_use_ += s.rt.current_k;
    }
    if (gpus_in_use_ > total_gpus_) throw SimulationError("GPU budget exceeded");
    sample_usage();

    if (running_count() == 0 && !state_.arrived.empty() &&
        arrived_count_ == workload_.size())
      throw SimulationError("stalled: " + std::to_string(state_.arrived.size()) +
                            " queued jobs fit on no allocation of the idle cluster");
  }

  void apply_allocation(Slot& s, const ScalingAction& action) {
    s.rt.current_k = action.new_k;
    s.rt.current_b = action.new_b;
    s.rate = processing_rate({s.rt.job, action.new_b, action.new_k}, comm_);
    if (is_infeasible(s.rate) || !(s.rate > 0.0))
      throw SimulationError("optimizer chose an infeasible configuration");
    schedule_completion(s);
  }

  std::span<const JobSpec> workload_;
  int total_gpus_;
  PolicyConfig policy_;
  const CommModel& comm_;
  SimOptions options_;

  SchedulerState state_;
  SimTrace trace_;
  std::vector<Slot> slots_;
  std::unordered_map<JobId, std::size_t> index_;
  std::priority_queue<Event, std::vector<Event>, Later> events_;
  double now_ = 0.0;
  std::uint64_t next_tick_ = 0;
  std::size_t arrived_count_ = 0;
  int gpus_in_use_ = 0;
};

}  // namespace

SimTrace run(std::span<const JobSpec> workload, int total_gpus, const PolicyConfig& policy,
             const CommModel& comm, const SimOptions& options) {
  if (total_gpus < 1) throw ValidationError("total_gpus", "must be >= 1");
  policy.validate();
  for (std::size_t i = 0; i < workload.size(); ++i) {
    validate(workload[i], total_gpus);
    if (i > 0 && workload[i].arrival_time < workload[i - 1].arrival_time)
      throw ValidationError("arrival_time", "workload must be sorted by arrival");
  }
  return Simulation(workload, total_gpus, policy, comm, options).finish();
}

}  // namespace elastic
