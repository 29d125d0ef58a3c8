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

#include "elastic/metrics.hpp"

#include "elastic/errors.hpp"

#include <algorithm>
#include <cmath>
#include <iterator>
#include <string>
#include <limits>
#include <unordered_map>

namespace elastic {

std::size_t MetricsReport::completed_by(double t) const {
  auto it = std::upper_bound(
      completed_curve.begin(), completed_curve.end(), t,
      [](double x, const std::pair<double, std::size_t>& p) { return x < p.first; });
  return it == completed_curve.begin() ? 0 : std::prev(it)->second;
}

MetricsReport compute_metrics(const SimTrace& trace, std::string label) {
  if (!trace.complete) throw ValidationError("trace", "simulation has not finished");
  MetricsReport r;
  r.label = std::move(label);
  r.total_jobs = trace.jobs.size();

  double jct_sum = 0.0;
  std::vector<double> completions;
  for (const auto& job : trace.jobs) {
    r.job_ids.push_back(job.job_id);
    if (job.dropped) ++r.dropped_jobs;
    if (job.admitted_at) {
      ++r.scheduled_jobs;
      r.opt_sch_time += job.single_gpu_seconds;
    }
    if (job.completed_at) {
      ++r.completed_jobs;
      jct_sum += *job.completed_at - job.arrival_time;
      completions.push_back(*job.completed_at);
    }
  }
  std::sort(r.job_ids.begin(), r.job_ids.end());

  // GPU-seconds: each allocation interval between admit/rescale/complete.
  struct Open {
    double since;
    int k;
  };
  std::unordered_map<JobId, Open> open;
  for (const auto& e : trace.events) {
    switch (e.kind) {
      case TraceKind::Admit: open[e.job_id] = {e.time, e.k}; break;
      case TraceKind::Rescale:
      case TraceKind::Complete: {
        auto it = open.find(e.job_id);
        if (it == open.end())
          throw ValidationError("trace", "job " + std::to_string(e.job_id) +
                                             " changes allocation before admission");
        r.act_sch_time += it->second.k * (e.time - it->second.since);
        if (e.kind == TraceKind::Complete) open.erase(it);
        else it->second = {e.time, e.k};
        break;
      }
      default: break;
    }
  }
  if (!open.empty()) throw ValidationError("trace", "admitted jobs never completed");

  r.sjs_efficiency = r.act_sch_time > 0.0 ? r.opt_sch_time / r.act_sch_time : 0.0;
  r.job_drop_ratio =
      r.total_jobs ? static_cast<double>(r.dropped_jobs) / static_cast<double>(r.total_jobs)
                   : 0.0;
  r.avg_jct = r.completed_jobs ? jct_sum / static_cast<double>(r.completed_jobs) : 0.0;

  std::sort(completions.begin(), completions.end());
  for (std::size_t i = 0; i < completions.size(); ++i) {
    if (!r.completed_curve.empty() && r.completed_curve.back().first == completions[i])
      r.completed_curve.back().second = i + 1;
    else
      r.completed_curve.emplace_back(completions[i], i + 1);
  }
  return r;
}

const RatioLine& Comparison::at(std::string_view metric) const {
  for (const auto& line : lines)
    if (line.metric == metric) return line;
  throw ValidationError("metric", "no ratio named '" + std::string(metric) + "'");
}

namespace {

double ratio(double a, double b) {
  if (a == 0.0 && b == 0.0) return 1.0;
  if (a == 0.0) return std::numeric_limits<double>::infinity();
  return b / a;
}

}  // namespace

Comparison compare_runs(const MetricsReport& a, const MetricsReport& b) {
  if (a.job_ids != b.job_ids) {
    std::vector<JobId> only_a, only_b;
    std::set_difference(a.job_ids.begin(), a.job_ids.end(), b.job_ids.begin(),
                        b.job_ids.end(), std::back_inserter(only_a));
    std::set_difference(b.job_ids.begin(), b.job_ids.end(), a.job_ids.begin(),
                        a.job_ids.end(), std::back_inserter(only_b));
    auto list = [](const std::vector<JobId>& ids) {
      std::string s;
      for (std::size_t i = 0; i < ids.size() && i < 8; ++i)
        s += (i ? "," : "") + std::to_string(ids[i]);
      if (ids.size() > 8) s += ",...";
      return s.empty() ? std::string("none") : s;
    };
    throw ValidationError("job_ids", "mismatched job sets between '" + a.label + "' and '" +
                                         b.label + "': only in first {" + list(only_a) +
                                         "}, only in second {" + list(only_b) + "}");
  }
  Comparison c{a.label, b.label, {}};
  auto add = [&](std::string name, double x, double y) {
    c.lines.push_back({std::move(name), x, y, ratio(x, y)});
  };
  add("jobs_completed", static_cast<double>(a.completed_jobs),
      static_cast<double>(b.completed_jobs));
  add("avg_jct", a.avg_jct, b.avg_jct);
  add("sjs_efficiency", a.sjs_efficiency, b.sjs_efficiency);
  add("job_drop_ratio", a.job_drop_ratio, b.job_drop_ratio);
  return c;
}

}  // namespace elastic
