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


#include "elastic/errors.hpp"
#include "elastic/metrics.hpp"
#include "elastic/sim.hpp"
#include "test_helpers.hpp"

#include <gtest/gtest.h>

#include <cmath>

namespace elastic {
namespace {

JobRecord record(JobId id, double arrival, double single, std::optional<double> admit,
                 std::optional<double> done, bool dropped = false) {
  return {id, CategoryId::Cat1, arrival, 1e5, single, 32, admit, done, dropped};
}

TEST(Metrics, WorkedExampleTenVersusTwelve) {
  SimTrace t;
  t.total_gpus = 2;
  t.complete = true;
  t.jobs = {record(0, 0, 600, 0.0, 360.0)};
  t.events = {{0, 0, TraceKind::Arrival, 0, 32},
              {0, 0, TraceKind::Admit, 2, 64},
              {360, 0, TraceKind::Complete, 2, 64}};
  auto m = compute_metrics(t, "x");
  EXPECT_DOUBLE_EQ(m.opt_sch_time, 600);
  EXPECT_DOUBLE_EQ(m.act_sch_time, 720);
  EXPECT_DOUBLE_EQ(m.sjs_efficiency, 10.0 / 12.0);
  EXPECT_EQ(m.job_drop_ratio, 0.0);
  EXPECT_EQ(m.label, "x");
}

TEST(Metrics, RescaleIntervalsAccumulate) {
  SimTrace t;
  t.complete = true;
  t.jobs = {record(0, 0, 1000, 0.0, 300.0)};
  t.events = {{0, 0, TraceKind::Admit, 1, 32},
              {100, 0, TraceKind::Rescale, 4, 128},
              {300, 0, TraceKind::Complete, 4, 128}};
  EXPECT_DOUBLE_EQ(compute_metrics(t).act_sch_time, 100 + 4 * 200);
}

TEST(Metrics, JctIncludesQueueWaitAndDropsCount) {
  SimTrace t;
  t.complete = true;
  t.jobs = {record(0, 10, 100, 600.0, 700.0), record(1, 20, 100, std::nullopt, std::nullopt, true),
            record(2, 30, 100, 600.0, 650.0), record(3, 40, 100, std::nullopt, std::nullopt, true)};
  t.events = {{600, 0, TraceKind::Admit, 1, 32}, {600, 2, TraceKind::Admit, 1, 32},
              {650, 2, TraceKind::Complete, 1, 32}, {700, 0, TraceKind::Complete, 1, 32}};
  auto m = compute_metrics(t);
  EXPECT_DOUBLE_EQ(m.avg_jct, ((700 - 10) + (650 - 30)) / 2.0);
  EXPECT_GE(m.avg_jct, 600 - 30);
  EXPECT_DOUBLE_EQ(m.job_drop_ratio, 0.5);
  EXPECT_EQ(m.scheduled_jobs, 2u);
  EXPECT_DOUBLE_EQ(m.opt_sch_time, 200);
  ASSERT_EQ(m.completed_curve.size(), 2u);
  EXPECT_EQ(m.completed_curve.front(), (std::pair<double, std::size_t>{650, 1}));
  EXPECT_EQ(m.completed_curve.back(), (std::pair<double, std::size_t>{700, 2}));
  EXPECT_EQ(m.completed_by(649.9), 0u);
  EXPECT_EQ(m.completed_by(650), 1u);
  EXPECT_EQ(m.completed_by(1e9), 2u);
  EXPECT_EQ(m.job_ids, (std::vector<JobId>{0, 1, 2, 3}));
}

TEST(Metrics, IncompleteTraceIsError) {
  SimTrace t;
  EXPECT_THROW(compute_metrics(t), ValidationError);
  t.complete = true;
  t.jobs = {record(0, 0, 100, 0.0, std::nullopt)};
  t.events = {{0, 0, TraceKind::Admit, 1, 32}};
  EXPECT_THROW(compute_metrics(t), ValidationError);
}

TEST(Metrics, SingleJobOnOneGpuIsPerfectlyEfficient) {
  auto comm = CommModel::ring(default_comm_params(), 1);
  for (auto id : kAllCategories) {
    auto job = testing::category_job(id, 0, 1, 2e5);
    PolicyConfig p;
    p.mode = QueueMode::Queue;
    auto m = compute_metrics(run(std::vector<JobSpec>{job}, 1, p, comm));
    EXPECT_NEAR(m.sjs_efficiency, 1.0, 1e-12) << to_string(id);
  }
}

TEST(Metrics, SimulatedRunsHaveFiniteSjsAndMonotoneCurve) {
  WorkloadConfig c;
  c.horizon = 3 * 3600;
  c.pattern = ArrivalPattern::Bursty;
  for (auto id : kAllCategories) c.category_mix[id] = 0.25;
  c.base_rate_lambda = 3 * reference_base_rate(c);
  auto jobs = generate_workload(c);
  auto comm = CommModel::ring(default_comm_params(), 40);
  PolicyConfig p;
  auto m = compute_metrics(run(jobs, 40, p, comm));
  EXPECT_GT(m.sjs_efficiency, 0.0);
  EXPECT_TRUE(std::isfinite(m.sjs_efficiency));
  for (std::size_t i = 1; i < m.completed_curve.size(); ++i) {
    EXPECT_LT(m.completed_curve[i - 1].first, m.completed_curve[i].first);
    EXPECT_LT(m.completed_curve[i - 1].second, m.completed_curve[i].second);
  }
  ASSERT_FALSE(m.completed_curve.empty());
  EXPECT_EQ(m.completed_curve.back().second, m.completed_jobs);
  EXPECT_EQ(m.total_jobs, jobs.size());
}

MetricsReport report(std::string label, std::size_t completed, double jct, double sjs,
                     double drop) {
  MetricsReport r;
  r.label = std::move(label);
  r.completed_jobs = completed;
  r.avg_jct = jct;
  r.sjs_efficiency = sjs;
  r.job_drop_ratio = drop;
  r.job_ids = {1, 2, 3};
  return r;
}

TEST(Compare, IdenticalReportsGiveUnitRatios) {
  auto a = report("a", 10, 100, 0.8, 0.1);
  auto c = compare_runs(a, a);
  ASSERT_EQ(c.lines.size(), 4u);
  for (const auto& l : c.lines) EXPECT_EQ(l.ratio, 1.0) << l.metric;
}

TEST(Compare, DropRatioArithmetic) {
  auto c = compare_runs(report("elastic", 10, 30, 0.9, 0.10),
                        report("baseline", 7, 350, 0.4, 0.40));
  EXPECT_DOUBLE_EQ(c.at("job_drop_ratio").ratio, 4.0);
  EXPECT_GT(c.at("avg_jct").ratio, 1.0);
  EXPECT_DOUBLE_EQ(c.at("jobs_completed").ratio, 0.7);
  EXPECT_EQ(c.label_a, "elastic");
  EXPECT_THROW(c.at("nope"), ValidationError);
}

TEST(Compare, ZeroDenominators) {
  auto c = compare_runs(report("a", 0, 0, 0, 0), report("b", 5, 0, 0, 0.2));
  EXPECT_EQ(c.at("avg_jct").ratio, 1.0);
  EXPECT_TRUE(std::isinf(c.at("jobs_completed").ratio));
}

TEST(Compare, MismatchedWorkloadsNameTheIds) {
  auto a = report("a", 1, 1, 1, 0);
  auto b = a;
  b.job_ids = {1, 2, 4};
  try {
    compare_runs(a, b);
    FAIL();
  } catch (const ValidationError& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find("{3}"), std::string::npos) << msg;
    EXPECT_NE(msg.find("{4}"), std::string::npos) << msg;
  }
}

}  // namespace
}  // namespace elastic
