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
#include "test_helpers.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <unordered_set>

namespace elastic {
namespace {

using testing::affine_profile;
using testing::make_job;

const CommModel& comm() {
  static const CommModel c = CommModel::ring(default_comm_params(), 16);
  return c;
}

JobHandle handle(const JobSpec& spec, int K, BatchMode mode = BatchMode::Elastic) {
  return analyze_arrival(spec, comm(), mode, K);
}

JobSpec small_job(JobId id, int k_max) {
  return make_job(id, 8, 64, k_max, affine_profile({8, 16, 32}, 0.01, 400.0, 32));
}

int gpus_used(const SchedulerState& s) {
  int n = 0;
  for (const auto& e : s.executing) n += e.k;
  return n;
}

TEST(ShouldTick, Boundaries) {
  SchedulerState s;
  s.delta = 600;
  s.last_tick = 1200;
  s.arrived.push_back(handle(small_job(1, 2), 4));
  EXPECT_TRUE(should_tick(1800, s));
  EXPECT_FALSE(should_tick(1799.99, s));
  s.arrived.clear();
  EXPECT_FALSE(should_tick(1800, s));
  s.finished.push_back(3);
  EXPECT_TRUE(should_tick(1800, s));
}

TEST(Decisions, CapacityTwoAdmitsFirstTwo) {
  for (auto mode : {QueueMode::Drop, QueueMode::Queue}) {
    SchedulerState s;
    s.mode = mode;
    for (JobId id : {1, 2, 3}) s.arrived.push_back(handle(small_job(id, 2), 2));
    auto r = make_scaling_decisions(s, 2);
    ASSERT_EQ(r.state.executing.size(), 2u);
    EXPECT_EQ(r.state.executing[0].job->spec.job_id, 1);
    EXPECT_EQ(r.state.executing[1].job->spec.job_id, 2);
    EXPECT_EQ(gpus_used(r.state), 2);
    if (mode == QueueMode::Drop) {
      EXPECT_TRUE(r.state.arrived.empty());
      EXPECT_EQ(r.state.dropped, std::vector<JobId>{3});
      EXPECT_EQ(r.actions.front(), (ScalingAction{ActionKind::Drop, 3, 0, 0}));
    } else {
      ASSERT_EQ(r.state.arrived.size(), 1u);
      EXPECT_EQ(r.state.arrived[0]->spec.job_id, 3);
      EXPECT_TRUE(r.state.dropped.empty());
      for (const auto& a : r.actions) EXPECT_NE(a.kind, ActionKind::Drop);
    }
    for (const auto& a : r.actions)
      if (a.job_id != 3) EXPECT_EQ(a.kind, ActionKind::Spawn);
  }
}

TEST(Decisions, FinishedJobFreesGpusForRescale) {
  SchedulerState s;
  for (JobId id : {1, 2, 3}) s.arrived.push_back(handle(small_job(id, 4), 6));
  auto r = make_scaling_decisions(s, 6);
  ASSERT_EQ(r.state.executing.size(), 3u);
  const auto before = r.state.executing;

  SchedulerState next = r.state;
  next.finished = {3};
  auto r2 = make_scaling_decisions(next, 6);
  ASSERT_EQ(r2.state.executing.size(), 2u);
  EXPECT_TRUE(r2.state.finished.empty());
  for (std::size_t i = 0; i < 2; ++i) {
    EXPECT_GE(r2.state.executing[i].k, before[i].k);
    const auto& a = r2.actions[i];
    EXPECT_EQ(a.job_id, before[i].job->spec.job_id);
    EXPECT_NE(a.kind, ActionKind::Spawn);
  }
  EXPECT_GE(gpus_used(r2.state), gpus_used(r.state) - before[2].k);
}

TEST(Decisions, InfeasibleCandidateDoesNotBlockLaterOnes) {
  // Huge fixed batch needs 8 GPUs; the next job needs one.
  auto big = make_job(1, 256, 256, 8, affine_profile({32}, 0.01, 400.0, 32));
  auto small = small_job(2, 1);
  SchedulerState s;
  s.mode = QueueMode::Queue;
  s.arrived = {handle(big, 4), handle(small, 4)};
  auto r = make_scaling_decisions(s, 4);
  ASSERT_EQ(r.state.executing.size(), 1u);
  EXPECT_EQ(r.state.executing[0].job->spec.job_id, 2);
  ASSERT_EQ(r.state.arrived.size(), 1u);
  EXPECT_EQ(r.state.arrived[0]->spec.job_id, 1);
}

TEST(Decisions, IdempotentWithoutChanges) {
  SchedulerState s;
  for (JobId id : {1, 2, 3, 4}) s.arrived.push_back(handle(small_job(id, 4), 8));
  auto r = make_scaling_decisions(s, 8);
  auto r2 = make_scaling_decisions(r.state, 8);
  for (const auto& a : r2.actions) EXPECT_EQ(a.kind, ActionKind::NoChange);
  ASSERT_EQ(r2.state.executing.size(), r.state.executing.size());
  for (std::size_t i = 0; i < r.state.executing.size(); ++i) {
    EXPECT_EQ(r2.state.executing[i].k, r.state.executing[i].k);
    EXPECT_EQ(r2.state.executing[i].b, r.state.executing[i].b);
  }
}

TEST(Decisions, KeepsLastTickAndInputUntouched) {
  SchedulerState s;
  s.last_tick = 1234;
  s.arrived.push_back(handle(small_job(1, 2), 4));
  const auto copy = s.arrived;
  auto r = make_scaling_decisions(s, 4);
  EXPECT_EQ(r.state.last_tick, 1234);
  EXPECT_EQ(s.arrived, copy);
  EXPECT_TRUE(s.executing.empty());
}

TEST(Decisions, FixedBatchPolicyKeepsRequestedBatch) {
  auto j = small_job(1, 4);
  j.requested_bs = 32;
  SchedulerState s;
  s.arrived.push_back(handle(j, 4, BatchMode::FixedBatch));
  auto r = make_scaling_decisions(s, 4);
  ASSERT_EQ(r.state.executing.size(), 1u);
  EXPECT_EQ(r.state.executing[0].b, 32);
}

// Random tick sequences: state invariants plus equality with a fresh solve
// of the final executing set.
TEST(Decisions, RandomizedTicksMatchOptimizer) {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 100; ++trial) {
    const int K = std::uniform_int_distribution<int>(2, 16)(rng);
    SchedulerState s;
    s.mode = trial % 2 ? QueueMode::Queue : QueueMode::Drop;
    JobId next_id = 0;
    std::size_t generated = 0;
    std::unordered_set<JobId> completed;
    for (int tick = 0; tick < 6; ++tick) {
      const int arrivals = std::uniform_int_distribution<int>(0, 5)(rng);
      for (int a = 0; a < arrivals; ++a) {
        auto job = testing::random_job(rng, next_id++, std::min(K, 6));
        s.arrived.push_back(handle(job, K));
        ++generated;
      }
      if (!s.executing.empty() && std::uniform_int_distribution<int>(0, 2)(rng) == 0) {
        const JobId done = s.executing.front().job->spec.job_id;
        s.finished.push_back(done);
        completed.insert(done);
      }
      const std::vector<JobHandle> queued_before = s.arrived;
      auto r = make_scaling_decisions(s, K);
      s = r.state;

      EXPECT_LE(gpus_used(s), K);
      if (s.mode == QueueMode::Drop) EXPECT_TRUE(s.arrived.empty());
      for (const auto& a : r.actions)
        if (s.mode == QueueMode::Queue) EXPECT_NE(a.kind, ActionKind::Drop);

      // Remaining queue preserves arrival order.
      std::size_t pos = 0;
      for (const auto& q : s.arrived) {
        while (pos < queued_before.size() && queued_before[pos] != q) ++pos;
        ASSERT_LT(pos, queued_before.size());
      }

      std::unordered_set<JobId> seen;
      for (const auto& e : s.executing) EXPECT_TRUE(seen.insert(e.job->spec.job_id).second);
      for (const auto& q : s.arrived) EXPECT_TRUE(seen.insert(q->spec.job_id).second);
      for (JobId d : s.dropped) EXPECT_TRUE(seen.insert(d).second);

      EXPECT_EQ(completed.size() + s.executing.size() + s.arrived.size() + s.dropped.size(),
                generated);

      if (!s.executing.empty()) {
        std::vector<JobTable> tables;
        for (const auto& e : s.executing) tables.push_back(e.job->table);
        auto a = optimize(tables, K);
        ASSERT_TRUE(a.feasible());
        for (std::size_t i = 0; i < s.executing.size(); ++i) {
          EXPECT_EQ(s.executing[i].k, a.jobs[i].k);
          EXPECT_EQ(s.executing[i].b, a.jobs[i].b);
        }
      }
    }
  }
}

TEST(Policy, Validation) {
  PolicyConfig p;
  EXPECT_NO_THROW(p.validate());
  EXPECT_EQ(p.delta_seconds, 600.0);
  p.delta_seconds = 0;
  EXPECT_THROW(p.validate(), ValidationError);
  p.delta_seconds = 600;
  p.restart_penalty_seconds = -1;
  EXPECT_THROW(p.validate(), ValidationError);
}

}  // namespace
}  // namespace elastic
