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
#include "elastic/io.hpp"
#include "test_helpers.hpp"

#include <gtest/gtest.h>

#include <filesystem>

namespace elastic {
namespace {

std::string field_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const ValidationError& e) {
    return e.field();
  }
  return "<no error>";
}

TEST(Io, FixtureLoads) {
  auto fx = load_profile_fixture(ELASTIC_FIXTURE_DIR "/cat1_p100.json");
  EXPECT_EQ(fx.category, CategoryId::Cat1);
  EXPECT_EQ(fx.profile.bpg_cap(), 32);
  EXPECT_EQ(fx.profile.size(), 8);
  EXPECT_EQ(fx.profile.t_proc()(7), 0.095);
}

TEST(Io, MissingFileIsRuntimeError) {
  EXPECT_THROW(read_json_file("/nonexistent/x.json"), std::runtime_error);
}

TEST(Io, JobRoundTrip) {
  auto job = testing::category_job(CategoryId::Cat3, 42, 10, 12345.5, 77.25);
  job.requested_bs = 96;
  auto back = job_from_json(json::parse(job_to_json(job).dump()));
  EXPECT_EQ(back.job_id, 42);
  EXPECT_EQ(back.arrival_time, 77.25);
  EXPECT_EQ(back.category, CategoryId::Cat3);
  EXPECT_EQ(back.requested_bs, 96);
  EXPECT_EQ(back.total_work, 12345.5);
  EXPECT_EQ(back.weight_count, job.weight_count);
  EXPECT_EQ(*back.profile, *job.profile);
}

TEST(Io, JobErrorsNameTheField) {
  auto j = job_to_json(testing::category_job(CategoryId::Cat1, 1));
  auto bad = j;
  bad.erase("total_work");
  EXPECT_EQ(field_of([&] { job_from_json(bad); }), "total_work");
  bad = j;
  bad["category"] = "Cat9";
  EXPECT_EQ(field_of([&] { job_from_json(bad); }), "category");
  bad = j;
  bad["k_max"] = "ten";
  EXPECT_EQ(field_of([&] { job_from_json(bad); }), "k_max");
  bad = j;
  bad["profile"]["grid"] = json::array({json::array({8, 0.2}), json::array({4, 0.1})});
  EXPECT_EQ(field_of([&] { job_from_json(bad); }), "profile");
  EXPECT_EQ(field_of([&] { workload_from_json(json::object()); }), "workload");
}

TEST(Io, WorkloadConfigRoundTripAndAuto) {
  WorkloadConfig c;
  for (auto id : kAllCategories) c.category_mix[id] = 0.25;
  c.base_rate_lambda = 0.01;
  c.pattern = ArrivalPattern::Bursty;
  c.batch_policy = BatchPolicy::MinBS;
  auto back = workload_config_from_json(workload_config_to_json(c));
  EXPECT_EQ(workload_config_to_json(back).dump(), workload_config_to_json(c).dump());

  json j = {{"horizon", 3600}, {"base_rate_lambda", "auto"}, {"lambda_multiplier", 3},
            {"category_mix", {{"Cat1", 1.0}}}};
  auto a = workload_config_from_json(j);
  EXPECT_DOUBLE_EQ(a.base_rate_lambda, 3.0 / (16 * 60.0));
  j["base_rate_lambda"] = "fast";
  EXPECT_EQ(field_of([&] { workload_config_from_json(j); }), "base_rate_lambda");
  j["base_rate_lambda"] = 0.1;
  j["category_mix"] = json::object();
  EXPECT_EQ(field_of([&] { workload_config_from_json(j); }), "category_mix");
  j["category_mix"] = {{"Cat1", 1.0}};
  j["pattern"] = "spiky";
  EXPECT_EQ(field_of([&] { workload_config_from_json(j); }), "pattern");
}

TEST(Io, PolicyRoundTrip) {
  PolicyConfig p;
  p.mode = QueueMode::Queue;
  p.policy = BatchMode::FixedBatch;
  p.delta_seconds = 900;
  p.restart_penalty_seconds = 30;
  auto back = policy_from_json(policy_to_json(p));
  EXPECT_EQ(back.mode, p.mode);
  EXPECT_EQ(back.policy, p.policy);
  EXPECT_EQ(back.delta_seconds, 900);
  EXPECT_EQ(back.restart_penalty_seconds, 30);
  EXPECT_EQ(field_of([] { policy_from_json({{"mode", "later"}}); }), "mode");
  EXPECT_EQ(field_of([] { policy_from_json({{"delta_seconds", 0}}); }), "delta_seconds");
}

TEST(Io, ExperimentConfig) {
  json j = {{"cluster", {{"total_gpus", 40}, {"k_max", 8}, {"comm", {{"alpha", 0.01}}}}},
            {"policy", {{"mode", "queue"}}},
            {"repeats", 3},
            {"seed", 7},
            {"workload", {{"horizon", 3600}, {"base_rate_lambda", 0.01},
                          {"category_mix", {{"Cat2", 1.0}}}}}};
  auto c = experiment_from_json(j);
  EXPECT_EQ(c.cluster.total_gpus, 40);
  EXPECT_EQ(c.cluster.comm.alpha, 0.01);
  EXPECT_EQ(c.cluster.comm.beta, default_comm_params().beta);
  EXPECT_EQ(c.policy.mode, QueueMode::Queue);
  const auto& w = std::get<WorkloadConfig>(c.workload);
  EXPECT_EQ(w.k_max, 8);
  EXPECT_EQ(w.seed, 7u);
  auto again = experiment_from_json(experiment_to_json(c));
  EXPECT_EQ(experiment_to_json(again).dump(), experiment_to_json(c).dump());

  j["cluster"]["k_max"] = 50;
  EXPECT_EQ(field_of([&] { experiment_from_json(j); }), "total_gpus");
  j["cluster"]["k_max"] = 8;
  j["repeats"] = 0;
  EXPECT_EQ(field_of([&] { experiment_from_json(j); }), "repeats");
  j["repeats"] = 1;
  j["workload"] = "jobs.json";
  EXPECT_EQ(std::get<std::filesystem::path>(experiment_from_json(j).workload), "jobs.json");
}

TEST(Io, OptimizeRequestAndAllocation) {
  auto job = testing::category_job(CategoryId::Cat1, 5, 4);
  json j = {{"total_gpus", 4}, {"mode", "elastic"}, {"jobs", json::array({job_to_json(job)})}};
  auto f = optimize_request_from_json(j);
  EXPECT_EQ(f.request.total_gpus, 4);
  ASSERT_EQ(f.request.jobs.size(), 1u);
  auto a = optimize(f.request, CommModel::ring(f.comm, 4));
  auto out = allocation_to_json(a);
  EXPECT_EQ(out["status"], "feasible");
  EXPECT_EQ(out["jobs"][0]["job_id"], 5);
  EXPECT_EQ(allocation_to_json(Allocation{})["status"], "infeasible");
  j["jobs"] = json::array();
  EXPECT_EQ(field_of([&] { optimize_request_from_json(j); }), "jobs");
}

TEST(Io, ReportRoundTripAndCsv) {
  MetricsReport r;
  r.label = "elastic";
  r.opt_sch_time = 100;
  r.act_sch_time = 125;
  r.sjs_efficiency = 0.8;
  r.avg_jct = 33.5;
  r.total_jobs = 3;
  r.completed_jobs = 2;
  r.completed_curve = {{10.5, 1}, {20, 2}};
  r.job_ids = {0, 1, 2};
  auto back = report_from_json(report_to_json(r));
  EXPECT_EQ(report_to_json(back).dump(), report_to_json(r).dump());
  EXPECT_EQ(curve_to_csv(r), "time,count,label\n10.500000,1,elastic\n20.000000,2,elastic\n");
}

TEST(Io, ComparisonJsonUsesNullForInfinity) {
  MetricsReport a, b;
  b.completed_jobs = 3;
  auto j = comparison_to_json(compare_runs(a, b));
  EXPECT_TRUE(j["ratios"][0]["ratio"].is_null());
  EXPECT_EQ(j["ratios"][1]["ratio"], 1.0);
}

TEST(Io, WriteCreatesParentDirectories) {
  const auto dir = std::filesystem::temp_directory_path() / "elastic_io_test" / "nested";
  std::filesystem::remove_all(dir.parent_path());
  write_text_file(dir / "x.txt", "hello");
  EXPECT_TRUE(std::filesystem::exists(dir / "x.txt"));
  std::filesystem::remove_all(dir.parent_path());
}

}  // namespace
}  // namespace elastic
