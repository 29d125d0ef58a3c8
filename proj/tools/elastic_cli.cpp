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

#include <CLI11.hpp>

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <exception>
#include <iostream>
#include <map>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

namespace fs = std::filesystem;
using namespace elastic;

namespace {

struct Overrides {
  std::string config;
  std::string workload;
  std::string out;
  std::optional<std::string> policy;
  std::optional<std::string> mode;
  std::optional<double> delta;
  std::optional<std::uint64_t> seed;
  std::optional<int> repeats;
  std::optional<int> gpus;
  std::optional<int> kmax;
};

void add_common(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--config", o.config, "JSON config file");
  cmd->add_option("--out", o.out, "output path");
  cmd->add_option("--seed", o.seed, "base seed");
  cmd->add_option("--gpus", o.gpus, "cluster size K")->check(CLI::PositiveNumber);
  cmd->add_option("--kmax", o.kmax, "per-job GPU cap")->check(CLI::PositiveNumber);
}

void add_policy(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--policy", o.policy, "batch policy")
      ->check(CLI::IsMember({"elastic", "fixed_batch"}));
  cmd->add_option("--mode", o.mode, "queue handling")->check(CLI::IsMember({"drop", "queue"}));
  cmd->add_option("--delta-seconds", o.delta, "scheduling interval");
}

// An experiment file, or a bare workload config (recognised by a top-level
// category_mix) wrapped in a default experiment.
ExperimentConfig load_experiment(const std::string& path) {
  if (path.empty()) {
    ExperimentConfig c;
    c.workload = fs::path();
    return c;
  }
  json j = read_json_file(path);
  if (j.contains("category_mix")) j = json{{"workload", j}};
  return experiment_from_json(j);
}

void apply(const Overrides& o, ExperimentConfig& c) {
  if (o.gpus) c.cluster.total_gpus = *o.gpus;
  if (o.kmax) c.cluster.k_max = *o.kmax;
  if (o.seed) c.seed = *o.seed;
  if (o.repeats) c.repeats = *o.repeats;
  if (o.policy) c.policy.policy = parse_batch_mode(*o.policy);
  if (o.mode) c.policy.mode = parse_queue_mode(*o.mode);
  if (o.delta) c.policy.delta_seconds = *o.delta;
  if (!o.workload.empty()) c.workload = fs::path(o.workload);
  if (auto* w = std::get_if<WorkloadConfig>(&c.workload)) {
    if (o.kmax) w->k_max = *o.kmax;
    w->seed = c.seed;
  }
  if (!o.out.empty()) c.output = o.out;
  c.validate();
}

WorkloadConfig workload_config(const ExperimentConfig& c) {
  const auto* w = std::get_if<WorkloadConfig>(&c.workload);
  if (!w) throw ValidationError("workload", "config has no workload generator section");
  return *w;
}

int cmd_generate(const Overrides& o) {
  auto c = load_experiment(o.config);
  apply(o, c);
  const auto jobs = generate_workload(workload_config(c));
  const fs::path out = o.out.empty() ? fs::path("workload.json") : fs::path(o.out);
  write_text_file(out, workload_to_json(jobs).dump(1) + "\n");

  std::map<CategoryId, std::size_t> counts;
  for (const auto& j : jobs) ++counts[j.category];
  std::printf("%zu jobs -> %s\n", jobs.size(), out.c_str());
  for (const auto& [id, n] : counts)
    std::printf("  %-5s %6zu  (%.1f%%)\n", to_string(id).data(), n,
                100.0 * static_cast<double>(n) / static_cast<double>(jobs.size()));
  return 0;
}

struct RunSpec {
  std::string label;
  std::vector<JobSpec> jobs;
};

std::string run_label(const PolicyConfig& p, std::optional<std::uint64_t> seed) {
  std::string s = to_string(p.policy) + "_" + to_string(p.mode);
  if (seed) s += "_seed" + std::to_string(*seed);
  return s;
}

int cmd_simulate(const Overrides& o) {
  auto c = load_experiment(o.config);
  apply(o, c);

  std::vector<RunSpec> runs;
  if (const auto* path = std::get_if<fs::path>(&c.workload)) {
    if (path->empty()) throw ValidationError("workload", "pass --workload or a config with one");
    auto jobs = workload_from_json(read_json_file(*path));
    for (auto& j : jobs) j.k_max = std::min(j.k_max, c.cluster.k_max);
    // A fixed workload gives the same run for every seed.
    runs.push_back({run_label(c.policy, std::nullopt), std::move(jobs)});
  } else {
    auto w = workload_config(c);
    for (int i = 0; i < c.repeats; ++i) {
      w.seed = c.seed + static_cast<std::uint64_t>(i);
      runs.push_back({run_label(c.policy, w.seed), generate_workload(w)});
    }
  }
  for (const auto& r : runs)
    for (const auto& j : r.jobs) validate(j, c.cluster.total_gpus);

  const auto comm = CommModel::ring(c.cluster.comm, c.cluster.total_gpus);
  std::vector<std::optional<MetricsReport>> reports(runs.size());
  std::vector<std::exception_ptr> errors(runs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next++) < runs.size();) {
      try {
        const auto trace = run(runs[i].jobs, c.cluster.total_gpus, c.policy, comm);
        auto report = compute_metrics(trace, runs[i].label);
        const fs::path dir = c.output / runs[i].label;
        write_text_file(dir / "trace.csv", trace.to_csv());
        write_text_file(dir / "summary.json", trace_summary_to_json(trace).dump(1) + "\n");
        write_text_file(dir / "report.json", report_to_json(report).dump(1) + "\n");
        write_text_file(dir / "curve.csv", curve_to_csv(report));
        reports[i] = std::move(report);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const std::size_t n_threads =
      std::min<std::size_t>(runs.size(), std::max(1u, std::thread::hardware_concurrency()));
  std::vector<std::thread> pool;
  for (std::size_t t = 0; t < n_threads; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);

  for (const auto& r : reports)
    std::printf("%-28s completed %5zu  dropped %5zu  SJS %.4f  avg JCT %.1f min  -> %s\n",
                r->label.c_str(), r->completed_jobs, r->dropped_jobs, r->sjs_efficiency,
                r->avg_jct / 60.0, (c.output / r->label / "report.json").c_str());
  return 0;
}

int cmd_optimize(const Overrides& o, const std::string& positional) {
  const std::string path = o.config.empty() ? positional : o.config;
  if (path.empty()) throw ValidationError("config", "pass an optimize request file");
  auto f = optimize_request_from_json(read_json_file(path));
  if (o.gpus) f.request.total_gpus = *o.gpus;
  if (o.policy) f.request.mode = parse_batch_mode(*o.policy);
  if (o.kmax)
    for (auto& j : f.request.jobs) j.k_max = std::min(j.k_max, *o.kmax);
  f.request.validate();
  const auto comm = CommModel::ring(f.comm, f.request.total_gpus);
  const std::string text = allocation_to_json(optimize(f.request, comm)).dump(1) + "\n";
  std::fputs(text.c_str(), stdout);
  if (!o.out.empty()) write_text_file(o.out, text);
  return 0;
}

int cmd_report(const std::vector<std::string>& paths, const std::string& out) {
  std::vector<MetricsReport> reports;
  for (const auto& p : paths) {
    reports.push_back(report_from_json(read_json_file(p)));
    if (reports.back().label.empty()) reports.back().label = fs::path(p).parent_path().filename();
  }
  std::vector<Comparison> comparisons;
  for (std::size_t i = 1; i < reports.size(); ++i)
    comparisons.push_back(compare_runs(reports[0], reports[i]));

  std::size_t width = 5;
  for (const auto& r : reports) width = std::max(width, r.label.size());
  std::printf("%-*s %8s %9s %8s %10s %8s %12s\n", static_cast<int>(width), "label", "jobs",
              "completed", "dropped", "drop_ratio", "sjs", "avg_jct_min");
  std::ostringstream csv;
  csv << "label,total_jobs,completed_jobs,dropped_jobs,job_drop_ratio,sjs_efficiency,"
         "avg_jct_seconds\n";
  for (const auto& r : reports) {
    std::printf("%-*s %8zu %9zu %8zu %10.4f %8.4f %12.2f\n", static_cast<int>(width),
                r.label.c_str(), r.total_jobs, r.completed_jobs, r.dropped_jobs,
                r.job_drop_ratio, r.sjs_efficiency, r.avg_jct / 60.0);
    csv << r.label << ',' << r.total_jobs << ',' << r.completed_jobs << ',' << r.dropped_jobs
        << ',' << r.job_drop_ratio << ',' << r.sjs_efficiency << ',' << r.avg_jct << '\n';
  }
  for (const auto& cmp : comparisons) {
    std::printf("\n%s / %s\n", cmp.label_b.c_str(), cmp.label_a.c_str());
    for (const auto& line : cmp.lines)
      std::printf("  %-16s %14.4f %14.4f %10.4f\n", line.metric.c_str(), line.a, line.b,
                  line.ratio);
  }
  write_text_file(out, csv.str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Elastic GPU cluster scheduling simulator"};
  app.require_subcommand(1);

  Overrides gen, sim, opt;
  auto* generate = app.add_subcommand("generate", "write a synthetic workload file");
  add_common(generate, gen);

  auto* simulate = app.add_subcommand("simulate", "run simulations and write reports");
  add_common(simulate, sim);
  add_policy(simulate, sim);
  simulate->add_option("--workload", sim.workload, "workload JSON file");
  simulate->add_option("--repeats", sim.repeats, "number of seeds")->check(CLI::PositiveNumber);

  auto* optimize_cmd = app.add_subcommand("optimize", "solve one allocation request");
  std::string request_path;
  add_common(optimize_cmd, opt);
  optimize_cmd->add_option("--policy", opt.policy, "batch policy")
      ->check(CLI::IsMember({"elastic", "fixed_batch"}));
  optimize_cmd->add_option("request", request_path, "request JSON file");

  auto* report = app.add_subcommand("report", "compare metrics reports");
  std::vector<std::string> report_paths;
  std::string report_out = "report.csv";
  report->add_option("reports", report_paths, "report.json files")->required();
  report->add_option("--out", report_out, "CSV output path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (*generate) return cmd_generate(gen);
    if (*simulate) return cmd_simulate(sim);
    if (*optimize_cmd) return cmd_optimize(opt, request_path);
    if (*report) return cmd_report(report_paths, report_out);
  } catch (const ValidationError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 2;
}
