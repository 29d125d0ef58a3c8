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

#include "elastic/io.hpp"

#include "elastic/errors.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace elastic {

namespace {

const json& require(const json& j, const char* name) {
  if (!j.is_object()) throw ValidationError(name, "expected an enclosing JSON object");
  auto it = j.find(name);
  if (it == j.end()) throw ValidationError(name, "missing");
  return *it;
}

template <typename T>
T field(const json& j, const char* name) {
  const json& v = require(j, name);
  try {
    return v.get<T>();
  } catch (const json::exception& e) {
    throw ValidationError(name, e.what());
  }
}

template <typename T>
T field_or(const json& j, const char* name, T fallback) {
  if (!j.is_object() || !j.contains(name)) return fallback;
  return field<T>(j, name);
}

template <typename E, typename Parse>
E enum_field_or(const json& j, const char* name, E fallback, Parse parse) {
  if (!j.is_object() || !j.contains(name)) return fallback;
  try {
    return parse(field<std::string>(j, name));
  } catch (const ValidationError& e) {
    throw ValidationError(name, e.what());
  }
}

double finite_number(double v, const char* name) {
  if (!std::isfinite(v)) throw ValidationError(name, "must be finite");
  return v;
}

json optional_time(const std::optional<double>& t) { return t ? json(*t) : json(nullptr); }

}  // namespace

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ValidationError(path.string(), e.what());
  }
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
  if (!out) throw std::runtime_error("failed writing " + path.string());
}

std::string to_string(ArrivalPattern p) {
  switch (p) {
    case ArrivalPattern::High: return "high";
    case ArrivalPattern::Low: return "low";
    case ArrivalPattern::Bursty: return "bursty";
  }
  return "?";
}

std::string to_string(BatchPolicy p) {
  switch (p) {
    case BatchPolicy::MaxBS: return "max_bs";
    case BatchPolicy::MinBS: return "min_bs";
    case BatchPolicy::RandomBS: return "random_bs";
  }
  return "?";
}

std::string to_string(QueueMode m) { return m == QueueMode::Drop ? "drop" : "queue"; }
std::string to_string(BatchMode m) {
  return m == BatchMode::Elastic ? "elastic" : "fixed_batch";
}

ArrivalPattern parse_pattern(const std::string& s) {
  if (s == "high") return ArrivalPattern::High;
  if (s == "low") return ArrivalPattern::Low;
  if (s == "bursty") return ArrivalPattern::Bursty;
  throw ValidationError("pattern", "expected high|low|bursty, got '" + s + "'");
}

BatchPolicy parse_batch_policy(const std::string& s) {
  if (s == "max_bs") return BatchPolicy::MaxBS;
  if (s == "min_bs") return BatchPolicy::MinBS;
  if (s == "random_bs") return BatchPolicy::RandomBS;
  throw ValidationError("batch_policy", "expected max_bs|min_bs|random_bs, got '" + s + "'");
}

QueueMode parse_queue_mode(const std::string& s) {
  if (s == "drop") return QueueMode::Drop;
  if (s == "queue") return QueueMode::Queue;
  throw ValidationError("mode", "expected drop|queue, got '" + s + "'");
}

BatchMode parse_batch_mode(const std::string& s) {
  if (s == "elastic") return BatchMode::Elastic;
  if (s == "fixed_batch") return BatchMode::FixedBatch;
  throw ValidationError("policy", "expected elastic|fixed_batch, got '" + s + "'");
}

json profile_to_json(const ProcessingProfile& p) {
  json grid = json::array();
  for (Eigen::Index i = 0; i < p.size(); ++i)
    grid.push_back({static_cast<int>(p.bpg()(i)), p.t_proc()(i)});
  return {{"grid", grid}, {"bpg_cap", p.bpg_cap()}};
}

ProcessingProfile profile_from_json(const json& j) {
  const json& grid = require(j, "grid");
  if (!grid.is_array()) throw ValidationError("grid", "expected [[bpg, t_proc], ...]");
  std::vector<std::pair<int, double>> samples;
  for (const auto& row : grid) {
    if (!row.is_array() || row.size() != 2 || !row[0].is_number() || !row[1].is_number())
      throw ValidationError("grid", "expected [[bpg, t_proc], ...]");
    samples.emplace_back(row[0].get<int>(), row[1].get<double>());
  }
  try {
    return ProcessingProfile(std::move(samples), field<int>(j, "bpg_cap"));
  } catch (const ProfileError& e) {
    throw ValidationError("profile", e.what());
  }
}

json comm_params_to_json(const CommParams& c) {
  return {{"alpha", c.alpha}, {"beta", c.beta}};
}

CommParams comm_params_from_json(const json& j) {
  CommParams c;
  c.alpha = finite_number(field_or<double>(j, "alpha", c.alpha), "alpha");
  c.beta = finite_number(field_or<double>(j, "beta", c.beta), "beta");
  if (c.alpha < 0.0) throw ValidationError("alpha", "must be >= 0");
  if (c.beta < 0.0) throw ValidationError("beta", "must be >= 0");
  return c;
}

ProfileFixture profile_fixture_from_json(const json& j) {
  return {parse_category(field<std::string>(j, "category")), profile_from_json(j),
          comm_params_from_json(require(j, "comm"))};
}

ProfileFixture load_profile_fixture(const std::filesystem::path& path) {
  return profile_fixture_from_json(read_json_file(path));
}

json job_to_json(const JobSpec& job) {
  return {{"job_id", job.job_id},
          {"arrival_time", job.arrival_time},
          {"category", std::string(to_string(job.category))},
          {"min_bs", job.min_bs},
          {"max_bs", job.max_bs},
          {"requested_bs", job.requested_bs},
          {"k_max", job.k_max},
          {"weight_count", job.weight_count},
          {"total_work", job.total_work},
          {"profile", job.profile ? profile_to_json(*job.profile) : json(nullptr)}};
}

JobSpec job_from_json(const json& j) {
  JobSpec job;
  job.job_id = field<JobId>(j, "job_id");
  job.arrival_time = finite_number(field<double>(j, "arrival_time"), "arrival_time");
  job.category = parse_category(field<std::string>(j, "category"));
  const auto cat = category_template(job.category);
  job.min_bs = field_or<int>(j, "min_bs", cat.min_bs);
  job.max_bs = field_or<int>(j, "max_bs", cat.max_bs);
  job.requested_bs = field_or<int>(j, "requested_bs", job.max_bs);
  job.k_max = field<int>(j, "k_max");
  job.weight_count = field_or<std::int64_t>(j, "weight_count", cat.weight_count);
  job.total_work = finite_number(field<double>(j, "total_work"), "total_work");
  job.profile = std::make_shared<const ProcessingProfile>(profile_from_json(require(j, "profile")));
  validate(job);
  return job;
}

json workload_to_json(const std::vector<JobSpec>& jobs) {
  json out = json::array();
  for (const auto& job : jobs) out.push_back(job_to_json(job));
  return out;
}

std::vector<JobSpec> workload_from_json(const json& j) {
  if (!j.is_array()) throw ValidationError("workload", "expected a JSON array of jobs");
  std::vector<JobSpec> jobs;
  jobs.reserve(j.size());
  for (const auto& row : j) jobs.push_back(job_from_json(row));
  return jobs;
}

json workload_config_to_json(const WorkloadConfig& c) {
  json mix = json::object(), lengths = json::object(), hw = json::object();
  for (const auto& [id, p] : c.category_mix) mix[std::string(to_string(id))] = p;
  for (const auto& [id, s] : c.job_length_seconds) lengths[std::string(to_string(id))] = s;
  for (const auto& [id, h] : c.hardware)
    hw[std::string(to_string(id))] = {{"fixed_overhead", h.fixed_overhead},
                                      {"sample_throughput", h.sample_throughput},
                                      {"bpg_cap", h.bpg_cap}};
  return {{"horizon", c.horizon},
          {"base_rate_lambda", c.base_rate_lambda},
          {"pattern", to_string(c.pattern)},
          {"burst_period", c.burst_period},
          {"category_mix", mix},
          {"k_max", c.k_max},
          {"batch_policy", to_string(c.batch_policy)},
          {"seed", c.seed},
          {"job_length_seconds", lengths},
          {"hardware", hw},
          {"grid_points", c.grid_points}};
}

WorkloadConfig workload_config_from_json(const json& j) {
  WorkloadConfig c;
  c.horizon = field<double>(j, "horizon");
  c.pattern = enum_field_or(j, "pattern", c.pattern, parse_pattern);
  c.burst_period = field_or<double>(j, "burst_period", c.burst_period);
  c.k_max = field_or<int>(j, "k_max", c.k_max);
  c.batch_policy = enum_field_or(j, "batch_policy", c.batch_policy, parse_batch_policy);
  c.seed = field_or<std::uint64_t>(j, "seed", c.seed);
  c.grid_points = field_or<int>(j, "grid_points", c.grid_points);

  const json& mix = require(j, "category_mix");
  if (!mix.is_object()) throw ValidationError("category_mix", "expected {category: p}");
  for (const auto& [name, p] : mix.items()) {
    if (!p.is_number()) throw ValidationError("category_mix", "probabilities must be numbers");
    c.category_mix[parse_category(name)] = p.get<double>();
  }
  if (j.contains("job_length_seconds")) {
    for (const auto& [name, s] : j.at("job_length_seconds").items()) {
      if (!s.is_number()) throw ValidationError("job_length_seconds", "expected numbers");
      c.job_length_seconds[parse_category(name)] = s.get<double>();
    }
  }
  if (j.contains("hardware")) {
    for (const auto& [name, h] : j.at("hardware").items()) {
      auto& hw = c.hardware[parse_category(name)];
      hw.fixed_overhead = field_or<double>(h, "fixed_overhead", hw.fixed_overhead);
      hw.sample_throughput = field_or<double>(h, "sample_throughput", hw.sample_throughput);
      hw.bpg_cap = field_or<int>(h, "bpg_cap", hw.bpg_cap);
    }
  }

  // "auto" ties lambda to the mix's expected single-GPU completion rate.
  const json& lambda = require(j, "base_rate_lambda");
  if (lambda.is_string()) {
    if (lambda.get<std::string>() != "auto")
      throw ValidationError("base_rate_lambda", "expected a number or \"auto\"");
    c.base_rate_lambda =
        reference_base_rate(c) * field_or<double>(j, "lambda_multiplier", 1.0);
  } else {
    c.base_rate_lambda = field<double>(j, "base_rate_lambda");
  }
  c.validate();
  return c;
}

json policy_to_json(const PolicyConfig& p) {
  return {{"mode", to_string(p.mode)},
          {"policy", to_string(p.policy)},
          {"delta_seconds", p.delta_seconds},
          {"restart_penalty_seconds", p.restart_penalty_seconds}};
}

PolicyConfig policy_from_json(const json& j) {
  PolicyConfig p;
  p.mode = enum_field_or(j, "mode", p.mode, parse_queue_mode);
  p.policy = enum_field_or(j, "policy", p.policy, parse_batch_mode);
  p.delta_seconds = field_or<double>(j, "delta_seconds", p.delta_seconds);
  p.restart_penalty_seconds =
      field_or<double>(j, "restart_penalty_seconds", p.restart_penalty_seconds);
  p.validate();
  return p;
}

void ExperimentConfig::validate() const {
  if (cluster.k_max < 1) throw ValidationError("k_max", "must be >= 1");
  if (cluster.total_gpus < cluster.k_max)
    throw ValidationError("total_gpus", "must be >= k_max");
  if (repeats < 1) throw ValidationError("repeats", "must be >= 1");
  policy.validate();
  if (const auto* w = std::get_if<WorkloadConfig>(&workload)) w->validate();
}

ExperimentConfig experiment_from_json(const json& j) {
  ExperimentConfig c;
  if (j.contains("cluster")) {
    const json& cl = j.at("cluster");
    c.cluster.total_gpus = field_or<int>(cl, "total_gpus", c.cluster.total_gpus);
    c.cluster.k_max = field_or<int>(cl, "k_max", c.cluster.k_max);
    if (cl.contains("comm")) c.cluster.comm = comm_params_from_json(cl.at("comm"));
  }
  if (j.contains("policy")) c.policy = policy_from_json(j.at("policy"));
  c.output = field_or<std::string>(j, "output", c.output.string());
  c.repeats = field_or<int>(j, "repeats", c.repeats);
  c.seed = field_or<std::uint64_t>(j, "seed", c.seed);
  if (j.contains("workload")) {
    const json& w = j.at("workload");
    if (w.is_string()) {
      c.workload = std::filesystem::path(w.get<std::string>());
    } else {
      json wj = w;
      if (!wj.contains("k_max")) wj["k_max"] = c.cluster.k_max;
      if (!wj.contains("seed")) wj["seed"] = c.seed;
      c.workload = workload_config_from_json(wj);
    }
  } else {
    c.workload = std::filesystem::path();
  }
  c.validate();
  return c;
}

json experiment_to_json(const ExperimentConfig& c) {
  json out = {{"cluster",
               {{"total_gpus", c.cluster.total_gpus},
                {"k_max", c.cluster.k_max},
                {"comm", comm_params_to_json(c.cluster.comm)}}},
              {"policy", policy_to_json(c.policy)},
              {"output", c.output.string()},
              {"repeats", c.repeats},
              {"seed", c.seed}};
  if (const auto* w = std::get_if<WorkloadConfig>(&c.workload))
    out["workload"] = workload_config_to_json(*w);
  else
    out["workload"] = std::get<std::filesystem::path>(c.workload).string();
  return out;
}

OptimizeRequestFile optimize_request_from_json(const json& j) {
  OptimizeRequestFile f;
  f.request.total_gpus = field<int>(j, "total_gpus");
  f.request.mode = enum_field_or(j, "mode", BatchMode::Elastic, parse_batch_mode);
  f.comm = j.contains("comm") ? comm_params_from_json(j.at("comm")) : default_comm_params();
  f.request.jobs = workload_from_json(require(j, "jobs"));
  f.request.validate();
  return f;
}

json allocation_to_json(const Allocation& a) {
  json jobs = json::array();
  for (const auto& job : a.jobs)
    jobs.push_back({{"job_id", job.job_id}, {"k", job.k}, {"b", job.b}, {"factor", job.factor}});
  return {{"status", a.feasible() ? "feasible" : "infeasible"},
          {"objective", a.objective},
          {"jobs", jobs}};
}

json trace_summary_to_json(const SimTrace& t) {
  std::size_t completed = 0, dropped = 0, pending = 0;
  for (const auto& job : t.jobs) {
    if (job.completed_at) ++completed;
    else if (job.dropped) ++dropped;
    else ++pending;
  }
  json jobs = json::array();
  for (const auto& job : t.jobs)
    jobs.push_back({{"job_id", job.job_id},
                    {"category", std::string(to_string(job.category))},
                    {"arrival_time", job.arrival_time},
                    {"admitted_at", optional_time(job.admitted_at)},
                    {"completed_at", optional_time(job.completed_at)},
                    {"dropped", job.dropped},
                    {"requested_bs", job.requested_bs},
                    {"single_gpu_seconds", job.single_gpu_seconds}});
  json usage = json::array();
  for (const auto& s : t.gpu_usage) usage.push_back({s.time, s.used});
  return {{"total_gpus", t.total_gpus},
          {"policy", policy_to_json(t.policy)},
          {"complete", t.complete},
          {"end_time", t.end_time},
          {"events_processed", t.events_processed},
          {"ticks_fired", t.ticks_fired},
          {"completed", completed},
          {"dropped", dropped},
          {"pending", pending},
          {"jobs", jobs},
          {"gpu_usage", usage}};
}

json report_to_json(const MetricsReport& r) {
  json curve = json::array();
  for (const auto& [t, n] : r.completed_curve) curve.push_back({t, n});
  return {{"label", r.label},
          {"opt_sch_time", r.opt_sch_time},
          {"act_sch_time", r.act_sch_time},
          {"sjs_efficiency", r.sjs_efficiency},
          {"job_drop_ratio", r.job_drop_ratio},
          {"avg_jct", r.avg_jct},
          {"total_jobs", r.total_jobs},
          {"scheduled_jobs", r.scheduled_jobs},
          {"completed_jobs", r.completed_jobs},
          {"dropped_jobs", r.dropped_jobs},
          {"completed_curve", curve},
          {"job_ids", r.job_ids}};
}

MetricsReport report_from_json(const json& j) {
  MetricsReport r;
  r.label = field_or<std::string>(j, "label", "");
  r.opt_sch_time = field<double>(j, "opt_sch_time");
  r.act_sch_time = field<double>(j, "act_sch_time");
  r.sjs_efficiency = field<double>(j, "sjs_efficiency");
  r.job_drop_ratio = field<double>(j, "job_drop_ratio");
  r.avg_jct = field<double>(j, "avg_jct");
  r.total_jobs = field<std::size_t>(j, "total_jobs");
  r.scheduled_jobs = field<std::size_t>(j, "scheduled_jobs");
  r.completed_jobs = field<std::size_t>(j, "completed_jobs");
  r.dropped_jobs = field<std::size_t>(j, "dropped_jobs");
  for (const auto& p : require(j, "completed_curve"))
    r.completed_curve.emplace_back(p.at(0).get<double>(), p.at(1).get<std::size_t>());
  r.job_ids = field<std::vector<JobId>>(j, "job_ids");
  return r;
}

std::string curve_to_csv(const MetricsReport& r) {
  std::string out = "time,count,label\n";
  char line[128];
  for (const auto& [t, n] : r.completed_curve) {
    std::snprintf(line, sizeof line, "%.6f,%zu,", t, n);
    out += line;
    out += r.label;
    out += '\n';
  }
  return out;
}

json comparison_to_json(const Comparison& c) {
  json lines = json::array();
  for (const auto& l : c.lines) {
    lines.push_back({{"metric", l.metric},
                     {"a", l.a},
                     {"b", l.b},
                     {"ratio", std::isfinite(l.ratio) ? json(l.ratio) : json(nullptr)}});
  }
  return {{"a", c.label_a}, {"b", c.label_b}, {"ratios", lines}};
}

}  // namespace elastic
