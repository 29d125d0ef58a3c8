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

#include "elastic/jsa.hpp"

#include "elastic/errors.hpp"
#include "elastic/interp.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace elastic {

namespace {

constexpr double kMinProcTime = 1e-12;
constexpr double kTieTolerance = 1e-12;

int ceil_div(int a, int b) { return (a + b - 1) / b; }

}  // namespace

CommModel::CommModel(Eigen::VectorXd weights, Eigen::MatrixXd table)
    : weights_(std::move(weights)), table_(std::move(table)) {
  if (weights_.size() == 0 || table_.rows() == 0)
    throw ValidationError("comm", "empty communication table");
  if (table_.cols() != weights_.size())
    throw ValidationError("comm", "table columns must match weight samples");
  for (Eigen::Index i = 1; i < weights_.size(); ++i)
    if (!(weights_(i) > weights_(i - 1)))
      throw ValidationError("comm", "weight samples must be strictly ascending");
  if ((table_.row(0).array() != 0.0).any())
    throw ValidationError("comm", "single-GPU communication time must be zero");
  if ((table_.array() < 0.0).any())
    throw ValidationError("comm", "communication times must be non-negative");
}

CommModel CommModel::ring(const CommParams& params, int max_gpus) {
  if (max_gpus < 1) throw ValidationError("total_gpus", "must be >= 1");
  if (params.alpha < 0.0) throw ValidationError("alpha", "must be >= 0");
  if (params.beta < 0.0) throw ValidationError("beta", "must be >= 0");
  const Eigen::VectorXd weights = Eigen::VectorXd::LinSpaced(10, 10e6, 100e6);
  Eigen::MatrixXd table(max_gpus, weights.size());
  for (int k = 1; k <= max_gpus; ++k) {
    const double hops = k - 1;
    table.row(k - 1) = (params.alpha * hops +
                        params.beta * weights.array() * hops / k).matrix().transpose();
  }
  CommModel model(weights, std::move(table));
  model.params_ = params;
  return model;
}

HardwareParams default_hardware(CategoryId id) {
  switch (id) {
    case CategoryId::Cat1: return {0.015, 400.0, 32};
    case CategoryId::Cat2: return {0.010, 1500.0, 64};
    case CategoryId::Cat3: return {0.010, 2000.0, 64};
    case CategoryId::Cat4: return {0.020, 300.0, 128};
  }
  return {};
}

CommParams default_comm_params() { return {}; }

ProcessingProfile synthesize_profile(const JobCategory& category,
                                     const HardwareParams& hw, int grid_points,
                                     int k_max) {
  if (k_max < 1) throw ProfileError("k_max must be >= 1");
  if (!(hw.sample_throughput > 0.0) || hw.fixed_overhead < 0.0)
    throw ProfileError("hardware throughput must be positive and overhead non-negative");
  auto t_of = [&](int bpg) { return hw.fixed_overhead + bpg / hw.sample_throughput; };

  std::vector<int> points;
  if (!category.elastic || category.min_bs == category.max_bs) {
    for (int k = 1; k <= k_max; ++k) {
      const int bpg = ceil_div(category.min_bs, k);
      if (bpg <= hw.bpg_cap) points.push_back(bpg);
    }
    if (points.empty())
      throw ProfileError("fixed batch " + std::to_string(category.min_bs) +
                         " does not fit on " + std::to_string(k_max) + " GPUs");
  } else {
    if (grid_points < 2) throw ProfileError("elastic profiles need >= 2 grid points");
    const int lo = ceil_div(category.min_bs, k_max);
    const int hi = std::min(category.max_bs, hw.bpg_cap);
    if (lo > hw.bpg_cap)
      throw ProfileError("smallest per-GPU batch " + std::to_string(lo) +
                         " exceeds bpg_cap " + std::to_string(hw.bpg_cap));
    for (int i = 0; i < grid_points; ++i) {
      const double x = lo + (hi - lo) * static_cast<double>(i) / (grid_points - 1);
      points.push_back(static_cast<int>(std::lround(x)));
    }
  }
  std::sort(points.begin(), points.end());
  points.erase(std::unique(points.begin(), points.end()), points.end());

  std::vector<std::pair<int, double>> samples;
  samples.reserve(points.size());
  for (int b : points) samples.emplace_back(b, t_of(b));
  return ProcessingProfile(std::move(samples), hw.bpg_cap);
}

std::optional<double> proc_time(const ProcessingProfile& profile, int bpg) {
  if (bpg > profile.bpg_cap() || bpg < 1) return std::nullopt;
  const double t = interp_linear(profile.bpg(), profile.t_proc(), static_cast<double>(bpg));
  return std::max(t, kMinProcTime);
}

double comm_time(const CommModel& model, double weights, int k) {
  if (k < 1 || k > model.max_gpus())
    throw RangeError("GPU count " + std::to_string(k) + " outside comm grid 1.." +
                     std::to_string(model.max_gpus()));
  if (k == 1) return 0.0;
  const double t = interp_linear(model.weights(), model.table().row(k - 1).transpose(),
                                 weights);
  return std::max(t, 0.0);
}

std::optional<double> iter_time(const RateQuery& q, const CommModel& comm) {
  const auto proc = proc_time(*q.job.profile, per_gpu_batch(q.b, q.k));
  if (!proc) return std::nullopt;
  return *proc + comm_time(comm, static_cast<double>(q.job.weight_count), q.k);
}

double processing_rate(const RateQuery& q, const CommModel& comm) {
  if (q.b < 1 || q.k < 1) return kInfeasible;
  const auto t = iter_time(q, comm);
  if (!t) return kInfeasible;
  return q.b / *t;
}

int baseline_batch(const JobSpec& job) {
  return std::min(job.max_bs, job.profile->bpg_cap());
}

double baseline_rate(const JobSpec& job, const CommModel& comm) {
  return processing_rate({job, baseline_batch(job), 1}, comm);
}

double scaling_factor(const RateQuery& q, const CommModel& comm) {
  const double rate = processing_rate(q, comm);
  if (is_infeasible(rate)) return kInfeasible;
  return rate / baseline_rate(q.job, comm);
}

std::vector<int> candidate_batches(const JobSpec& job, int k) {
  if (!job.elastic()) return {job.min_bs};
  std::vector<int> out;
  for (int g : job.profile->grid()) {
    const long long b = static_cast<long long>(g) * k;
    if (b >= job.min_bs && b <= job.max_bs) out.push_back(static_cast<int>(b));
  }
  return out;
}

std::vector<int> feasible_batch_grid(const JobSpec& job) {
  std::vector<int> all;
  for (int k = 1; k <= job.k_max; ++k) {
    auto c = candidate_batches(job, k);
    all.insert(all.end(), c.begin(), c.end());
  }
  std::sort(all.begin(), all.end());
  all.erase(std::unique(all.begin(), all.end()), all.end());
  return all;
}

BatchChoice best_batch(const JobSpec& job, int k, const CommModel& comm) {
  BatchChoice best{0, kInfeasible};
  for (int b : candidate_batches(job, k)) {
    const double f = scaling_factor({job, b, k}, comm);
    if (is_infeasible(f)) continue;
    if (!best.feasible() || f > best.factor + kTieTolerance) best = {b, f};
  }
  return best;
}

}  // namespace elastic
