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

#include "elastic/workload.hpp"

#include "elastic/errors.hpp"

#include <cmath>
#include <random>
#include <string>

namespace elastic {

JobCategory category_template(CategoryId id) {
  switch (id) {
    case CategoryId::Cat1:
      return {id, "CIFAR100", "resnet50", 24'000'000, 32, 256, true, Boundedness::ComputeBound};
    case CategoryId::Cat2:
      return {id, "CIFAR100", "alexnet", 58'000'000, 16, 256, true, Boundedness::CommBound};
    case CategoryId::Cat3:
      return {id, "CIFAR100", "vgg11_bn", 10'000'000, 16, 1024, true, Boundedness::Balanced};
    case CategoryId::Cat4:
      return {id, "Food101", "alexnet", 58'000'000, 128, 128, false, Boundedness::Inelastic};
  }
  throw ValidationError("category", "unknown category");
}

std::map<CategoryId, double> WorkloadConfig::default_job_lengths() {
  return {{CategoryId::Cat1, 16 * 60.0},
          {CategoryId::Cat2, 21 * 60.0},
          {CategoryId::Cat3, 41 * 60.0},
          {CategoryId::Cat4, 27 * 60.0}};
}

std::map<CategoryId, HardwareParams> WorkloadConfig::default_hardware_table() {
  std::map<CategoryId, HardwareParams> out;
  for (auto id : kAllCategories) out[id] = default_hardware(id);
  return out;
}

void WorkloadConfig::validate() const {
  if (!(horizon > 0.0)) throw ValidationError("horizon", "must be > 0");
  if (!(base_rate_lambda >= 0.0) || !std::isfinite(base_rate_lambda))
    throw ValidationError("base_rate_lambda", "must be finite and >= 0");
  if (pattern == ArrivalPattern::Bursty && !(burst_period > 0.0))
    throw ValidationError("burst_period", "must be > 0");
  if (k_max < 1) throw ValidationError("k_max", "must be >= 1");
  if (grid_points < 2) throw ValidationError("grid_points", "must be >= 2");
  if (category_mix.empty()) throw ValidationError("category_mix", "must not be empty");
  double total = 0.0;
  for (const auto& [id, p] : category_mix) {
    if (!(p >= 0.0 && p <= 1.0))
      throw ValidationError("category_mix", "probabilities must lie in [0, 1]");
    total += p;
    if (p > 0.0) {
      auto len = job_length_seconds.find(id);
      if (len == job_length_seconds.end() || !(len->second > 0.0))
        throw ValidationError("job_length_seconds",
                              "missing or non-positive for " + std::string(to_string(id)));
      if (!hardware.contains(id))
        throw ValidationError("hardware", "missing for " + std::string(to_string(id)));
    }
  }
  if (std::abs(total - 1.0) > 1e-9)
    throw ValidationError("category_mix", "probabilities must sum to 1");
}

double arrival_rate(const WorkloadConfig& config, double t) {
  const double high = config.k_max * config.base_rate_lambda;
  const double low = config.base_rate_lambda * config.k_max / 4.0;
  switch (config.pattern) {
    case ArrivalPattern::High: return high;
    case ArrivalPattern::Low: return low;
    case ArrivalPattern::Bursty: {
      const auto phase = static_cast<long long>(std::floor(t / config.burst_period));
      return phase % 2 == 0 ? high : low;
    }
  }
  return 0.0;
}

double reference_base_rate(const WorkloadConfig& config) {
  double mean_length = 0.0;
  for (const auto& [id, p] : config.category_mix)
    if (p > 0.0) mean_length += p * config.job_length_seconds.at(id);
  return mean_length > 0.0 ? 1.0 / mean_length : 0.0;
}

std::map<CategoryId, ProfilePtr> build_profiles(const WorkloadConfig& config) {
  std::map<CategoryId, ProfilePtr> out;
  for (const auto& [id, p] : config.category_mix) {
    if (p <= 0.0) continue;
    out[id] = std::make_shared<const ProcessingProfile>(synthesize_profile(
        category_template(id), config.hardware.at(id), config.grid_points, config.k_max));
  }
  return out;
}

namespace {

// Next point strictly after t where the arrival rate may change.
double next_rate_change(const WorkloadConfig& config, double t) {
  if (config.pattern != ArrivalPattern::Bursty) return INFINITY;
  return (std::floor(t / config.burst_period) + 1.0) * config.burst_period;
}

}  // namespace

std::vector<JobSpec> generate_workload(const WorkloadConfig& config) {
  config.validate();
  const auto profiles = build_profiles(config);

  std::vector<CategoryId> ids;
  std::vector<double> weights;
  for (auto id : kAllCategories) {
    auto it = config.category_mix.find(id);
    if (it != config.category_mix.end() && it->second > 0.0) {
      ids.push_back(id);
      weights.push_back(it->second);
    }
  }

  // Requested-batch grids per category, used by RandomBS.
  std::map<CategoryId, JobSpec> templates;
  std::map<CategoryId, std::vector<int>> batch_grids;
  for (auto id : ids) {
    const auto cat = category_template(id);
    JobSpec t;
    t.category = id;
    t.min_bs = cat.min_bs;
    t.max_bs = cat.max_bs;
    t.requested_bs = cat.min_bs;
    t.k_max = config.k_max;
    t.weight_count = cat.weight_count;
    t.profile = profiles.at(id);
    const int b0 = baseline_batch(t);
    const double base_rate = b0 / *proc_time(*t.profile, b0);
    t.total_work = config.job_length_seconds.at(id) * base_rate;
    batch_grids.emplace(id, feasible_batch_grid(t));
    templates.emplace(id, std::move(t));
  }

  std::mt19937_64 rng(config.seed);
  std::discrete_distribution<std::size_t> pick_category(weights.begin(), weights.end());

  std::vector<JobSpec> jobs;
  double t = 0.0;
  while (t < config.horizon) {
    const double rate = arrival_rate(config, t);
    const double boundary = next_rate_change(config, t);
    if (!(rate > 0.0)) {
      if (!std::isfinite(boundary)) break;
      t = boundary;
      continue;
    }
    std::exponential_distribution<double> gap(rate);
    const double next = t + gap(rng);
    if (next >= boundary) {
      // Memoryless: restart the draw at the phase boundary with the new rate.
      t = boundary;
      continue;
    }
    t = next;
    if (t >= config.horizon) break;

    const CategoryId id = ids[pick_category(rng)];
    JobSpec job = templates.at(id);
    job.job_id = static_cast<JobId>(jobs.size());
    job.arrival_time = t;
    switch (config.batch_policy) {
      case BatchPolicy::MaxBS: job.requested_bs = job.max_bs; break;
      case BatchPolicy::MinBS: job.requested_bs = job.min_bs; break;
      case BatchPolicy::RandomBS: {
        const auto& grid = batch_grids.at(id);
        if (grid.empty()) {
          job.requested_bs = job.min_bs;
        } else {
          std::uniform_int_distribution<std::size_t> pick(0, grid.size() - 1);
          job.requested_bs = grid[pick(rng)];
        }
        break;
      }
    }
    jobs.push_back(std::move(job));
  }
  return jobs;
}

}  // namespace elastic
