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


#pragma once

#include "elastic/jsa.hpp"
#include "elastic/types.hpp"
#include "elastic/workload.hpp"

#include <cmath>
#include <memory>
#include <random>
#include <utility>
#include <vector>

namespace elastic::testing {

inline ProfilePtr make_profile(std::vector<std::pair<int, double>> samples, int cap) {
  return std::make_shared<const ProcessingProfile>(std::move(samples), cap);
}

/// Affine profile over an explicit bpg grid.
inline ProfilePtr affine_profile(const std::vector<int>& grid, double overhead,
                                 double throughput, int cap) {
  std::vector<std::pair<int, double>> s;
  for (int b : grid) s.emplace_back(b, overhead + b / throughput);
  return make_profile(std::move(s), cap);
}

inline JobSpec make_job(JobId id, int min_bs, int max_bs, int k_max, ProfilePtr profile,
                        double total_work = 1e5, std::int64_t weights = 24'000'000,
                        double arrival = 0.0) {
  JobSpec j;
  j.job_id = id;
  j.arrival_time = arrival;
  j.min_bs = min_bs;
  j.max_bs = max_bs;
  j.requested_bs = max_bs;
  j.k_max = k_max;
  j.weight_count = weights;
  j.total_work = total_work;
  j.profile = std::move(profile);
  return j;
}

/// Job built from the default category template and hardware.
inline JobSpec category_job(CategoryId id, JobId job_id, int k_max = 10,
                            double total_work = 1e6, double arrival = 0.0) {
  const auto cat = category_template(id);
  auto prof = std::make_shared<const ProcessingProfile>(
      synthesize_profile(cat, default_hardware(id), 8, k_max));
  JobSpec j = make_job(job_id, cat.min_bs, cat.max_bs, k_max, prof, total_work,
                       cat.weight_count, arrival);
  j.category = id;
  return j;
}

/// Random small instance: strictly increasing, non-convex profile on a
/// handful of bpg points, random weight count and batch range.
inline JobSpec random_job(std::mt19937_64& rng, JobId id, int k_max_limit) {
  std::uniform_int_distribution<int> npts(2, 5), step(1, 8), kmax(1, k_max_limit);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<std::pair<int, double>> s;
  int b = step(rng);
  double t = 0.005 + 0.05 * u(rng);
  const int n = npts(rng);
  for (int i = 0; i < n; ++i) {
    s.emplace_back(b, t);
    b += step(rng);
    t += 0.001 + 0.03 * u(rng);
  }
  const int cap = s.back().first + std::uniform_int_distribution<int>(0, 4)(rng);
  const int k_max = kmax(rng);
  const int lo_g = s.front().first;
  std::uniform_int_distribution<int> pick(lo_g, cap * k_max);
  int min_bs = pick(rng), max_bs = pick(rng);
  if (min_bs > max_bs) std::swap(min_bs, max_bs);
  if (u(rng) < 0.2) max_bs = min_bs;
  JobSpec j = make_job(id, min_bs, max_bs, k_max, make_profile(std::move(s), cap), 1e5,
                       static_cast<std::int64_t>(5e6 + 1e8 * u(rng)));
  return j;
}

}  // namespace elastic::testing
