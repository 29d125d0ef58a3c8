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

#include "elastic/types.hpp"

#include "elastic/errors.hpp"

#include <string>

namespace elastic {

std::string_view to_string(CategoryId id) {
  switch (id) {
    case CategoryId::Cat1: return "Cat1";
    case CategoryId::Cat2: return "Cat2";
    case CategoryId::Cat3: return "Cat3";
    case CategoryId::Cat4: return "Cat4";
  }
  return "?";
}

std::string_view to_string(Boundedness b) {
  switch (b) {
    case Boundedness::ComputeBound: return "ComputeBound";
    case Boundedness::CommBound: return "CommBound";
    case Boundedness::Balanced: return "Balanced";
    case Boundedness::Inelastic: return "Inelastic";
  }
  return "?";
}

CategoryId parse_category(std::string_view s) {
  for (auto id : kAllCategories)
    if (s == to_string(id)) return id;
  throw ValidationError("category", "unknown category '" + std::string(s) + "'");
}

ProcessingProfile::ProcessingProfile(std::vector<std::pair<int, double>> samples,
                                     int bpg_cap)
    : bpg_cap_(bpg_cap) {
  if (samples.empty()) throw ProfileError("profile has no samples");
  if (bpg_cap < 1) throw ProfileError("bpg_cap must be >= 1");
  bpg_.resize(static_cast<Eigen::Index>(samples.size()));
  t_proc_.resize(bpg_.size());
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const auto [b, t] = samples[i];
    if (b < 1 || b > bpg_cap)
      throw ProfileError("profile bpg " + std::to_string(b) + " outside [1, bpg_cap]");
    if (!(t > 0.0)) throw ProfileError("profile t_proc must be positive");
    if (i > 0) {
      if (b <= samples[i - 1].first)
        throw ProfileError("profile bpg values must be strictly ascending");
      if (t < samples[i - 1].second)
        throw ProfileError("profile t_proc must be non-decreasing in bpg");
    }
    const auto idx = static_cast<Eigen::Index>(i);
    bpg_(idx) = b;
    t_proc_(idx) = t;
  }
}

std::vector<int> ProcessingProfile::grid() const {
  std::vector<int> out(static_cast<std::size_t>(bpg_.size()));
  for (Eigen::Index i = 0; i < bpg_.size(); ++i)
    out[static_cast<std::size_t>(i)] = static_cast<int>(bpg_(i));
  return out;
}

bool ProcessingProfile::operator==(const ProcessingProfile& other) const {
  return bpg_cap_ == other.bpg_cap_ && bpg_.size() == other.bpg_.size() &&
         bpg_ == other.bpg_ && t_proc_ == other.t_proc_;
}

void validate(const JobSpec& job, int cluster_gpus) {
  if (job.arrival_time < 0.0) throw ValidationError("arrival_time", "must be >= 0");
  if (job.min_bs < 1) throw ValidationError("min_bs", "must be >= 1");
  if (job.max_bs < job.min_bs) throw ValidationError("max_bs", "must be >= min_bs");
  if (job.k_max < 1) throw ValidationError("k_max", "must be >= 1");
  if (cluster_gpus > 0 && job.k_max > cluster_gpus)
    throw ValidationError("k_max", "exceeds cluster size");
  if (!(job.total_work > 0.0)) throw ValidationError("total_work", "must be > 0");
  if (job.weight_count <= 0) throw ValidationError("weight_count", "must be > 0");
  if (job.requested_bs < job.min_bs || job.requested_bs > job.max_bs)
    throw ValidationError("requested_bs", "must lie in [min_bs, max_bs]");
  if (!job.profile) throw ValidationError("profile", "missing");
}

}  // namespace elastic
