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

#include <Eigen/Core>

#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace elastic {

using JobId = std::int64_t;

enum class CategoryId { Cat1, Cat2, Cat3, Cat4 };
enum class Boundedness { ComputeBound, CommBound, Balanced, Inelastic };

inline constexpr CategoryId kAllCategories[] = {CategoryId::Cat1, CategoryId::Cat2,
                                                CategoryId::Cat3, CategoryId::Cat4};

std::string_view to_string(CategoryId id);
std::string_view to_string(Boundedness b);
CategoryId parse_category(std::string_view s);

/// One benchmark job category.
struct JobCategory {
  CategoryId id;
  std::string dataset_name;
  std::string model_name;
  std::int64_t weight_count;
  int min_bs;  // total batch, samples
  int max_bs;
  bool elastic;
  Boundedness boundedness;
};

/// Per-GPU processing times sampled on a single GPU, plus the per-GPU
/// memory cap. Immutable after construction.
class ProcessingProfile {
 public:
  /// Throws ProfileError unless samples are strictly ascending in bpg,
  /// positive, non-decreasing in time and within `bpg_cap`.
  ProcessingProfile(std::vector<std::pair<int, double>> samples, int bpg_cap);

  const Eigen::VectorXd& bpg() const { return bpg_; }
  const Eigen::VectorXd& t_proc() const { return t_proc_; }
  int bpg_cap() const { return bpg_cap_; }
  Eigen::Index size() const { return bpg_.size(); }

  /// Sampled per-GPU batch values as integers.
  std::vector<int> grid() const;

  bool operator==(const ProcessingProfile& other) const;

 private:
  Eigen::VectorXd bpg_;
  Eigen::VectorXd t_proc_;
  int bpg_cap_;
};

using ProfilePtr = std::shared_ptr<const ProcessingProfile>;

/// One training job. Batch sizes are total across all GPUs of the job.
struct JobSpec {
  JobId job_id = 0;
  double arrival_time = 0.0;      // seconds since start
  CategoryId category = CategoryId::Cat1;
  int min_bs = 1;
  int max_bs = 1;
  int requested_bs = 1;           // user's initial total batch
  int k_max = 1;
  std::int64_t weight_count = 0;  // p_j
  double total_work = 0.0;        // samples
  ProfilePtr profile;

  bool elastic() const { return min_bs < max_bs; }
};

/// Throws ValidationError naming the first violated field. `cluster_gpus`
/// bounds k_max when positive.
void validate(const JobSpec& job, int cluster_gpus = 0);

}  // namespace elastic
