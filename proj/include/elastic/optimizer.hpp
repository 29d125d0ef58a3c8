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

#include <Eigen/Core>

#include <cstdint>
#include <span>
#include <vector>

namespace elastic {

/// Elastic picks the best batch per GPU count; FixedBatch pins each job to
/// its requested total batch and only varies the GPU count.
enum class BatchMode { Elastic, FixedBatch };

struct AllocationRequest {
  std::vector<JobSpec> jobs;  // arrival order
  int total_gpus = 1;
  BatchMode mode = BatchMode::Elastic;

  void validate() const;
};

enum class AllocationStatus { Feasible, Infeasible };

struct JobAllocation {
  JobId job_id;
  int k;
  int b;
  double factor;

  bool operator==(const JobAllocation&) const = default;
};

struct Allocation {
  AllocationStatus status = AllocationStatus::Infeasible;
  std::vector<JobAllocation> jobs;  // empty when infeasible
  double objective = 0.0;

  bool feasible() const { return status == AllocationStatus::Feasible; }
};

/// Best scaling factor and batch of one job for k = 1..k_max, the values the
/// dynamic program looks up. Index k - 1.
struct JobTable {
  JobId job_id = 0;
  std::vector<double> factor;
  std::vector<int> batch;

  int k_max() const { return static_cast<int>(factor.size()); }
};

/// k_max is clipped to the cluster size. Uses best_batch in Elastic mode and
/// the requested batch in FixedBatch mode.
JobTable tabulate_job(const JobSpec& job, const CommModel& comm, BatchMode mode,
                      int total_gpus);

/// best(j, g): optimum over the first j jobs using at most g GPUs, or
/// kInfeasible. choice(j, g): GPU count given to job j in that optimum.
struct DPTable {
  Eigen::MatrixXd best;    // (J + 1) x (K + 1)
  Eigen::MatrixXi choice;  // (J + 1) x (K + 1), row 0 unused
  std::uint64_t inner_steps = 0;
};

DPTable fill_table(std::span<const JobTable> jobs, int total_gpus);

/// Solves the allocation DP over precomputed job tables.
Allocation optimize(std::span<const JobTable> jobs, int total_gpus);

Allocation optimize(const AllocationRequest& req, const CommModel& comm);

/// DP whose rows are appended one job at a time, so admission trials
/// (executing jobs plus one candidate) reuse the shared prefix.
class IncrementalAllocator {
 public:
  explicit IncrementalAllocator(int total_gpus);

  int total_gpus() const { return total_gpus_; }
  std::size_t size() const { return jobs_.size(); }

  /// Status optimize() would report for the current jobs plus `candidate`.
  bool feasible_with(const JobTable& candidate) const;

  void push(const JobTable& job);

  /// Backtracked allocation for the current jobs.
  Allocation allocation() const;

  std::uint64_t inner_steps() const { return inner_steps_; }

  DPTable table() const;

 private:
  int total_gpus_;
  std::vector<JobTable> jobs_;
  std::vector<Eigen::VectorXd> best_;  // best_[j], j = 0..J
  std::vector<Eigen::VectorXi> choice_;
  std::uint64_t inner_steps_ = 0;
};

/// Exhaustive search over every (k_1..k_J) with sum <= K. Test oracle.
/// Throws GuardError when J > 8 or K > 16.
Allocation brute_force_optimize(const AllocationRequest& req, const CommModel& comm);

}  // namespace elastic
