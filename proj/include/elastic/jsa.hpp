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

#include "elastic/types.hpp"

#include <Eigen/Core>

#include <optional>
#include <vector>

namespace elastic {

/// Reserved rate/factor for configurations that do not fit on the GPUs.
/// Only ever compared against, never added to.
inline constexpr double kInfeasible = -1e30;

inline bool is_infeasible(double v) { return v <= 0.5 * kInfeasible; }

struct CommParams {
  double alpha = 0.008;      // seconds per ring hop
  double beta = 9.5e-10;     // seconds per weight (bandwidth term)
};

/// AllReduce time table over (GPU count, weight count).
///
/// Rows are k = 1..max_gpus(), columns the sampled weight counts in
/// ascending order. Row k = 1 is identically zero.
class CommModel {
 public:
  CommModel(Eigen::VectorXd weights, Eigen::MatrixXd table);

  /// Ring-shaped synthetic model: alpha * (k - 1) + beta * p * (k - 1) / k
  /// sampled at 10M, 20M, ..., 100M weights.
  static CommModel ring(const CommParams& params, int max_gpus);

  int max_gpus() const { return static_cast<int>(table_.rows()); }
  const Eigen::VectorXd& weights() const { return weights_; }
  const Eigen::MatrixXd& table() const { return table_; }
  const std::optional<CommParams>& params() const { return params_; }

 private:
  Eigen::VectorXd weights_;
  Eigen::MatrixXd table_;
  std::optional<CommParams> params_;
};

/// Single-GPU timing model used in place of real profiling runs:
/// t_proc(bpg) = fixed_overhead + bpg / sample_throughput.
struct HardwareParams {
  double fixed_overhead = 0.01;       // s per iteration
  double sample_throughput = 1000.0;  // samples / s
  int bpg_cap = 64;                   // largest per-GPU batch in memory
};

/// P100-like defaults; Cat1 matches the shipped `cat1_p100` fixture.
HardwareParams default_hardware(CategoryId id);
CommParams default_comm_params();

/// Per-GPU batch grid from ceil(min_bs / k_max) to min(max_bs, bpg_cap).
/// Inelastic categories get exactly the points ceil(bs / k), k = 1..k_max.
ProcessingProfile synthesize_profile(const JobCategory& category,
                                     const HardwareParams& hw, int grid_points,
                                     int k_max);

/// Interpolated processing time; nullopt when bpg exceeds the memory cap.
std::optional<double> proc_time(const ProcessingProfile& profile, int bpg);

/// Throws RangeError for k outside 1..max_gpus().
double comm_time(const CommModel& model, double weights, int k);

struct RateQuery {
  const JobSpec& job;
  int b;  // total batch
  int k;  // GPUs
};

inline int per_gpu_batch(int b, int k) { return (b + k - 1) / k; }

std::optional<double> iter_time(const RateQuery& q, const CommModel& comm);

/// Samples per second, or kInfeasible.
double processing_rate(const RateQuery& q, const CommModel& comm);

/// Normalizing batch for the single-GPU baseline, min(max_bs, bpg_cap).
int baseline_batch(const JobSpec& job);

/// T_j(baseline_batch, 1); the job's reference rate.
double baseline_rate(const JobSpec& job, const CommModel& comm);

/// Rate relative to the single-GPU baseline, or kInfeasible.
double scaling_factor(const RateQuery& q, const CommModel& comm);

struct BatchChoice {
  int b;          // total batch, or 0 when nothing fits
  double factor;  // kInfeasible when nothing fits
  bool feasible() const { return !is_infeasible(factor); }
};

/// Total batches tried on k GPUs: {g * k : g in profile grid} within
/// [min_bs, max_bs], or just {min_bs} for inelastic jobs. Ascending.
std::vector<int> candidate_batches(const JobSpec& job, int k);

/// Union of candidate_batches over k = 1..k_max. Ascending, distinct.
std::vector<int> feasible_batch_grid(const JobSpec& job);

/// Argmax of scaling_factor over candidate_batches; ties go to smaller b.
BatchChoice best_batch(const JobSpec& job, int k, const CommModel& comm);

}  // namespace elastic
