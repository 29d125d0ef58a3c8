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

#include "elastic/optimizer.hpp"

#include "elastic/errors.hpp"

#include <algorithm>
#include <functional>
#include <string>

namespace elastic {

namespace {

constexpr double kTieTolerance = 1e-12;

struct Cell {
  double value = kInfeasible;
  int k = 0;
};

// max over k of prev(g - k) + factor(k); `jobs_before` GPUs are reserved for
// the earlier jobs, one each. Smaller k wins ties.
Cell solve_cell(const Eigen::VectorXd& prev, const JobTable& job, int g, int jobs_before,
                std::uint64_t& steps) {
  Cell cell;
  const int k_hi = std::min(job.k_max(), g - jobs_before);
  for (int k = 1; k <= k_hi; ++k) {
    ++steps;
    const double before = prev(g - k);
    const double f = job.factor[static_cast<std::size_t>(k - 1)];
    if (is_infeasible(before) || is_infeasible(f)) continue;
    const double v = before + f;
    if (cell.k == 0 || v > cell.value + kTieTolerance) cell = {v, k};
  }
  return cell;
}

}  // namespace

void AllocationRequest::validate() const {
  if (total_gpus < 1) throw ValidationError("total_gpus", "must be >= 1");
  if (jobs.empty()) throw ValidationError("jobs", "must not be empty");
  for (const auto& job : jobs) elastic::validate(job);
}

JobTable tabulate_job(const JobSpec& job, const CommModel& comm, BatchMode mode,
                      int total_gpus) {
  JobTable table;
  table.job_id = job.job_id;
  const int k_max = std::min({job.k_max, total_gpus, comm.max_gpus()});
  table.factor.resize(static_cast<std::size_t>(std::max(k_max, 0)));
  table.batch.resize(table.factor.size());
  for (int k = 1; k <= k_max; ++k) {
    BatchChoice choice{job.requested_bs, kInfeasible};
    if (mode == BatchMode::Elastic) {
      choice = best_batch(job, k, comm);
    } else {
      choice.factor = scaling_factor({job, job.requested_bs, k}, comm);
    }
    table.factor[static_cast<std::size_t>(k - 1)] = choice.factor;
    table.batch[static_cast<std::size_t>(k - 1)] = choice.feasible() ? choice.b : 0;
  }
  return table;
}

IncrementalAllocator::IncrementalAllocator(int total_gpus) : total_gpus_(total_gpus) {
  if (total_gpus < 1) throw ValidationError("total_gpus", "must be >= 1");
  best_.push_back(Eigen::VectorXd::Zero(total_gpus + 1));
  choice_.push_back(Eigen::VectorXi::Zero(total_gpus + 1));
}

bool IncrementalAllocator::feasible_with(const JobTable& candidate) const {
  std::uint64_t steps = 0;
  const int j = static_cast<int>(jobs_.size());
  if (j + 1 > total_gpus_) return false;
  const Cell cell = solve_cell(best_.back(), candidate, total_gpus_, j, steps);
  return cell.k != 0 && cell.value > 0.0;
}

void IncrementalAllocator::push(const JobTable& job) {
  const int j = static_cast<int>(jobs_.size());
  Eigen::VectorXd row = Eigen::VectorXd::Constant(total_gpus_ + 1, kInfeasible);
  Eigen::VectorXi pick = Eigen::VectorXi::Zero(total_gpus_ + 1);
  // The new job is the (j+1)-th; j GPUs go to the jobs before it.
  for (int g = j + 1; g <= total_gpus_; ++g) {
    const Cell cell = solve_cell(best_.back(), job, g, j, inner_steps_);
    row(g) = cell.value;
    pick(g) = cell.k;
  }
  jobs_.push_back(job);
  best_.push_back(std::move(row));
  choice_.push_back(std::move(pick));
}

Allocation IncrementalAllocator::allocation() const {
  Allocation out;
  const double top = best_.back()(total_gpus_);
  if (jobs_.empty() || is_infeasible(top) || !(top > 0.0)) return out;
  out.status = AllocationStatus::Feasible;
  out.objective = top;
  out.jobs.resize(jobs_.size());
  int g = total_gpus_;
  for (std::size_t j = jobs_.size(); j-- > 0;) {
    const int k = choice_[j + 1](g);
    const auto& table = jobs_[j];
    out.jobs[j] = {table.job_id, k, table.batch[static_cast<std::size_t>(k - 1)],
                   table.factor[static_cast<std::size_t>(k - 1)]};
    g -= k;
  }
  return out;
}

DPTable IncrementalAllocator::table() const {
  DPTable out;
  const auto rows = static_cast<Eigen::Index>(best_.size());
  out.best.resize(rows, total_gpus_ + 1);
  out.choice.resize(rows, total_gpus_ + 1);
  for (Eigen::Index j = 0; j < rows; ++j) {
    out.best.row(j) = best_[static_cast<std::size_t>(j)].transpose();
    out.choice.row(j) = choice_[static_cast<std::size_t>(j)].transpose();
  }
  out.inner_steps = inner_steps_;
  return out;
}

DPTable fill_table(std::span<const JobTable> jobs, int total_gpus) {
  IncrementalAllocator dp(total_gpus);
  for (const auto& job : jobs) dp.push(job);
  return dp.table();
}

Allocation optimize(std::span<const JobTable> jobs, int total_gpus) {
  IncrementalAllocator dp(total_gpus);
  if (jobs.size() > static_cast<std::size_t>(total_gpus)) return {};
  for (const auto& job : jobs) dp.push(job);
  return dp.allocation();
}

Allocation optimize(const AllocationRequest& req, const CommModel& comm) {
  req.validate();
  std::vector<JobTable> tables;
  tables.reserve(req.jobs.size());
  for (const auto& job : req.jobs)
    tables.push_back(tabulate_job(job, comm, req.mode, req.total_gpus));
  return optimize(tables, req.total_gpus);
}

Allocation brute_force_optimize(const AllocationRequest& req, const CommModel& comm) {
  req.validate();
  const int J = static_cast<int>(req.jobs.size());
  const int K = req.total_gpus;
  if (J > 8 || K > 16)
    throw GuardError("instance too large for enumeration (J=" + std::to_string(J) +
                     ", K=" + std::to_string(K) + ")");

  // Per-(job, k) optimum by a direct scan over candidate batches.
  std::vector<std::vector<BatchChoice>> options(static_cast<std::size_t>(J));
  for (int j = 0; j < J; ++j) {
    const auto& job = req.jobs[static_cast<std::size_t>(j)];
    const int k_hi = std::min({job.k_max, K, comm.max_gpus()});
    auto& row = options[static_cast<std::size_t>(j)];
    for (int k = 1; k <= k_hi; ++k) {
      BatchChoice best{0, kInfeasible};
      const std::vector<int> batches = req.mode == BatchMode::Elastic
                                           ? candidate_batches(job, k)
                                           : std::vector<int>{job.requested_bs};
      for (int b : batches) {
        const double f = scaling_factor({job, b, k}, comm);
        if (is_infeasible(f)) continue;
        if (best.b == 0 || f > best.factor + kTieTolerance) best = {b, f};
      }
      row.push_back(best);
    }
  }

  std::vector<int> ks(static_cast<std::size_t>(J), 0);
  std::vector<int> best_ks;
  double best_value = kInfeasible;

  // Reverse-lexicographic order: compare the last job's k first.
  auto prefer = [&](const std::vector<int>& a, const std::vector<int>& b) {
    for (int j = J - 1; j >= 0; --j) {
      const auto i = static_cast<std::size_t>(j);
      if (a[i] != b[i]) return a[i] < b[i];
    }
    return false;
  };

  std::function<void(int, int)> recurse = [&](int j, int used) {
    if (j == J) {
      double value = 0.0;
      for (int i = 0; i < J; ++i) {
        const auto& opt = options[static_cast<std::size_t>(i)]
                                 [static_cast<std::size_t>(ks[static_cast<std::size_t>(i)] - 1)];
        if (!opt.feasible()) return;
        value += opt.factor;
      }
      if (best_ks.empty() || value > best_value + kTieTolerance ||
          (value >= best_value - kTieTolerance && prefer(ks, best_ks))) {
        best_value = value;
        best_ks = ks;
      }
      return;
    }
    const int k_hi = static_cast<int>(options[static_cast<std::size_t>(j)].size());
    for (int k = 1; k <= k_hi && used + k + (J - j - 1) <= K; ++k) {
      ks[static_cast<std::size_t>(j)] = k;
      recurse(j + 1, used + k);
    }
  };
  recurse(0, 0);

  Allocation out;
  if (best_ks.empty() || !(best_value > 0.0)) return out;
  out.status = AllocationStatus::Feasible;
  out.objective = best_value;
  for (int j = 0; j < J; ++j) {
    const auto i = static_cast<std::size_t>(j);
    const auto& opt = options[i][static_cast<std::size_t>(best_ks[i] - 1)];
    out.jobs.push_back({req.jobs[i].job_id, best_ks[i], opt.b, opt.factor});
  }
  return out;
}

}  // namespace elastic
