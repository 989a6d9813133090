// Copyright 2026 The trajlind authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "trajlind/trajectory.hpp"

#include <cmath>
#include <stdexcept>

namespace trajlind {

namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;
constexpr long kMaxRestarts = 1000000;

std::uint64_t mix64(std::uint64_t z) {
  z += kGolden;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream_index)
    : state_(mix64(mix64(seed) ^ (kGolden * (stream_index + 1)))) {}

std::uint64_t RngStream::next_u64() {
  state_ += kGolden;
  std::uint64_t z = state_;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

double RngStream::next_uniform() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double holding_time_from_uniform(double eta, double gamma) {
  if (gamma <= 0.0)
    throw std::domain_error("holding_time_from_uniform: gamma must be positive");
  if (eta < 0.0 || eta >= 1.0)
    throw std::domain_error("holding_time_from_uniform: eta must lie in [0, 1)");
  return -std::log1p(-eta) / gamma;  // (1/g) ln(1/(1-eta))
}

double sample_holding_time(RngStream& rng, double gamma) {
  return holding_time_from_uniform(rng.next_uniform(), gamma);
}

TrajectoryPlan compile_trajectory(RngStream& rng, double gamma,
                                  double total_time, int r, long* restarts) {
  if (total_time <= 0.0)
    throw std::domain_error("compile_trajectory: total_time must be positive");
  if (r < 1) throw std::domain_error("compile_trajectory: r must be >= 1");
  if (gamma < 0.0)
    throw std::domain_error("compile_trajectory: gamma must be >= 0");

  TrajectoryPlan plan;
  plan.total_time = total_time;
  if (gamma == 0.0) {
    plan.residual_time = total_time;
    return plan;
  }

  for (long attempt = 0;; ++attempt) {
    if (attempt > kMaxRestarts)
      throw std::runtime_error("compile_trajectory: restart cap exceeded; "
                               "gamma*T is far above the truncation order r");
    plan.holding_times.clear();
    double sum = 0.0;
    bool accepted = false;
    // Up to r+1 draws; the draw that overshoots T ends the trajectory and
    // is discarded, leaving N <= r kept jumps.
    for (int k = 0; k < r + 1; ++k) {
      const double t = sample_holding_time(rng, gamma);
      if (sum + t > total_time) {
        accepted = true;
        break;
      }
      plan.holding_times.push_back(t);
      sum += t;
    }
    if (accepted) {
      plan.jump_count = static_cast<int>(plan.holding_times.size());
      plan.residual_time = total_time - sum;
      return plan;
    }
    if (restarts != nullptr) ++(*restarts);
  }
}

int sample_raw_jump_count(RngStream& rng, double gamma, double total_time) {
  if (total_time <= 0.0)
    throw std::domain_error("sample_raw_jump_count: total_time must be positive");
  if (gamma < 0.0)
    throw std::domain_error("sample_raw_jump_count: gamma must be >= 0");
  if (gamma == 0.0) return 0;
  int n = 0;
  double sum = 0.0;
  for (;;) {
    sum += sample_holding_time(rng, gamma);
    if (sum > total_time) return n;
    ++n;
  }
}

int truncation_order(double gamma, double total_time, double epsilon) {
  if (epsilon <= 0.0 || epsilon >= 1.0)
    throw std::domain_error("truncation_order: epsilon must lie in (0, 1)");
  if (gamma < 0.0 || total_time <= 0.0)
    throw std::domain_error("truncation_order: invalid gamma or total_time");
  const double gt = gamma * total_time;
  if (gt == 0.0) return 0;
  const double log_target = std::log(epsilon / 2.0);
  int r = std::max(1, static_cast<int>(std::ceil(gt)));
  // log bound = r (1 + ln(gT) - ln r) - gT, monotone decreasing for r > gT.
  while (r * (1.0 + std::log(gt) - std::log(static_cast<double>(r))) - gt >
         log_target)
    ++r;
  return r;
}

SimulationBudget allocate_budget(double gamma, double total_time,
                                 double epsilon) {
  SimulationBudget budget;
  budget.epsilon = epsilon;
  budget.r = truncation_order(gamma, total_time, epsilon);
  budget.epsilon_h = epsilon / (2.0 * (budget.r + 1));
  return budget;
}

double erlang_tail(int n, double gamma, double total_time) {
  if (n < 1) throw std::domain_error("erlang_tail: n must be >= 1");
  if (gamma <= 0.0 || total_time < 0.0)
    throw std::domain_error("erlang_tail: gamma must be positive and total_time >= 0");
  const double gt = gamma * total_time;
  double term = std::exp(-gt);
  double sum = term;
  for (int a = 1; a < n; ++a) {
    term *= gt / a;
    sum += term;
  }
  return sum;
}

double counting_pmf(int n, double gamma, double total_time) {
  if (n < 0) throw std::domain_error("counting_pmf: n must be >= 0");
  if (gamma < 0.0 || total_time <= 0.0)
    throw std::domain_error("counting_pmf: invalid gamma or total_time");
  const double gt = gamma * total_time;
  if (gt == 0.0) return n == 0 ? 1.0 : 0.0;
  return std::exp(n * std::log(gt) - gt - std::lgamma(n + 1.0));
}

double tail_bound(double gamma, double total_time, int r) {
  if (r < 1) throw std::domain_error("tail_bound: r must be >= 1");
  if (gamma < 0.0 || total_time <= 0.0)
    throw std::domain_error("tail_bound: invalid gamma or total_time");
  const double gt = gamma * total_time;
  if (gt == 0.0) return 0.0;
  return std::exp(r * (1.0 + std::log(gt) - std::log(static_cast<double>(r))) -
                  gt);
}

}  // namespace trajlind
