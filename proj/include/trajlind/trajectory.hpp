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

#pragma once

#include <cstdint>
#include <vector>

namespace trajlind {

/// Counter-style pseudo-random stream (splitmix64). Streams derived from
/// the same (seed, stream_index) pair produce identical draws, which makes
/// Monte Carlo runs bitwise reproducible independent of worker scheduling.
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t stream_index);

  std::uint64_t next_u64();
  /// Uniform double in [0, 1).
  double next_uniform();

 private:
  std::uint64_t state_;
};

/// One compiled trajectory skeleton: N holding times that fit inside the
/// total time, plus the residual stretch of plain unitary evolution.
struct TrajectoryPlan {
  std::vector<double> holding_times;
  int jump_count = 0;
  double total_time = 0.0;
  double residual_time = 0.0;
};

struct SimulationBudget {
  double epsilon = 0.0;
  int r = 0;             // maximum number of compiled jumps
  double epsilon_h = 0.0;  // per-segment Hamiltonian simulation budget
};

/// The inversion formula (1/gamma) ln(1/(1 - eta)) for eta in [0, 1).
double holding_time_from_uniform(double eta, double gamma);

/// Inversion sample of Exp(gamma) drawn from the stream.
double sample_holding_time(RngStream& rng, double gamma);

/// Draws holding times until the running sum would exceed total_time; the
/// overshooting draw is discarded and the plan accepted when at most r
/// jumps were kept. If r+1 draws all fit inside total_time the attempt is
/// discarded and restarted, which realizes rejection sampling of the
/// jump-count-truncated trajectory density. Restarts are tallied into
/// *restarts when given.
TrajectoryPlan compile_trajectory(RngStream& rng, double gamma,
                                  double total_time, int r,
                                  long* restarts = nullptr);

/// Number of holding-time draws that fit in [0, total_time] with no cap
/// (the raw counting process N(T)).
int sample_raw_jump_count(RngStream& rng, double gamma, double total_time);

/// Smallest r >= max(1, ceil(gamma T)) with
/// (e gamma T / r)^r exp(-gamma T) <= epsilon / 2; returns 0 when
/// gamma T = 0.
int truncation_order(double gamma, double total_time, double epsilon);

/// r from truncation_order plus epsilon_h = epsilon / (2 (r + 1)), so that
/// tail bound + (r+1) epsilon_h <= epsilon.
SimulationBudget allocate_budget(double gamma, double total_time,
                                 double epsilon);

/// Erlang tail G_n(T) = Pr(S_n > T) = sum_{a<n} exp(-gT) (gT)^a / a!.
double erlang_tail(int n, double gamma, double total_time);

/// Poisson pmf exp(-gT) (gT)^n / n! = G_{n+1}(T) - G_n(T).
double counting_pmf(int n, double gamma, double total_time);

/// Chernoff bound (e gamma T / r)^r exp(-gamma T) on Pr(N(T) > r).
double tail_bound(double gamma, double total_time, int r);

}  // namespace trajlind
