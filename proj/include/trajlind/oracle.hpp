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
#include <map>
#include <vector>

#include "trajlind/gadgets.hpp"
#include "trajlind/lindblad.hpp"
#include "trajlind/trajectory.hpp"

namespace trajlind {

/// exp(T L), the exact channel generated by the model.
SuperOp exact_propagator(const LindbladModel& model, double total_time);

/// The averaged jump channel J with Kraus operators L_mu / sqrt(Gamma).
SuperOp jump_channel(const LindbladModel& model);

/// The trajectory channel U_residual o J o U_{t_N} ... J o U_{t_1} for one
/// compiled plan (first holding segment applied first).
SuperOp trajectory_channel(const LindbladModel& model,
                           const TrajectoryPlan& plan);

struct JumpRecord {
  std::vector<int> channels;       // sampled mu per jump
  std::vector<double> hold_times;  // matching holding times
};

/// Pure-state unraveling of one trajectory: unitary segments exp(-iHt)
/// interleaved with jumps mu sampled with probability ||L_mu psi||^2 / Gamma.
std::pair<CVec, JumpRecord> run_statevector_trajectory(
    const LindbladModel& model, const CVec& initial_state, double total_time,
    int r, RngStream& rng);

enum class McMode { kExactUnitary, kGadgetSimulated, kErrorInjected };

struct McConfig {
  long samples = 1;
  std::uint64_t seed = 0;
  McMode mode = McMode::kExactUnitary;
  double injected_epsilon_h = 0.0;  // only used in error-injected mode
  int workers = 1;
};

/// Fixed number of batch slots used for the deterministic reduction and for
/// batch-mean error bars.
inline constexpr int kMcBatches = 20;

struct McResult {
  SuperOp mean_channel;
  CMat mean_state;  // only filled by state-mode estimation
  std::vector<SuperOp> batch_channels;
  std::vector<CMat> batch_states;
  std::vector<long> batch_sizes;
  long sample_count = 0;
  long restart_count = 0;
  std::map<int, double> jump_histogram;
};

/// Averages trajectory channels over compiled plans. Deterministic for a
/// fixed seed and bitwise independent of the worker count: trajectory i
/// always draws from stream (seed, i), batches are summed in index order
/// and reduced in batch order.
McResult mc_channel_estimate(const LindbladModel& model, double total_time,
                             const SimulationBudget& budget,
                             const McConfig& cfg);

/// Statevector-mode estimate of exp(TL)(|psi><psi|) as the average of
/// trajectory outer products (exact-unitary realization only).
McResult mc_state_estimate(const LindbladModel& model, double total_time,
                           const SimulationBudget& budget, const McConfig& cfg,
                           const CVec& initial_state);

/// Batch-mean standard error of the diamond upper bound between the MC
/// mean and a reference channel.
double mc_sigma(const McResult& result, const SuperOp& reference);

/// Batch-mean standard error of the trace distance between the state-mode
/// MC mean and a reference state.
double mc_state_sigma(const McResult& result, const CMat& reference);

/// exp(-i delta Y) on the first qubit of a dim-dimensional system.
CMat perturbation_unitary(Eigen::Index dim, double delta);

/// Bisects delta so the diamond-distance upper bound between conjugation
/// by perturbation_unitary(dim, delta) and the identity channel equals
/// target (the injected per-segment error).
double calibrate_injection_angle(Eigen::Index dim, double target);

struct ErrorBudgetRow {
  double epsilon_h = 0.0;
  double measured = 0.0;
  double bound = 0.0;
  double sigma = 0.0;
  bool within = false;
};

struct ErrorBudgetReport {
  int r = 0;
  double tail = 0.0;
  std::vector<ErrorBudgetRow> rows;
  double fitted_slope = 0.0;
  bool all_within = false;
};

/// Error-injected Monte Carlo across a grid of per-segment budgets:
/// each row checks measured <= tail + (r+1) epsilon_h + 5 sigma.
ErrorBudgetReport validate_error_budget(const LindbladModel& model,
                                        double total_time, double epsilon,
                                        const std::vector<double>& eh_grid,
                                        long samples, std::uint64_t seed,
                                        int workers);

}  // namespace trajlind
