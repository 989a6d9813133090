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

#include "trajlind/oracle.hpp"

#include <atomic>
#include <cmath>
#include <functional>
#include <string>
#include <thread>

namespace trajlind {

namespace {

// Unitary segments are built from the eigensystem of H so that per-segment
// cost stays small inside the Monte Carlo loop.
class SegmentCache {
 public:
  SegmentCache(const LindbladModel& model, const McConfig& cfg,
               double gamma) {
    dim_ = model.dim;
    Eigen::SelfAdjointEigenSolver<CMat> es(model.hamiltonian);
    basis_ = es.eigenvectors();
    energies_ = es.eigenvalues();

    if (gamma > 0.0) {
      if (cfg.mode == McMode::kGadgetSimulated) {
        std::vector<double> alphas;
        for (const CMat& l : model.jumps) alphas.push_back(op_norm(l));
        jump_superop_ = build_jump_gadget(model, alphas).system_channel().matrix;
      } else {
        jump_superop_ = jump_channel(model).matrix;
      }
    }

    if (cfg.mode == McMode::kErrorInjected && cfg.injected_epsilon_h > 0.0) {
      const double delta =
          calibrate_injection_angle(dim_, cfg.injected_epsilon_h);
      const CMat p = perturbation_unitary(dim_, delta);
      perturbation_ = kron(p.conjugate(), p);
      inject_ = true;
    }
  }

  CMat unitary_superop(double t) const {
    CVec phases(dim_);
    for (Eigen::Index k = 0; k < dim_; ++k)
      phases(k) = std::exp(Complex(0.0, -energies_(k) * t));
    const CMat u = basis_ * phases.asDiagonal() * basis_.adjoint();
    CMat s = kron(u.conjugate(), u);
    if (inject_) s = perturbation_ * s;
    return s;
  }

  CMat trajectory_superop(const TrajectoryPlan& plan) const {
    CMat s = unitary_superop(plan.holding_times.empty()
                                 ? plan.total_time
                                 : plan.holding_times.front());
    for (std::size_t i = 0; i < plan.holding_times.size(); ++i) {
      s = jump_superop_ * s;
      const double next = i + 1 < plan.holding_times.size()
                              ? plan.holding_times[i + 1]
                              : plan.residual_time;
      s = unitary_superop(next) * s;
    }
    return s;
  }

 private:
  Eigen::Index dim_ = 0;
  CMat basis_;
  Eigen::VectorXd energies_;
  CMat jump_superop_;
  CMat perturbation_;
  bool inject_ = false;
};

struct BatchAccumulator {
  CMat sum;
  long count = 0;
  long restarts = 0;
  std::map<int, long> jump_counts;
};

// Batches are fixed, contiguous index ranges; whichever worker picks up a
// batch processes it serially in index order, so the reduction is bitwise
// independent of scheduling.
void run_batches(long samples, int workers,
                 const std::function<void(int, long, long)>& body) {
  const int batches = kMcBatches;
  const long base = samples / batches;
  const long rem = samples % batches;
  std::atomic<int> next{0};
  auto worker = [&]() {
    for (;;) {
      const int b = next.fetch_add(1);
      if (b >= batches) return;
      const long begin = b * base + std::min<long>(b, rem);
      const long end = begin + base + (b < rem ? 1 : 0);
      body(b, begin, end);
    }
  };
  const int n_threads = std::max(1, workers);
  if (n_threads == 1) {
    worker();
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(n_threads);
  for (int i = 0; i < n_threads; ++i) pool.emplace_back(worker);
  for (std::thread& t : pool) t.join();
}

double require_admissible(const LindbladModel& model, const char* what) {
  const ConstraintReport report = check_constraint(model);
  if (!report.admissible)
    throw ConstraintError(std::string(what) + ": model is not admissible");
  return report.gamma;
}

}  // namespace

SuperOp exact_propagator(const LindbladModel& model, double total_time) {
  if (total_time < 0.0)
    throw std::domain_error("exact_propagator: negative time");
  const SuperOp gen = liouvillian(model);
  return SuperOp(model.dim, expm(total_time * gen.matrix));
}

SuperOp jump_channel(const LindbladModel& model) {
  const ChannelForm form = decompose_channel_form(model);
  if (form.gamma <= 0.0 || form.kraus.empty())
    throw std::domain_error("jump_channel: model has Gamma = 0");
  return kraus_to_superop(form.kraus);
}

SuperOp trajectory_channel(const LindbladModel& model,
                           const TrajectoryPlan& plan) {
  const double gamma = require_admissible(model, "trajectory_channel");
  if (!plan.holding_times.empty() && gamma <= 0.0)
    throw std::domain_error("trajectory_channel: plan has jumps but Gamma = 0");
  const SegmentCache cache(model, McConfig{}, gamma);
  return SuperOp(model.dim, cache.trajectory_superop(plan));
}

namespace {

// Shared machinery for pure-state unravelings.
class PureTrajectoryRunner {
 public:
  PureTrajectoryRunner(const LindbladModel& model, double gamma)
      : model_(model), gamma_(gamma) {
    Eigen::SelfAdjointEigenSolver<CMat> es(model.hamiltonian);
    basis_ = es.eigenvectors();
    energies_ = es.eigenvalues();
  }

  std::pair<CVec, JumpRecord> run(const CVec& initial_state, double total_time,
                                  int r, RngStream& rng) const {
    const TrajectoryPlan plan = compile_trajectory(rng, gamma_, total_time, r);
    JumpRecord record;
    CVec psi = initial_state;
    for (double hold : plan.holding_times) {
      psi = evolve(psi, hold);
      // Pr(mu | psi) = ||L_mu psi||^2 / Gamma; the weights sum to one for
      // admissible models.
      std::vector<double> weights(model_.jumps.size());
      double cumulative = 0.0;
      for (std::size_t mu = 0; mu < model_.jumps.size(); ++mu) {
        weights[mu] = (model_.jumps[mu] * psi).squaredNorm() / gamma_;
        cumulative += weights[mu];
      }
      const double draw = rng.next_uniform() * cumulative;
      double running = 0.0;
      std::size_t pick = model_.jumps.size() - 1;
      for (std::size_t mu = 0; mu < model_.jumps.size(); ++mu) {
        running += weights[mu];
        if (draw < running) {
          pick = mu;
          break;
        }
      }
      psi = model_.jumps[pick] * psi;
      psi.normalize();
      record.channels.push_back(static_cast<int>(pick));
      record.hold_times.push_back(hold);
    }
    psi = evolve(psi, plan.residual_time);
    psi.normalize();
    return {psi, record};
  }

 private:
  CVec evolve(const CVec& psi, double t) const {
    CVec phases(model_.dim);
    for (Eigen::Index k = 0; k < model_.dim; ++k)
      phases(k) = std::exp(Complex(0.0, -energies_(k) * t));
    return basis_ * (phases.asDiagonal() * (basis_.adjoint() * psi));
  }

  const LindbladModel& model_;
  double gamma_;
  CMat basis_;
  Eigen::VectorXd energies_;
};

void check_state(const LindbladModel& model, const CVec& state,
                 const char* what) {
  if (state.size() != model.dim)
    throw ShapeError(std::string(what) + ": state dimension mismatch");
  if (std::abs(state.norm() - 1.0) > 1e-10)
    throw std::invalid_argument(std::string(what) +
                                ": state must be normalized");
}

}  // namespace

std::pair<CVec, JumpRecord> run_statevector_trajectory(
    const LindbladModel& model, const CVec& initial_state, double total_time,
    int r, RngStream& rng) {
  const double gamma = require_admissible(model, "run_statevector_trajectory");
  check_state(model, initial_state, "run_statevector_trajectory");
  return PureTrajectoryRunner(model, gamma)
      .run(initial_state, total_time, r, rng);
}

McResult mc_state_estimate(const LindbladModel& model, double total_time,
                           const SimulationBudget& budget, const McConfig& cfg,
                           const CVec& initial_state) {
  const double gamma = require_admissible(model, "mc_state_estimate");
  check_state(model, initial_state, "mc_state_estimate");
  if (cfg.mode != McMode::kExactUnitary)
    throw std::domain_error(
        "mc_state_estimate: only the exact-unitary realization is defined "
        "for statevector sampling");
  if (cfg.samples < 1)
    throw std::domain_error("mc_state_estimate: samples must be >= 1");

  const PureTrajectoryRunner runner(model, gamma);
  const Eigen::Index d = model.dim;
  const int r = std::max(budget.r, 1);

  std::vector<BatchAccumulator> acc(kMcBatches);
  for (BatchAccumulator& b : acc) b.sum = CMat::Zero(d, d);

  run_batches(cfg.samples, cfg.workers, [&](int batch, long begin, long end) {
    BatchAccumulator& slot = acc[batch];
    for (long i = begin; i < end; ++i) {
      RngStream rng(cfg.seed, static_cast<std::uint64_t>(i));
      const auto [psi, record] = runner.run(initial_state, total_time, r, rng);
      slot.sum += psi * psi.adjoint();
      slot.count += 1;
      slot.jump_counts[static_cast<int>(record.channels.size())] += 1;
    }
  });

  McResult result;
  CMat total = CMat::Zero(d, d);
  std::map<int, long> jump_counts;
  for (const BatchAccumulator& b : acc) {
    total += b.sum;
    if (b.count > 0) {
      result.batch_states.push_back(b.sum / static_cast<double>(b.count));
      result.batch_sizes.push_back(b.count);
    }
    for (const auto& [n, c] : b.jump_counts) jump_counts[n] += c;
  }
  total /= static_cast<double>(cfg.samples);
  result.mean_state = 0.5 * (total + total.adjoint());
  result.sample_count = cfg.samples;
  for (const auto& [n, c] : jump_counts)
    result.jump_histogram[n] =
        static_cast<double>(c) / static_cast<double>(cfg.samples);
  return result;
}

double mc_state_sigma(const McResult& result, const CMat& reference) {
  const std::size_t n = result.batch_states.size();
  if (n < 2) return 0.0;
  std::vector<double> d(n);
  double mean = 0.0;
  for (std::size_t b = 0; b < n; ++b) {
    d[b] = 0.5 * trace_norm(result.batch_states[b] - reference);
    mean += d[b];
  }
  mean /= static_cast<double>(n);
  double var = 0.0;
  for (double x : d) var += (x - mean) * (x - mean);
  var /= static_cast<double>(n - 1);
  return std::sqrt(var / static_cast<double>(n));
}

McResult mc_channel_estimate(const LindbladModel& model, double total_time,
                             const SimulationBudget& budget,
                             const McConfig& cfg) {
  const double gamma = require_admissible(model, "mc_channel_estimate");
  if (cfg.samples < 1)
    throw std::domain_error("mc_channel_estimate: samples must be >= 1");
  if (cfg.workers < 1)
    throw std::domain_error("mc_channel_estimate: workers must be >= 1");
  if (cfg.mode != McMode::kErrorInjected && cfg.injected_epsilon_h != 0.0)
    throw std::invalid_argument(
        "mc_channel_estimate: injected_epsilon_h requires error-injected mode");
  const SegmentCache cache(model, cfg, gamma);
  const Eigen::Index d = model.dim;
  const int r = std::max(budget.r, 1);

  std::vector<BatchAccumulator> acc(kMcBatches);
  for (BatchAccumulator& b : acc) b.sum = CMat::Zero(d * d, d * d);

  run_batches(cfg.samples, cfg.workers, [&](int batch, long begin, long end) {
    BatchAccumulator& slot = acc[batch];
    for (long i = begin; i < end; ++i) {
      RngStream rng(cfg.seed, static_cast<std::uint64_t>(i));
      const TrajectoryPlan plan =
          compile_trajectory(rng, gamma, total_time, r, &slot.restarts);
      slot.sum += cache.trajectory_superop(plan);
      slot.count += 1;
      slot.jump_counts[plan.jump_count] += 1;
    }
  });

  McResult result;
  CMat total = CMat::Zero(d * d, d * d);
  std::map<int, long> jump_counts;
  for (const BatchAccumulator& b : acc) {
    total += b.sum;
    result.restart_count += b.restarts;
    if (b.count > 0) {
      result.batch_channels.emplace_back(d, b.sum / static_cast<double>(b.count));
      result.batch_sizes.push_back(b.count);
    }
    for (const auto& [n, c] : b.jump_counts) jump_counts[n] += c;
  }
  result.mean_channel = SuperOp(d, total / static_cast<double>(cfg.samples));
  result.sample_count = cfg.samples;
  for (const auto& [n, c] : jump_counts)
    result.jump_histogram[n] =
        static_cast<double>(c) / static_cast<double>(cfg.samples);
  return result;
}

double mc_sigma(const McResult& result, const SuperOp& reference) {
  const std::size_t n = result.batch_channels.size();
  if (n < 2) return 0.0;
  std::vector<double> d(n);
  double mean = 0.0;
  for (std::size_t b = 0; b < n; ++b) {
    d[b] = diamond_distance_bounds(result.batch_channels[b], reference).upper;
    mean += d[b];
  }
  mean /= static_cast<double>(n);
  double var = 0.0;
  for (double x : d) var += (x - mean) * (x - mean);
  var /= static_cast<double>(n - 1);
  return std::sqrt(var / static_cast<double>(n));
}

CMat perturbation_unitary(Eigen::Index dim, double delta) {
  if (dim % 2 != 0)
    throw std::domain_error("perturbation_unitary: dimension must be even");
  CMat ry(2, 2);
  ry << std::cos(delta), -std::sin(delta), std::sin(delta), std::cos(delta);
  return kron(ry, CMat::Identity(dim / 2, dim / 2));
}

double calibrate_injection_angle(Eigen::Index dim, double target) {
  if (target < 0.0)
    throw std::domain_error("calibrate_injection_angle: negative target");
  if (target == 0.0) return 0.0;
  const SuperOp id = SuperOp::identity(dim);
  const auto upper_at = [&](double delta) {
    const CMat p = perturbation_unitary(dim, delta);
    return diamond_distance_bounds(SuperOp(dim, kron(p.conjugate(), p)), id)
        .upper;
  };
  double lo = 0.0, hi = 1.5;  // upper bound is increasing on [0, pi/2]
  if (upper_at(hi) < target)
    throw std::domain_error("calibrate_injection_angle: target too large");
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (upper_at(mid) < target)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

ErrorBudgetReport validate_error_budget(const LindbladModel& model,
                                        double total_time, double epsilon,
                                        const std::vector<double>& eh_grid,
                                        long samples, std::uint64_t seed,
                                        int workers) {
  const double gamma = require_admissible(model, "validate_error_budget");
  ErrorBudgetReport report;
  const SimulationBudget budget = allocate_budget(gamma, total_time, epsilon);
  report.r = budget.r;
  report.tail = budget.r >= 1 ? tail_bound(gamma, total_time, budget.r) : 0.0;

  const SuperOp exact = exact_propagator(model, total_time);
  report.all_within = true;
  for (double eh : eh_grid) {
    McConfig cfg;
    cfg.samples = samples;
    cfg.seed = seed;
    cfg.mode = McMode::kErrorInjected;
    cfg.injected_epsilon_h = eh;
    cfg.workers = workers;
    const McResult res = mc_channel_estimate(model, total_time, budget, cfg);

    ErrorBudgetRow row;
    row.epsilon_h = eh;
    row.measured = diamond_distance_bounds(res.mean_channel, exact).upper;
    row.bound = report.tail + (budget.r + 1) * eh;
    row.sigma = mc_sigma(res, exact);
    row.within = row.measured <= row.bound + 5.0 * row.sigma;
    report.all_within = report.all_within && row.within;
    report.rows.push_back(row);
  }

  // Least-squares slope of measured distance against epsilon_h.
  const std::size_t n = report.rows.size();
  if (n >= 2) {
    double mx = 0.0, my = 0.0;
    for (const auto& row : report.rows) {
      mx += row.epsilon_h;
      my += row.measured;
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0;
    for (const auto& row : report.rows) {
      sxx += (row.epsilon_h - mx) * (row.epsilon_h - mx);
      sxy += (row.epsilon_h - mx) * (row.measured - my);
    }
    report.fitted_slope = sxx > 0.0 ? sxy / sxx : 0.0;
  }
  return report;
}

}  // namespace trajlind
