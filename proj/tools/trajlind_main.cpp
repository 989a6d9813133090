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

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "trajlind/model_io.hpp"
#include "trajlind/oracle.hpp"

namespace {

constexpr const char* kVersion = "0.1.0";
constexpr int kExitOk = 0;
constexpr int kExitInput = 1;
constexpr int kExitConstraint = 2;
constexpr int kExitNumerical = 3;

using nlohmann::json;
using namespace trajlind;

std::string timestamp_utc() {
  char buf[32];
  const std::time_t now = std::time(nullptr);
  std::tm tm_utc{};
  gmtime_r(&now, &tm_utc);
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
  return buf;
}

json make_manifest(const std::string& command, const std::string& model_path,
                   const json& parameters) {
  json manifest;
  manifest["command"] = command;
  manifest["model"] = model_path;
  manifest["parameters"] = parameters;
  manifest["tool_version"] = kVersion;
  manifest["timestamp"] = timestamp_utc();
  return manifest;
}

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write output file: " + out_path);
  out << text;
}

void emit_json(const json& j, const std::string& out_path) {
  emit(j.dump(2) + "\n", out_path);
}

std::string format_double(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

std::uint64_t default_seed() {
  if (const char* env = std::getenv("TRAJLIND_SEED")) {
    try {
      return std::stoull(env);
    } catch (const std::exception&) {
      // fall through to the fixed default
    }
  }
  return 0;
}

std::vector<double> default_alphas(const LindbladModel& model) {
  std::vector<double> alphas;
  for (const CMat& l : model.jumps) alphas.push_back(op_norm(l));
  return alphas;
}

ResourceLedger ledger_for(const LindbladModel& model, double gamma, double t,
                          double epsilon, const std::vector<double>& alphas) {
  return resource_ledger(gamma, t, epsilon, op_norm(model.hamiltonian), alphas,
                         static_cast<int>(model.jumps.size()), 1);
}

json histogram_to_json(const std::map<int, double>& hist) {
  json j = json::object();
  for (const auto& [n, f] : hist) j[std::to_string(n)] = f;
  return j;
}

int cmd_check(const std::string& model_path, double tol,
              const std::string& out_path) {
  LindbladModel model = load_model(model_path);
  const ConstraintReport report = check_constraint(model, tol);
  json j;
  j["gamma"] = report.gamma;
  j["residual"] = report.residual;
  j["admissible"] = report.admissible;
  j["manifest"] = make_manifest("check", model_path, {{"tol", tol}});
  emit_json(j, out_path);
  return report.admissible ? kExitOk : kExitConstraint;
}

int cmd_run(const std::string& model_path, double total_time, double epsilon,
            long samples, std::uint64_t seed, const std::string& mode,
            int workers, const std::string& out_path) {
  LindbladModel model = load_model(model_path);
  const ConstraintReport report = check_constraint(model);
  if (!report.admissible) {
    std::cerr << "model is not admissible (residual " << report.residual
              << ")\n";
    return kExitConstraint;
  }

  McConfig cfg;
  cfg.samples = samples;
  cfg.seed = seed;
  cfg.workers = workers;
  const SimulationBudget budget =
      allocate_budget(report.gamma, total_time, epsilon);
  if (mode == "exact-unitary") {
    cfg.mode = McMode::kExactUnitary;
  } else if (mode == "gadget-simulated") {
    cfg.mode = McMode::kGadgetSimulated;
  } else if (mode == "error-injected") {
    cfg.mode = McMode::kErrorInjected;
    cfg.injected_epsilon_h = budget.epsilon_h;
  } else {
    std::cerr << "unknown mode: " << mode << "\n";
    return kExitInput;
  }

  const McResult result = mc_channel_estimate(model, total_time, budget, cfg);
  const SuperOp exact = exact_propagator(model, total_time);
  const DiamondBounds bounds =
      diamond_distance_bounds(result.mean_channel, exact);
  const ResourceLedger ledger = ledger_for(model, report.gamma, total_time,
                                           epsilon, default_alphas(model));

  json j;
  j["budget"] = {{"r", budget.r}, {"epsilon_h", budget.epsilon_h}};
  j["distance"] = {{"lower", bounds.lower}, {"upper", bounds.upper}};
  j["mc_sigma"] = mc_sigma(result, exact);
  j["jump_histogram"] = histogram_to_json(result.jump_histogram);
  j["restart_count"] = result.restart_count;
  j["ledger"] = {{"jump_queries", ledger.jump_queries},
                 {"hamiltonian_queries", ledger.hamiltonian_queries},
                 {"gate_count", ledger.gate_count},
                 {"ancilla_count", ledger.ancilla_count}};
  j["manifest"] = make_manifest("run", model_path,
                                {{"time", total_time},
                                 {"epsilon", epsilon},
                                 {"samples", samples},
                                 {"seed", seed},
                                 {"mode", mode},
                                 {"workers", workers}});
  emit_json(j, out_path);
  return kExitOk;
}

int cmd_sweep(const std::string& model_path,
              const std::vector<double>& epsilons,
              const std::vector<double>& times, const std::string& out_path) {
  if (epsilons.empty() || times.empty()) {
    std::cerr << "sweep requires non-empty --epsilon-list and --time-list\n";
    return kExitInput;
  }
  LindbladModel model = load_model(model_path);
  const ConstraintReport report = check_constraint(model);
  if (!report.admissible) {
    std::cerr << "model is not admissible (residual " << report.residual
              << ")\n";
    return kExitConstraint;
  }
  const std::vector<double> alphas = default_alphas(model);

  std::ostringstream csv;
  csv << "T,epsilon,r,jump_queries,hamiltonian_queries,gate_count,tail_bound\n";
  for (double t : times) {
    for (double eps : epsilons) {
      const int r = truncation_order(report.gamma, t, eps);
      const ResourceLedger ledger =
          ledger_for(model, report.gamma, t, eps, alphas);
      const double tail = r >= 1 ? tail_bound(report.gamma, t, r) : 0.0;
      csv << format_double(t) << ',' << format_double(eps) << ',' << r << ','
          << format_double(ledger.jump_queries) << ','
          << format_double(ledger.hamiltonian_queries) << ','
          << format_double(ledger.gate_count) << ',' << format_double(tail)
          << '\n';
    }
  }
  emit(csv.str(), out_path);
  return kExitOk;
}

int cmd_stats(double gamma, double total_time, long samples,
              std::uint64_t seed, double epsilon,
              const std::string& out_path) {
  if (gamma <= 0.0 || total_time <= 0.0) {
    std::cerr << "stats requires positive --gamma and --time\n";
    return kExitInput;
  }

  // Holding-time KS statistic against 1 - exp(-gamma tau).
  RngStream hold_rng(seed, 0);
  std::vector<double> draws(samples);
  for (double& d : draws) d = sample_holding_time(hold_rng, gamma);
  std::sort(draws.begin(), draws.end());
  double ks = 0.0;
  for (std::size_t i = 0; i < draws.size(); ++i) {
    const double f = 1.0 - std::exp(-gamma * draws[i]);
    ks = std::max(ks, std::abs(f - static_cast<double>(i) / samples));
    ks = std::max(ks, std::abs(static_cast<double>(i + 1) / samples - f));
  }
  const double ks_critical = 1.63 / std::sqrt(static_cast<double>(samples));

  // Jump-count histogram from compiled trajectories against the Poisson
  // law, plus the raw tail frequency against the Chernoff bound.
  const int r = truncation_order(gamma, total_time, epsilon);
  std::map<int, long> hist;
  long exceed = 0;
  for (long i = 0; i < samples; ++i) {
    RngStream rng(seed, static_cast<std::uint64_t>(i) + 1);
    hist[compile_trajectory(rng, gamma, total_time, r).jump_count] += 1;
    if (sample_raw_jump_count(rng, gamma, total_time) > r) ++exceed;
  }
  double tv = 0.0;
  for (int n = 0; n <= r + 60; ++n) {
    const double observed =
        hist.count(n) ? static_cast<double>(hist[n]) / samples : 0.0;
    tv += std::abs(observed - counting_pmf(n, gamma, total_time));
  }
  tv *= 0.5;

  const double p_hat = static_cast<double>(exceed) / samples;
  const double sigma =
      std::sqrt(std::max(p_hat * (1.0 - p_hat), 0.0) / samples);
  const double bound = tail_bound(gamma, total_time, r);

  json j;
  j["ks"] = {{"statistic", ks},
             {"critical_alpha_0.01", ks_critical},
             {"pass", ks < ks_critical}};
  j["jump_histogram_tv"] = {{"tv_vs_poisson", tv}, {"pass", tv < 0.01}};
  j["tail"] = {{"r", r},
               {"empirical_pr_exceed", p_hat},
               {"chernoff_bound", bound},
               {"binomial_sigma", sigma},
               {"pass", p_hat <= bound + 3.0 * sigma}};
  j["manifest"] = make_manifest("stats", "",
                                {{"gamma", gamma},
                                 {"time", total_time},
                                 {"samples", samples},
                                 {"seed", seed},
                                 {"epsilon", epsilon}});
  emit_json(j, out_path);
  return kExitOk;
}

int cmd_gadget(const std::string& model_path, std::vector<double> alphas,
               const std::string& out_path) {
  LindbladModel model = load_model(model_path);
  const ConstraintReport report = check_constraint(model);
  if (!report.admissible) {
    std::cerr << "model is not admissible (residual " << report.residual
              << ")\n";
    return kExitConstraint;
  }
  if (model.jumps.empty()) {
    std::cerr << "model has no jump operators; nothing to build\n";
    return kExitInput;
  }
  if (alphas.empty()) alphas = default_alphas(model);

  double alpha_sq = 0.0;
  for (double a : alphas) alpha_sq += a * a;
  const JumpGadget gadget = build_jump_gadget(model, alphas);
  const double choi_dist =
      diamond_distance_bounds(gadget.system_channel(), jump_channel(model))
          .upper;

  const auto residual = [](const CMat& u) {
    return (u.adjoint() * u - CMat::Identity(u.rows(), u.cols()))
        .cwiseAbs()
        .maxCoeff();
  };

  json j;
  j["p0_raw"] = report.gamma / alpha_sq;
  j["p0_padded"] = gadget.p0;
  j["theta"] = gadget.theta;
  j["iterations"] = gadget.iterations;
  j["padded_weight"] = gadget.padded_weight;
  j["choi_distance_to_jump_channel"] = choi_dist;
  j["unitarity"] = {{"w", residual(gadget.w_circuit)},
                    {"prep", residual(gadget.prep_oracle)},
                    {"select", residual(gadget.select_unitary)}};
  json alphas_json = json::array();
  for (double a : alphas) alphas_json.push_back(a);
  j["manifest"] =
      make_manifest("gadget", model_path, {{"alphas", alphas_json}});
  emit_json(j, out_path);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "trajlind: trajectory-compiled Lindbladian simulation validator"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  std::string model_path, out_path, mode = "exact-unitary";
  double tol = 1e-8, total_time = 1.0, epsilon = 1e-2, gamma = 1.0;
  double stats_epsilon = 1e-3;
  long samples = 10000;
  std::uint64_t seed = default_seed();
  int workers = 1;
  std::vector<double> epsilon_list, time_list, alphas;

  CLI::App* check =
      app.add_subcommand("check", "test the admissibility constraint");
  check->add_option("--model", model_path, "model JSON file")->required();
  check->add_option("--tol", tol, "admissibility tolerance");
  check->add_option("--out", out_path, "output file (default stdout)");

  CLI::App* run = app.add_subcommand(
      "run", "Monte Carlo channel estimate vs the exact propagator");
  run->add_option("--model", model_path, "model JSON file")->required();
  run->add_option("--time", total_time, "total evolution time T")->required();
  run->add_option("--epsilon", epsilon, "diamond-distance target")->required();
  run->add_option("--samples", samples, "number of trajectories");
  run->add_option("--seed", seed, "RNG seed (default TRAJLIND_SEED or 0)");
  run->add_option("--mode", mode,
                  "exact-unitary | gadget-simulated | error-injected");
  run->add_option("--workers", workers, "worker threads");
  run->add_option("--out", out_path, "output file (default stdout)");

  CLI::App* sweep =
      app.add_subcommand("sweep", "resource-ledger scaling table");
  sweep->add_option("--model", model_path, "model JSON file")->required();
  sweep->add_option("--epsilon-list", epsilon_list, "epsilon values")
      ->delimiter(',');
  sweep->add_option("--time-list", time_list, "T values")->delimiter(',');
  sweep->add_option("--out", out_path, "output CSV (default stdout)");

  CLI::App* stats = app.add_subcommand(
      "stats", "holding-time and jump-count distribution tests");
  stats->add_option("--gamma", gamma, "total jump rate Gamma")->required();
  stats->add_option("--time", total_time, "total evolution time T")->required();
  stats->add_option("--samples", samples, "sample count");
  stats->add_option("--seed", seed, "RNG seed (default TRAJLIND_SEED or 0)");
  stats->add_option("--epsilon", stats_epsilon,
                    "epsilon used to pick the truncation order");
  stats->add_option("--out", out_path, "output file (default stdout)");

  CLI::App* gadget =
      app.add_subcommand("gadget", "jump-gadget construction report");
  gadget->add_option("--model", model_path, "model JSON file")->required();
  gadget->add_option("--alphas", alphas,
                     "block-encoding scales (default: operator norms)")
      ->delimiter(',');
  gadget->add_option("--out", out_path, "output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInput;
  }

  try {
    if (check->parsed()) return cmd_check(model_path, tol, out_path);
    if (run->parsed())
      return cmd_run(model_path, total_time, epsilon, samples, seed, mode,
                     workers, out_path);
    if (sweep->parsed())
      return cmd_sweep(model_path, epsilon_list, time_list, out_path);
    if (stats->parsed())
      return cmd_stats(gamma, total_time, samples, seed, stats_epsilon,
                       out_path);
    if (gadget->parsed()) return cmd_gadget(model_path, alphas, out_path);
  } catch (const ParseError& e) {
    std::cerr << e.what() << "\n";
    return kExitInput;
  } catch (const ConstraintError& e) {
    std::cerr << e.what() << "\n";
    return kExitConstraint;
  } catch (const std::invalid_argument& e) {
    std::cerr << e.what() << "\n";
    return kExitInput;
  } catch (const std::domain_error& e) {
    std::cerr << e.what() << "\n";
    return kExitInput;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kExitNumerical;
  }
  return kExitInput;
}
