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

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <vector>

#include "test_support.hpp"

using namespace trajlind;

namespace {

// One-sample Kolmogorov-Smirnov statistic against an analytic CDF.
double ks_statistic(std::vector<double> samples,
                    const std::function<double(double)>& cdf) {
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  double d = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double f = cdf(samples[i]);
    d = std::max(d, std::abs(f - static_cast<double>(i) / n));
    d = std::max(d, std::abs(static_cast<double>(i + 1) / n - f));
  }
  return d;
}

double simpson(const std::function<double(double)>& f, double a, double b,
               int intervals) {
  double sum = f(a) + f(b);
  const double h = (b - a) / intervals;
  for (int i = 1; i < intervals; ++i)
    sum += f(a + i * h) * (i % 2 == 1 ? 4.0 : 2.0);
  return sum * h / 3.0;
}

}  // namespace

TEST_CASE("holding-time inversion formula") {
  CHECK(holding_time_from_uniform(0.5, 1.0) ==
        doctest::Approx(std::log(2.0)).epsilon(1e-14));
  CHECK(holding_time_from_uniform(0.0, 3.7) == 0.0);
  CHECK_THROWS_AS(holding_time_from_uniform(0.5, 0.0), std::domain_error);
  CHECK_THROWS_AS(holding_time_from_uniform(1.0, 1.0), std::domain_error);

  // The stream sampler is exactly the formula applied to the next uniform.
  RngStream a(99, 7), b(99, 7);
  for (int i = 0; i < 100; ++i) {
    const double eta = a.next_uniform();
    CHECK(sample_holding_time(b, 2.0) == holding_time_from_uniform(eta, 2.0));
  }
}

TEST_CASE("holding times pass a KS test against 1 - exp(-gamma tau)") {
  const double gamma = 2.0;
  const int n = 100000;
  RngStream rng(101, 0);
  std::vector<double> samples(n);
  for (double& s : samples) s = sample_holding_time(rng, gamma);
  const double d = ks_statistic(std::move(samples), [gamma](double t) {
    return 1.0 - std::exp(-gamma * t);
  });
  CHECK(d < 1.63 / std::sqrt(static_cast<double>(n)));  // alpha = 0.01
}

TEST_CASE("holding times are memoryless") {
  const double gamma = 1.5;
  const double cut = 0.3;
  const int n = 100000;
  RngStream rng(102, 0);
  std::vector<double> conditioned;
  conditioned.reserve(n);
  while (conditioned.size() < static_cast<std::size_t>(n)) {
    const double t = sample_holding_time(rng, gamma);
    if (t > cut) conditioned.push_back(t - cut);
  }
  const double d = ks_statistic(std::move(conditioned), [gamma](double t) {
    return 1.0 - std::exp(-gamma * t);
  });
  CHECK(d < 1.63 / std::sqrt(static_cast<double>(n)));
}

TEST_CASE("compile_trajectory basics") {
  RngStream rng(103, 0);
  const TrajectoryPlan still = compile_trajectory(rng, 0.0, 2.5, 4);
  CHECK(still.jump_count == 0);
  CHECK(still.holding_times.empty());
  CHECK(still.residual_time == 2.5);

  CHECK_THROWS_AS(compile_trajectory(rng, 1.0, 0.0, 4), std::domain_error);
  CHECK_THROWS_AS(compile_trajectory(rng, 1.0, 1.0, 0), std::domain_error);
}

TEST_CASE("compiled plans satisfy their invariants") {
  const double gamma = 2.0, total = 1.0;
  const int r = 6;
  RngStream rng(104, 0);
  for (int i = 0; i < 5000; ++i) {
    const TrajectoryPlan plan = compile_trajectory(rng, gamma, total, r);
    CHECK(plan.jump_count == static_cast<int>(plan.holding_times.size()));
    CHECK(plan.jump_count <= r);
    double sum = 0.0;
    for (double t : plan.holding_times) {
      CHECK(t >= 0.0);
      sum += t;
    }
    CHECK(sum <= total);
    CHECK(plan.residual_time == doctest::Approx(total - sum).epsilon(1e-12));
    CHECK(plan.residual_time >= 0.0);
  }
}

TEST_CASE("compile_trajectory is bitwise reproducible") {
  RngStream a(105, 3), b(105, 3);
  for (int i = 0; i < 50; ++i) {
    const TrajectoryPlan pa = compile_trajectory(a, 1.7, 2.0, 5);
    const TrajectoryPlan pb = compile_trajectory(b, 1.7, 2.0, 5);
    CHECK(pa.holding_times == pb.holding_times);
    CHECK(pa.residual_time == pb.residual_time);
  }
}

TEST_CASE("jump counts follow the truncated Poisson law") {
  const double gamma = 2.0, total = 1.0;
  const int r = truncation_order(gamma, total, 1e-3);
  const int n = 100000;
  RngStream rng(106, 0);
  std::map<int, long> hist;
  for (int i = 0; i < n; ++i)
    hist[compile_trajectory(rng, gamma, total, r).jump_count] += 1;

  // Conditional Poisson(gamma T | N <= r) reference.
  double z = 0.0;
  for (int k = 0; k <= r; ++k) z += counting_pmf(k, gamma, total);
  double tv = 0.0;
  for (int k = 0; k <= r; ++k) {
    const double expected = counting_pmf(k, gamma, total) / z;
    const double observed =
        hist.count(k) ? static_cast<double>(hist[k]) / n : 0.0;
    tv += std::abs(expected - observed);
  }
  CHECK(0.5 * tv < 0.01);
}

TEST_CASE("restart frequency estimates the truncation tail") {
  const double gamma = 2.0, total = 1.0;
  const int r = 3;
  const int n = 100000;
  RngStream rng(107, 0);
  long restarts = 0;
  for (int i = 0; i < n; ++i) compile_trajectory(rng, gamma, total, r, &restarts);

  // Each attempt restarts exactly when r+1 draws fit inside T, i.e. with
  // probability Pr(N(T) > r).
  double exceed = 1.0;
  for (int k = 0; k <= r; ++k) exceed -= counting_pmf(k, gamma, total);
  const double attempts = static_cast<double>(n) + static_cast<double>(restarts);
  const double observed = static_cast<double>(restarts) / attempts;
  const double sigma = std::sqrt(exceed * (1.0 - exceed) / attempts);
  CHECK(std::abs(observed - exceed) < 5.0 * sigma);
  CHECK(exceed <= tail_bound(gamma, total, r));
}

TEST_CASE("raw tail frequency is below the Chernoff bound") {
  const double gamma = 2.0, total = 1.0;
  const double epsilon = 1e-3;
  const int r = truncation_order(gamma, total, epsilon);
  const int n = 100000;
  RngStream rng(108, 0);
  long exceed = 0;
  for (int i = 0; i < n; ++i)
    if (sample_raw_jump_count(rng, gamma, total) > r) ++exceed;
  const double p_hat = static_cast<double>(exceed) / n;
  const double sigma = std::sqrt(std::max(p_hat * (1.0 - p_hat), 1e-12) / n);
  CHECK(p_hat <= tail_bound(gamma, total, r) + 3.0 * sigma);
}

TEST_CASE("truncation order") {
  CHECK(truncation_order(1.0, 1.0, 0.1) == 5);
  CHECK(tail_bound(1.0, 1.0, 4) > 0.05);   // r = 4 is insufficient
  CHECK(tail_bound(1.0, 1.0, 5) <= 0.05);  // r = 5 meets epsilon / 2
  CHECK(truncation_order(0.0, 1.0, 0.1) == 0);
  CHECK_THROWS_AS(truncation_order(1.0, 1.0, 0.0), std::domain_error);
  CHECK_THROWS_AS(truncation_order(1.0, 1.0, 1.0), std::domain_error);

  for (double gt : {0.5, 1.0, 2.0, 5.0, 10.0}) {
    int prev = 0;
    for (double eps : {1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6}) {
      const int r = truncation_order(gt, 1.0, eps);
      CHECK(r >= prev);  // halving epsilon never decreases r
      CHECK(tail_bound(gt, 1.0, r) <= eps / 2.0);
      prev = r;
    }
  }
  // Nondecreasing in gamma T at fixed epsilon.
  int prev = 0;
  for (double gt : {0.5, 1.0, 2.0, 5.0, 10.0}) {
    const int r = truncation_order(gt, 1.0, 1e-3);
    CHECK(r >= prev);
    prev = r;
  }
}

TEST_CASE("budget allocation") {
  const SimulationBudget budget = allocate_budget(1.0, 1.0, 0.1);
  CHECK(budget.r == 5);
  CHECK(budget.epsilon_h == doctest::Approx(0.1 / 12.0).epsilon(1e-14));

  for (double gt : {0.5, 1.0, 2.0, 5.0, 10.0}) {
    for (double eps : {1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6}) {
      const SimulationBudget b = allocate_budget(gt, 1.0, eps);
      CHECK(tail_bound(gt, 1.0, b.r) + (b.r + 1) * b.epsilon_h <= eps + 1e-15);
    }
  }

  const SimulationBudget none = allocate_budget(0.0, 1.0, 0.1);
  CHECK(none.r == 0);
  CHECK(none.epsilon_h == doctest::Approx(0.05));
}

TEST_CASE("Erlang tail closed form and recurrence") {
  CHECK(erlang_tail(1, 1.0, 1.0) == doctest::Approx(std::exp(-1.0)).epsilon(1e-14));
  CHECK(erlang_tail(2, 1.0, 1.0) ==
        doctest::Approx(2.0 * std::exp(-1.0)).epsilon(1e-14));
  CHECK_THROWS_AS(erlang_tail(0, 1.0, 1.0), std::domain_error);

  // G_n(T) = exp(-gT) + int_0^T g exp(-gt) G_{n-1}(T - t) dt by quadrature.
  const double gamma = 1.3, total = 0.9;
  for (int n = 2; n <= 5; ++n) {
    const double direct = erlang_tail(n, gamma, total);
    const double via_recurrence =
        std::exp(-gamma * total) +
        simpson(
            [&](double t) {
              return gamma * std::exp(-gamma * t) *
                     erlang_tail(n - 1, gamma, total - t);
            },
            0.0, total, 2000);
    CHECK(std::abs(direct - via_recurrence) < 1e-6);
  }
}

TEST_CASE("counting pmf identities") {
  const double gamma = 1.7, total = 1.1;
  CHECK(counting_pmf(0, gamma, total) ==
        doctest::Approx(std::exp(-gamma * total)).epsilon(1e-14));

  // pmf(n) = G_{n+1} - G_n, with G_0 = 0 covered by the n = 0 line.
  CHECK(std::abs(counting_pmf(0, gamma, total) -
                 erlang_tail(1, gamma, total)) < 1e-14);
  for (int n = 1; n <= 20; ++n)
    CHECK(std::abs(counting_pmf(n, gamma, total) -
                   (erlang_tail(n + 1, gamma, total) -
                    erlang_tail(n, gamma, total))) < 1e-12);

  const double gt = gamma * total;
  const int n_max =
      static_cast<int>(gt + 40.0 * std::sqrt(gt) + 40.0);
  double mass = 0.0, mean = 0.0;
  for (int n = 0; n <= n_max; ++n) {
    const double p = counting_pmf(n, gamma, total);
    mass += p;
    mean += n * p;
  }
  CHECK(std::abs(mass - 1.0) < 1e-12);
  CHECK(std::abs(mean - gt) < 1e-8);
}

TEST_CASE("Chernoff tail bound dominates the exact tail") {
  CHECK(tail_bound(1.0, 1.0, 5) == doctest::Approx(0.0174878).epsilon(1e-4));
  CHECK(tail_bound(0.0, 1.0, 3) == 0.0);

  for (double gt : {0.5, 1.0, 2.0, 5.0}) {
    for (int r = static_cast<int>(std::ceil(gt)); r <= 20; ++r) {
      double exact = 1.0;
      for (int k = 0; k <= r; ++k) exact -= counting_pmf(k, gt, 1.0);
      CHECK(exact <= tail_bound(gt, 1.0, r) + 1e-12);
    }
  }

  // Monotone decreasing beyond e * gamma T.
  double prev = tail_bound(1.0, 1.0, 3);
  for (int r = 4; r < 30; ++r) {
    const double b = tail_bound(1.0, 1.0, r);
    CHECK(b < prev);
    prev = b;
  }
}
