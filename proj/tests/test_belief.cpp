// Copyright 2026 The tsinfo Authors.
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

#include <catch2/catch_amalgamated.hpp>
#include <cmath>
#include <vector>

#include "tsinfo/belief.hpp"
#include "tsinfo/generators.hpp"

using namespace tsinfo;

namespace {

// Brute-force posterior: normalized product of prior and kernel likelihoods.
std::vector<double> posterior_oracle(const ModelFamily& f,
                                     const std::vector<HistoryEntry>& history) {
  std::vector<double> w(f.model_count());
  for (int m = 0; m < f.model_count(); ++m) {
    w[m] = f.prior()[m];
    for (const auto& h : history) w[m] *= f.kernel(m)(h.action, h.outcome);
  }
  double total = 0.0;
  for (double x : w) total += x;
  for (double& x : w) x /= total;
  return w;
}

}  // namespace

TEST_CASE("single bayes update") {
  const ModelFamily f = make_bernoulli_bandit({{0.9}, {0.1}}, {0.5, 0.5});
  const Posterior post = bayes_update(prior_posterior(f), f, {0, 1});
  CHECK(post.step == 1);
  CHECK(post.weights[0] == Catch::Approx(0.9).margin(1e-12));
  CHECK(post.weights[1] == Catch::Approx(0.1).margin(1e-12));
}

TEST_CASE("point-mass prior is unchanged by consistent observations") {
  const ModelFamily f = make_bernoulli_bandit({{0.9}, {0.1}}, {1.0, 0.0});
  Posterior post = prior_posterior(f);
  RngStream rng(4);
  for (int t = 0; t < 10; ++t) {
    const auto obs = f.sample_outcome(0, 0, rng);
    post = bayes_update(post, f, {obs.action, obs.outcome});
    CHECK(post.weights[0] == 1.0);
    CHECK(post.weights[1] == 0.0);
  }
}

TEST_CASE("impossible observation raises") {
  const ModelFamily f = make_bernoulli_bandit({{1.0}}, {1.0});
  CHECK_THROWS_AS(bayes_update(prior_posterior(f), f, {0, 0}),
                  ImpossibleObservation);
}

TEST_CASE("zero-likelihood model gets weight exactly zero") {
  const ModelFamily f = make_bernoulli_bandit({{1.0}, {0.5}}, {0.5, 0.5});
  const Posterior post = bayes_update(prior_posterior(f), f, {0, 0});
  CHECK(post.weights[0] == 0.0);
  CHECK(post.weights[1] == 1.0);
}

TEST_CASE("sequential updates match the one-shot likelihood product") {
  RngStream rng(42);
  for (int trial = 0; trial < 40; ++trial) {
    const ModelFamily f = random_family(rng, static_cast<StructureKind>(trial % 4));
    const int true_model = rng.discrete(f.prior().weights());
    Posterior post = prior_posterior(f);
    std::vector<HistoryEntry> history;
    for (int t = 0; t < 5; ++t) {
      const int a = rng.uniform_int(f.action_count());
      const auto obs = f.sample_outcome(true_model, a, rng);
      history.push_back({obs.action, obs.outcome});
      post = bayes_update(post, f, history.back());
    }
    const auto oracle = posterior_oracle(f, history);
    for (int m = 0; m < f.model_count(); ++m)
      CHECK(post.weights[m] == Catch::Approx(oracle[m]).margin(1e-9));
  }
}

TEST_CASE("optimal action distribution") {
  const ModelFamily f =
      make_bernoulli_bandit({{0.9, 0.1}, {0.1, 0.9}}, {0.5, 0.5});
  SECTION("uniform posterior on symmetric models") {
    const ProbVector alpha = optimal_action_distribution(prior_posterior(f), f);
    CHECK(alpha[0] == Catch::Approx(0.5));
    CHECK(alpha[1] == Catch::Approx(0.5));
  }
  SECTION("point mass") {
    const ModelFamily g =
        make_bernoulli_bandit({{0.9, 0.1}, {0.1, 0.9}}, {0.0, 1.0});
    const ProbVector alpha = optimal_action_distribution(prior_posterior(g), g);
    CHECK(alpha[0] == 0.0);
    CHECK(alpha[1] == 1.0);
  }
  SECTION("skewed posterior, enumeration oracle") {
    const ModelFamily g =
        make_bernoulli_bandit({{0.9, 0.1}, {0.1, 0.9}}, {0.9, 0.1});
    const ProbVector alpha = optimal_action_distribution(prior_posterior(g), g);
    CHECK(alpha[0] == Catch::Approx(0.9).margin(1e-12));
    CHECK(alpha[1] == Catch::Approx(0.1).margin(1e-12));
  }
}

TEST_CASE("predictive mixtures") {
  const ModelFamily f =
      make_bernoulli_bandit({{0.9, 0.1}, {0.1, 0.9}}, {0.5, 0.5});
  SECTION("point mass gives the kernel row") {
    const ModelFamily g =
        make_bernoulli_bandit({{0.9, 0.1}, {0.1, 0.9}}, {1.0, 0.0});
    const ProbVector p = predictive(prior_posterior(g), g, 0);
    CHECK(p[1] == Catch::Approx(0.9).margin(1e-12));
  }
  SECTION("uniform mixture of symmetric kernels") {
    const ProbVector p = predictive(prior_posterior(f), f, 0);
    CHECK(p[0] == Catch::Approx(0.5).margin(1e-12));
    CHECK(p[1] == Catch::Approx(0.5).margin(1e-12));
  }
  SECTION("0.7/0.3 mixture arithmetic") {
    const ModelFamily g =
        make_bernoulli_bandit({{0.9, 0.1}, {0.1, 0.9}}, {0.7, 0.3});
    const ProbVector p = predictive(prior_posterior(g), g, 0);
    CHECK(p[1] == Catch::Approx(0.66).margin(1e-12));
    CHECK(p[0] == Catch::Approx(0.34).margin(1e-12));
  }
}

TEST_CASE("conditional predictive") {
  const ModelFamily f =
      make_bernoulli_bandit({{0.9, 0.1}, {0.1, 0.9}}, {0.5, 0.5});
  SECTION("conditioning on the sure optimum is a no-op") {
    const ModelFamily g = make_bernoulli_bandit({{0.9, 0.1}}, {1.0});
    const ProbVector cond = conditional_predictive(prior_posterior(g), g, 0, 0);
    CHECK(cond[1] == Catch::Approx(0.9).margin(1e-12));
  }
  SECTION("event-restricted mixture at the conditioned arm") {
    // A*=0 selects model 0; at arm 0 its kernel puts 0.9 on outcome 1
    const ProbVector cond = conditional_predictive(prior_posterior(f), f, 0, 0);
    CHECK(cond[0] == Catch::Approx(0.1).margin(1e-12));
    CHECK(cond[1] == Catch::Approx(0.9).margin(1e-12));
  }
  SECTION("zero-probability optimum rejected") {
    const ModelFamily g =
        make_bernoulli_bandit({{0.9, 0.1}, {0.1, 0.9}}, {1.0, 0.0});
    CHECK_THROWS_AS(conditional_predictive(prior_posterior(g), g, 0, 1),
                    PreconditionError);
  }
}

TEST_CASE("entropy of optimum") {
  const ModelFamily sym =
      make_bernoulli_bandit({{0.9, 0.1}, {0.1, 0.9}}, {0.5, 0.5});
  CHECK(entropy_of_optimum(prior_posterior(sym), sym) ==
        Catch::Approx(std::log(2.0)).margin(1e-12));
  const ModelFamily point =
      make_bernoulli_bandit({{0.9, 0.1}, {0.1, 0.9}}, {1.0, 0.0});
  CHECK(entropy_of_optimum(prior_posterior(point), point) == 0.0);
  const ModelFamily skew =
      make_bernoulli_bandit({{0.9, 0.1}, {0.1, 0.9}}, {0.9, 0.1});
  CHECK(entropy_of_optimum(prior_posterior(skew), skew) ==
        Catch::Approx(0.3250829733914482).margin(1e-12));
}

TEST_CASE("alpha entropy never exceeds log action count") {
  RngStream rng(8);
  for (int trial = 0; trial < 60; ++trial) {
    const ModelFamily f = random_family(rng, static_cast<StructureKind>(trial % 4));
    for (const Posterior& post : collect_posteriors(f, 8, rng)) {
      const ProbVector alpha = optimal_action_distribution(post, f);
      double total = 0.0;
      for (int a = 0; a < alpha.dim(); ++a) total += alpha[a];
      CHECK(total == Catch::Approx(1.0).margin(1e-12));
      CHECK(entropy(alpha) <= std::log(static_cast<double>(f.action_count())) + 1e-9);
    }
  }
}

TEST_CASE("posterior optimal-action distribution is a martingale over one step") {
  RngStream rng(123);
  for (int trial = 0; trial < 40; ++trial) {
    const ModelFamily f = random_family(rng, static_cast<StructureKind>(trial % 4));
    std::vector<Posterior> posts = collect_posteriors(f, 4, rng);
    for (const Posterior& post : posts) {
      const ProbVector alpha = optimal_action_distribution(post, f);
      std::vector<double> averaged(f.action_count(), 0.0);
      for (int a = 0; a < f.action_count(); ++a) {
        if (alpha[a] == 0.0) continue;
        const ProbVector pred = predictive(post, f, a);
        for (int y = 0; y < f.outcome_count(); ++y) {
          if (pred[y] == 0.0) continue;
          const Posterior next = bayes_update(post, f, {a, y});
          const ProbVector next_alpha = optimal_action_distribution(next, f);
          for (int b = 0; b < f.action_count(); ++b)
            averaged[b] += alpha[a] * pred[y] * next_alpha[b];
        }
      }
      for (int b = 0; b < f.action_count(); ++b)
        CHECK(averaged[b] == Catch::Approx(alpha[b]).margin(1e-9));
    }
  }
}

TEST_CASE("predictive equals the alpha mixture of conditional predictives") {
  RngStream rng(55);
  for (int trial = 0; trial < 40; ++trial) {
    const ModelFamily f = random_family(rng, static_cast<StructureKind>(trial % 4));
    for (const Posterior& post : collect_posteriors(f, 5, rng)) {
      const ProbVector alpha = optimal_action_distribution(post, f);
      for (int a = 0; a < f.action_count(); ++a) {
        const ProbVector marginal = predictive(post, f, a);
        std::vector<double> mixed(f.outcome_count(), 0.0);
        for (int astar = 0; astar < f.action_count(); ++astar) {
          if (alpha[astar] < kEventFloor) continue;
          const ProbVector cond = conditional_predictive(post, f, a, astar);
          for (int y = 0; y < f.outcome_count(); ++y)
            mixed[y] += alpha[astar] * cond[y];
        }
        for (int y = 0; y < f.outcome_count(); ++y)
          CHECK(mixed[y] == Catch::Approx(marginal[y]).margin(1e-9));
      }
    }
  }
}
