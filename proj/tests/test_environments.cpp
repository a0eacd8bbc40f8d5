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
#include <set>
#include <vector>

#include "tsinfo/generators.hpp"
#include "tsinfo/model_family.hpp"
#include "tsinfo/verify.hpp"

using namespace tsinfo;

TEST_CASE("bernoulli bandit construction") {
  const ModelFamily f =
      make_bernoulli_bandit({{0.9, 0.1}, {0.1, 0.9}}, {0.5, 0.5});
  CHECK(f.action_count() == 2);
  CHECK(f.outcome_count() == 2);
  CHECK(f.model_count() == 2);
  CHECK(f.optimal_action(0) == 0);
  CHECK(f.optimal_action(1) == 1);
  CHECK(f.kernel(0)(0, 1) == Catch::Approx(0.9));
  CHECK(f.reward(0, 1) == 1.0);
  CHECK(f.reward(0, 0) == 0.0);
  f.validate();

  CHECK_THROWS_AS(make_bernoulli_bandit({{1.2}}, {1.0}), ValidationError);
  CHECK_THROWS_AS(make_bernoulli_bandit({{-0.1}}, {1.0}), ValidationError);

  // deterministic single-model family
  const ModelFamily det = make_bernoulli_bandit({{1.0, 0.0}}, {1.0});
  CHECK(det.optimal_action(0) == 0);

  // tied means break to the lowest index
  const ModelFamily tied =
      make_bernoulli_bandit({{0.5, 0.5}, {0.5, 0.5}}, {0.5, 0.5});
  CHECK(tied.optimal_action(0) == 0);
  CHECK(tied.optimal_action(1) == 0);
}

TEST_CASE("full information construction") {
  const ModelFamily f = make_full_information(
      {{0.8, 0.2}, {0.2, 0.8}}, {{0.0, 1.0}, {1.0, 0.0}}, {0.5, 0.5});
  CHECK(f.structure() == StructureKind::full_information);
  // every action's kernel row equals the model's Z distribution
  for (int m = 0; m < 2; ++m)
    for (int a = 0; a < 2; ++a)
      for (int z = 0; z < 2; ++z)
        CHECK(f.kernel(m)(a, z) == Catch::Approx(f.kernel(m)(0, z)));
  // model 0 has P(z=1)=0.2, so action 1 (reward 1−z) is optimal
  CHECK(f.optimal_action(0) == 1);
  CHECK(f.optimal_action(1) == 0);

  // single model, constant reward: zero-regret instance
  const ModelFamily flat =
      make_full_information({{0.5, 0.5}}, {{0.3, 0.3}, {0.3, 0.3}}, {1.0});
  CHECK(flat.expected_reward(0, 0) == Catch::Approx(flat.expected_reward(0, 1)));

  // reward span > 1 rejected
  CHECK_THROWS_AS(
      make_full_information({{0.5, 0.5}}, {{0.0, 1.4}}, {1.0}),
      ValidationError);
}

TEST_CASE("linear bandit construction") {
  std::vector<Eigen::VectorXd> features(3), thetas(2);
  features[0] = Eigen::Vector2d(1.0, 0.0);
  features[1] = Eigen::Vector2d(0.0, 1.0);
  features[2] = Eigen::Vector2d(0.5, 0.5);
  thetas[0] = Eigen::Vector2d(0.9, 0.1);
  thetas[1] = Eigen::Vector2d(0.1, 0.9);
  const ModelFamily f = make_linear_bandit(features, thetas, {0.5, 0.5});
  CHECK(f.action_count() == 3);
  // mean identity: Σ_y kernel * reward = aᵀθ
  for (int m = 0; m < 2; ++m)
    for (int a = 0; a < 3; ++a)
      CHECK(f.expected_reward(m, a) ==
            Catch::Approx(features[a].dot(thetas[m])).margin(1e-12));
  CHECK(f.optimal_action(0) == 0);  // 0.9 > 0.5 > 0.1
  CHECK(f.optimal_action(1) == 1);

  // degenerate one-arm instance
  std::vector<Eigen::VectorXd> one_feat{Eigen::VectorXd::Ones(1)};
  std::vector<Eigen::VectorXd> one_theta{0.5 * Eigen::VectorXd::Ones(1)};
  const ModelFamily one = make_linear_bandit(one_feat, one_theta, {1.0});
  CHECK(one.optimal_action(0) == 0);

  // aᵀθ outside [0,1] rejected
  std::vector<Eigen::VectorXd> big{3.0 * Eigen::VectorXd::Ones(1)};
  CHECK_THROWS_AS(make_linear_bandit(big, one_theta, {1.0}), ValidationError);
}

TEST_CASE("hypercube linear actions keep the mean identity") {
  RngStream rng(11);
  std::vector<Eigen::VectorXd> features;
  for (int mask = 0; mask < 8; ++mask) {
    Eigen::VectorXd a(3);
    for (int i = 0; i < 3; ++i) a(i) = (mask >> i & 1) / 3.0;
    features.push_back(a);
  }
  std::vector<Eigen::VectorXd> thetas(3);
  for (auto& th : thetas) {
    th.resize(3);
    for (int i = 0; i < 3; ++i) th(i) = rng.uniform();
  }
  const ModelFamily f =
      make_linear_bandit(features, thetas, {0.3, 0.3, 0.4});
  for (int m = 0; m < 3; ++m)
    for (int a = 0; a < 8; ++a)
      CHECK(f.expected_reward(m, a) ==
            Catch::Approx(features[a].dot(thetas[m])).margin(1e-12));
}

TEST_CASE("semi-bandit construction") {
  const ModelFamily f = make_semi_bandit(
      4, 2, {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}},
      {{0.8, 0.7, 0.3, 0.2}, {0.2, 0.3, 0.7, 0.8}}, {0.5, 0.5});
  CHECK(f.action_count() == 6);
  CHECK(f.outcome_count() == 4);
  f.validate();

  SECTION("reward is the scaled component sum") {
    // action {0,1}, outcome bits 11 -> (0.5+0.5)/2 = 0.5
    CHECK(f.reward(0, 3) == Catch::Approx(0.5));
    CHECK(f.reward(0, 0) == Catch::Approx(-0.5));
    CHECK(f.reward(0, 1) == Catch::Approx(0.0));
  }

  SECTION("kernel is the product of component marginals") {
    // model 0, action {0,1}: P(bits=11) = 0.8*0.7
    CHECK(f.kernel(0)(0, 3) == Catch::Approx(0.8 * 0.7));
    CHECK(f.kernel(0)(0, 0) == Catch::Approx(0.2 * 0.3));
  }

  SECTION("component marginals recovered from the kernel") {
    for (int m = 0; m < 2; ++m)
      for (int a = 0; a < 6; ++a) {
        const auto& comps = f.semi_bandit()->action_components[a];
        for (std::size_t j = 0; j < comps.size(); ++j) {
          double marginal = 0.0;
          for (int y = 0; y < f.outcome_count(); ++y)
            if (y >> j & 1) marginal += f.kernel(m)(a, y);
          CHECK(marginal ==
                Catch::Approx(f.semi_bandit()->component_success(m, comps[j]))
                    .margin(1e-12));
        }
      }
  }

  SECTION("m = 1 reduces to a one-component bandit") {
    const ModelFamily tiny = make_semi_bandit(1, 1, {{0}}, {{0.6}}, {1.0});
    CHECK(tiny.action_count() == 1);
    CHECK(tiny.outcome_count() == 2);
    CHECK(tiny.expected_reward(0, 0) == Catch::Approx(0.6 * 0.5 - 0.4 * 0.5));
  }

  SECTION("subset size and cap errors") {
    CHECK_THROWS_AS(make_semi_bandit(4, 2, {{0, 1, 2}}, {{0.5, 0.5, 0.5, 0.5}}, {1.0}),
                    ValidationError);
    CHECK_THROWS_AS(
        make_semi_bandit(4, 2, {{0, 1}}, {{0.5, 0.5, 0.5, 0.5}}, {1.0}, 3),
        InstanceTooLarge);
  }

  SECTION("C(6,3) action-count scaling") {
    std::vector<std::vector<int>> subsets;
    for (int i = 0; i < 6; ++i)
      for (int j = i + 1; j < 6; ++j)
        for (int k = j + 1; k < 6; ++k) subsets.push_back({i, j, k});
    REQUIRE(subsets.size() == 20);
    std::vector<std::vector<double>> probs(3, std::vector<double>(6, 0.5));
    for (int m = 0; m < 3; ++m) probs[m][m] = 0.9;
    const ModelFamily big = make_semi_bandit(6, 3, subsets, probs, {0.3, 0.3, 0.4});
    CHECK(big.action_count() == 20);
    big.validate();
  }
}

TEST_CASE("sample_outcome is reproducible and matches the kernel row") {
  const ModelFamily f = make_bernoulli_bandit({{0.9, 0.1}}, {1.0});

  SECTION("deterministic kernel row") {
    const ModelFamily det = make_bernoulli_bandit({{0.0}}, {1.0});
    RngStream rng(3);
    for (int i = 0; i < 20; ++i)
      CHECK(det.sample_outcome(0, 0, rng).outcome == 0);
  }

  SECTION("same seed, same draws") {
    RngStream a(17), b(17);
    for (int i = 0; i < 50; ++i) {
      const auto sa = f.sample_outcome(0, 0, a);
      const auto sb = f.sample_outcome(0, 0, b);
      CHECK(sa.outcome == sb.outcome);
      CHECK(sa.reward == sb.reward);
    }
  }

  SECTION("empirical frequency within 3 sigma of the mean") {
    RngStream rng(1234);
    const int n = 100000;
    int ones = 0;
    for (int i = 0; i < n; ++i) ones += f.sample_outcome(0, 0, rng).outcome;
    const double phat = static_cast<double>(ones) / n;
    const double sigma = std::sqrt(0.9 * 0.1 / n);
    CHECK(std::abs(phat - 0.9) <= 3.0 * sigma);
  }

  SECTION("index validation") {
    RngStream rng(0);
    CHECK_THROWS_AS(f.sample_outcome(2, 0, rng), ValidationError);
    CHECK_THROWS_AS(f.sample_outcome(0, 5, rng), ValidationError);
  }
}

TEST_CASE("optimal_action is invariant to constant reward shifts") {
  RngStream rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    const ModelFamily f = random_full_information_family(rng);
    // shift every reward by the same constant and rebuild
    std::vector<std::vector<double>> dists(f.model_count());
    for (int m = 0; m < f.model_count(); ++m)
      for (int z = 0; z < f.outcome_count(); ++z)
        dists[m].push_back(f.kernel(m)(0, z));
    std::vector<std::vector<double>> rewards(f.action_count());
    const double shift = rng.uniform(-0.2, 0.2);
    for (int a = 0; a < f.action_count(); ++a)
      for (int z = 0; z < f.outcome_count(); ++z)
        rewards[a].push_back(f.reward(a, z) + shift);
    const ModelFamily shifted =
        make_full_information(dists, rewards, f.prior().weights());
    for (int m = 0; m < f.model_count(); ++m)
      CHECK(shifted.optimal_action(m) == f.optimal_action(m));
  }
}

TEST_CASE("randomized constructions satisfy every invariant") {
  RngStream rng(77);
  for (int trial = 0; trial < 120; ++trial) {
    const StructureKind s = static_cast<StructureKind>(trial % 4);
    const ModelFamily f = random_family(rng, s);
    CHECK_NOTHROW(f.validate());
    CHECK(f.action_count() <= 20);
    CHECK(f.outcome_count() <= 64);
    CHECK(f.model_count() <= 10);
  }
}

TEST_CASE("full-information predictive of Z is action independent") {
  RngStream rng(21);
  const ModelFamily f = random_full_information_family(rng);
  const Posterior post = prior_posterior(f);
  const ProbVector base = predictive(post, f, 0);
  for (int a = 1; a < f.action_count(); ++a) {
    const ProbVector other = predictive(post, f, a);
    for (int z = 0; z < f.outcome_count(); ++z)
      CHECK(other[z] == Catch::Approx(base[z]).margin(1e-12));
  }
}

TEST_CASE("semi-bandit round sampling shares component values") {
  const ModelFamily f = worked_semi_bandit_family();
  const auto& sb = *f.semi_bandit();
  RngStream rng(9);
  for (int i = 0; i < 500; ++i) {
    const int model = rng.uniform_int(f.model_count());
    const int action = rng.uniform_int(f.action_count());
    const RoundSample round = f.sample_round(model, action, rng);
    const int astar = f.optimal_action(model);
    const auto& ca = sb.action_components[action];
    const auto& cs = sb.action_components[astar];
    for (std::size_t ja = 0; ja < ca.size(); ++ja)
      for (std::size_t js = 0; js < cs.size(); ++js)
        if (ca[ja] == cs[js])
          CHECK((round.outcome_at_action >> ja & 1) ==
                (round.outcome_at_optimum >> js & 1));
  }
}

TEST_CASE("full-information round sampling shares Z") {
  RngStream rng(31);
  const ModelFamily f = random_full_information_family(rng);
  for (int i = 0; i < 200; ++i) {
    const int model = rng.uniform_int(f.model_count());
    const int action = rng.uniform_int(f.action_count());
    const RoundSample round = f.sample_round(model, action, rng);
    CHECK(round.outcome_at_action == round.outcome_at_optimum);
  }
}
