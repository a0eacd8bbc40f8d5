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

#include "tsinfo/analysis.hpp"
#include "tsinfo/generators.hpp"
#include "tsinfo/verify.hpp"

using namespace tsinfo;

namespace {

// Frozen from the direct-summation oracle: KL(Bern(0.9) || Bern(0.5)).
constexpr double kKl09vsHalf = 0.3680642071684971;
// 0.16 / kKl09vsHalf, the worked symmetric-bandit ratio.
constexpr double kWorkedGamma = 0.4347067627979191;

ModelFamily symmetric_bandit() {
  return make_bernoulli_bandit({{0.9, 0.1}, {0.1, 0.9}}, {0.5, 0.5});
}

ModelFamily point_mass_bandit() {
  return make_bernoulli_bandit({{0.9, 0.1}, {0.1, 0.9}}, {1.0, 0.0});
}

}  // namespace

TEST_CASE("expected instant regret") {
  SECTION("point mass gives exactly zero") {
    const ModelFamily f = point_mass_bandit();
    CHECK(expected_instant_regret(prior_posterior(f), f) == 0.0);
  }
  SECTION("worked symmetric instance") {
    const ModelFamily f = symmetric_bandit();
    CHECK(expected_instant_regret(prior_posterior(f), f) ==
          Catch::Approx(0.4).margin(1e-12));
  }
  SECTION("shared optimum forces zero") {
    const ModelFamily f =
        make_bernoulli_bandit({{0.9, 0.1}, {0.9, 0.5}}, {0.5, 0.5});
    REQUIRE(f.optimal_action(0) == f.optimal_action(1));
    CHECK(expected_instant_regret(prior_posterior(f), f) ==
          Catch::Approx(0.0).margin(1e-12));
  }
}

TEST_CASE("information gain via the decomposition") {
  SECTION("point mass gives exactly zero") {
    const ModelFamily f = point_mass_bandit();
    CHECK(information_gain(prior_posterior(f), f) == 0.0);
  }
  SECTION("worked symmetric instance sums four equal KL terms") {
    const ModelFamily f = symmetric_bandit();
    CHECK(information_gain(prior_posterior(f), f) ==
          Catch::Approx(kKl09vsHalf).margin(1e-12));
  }
  SECTION("full-information gain equals I(A*; Z)") {
    const ModelFamily f = worked_full_information_family();
    const Posterior post = prior_posterior(f);
    // direct joint of (A*, Z): model m has optimum opt(m) and z-law kernel row
    std::vector<double> joint(2 * 2, 0.0);
    for (int m = 0; m < 2; ++m)
      for (int z = 0; z < 2; ++z)
        joint[f.optimal_action(m) * 2 + z] += post.weights[m] * f.kernel(m)(0, z);
    const double mi = mutual_information(JointTable(joint, 2, 2));
    CHECK(information_gain(post, f) == Catch::Approx(mi).margin(1e-9));
  }
}

TEST_CASE("both information-gain routes agree on random instances") {
  RngStream rng(101);
  for (int trial = 0; trial < 60; ++trial) {
    const ModelFamily f = random_family(rng, static_cast<StructureKind>(trial % 4));
    for (const Posterior& post : collect_posteriors(f, 6, rng))
      CHECK(std::abs(information_gain(post, f) - information_gain_direct(post, f)) <=
            1e-9);
  }
}

TEST_CASE("information ratio report") {
  SECTION("worked instance") {
    const ModelFamily f = symmetric_bandit();
    const InfoRatioReport report = information_ratio(prior_posterior(f), f);
    REQUIRE(report.ratio.has_value());
    CHECK(*report.ratio == Catch::Approx(kWorkedGamma).margin(1e-12));
    CHECK(report.structural_bound == Catch::Approx(1.0));
    CHECK(*report.ratio <= report.structural_bound);
    CHECK(report.optimum_entropy == Catch::Approx(std::log(2.0)).margin(1e-12));
  }
  SECTION("point mass leaves the ratio undefined") {
    const ModelFamily f = point_mass_bandit();
    const InfoRatioReport report = information_ratio(prior_posterior(f), f);
    CHECK(!report.ratio.has_value());
    CHECK(report.expected_instant_regret == 0.0);
    CHECK(report.info_gain == 0.0);
  }
  SECTION("full information ratio is at most one half") {
    const ModelFamily f = worked_full_information_family();
    const InfoRatioReport report = information_ratio(prior_posterior(f), f);
    REQUIRE(report.ratio.has_value());
    CHECK(*report.ratio <= 0.5 + 1e-9);
  }
}

TEST_CASE("structural gamma bounds") {
  RngStream rng(7);
  const ModelFamily six_arm = make_bernoulli_bandit(
      {{0.9, 0.1, 0.2, 0.3, 0.4, 0.5}, {0.1, 0.8, 0.2, 0.3, 0.4, 0.5}},
      {0.5, 0.5});
  CHECK(structural_gamma_bound(six_arm) == Catch::Approx(3.0));
  CHECK(structural_gamma_bound(worked_linear_family()) == Catch::Approx(1.0));
  CHECK(structural_gamma_bound(worked_semi_bandit_family()) == Catch::Approx(0.5));
  CHECK(structural_gamma_bound(worked_full_information_family()) ==
        Catch::Approx(0.5));
}

TEST_CASE("prop1 regret bound formula") {
  CHECK(prop1_regret_bound(1.0, std::log(2.0), 100) ==
        Catch::Approx(8.325546111576978).margin(1e-12));
  CHECK(prop1_regret_bound(3.0, 0.0, 50) == 0.0);
  CHECK_THROWS_AS(prop1_regret_bound(-1.0, 1.0, 10), ValidationError);
  // the linear clause reproduces sqrt(H d T / 2)
  const double d = 2, t = 64, h = std::log(3.0);
  CHECK(prop1_regret_bound(d / 2.0, h, static_cast<int>(t)) ==
        Catch::Approx(std::sqrt(h * d * t / 2.0)).margin(1e-12));
}

TEST_CASE("corollary 1 sub-Gaussian bounds") {
  const ModelFamily three_arm = make_bernoulli_bandit(
      {{0.9, 0.1, 0.5}, {0.1, 0.9, 0.5}}, {0.5, 0.5});
  CHECK(corollary1_gamma_bound(three_arm, 0.5) == Catch::Approx(1.5));
  CHECK(corollary1_gamma_bound(worked_linear_family(), 1.0) == Catch::Approx(4.0));
  // at sigma = 1/2 the bounded-reward constants reappear
  CHECK(corollary1_gamma_bound(three_arm, 0.5) ==
        Catch::Approx(three_arm.action_count() / 2.0));
  CHECK(corollary1_gamma_bound(worked_full_information_family(), 0.5) ==
        Catch::Approx(0.5));
  CHECK(corollary1_gamma_bound(worked_linear_family(), 0.5) ==
        Catch::Approx(worked_linear_family().linear()->dim / 2.0));
  const ModelFamily semi = worked_semi_bandit_family();
  CHECK(corollary1_gamma_bound(semi, 0.5) ==
        Catch::Approx(semi.semi_bandit()->d /
                      (2.0 * semi.semi_bandit()->m * semi.semi_bandit()->m)));
  CHECK_THROWS_AS(corollary1_gamma_bound(semi, 0.0), ValidationError);
}

TEST_CASE("linear trace matrix identities") {
  RngStream rng(23);
  for (int trial = 0; trial < 30; ++trial) {
    const ModelFamily f = random_linear_family(rng, 1 + trial % 3);
    for (const Posterior& post : collect_posteriors(f, 6, rng)) {
      const Eigen::MatrixXd m = linear_trace_matrix(post, f);
      const double regret = expected_instant_regret(post, f);
      const double gain = information_gain(post, f);
      CHECK(m.trace() == Catch::Approx(regret).margin(1e-9));
      CHECK(2.0 * m.squaredNorm() <= gain + 1e-9);
      if (m.rows() > f.linear()->dim) {
        const Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
        CHECK(svd.singularValues()(f.linear()->dim) <= 1e-9);
      }
    }
  }
}

TEST_CASE("semi-bandit information lower bounds") {
  SECTION("point mass collapses to (0, 0)") {
    const ModelFamily f = make_semi_bandit(
        2, 2, {{0, 1}, {0}}, {{0.8, 0.2}, {0.3, 0.7}}, {1.0, 0.0});
    const auto [gain, bound] = semi_bandit_info_lower_bound(prior_posterior(f), f, 0);
    CHECK(gain == Catch::Approx(0.0).margin(1e-12));
    CHECK(bound == Catch::Approx(0.0).margin(1e-12));
  }
  SECTION("worked instance satisfies both lemmas at the prior") {
    const ModelFamily f = worked_semi_bandit_family();
    const Posterior post = prior_posterior(f);
    for (int a = 0; a < f.action_count(); ++a) {
      const auto [gain, bound] = semi_bandit_info_lower_bound(post, f, a);
      CHECK(gain >= bound - 1e-9);
    }
    const auto [gain, bound] = semi_bandit_aggregate_lower_bound(post, f);
    CHECK(gain >= bound - 1e-9);
  }
  SECTION("single-component actions reduce to per-arm Pinsker") {
    const ModelFamily f = make_semi_bandit(
        3, 1, {{0}, {1}, {2}}, {{0.9, 0.2, 0.5}, {0.2, 0.8, 0.5}}, {0.5, 0.5});
    const Posterior post = prior_posterior(f);
    for (int a = 0; a < f.action_count(); ++a) {
      const auto [gain, bound] = semi_bandit_info_lower_bound(post, f, a);
      CHECK(gain >= bound - 1e-9);
    }
  }
  SECTION("wrong structure rejected") {
    const ModelFamily f = symmetric_bandit();
    CHECK_THROWS_AS(semi_bandit_info_lower_bound(prior_posterior(f), f, 0),
                    ValidationError);
  }
}

TEST_CASE("certificates hold along random trajectories of every structure") {
  RngStream rng(301);
  for (int trial = 0; trial < 24; ++trial) {
    const StructureKind s = static_cast<StructureKind>(trial % 4);
    const ModelFamily f = random_family(rng, s);
    for (const Posterior& post : collect_posteriors(f, 8, rng)) {
      const InfoRatioReport report = information_ratio(post, f);
      for (const auto& cert : step_certificates(post, f, report)) {
        INFO(structure_name(s) << "/" << cert.bound_name << " lhs=" << cert.lhs
                               << " rhs=" << cert.rhs);
        CHECK(cert.holds);
      }
    }
  }
}

TEST_CASE("enumeration identity on a tiny instance") {
  const ModelFamily f = make_bernoulli_bandit({{0.8, 0.3}, {0.2, 0.6}}, {0.6, 0.4});
  const EnumerationIdentity id = enumerate_information_identity(f, 3);
  CHECK(id.per_step_info_sum == Catch::Approx(id.trajectory_mi).margin(1e-9));
  CHECK(id.trajectory_mi <= id.prior_optimum_entropy + 1e-9);
}
