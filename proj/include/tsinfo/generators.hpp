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
//
// Randomized desk-scale instances of every structure, used by the built-in
// verification suite and the tests. Generated models are kept pairwise
// separated so that instances stay numerically non-degenerate.

#ifndef TSINFO_GENERATORS_HPP
#define TSINFO_GENERATORS_HPP

#include <algorithm>
#include <set>
#include <vector>

#include "tsinfo/belief.hpp"
#include "tsinfo/model_family.hpp"
#include "tsinfo/prob.hpp"
#include "tsinfo/random.hpp"

namespace tsinfo {

/// Positive weights bounded away from zero, normalized.
inline std::vector<double> random_prob_weights(RngStream& rng, int dim,
                                               double floor = 0.05) {
  std::vector<double> w(dim);
  double total = 0.0;
  for (double& x : w) {
    x = rng.uniform(floor, 1.0);
    total += x;
  }
  for (double& x : w) x /= total;
  return w;
}

inline ProbVector random_prob(RngStream& rng, int dim) {
  return ProbVector(random_prob_weights(rng, dim));
}

/// Random joint table; occasionally zeroes entries to exercise empty cells.
inline JointTable random_joint(RngStream& rng, int nx, int ny,
                               bool allow_zeros = true) {
  std::vector<double> p(static_cast<std::size_t>(nx) * ny);
  double total = 0.0;
  for (double& x : p) {
    x = rng.uniform(0.01, 1.0);
    if (allow_zeros && rng.uniform() < 0.15) x = 0.0;
    total += x;
  }
  if (total == 0.0) p[0] = total = 1.0;
  for (double& x : p) x /= total;
  return JointTable(std::move(p), nx, ny);
}

namespace detail {

inline bool rows_separated(const std::vector<std::vector<double>>& rows,
                           double min_gap) {
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = i + 1; j < rows.size(); ++j) {
      double gap = 0.0;
      for (std::size_t k = 0; k < rows[i].size(); ++k)
        gap = std::max(gap, std::abs(rows[i][k] - rows[j][k]));
      if (gap < min_gap) return false;
    }
  return true;
}

}  // namespace detail

/// Independent-arm Bernoulli bandit, 2..max_arms arms and 2..max_models models.
inline ModelFamily random_bandit_family(RngStream& rng, int max_arms = 6,
                                        int max_models = 6) {
  const int arms = 2 + rng.uniform_int(max_arms - 1);
  const int models = 2 + rng.uniform_int(max_models - 1);
  std::vector<std::vector<double>> means;
  do {
    means.assign(models, std::vector<double>(arms));
    for (auto& row : means)
      for (double& x : row) x = rng.uniform(0.05, 0.95);
  } while (!detail::rows_separated(means, 1e-3));
  return make_bernoulli_bandit(means, random_prob_weights(rng, models));
}

/// Full-information family with a shared revealed variable of 2..5 values.
inline ModelFamily random_full_information_family(RngStream& rng) {
  const int models = 2 + rng.uniform_int(4);
  const int z_dim = 2 + rng.uniform_int(4);
  const int actions = 2 + rng.uniform_int(4);
  std::vector<std::vector<double>> z_dists;
  do {
    z_dists.assign(models, {});
    for (auto& row : z_dists) row = random_prob_weights(rng, z_dim);
  } while (!detail::rows_separated(z_dists, 1e-3));
  std::vector<std::vector<double>> rewards(actions, std::vector<double>(z_dim));
  for (auto& row : rewards)
    for (double& x : row) x = rng.uniform(0.0, 1.0);
  return make_full_information(z_dists, rewards, random_prob_weights(rng, models));
}

/// Linear bandit in dimension d with 2..max_actions actions; features are
/// scaled so every mean reward lands in [0, 1].
inline ModelFamily random_linear_family(RngStream& rng, int d,
                                        int max_actions = 8) {
  const int actions = 2 + rng.uniform_int(max_actions - 1);
  const int models = 2 + rng.uniform_int(5);
  std::vector<Eigen::VectorXd> features(actions);
  for (auto& a : features) {
    a.resize(d);
    for (int i = 0; i < d; ++i) a(i) = rng.uniform(0.0, 1.0) / d;
  }
  std::vector<Eigen::VectorXd> thetas;
  std::vector<std::vector<double>> raw;
  do {
    raw.assign(models, std::vector<double>(d));
    for (auto& row : raw)
      for (double& x : row) x = rng.uniform(0.05, 0.95);
  } while (!detail::rows_separated(raw, 1e-3));
  thetas.resize(models);
  for (int m = 0; m < models; ++m) {
    thetas[m].resize(d);
    for (int i = 0; i < d; ++i) thetas[m](i) = raw[m][i];
  }
  return make_linear_bandit(features, thetas, random_prob_weights(rng, models));
}

/// Semi-bandit with d ≤ max_d components, subsets of size ≤ m ≤ max_m.
inline ModelFamily random_semi_bandit_family(RngStream& rng, int max_d = 6,
                                             int max_m = 3) {
  const int d = 2 + rng.uniform_int(max_d - 1);
  const int m = 1 + rng.uniform_int(std::min(max_m, d));
  const int models = 2 + rng.uniform_int(3);

  // Distinct random subsets of sizes 1..m, at least two of them.
  std::set<std::vector<int>> chosen;
  const int want = 2 + rng.uniform_int(7);
  int guard = 0;
  while (static_cast<int>(chosen.size()) < want && ++guard < 500) {
    const int size = 1 + rng.uniform_int(m);
    std::vector<int> pool(d);
    for (int i = 0; i < d; ++i) pool[i] = i;
    std::vector<int> subset;
    for (int j = 0; j < size; ++j) {
      const int pick = rng.uniform_int(static_cast<int>(pool.size()));
      subset.push_back(pool[pick]);
      pool.erase(pool.begin() + pick);
    }
    std::sort(subset.begin(), subset.end());
    chosen.insert(subset);
  }
  std::vector<std::vector<int>> actions(chosen.begin(), chosen.end());

  std::vector<std::vector<double>> probs;
  do {
    probs.assign(models, std::vector<double>(d));
    for (auto& row : probs)
      for (double& x : row) x = rng.uniform(0.1, 0.9);
  } while (!detail::rows_separated(probs, 1e-3));
  return make_semi_bandit(d, m, actions, probs, random_prob_weights(rng, models));
}

inline ModelFamily random_family(RngStream& rng, StructureKind structure) {
  switch (structure) {
    case StructureKind::bandit: return random_bandit_family(rng);
    case StructureKind::full_information: return random_full_information_family(rng);
    case StructureKind::linear: return random_linear_family(rng, 1 + rng.uniform_int(3));
    case StructureKind::semi_bandit: return random_semi_bandit_family(rng);
  }
  throw ValidationError("random_family: unknown structure");
}

/// Posteriors reached by Thompson sampling over `steps` interactions with a
/// true model drawn from the prior. Includes the prior itself.
inline std::vector<Posterior> collect_posteriors(const ModelFamily& family,
                                                 int steps, RngStream& rng) {
  std::vector<Posterior> out;
  const int true_model = rng.discrete(family.prior().weights());
  Posterior post = prior_posterior(family);
  out.push_back(post);
  for (int t = 0; t < steps; ++t) {
    const int a = family.optimal_action(rng.discrete(post.weights.weights()));
    const OutcomeSample obs = family.sample_outcome(true_model, a, rng);
    post = bayes_update(post, family, {obs.action, obs.outcome});
    out.push_back(post);
  }
  return out;
}

}  // namespace tsinfo

#endif  // TSINFO_GENERATORS_HPP
