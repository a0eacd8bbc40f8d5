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
// Exact posterior over model indices and its derived per-action predictive
// distributions.

#ifndef TSINFO_BELIEF_HPP
#define TSINFO_BELIEF_HPP

#include <cmath>
#include <vector>

#include "tsinfo/errors.hpp"
#include "tsinfo/info_math.hpp"
#include "tsinfo/model_family.hpp"
#include "tsinfo/prob.hpp"

namespace tsinfo {

/// Weights below this are zeroed after each update to stop drift over long
/// horizons of likelihood products.
inline constexpr double kWeightFloor = 1e-15;

/// Conditioning events with probability below this are treated as impossible.
inline constexpr double kEventFloor = 1e-12;

/// Posterior over model indices after `step` observations. Immutable snapshot;
/// updates return new values.
struct Posterior {
  ProbVector weights;
  int step = 0;
};

inline Posterior prior_posterior(const ModelFamily& family) {
  return {family.prior(), 0};
}

/// One observed (action, outcome) pair.
struct HistoryEntry {
  int action = 0;
  int outcome = 0;
};

/// Multiplies each model weight by its likelihood of the observation and
/// renormalizes. A model with zero likelihood gets weight exactly 0.
inline Posterior bayes_update(const Posterior& post, const ModelFamily& family,
                              const HistoryEntry& obs) {
  if (post.weights.dim() != family.model_count())
    throw ValidationError("bayes_update: posterior dimension mismatch");
  if (obs.action < 0 || obs.action >= family.action_count() || obs.outcome < 0 ||
      obs.outcome >= family.outcome_count())
    throw ValidationError("bayes_update: observation index out of range");
  std::vector<double> w(family.model_count());
  double total = 0.0;
  for (int m = 0; m < family.model_count(); ++m) {
    w[m] = post.weights[m] * family.kernel(m)(obs.action, obs.outcome);
    total += w[m];
  }
  if (total <= 0.0)
    throw ImpossibleObservation(
        "bayes_update: observation has zero likelihood under every model");
  double kept = 0.0;
  for (double& x : w) {
    x /= total;
    if (x < kWeightFloor) x = 0.0;
    kept += x;
  }
  for (double& x : w) x /= kept;
  return {ProbVector(std::move(w)), post.step + 1};
}

/// α(a) = posterior probability that a is the optimal action.
inline ProbVector optimal_action_distribution(const Posterior& post,
                                              const ModelFamily& family) {
  std::vector<double> alpha(family.action_count(), 0.0);
  for (int m = 0; m < family.model_count(); ++m)
    alpha[family.optimal_action(m)] += post.weights[m];
  return ProbVector(std::move(alpha));
}

/// Posterior predictive distribution of the outcome at an action.
inline ProbVector predictive(const Posterior& post, const ModelFamily& family,
                             int action) {
  if (action < 0 || action >= family.action_count())
    throw ValidationError("predictive: action out of range");
  std::vector<double> p(family.outcome_count(), 0.0);
  for (int m = 0; m < family.model_count(); ++m) {
    const double w = post.weights[m];
    for (int y = 0; y < family.outcome_count(); ++y)
      p[y] += w * family.kernel(m)(action, y);
  }
  return ProbVector(std::move(p));
}

/// Predictive distribution at `action` conditioned on `astar` being optimal.
inline ProbVector conditional_predictive(const Posterior& post,
                                         const ModelFamily& family, int action,
                                         int astar) {
  if (action < 0 || action >= family.action_count() || astar < 0 ||
      astar >= family.action_count())
    throw ValidationError("conditional_predictive: action out of range");
  double event_prob = 0.0;
  for (int m = 0; m < family.model_count(); ++m)
    if (family.optimal_action(m) == astar) event_prob += post.weights[m];
  if (event_prob < kEventFloor)
    throw PreconditionError(
        "conditional_predictive: conditioning on zero-probability optimum");
  std::vector<double> p(family.outcome_count(), 0.0);
  for (int m = 0; m < family.model_count(); ++m) {
    if (family.optimal_action(m) != astar) continue;
    const double w = post.weights[m] / event_prob;
    for (int y = 0; y < family.outcome_count(); ++y)
      p[y] += w * family.kernel(m)(action, y);
  }
  return ProbVector(std::move(p));
}

/// Entropy (nats) of the optimal-action distribution under the posterior.
inline double entropy_of_optimum(const Posterior& post, const ModelFamily& family) {
  return entropy(optimal_action_distribution(post, family));
}

}  // namespace tsinfo

#endif  // TSINFO_BELIEF_HPP
