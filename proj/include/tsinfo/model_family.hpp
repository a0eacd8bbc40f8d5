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
// Finite families of candidate outcome models over a shared finite outcome
// space. Four feedback structures are supported: independent-arm bandits,
// full information (one shared revealed variable), linear bandits (Bernoulli
// outcomes with mean aᵀθ), and combinatorial semi-bandits (subset actions
// observing each chosen component).

#ifndef TSINFO_MODEL_FAMILY_HPP
#define TSINFO_MODEL_FAMILY_HPP

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "tsinfo/errors.hpp"
#include "tsinfo/prob.hpp"
#include "tsinfo/random.hpp"

namespace tsinfo {

using RowMatrixXd =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

enum class StructureKind { bandit, full_information, linear, semi_bandit };

inline const char* structure_name(StructureKind s) {
  switch (s) {
    case StructureKind::bandit: return "bandit";
    case StructureKind::full_information: return "full_information";
    case StructureKind::linear: return "linear";
    case StructureKind::semi_bandit: return "semi_bandit";
  }
  return "unknown";
}

/// Feature vectors per action and parameter vector per model, with
/// E[reward | model, action] = features[a]ᵀ thetas[model].
struct LinearStructure {
  int dim = 0;
  std::vector<Eigen::VectorXd> features;
  std::vector<Eigen::VectorXd> thetas;
};

/// Subset actions over d two-point components valued in {−1/2, +1/2}.
/// component_success(model, i) = P(component i takes +1/2 under the model).
struct SemiBanditStructure {
  int d = 0;
  int m = 0;
  std::vector<std::vector<int>> action_components;  // 0-based, sorted
  RowMatrixXd component_success;
};

/// One observed interaction: the sampled outcome index at an action and the
/// reward read off the family's reward table.
struct OutcomeSample {
  int action = 0;
  int outcome = 0;
  double reward = 0.0;
};

/// Outcomes at the selected action and at the true model's optimal action,
/// drawn with the correlation the structure dictates within one round.
struct RoundSample {
  int outcome_at_action = 0;
  int outcome_at_optimum = 0;
};

inline constexpr std::size_t kDefaultInstanceCellCap = 1'000'000;

class ModelFamily {
 public:
  /// Empty family; only the factory functions below produce usable ones.
  ModelFamily() = default;

  int action_count() const { return action_count_; }
  int outcome_count() const { return outcome_count_; }
  int model_count() const { return static_cast<int>(kernels_.size()); }
  const ProbVector& prior() const { return prior_; }
  StructureKind structure() const { return structure_; }

  /// Row-stochastic action × outcome kernel of one model.
  const RowMatrixXd& kernel(int model) const { return kernels_[model]; }
  const RowMatrixXd& reward_table() const { return rewards_; }
  double reward(int action, int outcome) const { return rewards_(action, outcome); }

  const std::optional<LinearStructure>& linear() const { return linear_; }
  const std::optional<SemiBanditStructure>& semi_bandit() const { return semi_; }

  /// Lowest-index maximizer of expected reward under the model (cached).
  int optimal_action(int model) const {
    check_model(model);
    return optimal_actions_[model];
  }

  double expected_reward(int model, int action) const {
    check_model(model);
    check_action(action);
    return kernels_[model].row(action).dot(rewards_.row(action));
  }

  /// Draws one outcome from the model's kernel row at the action.
  OutcomeSample sample_outcome(int model, int action, RngStream& rng) const {
    check_model(model);
    check_action(action);
    const auto row = kernels_[model].row(action);
    const int y = rng.discrete({row.data(), static_cast<std::size_t>(outcome_count_)});
    return {action, y, rewards_(action, y)};
  }

  /// Draws the pair (Y_a, Y_{a*}) for one round. Full-information families
  /// share one revealed variable across actions; semi-bandit families share
  /// the d component values; bandit and linear families draw outcomes
  /// conditionally independently across actions given the model.
  RoundSample sample_round(int model, int action, RngStream& rng) const {
    check_model(model);
    check_action(action);
    const int astar = optimal_actions_[model];
    switch (structure_) {
      case StructureKind::full_information: {
        const auto row = kernels_[model].row(action);
        const int z =
            rng.discrete({row.data(), static_cast<std::size_t>(outcome_count_)});
        return {z, z};
      }
      case StructureKind::semi_bandit: {
        const auto& sb = *semi_;
        std::vector<int> bits(sb.d);
        for (int i = 0; i < sb.d; ++i)
          bits[i] = rng.bernoulli(sb.component_success(model, i)) ? 1 : 0;
        return {semi_outcome_index(sb.action_components[action], bits),
                semi_outcome_index(sb.action_components[astar], bits)};
      }
      case StructureKind::bandit:
      case StructureKind::linear: {
        const int y = sample_outcome(model, action, rng).outcome;
        if (astar == action) return {y, y};
        const int ystar = sample_outcome(model, astar, rng).outcome;
        return {y, ystar};
      }
    }
    throw InconsistencyError("sample_round: unhandled structure");
  }

  /// Outcome index observed by a subset action given all d component bits.
  static int semi_outcome_index(const std::vector<int>& components,
                                const std::vector<int>& bits) {
    int y = 0;
    for (std::size_t j = 0; j < components.size(); ++j)
      if (bits[components[j]]) y |= 1 << j;
    return y;
  }

  /// Re-checks every construction invariant; throws on violation.
  void validate() const {
    if (action_count_ < 1 || outcome_count_ < 1 || model_count() < 1)
      throw ValidationError("ModelFamily: empty dimension");
    if (prior_.dim() != model_count())
      throw ValidationError("ModelFamily: prior dimension mismatch");
    const std::size_t cells = static_cast<std::size_t>(action_count_) *
                              outcome_count_ * model_count();
    if (cells > cell_cap_)
      throw InstanceTooLarge("ModelFamily: " + std::to_string(cells) +
                             " cells exceed cap " + std::to_string(cell_cap_));
    for (const auto& k : kernels_) {
      if (k.rows() != action_count_ || k.cols() != outcome_count_)
        throw ValidationError("ModelFamily: kernel shape mismatch");
      for (int a = 0; a < action_count_; ++a) {
        double row_sum = 0.0;
        for (int y = 0; y < outcome_count_; ++y) {
          const double p = k(a, y);
          if (!std::isfinite(p) || p < 0.0)
            throw ValidationError("ModelFamily: bad kernel entry");
          row_sum += p;
        }
        if (std::abs(row_sum - 1.0) > kProbTolerance)
          throw ValidationError("ModelFamily: kernel row not stochastic");
      }
    }
    if (rewards_.rows() != action_count_ || rewards_.cols() != outcome_count_ ||
        !rewards_.allFinite())
      throw ValidationError("ModelFamily: bad reward table");
    check_reward_span();
    check_structure_invariants();
  }

 private:
  friend ModelFamily make_bernoulli_bandit(const std::vector<std::vector<double>>&,
                                           const std::vector<double>&, std::size_t);
  friend ModelFamily make_full_information(const std::vector<std::vector<double>>&,
                                           const std::vector<std::vector<double>>&,
                                           const std::vector<double>&, std::size_t);
  friend ModelFamily make_linear_bandit(const std::vector<Eigen::VectorXd>&,
                                        const std::vector<Eigen::VectorXd>&,
                                        const std::vector<double>&, std::size_t);
  friend ModelFamily make_semi_bandit(int, int, const std::vector<std::vector<int>>&,
                                      const std::vector<std::vector<double>>&,
                                      const std::vector<double>&, std::size_t);

  void check_model(int model) const {
    if (model < 0 || model >= model_count())
      throw ValidationError("ModelFamily: model index out of range");
  }
  void check_action(int action) const {
    if (action < 0 || action >= action_count_)
      throw ValidationError("ModelFamily: action index out of range");
  }

  /// Assumption: reward span over outcomes reachable under some model is ≤ 1.
  void check_reward_span() const {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (int a = 0; a < action_count_; ++a) {
      for (int y = 0; y < outcome_count_; ++y) {
        bool reachable = false;
        for (const auto& k : kernels_)
          if (k(a, y) > 0.0) { reachable = true; break; }
        if (!reachable) continue;
        lo = std::min(lo, rewards_(a, y));
        hi = std::max(hi, rewards_(a, y));
      }
    }
    if (hi - lo > 1.0 + kProbTolerance)
      throw ValidationError("ModelFamily: reward span exceeds 1");
  }

  void check_structure_invariants() const {
    switch (structure_) {
      case StructureKind::bandit:
        break;
      case StructureKind::full_information:
        for (const auto& k : kernels_)
          for (int a = 1; a < action_count_; ++a)
            for (int y = 0; y < outcome_count_; ++y)
              if (std::abs(k(a, y) - k(0, y)) > kProbTolerance)
                throw ValidationError(
                    "ModelFamily: full-information kernels differ across actions");
        break;
      case StructureKind::linear: {
        if (!linear_) throw ValidationError("ModelFamily: missing linear metadata");
        const auto& ls = *linear_;
        if (static_cast<int>(ls.features.size()) != action_count_ ||
            static_cast<int>(ls.thetas.size()) != model_count())
          throw ValidationError("ModelFamily: linear metadata shape mismatch");
        for (int m = 0; m < model_count(); ++m)
          for (int a = 0; a < action_count_; ++a) {
            const double mean = kernels_[m].row(a).dot(rewards_.row(a));
            const double lin = ls.features[a].dot(ls.thetas[m]);
            if (std::abs(mean - lin) > kProbTolerance)
              throw ValidationError("ModelFamily: linear mean identity violated");
          }
        break;
      }
      case StructureKind::semi_bandit: {
        if (!semi_) throw ValidationError("ModelFamily: missing semi-bandit metadata");
        const auto& sb = *semi_;
        if (static_cast<int>(sb.action_components.size()) != action_count_)
          throw ValidationError("ModelFamily: semi-bandit action list mismatch");
        for (const auto& comps : sb.action_components) {
          if (comps.empty() || static_cast<int>(comps.size()) > sb.m)
            throw ValidationError("ModelFamily: subset size out of range");
          for (int c : comps)
            if (c < 0 || c >= sb.d)
              throw ValidationError("ModelFamily: component index out of range");
        }
        // Kernels must factor as product measures over the subset components.
        for (int m = 0; m < model_count(); ++m)
          for (int a = 0; a < action_count_; ++a) {
            const auto& comps = sb.action_components[a];
            const int k = static_cast<int>(comps.size());
            for (int y = 0; y < outcome_count_; ++y) {
              double expected = 0.0;
              if (y < (1 << k)) {
                expected = 1.0;
                for (int j = 0; j < k; ++j) {
                  const double ps = sb.component_success(m, comps[j]);
                  expected *= (y >> j & 1) ? ps : 1.0 - ps;
                }
              }
              if (std::abs(kernels_[m](a, y) - expected) > kProbTolerance)
                throw ValidationError("ModelFamily: semi-bandit kernel not a product");
            }
          }
        break;
      }
    }
  }

  int action_count_ = 0;
  int outcome_count_ = 0;
  std::vector<RowMatrixXd> kernels_;
  ProbVector prior_;
  RowMatrixXd rewards_;
  StructureKind structure_ = StructureKind::bandit;
  std::optional<LinearStructure> linear_;
  std::optional<SemiBanditStructure> semi_;
  std::vector<int> optimal_actions_;
  std::size_t cell_cap_ = kDefaultInstanceCellCap;

  void finalize() {
    optimal_actions_.resize(model_count());
    for (int m = 0; m < model_count(); ++m) {
      int best = 0;
      double best_val = kernels_[m].row(0).dot(rewards_.row(0));
      for (int a = 1; a < action_count_; ++a) {
        const double v = kernels_[m].row(a).dot(rewards_.row(a));
        if (v > best_val) {
          best = a;
          best_val = v;
        }
      }
      optimal_actions_[m] = best;
    }
    validate();
  }
};

/// Independent-arm Bernoulli bandit: outcome space {0, 1} per arm with
/// reward(a, y) = y and kernel(a, 1) = mean of the arm under the model.
/// arm_means[model][arm] must lie in [0, 1].
inline ModelFamily make_bernoulli_bandit(
    const std::vector<std::vector<double>>& arm_means,
    const std::vector<double>& prior,
    std::size_t cell_cap = kDefaultInstanceCellCap) {
  if (arm_means.empty() || arm_means[0].empty())
    throw ValidationError("make_bernoulli_bandit: empty means");
  const int models = static_cast<int>(arm_means.size());
  const int arms = static_cast<int>(arm_means[0].size());
  ModelFamily f;
  f.cell_cap_ = cell_cap;
  f.structure_ = StructureKind::bandit;
  f.action_count_ = arms;
  f.outcome_count_ = 2;
  f.prior_ = ProbVector(prior);
  f.rewards_.resize(arms, 2);
  for (int a = 0; a < arms; ++a) {
    f.rewards_(a, 0) = 0.0;
    f.rewards_(a, 1) = 1.0;
  }
  f.kernels_.reserve(models);
  for (const auto& means : arm_means) {
    if (static_cast<int>(means.size()) != arms)
      throw ValidationError("make_bernoulli_bandit: ragged means matrix");
    RowMatrixXd k(arms, 2);
    for (int a = 0; a < arms; ++a) {
      const double p = means[a];
      if (!std::isfinite(p) || p < -kProbTolerance || p > 1.0 + kProbTolerance)
        throw ValidationError("make_bernoulli_bandit: mean outside [0, 1]");
      const double pc = std::clamp(p, 0.0, 1.0);
      k(a, 1) = pc;
      k(a, 0) = 1.0 - pc;
    }
    f.kernels_.push_back(std::move(k));
  }
  f.finalize();
  return f;
}

/// Full-information family: every action's kernel equals the model's
/// distribution over a shared revealed variable Z; rewards index (action, z).
inline ModelFamily make_full_information(
    const std::vector<std::vector<double>>& z_dists,
    const std::vector<std::vector<double>>& reward_by_action_and_z,
    const std::vector<double>& prior,
    std::size_t cell_cap = kDefaultInstanceCellCap) {
  if (z_dists.empty() || reward_by_action_and_z.empty())
    throw ValidationError("make_full_information: empty input");
  const int models = static_cast<int>(z_dists.size());
  const int z_dim = static_cast<int>(z_dists[0].size());
  const int actions = static_cast<int>(reward_by_action_and_z.size());
  ModelFamily f;
  f.cell_cap_ = cell_cap;
  f.structure_ = StructureKind::full_information;
  f.action_count_ = actions;
  f.outcome_count_ = z_dim;
  f.prior_ = ProbVector(prior);
  f.rewards_.resize(actions, z_dim);
  for (int a = 0; a < actions; ++a) {
    if (static_cast<int>(reward_by_action_and_z[a].size()) != z_dim)
      throw ValidationError("make_full_information: ragged reward matrix");
    for (int z = 0; z < z_dim; ++z) f.rewards_(a, z) = reward_by_action_and_z[a][z];
  }
  f.kernels_.reserve(models);
  for (const auto& dist : z_dists) {
    const ProbVector pz(dist);  // validates and renormalizes
    RowMatrixXd k(actions, z_dim);
    for (int a = 0; a < actions; ++a)
      for (int z = 0; z < z_dim; ++z) k(a, z) = pz[z];
    f.kernels_.push_back(std::move(k));
  }
  f.finalize();
  return f;
}

/// Linear bandit with Bernoulli outcomes: kernel(a, 1) = features[a]ᵀθ_model,
/// reward(a, y) = y. Every inner product must lie in [0, 1].
inline ModelFamily make_linear_bandit(
    const std::vector<Eigen::VectorXd>& features,
    const std::vector<Eigen::VectorXd>& thetas,
    const std::vector<double>& prior,
    std::size_t cell_cap = kDefaultInstanceCellCap) {
  if (features.empty() || thetas.empty())
    throw ValidationError("make_linear_bandit: empty input");
  const int d = static_cast<int>(features[0].size());
  const int actions = static_cast<int>(features.size());
  const int models = static_cast<int>(thetas.size());
  for (const auto& v : features)
    if (static_cast<int>(v.size()) != d)
      throw ValidationError("make_linear_bandit: feature dimension mismatch");
  for (const auto& v : thetas)
    if (static_cast<int>(v.size()) != d)
      throw ValidationError("make_linear_bandit: theta dimension mismatch");
  ModelFamily f;
  f.cell_cap_ = cell_cap;
  f.structure_ = StructureKind::linear;
  f.action_count_ = actions;
  f.outcome_count_ = 2;
  f.prior_ = ProbVector(prior);
  f.rewards_.resize(actions, 2);
  for (int a = 0; a < actions; ++a) {
    f.rewards_(a, 0) = 0.0;
    f.rewards_(a, 1) = 1.0;
  }
  f.kernels_.reserve(models);
  for (int m = 0; m < models; ++m) {
    RowMatrixXd k(actions, 2);
    for (int a = 0; a < actions; ++a) {
      const double mean = features[a].dot(thetas[m]);
      if (!std::isfinite(mean) || mean < -kProbTolerance || mean > 1.0 + kProbTolerance)
        throw ValidationError(
            "make_linear_bandit: aᵀθ outside [0, 1], not Bernoulli-representable");
      const double pc = std::clamp(mean, 0.0, 1.0);
      k(a, 1) = pc;
      k(a, 0) = 1.0 - pc;
    }
    f.kernels_.push_back(std::move(k));
  }
  f.linear_ = LinearStructure{d, features, thetas};
  f.finalize();
  return f;
}

/// Combinatorial semi-bandit over d two-point components valued in
/// {−1/2, +1/2}. Actions are subsets of {0, .., d−1} with at most m elements;
/// component_success[model][i] = P(component i takes +1/2). The outcome of a
/// subset is the tuple of its component values, bit-encoded; the reward is the
/// component sum divided by m.
inline ModelFamily make_semi_bandit(
    int d, int m, const std::vector<std::vector<int>>& actions,
    const std::vector<std::vector<double>>& component_success,
    const std::vector<double>& prior,
    std::size_t cell_cap = kDefaultInstanceCellCap) {
  if (d < 1 || m < 1 || actions.empty() || component_success.empty())
    throw ValidationError("make_semi_bandit: empty input");
  const int models = static_cast<int>(component_success.size());
  int max_size = 0;
  std::vector<std::vector<int>> comps = actions;
  for (auto& c : comps) {
    if (c.empty()) throw ValidationError("make_semi_bandit: empty subset");
    std::sort(c.begin(), c.end());
    if (std::adjacent_find(c.begin(), c.end()) != c.end())
      throw ValidationError("make_semi_bandit: repeated component in subset");
    if (static_cast<int>(c.size()) > m)
      throw ValidationError("make_semi_bandit: subset larger than m");
    for (int i : c)
      if (i < 0 || i >= d)
        throw ValidationError("make_semi_bandit: component index out of range");
    max_size = std::max(max_size, static_cast<int>(c.size()));
  }
  const int outcomes = 1 << max_size;
  const std::size_t cells = static_cast<std::size_t>(outcomes) * comps.size() * models;
  if (cells > cell_cap)
    throw InstanceTooLarge("make_semi_bandit: enumeration needs " +
                           std::to_string(cells) + " cells, cap is " +
                           std::to_string(cell_cap));
  ModelFamily f;
  f.cell_cap_ = cell_cap;
  f.structure_ = StructureKind::semi_bandit;
  f.action_count_ = static_cast<int>(comps.size());
  f.outcome_count_ = outcomes;
  f.prior_ = ProbVector(prior);

  SemiBanditStructure sb;
  sb.d = d;
  sb.m = m;
  sb.action_components = comps;
  sb.component_success.resize(models, d);
  for (int mm = 0; mm < models; ++mm) {
    if (static_cast<int>(component_success[mm].size()) != d)
      throw ValidationError("make_semi_bandit: ragged success matrix");
    for (int i = 0; i < d; ++i) {
      const double p = component_success[mm][i];
      if (!std::isfinite(p) || p < -kProbTolerance || p > 1.0 + kProbTolerance)
        throw ValidationError("make_semi_bandit: success probability outside [0, 1]");
      sb.component_success(mm, i) = std::clamp(p, 0.0, 1.0);
    }
  }

  f.rewards_.setZero(f.action_count_, outcomes);
  for (int a = 0; a < f.action_count_; ++a) {
    const int k = static_cast<int>(comps[a].size());
    for (int y = 0; y < (1 << k); ++y) {
      double total = 0.0;
      for (int j = 0; j < k; ++j) total += (y >> j & 1) ? 0.5 : -0.5;
      f.rewards_(a, y) = total / m;
    }
  }

  f.kernels_.reserve(models);
  for (int mm = 0; mm < models; ++mm) {
    RowMatrixXd kmat = RowMatrixXd::Zero(f.action_count_, outcomes);
    for (int a = 0; a < f.action_count_; ++a) {
      const int k = static_cast<int>(comps[a].size());
      for (int y = 0; y < (1 << k); ++y) {
        double p = 1.0;
        for (int j = 0; j < k; ++j) {
          const double ps = sb.component_success(mm, comps[a][j]);
          p *= (y >> j & 1) ? ps : 1.0 - ps;
        }
        kmat(a, y) = p;
      }
    }
    f.kernels_.push_back(std::move(kmat));
  }
  f.semi_ = std::move(sb);
  f.finalize();
  return f;
}

}  // namespace tsinfo

#endif  // TSINFO_MODEL_FAMILY_HPP
