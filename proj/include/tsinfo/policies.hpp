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
// Action-selection policies: exact Thompson sampling over a finite model
// family, Thompson sampling with a Gaussian belief over a linear parameter,
// and a uniform baseline.

#ifndef TSINFO_POLICIES_HPP
#define TSINFO_POLICIES_HPP

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "tsinfo/belief.hpp"
#include "tsinfo/errors.hpp"
#include "tsinfo/model_family.hpp"
#include "tsinfo/random.hpp"

namespace tsinfo {

enum class PolicyKind { thompson_exact, thompson_linear_gaussian, uniform_baseline };

inline const char* policy_name(PolicyKind p) {
  switch (p) {
    case PolicyKind::thompson_exact: return "thompson_exact";
    case PolicyKind::thompson_linear_gaussian: return "thompson_linear_gaussian";
    case PolicyKind::uniform_baseline: return "uniform_baseline";
  }
  return "unknown";
}

inline PolicyKind policy_from_name(const std::string& name) {
  if (name == "thompson_exact") return PolicyKind::thompson_exact;
  if (name == "thompson_linear_gaussian") return PolicyKind::thompson_linear_gaussian;
  if (name == "uniform_baseline") return PolicyKind::uniform_baseline;
  throw ValidationError("unknown policy: " + name);
}

/// Samples a model index from the posterior and plays its optimal action.
/// The induced action law is exactly the optimal-action distribution.
inline int ts_select(const Posterior& post, const ModelFamily& family,
                     RngStream& rng) {
  if (post.weights.dim() != family.model_count())
    throw ValidationError("ts_select: posterior dimension mismatch");
  const int m = rng.discrete(post.weights.weights());
  return family.optimal_action(m);
}

inline int uniform_select(int action_count, RngStream& rng) {
  if (action_count < 1) throw ValidationError("uniform_select: no actions");
  return rng.uniform_int(action_count);
}

/// Gaussian belief over the linear parameter with known reward-noise variance.
struct LinearGaussianState {
  Eigen::VectorXd mean;
  Eigen::MatrixXd covariance;
  double noise_variance = 1.0;

  LinearGaussianState(Eigen::VectorXd mu, Eigen::MatrixXd sigma, double noise_var)
      : mean(std::move(mu)), covariance(std::move(sigma)), noise_variance(noise_var) {
    if (mean.size() < 1 || covariance.rows() != mean.size() ||
        covariance.cols() != mean.size())
      throw ValidationError("LinearGaussianState: dimension mismatch");
    if (!(noise_variance > 0.0) || !std::isfinite(noise_variance))
      throw ValidationError("LinearGaussianState: noise variance must be positive");
    if (!mean.allFinite() || !covariance.allFinite())
      throw ValidationError("LinearGaussianState: non-finite entry");
    const Eigen::MatrixXd asym = covariance - covariance.transpose();
    if (asym.cwiseAbs().maxCoeff() > 1e-9)
      throw ValidationError("LinearGaussianState: covariance not symmetric");
    covariance = 0.5 * (covariance + covariance.transpose());
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(covariance);
    if (es.eigenvalues().minCoeff() < -1e-9)
      throw ValidationError("LinearGaussianState: covariance not PSD");
  }

  int dim() const { return static_cast<int>(mean.size()); }
};

/// Square root of a PSD matrix via a symmetric eigendecomposition, with a
/// small additive jitter retried up to 3 times if the solver fails to
/// converge. Eigenvalues within the PSD tolerance of zero are clamped to 0.
inline Eigen::MatrixXd psd_sqrt(const Eigen::MatrixXd& sigma) {
  const int d = static_cast<int>(sigma.rows());
  Eigen::MatrixXd work = sigma;
  for (int attempt = 0; attempt < 3; ++attempt) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(work);
    if (es.info() == Eigen::Success) {
      Eigen::VectorXd lambda = es.eigenvalues();
      for (int i = 0; i < d; ++i) lambda(i) = std::max(lambda(i), 0.0);
      return es.eigenvectors() * lambda.cwiseSqrt().asDiagonal() *
             es.eigenvectors().transpose();
    }
    work += (1e-12 * work.trace() / d) * Eigen::MatrixXd::Identity(d, d);
  }
  throw NumericalError("psd_sqrt: eigendecomposition failed after jitter retries");
}

/// Samples θ̂ from N(mean, covariance) and returns the lowest-index action
/// maximizing ⟨a, θ̂⟩, together with the sample.
inline std::pair<int, Eigen::VectorXd> lg_ts_select(
    const LinearGaussianState& state, const std::vector<Eigen::VectorXd>& actions,
    RngStream& rng) {
  if (actions.empty()) throw ValidationError("lg_ts_select: no actions");
  const int d = state.dim();
  for (const auto& a : actions)
    if (static_cast<int>(a.size()) != d)
      throw ValidationError("lg_ts_select: action dimension mismatch");
  const Eigen::MatrixXd root = psd_sqrt(state.covariance);
  Eigen::VectorXd z(d);
  for (int i = 0; i < d; ++i) z(i) = rng.normal();
  const Eigen::VectorXd theta = state.mean + root * z;
  int best = 0;
  double best_val = actions[0].dot(theta);
  for (int i = 1; i < static_cast<int>(actions.size()); ++i) {
    const double v = actions[i].dot(theta);
    if (v > best_val) {
      best = i;
      best_val = v;
    }
  }
  return {best, theta};
}

/// Conjugate update for one observation reward = aᵀθ + noise, s² known:
/// the Sherman–Morrison rank-one form of the Kalman step.
inline LinearGaussianState lg_update(const LinearGaussianState& state,
                                     const Eigen::VectorXd& action, double reward) {
  if (static_cast<int>(action.size()) != state.dim())
    throw ValidationError("lg_update: action dimension mismatch");
  if (!std::isfinite(reward)) throw ValidationError("lg_update: non-finite reward");
  const Eigen::VectorXd sigma_a = state.covariance * action;
  const double denom = state.noise_variance + action.dot(sigma_a);
  Eigen::MatrixXd cov = state.covariance - (sigma_a * sigma_a.transpose()) / denom;
  cov = 0.5 * (cov + cov.transpose());
  const Eigen::VectorXd mean =
      state.mean + sigma_a * ((reward - action.dot(state.mean)) / denom);
  return LinearGaussianState(mean, cov, state.noise_variance);
}

}  // namespace tsinfo

#endif  // TSINFO_POLICIES_HPP
