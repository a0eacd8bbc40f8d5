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
// One-step information-ratio accounting for Thompson sampling at a given
// posterior: expected instant regret, information gain about the optimal
// action (computed by two independent routes), their ratio, and the
// structure-specific upper bounds on that ratio.

#ifndef TSINFO_ANALYSIS_HPP
#define TSINFO_ANALYSIS_HPP

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "tsinfo/belief.hpp"
#include "tsinfo/errors.hpp"
#include "tsinfo/info_math.hpp"
#include "tsinfo/model_family.hpp"
#include "tsinfo/prob.hpp"

namespace tsinfo {

/// Slack tolerance for every recorded inequality.
inline constexpr double kBoundTolerance = 1e-9;

/// Information gain below this is treated as zero when forming the ratio.
inline constexpr double kGainFloor = 1e-12;

/// Instant regret above this with zero gain signals a defect.
inline constexpr double kRegretFloor = 1e-9;

/// One recorded inequality lhs ≤ rhs, held to the shared slack tolerance.
struct BoundCertificate {
  std::string bound_name;
  double lhs = 0.0;
  double rhs = 0.0;
  double slack = 0.0;
  bool holds = true;
};

inline BoundCertificate make_certificate(std::string name, double lhs, double rhs) {
  BoundCertificate c;
  c.bound_name = std::move(name);
  c.lhs = lhs;
  c.rhs = rhs;
  c.slack = rhs - lhs;
  c.holds = c.slack >= -kBoundTolerance;
  return c;
}

/// Per-step quantities of the information-ratio analysis. `ratio` is empty
/// when both instant regret and gain vanish (the ratio is then treated as 0
/// in bound aggregation).
struct InfoRatioReport {
  double expected_instant_regret = 0.0;
  double info_gain = 0.0;
  std::optional<double> ratio;
  double optimum_entropy = 0.0;
  double structural_bound = 0.0;
};

inline double mean_reward(const ProbVector& outcome_dist, const ModelFamily& family,
                          int action) {
  double r = 0.0;
  for (int y = 0; y < family.outcome_count(); ++y)
    r += outcome_dist[y] * family.reward(action, y);
  return r;
}

/// E[R(Y_{A*}) − R(Y_A)] under Thompson sampling at this posterior:
/// Σ_a α(a) (E[R(Y_a) | A*=a] − E[R(Y_a)]).
inline double expected_instant_regret(const Posterior& post,
                                      const ModelFamily& family) {
  const ProbVector alpha = optimal_action_distribution(post, family);
  double regret = 0.0;
  for (int a = 0; a < family.action_count(); ++a) {
    if (alpha[a] < kEventFloor) continue;
    const double conditional =
        mean_reward(conditional_predictive(post, family, a, a), family, a);
    const double marginal = mean_reward(predictive(post, family, a), family, a);
    regret += alpha[a] * (conditional - marginal);
  }
  return regret;
}

/// I(A*; (A, Y_A)) via the decomposition
/// Σ_{a,a*} α(a) α(a*) D(P(Y_a | A*=a*) || P(Y_a)).
inline double information_gain(const Posterior& post, const ModelFamily& family) {
  const ProbVector alpha = optimal_action_distribution(post, family);
  double gain = 0.0;
  for (int a = 0; a < family.action_count(); ++a) {
    if (alpha[a] < kEventFloor) continue;
    const ProbVector marginal = predictive(post, family, a);
    for (int astar = 0; astar < family.action_count(); ++astar) {
      if (alpha[astar] < kEventFloor) continue;
      const ProbVector conditional = conditional_predictive(post, family, a, astar);
      gain += alpha[a] * alpha[astar] * kl_divergence(conditional, marginal);
    }
  }
  return gain;
}

/// Joint distribution of (A*, (A, Y_A)) under Thompson sampling at this
/// posterior: P(a*, a, y) = α(a) Σ_{m: opt(m)=a*} w_m kernel_m(a, y).
inline JointTable optimum_observation_joint(const Posterior& post,
                                            const ModelFamily& family) {
  const ProbVector alpha = optimal_action_distribution(post, family);
  const int n_act = family.action_count();
  const int n_out = family.outcome_count();
  std::vector<double> entries(static_cast<std::size_t>(n_act) * n_act * n_out, 0.0);
  for (int m = 0; m < family.model_count(); ++m) {
    const double w = post.weights[m];
    if (w == 0.0) continue;
    const int astar = family.optimal_action(m);
    for (int a = 0; a < n_act; ++a) {
      const double wa = w * alpha[a];
      if (wa == 0.0) continue;
      for (int y = 0; y < n_out; ++y)
        entries[(static_cast<std::size_t>(astar) * n_act + a) * n_out + y] +=
            wa * family.kernel(m)(a, y);
    }
  }
  return JointTable(std::move(entries), n_act, n_act * n_out);
}

/// I(A*; (A, Y_A)) evaluated directly on the exact joint table. Serves as an
/// independent route against `information_gain`.
inline double information_gain_direct(const Posterior& post,
                                      const ModelFamily& family) {
  return mutual_information(optimum_observation_joint(post, family));
}

/// The uniform almost-sure bound on the information ratio implied by the
/// family's structure, under rewards of span at most 1. The worst-case
/// |A|/2 bound applies to every finite family, so structured families take
/// the minimum of it and their own constant.
inline double structural_gamma_bound(const ModelFamily& family) {
  const double worst_case = family.action_count() / 2.0;
  switch (family.structure()) {
    case StructureKind::bandit:
      return worst_case;
    case StructureKind::full_information:
      return std::min(worst_case, 0.5);
    case StructureKind::linear:
      return std::min(worst_case, family.linear()->dim / 2.0);
    case StructureKind::semi_bandit: {
      const auto& sb = *family.semi_bandit();
      return std::min(worst_case, sb.d / (2.0 * sb.m * sb.m));
    }
  }
  throw InconsistencyError("structural_gamma_bound: unhandled structure");
}

/// The same bounds scaled for σ-sub-Gaussian reward noise instead of rewards
/// of span 1: 2|A|σ², 2σ², 2dσ², 2dσ²/m² by structure.
inline double corollary1_gamma_bound(const ModelFamily& family, double sigma) {
  if (!(sigma > 0.0) || !std::isfinite(sigma))
    throw ValidationError("corollary1_gamma_bound: sigma must be positive");
  const double s2 = sigma * sigma;
  switch (family.structure()) {
    case StructureKind::bandit:
      return 2.0 * family.action_count() * s2;
    case StructureKind::full_information:
      return 2.0 * s2;
    case StructureKind::linear:
      return 2.0 * family.linear()->dim * s2;
    case StructureKind::semi_bandit: {
      const auto& sb = *family.semi_bandit();
      return 2.0 * sb.d * s2 / (sb.m * sb.m);
    }
  }
  throw InconsistencyError("corollary1_gamma_bound: unhandled structure");
}

/// Cumulative regret bound sqrt(Γ̄ · H(A*) · T) for a uniform ratio bound Γ̄.
inline double prop1_regret_bound(double gamma_bar, double optimum_entropy,
                                 int horizon) {
  if (gamma_bar < 0.0 || optimum_entropy < 0.0 || horizon < 0)
    throw ValidationError("prop1_regret_bound: negative argument");
  return std::sqrt(gamma_bar * optimum_entropy * horizon);
}

/// Full per-step report. Near-zero information gain with materially positive
/// instant regret cannot happen for Thompson sampling and raises an
/// inconsistency error; near-zero gain with near-zero regret leaves the ratio
/// undefined.
inline InfoRatioReport information_ratio(const Posterior& post,
                                         const ModelFamily& family) {
  InfoRatioReport report;
  report.expected_instant_regret = expected_instant_regret(post, family);
  report.info_gain = information_gain(post, family);
  report.optimum_entropy = entropy_of_optimum(post, family);
  report.structural_bound = structural_gamma_bound(family);
  if (report.info_gain < kGainFloor) {
    if (report.expected_instant_regret >= kRegretFloor)
      throw InconsistencyError(
          "information_ratio: positive instant regret with zero information gain");
    report.ratio.reset();
  } else {
    report.ratio = report.expected_instant_regret * report.expected_instant_regret /
                   report.info_gain;
  }
  return report;
}

/// The K×K matrix whose trace is the expected instant regret and whose
/// squared Frobenius norm lower-bounds half the information gain for linear
/// families: M_ij = sqrt(α_i α_j) (E[R(Y_{a_i}) | A*=a_j] − E[R(Y_{a_i})]).
inline Eigen::MatrixXd linear_trace_matrix(const Posterior& post,
                                           const ModelFamily& family) {
  const ProbVector alpha = optimal_action_distribution(post, family);
  const int n = family.action_count();
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    if (alpha[i] < kEventFloor) continue;
    const double marginal = mean_reward(predictive(post, family, i), family, i);
    for (int j = 0; j < n; ++j) {
      if (alpha[j] < kEventFloor) continue;
      const double conditional =
          mean_reward(conditional_predictive(post, family, i, j), family, i);
      m(i, j) = std::sqrt(alpha[i] * alpha[j]) * (conditional - marginal);
    }
  }
  return m;
}

/// Exact I(A*; Y_a): mutual information between the optimal action and the
/// outcome at one fixed action.
inline double action_information_gain(const Posterior& post,
                                      const ModelFamily& family, int action) {
  const int n_act = family.action_count();
  const int n_out = family.outcome_count();
  std::vector<double> entries(static_cast<std::size_t>(n_act) * n_out, 0.0);
  for (int m = 0; m < family.model_count(); ++m) {
    const double w = post.weights[m];
    if (w == 0.0) continue;
    const int astar = family.optimal_action(m);
    for (int y = 0; y < n_out; ++y)
      entries[static_cast<std::size_t>(astar) * n_out + y] +=
          w * family.kernel(m)(action, y);
  }
  return mutual_information(JointTable(std::move(entries), n_act, n_out));
}

namespace detail {

/// Component-membership statistics under the posterior: P(i ∈ A*),
/// E[θ_i], and E[θ_i | i ∈ A*] for every component of a semi-bandit family.
struct ComponentStats {
  std::vector<double> in_optimum_prob;
  std::vector<double> mean;
  std::vector<double> mean_given_in_optimum;
};

inline ComponentStats component_stats(const Posterior& post,
                                      const ModelFamily& family) {
  const auto& sb = *family.semi_bandit();
  ComponentStats st;
  st.in_optimum_prob.assign(sb.d, 0.0);
  st.mean.assign(sb.d, 0.0);
  st.mean_given_in_optimum.assign(sb.d, 0.0);
  for (int m = 0; m < family.model_count(); ++m) {
    const double w = post.weights[m];
    if (w == 0.0) continue;
    const auto& opt_comps = sb.action_components[family.optimal_action(m)];
    for (int i = 0; i < sb.d; ++i) {
      const double theta_mean = sb.component_success(m, i) - 0.5;
      st.mean[i] += w * theta_mean;
      if (std::find(opt_comps.begin(), opt_comps.end(), i) != opt_comps.end()) {
        st.in_optimum_prob[i] += w;
        st.mean_given_in_optimum[i] += w * theta_mean;
      }
    }
  }
  for (int i = 0; i < sb.d; ++i)
    if (st.in_optimum_prob[i] > 0.0)
      st.mean_given_in_optimum[i] /= st.in_optimum_prob[i];
  return st;
}

}  // namespace detail

/// Per-action information lower bound for semi-bandit families:
/// I(A*; Y_a) ≥ 2 Σ_{i∈a} P(i∈A*) (E[θ_i | i∈A*] − E[θ_i])².
/// Returns (exact gain, lower bound).
inline std::pair<double, double> semi_bandit_info_lower_bound(
    const Posterior& post, const ModelFamily& family, int action) {
  if (family.structure() != StructureKind::semi_bandit)
    throw ValidationError("semi_bandit_info_lower_bound: wrong structure");
  if (action < 0 || action >= family.action_count())
    throw ValidationError("semi_bandit_info_lower_bound: action out of range");
  const auto st = detail::component_stats(post, family);
  const auto& comps = family.semi_bandit()->action_components[action];
  double bound = 0.0;
  for (int i : comps) {
    const double gap = st.mean_given_in_optimum[i] - st.mean[i];
    bound += 2.0 * st.in_optimum_prob[i] * gap * gap;
  }
  return {action_information_gain(post, family, action), bound};
}

/// Aggregate form over the Thompson action draw:
/// I(A*; (A, Y_A)) ≥ 2 Σ_i P(i∈A*)² (E[θ_i | i∈A*] − E[θ_i])².
/// Returns (exact gain, lower bound).
inline std::pair<double, double> semi_bandit_aggregate_lower_bound(
    const Posterior& post, const ModelFamily& family) {
  if (family.structure() != StructureKind::semi_bandit)
    throw ValidationError("semi_bandit_aggregate_lower_bound: wrong structure");
  const auto st = detail::component_stats(post, family);
  double bound = 0.0;
  for (int i = 0; i < family.semi_bandit()->d; ++i) {
    const double gap = st.mean_given_in_optimum[i] - st.mean[i];
    bound += 2.0 * st.in_optimum_prob[i] * st.in_optimum_prob[i] * gap * gap;
  }
  return {information_gain(post, family), bound};
}

/// Every certificate checkable at one posterior: the two information-gain
/// routes agreeing, the ratio against its structural bound, the Pinsker step
/// over all weighted action pairs, and the structure-specific inequalities
/// (trace identity, Frobenius bound and rank for linear; the per-action and
/// aggregate information lower bounds for semi-bandit).
inline std::vector<BoundCertificate> step_certificates(const Posterior& post,
                                                       const ModelFamily& family,
                                                       const InfoRatioReport& report) {
  std::vector<BoundCertificate> certs;
  const double direct = information_gain_direct(post, family);
  certs.push_back(make_certificate("prop2_gain_decomposition",
                                   std::abs(report.info_gain - direct), 0.0));
  certs.push_back(make_certificate("gamma_vs_structural_bound",
                                   report.ratio.value_or(0.0),
                                   report.structural_bound));

  // Fact 9 per pair, compared in squared form (gap·|gap| ≤ KL/2), which is how
  // it enters the proofs. At the sqrt scale a KL near the rounding floor
  // (~1e-16) would wobble the bound by ~1e-8 and drown the tolerance.
  const ProbVector alpha = optimal_action_distribution(post, family);
  double worst_pinsker = -std::numeric_limits<double>::infinity();
  for (int a = 0; a < family.action_count(); ++a) {
    if (alpha[a] < kEventFloor) continue;
    const ProbVector marginal = predictive(post, family, a);
    std::vector<double> g(family.outcome_count());
    for (int y = 0; y < family.outcome_count(); ++y) g[y] = family.reward(a, y);
    for (int astar = 0; astar < family.action_count(); ++astar) {
      if (alpha[astar] < kEventFloor) continue;
      const ProbVector conditional = conditional_predictive(post, family, a, astar);
      const auto [gap, bound] = pinsker_gap_bound(conditional, marginal, g);
      worst_pinsker = std::max(worst_pinsker, gap * std::abs(gap) - bound * bound);
    }
  }
  certs.push_back(make_certificate("pinsker_mean_gap_sq", worst_pinsker, 0.0));

  if (family.structure() == StructureKind::linear) {
    const Eigen::MatrixXd m = linear_trace_matrix(post, family);
    certs.push_back(make_certificate(
        "prop5_trace_identity",
        std::abs(m.trace() - report.expected_instant_regret), 0.0));
    certs.push_back(make_certificate("prop5_frobenius",
                                     2.0 * m.squaredNorm(), report.info_gain));
    // Rank ≤ d, checked as the (d+1)-th singular value vanishing. Rewards and
    // probabilities are O(1), so the absolute tolerance is meaningful here;
    // a relative threshold would misread rounding noise when M is near zero.
    const int d = family.linear()->dim;
    double excess_sv = 0.0;
    if (m.rows() > d) {
      const Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
      excess_sv = svd.singularValues()(d);
    }
    certs.push_back(make_certificate("prop5_rank", excess_sv, 0.0));
  }

  if (family.structure() == StructureKind::semi_bandit) {
    double worst_lemma1 = -std::numeric_limits<double>::infinity();
    for (int a = 0; a < family.action_count(); ++a) {
      const auto [gain, bound] = semi_bandit_info_lower_bound(post, family, a);
      worst_lemma1 = std::max(worst_lemma1, bound - gain);
    }
    certs.push_back(make_certificate("semi_bandit_lemma1", worst_lemma1, 0.0));
    const auto [gain, bound] = semi_bandit_aggregate_lower_bound(post, family);
    certs.push_back(make_certificate("semi_bandit_lemma2", bound, gain));
  }
  return certs;
}

}  // namespace tsinfo

#endif  // TSINFO_ANALYSIS_HPP
