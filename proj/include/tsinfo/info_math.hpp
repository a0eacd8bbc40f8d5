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
// Exact information measures over finite-support distributions. All results
// are in nats; the 1/2 constant in the Pinsker-derived mean-gap bound assumes
// natural logarithms.

#ifndef TSINFO_INFO_MATH_HPP
#define TSINFO_INFO_MATH_HPP

#include <Eigen/Dense>
#include <Eigen/SVD>
#include <cmath>
#include <span>
#include <utility>
#include <vector>

#include "tsinfo/errors.hpp"
#include "tsinfo/prob.hpp"

namespace tsinfo {

/// Relative singular-value threshold for numerical rank.
inline constexpr double kRankRelTolerance = 1e-10;

/// Tolerance below which the two internal mutual-information routes must agree.
inline constexpr double kMiAgreementTolerance = 1e-9;

/// Shannon entropy −Σ p log p in nats, with 0·log 0 = 0.
/// Lies in [0, log(dim p)].
inline double entropy(const ProbVector& p) {
  double h = 0.0;
  for (int i = 0; i < p.dim(); ++i) {
    const double px = p[i];
    if (px > 0.0) h -= px * std::log(px);
  }
  return h;
}

/// Entropy of a raw normalized weight span (internal helper).
inline double entropy_raw(std::span<const double> w) {
  double h = 0.0;
  for (double x : w)
    if (x > 0.0) h -= x * std::log(x);
  return h;
}

/// Kullback--Leibler divergence D(p || q) in nats over a shared support.
/// Requires absolute continuity: q_x = 0 forces p_x = 0, otherwise the
/// divergence is undefined and an error is raised rather than returning
/// infinity. Zero if and only if p = q.
inline double kl_divergence(const ProbVector& p, const ProbVector& q) {
  if (p.dim() != q.dim())
    throw ValidationError("kl_divergence: support dimensions differ");
  double d = 0.0;
  for (int i = 0; i < p.dim(); ++i) {
    const double px = p[i];
    if (px == 0.0) continue;
    const double qx = q[i];
    if (qx == 0.0)
      throw DivergenceUndefined("kl_divergence: p has mass where q has none");
    d += px * std::log(px / qx);
  }
  return d;
}

/// KL divergence on raw normalized weight spans (internal helper).
inline double kl_raw(std::span<const double> p, std::span<const double> q) {
  double d = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] == 0.0) continue;
    if (q[i] == 0.0)
      throw DivergenceUndefined("kl_raw: p has mass where q has none");
    d += p[i] * std::log(p[i] / q[i]);
  }
  return d;
}

/// Both internal routes to I(X; Y): the entropy-reduction form
/// H(X) − H(X|Y) and the expected-KL form Σ_x P(x) D(P(Y|x) || P(Y)).
inline std::pair<double, double> mutual_information_forms(const JointTable& j) {
  const std::vector<double> px = j.x_marginal();
  const std::vector<double> py = j.y_marginal();

  double h_x_given_y = 0.0;
  std::vector<double> cond(j.x_dim());
  for (int y = 0; y < j.y_dim(); ++y) {
    if (py[y] == 0.0) continue;
    for (int x = 0; x < j.x_dim(); ++x) cond[x] = j(x, y) / py[y];
    h_x_given_y += py[y] * entropy_raw(cond);
  }
  const double entropy_form = entropy_raw(px) - h_x_given_y;

  double kl_form = 0.0;
  std::vector<double> row(j.y_dim());
  for (int x = 0; x < j.x_dim(); ++x) {
    if (px[x] == 0.0) continue;
    for (int y = 0; y < j.y_dim(); ++y) row[y] = j(x, y) / px[x];
    kl_form += px[x] * kl_raw(row, py);
  }
  return {entropy_form, kl_form};
}

/// Mutual information I(X; Y) of a joint table, in nats.
///
/// Both internal routes are evaluated and must agree within 1e-9; a larger
/// mismatch signals a defect. The entropy-reduction value is returned.
inline double mutual_information(const JointTable& j) {
  const auto [entropy_form, kl_form] = mutual_information_forms(j);
  if (std::abs(entropy_form - kl_form) > kMiAgreementTolerance)
    throw InconsistencyError("mutual_information: internal routes disagree");
  return entropy_form;
}

/// Mean gap E_p[g] − E_q[g] together with its Pinsker-derived upper bound
/// sqrt(D(p||q)/2), for a gap function g of span at most 1.
inline std::pair<double, double> pinsker_gap_bound(const ProbVector& p,
                                                   const ProbVector& q,
                                                   std::span<const double> g) {
  if (static_cast<int>(g.size()) != p.dim())
    throw ValidationError("pinsker_gap_bound: g dimension mismatch");
  double lo = g[0], hi = g[0];
  for (double x : g) {
    lo = std::min(lo, x);
    hi = std::max(hi, x);
  }
  if (hi - lo > 1.0 + 1e-12)
    throw PreconditionError("pinsker_gap_bound: span of g exceeds 1");
  double mean_gap = 0.0;
  for (int i = 0; i < p.dim(); ++i) mean_gap += (p[i] - q[i]) * g[i];
  const double bound = std::sqrt(kl_divergence(p, q) / 2.0);
  return {mean_gap, bound};
}

/// Trace of a square matrix together with the bound sqrt(rank)·‖M‖_F.
/// Rank counts singular values above 1e-10 times the largest one, so the
/// threshold is scale invariant.
inline std::pair<double, double> trace_rank_frobenius(const Eigen::MatrixXd& m) {
  if (m.rows() != m.cols())
    throw ValidationError("trace_rank_frobenius: matrix not square");
  if (!m.allFinite())
    throw ValidationError("trace_rank_frobenius: non-finite entry");
  const Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  const auto& sv = svd.singularValues();
  const double sv_max = sv.size() > 0 ? sv(0) : 0.0;
  int rank = 0;
  for (int i = 0; i < sv.size(); ++i)
    if (sv(i) > kRankRelTolerance * sv_max) ++rank;
  return {m.trace(), std::sqrt(static_cast<double>(rank)) * m.norm()};
}

}  // namespace tsinfo

#endif  // TSINFO_INFO_MATH_HPP
