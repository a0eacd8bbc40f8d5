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
// The built-in verification suite: property checks of the information
// measures on randomized inputs, per-step bound certificates along Thompson
// sampling trajectories of every structure, the exhaustively enumerated
// cumulative-information identity on tiny instances, and a Monte Carlo check
// that mean regret stays below the entropy regret bound.

#ifndef TSINFO_VERIFY_HPP
#define TSINFO_VERIFY_HPP

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "tsinfo/analysis.hpp"
#include "tsinfo/generators.hpp"
#include "tsinfo/harness.hpp"

namespace tsinfo {

namespace detail {

inline ProbVector random_prob_sparse(RngStream& rng, int dim) {
  std::vector<double> w(dim);
  double total = 0.0;
  for (double& x : w) {
    x = rng.uniform();
    if (rng.uniform() < 0.2) x = 0.0;
    total += x;
  }
  if (total == 0.0) {
    w[0] = 1.0;
    total = 1.0;
  }
  for (double& x : w) x /= total;
  return ProbVector(std::move(w));
}

/// Strictly positive distribution, safe as the second KL argument.
inline ProbVector random_prob_positive(RngStream& rng, int dim) {
  std::vector<double> w(dim);
  double total = 0.0;
  for (double& x : w) {
    x = rng.uniform(0.01, 1.0);
    total += x;
  }
  for (double& x : w) x /= total;
  return ProbVector(std::move(w));
}

/// Random joint over (X, Z1, Z2), flattened z-major as p[x][z1][z2].
inline std::vector<double> random_triple_joint(RngStream& rng, int nx, int nz1,
                                               int nz2) {
  std::vector<double> p(static_cast<std::size_t>(nx) * nz1 * nz2);
  double total = 0.0;
  for (double& x : p) {
    x = rng.uniform(0.01, 1.0);
    if (rng.uniform() < 0.1) x = 0.0;
    total += x;
  }
  if (total == 0.0) {
    p[0] = 1.0;
    total = 1.0;
  }
  for (double& x : p) x /= total;
  return p;
}

}  // namespace detail

/// Fact suite: each named property evaluated on `cases` randomized inputs,
/// reduced to its worst observed slack.
inline std::vector<BoundCertificate> run_fact_suites(std::uint64_t seed, int cases) {
  RngStream rng(seed);
  double f1 = 0.0;          // max of (−H) and (H − log n)
  double f2 = 0.0;          // max of −KL and KL(p, p)
  double f36 = 0.0;         // |entropy form − KL form|
  double f4 = 0.0;          // |avg over independent Z of sliced MI − MI|
  double f5 = 0.0;          // |I(X;(Z1,Z2)) − I(X;Z1) − I(X;Z2|Z1)|
  double f7 = 0.0;          // max of merged-MI excess and |permuted-MI − MI|
  long f8_throws = 0;       // divergence-undefined errors on family predictives
  double f9 = 0.0;          // mean gap − Pinsker bound
  double f10 = 0.0;         // trace − sqrt(rank)·Frobenius

  for (int c = 0; c < cases; ++c) {
    // Fact 1: entropy bounds.
    {
      const int n = 1 + rng.uniform_int(8);
      const ProbVector p = detail::random_prob_sparse(rng, n);
      const double h = entropy(p);
      f1 = std::max(f1, -h);
      f1 = std::max(f1, h - std::log(static_cast<double>(n)));
    }
    // Fact 2: Gibbs.
    {
      const int n = 2 + rng.uniform_int(7);
      const ProbVector p = detail::random_prob_sparse(rng, n);
      const ProbVector q = detail::random_prob_positive(rng, n);
      f2 = std::max(f2, -kl_divergence(p, q));
      f2 = std::max(f2, kl_divergence(p, p));
    }
    // Facts 3 and 6: the two mutual-information forms agree.
    {
      const JointTable j = random_joint(rng, 2 + rng.uniform_int(4), 2 + rng.uniform_int(4));
      const auto [a, b] = mutual_information_forms(j);
      f36 = std::max(f36, std::abs(a - b));
    }
    // Fact 4: conditioning on an independent Z leaves MI unchanged.
    {
      const int nx = 2 + rng.uniform_int(3), ny = 2 + rng.uniform_int(3);
      const int nz = 2 + rng.uniform_int(3);
      const JointTable base = random_joint(rng, nx, ny);
      const ProbVector qz = detail::random_prob_positive(rng, nz);
      double averaged = 0.0;
      for (int z = 0; z < nz; ++z) {
        std::vector<double> slice(static_cast<std::size_t>(nx) * ny);
        for (int x = 0; x < nx; ++x)
          for (int y = 0; y < ny; ++y)
            slice[static_cast<std::size_t>(x) * ny + y] = base(x, y) * qz[z] / qz[z];
        averaged += qz[z] * mutual_information(JointTable(std::move(slice), nx, ny));
      }
      f4 = std::max(f4, std::abs(averaged - mutual_information(base)));
    }
    // Fact 5: chain rule over (Z1, Z2).
    {
      const int nx = 2 + rng.uniform_int(3), nz1 = 2 + rng.uniform_int(2),
                nz2 = 2 + rng.uniform_int(2);
      const std::vector<double> p = detail::random_triple_joint(rng, nx, nz1, nz2);
      auto at = [&](int x, int z1, int z2) {
        return p[(static_cast<std::size_t>(x) * nz1 + z1) * nz2 + z2];
      };
      const JointTable pair_table(p, nx, nz1 * nz2);
      const double joint_mi = mutual_information(pair_table);
      std::vector<double> xz1(static_cast<std::size_t>(nx) * nz1, 0.0);
      std::vector<double> pz1(nz1, 0.0);
      for (int x = 0; x < nx; ++x)
        for (int z1 = 0; z1 < nz1; ++z1)
          for (int z2 = 0; z2 < nz2; ++z2) {
            xz1[static_cast<std::size_t>(x) * nz1 + z1] += at(x, z1, z2);
            pz1[z1] += at(x, z1, z2);
          }
      const double mi_z1 = mutual_information(JointTable(xz1, nx, nz1));
      double cond_mi = 0.0;
      for (int z1 = 0; z1 < nz1; ++z1) {
        if (pz1[z1] == 0.0) continue;
        std::vector<double> slice(static_cast<std::size_t>(nx) * nz2);
        for (int x = 0; x < nx; ++x)
          for (int z2 = 0; z2 < nz2; ++z2)
            slice[static_cast<std::size_t>(x) * nz2 + z2] = at(x, z1, z2) / pz1[z1];
        cond_mi += pz1[z1] * mutual_information(JointTable(std::move(slice), nx, nz2));
      }
      f5 = std::max(f5, std::abs(joint_mi - mi_z1 - cond_mi));
    }
    // Fact 7: data processing under a deterministic map of Y.
    {
      const int nx = 2 + rng.uniform_int(3), ny = 3 + rng.uniform_int(3);
      const JointTable j = random_joint(rng, nx, ny);
      const double mi = mutual_information(j);
      const int k = 1 + rng.uniform_int(ny - 1);
      std::vector<int> map(ny);
      for (int y = 0; y < ny; ++y) map[y] = rng.uniform_int(k);
      std::vector<double> merged(static_cast<std::size_t>(nx) * k, 0.0);
      for (int x = 0; x < nx; ++x)
        for (int y = 0; y < ny; ++y)
          merged[static_cast<std::size_t>(x) * k + map[y]] += j(x, y);
      f7 = std::max(f7, mutual_information(JointTable(std::move(merged), nx, k)) - mi);
      std::vector<int> perm(ny);
      for (int y = 0; y < ny; ++y) perm[y] = y;
      for (int y = ny - 1; y > 0; --y)
        std::swap(perm[y], perm[rng.uniform_int(y + 1)]);
      std::vector<double> permuted(static_cast<std::size_t>(nx) * ny);
      for (int x = 0; x < nx; ++x)
        for (int y = 0; y < ny; ++y)
          permuted[static_cast<std::size_t>(x) * ny + perm[y]] = j(x, y);
      f7 = std::max(f7,
                    std::abs(mutual_information(JointTable(std::move(permuted), nx, ny)) - mi));
    }
    // Fact 9: mean gap bounded via Pinsker.
    {
      const int n = 2 + rng.uniform_int(7);
      const ProbVector p = detail::random_prob_sparse(rng, n);
      const ProbVector q = detail::random_prob_positive(rng, n);
      std::vector<double> g(n);
      for (double& x : g) x = rng.uniform();
      const auto [gap, bound] = pinsker_gap_bound(p, q, g);
      f9 = std::max(f9, gap - bound);
    }
    // Fact 10: trace against sqrt(rank)·Frobenius, across ranks.
    {
      const int n = 2 + rng.uniform_int(5);
      const int r = 1 + rng.uniform_int(n);
      Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
      for (int i = 0; i < r; ++i) {
        Eigen::VectorXd u(n), v(n);
        for (int k = 0; k < n; ++k) {
          u(k) = rng.uniform(-1.0, 1.0);
          v(k) = rng.uniform(-1.0, 1.0);
        }
        m += u * v.transpose();
      }
      const auto [trace, bound] = trace_rank_frobenius(m);
      f10 = std::max(f10, trace - bound);
    }
  }

  // Fact 8: predictives along sampled trajectories stay absolutely continuous,
  // so the decomposition's KL terms are always defined.
  {
    const int fact8_instances = std::max(1, cases / 500);
    for (int i = 0; i < fact8_instances; ++i) {
      const StructureKind s = static_cast<StructureKind>(rng.uniform_int(4));
      const ModelFamily family = random_family(rng, s);
      for (const Posterior& post : collect_posteriors(family, 10, rng)) {
        try {
          information_gain(post, family);
        } catch (const DivergenceUndefined&) {
          ++f8_throws;
        }
      }
    }
  }

  std::vector<BoundCertificate> certs;
  certs.push_back(make_certificate("fact1_entropy_bounds", f1, 0.0));
  certs.push_back(make_certificate("fact2_gibbs", f2, 0.0));
  certs.push_back(make_certificate("fact3_fact6_mi_forms", f36, 0.0));
  certs.push_back(make_certificate("fact4_independent_conditioning", f4, 0.0));
  certs.push_back(make_certificate("fact5_chain_rule", f5, 0.0));
  certs.push_back(make_certificate("fact7_data_processing", f7, 0.0));
  certs.push_back(make_certificate("fact8_absolute_continuity",
                                   static_cast<double>(f8_throws), 0.0));
  certs.push_back(make_certificate("fact9_pinsker_gap", f9, 0.0));
  certs.push_back(make_certificate("fact10_trace_rank_frobenius", f10, 0.0));
  return certs;
}

/// Certificates gathered from Thompson sampling trajectories over randomized
/// instances of one structure.
struct StructureSuiteResult {
  StructureKind structure = StructureKind::bandit;
  int instances = 0;
  long checked_steps = 0;
  long violations = 0;
  double max_gamma = 0.0;
  std::vector<LocatedCertificate> worst;  // per bound name
};

inline StructureSuiteResult run_structure_suite(StructureKind structure,
                                                int instances, int steps,
                                                RngStream& rng) {
  StructureSuiteResult result;
  result.structure = structure;
  result.instances = instances;
  std::map<std::string, LocatedCertificate> worst;
  for (int i = 0; i < instances; ++i) {
    ModelFamily family =
        structure == StructureKind::linear
            ? random_linear_family(rng, 1 + i % 3)
            : random_family(rng, structure);
    const TrajectoryRecord traj = run_episode(
        family, PolicyKind::thompson_exact, steps, rng.next_bits(), true);
    for (const auto& step : traj.steps) {
      if (!step.report) continue;
      ++result.checked_steps;
      if (step.report->ratio)
        result.max_gamma = std::max(result.max_gamma, *step.report->ratio);
      for (const auto& cert : step.certificates) {
        if (!cert.holds) ++result.violations;
        auto it = worst.find(cert.bound_name);
        if (it == worst.end() || cert.slack < it->second.certificate.slack)
          worst[cert.bound_name] = LocatedCertificate{cert, i, step.t};
      }
    }
  }
  for (auto& [name, located] : worst) result.worst.push_back(located);
  return result;
}

/// Exhaustive enumeration of all length-T Thompson sampling trajectories.
struct EnumerationIdentity {
  double per_step_info_sum = 0.0;  // Σ_t E[I_t(A*; (A_t, Y_t))]
  double trajectory_mi = 0.0;      // I(A*; Z_1..Z_T)
  double prior_optimum_entropy = 0.0;
};

inline EnumerationIdentity enumerate_information_identity(const ModelFamily& family,
                                                          int horizon) {
  const int n_act = family.action_count();
  const int n_out = family.outcome_count();
  const int n_mod = family.model_count();
  const int step_codes = n_act * n_out;
  double n_traj_estimate = 1.0;
  for (int t = 0; t < horizon; ++t) n_traj_estimate *= step_codes;
  if (n_traj_estimate > 100000.0)
    throw InstanceTooLarge("enumerate_information_identity: trajectory space too big");
  const std::size_t n_traj = static_cast<std::size_t>(n_traj_estimate);

  EnumerationIdentity id;
  id.prior_optimum_entropy =
      entropy_of_optimum(prior_posterior(family), family);
  std::vector<double> joint(static_cast<std::size_t>(n_act) * n_traj, 0.0);

  // DFS over trajectory prefixes carrying per-model path likelihoods and the
  // accumulated policy probability.
  struct Frame {
    std::vector<double> likelihood;  // prior × Π kernel along the prefix
    double policy_prob;
    int depth;
    std::size_t traj_id;
    std::size_t stride;
  };
  std::vector<Frame> stack;
  {
    Frame root;
    root.likelihood.resize(n_mod);
    for (int m = 0; m < n_mod; ++m) root.likelihood[m] = family.prior()[m];
    root.policy_prob = 1.0;
    root.depth = 0;
    root.traj_id = 0;
    root.stride = 1;
    stack.push_back(std::move(root));
  }
  while (!stack.empty()) {
    Frame frame = std::move(stack.back());
    stack.pop_back();
    double total = 0.0;
    for (double x : frame.likelihood) total += x;
    if (total <= 0.0) continue;
    if (frame.depth == horizon) {
      for (int m = 0; m < n_mod; ++m)
        joint[static_cast<std::size_t>(family.optimal_action(m)) * n_traj +
              frame.traj_id] += frame.policy_prob * frame.likelihood[m];
      continue;
    }
    std::vector<double> w(n_mod);
    for (int m = 0; m < n_mod; ++m) w[m] = frame.likelihood[m] / total;
    const Posterior post{ProbVector(std::move(w)), frame.depth};
    id.per_step_info_sum +=
        frame.policy_prob * total * information_gain_direct(post, family);
    const ProbVector alpha = optimal_action_distribution(post, family);
    for (int a = 0; a < n_act; ++a) {
      if (alpha[a] == 0.0) continue;
      for (int y = 0; y < n_out; ++y) {
        Frame next;
        next.likelihood.resize(n_mod);
        double mass = 0.0;
        for (int m = 0; m < n_mod; ++m) {
          next.likelihood[m] = frame.likelihood[m] * family.kernel(m)(a, y);
          mass += next.likelihood[m];
        }
        if (mass <= 0.0) continue;
        next.policy_prob = frame.policy_prob * alpha[a];
        next.depth = frame.depth + 1;
        next.traj_id = frame.traj_id + frame.stride * (a * n_out + y);
        next.stride = frame.stride * step_codes;
        stack.push_back(std::move(next));
      }
    }
  }
  id.trajectory_mi =
      mutual_information(JointTable(std::move(joint), n_act, static_cast<int>(n_traj)));
  return id;
}

/// Worked instances used by the demo, the Monte Carlo checks, and the docs.
inline ModelFamily worked_bandit_family() {
  return make_bernoulli_bandit({{0.9, 0.1}, {0.1, 0.9}}, {0.5, 0.5});
}

inline ModelFamily worked_full_information_family() {
  return make_full_information({{0.8, 0.2}, {0.2, 0.8}},
                               {{0.0, 1.0}, {1.0, 0.0}}, {0.5, 0.5});
}

inline ModelFamily worked_linear_family() {
  std::vector<Eigen::VectorXd> features(3), thetas(2);
  features[0] = Eigen::Vector2d(1.0, 0.0);
  features[1] = Eigen::Vector2d(0.0, 1.0);
  features[2] = Eigen::Vector2d(0.5, 0.5);
  thetas[0] = Eigen::Vector2d(0.9, 0.1);
  thetas[1] = Eigen::Vector2d(0.1, 0.9);
  return make_linear_bandit(features, thetas, {0.5, 0.5});
}

inline ModelFamily worked_semi_bandit_family() {
  std::vector<std::vector<int>> actions;
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j) actions.push_back({i, j});
  return make_semi_bandit(4, 2, actions,
                          {{0.8, 0.7, 0.3, 0.2}, {0.2, 0.3, 0.7, 0.8}},
                          {0.5, 0.5});
}

inline ModelFamily worked_family(StructureKind structure) {
  switch (structure) {
    case StructureKind::bandit: return worked_bandit_family();
    case StructureKind::full_information: return worked_full_information_family();
    case StructureKind::linear: return worked_linear_family();
    case StructureKind::semi_bandit: return worked_semi_bandit_family();
  }
  throw ValidationError("worked_family: unknown structure");
}

/// Monte Carlo check of the entropy regret bound: mean cumulative regret of
/// Thompson sampling must stay 3 standard errors below
/// sqrt(Γ̄_running · H(A*) · t) at every step. Returns the certificate and the
/// summary it was computed from.
inline std::pair<BoundCertificate, ExperimentSummary> mc_prop1_certificate(
    const ModelFamily& family, int replications, int horizon,
    std::uint64_t seed) {
  ExperimentConfig config;
  config.family = family;
  config.policy = PolicyKind::thompson_exact;
  config.horizon = horizon;
  config.replications = replications;
  config.master_seed = seed;
  config.checks_enabled = true;
  config.logged_replications = 0;
  ExperimentSummary summary = run_experiment(config);
  double worst = -std::numeric_limits<double>::infinity();
  for (int t = 0; t < horizon; ++t) {
    const double margin = summary.mean_cumulative_regret[t] +
                          3.0 * summary.stderr_cumulative_regret[t] -
                          summary.prop1_bound_curve[t];
    worst = std::max(worst, margin);
  }
  return {make_certificate(std::string("prop1_mc_regret_") +
                               structure_name(family.structure()),
                           worst, 0.0),
          std::move(summary)};
}

inline std::optional<StructureKind> structure_from_flag(const std::string& flag) {
  if (flag == "bandit") return StructureKind::bandit;
  if (flag == "full") return StructureKind::full_information;
  if (flag == "linear") return StructureKind::linear;
  if (flag == "semibandit") return StructureKind::semi_bandit;
  return std::nullopt;
}

struct VerifyOptions {
  std::uint64_t seed = 1;
  int fact_cases = 10000;
  int instances_per_structure = 55;
  int trajectory_steps = 20;
  int mc_replications = 2000;
  int mc_horizon = 100;
  std::optional<StructureKind> only_structure;
};

struct VerifyResult {
  std::vector<BoundCertificate> certificates;
  long violations = 0;
};

/// Runs the whole suite. Every certificate that fails to hold counts as a
/// violation; a release requires zero.
inline VerifyResult run_verification(const VerifyOptions& options) {
  VerifyResult result;
  RngStream rng(options.seed);
  auto take = [&result](BoundCertificate cert) {
    if (!cert.holds) ++result.violations;
    result.certificates.push_back(std::move(cert));
  };

  if (!options.only_structure)
    for (auto cert : run_fact_suites(rng.next_bits(), options.fact_cases)) take(cert);

  const StructureKind all[] = {StructureKind::bandit, StructureKind::full_information,
                               StructureKind::linear, StructureKind::semi_bandit};
  for (StructureKind s : all) {
    if (options.only_structure && *options.only_structure != s) continue;
    StructureSuiteResult suite = run_structure_suite(
        s, options.instances_per_structure, options.trajectory_steps, rng);
    result.violations += suite.violations;
    for (auto& located : suite.worst) {
      BoundCertificate cert = located.certificate;
      cert.bound_name = std::string(structure_name(s)) + "/" + cert.bound_name;
      result.certificates.push_back(std::move(cert));
    }
    auto [mc_cert, summary] = mc_prop1_certificate(
        worked_family(s), options.mc_replications, options.mc_horizon,
        rng.next_bits());
    result.violations += summary.bound_violations;
    take(std::move(mc_cert));
  }

  if (!options.only_structure) {
    for (const ModelFamily& tiny :
         {make_bernoulli_bandit({{0.8, 0.3}, {0.2, 0.6}}, {0.6, 0.4}),
          worked_full_information_family()}) {
      const EnumerationIdentity id = enumerate_information_identity(tiny, 3);
      take(make_certificate(
          std::string("enum_chain_rule_") + structure_name(tiny.structure()),
          std::abs(id.per_step_info_sum - id.trajectory_mi), 0.0));
      take(make_certificate(
          std::string("enum_entropy_budget_") + structure_name(tiny.structure()),
          id.trajectory_mi, id.prior_optimum_entropy));
    }
  }
  return result;
}

}  // namespace tsinfo

#endif  // TSINFO_VERIFY_HPP
