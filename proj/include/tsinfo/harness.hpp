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
// Experiment orchestration: run a policy against a drawn true model for T
// steps, attach per-step information-ratio reports and bound certificates,
// and aggregate Monte Carlo replications. The entire output is a pure
// function of (config, master_seed); replications run on independent derived
// streams and the reduction is order independent.

#ifndef TSINFO_HARNESS_HPP
#define TSINFO_HARNESS_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <exception>
#include <map>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "tsinfo/analysis.hpp"
#include "tsinfo/belief.hpp"
#include "tsinfo/errors.hpp"
#include "tsinfo/model_family.hpp"
#include "tsinfo/policies.hpp"
#include "tsinfo/random.hpp"

namespace tsinfo {

struct ExperimentConfig {
  ModelFamily family;
  PolicyKind policy = PolicyKind::thompson_exact;
  int horizon = 1;
  int replications = 1;
  std::uint64_t master_seed = 0;
  std::string output_path = "out";
  bool checks_enabled = true;
  /// How many replications keep full per-step rows for the CSV.
  int logged_replications = 100;
  /// Known reward-noise variance handed to the Gaussian-belief policy.
  double lg_noise_variance = 0.25;

  void validate() const {
    if (horizon < 1) throw ConfigError("config: horizon must be >= 1");
    if (replications < 1) throw ConfigError("config: replications must be >= 1");
    if (logged_replications < 0)
      throw ConfigError("config: logged_replications must be >= 0");
    if (!(lg_noise_variance > 0.0))
      throw ConfigError("config: lg_noise_variance must be positive");
    if (policy == PolicyKind::thompson_linear_gaussian &&
        family.structure() != StructureKind::linear)
      throw ConfigError(
          "config: thompson_linear_gaussian requires a linear family");
  }
};

struct StepRecord {
  int t = 0;
  int action = 0;
  int outcome = 0;
  double reward = 0.0;
  double instant_regret = 0.0;
  std::optional<InfoRatioReport> report;
  std::vector<BoundCertificate> certificates;
  double gamma_bar_running = 0.0;
  double prop1_bound_running = 0.0;
};

struct TrajectoryRecord {
  int replication = 0;
  std::uint64_t seed = 0;
  int true_model = 0;
  std::vector<StepRecord> steps;

  double cumulative_regret() const {
    double total = 0.0;
    for (const auto& s : steps) total += s.instant_regret;
    return total;
  }
};

/// A certificate annotated with where its worst case was observed.
struct LocatedCertificate {
  BoundCertificate certificate;
  int replication = 0;
  int step = 0;
};

struct ExperimentSummary {
  StructureKind structure = StructureKind::bandit;
  int action_count = 0;
  int model_count = 0;
  int outcome_count = 0;
  int horizon = 0;
  int replications = 0;
  std::uint64_t master_seed = 0;
  double optimum_entropy = 0.0;     // prior H(A*), nats
  double structural_bound = 0.0;
  double gamma_bar_running = 0.0;   // max defined ratio over checked steps
  bool any_ratio_defined = false;
  long checked_steps = 0;
  long bound_violations = 0;
  std::vector<double> mean_cumulative_regret;
  std::vector<double> stderr_cumulative_regret;
  std::vector<double> prop1_bound_curve;
  double mean_final_regret = 0.0;
  /// Worst observed certificate per bound name.
  std::vector<LocatedCertificate> certificates;
  std::vector<std::uint64_t> replication_seeds;
};

/// Moment-matched Gaussian belief over the linear parameter of a family.
inline LinearGaussianState lg_initial_state(const ModelFamily& family,
                                            double noise_variance) {
  if (family.structure() != StructureKind::linear || !family.linear())
    throw ConfigError("lg_initial_state: family is not linear");
  const auto& ls = *family.linear();
  Eigen::VectorXd mu = Eigen::VectorXd::Zero(ls.dim);
  for (int m = 0; m < family.model_count(); ++m)
    mu += family.prior()[m] * ls.thetas[m];
  Eigen::MatrixXd sigma = Eigen::MatrixXd::Zero(ls.dim, ls.dim);
  for (int m = 0; m < family.model_count(); ++m) {
    const Eigen::VectorXd dev = ls.thetas[m] - mu;
    sigma += family.prior()[m] * dev * dev.transpose();
  }
  return LinearGaussianState(mu, sigma, noise_variance);
}

/// Steps between exact per-step checks: every step for small instances,
/// every 10th once the per-step check cost |A|²·|Y|·models gets large.
inline int check_stride(const ModelFamily& family) {
  const std::size_t cost = static_cast<std::size_t>(family.action_count()) *
                           family.action_count() * family.outcome_count() *
                           family.model_count();
  return cost > 100'000 ? 10 : 1;
}

/// Runs one episode: draws the true model from the prior, then iterates
/// select → observe → update. Deterministic given the seed.
inline TrajectoryRecord run_episode(const ModelFamily& family, PolicyKind policy,
                                    int horizon, std::uint64_t seed,
                                    bool checks_enabled = true,
                                    double lg_noise_variance = 0.25) {
  if (horizon < 1) throw ConfigError("run_episode: horizon must be >= 1");
  RngStream rng(seed);
  TrajectoryRecord traj;
  traj.seed = seed;
  traj.true_model = rng.discrete(family.prior().weights());
  traj.steps.reserve(horizon);

  Posterior post = prior_posterior(family);
  const double prior_entropy = entropy_of_optimum(post, family);
  std::optional<LinearGaussianState> lg;
  if (policy == PolicyKind::thompson_linear_gaussian)
    lg = lg_initial_state(family, lg_noise_variance);

  const int stride = check_stride(family);
  const int astar = family.optimal_action(traj.true_model);
  double gamma_bar = 0.0;

  for (int t = 1; t <= horizon; ++t) {
    int action = 0;
    switch (policy) {
      case PolicyKind::thompson_exact:
        action = ts_select(post, family, rng);
        break;
      case PolicyKind::thompson_linear_gaussian:
        action = lg_ts_select(*lg, family.linear()->features, rng).first;
        break;
      case PolicyKind::uniform_baseline:
        action = uniform_select(family.action_count(), rng);
        break;
    }

    const RoundSample round = family.sample_round(traj.true_model, action, rng);
    StepRecord rec;
    rec.t = t;
    rec.action = action;
    rec.outcome = round.outcome_at_action;
    rec.reward = family.reward(action, round.outcome_at_action);
    rec.instant_regret =
        family.reward(astar, round.outcome_at_optimum) - rec.reward;

    if (checks_enabled && (t - 1) % stride == 0) {
      try {
        rec.report = information_ratio(post, family);
        rec.certificates = step_certificates(post, family, *rec.report);
      } catch (const InconsistencyError& e) {
        throw InconsistencyError(std::string(e.what()) + " (at step " +
                                 std::to_string(t) + ")");
      }
      if (rec.report->ratio)
        gamma_bar = std::max(gamma_bar, *rec.report->ratio);
    }
    rec.gamma_bar_running = gamma_bar;
    rec.prop1_bound_running = prop1_regret_bound(gamma_bar, prior_entropy, t);
    traj.steps.push_back(std::move(rec));

    try {
      post = bayes_update(post, family, {action, round.outcome_at_action});
    } catch (const ImpossibleObservation& e) {
      throw ImpossibleObservation(std::string(e.what()) + " (at step " +
                                  std::to_string(t) + ")");
    }
    if (lg) lg = lg_update(*lg, family.linear()->features[action], rec.reward);
  }
  return traj;
}

/// Runs all replications on independent derived streams and aggregates.
/// `logged` receives full trajectories for the first `logged_replications`
/// replications when non-null.
inline ExperimentSummary run_experiment(const ExperimentConfig& config,
                                        std::vector<TrajectoryRecord>* logged = nullptr) {
  config.validate();
  const ModelFamily& family = config.family;
  const int reps = config.replications;
  const int horizon = config.horizon;
  const int n_logged = std::min(reps, config.logged_replications);

  ExperimentSummary summary;
  summary.structure = family.structure();
  summary.action_count = family.action_count();
  summary.model_count = family.model_count();
  summary.outcome_count = family.outcome_count();
  summary.horizon = horizon;
  summary.replications = reps;
  summary.master_seed = config.master_seed;
  summary.optimum_entropy = entropy_of_optimum(prior_posterior(family), family);
  summary.structural_bound = structural_gamma_bound(family);
  summary.replication_seeds.resize(reps);
  for (int k = 0; k < reps; ++k)
    summary.replication_seeds[k] = derive_seed(config.master_seed, k);

  // Per-replication cumulative regret curves, indexed by replication so the
  // reduction below is independent of thread scheduling.
  std::vector<std::vector<double>> curves(reps);
  std::vector<TrajectoryRecord> kept(n_logged);

  struct ThreadAgg {
    double gamma_bar = 0.0;
    bool any_ratio = false;
    long checked = 0;
    long violations = 0;
    std::map<std::string, LocatedCertificate> worst;
    std::exception_ptr error;
  };

  const int n_threads = std::max(1, std::min<int>(
      static_cast<int>(std::thread::hardware_concurrency()), reps));
  std::vector<ThreadAgg> aggs(n_threads);

  auto work = [&](int tid) {
    ThreadAgg& agg = aggs[tid];
    try {
      for (int k = tid; k < reps; k += n_threads) {
        TrajectoryRecord traj =
            run_episode(family, config.policy, horizon,
                        summary.replication_seeds[k], config.checks_enabled,
                        config.lg_noise_variance);
        traj.replication = k;
        std::vector<double>& curve = curves[k];
        curve.resize(horizon);
        double cum = 0.0;
        for (int t = 0; t < horizon; ++t) {
          cum += traj.steps[t].instant_regret;
          curve[t] = cum;
        }
        for (const auto& step : traj.steps) {
          if (!step.report) continue;
          ++agg.checked;
          if (step.report->ratio) {
            agg.any_ratio = true;
            agg.gamma_bar = std::max(agg.gamma_bar, *step.report->ratio);
          }
          for (const auto& cert : step.certificates) {
            if (!cert.holds) ++agg.violations;
            auto it = agg.worst.find(cert.bound_name);
            const bool replace =
                it == agg.worst.end() ||
                cert.slack < it->second.certificate.slack ||
                (cert.slack == it->second.certificate.slack &&
                 (k < it->second.replication ||
                  (k == it->second.replication && step.t < it->second.step)));
            if (replace)
              agg.worst[cert.bound_name] = LocatedCertificate{cert, k, step.t};
          }
        }
        if (k < n_logged) kept[k] = std::move(traj);
      }
    } catch (...) {
      agg.error = std::current_exception();
    }
  };

  if (n_threads == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(n_threads);
    for (int tid = 0; tid < n_threads; ++tid) pool.emplace_back(work, tid);
    for (auto& th : pool) th.join();
  }
  for (const auto& agg : aggs)
    if (agg.error) std::rethrow_exception(agg.error);

  std::map<std::string, LocatedCertificate> worst;
  for (const auto& agg : aggs) {
    summary.checked_steps += agg.checked;
    summary.bound_violations += agg.violations;
    summary.any_ratio_defined = summary.any_ratio_defined || agg.any_ratio;
    summary.gamma_bar_running = std::max(summary.gamma_bar_running, agg.gamma_bar);
    for (const auto& [name, located] : agg.worst) {
      auto it = worst.find(name);
      const bool replace =
          it == worst.end() ||
          located.certificate.slack < it->second.certificate.slack ||
          (located.certificate.slack == it->second.certificate.slack &&
           (located.replication < it->second.replication ||
            (located.replication == it->second.replication &&
             located.step < it->second.step)));
      if (replace) worst[name] = located;
    }
  }
  for (auto& [name, located] : worst) summary.certificates.push_back(located);

  summary.mean_cumulative_regret.assign(horizon, 0.0);
  summary.stderr_cumulative_regret.assign(horizon, 0.0);
  for (int t = 0; t < horizon; ++t) {
    double sum = 0.0;
    for (int k = 0; k < reps; ++k) sum += curves[k][t];
    const double mean = sum / reps;
    double sq = 0.0;
    for (int k = 0; k < reps; ++k) {
      const double dev = curves[k][t] - mean;
      sq += dev * dev;
    }
    summary.mean_cumulative_regret[t] = mean;
    summary.stderr_cumulative_regret[t] =
        reps > 1 ? std::sqrt(sq / (reps - 1.0) / reps) : 0.0;
  }
  summary.mean_final_regret = summary.mean_cumulative_regret[horizon - 1];

  // Prop-1 curve with the tightest certifiable uniform bound: the running
  // maximum of observed ratios when checks ran, the structural bound otherwise.
  const double gamma_curve =
      config.checks_enabled ? summary.gamma_bar_running : summary.structural_bound;
  summary.prop1_bound_curve.resize(horizon);
  for (int t = 1; t <= horizon; ++t)
    summary.prop1_bound_curve[t - 1] =
        prop1_regret_bound(gamma_curve, summary.optimum_entropy, t);

  if (logged) *logged = std::move(kept);
  return summary;
}

}  // namespace tsinfo

#endif  // TSINFO_HARNESS_HPP
