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
// Command-line entry point. Subcommands:
//   run     execute an experiment described by a JSON config file
//   verify  run the built-in bound/property suite and print certificates
//   demo    run the worked two-model bandit with full per-step reports
// Exit status: 0 success, 1 bound violation, 2 configuration/usage error.

#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "tsinfo/tsinfo.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitBoundViolation = 1;
constexpr int kExitConfigError = 2;

void print_certificate_table(const std::vector<tsinfo::BoundCertificate>& certs) {
  std::printf("%-44s %16s %16s %14s %s\n", "bound", "lhs", "rhs", "slack", "ok");
  for (const auto& c : certs)
    std::printf("%-44s %16.9g %16.9g %14.6g %s\n", c.bound_name.c_str(), c.lhs,
                c.rhs, c.slack, c.holds ? "yes" : "NO");
}

int cmd_run(const std::string& config_path, std::optional<std::uint64_t> seed,
            std::optional<int> horizon, std::optional<int> reps,
            std::optional<std::string> out) {
  tsinfo::ExperimentConfig config = tsinfo::load_config(config_path);
  if (seed) config.master_seed = *seed;
  if (horizon) config.horizon = *horizon;
  if (reps) config.replications = *reps;
  if (out) config.output_path = *out;
  config.validate();

  std::vector<tsinfo::TrajectoryRecord> trajectories;
  const tsinfo::ExperimentSummary summary =
      tsinfo::run_experiment(config, &trajectories);
  tsinfo::emit_report(summary, config, trajectories, config.output_path);

  std::printf("structure=%s actions=%d models=%d policy=%s\n",
              tsinfo::structure_name(summary.structure), summary.action_count,
              summary.model_count, tsinfo::policy_name(config.policy));
  std::printf("replications=%d horizon=%d checked_steps=%ld\n",
              summary.replications, summary.horizon, summary.checked_steps);
  std::printf("H(A*)=%.9g nats, structural bound=%.9g, max gamma=%s\n",
              summary.optimum_entropy, summary.structural_bound,
              summary.any_ratio_defined
                  ? tsinfo::format12(summary.gamma_bar_running).c_str()
                  : "undefined");
  std::printf("mean regret at T: %.9g (stderr %.9g), entropy bound %.9g\n",
              summary.mean_final_regret,
              summary.stderr_cumulative_regret.back(),
              summary.prop1_bound_curve.back());
  std::printf("reports written to %s\n", config.output_path.c_str());
  if (summary.bound_violations > 0) {
    std::printf("BOUND VIOLATIONS: %ld\n", summary.bound_violations);
    for (const auto& c : summary.certificates)
      if (!c.certificate.holds)
        std::printf("  %s: lhs=%.12g rhs=%.12g (replication %d, step %d)\n",
                    c.certificate.bound_name.c_str(), c.certificate.lhs,
                    c.certificate.rhs, c.replication, c.step);
    return kExitBoundViolation;
  }
  std::printf("bound violations: 0\n");
  return kExitOk;
}

int cmd_verify(std::uint64_t seed, const std::string& structure_flag, int reps,
               std::optional<std::string> out) {
  tsinfo::VerifyOptions options;
  options.seed = seed;
  options.mc_replications = reps;
  if (!structure_flag.empty()) {
    options.only_structure = tsinfo::structure_from_flag(structure_flag);
    if (!options.only_structure) {
      std::fprintf(stderr,
                   "unknown structure '%s' (bandit|full|linear|semibandit)\n",
                   structure_flag.c_str());
      return kExitConfigError;
    }
  }
  const tsinfo::VerifyResult result = tsinfo::run_verification(options);
  print_certificate_table(result.certificates);
  std::printf("certificates: %zu, violations: %ld\n", result.certificates.size(),
              result.violations);
  if (out) {
    tsinfo::json j;
    j["seed"] = seed;
    j["violations"] = result.violations;
    tsinfo::json arr = tsinfo::json::array();
    for (const auto& c : result.certificates)
      arr.push_back(tsinfo::certificate_to_json(c));
    j["certificates"] = arr;
    std::ofstream f(*out);
    if (!f) {
      std::fprintf(stderr, "cannot write %s\n", out->c_str());
      return kExitConfigError;
    }
    f << j.dump(2) << "\n";
  }
  return result.violations == 0 ? kExitOk : kExitBoundViolation;
}

int cmd_demo(std::uint64_t seed, int horizon, const std::string& out) {
  tsinfo::ExperimentConfig config;
  config.family = tsinfo::worked_bandit_family();
  config.policy = tsinfo::PolicyKind::thompson_exact;
  config.horizon = horizon;
  config.replications = 1;
  config.master_seed = seed;
  config.output_path = out;
  config.checks_enabled = true;

  std::vector<tsinfo::TrajectoryRecord> trajectories;
  const tsinfo::ExperimentSummary summary =
      tsinfo::run_experiment(config, &trajectories);
  tsinfo::emit_report(summary, config, trajectories, out);

  std::printf("two-model Bernoulli bandit, arms (0.9, 0.1) / (0.1, 0.9), uniform prior\n");
  std::printf("%4s %6s %7s %10s %12s %12s %10s %10s\n", "t", "action", "outcome",
              "regret", "E[regret]", "gain(nats)", "gamma", "bound");
  for (const auto& step : trajectories.front().steps) {
    const auto& r = *step.report;
    std::printf("%4d %6d %7d %10.4g %12.6g %12.6g %10.6g %10.4g\n", step.t,
                step.action, step.outcome, step.instant_regret,
                r.expected_instant_regret, r.info_gain,
                r.ratio.value_or(0.0), r.structural_bound);
  }
  std::printf("files written to %s\n", out.c_str());
  return summary.bound_violations == 0 ? kExitOk : kExitBoundViolation;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Thompson sampling simulator with exact information-ratio accounting"};
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "execute an experiment from a config file");
  std::string config_path;
  run->add_option("--config", config_path, "JSON experiment config")->required();
  std::optional<std::uint64_t> run_seed;
  std::optional<int> run_horizon, run_reps;
  std::optional<std::string> run_out;
  run->add_option("--seed", run_seed, "override master seed");
  run->add_option("--horizon", run_horizon, "override horizon");
  run->add_option("--reps", run_reps, "override replication count");
  run->add_option("--out", run_out, "override output directory");

  auto* verify = app.add_subcommand("verify", "run the bound/property suite");
  std::uint64_t verify_seed = 1;
  std::string verify_structure;
  int verify_reps = 2000;
  std::optional<std::string> verify_out;
  verify->add_option("--seed", verify_seed, "suite seed");
  verify->add_option("--structure", verify_structure,
                     "restrict to one structure: bandit|full|linear|semibandit");
  verify->add_option("--reps", verify_reps, "Monte Carlo replications");
  verify->add_option("--out", verify_out, "write certificates JSON here");

  auto* demo = app.add_subcommand("demo", "worked symmetric-bandit example");
  std::uint64_t demo_seed = 7;
  int demo_horizon = 10;
  std::string demo_out = "demo_out";
  demo->add_option("--seed", demo_seed, "episode seed");
  demo->add_option("--horizon", demo_horizon, "steps to run");
  demo->add_option("--out", demo_out, "output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfigError;
  }

  try {
    if (run->parsed())
      return cmd_run(config_path, run_seed, run_horizon, run_reps, run_out);
    if (verify->parsed())
      return cmd_verify(verify_seed, verify_structure, verify_reps, verify_out);
    if (demo->parsed()) return cmd_demo(demo_seed, demo_horizon, demo_out);
  } catch (const tsinfo::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kExitConfigError;
  } catch (const tsinfo::ValidationError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kExitConfigError;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitBoundViolation;
  }
  return kExitConfigError;
}
