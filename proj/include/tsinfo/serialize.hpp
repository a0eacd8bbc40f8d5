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
// JSON schemas for families and experiment configs, plus the CSV/JSON report
// writer. Semi-bandit component ids are 1-based in JSON and 0-based in code.

#ifndef TSINFO_SERIALIZE_HPP
#define TSINFO_SERIALIZE_HPP

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "tsinfo/errors.hpp"
#include "tsinfo/harness.hpp"
#include "tsinfo/model_family.hpp"
#include "tsinfo/policies.hpp"

namespace tsinfo {

using json = nlohmann::json;

/// Formats a number with 12 significant digits, the report precision.
inline std::string format12(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.12g", x);
  return buf;
}

/// Rounds through the 12-significant-digit representation so emitted JSON
/// numbers render at report precision.
inline double round12(double x) {
  if (!std::isfinite(x)) return x;
  return std::strtod(format12(x).c_str(), nullptr);
}

inline json family_to_json(const ModelFamily& family) {
  json j;
  j["structure"] = structure_name(family.structure());
  j["prior"] = family.prior().weights();
  switch (family.structure()) {
    case StructureKind::bandit: {
      std::vector<std::vector<double>> means(family.model_count(),
                                             std::vector<double>(family.action_count()));
      for (int m = 0; m < family.model_count(); ++m)
        for (int a = 0; a < family.action_count(); ++a)
          means[m][a] = family.kernel(m)(a, 1);
      j["arm_means"] = means;
      break;
    }
    case StructureKind::full_information: {
      std::vector<std::vector<double>> dists(family.model_count(),
                                             std::vector<double>(family.outcome_count()));
      for (int m = 0; m < family.model_count(); ++m)
        for (int z = 0; z < family.outcome_count(); ++z)
          dists[m][z] = family.kernel(m)(0, z);
      std::vector<std::vector<double>> rewards(family.action_count(),
                                               std::vector<double>(family.outcome_count()));
      for (int a = 0; a < family.action_count(); ++a)
        for (int z = 0; z < family.outcome_count(); ++z)
          rewards[a][z] = family.reward(a, z);
      j["z_dists"] = dists;
      j["rewards"] = rewards;
      break;
    }
    case StructureKind::linear: {
      const auto& ls = *family.linear();
      std::vector<std::vector<double>> feats, thetas;
      for (const auto& v : ls.features)
        feats.emplace_back(v.data(), v.data() + v.size());
      for (const auto& v : ls.thetas)
        thetas.emplace_back(v.data(), v.data() + v.size());
      j["features"] = feats;
      j["thetas"] = thetas;
      break;
    }
    case StructureKind::semi_bandit: {
      const auto& sb = *family.semi_bandit();
      j["d"] = sb.d;
      j["m"] = sb.m;
      std::vector<std::vector<int>> acts = sb.action_components;
      for (auto& subset : acts)
        for (int& c : subset) ++c;  // 1-based in JSON
      j["actions"] = acts;
      std::vector<std::vector<double>> probs(family.model_count(),
                                             std::vector<double>(sb.d));
      for (int m = 0; m < family.model_count(); ++m)
        for (int i = 0; i < sb.d; ++i) probs[m][i] = sb.component_success(m, i);
      j["component_probs"] = probs;
      break;
    }
  }
  return j;
}

inline ModelFamily family_from_json(const json& j) {
  try {
    const std::string structure = j.at("structure").get<std::string>();
    const auto prior = j.at("prior").get<std::vector<double>>();
    if (structure == "bandit") {
      return make_bernoulli_bandit(
          j.at("arm_means").get<std::vector<std::vector<double>>>(), prior);
    }
    if (structure == "full_information") {
      return make_full_information(
          j.at("z_dists").get<std::vector<std::vector<double>>>(),
          j.at("rewards").get<std::vector<std::vector<double>>>(), prior);
    }
    if (structure == "linear") {
      const auto feats = j.at("features").get<std::vector<std::vector<double>>>();
      const auto thetas = j.at("thetas").get<std::vector<std::vector<double>>>();
      std::vector<Eigen::VectorXd> fv, tv;
      for (const auto& r : feats)
        fv.push_back(Eigen::Map<const Eigen::VectorXd>(r.data(), r.size()));
      for (const auto& r : thetas)
        tv.push_back(Eigen::Map<const Eigen::VectorXd>(r.data(), r.size()));
      return make_linear_bandit(fv, tv, prior);
    }
    if (structure == "semi_bandit") {
      auto actions = j.at("actions").get<std::vector<std::vector<int>>>();
      for (auto& subset : actions)
        for (int& c : subset) --c;  // back to 0-based
      return make_semi_bandit(j.at("d").get<int>(), j.at("m").get<int>(), actions,
                              j.at("component_probs").get<std::vector<std::vector<double>>>(),
                              prior);
    }
    throw ConfigError("family: unknown structure '" + structure + "'");
  } catch (const json::exception& e) {
    throw ConfigError(std::string("family: malformed JSON: ") + e.what());
  }
}

/// Loads a config document. The family is either inline under "family" or in
/// a separate file named by "family_file" (resolved against the config's
/// directory).
inline ExperimentConfig config_from_json(const json& j,
                                         const std::filesystem::path& base_dir = {}) {
  try {
    ExperimentConfig config;
    if (j.contains("family")) {
      config.family = family_from_json(j.at("family"));
    } else if (j.contains("family_file")) {
      std::filesystem::path p = j.at("family_file").get<std::string>();
      if (p.is_relative()) p = base_dir / p;
      std::ifstream in(p);
      if (!in) throw ConfigError("config: cannot open family file " + p.string());
      config.family = family_from_json(json::parse(in));
    } else {
      throw ConfigError("config: needs 'family' or 'family_file'");
    }
    config.policy = policy_from_name(j.at("policy").get<std::string>());
    config.horizon = j.at("horizon").get<int>();
    config.replications = j.at("replications").get<int>();
    config.master_seed = j.at("master_seed").get<std::uint64_t>();
    config.output_path = j.value("output_path", std::string("out"));
    config.checks_enabled = j.value("checks_enabled", true);
    config.logged_replications = j.value("logged_replications", 100);
    config.lg_noise_variance = j.value("lg_noise_variance", 0.25);
    config.validate();
    return config;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: malformed JSON: ") + e.what());
  } catch (const ValidationError& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
}

inline ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw ConfigError("config: parse error in " + path.string() + ": " + e.what());
  }
  return config_from_json(j, path.parent_path());
}

inline json config_to_json(const ExperimentConfig& config) {
  json j;
  j["family"] = family_to_json(config.family);
  j["policy"] = policy_name(config.policy);
  j["horizon"] = config.horizon;
  j["replications"] = config.replications;
  j["master_seed"] = config.master_seed;
  j["output_path"] = config.output_path;
  j["checks_enabled"] = config.checks_enabled;
  j["logged_replications"] = config.logged_replications;
  j["lg_noise_variance"] = config.lg_noise_variance;
  return j;
}

inline json certificate_to_json(const BoundCertificate& c) {
  return json{{"bound_name", c.bound_name},
              {"lhs", round12(c.lhs)},
              {"rhs", round12(c.rhs)},
              {"slack", round12(c.slack)},
              {"holds", c.holds}};
}

inline json located_certificate_to_json(const LocatedCertificate& c) {
  json j = certificate_to_json(c.certificate);
  j["replication"] = c.replication;
  j["step"] = c.step;
  return j;
}

inline json summary_to_json(const ExperimentSummary& s, const ExperimentConfig& config) {
  json j;
  j["config"] = config_to_json(config);
  j["structure"] = structure_name(s.structure);
  j["action_count"] = s.action_count;
  j["model_count"] = s.model_count;
  j["outcome_count"] = s.outcome_count;
  j["horizon"] = s.horizon;
  j["replications"] = s.replications;
  j["master_seed"] = s.master_seed;
  j["replication_seeds"] = s.replication_seeds;
  j["optimum_entropy_nats"] = round12(s.optimum_entropy);
  j["structural_bound"] = round12(s.structural_bound);
  j["gamma_bar_running"] =
      s.any_ratio_defined ? json(round12(s.gamma_bar_running)) : json(nullptr);
  j["checked_steps"] = s.checked_steps;
  j["bound_violations"] = s.bound_violations;
  j["mean_final_regret"] = round12(s.mean_final_regret);
  auto rounded = [](const std::vector<double>& v) {
    json arr = json::array();
    for (double x : v) arr.push_back(round12(x));
    return arr;
  };
  j["mean_cumulative_regret"] = rounded(s.mean_cumulative_regret);
  j["stderr_cumulative_regret"] = rounded(s.stderr_cumulative_regret);
  j["prop1_bound_curve"] = rounded(s.prop1_bound_curve);
  json certs = json::array();
  for (const auto& c : s.certificates) certs.push_back(located_certificate_to_json(c));
  j["certificates"] = certs;
  return j;
}

inline const char* kTrajectoryCsvHeader =
    "replication,t,action,outcome,reward,instant_regret,expected_instant_regret,"
    "info_gain_nats,gamma,gamma_bar_running,optimum_entropy_nats,prop1_bound,"
    "structural_bound,bound_ok";

/// Writes trajectories.csv and summary.json under `dir`. Report fields of
/// unchecked steps are left empty; an undefined ratio on a checked step is
/// written as nan.
inline void emit_report(const ExperimentSummary& summary,
                        const ExperimentConfig& config,
                        const std::vector<TrajectoryRecord>& trajectories,
                        const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw ConfigError("emit_report: cannot create " + dir.string());

  const auto csv_path = dir / "trajectories.csv";
  std::ofstream csv(csv_path);
  if (!csv) throw ConfigError("emit_report: cannot write " + csv_path.string());
  csv << kTrajectoryCsvHeader << "\n";
  for (const auto& traj : trajectories) {
    for (const auto& step : traj.steps) {
      csv << traj.replication << ',' << step.t << ',' << step.action << ','
          << step.outcome << ',' << format12(step.reward) << ','
          << format12(step.instant_regret) << ',';
      if (step.report) {
        const auto& r = *step.report;
        bool all_hold = true;
        for (const auto& c : step.certificates) all_hold = all_hold && c.holds;
        csv << format12(r.expected_instant_regret) << ',' << format12(r.info_gain)
            << ',' << (r.ratio ? format12(*r.ratio) : "nan") << ','
            << format12(step.gamma_bar_running) << ','
            << format12(r.optimum_entropy) << ','
            << format12(step.prop1_bound_running) << ','
            << format12(r.structural_bound) << ',' << (all_hold ? 1 : 0);
      } else {
        // expected_instant_regret, info_gain_nats, gamma empty
        csv << ",,," << format12(step.gamma_bar_running) << ','
            << /* optimum_entropy_nats empty */ ','
            << format12(step.prop1_bound_running) << ','
            << format12(summary.structural_bound) << ',';  // bound_ok empty
      }
      csv << "\n";
    }
  }
  if (!csv) throw ConfigError("emit_report: write failed for " + csv_path.string());

  const auto json_path = dir / "summary.json";
  std::ofstream out(json_path);
  if (!out) throw ConfigError("emit_report: cannot write " + json_path.string());
  out << summary_to_json(summary, config).dump(2) << "\n";
  if (!out) throw ConfigError("emit_report: write failed for " + json_path.string());
}

}  // namespace tsinfo

#endif  // TSINFO_SERIALIZE_HPP
