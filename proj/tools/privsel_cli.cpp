//
// Copyright 2026 The privsel Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

// Command-line front end.
//
//   privsel select  --scores q.json [--mechanism pf] [--seed 0]
//   privsel dist    --scores q.json --mode exact|quadrature|empirical [--n N]
//   privsel compare --scores q.json --mechanism pf --against rnm-expo
//   privsel audit   --pairs pairs.json [--mechanism pf]
//   privsel utility --scores q.json | --random N [--k-max K]
//
// Exit codes: 0 success or check passed, 2 invalid input, 3 check failed.
// Standard output carries one JSON record per command, numbers rounded to 9
// significant digits; files written with --out keep full precision.

#include <cstdint>
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "privsel/privsel.hpp"

namespace {

using privsel::Error;
using privsel::ErrorCode;
using privsel::Mechanism;
using privsel::io::Json;

constexpr int kExitOk = 0;
constexpr int kExitInvalid = 2;
constexpr int kExitCheckFailed = 3;

struct Config {
  std::string mechanism = "pf";
  std::string against;
  double epsilon = 1.0;
  double sensitivity = 1.0;
  std::uint64_t seed = 0;
  std::string scores;
  std::string pairs;
  std::uint64_t n = 100000;
  std::string mode = "exact";
  std::string out;
  double significance = 0.001;
  double tolerance = 1e-8;
  std::uint64_t random = 0;
  std::size_t k_max = 10;
  bool with_gap = false;
};

Json Round9(const Json& j) {
  if (j.is_number_float()) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.9g", j.get<double>());
    return std::stod(buf);
  }
  if (j.is_array() || j.is_object()) {
    Json copy = j;
    for (auto& v : copy) v = Round9(v);
    return copy;
  }
  return j;
}

void Emit(const Json& record) { std::cout << Round9(record).dump() << '\n'; }

privsel::PrivacyParams Params(const Config& c) {
  return {c.epsilon, c.sensitivity};
}

privsel::ValidatedInstance LoadInstance(const Config& c) {
  if (c.scores.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "--scores is required");
  }
  return privsel::validate_instance(
      privsel::io::QualityFromJson(privsel::io::ReadJsonFile(c.scores)),
      Params(c));
}

// Writes `full` to --out when given and prints `summary`; otherwise prints
// `full` itself.
void Publish(const Config& c, const Json& full, Json summary) {
  if (c.out.empty()) {
    Emit(full);
    return;
  }
  privsel::io::WriteJsonFile(c.out, full);
  summary["out"] = c.out;
  Emit(summary);
}

privsel::ProbabilityTable TableInMode(Mechanism m,
                                      const privsel::ValidatedInstance& inst,
                                      const Config& c) {
  if (c.mode == "exact") return privsel::exact_distribution(m, inst);
  if (c.mode == "quadrature") return privsel::quadrature_distribution(m, inst);
  if (c.mode == "empirical") {
    return privsel::empirical_distribution(m, inst, c.n, c.seed);
  }
  throw Error(ErrorCode::kInvalidArgument,
              "unknown mode '" + c.mode + "' (exact, quadrature, empirical)");
}

int CmdSelect(const Config& c) {
  const auto inst = LoadInstance(c);
  const Mechanism m = privsel::ParseMechanism(c.mechanism);
  privsel::RngState rng(c.seed);
  if (c.with_gap) {
    privsel::NoiseKind::Family family;
    switch (m) {
      case Mechanism::kNoisyMaxExponential:
        family = privsel::NoiseKind::Family::kExponential;
        break;
      case Mechanism::kNoisyMaxLaplace:
        family = privsel::NoiseKind::Family::kLaplace;
        break;
      case Mechanism::kNoisyMaxGumbel:
        family = privsel::NoiseKind::Family::kGumbel;
        break;
      default:
        throw Error(ErrorCode::kInvalidArgument,
                    "--with-gap needs rnm-expo, rnm-laplace or rnm-gumbel");
    }
    const auto r = privsel::report_noisy_max_with_gap(inst, family, rng);
    Emit({{"label", r.label}, {"index", r.index}, {"gap", r.gap}});
    return kExitOk;
  }
  const auto r = privsel::run_mechanism(m, inst, rng);
  Emit({{"label", r.label}, {"index", r.index}});
  return kExitOk;
}

int CmdDist(const Config& c) {
  const auto inst = LoadInstance(c);
  const auto table = TableInMode(privsel::ParseMechanism(c.mechanism), inst, c);
  Publish(c, privsel::io::TableToJson(table),
          {{"mechanism", c.mechanism},
           {"provenance", privsel::io::ProvenanceToString(table.provenance)}});
  return kExitOk;
}

int CmdCompare(const Config& c) {
  if (c.against.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "--against is required");
  }
  const auto inst = LoadInstance(c);
  const Mechanism first = privsel::ParseMechanism(c.mechanism);
  const Mechanism second = privsel::ParseMechanism(c.against);
  Json record{{"mechanisms", {c.mechanism, c.against}}, {"mode", c.mode}};
  bool pass = false;
  if (c.mode == "empirical") {
    // Sample the first mechanism; test it against the second's exact table,
    // or its quadrature table when no exact oracle exists.
    privsel::ProbabilityTable reference;
    try {
      reference = privsel::exact_distribution(second, inst);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kUnsupportedOracle) throw;
      reference = privsel::quadrature_distribution(second, inst);
    }
    const auto counts = privsel::empirical_counts(first, inst, c.n, c.seed);
    const auto gof = privsel::chi_square_gof(counts, reference, c.significance);
    const auto observed = privsel::empirical_distribution(first, inst, c.n, c.seed);
    record["tv"] = privsel::tv_distance(observed, reference);
    record["gof"] = {{"statistic", gof.statistic},
                     {"degrees_of_freedom", gof.degrees_of_freedom},
                     {"p_value", gof.p_value},
                     {"pass", gof.pass}};
    pass = gof.pass;
  } else {
    const auto a = TableInMode(first, inst, c);
    const auto b = TableInMode(second, inst, c);
    const double tv = privsel::tv_distance(a, b);
    record["tv"] = tv;
    pass = tv <= c.tolerance;
  }
  record["pass"] = pass;
  Emit(record);
  return pass ? kExitOk : kExitCheckFailed;
}

int CmdAudit(const Config& c) {
  if (c.pairs.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "--pairs is required");
  }
  const auto pairs =
      privsel::io::PairsFromJson(privsel::io::ReadJsonFile(c.pairs));
  const auto report = privsel::privacy_ratio_audit(
      privsel::ParseMechanism(c.mechanism), pairs, Params(c));
  const Json full = privsel::io::AuditToJson(report);
  Publish(c, full,
          {{"bound", full["bound"]},
           {"worst_ratio", full["worst_ratio"]},
           {"pass", report.pass},
           {"pairs", report.per_pair.size()}});
  return report.pass ? kExitOk : kExitCheckFailed;
}

int CmdUtility(const Config& c) {
  std::vector<privsel::ValidatedInstance> instances;
  if (c.random > 0) {
    if (c.k_max < 2 || c.k_max > privsel::kMaxEnumerationOutcomes) {
      throw Error(ErrorCode::kInvalidArgument,
                  "--k-max must lie in [2, 20] for exact utility");
    }
    privsel::RngState rng(c.seed);
    for (std::uint64_t t = 0; t < c.random; ++t) {
      instances.push_back(privsel::validate_instance(
          privsel::RandomQuality(rng, 2, c.k_max, -5.0, 5.0), Params(c)));
    }
  } else {
    instances.push_back(LoadInstance(c));
  }
  const auto report = privsel::dominance_check(instances);
  Publish(c, privsel::io::UtilityToJson(report),
          {{"instances", report.per_instance.size()},
           {"dominance_violations", report.dominance_violations}});
  return report.dominance_violations == 0 ? kExitOk : kExitCheckFailed;
}

void AddParams(CLI::App* cmd, Config& c) {
  cmd->add_option("--epsilon", c.epsilon, "privacy budget, > 0")
      ->capture_default_str();
  cmd->add_option("--sensitivity", c.sensitivity,
                  "score sensitivity Delta, > 0")
      ->capture_default_str();
}

void AddMechanism(CLI::App* cmd, Config& c) {
  cmd->add_option("--mechanism", c.mechanism,
                  "pf, rnm-expo, rnm-laplace, rnm-gumbel, em, alg-a, alg-b")
      ->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  Config c;
  CLI::App app{"Differentially private selection: sample, tabulate, compare "
               "and audit selection mechanisms"};
  app.require_subcommand(1);

  auto* select = app.add_subcommand("select", "run one mechanism once");
  AddMechanism(select, c);
  AddParams(select, c);
  select->add_option("--scores", c.scores, "quality vector JSON file")->required();
  select->add_option("--seed", c.seed, "generator seed")->capture_default_str();
  select->add_flag("--with-gap", c.with_gap,
                   "also release the top-two noisy gap (rnm-* only)");

  auto* dist = app.add_subcommand("dist", "output distribution table");
  AddMechanism(dist, c);
  AddParams(dist, c);
  dist->add_option("--scores", c.scores, "quality vector JSON file")->required();
  dist->add_option("--mode", c.mode, "exact, quadrature or empirical")
      ->capture_default_str();
  dist->add_option("--n", c.n, "samples in empirical mode")->capture_default_str();
  dist->add_option("--seed", c.seed, "generator seed")->capture_default_str();
  dist->add_option("--out", c.out, "write the table to this file");

  auto* compare = app.add_subcommand("compare", "distance between two mechanisms");
  AddMechanism(compare, c);
  compare->add_option("--against", c.against, "second mechanism")->required();
  AddParams(compare, c);
  compare->add_option("--scores", c.scores, "quality vector JSON file")->required();
  compare->add_option("--mode", c.mode, "exact, quadrature or empirical")
      ->capture_default_str();
  compare->add_option("--n", c.n, "samples in empirical mode")->capture_default_str();
  compare->add_option("--seed", c.seed, "generator seed")->capture_default_str();
  compare->add_option("--tolerance", c.tolerance,
                      "max total variation distance (exact/quadrature)")
      ->capture_default_str();
  compare->add_option("--significance", c.significance,
                      "chi-square significance (empirical)")
      ->capture_default_str();

  auto* audit = app.add_subcommand("audit", "check the e^epsilon ratio bound");
  AddMechanism(audit, c);
  AddParams(audit, c);
  audit->add_option("--pairs", c.pairs, "neighbor pairs JSON file")->required();
  audit->add_option("--out", c.out, "write the audit report to this file");

  auto* utility = app.add_subcommand("utility", "pf vs em expected error");
  AddParams(utility, c);
  utility->add_option("--scores", c.scores, "quality vector JSON file");
  utility->add_option("--random", c.random, "number of random instances");
  utility->add_option("--k-max", c.k_max, "largest k in the random suite")
      ->capture_default_str();
  utility->add_option("--seed", c.seed, "generator seed")->capture_default_str();
  utility->add_option("--out", c.out, "write the utility report to this file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInvalid;
  }

  try {
    if (*select) return CmdSelect(c);
    if (*dist) return CmdDist(c);
    if (*compare) return CmdCompare(c);
    if (*audit) return CmdAudit(c);
    if (*utility) return CmdUtility(c);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInvalid;
  }
  return kExitInvalid;
}
