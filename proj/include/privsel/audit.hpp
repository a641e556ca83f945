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

// Executable checks of the pure differential-privacy ratio bound and of the
// utility dominance of Permute-and-Flip over the exponential mechanism.
// Both run on exact output distributions; sampled auditing would raise
// false alarms at any practical sample size.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "privsel/core.hpp"
#include "privsel/error.hpp"
#include "privsel/mechanisms.hpp"
#include "privsel/noise.hpp"
#include "privsel/oracle.hpp"

namespace privsel {

// Relative slack on e^eps absorbing floating-point error in exact tables.
inline constexpr double kAuditRelativeSlack = 1e-9;
inline constexpr double kDominanceSlack = 1e-9;

struct PairAudit {
  std::size_t pair_index = 0;
  std::string worst_label;
  // +infinity when one side assigns zero probability to an outcome the
  // other side can produce.
  double ratio = 1.0;
};

struct AuditReport {
  std::vector<PairAudit> per_pair;
  double worst_ratio = 1.0;
  double bound = 1.0;
  bool pass = true;
};

namespace internal {

inline double ProbabilityRatio(double a, double b) {
  if (a == 0.0 && b == 0.0) return 1.0;
  if (b == 0.0) return std::numeric_limits<double>::infinity();
  return a / b;
}

}  // namespace internal

// For each pair, computes the mechanism's exact distribution on both score
// vectors and takes the largest ratio Pr[M(D1)=w]/Pr[M(D2)=w] over outcomes
// and both directions. Passes iff the worst ratio is at most
// e^eps (1 + 1e-9). Pairs whose scores differ by more than the sensitivity
// are rejected up front.
inline AuditReport privacy_ratio_audit(Mechanism oracle,
                                       std::span<const NeighborPair> pairs,
                                       const PrivacyParams& params) {
  ValidateParams(params);
  if (oracle != Mechanism::kPermuteAndFlip &&
      oracle != Mechanism::kNoisyMaxExponential &&
      oracle != Mechanism::kExponentialMechanism) {
    throw Error(ErrorCode::kUnsupportedOracle,
                "privacy audit needs an exact oracle (pf, rnm-expo, em), got '" +
                    std::string(MechanismName(oracle)) + "'");
  }
  if (pairs.empty()) {
    throw Error(ErrorCode::kEmptyPairList, "no neighbor pairs to audit");
  }
  for (std::size_t p = 0; p < pairs.size(); ++p) {
    ValidatePair(pairs[p]);
    const double diff = MaxAbsDifference(pairs[p]);
    if (diff > params.sensitivity) {
      throw Error(ErrorCode::kPairExceedsSensitivity,
                  "pair " + std::to_string(p) + " differs by " +
                      std::to_string(diff) + " > sensitivity " +
                      std::to_string(params.sensitivity));
    }
  }

  AuditReport report;
  report.bound = std::exp(params.epsilon);
  for (std::size_t p = 0; p < pairs.size(); ++p) {
    const auto t1 = exact_distribution(oracle, validate_instance(pairs[p].q1, params));
    const auto t2 = exact_distribution(oracle, validate_instance(pairs[p].q2, params));
    PairAudit record{p, t1.labels.front(), 0.0};
    for (std::size_t i = 0; i < t1.size(); ++i) {
      const double a = t1.probabilities[i];
      const double b = t2.probabilities[i];
      const double r = std::max(internal::ProbabilityRatio(a, b),
                                internal::ProbabilityRatio(b, a));
      if (r > record.ratio) {
        record.ratio = r;
        record.worst_label = t1.labels[i];
      }
    }
    report.worst_ratio = p == 0 ? record.ratio
                                : std::max(report.worst_ratio, record.ratio);
    report.per_pair.push_back(std::move(record));
  }
  report.pass = report.worst_ratio <= report.bound * (1.0 + kAuditRelativeSlack);
  return report;
}

// Expected suboptimality E[q* - q(chosen)] under `dist`.
inline double expected_error(const ValidatedInstance& inst,
                             const ProbabilityTable& dist) {
  RequireSameLabels(inst.labels(), dist.labels);
  double total = 0.0;
  for (std::size_t i = 0; i < inst.size(); ++i) {
    total += dist.probabilities[i] * (inst.best_score() - inst.scores()[i]);
  }
  return std::max(0.0, total);
}

struct InstanceUtility {
  std::size_t instance_id = 0;
  double expected_error_pf = 0.0;
  double expected_error_em = 0.0;
};

struct UtilityReport {
  std::vector<InstanceUtility> per_instance;
  std::size_t dominance_violations = 0;
};

// Compares the expected error of Permute-and-Flip and the exponential
// mechanism on every instance; a violation is pf > em + 1e-9.
inline UtilityReport dominance_check(std::span<const ValidatedInstance> instances) {
  UtilityReport report;
  for (std::size_t id = 0; id < instances.size(); ++id) {
    const auto& inst = instances[id];
    const double pf = expected_error(inst, pf_exact_distribution(inst));
    const double em = expected_error(inst, em_exact_distribution(inst));
    if (pf > em + kDominanceSlack) ++report.dominance_violations;
    report.per_instance.push_back({id, pf, em});
  }
  return report;
}

// Random scores: k uniform in [k_min, k_max], each score uniform in
// [score_lo, score_hi).
inline QualityVector RandomQuality(RngState& rng, std::size_t k_min,
                                   std::size_t k_max, double score_lo,
                                   double score_hi) {
  if (k_min < 1 || k_max < k_min) {
    throw Error(ErrorCode::kInvalidArgument, "need 1 <= k_min <= k_max");
  }
  const std::size_t k = k_min + rng.UniformIndex(k_max - k_min + 1);
  std::vector<double> scores(k);
  for (double& s : scores) s = rng.UniformIn(score_lo, score_hi);
  return QualityVector::FromScores(std::move(scores));
}

// Neighbor of `base` with every coordinate moved by an independent uniform
// draw in [-sensitivity, sensitivity]. Covers only a bounded random slice of
// all possible neighbors.
inline NeighborPair PerturbedNeighbor(const QualityVector& base,
                                      double sensitivity, RngState& rng) {
  NeighborPair pair{base, base};
  for (std::size_t i = 0; i < base.size(); ++i) {
    const double origin = base.scores[i];
    double& s = pair.q2.scores[i];
    s = origin + rng.UniformIn(-sensitivity, sensitivity);
    // Rounding of the sum may overshoot the bound by an ulp.
    while (std::abs(s - origin) > sensitivity) s = std::nextafter(s, origin);
  }
  return pair;
}

}  // namespace privsel
