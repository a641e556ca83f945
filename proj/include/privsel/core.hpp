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

// Domain types shared by every module: score vectors, privacy parameters,
// validated instances, neighbor pairs and output-distribution tables.
//
// The private dataset is never materialized. Everything here starts from the
// precomputed quality scores q(D, w_1), ..., q(D, w_k).

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <span>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "privsel/error.hpp"

namespace privsel {

struct QualityVector {
  std::vector<std::string> labels;
  std::vector<double> scores;

  // Labels "0", "1", ... for callers that only care about indices.
  static QualityVector FromScores(std::vector<double> scores) {
    QualityVector q;
    q.labels.reserve(scores.size());
    for (std::size_t i = 0; i < scores.size(); ++i) {
      q.labels.push_back(std::to_string(i));
    }
    q.scores = std::move(scores);
    return q;
  }

  std::size_t size() const noexcept { return scores.size(); }

  // q* = max_i q_i. Requires a nonempty vector.
  double best_score() const {
    return *std::max_element(scores.begin(), scores.end());
  }

  friend bool operator==(const QualityVector&, const QualityVector&) = default;
};

struct PrivacyParams {
  double epsilon = 1.0;
  double sensitivity = 1.0;

  // Exponential-noise rate eps / (2 Delta).
  double rate() const noexcept { return epsilon / (2.0 * sensitivity); }
  // Laplace / Gumbel scale 2 Delta / eps.
  double scale() const noexcept { return 2.0 * sensitivity / epsilon; }

  friend bool operator==(const PrivacyParams&, const PrivacyParams&) = default;
};

inline void ValidateParams(const PrivacyParams& p) {
  if (!(p.epsilon > 0.0) || !std::isfinite(p.epsilon)) {
    throw Error(ErrorCode::kNonPositiveEpsilon,
                "epsilon must be a positive finite number, got " +
                    std::to_string(p.epsilon));
  }
  if (!(p.sensitivity > 0.0) || !std::isfinite(p.sensitivity)) {
    throw Error(ErrorCode::kNonPositiveSensitivity,
                "sensitivity must be a positive finite number, got " +
                    std::to_string(p.sensitivity));
  }
  if (!std::isfinite(p.rate()) || !std::isfinite(p.scale()) ||
      !(p.rate() > 0.0) || !(p.scale() > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument,
                "epsilon/sensitivity ratio produces a degenerate noise rate");
  }
}

inline void ValidateQuality(const QualityVector& q) {
  if (q.scores.empty()) {
    throw Error(ErrorCode::kEmptyOutcomeSet, "at least one outcome required");
  }
  if (q.labels.size() != q.scores.size()) {
    throw Error(ErrorCode::kLengthMismatch,
                "labels and scores must have the same length");
  }
  for (std::size_t i = 0; i < q.scores.size(); ++i) {
    if (!std::isfinite(q.scores[i])) {
      throw Error(ErrorCode::kNonFiniteScore,
                  "score for label '" + q.labels[i] + "' is not finite");
    }
  }
  std::unordered_set<std::string> seen;
  for (const auto& label : q.labels) {
    if (!seen.insert(label).second) {
      throw Error(ErrorCode::kDuplicateLabel, "duplicate label '" + label + "'");
    }
  }
}

class ValidatedInstance;
ValidatedInstance validate_instance(QualityVector q, PrivacyParams p);

// A quality vector and privacy parameters whose invariants have been checked.
// Only validate_instance() creates one.
class ValidatedInstance {
 public:
  const QualityVector& quality() const noexcept { return quality_; }
  const PrivacyParams& params() const noexcept { return params_; }

  std::size_t size() const noexcept { return quality_.size(); }
  std::span<const double> scores() const noexcept { return quality_.scores; }
  const std::vector<std::string>& labels() const noexcept {
    return quality_.labels;
  }
  double best_score() const noexcept { return best_; }
  double rate() const noexcept { return params_.rate(); }
  double scale() const noexcept { return params_.scale(); }

 private:
  friend ValidatedInstance validate_instance(QualityVector, PrivacyParams);

  ValidatedInstance(QualityVector q, PrivacyParams p)
      : quality_(std::move(q)), params_(p), best_(quality_.best_score()) {}

  QualityVector quality_;
  PrivacyParams params_;
  double best_;
};

inline ValidatedInstance validate_instance(QualityVector q, PrivacyParams p) {
  ValidateQuality(q);
  ValidateParams(p);
  return ValidatedInstance(std::move(q), p);
}

struct NeighborPair {
  QualityVector q1;
  QualityVector q2;
};

inline void ValidatePair(const NeighborPair& pair) {
  ValidateQuality(pair.q1);
  ValidateQuality(pair.q2);
  if (pair.q1.labels != pair.q2.labels) {
    throw Error(ErrorCode::kLabelMismatch,
                "neighbor pair vectors must share the same label sequence");
  }
}

// max_i |q1_i - q2_i| for one pair.
inline double MaxAbsDifference(const NeighborPair& pair) {
  double worst = 0.0;
  for (std::size_t i = 0; i < pair.q1.size(); ++i) {
    worst = std::max(worst, std::abs(pair.q1.scores[i] - pair.q2.scores[i]));
  }
  return worst;
}

// Sensitivity evaluated over the supplied pairs only:
//   max over pairs of max_i |q1_i - q2_i|.
// This is evidence, not a certificate. It lower-bounds the true sensitivity,
// which is a supremum over all neighboring datasets.
inline double sensitivity_from_pairs(std::span<const NeighborPair> pairs) {
  if (pairs.empty()) {
    throw Error(ErrorCode::kEmptyPairList, "no neighbor pairs supplied");
  }
  double worst = 0.0;
  for (const auto& pair : pairs) {
    ValidatePair(pair);
    worst = std::max(worst, MaxAbsDifference(pair));
  }
  return worst;
}

// Range-based bound of Dong et al. over the supplied pairs:
//   max over pairs of [max_w (q1 - q2)(w) - min_w (q1 - q2)(w)].
// Zero whenever q1 - q2 is constant, so monotone shifts cost nothing. Like
// sensitivity_from_pairs, it only lower-bounds the supremum over all
// neighbors. It is not wired into any mechanism's noise scale.
inline double dong_sensitivity_from_pairs(std::span<const NeighborPair> pairs) {
  if (pairs.empty()) {
    throw Error(ErrorCode::kEmptyPairList, "no neighbor pairs supplied");
  }
  double worst = 0.0;
  for (const auto& pair : pairs) {
    ValidatePair(pair);
    double hi = -INFINITY;
    double lo = INFINITY;
    for (std::size_t i = 0; i < pair.q1.size(); ++i) {
      const double d = pair.q1.scores[i] - pair.q2.scores[i];
      hi = std::max(hi, d);
      lo = std::min(lo, d);
    }
    worst = std::max(worst, hi - lo);
  }
  return worst;
}

struct Provenance {
  enum class Kind { kExactClosedForm, kExactEnumeration, kQuadrature, kEmpirical };

  Kind kind = Kind::kExactClosedForm;
  // Only meaningful for kEmpirical.
  std::uint64_t samples = 0;
  std::uint64_t seed = 0;

  static Provenance Empirical(std::uint64_t n, std::uint64_t seed) {
    return {Kind::kEmpirical, n, seed};
  }

  friend bool operator==(const Provenance&, const Provenance&) = default;
};

inline constexpr double kTableSumTolerance = 1e-9;

// Output distribution over outcome indices.
struct ProbabilityTable {
  std::vector<std::string> labels;
  std::vector<double> probabilities;
  Provenance provenance;

  std::size_t size() const noexcept { return probabilities.size(); }
};

// Clamps entries that drifted slightly outside [0, 1] and checks that the
// table is a distribution. Used by every producer of ProbabilityTable.
inline ProbabilityTable MakeTable(std::vector<std::string> labels,
                                  std::vector<double> probabilities,
                                  Provenance provenance) {
  if (labels.size() != probabilities.size()) {
    throw Error(ErrorCode::kLengthMismatch,
                "table labels and probabilities differ in length");
  }
  double sum = 0.0;
  for (double& p : probabilities) {
    if (!std::isfinite(p) || p < -1e-12 || p > 1.0 + 1e-12) {
      throw Error(ErrorCode::kInvalidArgument,
                  "probability entry outside [0, 1]: " + std::to_string(p));
    }
    p = std::clamp(p, 0.0, 1.0);
    sum += p;
  }
  if (std::abs(sum - 1.0) > kTableSumTolerance) {
    throw Error(ErrorCode::kInvalidArgument,
                "probabilities sum to " + std::to_string(sum) + ", not 1");
  }
  return {std::move(labels), std::move(probabilities), provenance};
}

inline void RequireSameLabels(const std::vector<std::string>& a,
                              const std::vector<std::string>& b) {
  if (a != b) {
    throw Error(ErrorCode::kLabelMismatch, "label sequences differ");
  }
}

}  // namespace privsel
