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

// Private selection mechanisms over a validated score vector:
//   - Report Noisy Max with exponential, Laplace or Gumbel noise,
//   - the exponential mechanism sampled from its closed-form distribution,
//   - Permute-and-Flip,
//   - the two intermediate algorithms used to connect Permute-and-Flip with
//     exponential-noise Report Noisy Max,
//   - noisy max with release of the top-two gap.
//
// Exponential noise has rate eps/(2 Delta); Laplace and Gumbel noise have
// scale 2 Delta/eps. Noisy-score ties are broken toward the smallest index.
// In real arithmetic ties have probability zero; in floating point they are
// a measure-zero deviation.

#pragma once

#include <cassert>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "privsel/core.hpp"
#include "privsel/error.hpp"
#include "privsel/noise.hpp"

namespace privsel {

struct SelectionResult {
  std::size_t index = 0;
  std::string label;

  friend bool operator==(const SelectionResult&, const SelectionResult&) = default;
};

struct GapResult {
  std::size_t index = 0;
  std::string label;
  double gap = 0.0;
  // Set when there is no runner-up; gap is then reported as 0.
  bool single_outcome = false;
};

// Internal variables of a mechanism run, recorded only when a trace is
// requested. Meant for debugging and tests, not as API.
struct MechanismTrace {
  std::vector<double> noisy;         // v_i (capped v_i for intermediate B)
  std::vector<double> tiebreak;      // z_i, intermediate B only
  std::vector<std::size_t> order;    // visiting order, Permute-and-Flip only
  std::vector<double> coins;         // heads probabilities, Permute-and-Flip
  std::vector<std::size_t> candidates;  // S or S'
};

enum class Mechanism {
  kPermuteAndFlip,
  kNoisyMaxExponential,
  kNoisyMaxLaplace,
  kNoisyMaxGumbel,
  kExponentialMechanism,
  kIntermediateA,
  kIntermediateB,
};

inline constexpr Mechanism kAllMechanisms[] = {
    Mechanism::kPermuteAndFlip,       Mechanism::kNoisyMaxExponential,
    Mechanism::kNoisyMaxLaplace,      Mechanism::kNoisyMaxGumbel,
    Mechanism::kExponentialMechanism, Mechanism::kIntermediateA,
    Mechanism::kIntermediateB,
};

constexpr std::string_view MechanismName(Mechanism m) {
  switch (m) {
    case Mechanism::kPermuteAndFlip: return "pf";
    case Mechanism::kNoisyMaxExponential: return "rnm-expo";
    case Mechanism::kNoisyMaxLaplace: return "rnm-laplace";
    case Mechanism::kNoisyMaxGumbel: return "rnm-gumbel";
    case Mechanism::kExponentialMechanism: return "em";
    case Mechanism::kIntermediateA: return "alg-a";
    case Mechanism::kIntermediateB: return "alg-b";
  }
  return "?";
}

inline Mechanism ParseMechanism(std::string_view name) {
  for (Mechanism m : kAllMechanisms) {
    if (MechanismName(m) == name) return m;
  }
  throw Error(ErrorCode::kInvalidArgument,
              "unknown mechanism '" + std::string(name) +
                  "' (expected pf, rnm-expo, rnm-laplace, rnm-gumbel, em, "
                  "alg-a or alg-b)");
}

// Noise distribution used by Report Noisy Max for the given instance.
inline NoiseKind NoiseFor(const ValidatedInstance& inst,
                          NoiseKind::Family family) {
  switch (family) {
    case NoiseKind::Family::kExponential:
      return NoiseKind::Exponential(inst.rate());
    case NoiseKind::Family::kLaplace:
      return NoiseKind::Laplace(inst.scale());
    case NoiseKind::Family::kGumbel:
      return NoiseKind::Gumbel(inst.scale());
  }
  return NoiseKind::Exponential(inst.rate());
}

namespace internal {

inline std::size_t ArgmaxSmallestIndex(std::span<const double> values) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < values.size(); ++i) {
    if (values[i] > values[best]) best = i;
  }
  return best;
}

inline SelectionResult Result(const ValidatedInstance& inst, std::size_t i) {
  return {i, inst.labels()[i]};
}

inline std::vector<double> NoisyScores(const ValidatedInstance& inst,
                                       const NoiseKind& noise, RngState& rng) {
  std::vector<double> v(inst.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    v[i] = inst.scores()[i] + sample(noise, rng);
  }
  return v;
}

}  // namespace internal

inline SelectionResult report_noisy_max(const ValidatedInstance& inst,
                                        NoiseKind::Family family,
                                        RngState& rng,
                                        MechanismTrace* trace = nullptr) {
  auto v = internal::NoisyScores(inst, NoiseFor(inst, family), rng);
  const std::size_t winner = internal::ArgmaxSmallestIndex(v);
  if (trace != nullptr) trace->noisy = std::move(v);
  return internal::Result(inst, winner);
}

// Samples index i with probability exp(lambda (q_i - q*)) / sum_j (same),
// by inverting the cumulative distribution with one uniform draw.
inline SelectionResult exponential_mechanism(const ValidatedInstance& inst,
                                             RngState& rng) {
  const auto scores = inst.scores();
  std::vector<double> weights(scores.size());
  double total = 0.0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    weights[i] = std::exp(inst.rate() * (scores[i] - inst.best_score()));
    total += weights[i];
  }
  const double target = rng.Uniform() * total;
  double cumulative = 0.0;
  std::size_t last_positive = 0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (weights[i] <= 0.0) continue;
    last_positive = i;
    cumulative += weights[i];
    if (target < cumulative) return internal::Result(inst, i);
  }
  // Rounding left target at or past the final cumulative sum.
  return internal::Result(inst, last_positive);
}

// Visits outcomes in a uniformly random order (Fisher-Yates) and returns the
// first whose coin, with heads probability exp(lambda (q_r - q*)), lands
// heads. The maximizer's coin has probability exactly 1, so the loop always
// returns.
inline SelectionResult permute_and_flip(const ValidatedInstance& inst,
                                        RngState& rng,
                                        MechanismTrace* trace = nullptr) {
  const std::size_t k = inst.size();
  std::vector<std::size_t> order(k);
  std::iota(order.begin(), order.end(), std::size_t{0});
  for (std::size_t i = k; i > 1; --i) {
    const std::size_t j = rng.UniformIndex(i);
    std::swap(order[i - 1], order[j]);
  }
  if (trace != nullptr) {
    trace->order = order;
    trace->coins.clear();
  }
  for (std::size_t r : order) {
    const double p = std::exp(inst.rate() * (inst.scores()[r] - inst.best_score()));
    if (trace != nullptr) trace->coins.push_back(p);
    if (rng.Bernoulli(p)) return internal::Result(inst, r);
  }
  assert(false && "maximizer coin has probability 1");
  return internal::Result(inst, order.back());
}

// Intermediate algorithm A: v_i = q_i + Expo(lambda), S = {i : v_i >= q*},
// return a uniformly random member of S.
inline SelectionResult intermediate_a(const ValidatedInstance& inst,
                                      RngState& rng,
                                      MechanismTrace* trace = nullptr) {
  const auto noise = NoiseKind::Exponential(inst.rate());
  auto v = internal::NoisyScores(inst, noise, rng);
  std::vector<std::size_t> members;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (v[i] >= inst.best_score()) members.push_back(i);
  }
  if (members.empty()) {
    throw Error(ErrorCode::kInternalInvariant,
                "internal invariant violated: candidate set is empty");
  }
  const std::size_t pick = members[rng.UniformIndex(members.size())];
  if (trace != nullptr) {
    trace->noisy = std::move(v);
    trace->candidates = std::move(members);
  }
  return internal::Result(inst, pick);
}

// Intermediate algorithm B: cap noisy scores at q*, draw an independent
// tie-break z_i for every i, and return argmax over S' = {i : capped = q*}
// of capped_i + z_i. All z_i are drawn, including those outside S', so the
// draw sequence follows the pseudocode.
inline SelectionResult intermediate_b(const ValidatedInstance& inst,
                                      RngState& rng,
                                      MechanismTrace* trace = nullptr) {
  const auto noise = NoiseKind::Exponential(inst.rate());
  const double best = inst.best_score();
  const std::size_t k = inst.size();
  std::vector<double> capped(k);
  std::vector<double> z(k);
  for (std::size_t i = 0; i < k; ++i) {
    capped[i] = std::min(best, inst.scores()[i] + sample(noise, rng));
    z[i] = sample(noise, rng);
  }
  std::optional<std::size_t> winner;
  std::vector<std::size_t> members;
  for (std::size_t i = 0; i < k; ++i) {
    if (capped[i] != best) continue;
    members.push_back(i);
    if (!winner || capped[i] + z[i] > capped[*winner] + z[*winner]) winner = i;
  }
  if (!winner) {
    throw Error(ErrorCode::kInternalInvariant,
                "internal invariant violated: capped candidate set is empty");
  }
  if (trace != nullptr) {
    trace->noisy = std::move(capped);
    trace->tiebreak = std::move(z);
    trace->candidates = std::move(members);
  }
  return internal::Result(inst, *winner);
}

struct ArgmaxGap {
  std::size_t index = 0;
  double gap = 0.0;
  bool single_outcome = false;
};

// Argmax (smallest index on ties) and the difference between the top two
// values. The top value itself is deliberately not returned: releasing the
// noisy maximum costs extra privacy, the gap does not.
inline ArgmaxGap argmax_with_gap(std::span<const double> noisy_values) {
  if (noisy_values.empty()) {
    throw Error(ErrorCode::kEmptySequence, "argmax of an empty sequence");
  }
  const std::size_t best = internal::ArgmaxSmallestIndex(noisy_values);
  if (noisy_values.size() == 1) return {best, 0.0, true};
  double second = -INFINITY;
  for (std::size_t i = 0; i < noisy_values.size(); ++i) {
    if (i != best) second = std::max(second, noisy_values[i]);
  }
  return {best, noisy_values[best] - second, false};
}

inline GapResult report_noisy_max_with_gap(const ValidatedInstance& inst,
                                           NoiseKind::Family family,
                                           RngState& rng) {
  if (inst.size() < 2) {
    throw Error(ErrorCode::kNeedAtLeastTwoOutcomes,
                "gap release needs at least two outcomes");
  }
  const auto v = internal::NoisyScores(inst, NoiseFor(inst, family), rng);
  const ArgmaxGap g = argmax_with_gap(v);
  return {g.index, inst.labels()[g.index], g.gap, g.single_outcome};
}

inline SelectionResult run_mechanism(Mechanism m, const ValidatedInstance& inst,
                                     RngState& rng) {
  switch (m) {
    case Mechanism::kPermuteAndFlip:
      return permute_and_flip(inst, rng);
    case Mechanism::kNoisyMaxExponential:
      return report_noisy_max(inst, NoiseKind::Family::kExponential, rng);
    case Mechanism::kNoisyMaxLaplace:
      return report_noisy_max(inst, NoiseKind::Family::kLaplace, rng);
    case Mechanism::kNoisyMaxGumbel:
      return report_noisy_max(inst, NoiseKind::Family::kGumbel, rng);
    case Mechanism::kExponentialMechanism:
      return exponential_mechanism(inst, rng);
    case Mechanism::kIntermediateA:
      return intermediate_a(inst, rng);
    case Mechanism::kIntermediateB:
      return intermediate_b(inst, rng);
  }
  return permute_and_flip(inst, rng);
}

}  // namespace privsel
