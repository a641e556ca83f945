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

// Exact and empirical output distributions of the selection mechanisms.
//
// Three independent routes cover exponential-noise Report Noisy Max and
// Permute-and-Flip, which share one distribution:
//   pf_exact_distribution        enumerates every candidate set S of the
//                                "flip every coin, pick uniformly from the
//                                heads" representation;
//   rnm_expo_exact_distribution  evaluates the win-probability integral in
//                                closed form by inclusion-exclusion;
//   rnm_exact_quadrature         integrates the same win probability
//                                numerically, for any noise family.
// All summations run in a fixed order, so results are bit-reproducible.

#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "privsel/core.hpp"
#include "privsel/error.hpp"
#include "privsel/mechanisms.hpp"
#include "privsel/noise.hpp"

namespace privsel {

inline constexpr std::size_t kMaxEnumerationOutcomes = 20;
inline constexpr std::size_t kMaxQuadratureOutcomes = 64;
inline constexpr double kQuadratureAbsTolerance = 1e-9;

namespace internal {

inline void RequireEnumerable(const ValidatedInstance& inst) {
  if (inst.size() > kMaxEnumerationOutcomes) {
    throw Error(ErrorCode::kTooManyOutcomesForEnumeration,
                std::to_string(inst.size()) + " outcomes exceed the limit of " +
                    std::to_string(kMaxEnumerationOutcomes));
  }
}

// exp(lambda (q_i - q*)): the Permute-and-Flip heads probabilities.
inline std::vector<double> CoinProbabilities(const ValidatedInstance& inst) {
  std::vector<double> p(inst.size());
  for (std::size_t i = 0; i < p.size(); ++i) {
    p[i] = std::exp(inst.rate() * (inst.scores()[i] - inst.best_score()));
  }
  return p;
}

}  // namespace internal

// Closed form of the exponential mechanism, evaluated in shifted form.
inline ProbabilityTable em_exact_distribution(const ValidatedInstance& inst) {
  auto weights = internal::CoinProbabilities(inst);
  double total = 0.0;
  for (double w : weights) total += w;
  for (double& w : weights) w /= total;
  return MakeTable(inst.labels(), std::move(weights),
                   {Provenance::Kind::kExactClosedForm});
}

// Permute-and-Flip by enumeration. Each outcome i enters the heads set S
// independently with probability p_i; the mechanism returns a uniform member
// of S. For every subset S this adds Pr[S] / |S| to each member.
inline ProbabilityTable pf_exact_distribution(const ValidatedInstance& inst) {
  internal::RequireEnumerable(inst);
  const std::size_t k = inst.size();
  const auto p = internal::CoinProbabilities(inst);
  std::vector<double> out(k, 0.0);
  const std::uint64_t subsets = std::uint64_t{1} << k;
  for (std::uint64_t mask = 1; mask < subsets; ++mask) {
    double prob = 1.0;
    for (std::size_t j = 0; j < k; ++j) {
      prob *= (mask >> j) & 1u ? p[j] : 1.0 - p[j];
    }
    if (prob == 0.0) continue;
    const double share = prob / std::popcount(mask);
    for (std::size_t j = 0; j < k; ++j) {
      if ((mask >> j) & 1u) out[j] += share;
    }
  }
  return MakeTable(inst.labels(), std::move(out),
                   {Provenance::Kind::kExactEnumeration});
}

// Report Noisy Max with exponential noise, in closed form:
//   P(i) = sum_{T subset of [k]\{i}} (-1)^|T|
//          exp(lambda [(q_i - q*) + sum_{j in T} (q_j - q*)]) / (|T| + 1),
// the inclusion-exclusion expansion of
//   int_{q*}^inf lambda e^{-lambda (v - q_i)} prod_{j != i} (1 - e^{-lambda (v - q_j)}) dv.
// Every exponent is <= 0, so each term lies in [-1, 1].
inline ProbabilityTable rnm_expo_exact_distribution(const ValidatedInstance& inst) {
  internal::RequireEnumerable(inst);
  const std::size_t k = inst.size();
  std::vector<double> shifted(k);
  for (std::size_t j = 0; j < k; ++j) {
    shifted[j] = inst.rate() * (inst.scores()[j] - inst.best_score());
  }
  // exponent_sum[mask] = sum of shifted[j] over j in mask.
  const std::uint64_t subsets = std::uint64_t{1} << k;
  std::vector<double> exponent_sum(subsets, 0.0);
  for (std::uint64_t mask = 1; mask < subsets; ++mask) {
    const auto low = static_cast<std::size_t>(std::countr_zero(mask));
    exponent_sum[mask] = exponent_sum[mask & (mask - 1)] + shifted[low];
  }
  std::vector<double> out(k, 0.0);
  for (std::size_t i = 0; i < k; ++i) {
    const std::uint64_t bit = std::uint64_t{1} << i;
    double total = 0.0;
    for (std::uint64_t mask = 0; mask < subsets; ++mask) {
      if (mask & bit) continue;
      const int size = std::popcount(mask);
      const double term =
          std::exp(shifted[i] + exponent_sum[mask]) / (size + 1);
      total += size % 2 == 0 ? term : -term;
    }
    out[i] = total;
  }
  return MakeTable(inst.labels(), std::move(out),
                   {Provenance::Kind::kExactClosedForm});
}

namespace internal {

// Integration window outside which every density and CDF factor carries
// less than ~1e-16 of tail mass.
inline std::pair<double, double> QuadratureWindow(const ValidatedInstance& inst,
                                                  const NoiseKind& noise) {
  constexpr double kTail = 1e-16;
  const auto [lo_it, hi_it] =
      std::minmax_element(inst.scores().begin(), inst.scores().end());
  const double a = noise.parameter();
  switch (noise.family()) {
    case NoiseKind::Family::kExponential:
      // No outcome can win below q*: the maximizer's CDF is zero there.
      return {*hi_it, *hi_it - std::log(kTail) / a};
    case NoiseKind::Family::kLaplace:
      return {*lo_it + a * std::log(2.0 * kTail),
              *hi_it - a * std::log(2.0 * kTail)};
    case NoiseKind::Family::kGumbel:
      return {*lo_it - a * std::log(-std::log(kTail)),
              *hi_it - a * std::log(kTail)};
  }
  return {*lo_it, *hi_it};
}

}  // namespace internal

// Report Noisy Max distribution by adaptive Gauss-Kronrod quadrature of
//   P(i) = int f(v - q_i) prod_{j != i} F(v - q_j) dv
// for any noise family, renormalized. The window is split at every score so
// each panel is smooth. Throws QuadratureNonConvergence if the accumulated
// error estimate for any entry exceeds 1e-9.
inline ProbabilityTable rnm_exact_quadrature(const ValidatedInstance& inst,
                                             NoiseKind::Family family) {
  if (inst.size() > kMaxQuadratureOutcomes) {
    throw Error(ErrorCode::kTooManyOutcomesForEnumeration,
                std::to_string(inst.size()) + " outcomes exceed the limit of " +
                    std::to_string(kMaxQuadratureOutcomes));
  }
  const NoiseKind noise = NoiseFor(inst, family);
  const auto scores = inst.scores();
  const std::size_t k = scores.size();
  const auto [lo, hi] = internal::QuadratureWindow(inst, noise);

  // Breakpoints at every score, then panels no wider than one noise scale.
  const double width = family == NoiseKind::Family::kExponential
                           ? 1.0 / noise.parameter()
                           : noise.parameter();
  std::vector<double> knots{lo, hi};
  for (double q : scores) {
    if (q > lo && q < hi) knots.push_back(q);
  }
  std::sort(knots.begin(), knots.end());
  knots.erase(std::unique(knots.begin(), knots.end()), knots.end());
  std::vector<double> panels{knots.front()};
  for (std::size_t s = 1; s < knots.size(); ++s) {
    const double a = knots[s - 1];
    const double b = knots[s];
    const int pieces = std::max(1, static_cast<int>(std::ceil((b - a) / width)));
    for (int m = 1; m < pieces; ++m) panels.push_back(a + (b - a) * m / pieces);
    panels.push_back(b);
  }

  using Integrator = boost::math::quadrature::gauss_kronrod<double, 15>;
  std::vector<double> out(k, 0.0);
  for (std::size_t i = 0; i < k; ++i) {
    auto integrand = [&](double v) {
      double value = pdf(noise, v - scores[i]);
      for (std::size_t j = 0; j < k && value != 0.0; ++j) {
        if (j != i) value *= cdf(noise, v - scores[j]);
      }
      return value;
    };
    double total = 0.0;
    double error_total = 0.0;
    for (std::size_t s = 1; s < panels.size(); ++s) {
      double error = 0.0;
      total += Integrator::integrate(integrand, panels[s - 1], panels[s], 12,
                                     1e-11, &error);
      error_total += error;
    }
    if (!(error_total <= kQuadratureAbsTolerance)) {
      throw Error(ErrorCode::kQuadratureNonConvergence,
                  "entry " + std::to_string(i) + " reached error estimate " +
                      std::to_string(error_total));
    }
    out[i] = total;
  }
  double sum = 0.0;
  for (double v : out) sum += v;
  for (double& v : out) v /= sum;
  return MakeTable(inst.labels(), std::move(out),
                   {Provenance::Kind::kQuadrature});
}

// Exact table for mechanisms that have one: pf, rnm-expo and em.
inline ProbabilityTable exact_distribution(Mechanism m,
                                           const ValidatedInstance& inst) {
  switch (m) {
    case Mechanism::kPermuteAndFlip:
      return pf_exact_distribution(inst);
    case Mechanism::kNoisyMaxExponential:
      return rnm_expo_exact_distribution(inst);
    case Mechanism::kExponentialMechanism:
      return em_exact_distribution(inst);
    default:
      throw Error(ErrorCode::kUnsupportedOracle,
                  "no exact oracle for mechanism '" +
                      std::string(MechanismName(m)) +
                      "' (exact mode supports pf, rnm-expo, em)");
  }
}

// Quadrature table for the Report Noisy Max variants.
inline ProbabilityTable quadrature_distribution(Mechanism m,
                                                const ValidatedInstance& inst) {
  switch (m) {
    case Mechanism::kNoisyMaxExponential:
      return rnm_exact_quadrature(inst, NoiseKind::Family::kExponential);
    case Mechanism::kNoisyMaxLaplace:
      return rnm_exact_quadrature(inst, NoiseKind::Family::kLaplace);
    case Mechanism::kNoisyMaxGumbel:
      return rnm_exact_quadrature(inst, NoiseKind::Family::kGumbel);
    default:
      throw Error(ErrorCode::kUnsupportedOracle,
                  "no quadrature oracle for mechanism '" +
                      std::string(MechanismName(m)) +
                      "' (quadrature mode supports rnm-expo, rnm-laplace, "
                      "rnm-gumbel)");
  }
}

inline std::vector<std::uint64_t> empirical_counts(Mechanism m,
                                                   const ValidatedInstance& inst,
                                                   std::uint64_t n,
                                                   std::uint64_t seed) {
  RngState rng(seed);
  std::vector<std::uint64_t> counts(inst.size(), 0);
  for (std::uint64_t t = 0; t < n; ++t) {
    ++counts[run_mechanism(m, inst, rng).index];
  }
  return counts;
}

// Frequency table of n independent runs drawn from one generator seeded
// with `seed`.
inline ProbabilityTable empirical_distribution(Mechanism m,
                                               const ValidatedInstance& inst,
                                               std::uint64_t n,
                                               std::uint64_t seed) {
  if (n < 1) {
    throw Error(ErrorCode::kInvalidArgument, "need at least one sample");
  }
  const auto counts = empirical_counts(m, inst, n, seed);
  std::vector<double> freq(counts.size());
  for (std::size_t i = 0; i < counts.size(); ++i) {
    freq[i] = static_cast<double>(counts[i]) / static_cast<double>(n);
  }
  return MakeTable(inst.labels(), std::move(freq), Provenance::Empirical(n, seed));
}

inline double tv_distance(const ProbabilityTable& p, const ProbabilityTable& q) {
  RequireSameLabels(p.labels, q.labels);
  double sum = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    sum += std::abs(p.probabilities[i] - q.probabilities[i]);
  }
  return std::clamp(0.5 * sum, 0.0, 1.0);
}

}  // namespace privsel
