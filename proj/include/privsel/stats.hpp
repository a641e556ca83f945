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

// Goodness-of-fit tests used to check sampled mechanisms against exact
// distributions and noise samplers against their analytic CDFs.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <numeric>
#include <span>
#include <vector>

#include <boost/math/special_functions/gamma.hpp>

#include "privsel/core.hpp"
#include "privsel/error.hpp"

namespace privsel {

struct GofResult {
  double statistic = 0.0;
  // Merged categories with nonzero expected count, minus one.
  int degrees_of_freedom = 0;
  double p_value = 1.0;
  bool pass = true;
};

// Categories whose expected count falls below this are pooled.
inline constexpr double kMinExpectedCount = 5.0;

// Pearson chi-square test of observed counts against a distribution.
//
// Categories with expected count < 5 are pooled into one tail category; if
// the pooled tail is itself below 5 it is merged into the smallest remaining
// category. A category with zero expected probability but nonzero observed
// count makes the statistic infinite. With a single surviving category the
// test is vacuous (statistic 0, p-value 1).
inline GofResult chi_square_gof(std::span<const std::uint64_t> observed,
                                const ProbabilityTable& expected,
                                double significance) {
  if (observed.size() != expected.size()) {
    throw Error(ErrorCode::kLengthMismatch,
                "observed counts and expected table differ in length");
  }
  const double n = static_cast<double>(
      std::accumulate(observed.begin(), observed.end(), std::uint64_t{0}));
  if (n < 1.0) {
    throw Error(ErrorCode::kInvalidArgument, "need at least one observation");
  }

  struct Cell {
    double observed = 0.0;
    double expected = 0.0;
  };
  std::vector<Cell> cells;
  Cell tail;
  int nonzero_categories = 0;
  for (std::size_t i = 0; i < observed.size(); ++i) {
    const double e = n * expected.probabilities[i];
    const double o = static_cast<double>(observed[i]);
    if (e <= 0.0) {
      if (o > 0.0) {
        return {std::numeric_limits<double>::infinity(), 0, 0.0, false};
      }
      continue;
    }
    ++nonzero_categories;
    if (e < kMinExpectedCount) {
      tail.observed += o;
      tail.expected += e;
    } else {
      cells.push_back({o, e});
    }
  }
  if (tail.expected > 0.0) {
    if (tail.expected >= kMinExpectedCount || cells.empty()) {
      cells.push_back(tail);
    } else {
      auto smallest = std::min_element(
          cells.begin(), cells.end(),
          [](const Cell& a, const Cell& b) { return a.expected < b.expected; });
      smallest->observed += tail.observed;
      smallest->expected += tail.expected;
    }
  }
  if (cells.size() == 1 && nonzero_categories > 1) {
    throw Error(ErrorCode::kAllCategoriesMerged,
                "every category merged into one; collect more samples");
  }

  GofResult result;
  for (const Cell& c : cells) {
    const double d = c.observed - c.expected;
    result.statistic += d * d / c.expected;
  }
  result.degrees_of_freedom = static_cast<int>(cells.size()) - 1;
  if (result.degrees_of_freedom == 0) {
    result.p_value = 1.0;
  } else {
    result.p_value = boost::math::gamma_q(0.5 * result.degrees_of_freedom,
                                          0.5 * result.statistic);
  }
  result.pass = result.p_value >= significance;
  return result;
}

struct KsResult {
  double statistic = 0.0;
  double p_value = 1.0;
  bool pass = true;
};

// Survival function of the Kolmogorov limiting distribution,
// Q(x) = 2 sum_{j>=1} (-1)^{j-1} exp(-2 j^2 x^2).
inline double KolmogorovSurvival(double x) {
  if (x < 0.2) return 1.0;
  double sum = 0.0;
  double sign = 1.0;
  for (int j = 1; j <= 100; ++j) {
    const double term = sign * std::exp(-2.0 * j * j * x * x);
    sum += term;
    if (std::abs(term) < 1e-16) break;
    sign = -sign;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

// One-sample Kolmogorov-Smirnov test. The p-value uses the limiting
// distribution with Stephens' small-sample correction.
inline KsResult ks_test(std::vector<double> samples,
                        const std::function<double(double)>& cdf,
                        double significance) {
  if (samples.empty()) {
    throw Error(ErrorCode::kEmptySequence, "KS test needs samples");
  }
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  double d = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double f = cdf(samples[i]);
    d = std::max({d, (i + 1) / n - f, f - i / n});
  }
  const double root_n = std::sqrt(n);
  KsResult result;
  result.statistic = d;
  result.p_value = KolmogorovSurvival((root_n + 0.12 + 0.11 / root_n) * d);
  result.pass = result.p_value >= significance;
  return result;
}

}  // namespace privsel
