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

#include "privsel/core.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <vector>

#include "gtest/gtest.h"
#include "privsel/noise.hpp"

namespace privsel {
namespace {

NeighborPair Pair(std::vector<double> a, std::vector<double> b) {
  return {QualityVector::FromScores(std::move(a)),
          QualityVector::FromScores(std::move(b))};
}

ErrorCode CodeOf(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected an Error";
  return ErrorCode::kInvalidArgument;
}

TEST(ValidateInstanceTest, AcceptsMinimalInstance) {
  const auto inst = validate_instance({{"a"}, {0.0}}, {1.0, 1.0});
  EXPECT_EQ(inst.size(), 1u);
  EXPECT_EQ(inst.best_score(), 0.0);
}

TEST(ValidateInstanceTest, DerivedRate) {
  const auto inst = validate_instance({{"a", "b"}, {1.0, 0.0}}, {2.0, 1.0});
  EXPECT_DOUBLE_EQ(inst.rate(), 1.0);
  EXPECT_DOUBLE_EQ(inst.scale(), 1.0);
  EXPECT_EQ(inst.quality().labels[1], "b");
}

TEST(ValidateInstanceTest, RejectsEachViolatedInvariant) {
  EXPECT_EQ(CodeOf([] { validate_instance({{"a"}, {0.0}}, {0.0, 1.0}); }),
            ErrorCode::kNonPositiveEpsilon);
  EXPECT_EQ(CodeOf([] { validate_instance({{"a"}, {0.0}}, {-1.0, 1.0}); }),
            ErrorCode::kNonPositiveEpsilon);
  EXPECT_EQ(CodeOf([] { validate_instance({{"a"}, {0.0}}, {1.0, 0.0}); }),
            ErrorCode::kNonPositiveSensitivity);
  EXPECT_EQ(CodeOf([] { validate_instance({{}, {}}, {1.0, 1.0}); }),
            ErrorCode::kEmptyOutcomeSet);
  EXPECT_EQ(CodeOf([] {
              validate_instance({{"a", "b"}, {0.0, NAN}}, {1.0, 1.0});
            }),
            ErrorCode::kNonFiniteScore);
  EXPECT_EQ(CodeOf([] {
              validate_instance({{"a"}, {std::numeric_limits<double>::infinity()}},
                                {1.0, 1.0});
            }),
            ErrorCode::kNonFiniteScore);
  EXPECT_EQ(CodeOf([] { validate_instance({{"a", "a"}, {0.0, 1.0}}, {1.0, 1.0}); }),
            ErrorCode::kDuplicateLabel);
  EXPECT_EQ(CodeOf([] { validate_instance({{"a"}, {0.0, 1.0}}, {1.0, 1.0}); }),
            ErrorCode::kLengthMismatch);
  EXPECT_EQ(CodeOf([] { validate_instance({{"a"}, {0.0}}, {NAN, 1.0}); }),
            ErrorCode::kNonPositiveEpsilon);
}

TEST(ValidateInstanceTest, RateTimesScaleIsOne) {
  RngState rng(11);
  for (int t = 0; t < 1000; ++t) {
    const PrivacyParams p{std::exp(rng.UniformIn(-8, 8)),
                          std::exp(rng.UniformIn(-8, 8))};
    ValidateParams(p);
    EXPECT_NEAR(p.rate() * p.scale(), 1.0, 1e-12);
  }
}

TEST(QualityVectorTest, BestScoreIsPermutationInvariant) {
  RngState rng(3);
  for (int t = 0; t < 100; ++t) {
    std::vector<double> s(1 + rng.UniformIndex(10));
    for (double& v : s) v = rng.UniformIn(-100, 100);
    const double best = QualityVector::FromScores(s).best_score();
    EXPECT_EQ(best, *std::max_element(s.begin(), s.end()));
    for (std::size_t i = s.size(); i > 1; --i) {
      std::swap(s[i - 1], s[rng.UniformIndex(i)]);
    }
    EXPECT_EQ(QualityVector::FromScores(s).best_score(), best);
  }
}

TEST(SensitivityTest, Examples) {
  const std::vector<NeighborPair> swap{Pair({1, 0}, {0, 1})};
  EXPECT_EQ(sensitivity_from_pairs(swap), 1.0);
  const std::vector<NeighborPair> same{Pair({5, 3}, {5, 3})};
  EXPECT_EQ(sensitivity_from_pairs(same), 0.0);
  const std::vector<NeighborPair> two{Pair({5, 1}, {4, 2}), Pair({5, 3}, {4, 3})};
  EXPECT_EQ(sensitivity_from_pairs(two), 1.0);
}

TEST(SensitivityTest, EmptyAndMismatchedInputs) {
  EXPECT_EQ(CodeOf([] { sensitivity_from_pairs({}); }), ErrorCode::kEmptyPairList);
  EXPECT_EQ(CodeOf([] { dong_sensitivity_from_pairs({}); }),
            ErrorCode::kEmptyPairList);
  NeighborPair bad{{{"a", "b"}, {0, 1}}, {{"a", "c"}, {0, 1}}};
  EXPECT_EQ(CodeOf([&] { sensitivity_from_pairs({&bad, 1}); }),
            ErrorCode::kLabelMismatch);
}

TEST(SensitivityTest, PermutationInvariantAndMonotoneUnderExtension) {
  RngState rng(5);
  for (int t = 0; t < 50; ++t) {
    std::vector<NeighborPair> pairs;
    const std::size_t k = 1 + rng.UniformIndex(6);
    const std::size_t count = 1 + rng.UniformIndex(8);
    for (std::size_t p = 0; p < count; ++p) {
      std::vector<double> a(k), b(k);
      for (std::size_t i = 0; i < k; ++i) {
        a[i] = rng.UniformIn(-3, 3);
        b[i] = rng.UniformIn(-3, 3);
      }
      pairs.push_back(Pair(a, b));
    }
    const double base = sensitivity_from_pairs(pairs);
    auto shuffled = pairs;
    std::reverse(shuffled.begin(), shuffled.end());
    EXPECT_EQ(sensitivity_from_pairs(shuffled), base);
    pairs.push_back(Pair(std::vector<double>(k, 0.0), std::vector<double>(k, 0.1)));
    EXPECT_GE(sensitivity_from_pairs(pairs), base);
  }
}

TEST(DongSensitivityTest, Examples) {
  const std::vector<NeighborPair> shift{Pair({5, 3}, {4, 2})};
  EXPECT_EQ(dong_sensitivity_from_pairs(shift), 0.0);
  const std::vector<NeighborPair> spread{Pair({5, 1}, {4, 2})};
  EXPECT_EQ(dong_sensitivity_from_pairs(spread), 2.0);
  const std::vector<NeighborPair> same{Pair({5, 3}, {5, 3})};
  EXPECT_EQ(dong_sensitivity_from_pairs(same), 0.0);
}

TEST(DongSensitivityTest, NonNegativeAndZeroForConstantShift) {
  RngState rng(8);
  for (int t = 0; t < 100; ++t) {
    const std::size_t k = 1 + rng.UniformIndex(6);
    std::vector<double> a(k), b(k), shifted(k);
    const double c = std::round(rng.UniformIn(-4, 4));
    for (std::size_t i = 0; i < k; ++i) {
      a[i] = std::round(rng.UniformIn(-50, 50)) / 8;  // exact in binary
      b[i] = rng.UniformIn(-3, 3);
      shifted[i] = a[i] + c;
    }
    const std::vector<NeighborPair> random{Pair(a, b)};
    EXPECT_GE(dong_sensitivity_from_pairs(random), 0.0);
    const std::vector<NeighborPair> constant{Pair(a, shifted)};
    EXPECT_EQ(dong_sensitivity_from_pairs(constant), 0.0);
  }
}

TEST(ProbabilityTableTest, ClampsTinyDriftAndRejectsNonDistributions) {
  const auto t = MakeTable({"a", "b"}, {1.0 + 1e-13, -1e-13},
                           {Provenance::Kind::kExactClosedForm});
  EXPECT_EQ(t.probabilities[0], 1.0);
  EXPECT_EQ(t.probabilities[1], 0.0);
  EXPECT_THROW(MakeTable({"a", "b"}, {0.5, 0.4}, {}), Error);
  EXPECT_THROW(MakeTable({"a", "b"}, {1.5, -0.5}, {}), Error);
  EXPECT_THROW(MakeTable({"a"}, {0.5, 0.5}, {}), Error);
}

}  // namespace
}  // namespace privsel
