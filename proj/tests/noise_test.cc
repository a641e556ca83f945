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

#include "privsel/noise.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <utility>
#include <vector>

#include "gtest/gtest.h"
#include "privsel/stats.hpp"

namespace privsel {
namespace {

constexpr int kKsSamples = 100000;
constexpr double kSignificance = 0.001;

TEST(NoiseQuantileTest, MedianValues) {
  EXPECT_NEAR(quantile(NoiseKind::Exponential(1.0), 0.5), 0.693147, 1e-6);
  EXPECT_NEAR(quantile(NoiseKind::Exponential(1.0), 0.5), std::log(2.0), 1e-15);
  EXPECT_EQ(quantile(NoiseKind::Laplace(1.0), 0.5), 0.0);
  EXPECT_NEAR(quantile(NoiseKind::Gumbel(1.0), 0.5), 0.366513, 1e-6);
  EXPECT_NEAR(quantile(NoiseKind::Gumbel(1.0), 0.5), -std::log(std::log(2.0)), 1e-15);
}

TEST(NoiseCdfTest, Values) {
  EXPECT_EQ(cdf(NoiseKind::Exponential(1.0), 0.0), 0.0);
  EXPECT_EQ(cdf(NoiseKind::Exponential(1.0), -3.0), 0.0);
  EXPECT_NEAR(cdf(NoiseKind::Exponential(1.0), 1.0), 0.632121, 1e-6);
  EXPECT_NEAR(cdf(NoiseKind::Exponential(1.0), 1.0), 1.0 - std::exp(-1.0), 1e-15);
  EXPECT_EQ(cdf(NoiseKind::Laplace(1.0), 0.0), 0.5);
}

TEST(NoiseCdfTest, QuantileInvertsCdf) {
  for (const auto& kind : {NoiseKind::Exponential(0.7), NoiseKind::Laplace(1.3),
                           NoiseKind::Gumbel(2.5)}) {
    for (double u = 0.01; u < 1.0; u += 0.01) {
      EXPECT_NEAR(cdf(kind, quantile(kind, u)), u, 1e-12);
    }
  }
}

TEST(NoiseCdfTest, NondecreasingWithLimits) {
  for (const auto& kind : {NoiseKind::Exponential(2.0), NoiseKind::Laplace(0.5),
                           NoiseKind::Gumbel(1.0)}) {
    double prev = 0.0;
    for (double x = -60.0; x <= 60.0; x += 0.01) {
      const double f = cdf(kind, x);
      EXPECT_GE(f, prev);
      EXPECT_GE(f, 0.0);
      EXPECT_LE(f, 1.0);
      prev = f;
    }
    EXPECT_NEAR(cdf(kind, -1e6), 0.0, 1e-300);
    EXPECT_NEAR(cdf(kind, 1e6), 1.0, 1e-15);
  }
}

TEST(NoiseCdfTest, DensityMatchesCdfDerivative) {
  for (const auto& kind : {NoiseKind::Exponential(1.5), NoiseKind::Laplace(0.8),
                           NoiseKind::Gumbel(1.2)}) {
    for (double x = -3.05; x < 6.0; x += 0.1) {
      const double h = 1e-6;
      const double numeric = (cdf(kind, x + h) - cdf(kind, x - h)) / (2 * h);
      EXPECT_NEAR(pdf(kind, x), numeric, 1e-6) << x;
      EXPECT_NEAR(survival(kind, x), 1.0 - cdf(kind, x), 1e-12);
    }
  }
}

TEST(NoiseKindTest, RejectsNonPositiveParameters) {
  EXPECT_THROW(NoiseKind::Exponential(0.0), Error);
  EXPECT_THROW(NoiseKind::Laplace(-1.0), Error);
  EXPECT_THROW(NoiseKind::Gumbel(NAN), Error);
  EXPECT_THROW(NoiseKind::Gumbel(INFINITY), Error);
}

TEST(NoiseSampleTest, KolmogorovSmirnovAgainstCdf) {
  std::uint64_t seed = 100;
  for (const auto& kind :
       {NoiseKind::Exponential(0.25), NoiseKind::Exponential(1.0),
        NoiseKind::Exponential(4.0), NoiseKind::Laplace(0.5),
        NoiseKind::Laplace(1.0), NoiseKind::Laplace(8.0), NoiseKind::Gumbel(0.5),
        NoiseKind::Gumbel(1.0), NoiseKind::Gumbel(3.0)}) {
    RngState rng(seed++);
    std::vector<double> draws(kKsSamples);
    for (double& d : draws) d = sample(kind, rng);
    const auto ks = ks_test(draws, [&](double x) { return cdf(kind, x); },
                            kSignificance);
    EXPECT_TRUE(ks.pass) << "family " << static_cast<int>(kind.family())
                         << " parameter " << kind.parameter() << " D="
                         << ks.statistic << " p=" << ks.p_value;
  }
}

TEST(NoiseSampleTest, ExponentialDrawsAreNonNegative) {
  RngState rng(9);
  const auto kind = NoiseKind::Exponential(3.0);
  for (int i = 0; i < 100000; ++i) EXPECT_GE(sample(kind, rng), 0.0);
}

TEST(NoiseSampleTest, ExponentialIsMemoryless) {
  const auto kind = NoiseKind::Exponential(1.0);
  RngState rng(21);
  std::vector<double> draws(kKsSamples);
  for (double& d : draws) d = sample(kind, rng);
  for (const auto& [s, t] : {std::pair{0.5, 0.5}, std::pair{1.0, 2.0}}) {
    double beyond_s = 0, beyond_st = 0;
    for (double x : draws) {
      if (x > s) ++beyond_s;
      if (x > s + t) ++beyond_st;
    }
    const double expected = std::exp(-t);
    const double conditional = beyond_st / beyond_s;
    const double se = std::sqrt(expected * (1 - expected) / beyond_s);
    EXPECT_LT(std::abs(conditional - expected), 3 * se) << s << "," << t;
  }
}

TEST(RngStateTest, EqualSeedsGiveIdenticalStreams) {
  RngState a(42), b(42), c(43);
  bool differs = false;
  for (int i = 0; i < 1000; ++i) {
    const double x = sample(NoiseKind::Gumbel(1.0), a);
    const double y = sample(NoiseKind::Gumbel(1.0), b);
    EXPECT_EQ(std::bit_cast<std::uint64_t>(x), std::bit_cast<std::uint64_t>(y));
    differs |= x != sample(NoiseKind::Gumbel(1.0), c);
  }
  EXPECT_TRUE(differs);
}

TEST(RngStateTest, UniformStaysInOpenInterval) {
  RngState rng(1);
  for (int i = 0; i < 100000; ++i) {
    const double u = rng.Uniform();
    ASSERT_GT(u, 0.0);
    ASSERT_LT(u, 1.0);
  }
}

TEST(RngStateTest, UniformIndexIsUnbiased) {
  RngState rng(77);
  std::vector<std::uint64_t> counts(6, 0);
  for (int i = 0; i < 600000; ++i) ++counts[rng.UniformIndex(6)];
  const auto table = MakeTable({"0", "1", "2", "3", "4", "5"},
                               std::vector<double>(6, 1.0 / 6.0), {});
  EXPECT_TRUE(chi_square_gof(counts, table, kSignificance).pass);
}

}  // namespace
}  // namespace privsel
