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

// Seedable noise samplers for the three Report Noisy Max variants.
//
// Exponential noise is parameterized by rate, Laplace and Gumbel noise by
// scale. Every draw consumes exactly one uniform and goes through the
// analytic quantile function, so sample streams are reproducible and the
// sampled distribution is exactly the one cdf() describes.

#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <string>

#include "privsel/error.hpp"

namespace privsel {

// Single-owner generator state. Not safe to share across threads; parallel
// work uses independently seeded states.
class RngState {
 public:
  explicit RngState(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t NextBits() { return engine_(); }

  // Uniform on the open interval (0, 1) with 53 bits of resolution.
  double Uniform() {
    constexpr double kInv53 = 1.0 / 9007199254740992.0;  // 2^-53
    return (static_cast<double>(NextBits() >> 11) + 0.5) * kInv53;
  }

  // Uniform on [lo, hi).
  double UniformIn(double lo, double hi) {
    return lo + (hi - lo) * (static_cast<double>(NextBits() >> 11) *
                             (1.0 / 9007199254740992.0));
  }

  // Uniform integer in [0, bound), bound > 0, by rejection (no modulo bias).
  std::uint64_t UniformIndex(std::uint64_t bound) {
    const std::uint64_t limit =
        std::numeric_limits<std::uint64_t>::max() -
        std::numeric_limits<std::uint64_t>::max() % bound;
    std::uint64_t x;
    do {
      x = NextBits();
    } while (x >= limit);
    return x % bound;
  }

  bool Bernoulli(double p) { return Uniform() < p; }

 private:
  std::mt19937_64 engine_;
};

class NoiseKind {
 public:
  enum class Family { kExponential, kLaplace, kGumbel };

  static NoiseKind Exponential(double rate) {
    Check(rate, "exponential rate");
    return NoiseKind(Family::kExponential, rate);
  }
  static NoiseKind Laplace(double scale) {
    Check(scale, "laplace scale");
    return NoiseKind(Family::kLaplace, scale);
  }
  static NoiseKind Gumbel(double scale) {
    Check(scale, "gumbel scale");
    return NoiseKind(Family::kGumbel, scale);
  }

  Family family() const noexcept { return family_; }
  // Rate for Exponential, scale for Laplace and Gumbel.
  double parameter() const noexcept { return parameter_; }

 private:
  NoiseKind(Family family, double parameter)
      : family_(family), parameter_(parameter) {}

  static void Check(double v, const char* what) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw Error(ErrorCode::kInvalidNoiseParameter,
                  std::string(what) + " must be positive and finite");
    }
  }

  Family family_;
  double parameter_;
};

inline double cdf(const NoiseKind& kind, double x) {
  const double a = kind.parameter();
  switch (kind.family()) {
    case NoiseKind::Family::kExponential:
      return x <= 0.0 ? 0.0 : -std::expm1(-a * x);
    case NoiseKind::Family::kLaplace:
      return x < 0.0 ? 0.5 * std::exp(x / a) : 1.0 - 0.5 * std::exp(-x / a);
    case NoiseKind::Family::kGumbel:
      return std::exp(-std::exp(-x / a));
  }
  return 0.0;
}

// 1 - cdf, computed without cancellation in the upper tail.
inline double survival(const NoiseKind& kind, double x) {
  const double a = kind.parameter();
  switch (kind.family()) {
    case NoiseKind::Family::kExponential:
      return x <= 0.0 ? 1.0 : std::exp(-a * x);
    case NoiseKind::Family::kLaplace:
      return x < 0.0 ? 1.0 - 0.5 * std::exp(x / a) : 0.5 * std::exp(-x / a);
    case NoiseKind::Family::kGumbel:
      return -std::expm1(-std::exp(-x / a));
  }
  return 0.0;
}

inline double pdf(const NoiseKind& kind, double x) {
  const double a = kind.parameter();
  switch (kind.family()) {
    case NoiseKind::Family::kExponential:
      return x < 0.0 ? 0.0 : a * std::exp(-a * x);
    case NoiseKind::Family::kLaplace:
      return std::exp(-std::abs(x) / a) / (2.0 * a);
    case NoiseKind::Family::kGumbel: {
      const double z = x / a;
      return std::exp(-z - std::exp(-z)) / a;
    }
  }
  return 0.0;
}

// Inverse CDF, u in (0, 1).
inline double quantile(const NoiseKind& kind, double u) {
  const double a = kind.parameter();
  switch (kind.family()) {
    case NoiseKind::Family::kExponential:
      return -std::log1p(-u) / a;
    case NoiseKind::Family::kLaplace:
      return u < 0.5 ? a * std::log(2.0 * u) : -a * std::log(2.0 * (1.0 - u));
    case NoiseKind::Family::kGumbel:
      return -a * std::log(-std::log(u));
  }
  return 0.0;
}

inline double sample(const NoiseKind& kind, RngState& rng) {
  return quantile(kind, rng.Uniform());
}

}  // namespace privsel
