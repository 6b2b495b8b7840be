/* Copyright 2026 The rawisp Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/
#include <cmath>
#include <limits>
#include <numbers>

#include "rawisp/learnable_ops.hpp"

namespace rawisp {

namespace {

constexpr double kSeriesCutoff = 3.0;

// erf(z) = 2/sqrt(pi) * exp(-z^2) * sum_n 2^n z^(2n+1) / (2n+1)!!
// Every term is positive, so there is no cancellation for z >= 0.
double ErfSeries(double z) {
  const double z2 = z * z;
  double term = z;
  double sum = z;
  for (int n = 1; n < 200; ++n) {
    term *= 2.0 * z2 / (2.0 * n + 1.0);
    sum += term;
    if (term <= sum * std::numeric_limits<double>::epsilon() * 0.25) break;
  }
  return 2.0 * std::numbers::inv_sqrtpi * std::exp(-z2) * sum;
}

// erfc(z) = exp(-z^2)/sqrt(pi) / (z + (1/2)/(z + 1/(z + (3/2)/(z + ...))))
// evaluated with the modified Lentz algorithm. Used for z > kSeriesCutoff.
double ErfcContinuedFraction(double z) {
  constexpr double kTiny = 1e-300;
  double f = z;
  double c = f;
  double d = 0.0;
  for (int n = 1; n < 500; ++n) {
    const double a = 0.5 * n;
    d = z + a * d;
    if (d == 0.0) d = kTiny;
    c = z + a / c;
    if (c == 0.0) c = kTiny;
    d = 1.0 / d;
    const double delta = c * d;
    f *= delta;
    if (std::abs(delta - 1.0) < std::numeric_limits<double>::epsilon()) break;
  }
  return std::numbers::inv_sqrtpi * std::exp(-z * z) / f;
}

}  // namespace

double Erf(double z) {
  if (std::isnan(z)) return z;
  const double a = std::abs(z);
  double value;
  if (a <= kSeriesCutoff) {
    value = ErfSeries(a);
  } else if (a < 27.0) {
    value = 1.0 - ErfcContinuedFraction(a);
  } else {
    value = 1.0;
  }
  return z < 0.0 ? -value : value;
}

double Erfc(double z) {
  if (std::isnan(z)) return z;
  if (z < 0.0) return 1.0 + Erf(-z);
  if (z <= kSeriesCutoff) return 1.0 - ErfSeries(z);
  if (z < 27.0) return ErfcContinuedFraction(z);
  return 0.0;
}

}  // namespace rawisp
