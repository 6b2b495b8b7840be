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
#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "rawisp/error.hpp"
#include "rawisp/learnable_ops.hpp"
#include "test_util.hpp"

using namespace rawisp;

namespace {

Plane Scalar(double v) { return Plane(1, 1, v); }

Plane RandomPlane(std::mt19937_64& rng, std::size_t rows, std::size_t cols,
                  double lo, double hi) {
  std::uniform_real_distribution<double> dist(lo, hi);
  Plane p(rows, cols);
  for (double& v : p.values()) v = dist(rng);
  return p;
}

}  // namespace

TEST_CASE("Erf against a 256-bit reference") {
  CHECK(Erf(0.0) == 0.0);
  CHECK(std::abs(Erf(1.0) - 0.8427007929497149) <= 1e-15);
  CHECK(std::abs(Erf(6.0) - 1.0) <= 1e-12);
  double worst = 0.0;
  for (int k = -60000; k <= 60000; ++k) {
    const double z = k * 1e-4;
    worst = std::max(worst, std::abs(Erf(z) - oracle::MpfrErf(z)));
    CHECK(Erf(-z) == -Erf(z));
  }
  CHECK(worst <= 1e-12);
  // The series oracle agrees with mpfr_erf on a coarse grid.
  for (double z : {-5.5, -2.25, -0.3, 0.7, 1.9, 3.1, 4.4}) {
    CHECK(std::abs(oracle::MpfrErfSeries(z) - oracle::MpfrErf(z)) <= 1e-15);
  }
  CHECK(Erf(40.0) == 1.0);
  CHECK(Erf(-1e300) == -1.0);
}

TEST_CASE("Erfc keeps relative accuracy in the upper tail") {
  for (int k = -600; k <= 2600; ++k) {
    const double z = k * 1e-2;
    const double ref = oracle::MpfrErfc(z);
    CHECK(std::abs(Erfc(z) - ref) <= 1e-12 * std::max(ref, 1e-3));
  }
  CHECK(Erfc(30.0) == 0.0);
  CHECK(Erfc(-30.0) == 2.0);
}

TEST_CASE("gamma forward and backward") {
  CHECK(GammaForward(Scalar(0.25), 0.5)(0, 0) == 0.5);
  CHECK(GammaForward(Scalar(0.0), 0.5)(0, 0) == 0.0);
  const GradRecord g1 = GammaBackward(Scalar(0.25), 1.0, Scalar(1.0));
  CHECK(g1.d_params.size() == 1);
  CHECK(std::abs(g1.d_params[0] - 0.25 * std::log(0.25)) <= 1e-15);
  CHECK(std::abs(g1.d_params[0] + 0.34657359) <= 1e-8);
  const GradRecord g2 = GammaBackward(Scalar(1.0), 2.0, Scalar(1.0));
  CHECK(g2.d_params[0] == 0.0);
  CHECK(g2.d_input(0, 0) == 2.0);
  const GradRecord g0 = GammaBackward(Scalar(0.0), 0.5, Scalar(3.0));
  CHECK(g0.d_params[0] == 0.0);
  CHECK(g0.d_input(0, 0) == 0.0);
  CHECK_ERROR_CODE(GammaForward(Scalar(0.5), 0.0), ErrorCode::kParameterDomain);
  CHECK_ERROR_CODE(GammaForward(Scalar(0.5), -1.0), ErrorCode::kParameterDomain);
  CHECK_ERROR_CODE(GammaForward(Scalar(-0.5), 1.0), ErrorCode::kDomain);
}

TEST_CASE("erf forward and backward") {
  CHECK(ErfForward(Scalar(0.3), 0.3, 0.7)(0, 0) == 0.0);
  const double s = 0.4;
  CHECK(std::abs(ErfForward(Scalar(0.1 + std::sqrt(2.0) * s), 0.1, s)(0, 0) -
                 0.8427007929497149) <= 1e-12);
  CHECK(std::abs(ErfForward(Scalar(0.0), 1.0, 1.0)(0, 0) + 0.6826894921370859) <= 1e-12);

  const GradRecord g = ErfBackward(Scalar(0.5), 0.5, 1.0, Scalar(1.0));
  CHECK(g.d_params.size() == 2);
  CHECK(std::abs(g.d_params[0] + 2.0 / std::sqrt(2.0 * M_PI)) <= 1e-15);
  CHECK(std::abs(g.d_input(0, 0) - 0.7978845608028654) <= 1e-15);
  CHECK(g.d_params[1] == 0.0);

  // x - mu = 6 sigma puts the erf argument at 6/sqrt(2); the slope there is
  // (2/sqrt(pi)) e^-18 / sqrt(2), about 1.2e-8, not below 1e-14.
  const GradRecord six_sigma = ErfBackward(Scalar(7.0), 1.0, 1.0, Scalar(1.0));
  CHECK(std::abs(six_sigma.d_input(0, 0) - std::exp(-18.0) * std::sqrt(2.0 / M_PI)) <= 1e-20);
  // Saturated once the erf argument itself reaches 6.
  for (double sigma : {1.0, 2.0}) {
    const double mu = 0.2;
    const GradRecord tail = ErfBackward(Scalar(mu + 6.0 * std::sqrt(2.0) * sigma), mu, sigma,
                                        Scalar(1.0));
    CHECK(std::abs(tail.d_params[0]) < 1e-14);
    CHECK(std::abs(tail.d_params[1]) < 1e-14);
    CHECK(std::abs(tail.d_input(0, 0)) < 1e-14);
  }

  CHECK_ERROR_CODE(ErfForward(Scalar(0.5), 0.0, 0.0), ErrorCode::kParameterDomain);
  CHECK_ERROR_CODE(ErfForward(Scalar(0.5), NAN, 1.0), ErrorCode::kParameterDomain);
}

TEST_CASE("Yeo-Johnson forward and backward") {
  CHECK(YeoJohnsonForward(Scalar(0.0), 0.35)(0, 0) == 0.0);
  const double expected = (std::pow(2.0, 4.2) - 1.0) / 0.35;
  CHECK(std::abs(YeoJohnsonForward(Scalar(4095.0), 0.35)(0, 0) - expected) <= 1e-11);
  CHECK(std::abs(expected - 49.655) < 1e-3);

  const GradRecord g0 = YeoJohnsonBackward(Scalar(0.0), 0.7, Scalar(2.0));
  CHECK(g0.d_params[0] == 0.0);
  CHECK(g0.d_input(0, 0) == 2.0);
  const GradRecord g1 = YeoJohnsonBackward(Scalar(1.0), 1.0, Scalar(1.0));
  CHECK(std::abs(g1.d_params[0] - (2.0 * std::log(2.0) - 1.0)) <= 1e-15);

  std::mt19937_64 rng(5);
  for (int i = 0; i < 200; ++i) {
    const double x = std::uniform_real_distribution<>(0, 4095)(rng);
    const GradRecord g = YeoJohnsonBackward(Scalar(x), 0.35, Scalar(1.0));
    const double fd = oracle::CentralDiff(
        [x](double l) { return std::expm1(l * std::log1p(x)) / l; }, 0.35, 1e-6);
    CHECK(std::abs(g.d_params[0] - fd) / std::abs(fd) < 1e-5);
  }

  CHECK_ERROR_CODE(YeoJohnsonForward(Scalar(1.0), 0.0), ErrorCode::kParameterDomain);
  CHECK_ERROR_CODE(YeoJohnsonForward(Scalar(-1.0), 0.5), ErrorCode::kDomain);
  CHECK_ERROR_CODE(YeoJohnsonBackward(Scalar(1.0), 0.5, Plane(1, 2, 1.0)),
                   ErrorCode::kShape);
}

TEST_CASE("identities and small-lambda limit") {
  std::mt19937_64 rng(8);
  const Plane unit = RandomPlane(rng, 6, 7, 0.0, 1.0);
  const Plane dn = RandomPlane(rng, 6, 7, 0.0, 4095.0);
  const Plane g = GammaForward(unit, 1.0);
  const Plane y = YeoJohnsonForward(dn, 1.0);
  for (std::size_t i = 0; i < unit.size(); ++i) {
    CHECK(g.values()[i] == unit.values()[i]);
    CHECK(std::abs(y.values()[i] - dn.values()[i]) <= 4 * std::numeric_limits<double>::epsilon() * dn.values()[i]);
  }
  for (int k = 0; k <= 4095; ++k) {
    const double v = YeoJohnsonForward(Scalar(k), 1e-6)(0, 0);
    CHECK(std::abs(v - std::log1p(static_cast<double>(k))) < 1e-4);
  }
}

TEST_CASE("monotonicity and output ranges") {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 20; ++trial) {
    const Plane unit = RandomPlane(rng, 1, 200, 0.0, 1.0);
    const Plane dn = RandomPlane(rng, 1, 200, 0.0, 4095.0);
    const double gamma = std::uniform_real_distribution<>(0.2, 3)(rng);
    const double mu = std::uniform_real_distribution<>(-0.5, 1.5)(rng);
    const double sigma = std::uniform_real_distribution<>(0.2, 2)(rng);
    const double lambda = std::uniform_real_distribution<>(0.05, 2)(rng);
    const Plane outs[3] = {GammaForward(unit, gamma), ErfForward(unit, mu, sigma),
                           YeoJohnsonForward(dn, lambda)};
    const Plane* ins[3] = {&unit, &unit, &dn};
    for (int t = 0; t < 3; ++t) {
      const auto& in = ins[t]->values();
      const auto& out = outs[t].values();
      for (std::size_t i = 0; i < in.size(); ++i) {
        for (std::size_t j = 0; j < in.size(); ++j) {
          if (in[i] < in[j]) CHECK(out[i] < out[j]);
        }
      }
      const auto argmax_in = std::max_element(in.begin(), in.end()) - in.begin();
      const auto argmax_out = std::max_element(out.begin(), out.end()) - out.begin();
      CHECK(argmax_in == argmax_out);
    }
    for (double v : outs[0].values()) CHECK((v >= 0.0 && v <= 1.0));
    for (double v : outs[1].values()) CHECK((v > -1.0 && v < 1.0));
  }
}

TEST_CASE("zero upstream gives zero gradients") {
  std::mt19937_64 rng(3);
  const Plane unit = RandomPlane(rng, 4, 4, 0.0, 1.0);
  const Plane dn = RandomPlane(rng, 4, 4, 0.0, 4095.0);
  const Plane zero(4, 4, 0.0);
  for (const GradRecord& g :
       {GammaBackward(unit, 0.7, zero), ErfBackward(unit, 0.2, 0.5, zero),
        YeoJohnsonBackward(dn, 0.35, zero)}) {
    for (double v : g.d_params) CHECK(v == 0.0);
    for (double v : g.d_input.values()) CHECK(v == 0.0);
  }
}

TEST_CASE("analytic gradients match central differences") {
  std::mt19937_64 rng(4242);
  for (int trial = 0; trial < 300; ++trial) {
    const int which = trial % 3;
    const bool dn_scale = which == 2;
    const Plane x = RandomPlane(rng, 3, 3, 0.0, dn_scale ? 4095.0 : 1.0);
    const Plane up = RandomPlane(rng, 3, 3, 0.5, 1.5);
    std::vector<double> theta;
    if (which == 0) theta = {std::uniform_real_distribution<>(0.2, 3)(rng)};
    if (which == 1) {
      theta = {std::uniform_real_distribution<>(-0.5, 1.5)(rng),
               std::uniform_real_distribution<>(0.2, 2)(rng)};
    }
    if (which == 2) theta = {std::uniform_real_distribution<>(0.05, 2)(rng)};
    const TransformKind kind = static_cast<TransformKind>(which);
    const GradRecord g = Backward(ParamsFromVector(kind, theta), x, up);

    auto loss = [&](const std::vector<double>& t, const Plane& in) {
      const Plane y = Forward(ParamsFromVector(kind, t), in);
      double acc = 0.0;
      for (std::size_t i = 0; i < y.size(); ++i) acc += up.values()[i] * y.values()[i];
      return acc;
    };
    for (std::size_t k = 0; k < theta.size(); ++k) {
      const double h = 1e-6 * std::max(1.0, std::abs(theta[k]));
      const double fd = oracle::CentralDiff(
          [&](double v) {
            auto t = theta;
            t[k] = v;
            return loss(t, x);
          },
          theta[k], h);
      const double denom = std::max(std::abs(fd), std::abs(g.d_params[k]));
      if (denom > 0) CHECK(std::abs(fd - g.d_params[k]) / denom < 1e-5);
    }
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double xi = x.values()[i];
      if (xi < 1e-8) continue;
      const double h = std::min(1e-6 * std::max(1.0, xi), 1e-3 * xi);
      // For erf, difference erf(z) - sign(z) via std::erfc so the tails are
      // not lost to rounding near +-1.
      const bool upper = which != 1 || xi >= theta[0];
      const double fd = oracle::CentralDiff(
          [&](double v) {
            if (which == 1) {
              const double z = (v - theta[0]) / (std::sqrt(2.0) * theta[1]);
              return up.values()[i] * (upper ? -std::erfc(z) : std::erfc(-z));
            }
            return up.values()[i] * ForwardScalar(ParamsFromVector(kind, theta), v);
          },
          xi, h);
      const double an = g.d_input.values()[i];
      const double denom = std::max(std::abs(fd), std::abs(an));
      if (denom > 0) CHECK(std::abs(fd - an) / denom < 1e-5);
    }
  }
}

TEST_CASE("default parameters and names") {
  CHECK(std::get<YeoJohnsonParams>(DefaultParams(TransformKind::kYeoJohnson)).lambda == 0.35);
  CHECK(std::get<GammaParams>(DefaultParams(TransformKind::kGamma)).gamma == 1.0);
  const auto erf = std::get<ErfParams>(DefaultParams(TransformKind::kErf));
  CHECK(erf.mu == 1.0);
  CHECK(erf.sigma == 1.0);
  CHECK(ParseKind("yj") == TransformKind::kYeoJohnson);
  CHECK(ParseKind("yeo-johnson") == TransformKind::kYeoJohnson);
  CHECK(ParseKind("gamma") == TransformKind::kGamma);
  CHECK_FALSE(ParseKind("boxcox").has_value());
  CHECK(ParamNames(TransformKind::kErf).size() == 2);
  const std::vector<double> bad = {1.0, 2.0};
  CHECK_ERROR_CODE(ParamsFromVector(TransformKind::kGamma, bad), ErrorCode::kInvalidArgument);
}
