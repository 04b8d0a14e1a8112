/*
 * Copyright 2026 The matskew Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "matskew/error.hpp"
#include "matskew/specfun.hpp"
#include "oracles.hpp"

using namespace matskew;
using namespace matskew::specfun;

namespace {

constexpr double kEuler = 0.57721566490153286061;

// K_{n+1/2}(x) = sqrt(pi/(2x)) e^{-x} sum_{k=0}^{n} (n+k)! / (k! (n-k)! (2x)^k)
double half_order_k(int n, double x)
{
    double sum = 0.0;
    for (int k = 0; k <= n; ++k) {
        sum += std::tgamma(n + k + 1.0) / (std::tgamma(k + 1.0) * std::tgamma(n - k + 1.0)) /
               std::pow(2.0 * x, k);
    }
    return std::sqrt(std::numbers::pi / (2.0 * x)) * std::exp(-x) * sum;
}

}  // namespace

TEST_CASE("quadrature oracle reproduces the half-order closed form")
{
    for (double x : {1e-3, 0.3, 1.0, 5.0, 40.0}) {
        CHECK(testing::quad_log_bessel_k(0.5, x) ==
              doctest::Approx(std::log(half_order_k(0, x))).epsilon(1e-13));
        CHECK(testing::quad_log_bessel_k(2.5, x) ==
              doctest::Approx(std::log(half_order_k(2, x))).epsilon(1e-13));
    }
}

TEST_CASE("log_bessel_k examples")
{
    const double expected = std::log(std::sqrt(std::numbers::pi / 2.0) * std::exp(-1.0));
    CHECK(log_bessel_k(0.5, 1.0) == doctest::Approx(expected).epsilon(1e-14));
    CHECK(log_bessel_k(0.5, 1.0) == doctest::Approx(-0.7742086).epsilon(1e-7));
    CHECK(log_bessel_k(-2.3, 1.7) == log_bessel_k(2.3, 1.7));
    CHECK(std::abs(log_bessel_k(2.0, 2.0) - testing::quad_log_bessel_k(2.0, 2.0)) < 1e-12);
}

TEST_CASE("log_bessel_k agrees with quadrature across regimes")
{
    for (double nu : {0.0, 0.1, 0.49, 0.5, 0.51, 1.0, 3.7, -6.5, 12.25, 40.0}) {
        for (double x : {1e-6, 1e-3, 0.5, 1.999, 2.0, 2.001, 7.0, 60.0, 900.0}) {
            INFO("nu=" << nu << " x=" << x);
            CHECK(std::abs(log_bessel_k(nu, x) - testing::quad_log_bessel_k(nu, x)) < 1e-10);
        }
    }
}

TEST_CASE("log_bessel_k stays finite at extreme orders and arguments")
{
    // K_500(1e-6) overflows a double by thousands of decades.
    const double big = log_bessel_k(500.0, 1e-6);
    CHECK(std::isfinite(big));
    // Leading small-argument term: log(Gamma(nu)/2) + nu log(2/x).
    CHECK(big == doctest::Approx(std::lgamma(500.0) - std::log(2.0) + 500.0 * std::log(2e6))
                     .epsilon(1e-9));
    // K_0(1e4) underflows; log is about -x.
    const double tiny = log_bessel_k(0.0, 1e4);
    CHECK(tiny == doctest::Approx(0.5 * std::log(std::numbers::pi / 2e4) - 1e4 +
                                  std::log1p(-1.0 / 8e4))
                      .epsilon(1e-12));
    CHECK(std::abs(log_bessel_k(500.0, 1e4) - testing::quad_log_bessel_k(500.0, 1e4)) < 1e-9);
    CHECK(std::isfinite(log_bessel_k(3.5, 1e-300)));
}

TEST_CASE("half-order closed forms")
{
    for (int n = 0; n <= 3; ++n) {
        for (double x : {0.01, 0.7, 2.0, 3.3, 25.0}) {
            const double k = std::exp(log_bessel_k(n + 0.5, x));
            CHECK(k == doctest::Approx(half_order_k(n, x)).epsilon(1e-10));
        }
    }
}

TEST_CASE("order symmetry and recurrence")
{
    for (double nu = -9.7; nu < 10.0; nu += 0.83) {
        for (double x : {0.05, 0.9, 2.5, 11.0}) {
            CHECK(std::abs(log_bessel_k(nu, x) - log_bessel_k(-nu, x)) < 1e-12);
            const double km = std::exp(log_bessel_k(nu - 1, x));
            const double k0 = std::exp(log_bessel_k(nu, x));
            const double kp = std::exp(log_bessel_k(nu + 1, x));
            const double scale = std::abs(kp) + std::abs(km) + std::abs(2 * nu / x * k0);
            CHECK(std::abs(kp - km - 2 * nu / x * k0) < 1e-9 * scale);
        }
    }
}

TEST_CASE("monotonicity in order and argument")
{
    for (double x : {0.01, 1.0, 3.0, 50.0}) {
        double prev = log_bessel_k(0.0, x);
        for (double nu = 0.1; nu < 15.0; nu += 0.1) {
            const double cur = log_bessel_k(nu, x);
            CHECK(cur >= prev);
            prev = cur;
        }
    }
    for (double nu : {-3.0, 0.0, 0.4, 7.0}) {
        double prev = log_bessel_k(nu, 1e-4);
        for (double x = 2e-4; x < 200.0; x *= 1.3) {
            const double cur = log_bessel_k(nu, x);
            CHECK(cur < prev);
            prev = cur;
        }
    }
}

TEST_CASE("bessel_k_ratio")
{
    CHECK(bessel_k_ratio(0.5, 2.0) == doctest::Approx(1.5).epsilon(1e-14));
    for (double x : {0.3, 1.0, 4.0}) {
        const double k0_over_k1 = std::exp(log_bessel_k(0.0, x) - log_bessel_k(1.0, x));
        CHECK(bessel_k_ratio(-1.0, x) == doctest::Approx(k0_over_k1).epsilon(1e-13));
    }
    // Recurrence built from quadrature values: K_4 = K_2 + (2*3/x) K_3.
    const double x = 2.0;
    const double k2 = std::exp(testing::quad_log_bessel_k(2.0, x));
    const double k3 = std::exp(testing::quad_log_bessel_k(3.0, x));
    CHECK(bessel_k_ratio(3.0, x) == doctest::Approx((k2 + 3.0 * k3) / k3).epsilon(1e-12));

    for (double nu = 0.05; nu < 30.0; nu += 1.3) {
        for (double xx : {0.01, 0.5, 3.0, 40.0, 400.0}) {
            const double r = bessel_k_ratio(nu, xx);
            CHECK(r > std::max(1.0, 2.0 * nu / xx));
        }
    }
    for (double nu : {-0.7, -0.2, -3.4}) {
        CHECK(bessel_k_ratio(nu, 1.3) ==
              doctest::Approx(std::exp(log_bessel_k(nu + 1, 1.3) - log_bessel_k(nu, 1.3)))
                  .epsilon(1e-13));
    }
}

TEST_CASE("order derivative")
{
    for (double x : {0.1, 1.0, 9.0}) {
        CHECK(dlog_bessel_k_dorder(0.0, x) == 0.0);
    }
    CHECK(dlog_bessel_k_dorder(1.5, 2.0) == -dlog_bessel_k_dorder(-1.5, 2.0));
    const double oracle = testing::quad_dlog_bessel_k_dorder(2.0, 3.0);
    CHECK(dlog_bessel_k_dorder(2.0, 3.0) == doctest::Approx(oracle).epsilon(1e-6));
    for (double nu : {-6.5, -1.2, 0.7, 4.0, 25.0}) {
        for (double x : {0.02, 1.5, 30.0}) {
            INFO("nu=" << nu << " x=" << x);
            CHECK(dlog_bessel_k_dorder(nu, x) ==
                  doctest::Approx(testing::quad_dlog_bessel_k_dorder(nu, x)).epsilon(1e-6));
        }
    }
}

TEST_CASE("digamma")
{
    const double oracle_one = testing::series_digamma(1.0);
    CHECK(oracle_one == doctest::Approx(-kEuler).epsilon(1e-11));
    CHECK(digamma(1.0) == doctest::Approx(-kEuler).epsilon(1e-14));
    CHECK(digamma(2.0) == doctest::Approx(digamma(1.0) + 1.0).epsilon(1e-14));
    CHECK(digamma(2.0) == doctest::Approx(1.0 - kEuler).epsilon(1e-14));
    CHECK(digamma(0.5) == doctest::Approx(-kEuler - 2.0 * std::log(2.0)).epsilon(1e-14));
    for (double x : {0.013, 0.37, 1.9, 7.5, 33.0, 1e4}) {
        CHECK(digamma(x) == doctest::Approx(testing::series_digamma(x)).epsilon(1e-10));
        CHECK(digamma(x + 1.0) == doctest::Approx(digamma(x) + 1.0 / x).epsilon(1e-13));
    }
    CHECK_THROWS_AS(digamma(0.0), DomainError);
    CHECK_THROWS_AS(digamma(-1.0), DomainError);
}

TEST_CASE("trigamma")
{
    CHECK(trigamma(1.0) == doctest::Approx(std::numbers::pi * std::numbers::pi / 6.0).epsilon(1e-14));
    CHECK(trigamma(0.5) == doctest::Approx(std::numbers::pi * std::numbers::pi / 2.0).epsilon(1e-14));
    for (double x : {0.02, 0.8, 4.4, 19.0, 700.0}) {
        const double h = 1e-4 * x;
        const double fd = (digamma(x + h) - digamma(x - h)) / (2.0 * h);
        CHECK(trigamma(x) == doctest::Approx(fd).epsilon(1e-7));
    }
    CHECK_THROWS_AS(trigamma(0.0), DomainError);
}

TEST_CASE("log_gamma_fn")
{
    CHECK(std::abs(log_gamma_fn(1.0)) < 1e-14);
    CHECK(log_gamma_fn(0.5) == doctest::Approx(0.5 * std::log(std::numbers::pi)).epsilon(1e-14));
    CHECK(log_gamma_fn(5.0) == doctest::Approx(std::log(24.0)).epsilon(1e-14));
    for (double x : {1e-8, 0.2, 3.3, 17.0, 250.0, 1e6}) {
        CHECK(log_gamma_fn(x) == doctest::Approx(std::lgamma(x)).epsilon(1e-12));
    }
    CHECK_THROWS_AS(log_gamma_fn(0.0), DomainError);
}

TEST_CASE("domain errors")
{
    CHECK_THROWS_AS(log_bessel_k(1.0, 0.0), DomainError);
    CHECK_THROWS_AS(log_bessel_k(1.0, -2.0), DomainError);
    CHECK_THROWS_AS(log_bessel_k(NAN, 1.0), DomainError);
    CHECK_THROWS_AS(log_bessel_k(1.0, INFINITY), DomainError);
    CHECK_THROWS_AS(bessel_k_ratio(1.0, 0.0), DomainError);
    CHECK_THROWS_AS(dlog_bessel_k_dorder(1.0, -1.0), DomainError);
}
