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

#include "matskew/specfun.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include "matskew/error.hpp"

namespace matskew::specfun {
namespace {

constexpr double kEps = 1e-16;
constexpr int kMaxIter = 100000;

void check_args(double order, double x, const char* fn)
{
    if (!std::isfinite(order) || !std::isfinite(x)) {
        throw DomainError(std::string(fn) + ": non-finite argument");
    }
    if (!(x > 0.0)) {
        throw DomainError(std::string(fn) + ": argument must be positive, got " +
                          std::to_string(x));
    }
}

// Taylor coefficients of 1/Gamma(z) = sum_{k>=1} c_k z^k (A&S 6.1.34);
// 1/Gamma(1+z) = sum_{k>=0} c_{k+1} z^k.
constexpr std::array<double, 26> kRecipGamma = {
    1.0,
    0.5772156649015329,
    -0.6558780715202538,
    -0.0420026350340952,
    0.1665386113822915,
    -0.0421977345555443,
    -0.0096219715278770,
    0.0072189432466630,
    -0.0011651675918591,
    -0.0002152416741149,
    0.0001280502823882,
    -0.0000201348547807,
    -0.0000012504934821,
    0.0000011330272320,
    -0.0000002056338417,
    0.0000000061160950,
    0.0000000050020075,
    -0.0000000011812746,
    0.0000000001043427,
    0.0000000000077823,
    -0.0000000000036968,
    0.0000000000005100,
    -0.0000000000000206,
    -0.0000000000000054,
    0.0000000000000014,
    0.0000000000000001,
};

// Temme's auxiliary quantities for |mu| <= 1/2:
//   gam1 = (1/Gamma(1-mu) - 1/Gamma(1+mu)) / (2 mu)
//   gam2 = (1/Gamma(1-mu) + 1/Gamma(1+mu)) / 2
struct TemmeGammas {
    double gam1;
    double gam2;
    double gampl;  // 1/Gamma(1+mu)
    double gammi;  // 1/Gamma(1-mu)
};

TemmeGammas temme_gammas(double mu)
{
    const double mu2 = mu * mu;
    double odd = 0.0;   // sum c_{2j+2} mu^{2j}
    double even = 0.0;  // sum c_{2j+1} mu^{2j}
    for (int k = static_cast<int>(kRecipGamma.size()) - 1; k >= 0; --k) {
        if (k % 2 == 1) {
            odd = odd * mu2 + kRecipGamma[k];
        } else {
            even = even * mu2 + kRecipGamma[k];
        }
    }
    TemmeGammas g{};
    g.gam1 = -odd;
    g.gam2 = even;
    g.gampl = even + mu * odd;
    g.gammi = even - mu * odd;
    return g;
}

// log K_mu(x) and the scaled ratio x * K_{mu+1}(x) / K_mu(x), |mu| <= 1/2.
struct SeedValues {
    double log_k;
    double scaled_ratio;
};

SeedValues temme_series(double mu, double x)
{
    const double x2 = 0.5 * x;
    const double pimu = std::numbers::pi * mu;
    const double fact = std::abs(pimu) < kEps ? 1.0 : pimu / std::sin(pimu);
    double d = -std::log(x2);
    double e = mu * d;
    const double fact2 = std::abs(e) < kEps ? 1.0 : std::sinh(e) / e;
    const TemmeGammas g = temme_gammas(mu);
    double ff = fact * (g.gam1 * std::cosh(e) + g.gam2 * fact2 * d);
    double sum = ff;
    e = std::exp(e);
    double p = 0.5 * e / g.gampl;
    double q = 0.5 / (e * g.gammi);
    double c = 1.0;
    d = x2 * x2;
    double sum1 = p;
    const double mu2 = mu * mu;
    for (int i = 1; i <= kMaxIter; ++i) {
        ff = (i * ff + p + q) / (i * static_cast<double>(i) - mu2);
        c *= d / i;
        p /= i - mu;
        q /= i + mu;
        const double del = c * ff;
        sum += del;
        sum1 += c * (p - i * ff);
        if (std::abs(del) < std::abs(sum) * kEps) {
            break;
        }
    }
    // K_mu = sum, K_{mu+1} = 2 sum1 / x.
    return {std::log(sum), 2.0 * sum1 / sum};
}

// Steed's continued fraction (Thompson-Barnett CF2), x >= 2.
SeedValues steed_cf2(double mu, double x)
{
    double b = 2.0 * (1.0 + x);
    double d = 1.0 / b;
    double h = d;
    double delh = d;
    double q1 = 0.0;
    double q2 = 1.0;
    const double a1 = 0.25 - mu * mu;
    double q = a1;
    double c = a1;
    double a = -a1;
    double s = 1.0 + q * delh;
    for (int i = 2; i <= kMaxIter; ++i) {
        a -= 2 * (i - 1);
        c = -a * c / i;
        const double qnew = (q1 - b * q2) / a;
        q1 = q2;
        q2 = qnew;
        q += c * qnew;
        b += 2.0;
        d = 1.0 / (b + a * d);
        delh = (b * d - 1.0) * delh;
        h += delh;
        const double dels = q * delh;
        s += dels;
        if (std::abs(dels / s) < kEps) {
            break;
        }
    }
    h *= a1;
    const double log_k = 0.5 * std::log(std::numbers::pi / (2.0 * x)) - x - std::log(s);
    return {log_k, mu + x + 0.5 - h};
}

SeedValues seed_values(double mu, double x)
{
    return x < 2.0 ? temme_series(mu, x) : steed_cf2(mu, x);
}

// log K_nu(x) for nu >= 0, plus the ratio K_{nu+1}/K_nu in log form.
struct NonNegativeOrder {
    double log_k;
    double log_ratio;
};

NonNegativeOrder eval_nonnegative(double nu, double x)
{
    const double steps = std::floor(nu + 0.5);
    const double mu = nu - steps;
    const SeedValues seed = seed_values(mu, x);
    const double log_x = std::log(x);
    // s_j = x * K_{mu+j+1} / K_{mu+j};  s_j = x^2 / s_{j-1} + 2 (mu + j).
    double s = seed.scaled_ratio;
    double log_k = seed.log_k;
    const long n = static_cast<long>(steps);
    for (long j = 1; j <= n; ++j) {
        log_k += std::log(s) - log_x;
        s = x * x / s + 2.0 * (mu + static_cast<double>(j));
    }
    return {log_k, std::log(s) - log_x};
}

}  // namespace

double log_bessel_k(double order, double x)
{
    check_args(order, x, "log_bessel_k");
    return eval_nonnegative(std::abs(order), x).log_k;
}

double bessel_k_ratio(double order, double x)
{
    check_args(order, x, "bessel_k_ratio");
    if (order >= 0.0) {
        return std::exp(eval_nonnegative(order, x).log_ratio);
    }
    if (order <= -1.0) {
        // K_{order+1}/K_order = K_{|order|-1}/K_{|order|}.
        return std::exp(-eval_nonnegative(-order - 1.0, x).log_ratio);
    }
    return std::exp(log_bessel_k(order + 1.0, x) - log_bessel_k(order, x));
}

double order_derivative_step(double order)
{
    return std::max(1e-5, 1e-5 * std::abs(order));
}

double dlog_bessel_k_dorder(double order, double x)
{
    check_args(order, x, "dlog_bessel_k_dorder");
    const double h = order_derivative_step(order);
    return (log_bessel_k(order + h, x) - log_bessel_k(order - h, x)) / (2.0 * h);
}

double digamma(double x)
{
    if (!std::isfinite(x) || !(x > 0.0)) {
        throw DomainError("digamma: argument must be positive and finite");
    }
    double result = 0.0;
    while (x < 10.0) {
        result -= 1.0 / x;
        x += 1.0;
    }
    const double inv = 1.0 / x;
    const double inv2 = inv * inv;
    // Bernoulli tail: -sum B_{2k} / (2k x^{2k}).
    const double tail =
        inv2 * (1.0 / 12.0 -
                inv2 * (1.0 / 120.0 -
                        inv2 * (1.0 / 252.0 -
                                inv2 * (1.0 / 240.0 - inv2 * (1.0 / 132.0 - inv2 * (691.0 / 32760.0))))));
    return result + std::log(x) - 0.5 * inv - tail;
}

double trigamma(double x)
{
    if (!std::isfinite(x) || !(x > 0.0)) {
        throw DomainError("trigamma: argument must be positive and finite");
    }
    double result = 0.0;
    while (x < 10.0) {
        result += 1.0 / (x * x);
        x += 1.0;
    }
    const double inv = 1.0 / x;
    const double inv2 = inv * inv;
    // 1/x + 1/(2x^2) + sum B_{2k} / x^{2k+1}
    const double tail =
        inv * inv2 *
        (1.0 / 6.0 - inv2 * (1.0 / 30.0 - inv2 * (1.0 / 42.0 - inv2 * (1.0 / 30.0 - inv2 * (5.0 / 66.0)))));
    return result + inv + 0.5 * inv2 + tail;
}

double log_gamma_fn(double x)
{
    if (!std::isfinite(x) || !(x > 0.0)) {
        throw DomainError("log_gamma_fn: argument must be positive and finite");
    }
    double shift = 1.0;
    while (x < 10.0) {
        shift *= x;
        x += 1.0;
    }
    const double inv = 1.0 / x;
    const double inv2 = inv * inv;
    const double series =
        inv * (1.0 / 12.0 -
               inv2 * (1.0 / 360.0 -
                       inv2 * (1.0 / 1260.0 -
                               inv2 * (1.0 / 1680.0 -
                                       inv2 * (1.0 / 1188.0 -
                                               inv2 * (691.0 / 360360.0 - inv2 / 156.0))))));
    return (x - 0.5) * std::log(x) - x + 0.5 * std::log(2.0 * std::numbers::pi) + series -
           std::log(shift);
}

}  // namespace matskew::specfun
