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

#include "matskew/mixing.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "matskew/error.hpp"
#include "matskew/specfun.hpp"

namespace matskew::mixing {
namespace {

void require_positive(double v, const char* what)
{
    if (!std::isfinite(v) || v < 0.0) {
        throw DomainError(std::string(what) + " must be positive and finite, got " +
                          std::to_string(v));
    }
    if (v == 0.0) {
        throw BoundaryError(std::string(what) + " = 0 is a boundary case and is not supported");
    }
}

void require_finite(double v, const char* what)
{
    if (!std::isfinite(v)) {
        throw DomainError(std::string(what) + " must be finite");
    }
}

template <typename Draw>
std::vector<double> repeat(std::size_t count, Draw draw)
{
    if (count == 0) {
        throw UsageError("sample count must be at least 1");
    }
    std::vector<double> out;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        out.push_back(draw());
    }
    return out;
}

// Generators below follow Hoermann & Leydold (2014) for the standardized
// density proportional to x^{lambda-1} exp{-omega (x + 1/x) / 2}, lambda >= 0.

double gig_mode(double lambda, double omega)
{
    if (lambda >= 1.0) {
        return (std::sqrt((lambda - 1.0) * (lambda - 1.0) + omega * omega) + (lambda - 1.0)) /
               omega;
    }
    return omega / (std::sqrt((1.0 - lambda) * (1.0 - lambda) + omega * omega) + (1.0 - lambda));
}

// Ratio-of-uniforms without mode shift.
double rou_noshift(RandomStream& rng, double lambda, double omega)
{
    const double t = 0.5 * (lambda - 1.0);
    const double s = 0.25 * omega;
    const double xm = gig_mode(lambda, omega);
    const double nc = t * std::log(xm) - s * (xm + 1.0 / xm);
    const double ym = ((lambda + 1.0) + std::sqrt((lambda + 1.0) * (lambda + 1.0) + omega * omega)) /
                      omega;
    const double um = std::exp(0.5 * (lambda + 1.0) * std::log(ym) - s * (ym + 1.0 / ym) - nc);
    for (;;) {
        const double u = um * rng.uniform();
        const double v = rng.uniform();
        const double x = u / v;
        if (std::log(v) <= t * std::log(x) - s * (x + 1.0 / x) - nc) {
            return x;
        }
    }
}

// Ratio-of-uniforms with mode shift; bounding rectangle from the roots of a cubic.
double rou_shift(RandomStream& rng, double lambda, double omega)
{
    const double t = 0.5 * (lambda - 1.0);
    const double s = 0.25 * omega;
    const double xm = gig_mode(lambda, omega);
    const double nc = t * std::log(xm) - s * (xm + 1.0 / xm);

    const double a = -(2.0 * (lambda + 1.0) / omega + xm);
    const double b = 2.0 * (lambda - 1.0) * xm / omega - 1.0;
    const double c = xm;
    const double p = b - a * a / 3.0;
    const double q = 2.0 * a * a * a / 27.0 - a * b / 3.0 + c;
    const double fi = std::acos(-q / (2.0 * std::sqrt(-(p * p * p) / 27.0)));
    const double fak = 2.0 * std::sqrt(-p / 3.0);
    const double y1 = fak * std::cos(fi / 3.0) - a / 3.0;
    const double y2 = fak * std::cos(fi / 3.0 + 4.0 / 3.0 * std::numbers::pi) - a / 3.0;
    const double uplus = (y1 - xm) * std::exp(t * std::log(y1) - s * (y1 + 1.0 / y1) - nc);
    const double uminus = (y2 - xm) * std::exp(t * std::log(y2) - s * (y2 + 1.0 / y2) - nc);

    for (;;) {
        const double u = uminus + rng.uniform() * (uplus - uminus);
        const double v = rng.uniform();
        const double x = u / v + xm;
        if (x > 0.0 && std::log(v) <= t * std::log(x) - s * (x + 1.0 / x) - nc) {
            return x;
        }
    }
}

// Rejection from a piecewise dominating density; 0 <= lambda < 1, small omega.
double concave_region(RandomStream& rng, double lambda, double omega)
{
    const double xm = gig_mode(lambda, omega);
    const double x0 = omega / (1.0 - lambda);
    const double k0 = std::exp((lambda - 1.0) * std::log(xm) - 0.5 * omega * (xm + 1.0 / xm));
    double area[3];
    area[0] = k0 * x0;
    double k1 = 0.0;
    double k2 = 0.0;
    if (x0 >= 2.0 / omega) {
        area[1] = 0.0;
        k2 = std::pow(x0, lambda - 1.0);
        area[2] = k2 * 2.0 * std::exp(-omega * x0 / 2.0) / omega;
    } else {
        k1 = std::exp(-omega);
        area[1] = (lambda == 0.0)
                      ? k1 * std::log(2.0 / (omega * omega))
                      : k1 / lambda * (std::pow(2.0 / omega, lambda) - std::pow(x0, lambda));
        k2 = std::pow(2.0 / omega, lambda - 1.0);
        area[2] = k2 * 2.0 * std::exp(-1.0) / omega;
    }
    const double total = area[0] + area[1] + area[2];

    for (;;) {
        double v = total * rng.uniform();
        double x;
        double hx;
        if (v <= area[0]) {
            x = x0 * v / area[0];
            hx = k0;
        } else if ((v -= area[0]) <= area[1]) {
            if (lambda == 0.0) {
                x = omega * std::exp(std::exp(omega) * v);
                hx = k1 / x;
            } else {
                x = std::pow(std::pow(x0, lambda) + (lambda / k1 * v), 1.0 / lambda);
                hx = k1 * std::pow(x, lambda - 1.0);
            }
        } else {
            v -= area[1];
            const double start = (x0 > 2.0 / omega) ? x0 : 2.0 / omega;
            x = -2.0 / omega * std::log(std::exp(-omega / 2.0 * start) - v / k2 * omega / 2.0);
            hx = k2 * std::exp(-omega / 2.0 * x);
        }
        const double u = rng.uniform() * hx;
        if (std::log(u) <= (lambda - 1.0) * std::log(x) - omega / 2.0 * (x + 1.0 / x)) {
            return x;
        }
    }
}

}  // namespace

void validate(const GigParams& p)
{
    require_positive(p.a, "GIG a");
    require_positive(p.b, "GIG b");
    require_finite(p.lambda, "GIG lambda");
}

void validate(const GigEtaParams& p)
{
    require_positive(p.omega, "GIG omega");
    require_positive(p.eta, "GIG eta");
    require_finite(p.lambda, "GIG lambda");
}

void validate(const IgParams& p)
{
    require_positive(p.delta, "IG delta");
    require_positive(p.gamma, "IG gamma");
}

void validate(const GammaParams& p)
{
    require_positive(p.shape, "gamma shape");
    require_positive(p.rate, "gamma rate");
}

double gig_logpdf(double y, const GigParams& p)
{
    validate(p);
    if (!std::isfinite(y) || !(y > 0.0)) {
        throw DomainError("gig_logpdf: y must be positive and finite");
    }
    const double omega = std::sqrt(p.a * p.b);
    return 0.5 * p.lambda * std::log(p.a / p.b) + (p.lambda - 1.0) * std::log(y) -
           std::log(2.0) - specfun::log_bessel_k(p.lambda, omega) - 0.5 * (p.a * y + p.b / y);
}

GigMoments gig_moments(const GigParams& p)
{
    validate(p);
    const double omega = std::sqrt(p.a * p.b);
    const double ratio = specfun::bessel_k_ratio(p.lambda, omega);
    const double b_over_a = std::sqrt(p.b / p.a);
    GigMoments m{};
    m.e_w = b_over_a * ratio;
    m.e_winv = ratio / b_over_a - 2.0 * p.lambda / p.b;
    m.e_logw = std::log(b_over_a) + specfun::dlog_bessel_k_dorder(p.lambda, omega);
    return m;
}

GigParams gig_eta_to_ab(const GigEtaParams& p)
{
    validate(p);
    return {p.omega * p.eta, p.omega / p.eta, p.lambda};
}

GigEtaParams gig_ab_to_eta(const GigParams& p)
{
    validate(p);
    return {std::sqrt(p.a * p.b), std::sqrt(p.a / p.b), p.lambda};
}

double ig_logpdf(double y, const IgParams& p)
{
    validate(p);
    if (!std::isfinite(y) || !(y > 0.0)) {
        throw DomainError("ig_logpdf: y must be positive and finite");
    }
    return std::log(p.delta) - 0.5 * std::log(2.0 * std::numbers::pi) + p.delta * p.gamma -
           1.5 * std::log(y) - 0.5 * (p.delta * p.delta / y + p.gamma * p.gamma * y);
}

double gamma_logpdf(double y, const GammaParams& p)
{
    validate(p);
    if (!std::isfinite(y) || !(y > 0.0)) {
        throw DomainError("gamma_logpdf: y must be positive and finite");
    }
    return p.shape * std::log(p.rate) - specfun::log_gamma_fn(p.shape) +
           (p.shape - 1.0) * std::log(y) - p.rate * y;
}

double gig_draw(RandomStream& rng, const GigParams& p)
{
    validate(p);
    // GIG(a, b, lambda) = sqrt(b/a) * X with X standardized at omega = sqrt(ab);
    // negative lambda uses 1/X ~ standardized(-lambda).
    const double omega = std::sqrt(p.a * p.b);
    const double scale = std::sqrt(p.b / p.a);
    const double lambda = std::abs(p.lambda);
    double x;
    if (lambda > 2.0 || omega > 3.0) {
        x = rou_shift(rng, lambda, omega);
    } else if (lambda >= 1.0 - 2.25 * omega * omega || omega > 0.2) {
        x = rou_noshift(rng, lambda, omega);
    } else {
        x = concave_region(rng, lambda, omega);
    }
    return p.lambda < 0.0 ? scale / x : scale * x;
}

double ig_draw(RandomStream& rng, const IgParams& p)
{
    validate(p);
    // Michael, Schucany & Haas transformation with one rejection step.
    const double mean = p.delta / p.gamma;
    const double shape = p.delta * p.delta;
    const double z = rng.normal();
    const double phi = mean * z * z / (2.0 * shape);
    const double x = mean / (1.0 + phi + std::sqrt(phi * (phi + 2.0)));
    return rng.uniform() <= mean / (mean + x) ? x : mean * mean / x;
}

double gamma_draw(RandomStream& rng, const GammaParams& p)
{
    validate(p);
    // Marsaglia & Tsang; shape < 1 boosted by U^{1/shape}.
    const double shape = p.shape < 1.0 ? p.shape + 1.0 : p.shape;
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    double value;
    for (;;) {
        const double z = rng.normal();
        double v = 1.0 + c * z;
        if (v <= 0.0) {
            continue;
        }
        v = v * v * v;
        const double u = rng.uniform();
        if (std::log(u) < 0.5 * z * z + d - d * v + d * std::log(v)) {
            value = d * v;
            break;
        }
    }
    if (p.shape < 1.0) {
        value *= std::pow(rng.uniform(), 1.0 / p.shape);
    }
    return value / p.rate;
}

std::vector<double> gig_sample(RandomStream& rng, const GigParams& p, std::size_t count)
{
    validate(p);
    return repeat(count, [&] { return gig_draw(rng, p); });
}

std::vector<double> ig_sample(RandomStream& rng, const IgParams& p, std::size_t count)
{
    validate(p);
    return repeat(count, [&] { return ig_draw(rng, p); });
}

std::vector<double> gamma_sample(RandomStream& rng, const GammaParams& p, std::size_t count)
{
    validate(p);
    return repeat(count, [&] { return gamma_draw(rng, p); });
}

}  // namespace matskew::mixing
