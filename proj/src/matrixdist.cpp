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

#include "matskew/matrixdist.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "matskew/error.hpp"
#include "matskew/specfun.hpp"

namespace matskew {
namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void require_positive(double v, const char* what)
{
    if (!std::isfinite(v) || !(v > 0.0)) {
        throw DomainError(std::string(what) + " must be positive and finite");
    }
}

}  // namespace

Family family_of(const MixingLaw& law)
{
    return std::visit(overloaded{[](const GhLaw&) { return Family::gh; },
                                 [](const VgLaw&) { return Family::vg; },
                                 [](const NigLaw&) { return Family::nig; }},
                      law);
}

std::string_view family_name(Family family)
{
    switch (family) {
    case Family::gh:
        return "gh";
    case Family::vg:
        return "vg";
    case Family::nig:
        return "nig";
    }
    return "?";
}

Family parse_family(std::string_view name)
{
    if (name == "gh") {
        return Family::gh;
    }
    if (name == "vg") {
        return Family::vg;
    }
    if (name == "nig") {
        return Family::nig;
    }
    throw UsageError("unknown family '" + std::string(name) + "' (expected gh, vg or nig)");
}

void validate(const MixingLaw& law)
{
    std::visit(overloaded{[](const GhLaw& g) {
                              require_positive(g.omega, "GH omega");
                              if (!std::isfinite(g.lambda)) {
                                  throw DomainError("GH lambda must be finite");
                              }
                          },
                          [](const VgLaw& v) { require_positive(v.gamma, "VG gamma"); },
                          [](const NigLaw& n) { require_positive(n.gamma_tilde, "NIG gamma_tilde"); }},
               law);
}

double mixing_mean(const MixingLaw& law)
{
    validate(law);
    return std::visit(
        overloaded{[](const GhLaw& g) { return specfun::bessel_k_ratio(g.lambda, g.omega); },
                   [](const VgLaw&) { return 1.0; },
                   [](const NigLaw& n) { return 1.0 / n.gamma_tilde; }},
        law);
}

void validate(const MatrixSkewModel& model)
{
    validate(model.params);
    validate(model.mixing);
}

SkewDensity::SkewDensity(const MatrixSkewModel& model)
    : model_((validate(model), model)), scales_(model.params.sigma, model.params.psi)
{
    const double n = static_cast<double>(model.rows());
    const double p = static_cast<double>(model.cols());
    const double np = n * p;
    whitened_a_ = scales_.whiten(model.params.a);
    rho_ = whitened_a_.squaredNorm();
    log_base_ = -0.5 * np * std::log(2.0 * std::numbers::pi) - 0.5 * p * scales_.logdet_sigma() -
                0.5 * n * scales_.logdet_psi();
    std::visit(overloaded{[&](const GhLaw& g) {
                              rho_shift_ = g.omega;
                              delta_shift_ = g.omega;
                              order_ = g.lambda - 0.5 * np;
                              log_normalizer_ = -specfun::log_bessel_k(g.lambda, g.omega);
                          },
                          [&](const VgLaw& v) {
                              rho_shift_ = 2.0 * v.gamma;
                              delta_shift_ = 0.0;
                              order_ = v.gamma - 0.5 * np;
                              log_normalizer_ = std::log(2.0) + v.gamma * std::log(v.gamma) -
                                                specfun::log_gamma_fn(v.gamma);
                          },
                          [&](const NigLaw& g) {
                              rho_shift_ = g.gamma_tilde * g.gamma_tilde;
                              delta_shift_ = 1.0;
                              order_ = -0.5 * (1.0 + np);
                              log_normalizer_ = g.gamma_tilde + std::log(2.0) -
                                                0.5 * std::log(2.0 * std::numbers::pi);
                          }},
               model.mixing);
}

double SkewDensity::logpdf(const Matrix& x) const
{
    require_same_shape(x, model_.rows(), model_.cols(), "X");
    if (!x.allFinite()) {
        throw DomainError("logpdf: X has non-finite entries");
    }
    const Matrix z = scales_.whiten(x - model_.params.m);
    const double delta = z.squaredNorm();
    const double cross = z.cwiseProduct(whitened_a_).sum();
    const double a = rho_ + rho_shift_;
    const double b = delta + delta_shift_;
    double tail;
    if (b > 0.0) {
        tail = 0.5 * order_ * (std::log(b) - std::log(a)) +
               specfun::log_bessel_k(order_, std::sqrt(a * b));
    } else if (order_ > 0.0) {
        // (b/a)^{v/2} K_v(sqrt(ab)) -> Gamma(v) 2^{v-1} a^{-v} as b -> 0.
        tail = specfun::log_gamma_fn(order_) + (order_ - 1.0) * std::log(2.0) - order_ * std::log(a);
    } else {
        throw BoundaryError("density is infinite at X = M (variance-gamma with gamma <= np/2)");
    }
    return log_base_ + cross + log_normalizer_ + tail;
}

mixing::GigParams SkewDensity::posterior_from_delta(double delta) const
{
    const mixing::GigParams p{rho_ + rho_shift_, delta + delta_shift_, order_};
    if (!(p.b > 0.0)) {
        throw BoundaryError("posterior of W is degenerate at X = M (b = 0)");
    }
    return p;
}

mixing::GigParams SkewDensity::posterior(const Matrix& x) const
{
    return posterior_from_delta(quad_delta(x, model_.params.m, scales_));
}

double logpdf(const Matrix& x, const MatrixSkewModel& model)
{
    return SkewDensity(model).logpdf(x);
}

mixing::GigParams posterior_gig(const Matrix& x, const MatrixSkewModel& model)
{
    return SkewDensity(model).posterior(x);
}

Matrix sample_one(RandomStream& rng, const MatrixSkewModel& model, const ScaleFactors& scales)
{
    const double w = std::visit(
        overloaded{[&](const GhLaw& g) { return mixing::gig_draw(rng, {g.omega, g.omega, g.lambda}); },
                   [&](const VgLaw& v) { return mixing::gamma_draw(rng, {v.gamma, v.gamma}); },
                   [&](const NigLaw& n) { return mixing::ig_draw(rng, {1.0, n.gamma_tilde}); }},
        model.mixing);
    const Matrix v = matnorm_sample(rng, Matrix::Zero(model.rows(), model.cols()), scales);
    return model.params.m + w * model.params.a + std::sqrt(w) * v;
}

std::vector<Matrix> sample(RandomStream& rng, const MatrixSkewModel& model, std::size_t count)
{
    validate(model);
    if (count == 0) {
        throw UsageError("sample count must be at least 1");
    }
    const ScaleFactors scales(model.params.sigma, model.params.psi);
    std::vector<Matrix> out;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        out.push_back(sample_one(rng, model, scales));
    }
    return out;
}

double log_mgf(const Matrix& t, const MatrixSkewModel& model)
{
    validate(model);
    const MgfTraces tr = matnorm_mgf_trace(t, model.params);
    const double s = tr.mixing;
    const double log_mw = std::visit(
        overloaded{[&](const GhLaw& g) {
                       const double shrunk = g.omega - 2.0 * s;
                       if (!(shrunk > 0.0)) {
                           throw DomainError("GH MGF requires omega - 2 tr(.) > 0");
                       }
                       return -0.5 * g.lambda * std::log(shrunk / g.omega) +
                              specfun::log_bessel_k(g.lambda, std::sqrt(g.omega * shrunk)) -
                              specfun::log_bessel_k(g.lambda, g.omega);
                   },
                   [&](const VgLaw& v) {
                       if (!(s < v.gamma)) {
                           throw DomainError("VG MGF requires tr(.) < gamma");
                       }
                       return -v.gamma * std::log1p(-s / v.gamma);
                   },
                   [&](const NigLaw& n) {
                       const double g2 = n.gamma_tilde * n.gamma_tilde;
                       const double radicand = 1.0 - 2.0 * s / g2;
                       if (!(radicand >= 0.0)) {
                           throw DomainError("NIG MGF requires 1 - 2 tr(.) / gamma_tilde^2 >= 0");
                       }
                       return n.gamma_tilde * (1.0 - std::sqrt(radicand));
                   }},
        model.mixing);
    return tr.location + log_mw;
}

double mgf(const Matrix& t, const MatrixSkewModel& model)
{
    return std::exp(log_mgf(t, model));
}

}  // namespace matskew
