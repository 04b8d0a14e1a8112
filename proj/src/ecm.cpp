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

#include "matskew/ecm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>
#include <variant>

#include "matskew/mixing.hpp"
#include "matskew/specfun.hpp"

namespace matskew::ecm {
namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

double mean_of(const std::vector<double>& v)
{
    return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

void require_moments(const Dataset& data, const PosteriorMoments& moments)
{
    if (data.empty()) {
        throw UsageError("dataset is empty");
    }
    if (moments.a.size() != data.size() || moments.b.size() != data.size() ||
        moments.c.size() != data.size()) {
        throw UsageError("posterior moments do not match the dataset size");
    }
}

bool is_spd(const Matrix& s)
{
    Eigen::LLT<Matrix> llt(s);
    return llt.info() == Eigen::Success;
}

Matrix repair_spd(Matrix s, double jitter, const char* what)
{
    s = 0.5 * (s + s.transpose()).eval();
    if (!s.allFinite()) {
        throw FitError(std::string(what) + " update is not finite");
    }
    if (is_spd(s)) {
        return s;
    }
    const double bump = jitter * s.diagonal().mean();
    if (bump > 0.0) {
        for (int k = 0; k < 3; ++k) {
            s.diagonal().array() += bump;
            if (is_spd(s)) {
                return s;
            }
        }
    }
    throw FitError(std::string(what) + " update is not positive definite after jitter repair");
}

Matrix spd_inverse(const Matrix& s)
{
    Eigen::LLT<Matrix> llt(s);
    if (llt.info() != Eigen::Success) {
        throw FitError("scale matrix is not positive definite");
    }
    return llt.solve(Matrix::Identity(s.rows(), s.cols()));
}

// Scatter with row and column roles given by `left` (applied as D M D^T) and
// divided by `divisor`: sum_i [b_i D_i M D_i^T - A M D_i^T - D_i M A^T + a_i A M A^T].
Matrix weighted_scatter(const std::vector<Matrix>& d, const PosteriorMoments& moments, const Matrix& a,
                        const Matrix& weight, double divisor)
{
    const Eigen::Index r = a.rows();
    Matrix s = Matrix::Zero(r, r);
    Matrix d_sum = Matrix::Zero(a.rows(), a.cols());
    double a_sum = 0.0;
    for (std::size_t i = 0; i < d.size(); ++i) {
        s.noalias() += moments.b[i] * (d[i] * weight * d[i].transpose());
        d_sum += d[i];
        a_sum += moments.a[i];
    }
    const Matrix aw = a * weight;
    const Matrix cross = aw * d_sum.transpose();
    s -= cross + cross.transpose();
    s.noalias() += a_sum * (aw * a.transpose());
    return s / divisor;
}

// log(x) - digamma(x), summed directly for large x where the difference
// would cancel.
double log_minus_digamma(double x)
{
    if (x < 20.0) {
        return std::log(x) - specfun::digamma(x);
    }
    const double inv = 1.0 / x;
    const double inv2 = inv * inv;
    return 0.5 * inv +
           inv2 * (1.0 / 12.0 - inv2 * (1.0 / 120.0 - inv2 * (1.0 / 252.0 - inv2 * (1.0 / 240.0 - inv2 / 132.0))));
}

}  // namespace

void validate_dataset(const Dataset& data)
{
    if (data.empty()) {
        throw UsageError("dataset is empty");
    }
    const Eigen::Index n = data.front().rows();
    const Eigen::Index p = data.front().cols();
    if (n < 1 || p < 1) {
        throw UsageError("observations must have at least one row and one column");
    }
    for (std::size_t i = 0; i < data.size(); ++i) {
        if (data[i].rows() != n || data[i].cols() != p) {
            throw UsageError("observation " + std::to_string(i) + " has a different shape");
        }
        if (!data[i].allFinite()) {
            throw DomainError("observation " + std::to_string(i) + " has non-finite entries");
        }
    }
}

void validate(const FitConfig& config)
{
    if (!std::isfinite(config.epsilon) || !(config.epsilon > 0.0)) {
        throw UsageError("epsilon must be positive");
    }
    if (config.max_iter < 1) {
        throw UsageError("max_iter must be at least 1");
    }
    if (!std::isfinite(config.jitter) || config.jitter < 0.0) {
        throw UsageError("jitter must be nonnegative");
    }
    if (config.initial_mixing) {
        if (family_of(*config.initial_mixing) != config.family) {
            throw UsageError("initial mixing law does not match the fitted family");
        }
        validate(*config.initial_mixing);
    }
}

PosteriorMoments e_step(const Dataset& data, const MatrixSkewModel& model)
{
    if (data.empty()) {
        throw UsageError("dataset is empty");
    }
    validate(model);
    const SkewDensity density(model);
    PosteriorMoments out;
    out.a.reserve(data.size());
    out.b.reserve(data.size());
    out.c.reserve(data.size());
    for (const Matrix& x : data) {
        require_same_shape(x, model.rows(), model.cols(), "observation");
        double delta = quad_delta(x, model.params.m, density.scales());
        if (family_of(model.mixing) == Family::vg && !(delta >= delta_floor)) {
            delta = delta_floor;
            ++out.floored;
        }
        const auto mom = mixing::gig_moments(density.posterior_from_delta(delta));
        out.a.push_back(mom.e_w);
        out.b.push_back(mom.e_winv);
        out.c.push_back(mom.e_logw);
    }
    out.a_bar = mean_of(out.a);
    out.b_bar = mean_of(out.b);
    out.c_bar = mean_of(out.c);
    return out;
}

LocationSkew cm_update_location_skew(const Dataset& data, const PosteriorMoments& moments)
{
    require_moments(data, moments);
    const double n_obs = static_cast<double>(data.size());
    double denom = -n_obs;
    for (double b : moments.b) {
        denom += moments.a_bar * b;
    }
    if (!(std::abs(denom) >= 1e-10 * n_obs)) {
        throw DegenerateWeightsError("location/skewness update has a vanishing denominator");
    }
    LocationSkew out{Matrix::Zero(data.front().rows(), data.front().cols()),
                     Matrix::Zero(data.front().rows(), data.front().cols())};
    for (std::size_t i = 0; i < data.size(); ++i) {
        out.m += (moments.a_bar * moments.b[i] - 1.0) * data[i];
        out.a += (moments.b_bar - moments.b[i]) * data[i];
    }
    out.m /= denom;
    out.a /= denom;
    return out;
}

Matrix cm_update_sigma(const Dataset& data, const PosteriorMoments& moments, const Matrix& m_hat,
                       const Matrix& a_hat, const Matrix& psi_inv, double jitter)
{
    require_moments(data, moments);
    const Eigen::Index n = m_hat.rows();
    const Eigen::Index p = m_hat.cols();
    require_same_shape(a_hat, n, p, "skewness");
    require_same_shape(psi_inv, p, p, "column scale inverse");
    std::vector<Matrix> d;
    d.reserve(data.size());
    for (const Matrix& x : data) {
        require_same_shape(x, n, p, "observation");
        d.push_back(x - m_hat);
    }
    const double divisor = static_cast<double>(data.size()) * static_cast<double>(p);
    return repair_spd(weighted_scatter(d, moments, a_hat, psi_inv, divisor), jitter, "row scale");
}

Matrix cm_update_psi(const Dataset& data, const PosteriorMoments& moments, const Matrix& m_hat,
                     const Matrix& a_hat, const Matrix& sigma_inv, double jitter)
{
    require_moments(data, moments);
    const Eigen::Index n = m_hat.rows();
    const Eigen::Index p = m_hat.cols();
    require_same_shape(a_hat, n, p, "skewness");
    require_same_shape(sigma_inv, n, n, "row scale inverse");
    std::vector<Matrix> d;
    d.reserve(data.size());
    for (const Matrix& x : data) {
        require_same_shape(x, n, p, "observation");
        d.push_back((x - m_hat).transpose());
    }
    const double divisor = static_cast<double>(data.size()) * static_cast<double>(n);
    return repair_spd(weighted_scatter(d, moments, a_hat.transpose(), sigma_inv, divisor), jitter,
                      "column scale");
}

double gh_surrogate(const PosteriorMoments& moments, double lambda, double omega)
{
    return (lambda - 1.0) * moments.c_bar - specfun::log_bessel_k(lambda, omega) -
           0.5 * omega * (moments.a_bar + moments.b_bar);
}

GhPartials gh_omega_partials(const PosteriorMoments& moments, double lambda, double omega)
{
    const double rp = specfun::bessel_k_ratio(lambda, omega);
    const double rm = specfun::bessel_k_ratio(-lambda, omega);
    // dR_nu/domega = R_nu^2 - (2 nu + 1) R_nu / omega - 1
    const double dp = rp * rp - (1.0 + 2.0 * lambda) / omega * rp - 1.0;
    const double dm = rm * rm - (1.0 - 2.0 * lambda) / omega * rm - 1.0;
    return {0.5 * (rp + rm - (moments.a_bar + moments.b_bar)), 0.5 * (dp + dm)};
}

GhUpdate cm_update_gh(const PosteriorMoments& moments, double omega_t, double lambda_t)
{
    mixing::validate(mixing::GigParams{omega_t, omega_t, lambda_t});
    GhUpdate out{lambda_t, omega_t, true, true};

    const double q_start = gh_surrogate(moments, lambda_t, omega_t);
    const double slope = specfun::dlog_bessel_k_dorder(lambda_t, omega_t);
    if (std::abs(slope) > 1e-12) {
        const double proposal = moments.c_bar * lambda_t / slope;
        if (std::isfinite(proposal)) {
            const double step = proposal - lambda_t;
            for (int k = 0; k < 40; ++k) {
                const double cand = lambda_t + std::ldexp(step, -k);
                if (gh_surrogate(moments, cand, omega_t) >= q_start) {
                    out.lambda = cand;
                    out.lambda_held = false;
                    break;
                }
            }
        }
    }

    const double q_mid = gh_surrogate(moments, out.lambda, omega_t);
    const auto partials = gh_omega_partials(moments, out.lambda, omega_t);
    if (std::isfinite(partials.d_omega) && partials.d2_omega < 0.0) {
        const double step = -partials.d_omega / partials.d2_omega;
        for (int k = 0; k < 60; ++k) {
            const double cand = omega_t + std::ldexp(step, -k);
            if (!(cand > 0.0) || !std::isfinite(cand)) {
                continue;
            }
            if (gh_surrogate(moments, out.lambda, cand) >= q_mid) {
                out.omega = cand;
                out.omega_held = false;
                break;
            }
        }
    }
    return out;
}

VgRoot solve_vg_gamma(double a_minus_c)
{
    if (!std::isfinite(a_minus_c)) {
        throw DomainError("VG concentration equation has a non-finite constant");
    }
    if (!(a_minus_c > 1.0)) {
        throw NoRootError("VG concentration equation has no root (mean(a) - mean(c) <= 1)");
    }
    auto f = [&](double g) { return log_minus_digamma(g) + 1.0 - a_minus_c; };
    double lo = vg_gamma_min;
    double hi = vg_gamma_cap;
    if (f(hi) > 0.0) {
        return {hi, true};
    }
    if (f(lo) < 0.0) {
        return {lo, true};
    }
    // f is strictly decreasing: f(lo) >= 0 >= f(hi).
    double g = std::clamp(1.0 / (2.0 * (a_minus_c - 1.0)), lo, hi);
    for (int it = 0; it < 300; ++it) {
        const double fg = f(g);
        if (fg == 0.0) {
            return {g, false};
        }
        if (fg > 0.0) {
            lo = g;
        } else {
            hi = g;
        }
        const double deriv = 1.0 / g - specfun::trigamma(g);
        double next = g - fg / deriv;
        if (!std::isfinite(next) || next <= lo || next >= hi) {
            next = std::sqrt(lo * hi);
        }
        if (std::abs(next - g) <= 1e-13 * g || hi - lo <= 1e-13 * lo) {
            return {next, false};
        }
        g = next;
    }
    return {g, false};
}

VgRoot cm_update_vg(const PosteriorMoments& moments)
{
    return solve_vg_gamma(moments.a_bar - moments.c_bar);
}

double cm_update_nig(const PosteriorMoments& moments)
{
    if (moments.a.empty()) {
        throw UsageError("posterior moments are empty");
    }
    const double total = std::accumulate(moments.a.begin(), moments.a.end(), 0.0);
    return static_cast<double>(moments.a.size()) / total;
}

ScalePair canonicalize(const Matrix& sigma, const Matrix& psi)
{
    const double c = sigma(0, 0);
    if (!(c > 0.0) || !std::isfinite(c)) {
        throw DomainError("row scale has a nonpositive leading entry");
    }
    return {sigma / c, psi * c};
}

double observed_loglik(const Dataset& data, const MatrixSkewModel& model)
{
    if (data.empty()) {
        throw UsageError("dataset is empty");
    }
    const SkewDensity density(model);
    double total = 0.0;
    for (const Matrix& x : data) {
        total += density.logpdf(x);
    }
    return total;
}

AitkenResult aitken_check(const std::vector<double>& trace, double epsilon)
{
    if (trace.size() < 3) {
        throw UsageError("Aitken check needs at least three log-likelihood values");
    }
    const std::size_t k = trace.size();
    const double l_prev = trace[k - 3];
    const double l_cur = trace[k - 2];
    const double l_next = trace[k - 1];
    const double d1 = l_cur - l_prev;
    const double d2 = l_next - l_cur;
    const double tiny = 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(l_cur));

    AitkenResult out;
    if (std::abs(d1) <= tiny) {
        // Stalled trace: no extrapolation possible.
        out.converged = std::abs(d2) <= tiny;
        return out;
    }
    const double accel = d2 / d1;
    if (!std::isfinite(accel) || accel >= 1.0) {
        return out;
    }
    const double l_inf = l_cur + d2 / (1.0 - accel);
    out.bound_available = true;
    out.bound = l_inf - l_cur;
    out.converged = out.bound >= 0.0 && out.bound < epsilon;
    return out;
}

MatrixSkewModel initialize(const Dataset& data, const FitConfig& config)
{
    validate_dataset(data);
    validate(config);
    const Eigen::Index n = data.front().rows();
    const Eigen::Index p = data.front().cols();
    const double n_obs = static_cast<double>(data.size());

    Matrix m = Matrix::Zero(n, p);
    for (const Matrix& x : data) {
        m += x;
    }
    m /= n_obs;

    Matrix third = Matrix::Zero(n, p);
    for (const Matrix& x : data) {
        third.array() += (x - m).array().cube();
    }
    RandomStream ties(config.init_seed);
    Matrix a(n, p);
    for (Eigen::Index j = 0; j < p; ++j) {
        for (Eigen::Index i = 0; i < n; ++i) {
            double s = third(i, j) > 0.0 ? 1.0 : (third(i, j) < 0.0 ? -1.0 : 0.0);
            if (s == 0.0) {
                s = ties.uniform() < 0.5 ? -1.0 : 1.0;
            }
            a(i, j) = 0.1 * s;
        }
    }

    Matrix sigma = Matrix::Zero(n, n);
    for (const Matrix& x : data) {
        const Matrix r = x - m;
        sigma.noalias() += r * r.transpose();
    }
    sigma = repair_spd(sigma / (n_obs * static_cast<double>(p)), config.jitter, "initial row scale");
    const Matrix sigma_inv = spd_inverse(sigma);
    Matrix psi = Matrix::Zero(p, p);
    for (const Matrix& x : data) {
        const Matrix r = x - m;
        psi.noalias() += r.transpose() * sigma_inv * r;
    }
    psi = repair_spd(psi / (n_obs * static_cast<double>(n)), config.jitter, "initial column scale");
    auto canon = canonicalize(sigma, psi);

    MixingLaw law;
    if (config.initial_mixing) {
        law = *config.initial_mixing;
    } else {
        switch (config.family) {
        case Family::gh: law = GhLaw{1.0, 0.5}; break;
        case Family::vg: law = VgLaw{1.0}; break;
        case Family::nig: law = NigLaw{1.0}; break;
        }
    }
    return MatrixSkewModel{{m, a, canon.sigma, canon.psi}, law};
}

MatrixSkewModel ecm_step(const Dataset& data, const MatrixSkewModel& model, const FitConfig& config,
                         StepDiagnostics* diag)
{
    StepDiagnostics local;
    StepDiagnostics& log = diag ? *diag : local;
    MatrixSkewModel next = model;

    const PosteriorMoments moments = e_step(data, model);
    log.floored += moments.floored;

    try {
        auto ls = cm_update_location_skew(data, moments);
        next.params.m = std::move(ls.m);
        next.params.a = std::move(ls.a);
    } catch (const DegenerateWeightsError&) {
        ++log.held_location;
    }

    const Matrix psi_inv = spd_inverse(model.params.psi);
    const Matrix sigma = cm_update_sigma(data, moments, next.params.m, next.params.a, psi_inv, config.jitter);
    const Matrix psi =
        cm_update_psi(data, moments, next.params.m, next.params.a, spd_inverse(sigma), config.jitter);

    next.mixing = std::visit(
        overloaded{[&](const GhLaw& g) -> MixingLaw {
                       const auto upd = cm_update_gh(moments, g.omega, g.lambda);
                       return GhLaw{upd.omega, upd.lambda};
                   },
                   [&](const VgLaw& v) -> MixingLaw {
                       try {
                           const auto root = cm_update_vg(moments);
                           log.vg_capped = log.vg_capped || root.capped;
                           return VgLaw{root.gamma};
                       } catch (const NoRootError&) {
                           ++log.vg_no_root;
                           return v;
                       }
                   },
                   [&](const NigLaw&) -> MixingLaw { return NigLaw{cm_update_nig(moments)}; }},
        model.mixing);

    auto canon = canonicalize(sigma, psi);
    next.params.sigma = std::move(canon.sigma);
    next.params.psi = std::move(canon.psi);
    return next;
}

void check_not_collapsed(const Dataset& data, const MatrixSkewModel& model)
{
    const auto* vg = std::get_if<VgLaw>(&model.mixing);
    if (vg == nullptr) {
        return;
    }
    const double half_dim = 0.5 * static_cast<double>(model.rows() * model.cols());
    if (vg->gamma > half_dim) {
        return;
    }
    const ScaleFactors scales(model.params.sigma, model.params.psi);
    std::vector<double> delta;
    delta.reserve(data.size());
    for (const Matrix& x : data) {
        delta.push_back(quad_delta(x, model.params.m, scales));
    }
    const auto smallest = std::min_element(delta.begin(), delta.end());
    const std::size_t where = static_cast<std::size_t>(smallest - delta.begin());
    const double worst = *smallest;
    std::nth_element(delta.begin(), delta.begin() + static_cast<std::ptrdiff_t>(delta.size() / 2), delta.end());
    const double median = delta[delta.size() / 2];
    if (worst < collapse_ratio * median) {
        throw FitError("likelihood is unbounded: location collapsed onto observation " + std::to_string(where) +
                       " (variance-gamma with gamma <= np/2)");
    }
}

namespace {

struct Evaluated {
    MatrixSkewModel model;
    double loglik;
};

std::vector<double> flatten(const MatrixSkewModel& model)
{
    const auto& pr = model.params;
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(pr.m.size() + pr.a.size() + pr.sigma.size() + pr.psi.size() + 2));
    for (const Matrix* mat : {&pr.m, &pr.a, &pr.sigma, &pr.psi}) {
        out.insert(out.end(), mat->data(), mat->data() + mat->size());
    }
    std::visit(overloaded{[&](const GhLaw& g) {
                              out.push_back(std::log(g.omega));
                              out.push_back(g.lambda);
                          },
                          [&](const VgLaw& v) { out.push_back(std::log(v.gamma)); },
                          [&](const NigLaw& n) { out.push_back(std::log(n.gamma_tilde)); }},
               model.mixing);
    return out;
}

MatrixSkewModel unflatten(const std::vector<double>& v, const MatrixSkewModel& like)
{
    MatrixSkewModel out = like;
    auto& pr = out.params;
    std::size_t k = 0;
    for (Matrix* mat : {&pr.m, &pr.a, &pr.sigma, &pr.psi}) {
        std::copy(v.begin() + static_cast<std::ptrdiff_t>(k),
                  v.begin() + static_cast<std::ptrdiff_t>(k + static_cast<std::size_t>(mat->size())), mat->data());
        k += static_cast<std::size_t>(mat->size());
    }
    pr.sigma = 0.5 * (pr.sigma + pr.sigma.transpose()).eval();
    pr.psi = 0.5 * (pr.psi + pr.psi.transpose()).eval();
    std::visit(overloaded{[&](GhLaw& g) {
                              g.omega = std::exp(v[k]);
                              g.lambda = v[k + 1];
                          },
                          [&](VgLaw& g) { g.gamma = std::exp(v[k]); },
                          [&](NigLaw& n) { n.gamma_tilde = std::exp(v[k]); }},
               out.mixing);
    return out;
}

double norm_of(const std::vector<double>& v)
{
    double s = 0.0;
    for (double x : v) {
        s += x * x;
    }
    return std::sqrt(s);
}

}  // namespace

FitResult fit(const Dataset& data, const FitConfig& config)
{
    FitResult out;
    out.model = initialize(data, config);
    double loglik = observed_loglik(data, out.model);
    if (!std::isfinite(loglik)) {
        throw FitError("log-likelihood at the starting point is not finite");
    }
    out.loglik_trace.push_back(loglik);

    StepDiagnostics diag;
    int maps = 0;
    int extrapolations = 0;
    double step_max = 4.0;

    // One ECM sweep from `from`, with the ascent check against its log-likelihood.
    auto sweep = [&](const Evaluated& from) -> Evaluated {
        ++maps;
        const std::string where = " (iteration " + std::to_string(maps) + ")";
        Evaluated next{from.model, 0.0};
        try {
            next.model = ecm_step(data, from.model, config, &diag);
            check_not_collapsed(data, next.model);
            next.loglik = observed_loglik(data, next.model);
        } catch (const FitError& e) {
            throw FitError(e.what() + where);
        } catch (const std::domain_error& e) {
            throw FitError(std::string(e.what()) + where);
        }
        if (!std::isfinite(next.loglik)) {
            throw FitError("log-likelihood is not finite" + where);
        }
        if (next.loglik < from.loglik - ascent_slack) {
            throw FitError("log-likelihood decreased by " + std::to_string(from.loglik - next.loglik) + where);
        }
        return next;
    };

    Evaluated current{out.model, loglik};
    while (maps < config.max_iter) {
        Evaluated accepted = sweep(current);
        if (config.accelerate && maps < config.max_iter) {
            Evaluated second = sweep(accepted);
            if (maps < config.max_iter) {
                // Squared extrapolation over the two sweeps, kept only if the
                // sweep from the extrapolated point beats the plain path.
                const auto t0 = flatten(current.model);
                const auto t1 = flatten(accepted.model);
                const auto t2 = flatten(second.model);
                std::vector<double> r(t0.size());
                std::vector<double> v(t0.size());
                for (std::size_t k = 0; k < t0.size(); ++k) {
                    r[k] = t1[k] - t0[k];
                    v[k] = t2[k] - 2.0 * t1[k] + t0[k];
                }
                const double nv = norm_of(v);
                double alpha = nv > 0.0 ? -norm_of(r) / nv : -1.0;
                alpha = std::clamp(alpha, -step_max, -1.0);
                if (alpha < -1.0) {
                    std::vector<double> t(t0.size());
                    for (std::size_t k = 0; k < t0.size(); ++k) {
                        t[k] = t0[k] - 2.0 * alpha * r[k] + alpha * alpha * v[k];
                    }
                    try {
                        Evaluated jump{unflatten(t, current.model), 0.0};
                        validate(jump.model);
                        jump.loglik = observed_loglik(data, jump.model);
                        if (std::isfinite(jump.loglik)) {
                            Evaluated stabilized = sweep(jump);
                            if (stabilized.loglik >= second.loglik) {
                                second = std::move(stabilized);
                                ++extrapolations;
                                if (alpha == -step_max) {
                                    step_max *= 4.0;
                                }
                            }
                        }
                    } catch (const std::exception&) {
                        // Extrapolated point outside the parameter space.
                    }
                }
            }
            accepted = std::move(second);
        }
        current = std::move(accepted);
        out.loglik_trace.push_back(current.loglik);
        if (out.loglik_trace.size() >= 3) {
            const auto check = aitken_check(out.loglik_trace, config.epsilon);
            out.aitken_bound = check.bound;
            out.aitken_bound_available = check.bound_available;
            if (check.converged) {
                out.converged = true;
                break;
            }
        }
    }
    out.model = std::move(current.model);
    out.iterations = maps;
    out.extrapolations = extrapolations;

    if (diag.floored > 0) {
        out.warnings.push_back("delta floor applied " + std::to_string(diag.floored) +
                               " times to observations at the location");
    }
    if (diag.held_location > 0) {
        out.warnings.push_back("location and skewness held on " + std::to_string(diag.held_location) +
                               " iterations (degenerate weights)");
    }
    if (diag.vg_no_root > 0) {
        out.warnings.push_back("VG concentration held on " + std::to_string(diag.vg_no_root) +
                               " iterations (no root)");
    }
    if (diag.vg_capped) {
        out.warnings.push_back("VG concentration reached the solver bracket limit");
    }
    if (!out.converged) {
        out.warnings.push_back("not converged after " + std::to_string(out.iterations) + " iterations");
    }
    return out;
}

}  // namespace matskew::ecm
