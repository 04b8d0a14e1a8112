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

#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "matskew/matnorm.hpp"
#include "matskew/mixing.hpp"
#include "matskew/random.hpp"

namespace matskew {

/// W ~ I(omega, 1, lambda), i.e. GIG(a = omega, b = omega, lambda).
struct GhLaw {
    double omega;
    double lambda;
};

/// W ~ gamma(gamma, gamma), so E(W) = 1.
struct VgLaw {
    double gamma;
};

/// W ~ IG(1, gamma_tilde).
struct NigLaw {
    double gamma_tilde;
};

using MixingLaw = std::variant<GhLaw, VgLaw, NigLaw>;

enum class Family { gh, vg, nig };

Family family_of(const MixingLaw& law);
std::string_view family_name(Family family);
/// Accepts "gh", "vg", "nig"; throws UsageError otherwise.
Family parse_family(std::string_view name);
void validate(const MixingLaw& law);

/// E(W) under the mixing law.
double mixing_mean(const MixingLaw& law);

/// X = M + W A + sqrt(W) V with V ~ N_{n x p}(0, Sigma, Psi).
struct MatrixSkewModel {
    MatrixParamSet params;
    MixingLaw mixing;

    Eigen::Index rows() const { return params.rows(); }
    Eigen::Index cols() const { return params.cols(); }
};

void validate(const MatrixSkewModel& model);

/// Density, posterior and MGF evaluation for one model with the scale
/// factorizations and family constants computed up front.
///
/// All three families share one skeleton: with delta = delta(X; M, Sigma, Psi)
/// and rho = rho(A, Sigma, Psi), the conditional law of W given X is
/// GIG(rho + rho_shift, delta + delta_shift, order), and
///
///   log f(X) = -(np/2) log 2 pi - (p/2) log|Sigma| - (n/2) log|Psi|
///              + tr(Sigma^{-1} (X - M) Psi^{-1} A^T) + log_normalizer
///              + (order/2) log(b/a) + log K_order(sqrt(ab)),
///
/// where (a, b) are the posterior GIG rates. Family terms:
///
///   GH : (omega,  omega, lambda - np/2,   -log K_lambda(omega))
///   VG : (2 gamma, 0,    gamma - np/2,    log 2 + gamma log gamma - log Gamma(gamma))
///   NIG: (gt^2,   1,     -(1 + np)/2,     gt + log 2 - (1/2) log 2 pi)
class SkewDensity {
public:
    explicit SkewDensity(const MatrixSkewModel& model);

    /// Throws BoundaryError where the density is infinite (VG at X = M when
    /// gamma <= np/2) and DomainError for non-finite X.
    double logpdf(const Matrix& x) const;

    /// Conditional law of W given X; throws BoundaryError when b = 0.
    mixing::GigParams posterior(const Matrix& x) const;

    /// Posterior rates from precomputed delta (used by the E-step repair).
    mixing::GigParams posterior_from_delta(double delta) const;

    const MatrixSkewModel& model() const { return model_; }
    const ScaleFactors& scales() const { return scales_; }
    double rho() const { return rho_; }
    double order() const { return order_; }

private:
    MatrixSkewModel model_;
    ScaleFactors scales_;
    Matrix whitened_a_;
    double rho_;
    double rho_shift_;
    double delta_shift_;
    double order_;
    double log_normalizer_;
    double log_base_;
};

double logpdf(const Matrix& x, const MatrixSkewModel& model);
mixing::GigParams posterior_gig(const Matrix& x, const MatrixSkewModel& model);

/// i.i.d. draws via the mixture representation.
std::vector<Matrix> sample(RandomStream& rng, const MatrixSkewModel& model, std::size_t count);
Matrix sample_one(RandomStream& rng, const MatrixSkewModel& model, const ScaleFactors& scales);

/// E exp(tr(T^T X)); throws DomainError naming the family bound when T is
/// outside the MGF domain.
double mgf(const Matrix& t, const MatrixSkewModel& model);
double log_mgf(const Matrix& t, const MatrixSkewModel& model);

}  // namespace matskew
