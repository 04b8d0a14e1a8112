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

#include <Eigen/Dense>

#include "matskew/random.hpp"

namespace matskew {

using Matrix = Eigen::MatrixXd;

/// Location M, skewness A (both n x p), row scale Sigma (n x n) and column
/// scale Psi (p x p).
struct MatrixParamSet {
    Matrix m;
    Matrix a;
    Matrix sigma;
    Matrix psi;

    Eigen::Index rows() const { return m.rows(); }
    Eigen::Index cols() const { return m.cols(); }
};

/// Checks dimensions, finiteness, symmetry and positive definiteness.
void validate(const MatrixParamSet& params);

/// Cholesky factors, inverses and log-determinants of (Sigma, Psi), computed
/// once and shared by every density evaluation against the same scales.
class ScaleFactors {
public:
    /// Throws DomainError unless both matrices are symmetric and their
    /// Cholesky factorization succeeds (no jitter).
    ScaleFactors(const Matrix& sigma, const Matrix& psi);

    const Matrix& sigma_chol() const { return sigma_chol_; }
    const Matrix& psi_chol() const { return psi_chol_; }
    const Matrix& sigma_inv() const { return sigma_inv_; }
    const Matrix& psi_inv() const { return psi_inv_; }
    double logdet_sigma() const { return logdet_sigma_; }
    double logdet_psi() const { return logdet_psi_; }
    Eigen::Index rows() const { return sigma_chol_.rows(); }
    Eigen::Index cols() const { return psi_chol_.rows(); }

    /// L_Sigma^{-1} D L_Psi^{-T}; its squared Frobenius norm is
    /// tr(Sigma^{-1} D Psi^{-1} D^T).
    Matrix whiten(const Matrix& d) const;

private:
    Matrix sigma_chol_;
    Matrix psi_chol_;
    Matrix sigma_inv_;
    Matrix psi_inv_;
    double logdet_sigma_ = 0.0;
    double logdet_psi_ = 0.0;
};

/// Lower Cholesky factor of a symmetric positive definite matrix; throws
/// DomainError naming `what` otherwise.
Matrix checked_cholesky(const Matrix& s, const char* what);

double matnorm_logpdf(const Matrix& x, const Matrix& m, const ScaleFactors& scales);

/// X = M + L_Sigma Z L_Psi^T with Z i.i.d. standard normal (filled column-major).
Matrix matnorm_sample(RandomStream& rng, const Matrix& m, const ScaleFactors& scales);

/// delta(X; M, Sigma, Psi) = tr(Sigma^{-1} (X - M) Psi^{-1} (X - M)^T).
double quad_delta(const Matrix& x, const Matrix& m, const ScaleFactors& scales);

/// rho(A, Sigma, Psi) = tr(Sigma^{-1} A Psi^{-1} A^T).
double quad_rho(const Matrix& a, const ScaleFactors& scales);

/// tr(Sigma^{-1} (X - M) Psi^{-1} A^T), the skewness cross term.
double skew_cross(const Matrix& x, const Matrix& m, const Matrix& a, const ScaleFactors& scales);

/// Scalars entering every mixture MGF: location = tr(T^T M) and
/// mixing = tr(T^T A) + tr(T^T Sigma T Psi) / 2, the argument handed to M_W.
struct MgfTraces {
    double location;
    double mixing;
};

MgfTraces matnorm_mgf_trace(const Matrix& t, const MatrixParamSet& params);

void require_same_shape(const Matrix& x, Eigen::Index rows, Eigen::Index cols, const char* what);

}  // namespace matskew
