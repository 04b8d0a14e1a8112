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

#include "matskew/matnorm.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "matskew/error.hpp"

namespace matskew {
namespace {

void require_finite(const Matrix& x, const char* what)
{
    if (!x.allFinite()) {
        throw DomainError(std::string(what) + " has non-finite entries");
    }
}

double logdet_from_chol(const Matrix& l)
{
    return 2.0 * l.diagonal().array().log().sum();
}

}  // namespace

void require_same_shape(const Matrix& x, Eigen::Index rows, Eigen::Index cols, const char* what)
{
    if (x.rows() != rows || x.cols() != cols) {
        throw UsageError(std::string(what) + ": expected " + std::to_string(rows) + "x" +
                         std::to_string(cols) + ", got " + std::to_string(x.rows()) + "x" +
                         std::to_string(x.cols()));
    }
}

Matrix checked_cholesky(const Matrix& s, const char* what)
{
    if (s.rows() != s.cols() || s.rows() == 0) {
        throw UsageError(std::string(what) + " must be a non-empty square matrix");
    }
    require_finite(s, what);
    const double scale = s.cwiseAbs().maxCoeff();
    if ((s - s.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
        throw DomainError(std::string(what) + " is not symmetric");
    }
    Eigen::LLT<Matrix> llt(s);
    if (llt.info() != Eigen::Success) {
        throw DomainError(std::string(what) + " is not positive definite");
    }
    Matrix l = llt.matrixL();
    if (!(l.diagonal().array() > 0.0).all()) {
        throw DomainError(std::string(what) + " is not positive definite");
    }
    return l;
}

void validate(const MatrixParamSet& params)
{
    const auto n = params.m.rows();
    const auto p = params.m.cols();
    if (n == 0 || p == 0) {
        throw UsageError("location matrix is empty");
    }
    require_finite(params.m, "M");
    require_same_shape(params.a, n, p, "A");
    require_finite(params.a, "A");
    require_same_shape(params.sigma, n, n, "Sigma");
    require_same_shape(params.psi, p, p, "Psi");
    checked_cholesky(params.sigma, "Sigma");
    checked_cholesky(params.psi, "Psi");
}

ScaleFactors::ScaleFactors(const Matrix& sigma, const Matrix& psi)
    : sigma_chol_(checked_cholesky(sigma, "Sigma")), psi_chol_(checked_cholesky(psi, "Psi"))
{
    const auto n = sigma_chol_.rows();
    const auto p = psi_chol_.rows();
    sigma_inv_ = Matrix::Identity(n, n);
    sigma_chol_.triangularView<Eigen::Lower>().solveInPlace(sigma_inv_);
    sigma_inv_ = sigma_inv_.transpose() * sigma_inv_;
    psi_inv_ = Matrix::Identity(p, p);
    psi_chol_.triangularView<Eigen::Lower>().solveInPlace(psi_inv_);
    psi_inv_ = psi_inv_.transpose() * psi_inv_;
    logdet_sigma_ = logdet_from_chol(sigma_chol_);
    logdet_psi_ = logdet_from_chol(psi_chol_);
}

Matrix ScaleFactors::whiten(const Matrix& d) const
{
    require_same_shape(d, rows(), cols(), "matrix argument");
    Matrix y = sigma_chol_.triangularView<Eigen::Lower>().solve(d);
    // y L_Psi^{-T} = (L_Psi^{-1} y^T)^T
    Matrix zt = psi_chol_.triangularView<Eigen::Lower>().solve(y.transpose());
    return zt.transpose();
}

double quad_delta(const Matrix& x, const Matrix& m, const ScaleFactors& scales)
{
    require_same_shape(m, scales.rows(), scales.cols(), "M");
    return scales.whiten(x - m).squaredNorm();
}

double quad_rho(const Matrix& a, const ScaleFactors& scales)
{
    return scales.whiten(a).squaredNorm();
}

double skew_cross(const Matrix& x, const Matrix& m, const Matrix& a, const ScaleFactors& scales)
{
    require_same_shape(m, scales.rows(), scales.cols(), "M");
    return scales.whiten(x - m).cwiseProduct(scales.whiten(a)).sum();
}

double matnorm_logpdf(const Matrix& x, const Matrix& m, const ScaleFactors& scales)
{
    const double n = static_cast<double>(scales.rows());
    const double p = static_cast<double>(scales.cols());
    return -0.5 * n * p * std::log(2.0 * std::numbers::pi) - 0.5 * p * scales.logdet_sigma() -
           0.5 * n * scales.logdet_psi() - 0.5 * quad_delta(x, m, scales);
}

Matrix matnorm_sample(RandomStream& rng, const Matrix& m, const ScaleFactors& scales)
{
    require_same_shape(m, scales.rows(), scales.cols(), "M");
    Matrix z(m.rows(), m.cols());
    for (Eigen::Index j = 0; j < z.cols(); ++j) {
        for (Eigen::Index i = 0; i < z.rows(); ++i) {
            z(i, j) = rng.normal();
        }
    }
    return m + scales.sigma_chol() * z * scales.psi_chol().transpose();
}

MgfTraces matnorm_mgf_trace(const Matrix& t, const MatrixParamSet& params)
{
    require_same_shape(t, params.rows(), params.cols(), "T");
    require_same_shape(params.a, params.rows(), params.cols(), "A");
    MgfTraces out{};
    out.location = (t.transpose() * params.m).trace();
    out.mixing = (t.transpose() * params.a).trace() +
                 0.5 * (t.transpose() * params.sigma * t * params.psi).trace();
    return out;
}

}  // namespace matskew
