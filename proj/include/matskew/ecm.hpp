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
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "matskew/error.hpp"
#include "matskew/matrixdist.hpp"

namespace matskew::ecm {

using Dataset = std::vector<Matrix>;

/// Posterior expectations a_i = E(W|X_i), b_i = E(1/W|X_i), c_i = E(log W|X_i).
struct PosteriorMoments {
    std::vector<double> a;
    std::vector<double> b;
    std::vector<double> c;
    double a_bar = 0.0;
    double b_bar = 0.0;
    double c_bar = 0.0;
    // Observations whose delta was raised to the floor (VG at X_i = M).
    std::size_t floored = 0;

    std::size_t size() const { return a.size(); }
};

/// Shared denominator of the location/skewness update vanishes.
class DegenerateWeightsError : public FitError {
public:
    using FitError::FitError;
};

/// The VG concentration equation has no positive root.
class NoRootError : public FitError {
public:
    using FitError::FitError;
};

struct FitConfig {
    Family family = Family::gh;
    double epsilon = 1e-6;
    int max_iter = 2000;
    std::uint64_t init_seed = 0;
    double jitter = 1e-10;
    // Squared extrapolation between ECM sweeps (plain ECM when false).
    bool accelerate = true;
    // Starting concentration; the family defaults are used when empty.
    std::optional<MixingLaw> initial_mixing;
};

void validate(const FitConfig& config);

struct FitResult {
    MatrixSkewModel model;
    std::vector<double> loglik_trace;
    int iterations = 0;
    bool converged = false;
    double aitken_bound = 0.0;
    bool aitken_bound_available = false;
    // Accepted extrapolation steps (accelerated fits only).
    int extrapolations = 0;
    std::vector<std::string> warnings;
};

/// Largest tolerated decrease of the log-likelihood between iterations.
inline constexpr double ascent_slack = 1e-8;
/// A VG fit with gamma <= np/2 is declared collapsed once some delta_i falls
/// below this fraction of the median delta.
inline constexpr double collapse_ratio = 1e-12;
/// Smallest delta handed to the VG posterior.
inline constexpr double delta_floor = 1e-300;
/// Upper end of the VG root bracket.
inline constexpr double vg_gamma_cap = 1e8;
inline constexpr double vg_gamma_min = 1e-8;

PosteriorMoments e_step(const Dataset& data, const MatrixSkewModel& model);

struct LocationSkew {
    Matrix m;
    Matrix a;
};

/// Throws DegenerateWeightsError when |sum_i a_bar b_i - N| < 1e-10 N.
LocationSkew cm_update_location_skew(const Dataset& data, const PosteriorMoments& moments);

/// Row scale given the current column scale inverse. The result is
/// symmetrized and, if needed, repaired with at most three jitter steps.
Matrix cm_update_sigma(const Dataset& data, const PosteriorMoments& moments, const Matrix& m_hat,
                       const Matrix& a_hat, const Matrix& psi_inv, double jitter = 1e-10);

/// Column scale given the freshly updated row scale inverse.
Matrix cm_update_psi(const Dataset& data, const PosteriorMoments& moments, const Matrix& m_hat,
                     const Matrix& a_hat, const Matrix& sigma_inv, double jitter = 1e-10);

/// Per-observation GH mixing surrogate
///   q(lambda, omega) = (lambda - 1) c_bar - log K_lambda(omega) - omega (a_bar + b_bar) / 2,
/// i.e. the expected GIG(omega, omega, lambda) log-density up to -log 2.
double gh_surrogate(const PosteriorMoments& moments, double lambda, double omega);

struct GhPartials {
    double d_omega;
    double d2_omega;
};

/// Closed-form omega partials of q built from R_lambda and R_{-lambda}.
GhPartials gh_omega_partials(const PosteriorMoments& moments, double lambda, double omega);

struct GhUpdate {
    double lambda;
    double omega;
    bool lambda_held = false;
    bool omega_held = false;
};

GhUpdate cm_update_gh(const PosteriorMoments& moments, double omega_t, double lambda_t);

struct VgRoot {
    double gamma;
    bool capped = false;
};

/// Root of log g + 1 - psi(g) + c_bar - a_bar = 0. Throws NoRootError when
/// a_bar - c_bar <= 1; returns the cap with `capped` set when the root lies above it.
VgRoot solve_vg_gamma(double a_minus_c);
VgRoot cm_update_vg(const PosteriorMoments& moments);

double cm_update_nig(const PosteriorMoments& moments);

struct ScalePair {
    Matrix sigma;
    Matrix psi;
};

/// Rescales so that sigma(0, 0) = 1, leaving the Kronecker product unchanged.
ScalePair canonicalize(const Matrix& sigma, const Matrix& psi);

double observed_loglik(const Dataset& data, const MatrixSkewModel& model);

struct AitkenResult {
    bool converged = false;
    bool bound_available = false;
    double bound = 0.0;
};

/// Uses the last three entries of the trace.
AitkenResult aitken_check(const std::vector<double>& trace, double epsilon);

struct StepDiagnostics {
    std::size_t floored = 0;
    int held_location = 0;
    int vg_no_root = 0;
    bool vg_capped = false;
};

/// One ECM sweep: E-step, location/skewness, row scale, column scale,
/// concentration, canonicalization.
MatrixSkewModel ecm_step(const Dataset& data, const MatrixSkewModel& model, const FitConfig& config,
                         StepDiagnostics* diag = nullptr);

/// Throws FitError when a VG model with gamma <= np/2 has its location on
/// top of an observation, where the likelihood is unbounded.
void check_not_collapsed(const Dataset& data, const MatrixSkewModel& model);

/// Deterministic starting point; see README for the rules.
MatrixSkewModel initialize(const Dataset& data, const FitConfig& config);

/// Counts every ECM sweep against max_iter; the trace holds one value per
/// accepted step.
FitResult fit(const Dataset& data, const FitConfig& config);

/// Checks the dataset is nonempty, finite and of one shape.
void validate_dataset(const Dataset& data);

}  // namespace matskew::ecm
