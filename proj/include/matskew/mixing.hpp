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
#include <vector>

#include "matskew/random.hpp"

namespace matskew::mixing {

/// GIG(a, b, lambda): density proportional to y^{lambda-1} exp{-(a y + b / y) / 2}.
struct GigParams {
    double a;
    double b;
    double lambda;
};

/// The I(omega, eta, lambda) form: omega = sqrt(ab), eta = sqrt(a/b).
struct GigEtaParams {
    double omega;
    double eta;
    double lambda;
};

/// Inverse Gaussian IG(delta, gamma), mean delta / gamma.
struct IgParams {
    double delta;
    double gamma;
};

/// gamma(shape, rate), mean shape / rate.
struct GammaParams {
    double shape;
    double rate;
};

/// E(W), E(1/W), E(log W).
struct GigMoments {
    double e_w;
    double e_winv;
    double e_logw;
};

// Each validate() throws BoundaryError when a strictly positive parameter is
// zero and DomainError for anything else out of range.
void validate(const GigParams& p);
void validate(const GigEtaParams& p);
void validate(const IgParams& p);
void validate(const GammaParams& p);

double gig_logpdf(double y, const GigParams& p);
GigMoments gig_moments(const GigParams& p);
GigParams gig_eta_to_ab(const GigEtaParams& p);
GigEtaParams gig_ab_to_eta(const GigParams& p);

double ig_logpdf(double y, const IgParams& p);
double gamma_logpdf(double y, const GammaParams& p);

// Single draws. The vector overloads below are the same draws in sequence.
double gig_draw(RandomStream& rng, const GigParams& p);
double ig_draw(RandomStream& rng, const IgParams& p);
double gamma_draw(RandomStream& rng, const GammaParams& p);

std::vector<double> gig_sample(RandomStream& rng, const GigParams& p, std::size_t count);
std::vector<double> ig_sample(RandomStream& rng, const IgParams& p, std::size_t count);
std::vector<double> gamma_sample(RandomStream& rng, const GammaParams& p, std::size_t count);

}  // namespace matskew::mixing
