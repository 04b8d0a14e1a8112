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

namespace matskew::specfun {

/// Natural log of the modified Bessel function of the third kind K_order(x).
///
/// Works for any finite real order and any positive double x; the result is
/// finite wherever log K is representable, even when K itself would overflow
/// or underflow. Throws DomainError for x <= 0 or non-finite input.
double log_bessel_k(double order, double x);

/// K_{order+1}(x) / K_order(x), always positive.
double bessel_k_ratio(double order, double x);

/// d/ds log K_s(x) at s = order, by central difference with
/// h = max(1e-5, 1e-5 * |order|).
double dlog_bessel_k_dorder(double order, double x);

/// Step used by dlog_bessel_k_dorder.
double order_derivative_step(double order);

double digamma(double x);
double trigamma(double x);
double log_gamma_fn(double x);

}  // namespace matskew::specfun
