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

// Random valid parameter instances shared by several test suites.

#include <Eigen/Dense>

#include "matskew/matnorm.hpp"
#include "matskew/random.hpp"

namespace matskew::testing {

inline Matrix random_matrix(RandomStream& rng, Eigen::Index rows, Eigen::Index cols, double scale = 1.0)
{
    Matrix m(rows, cols);
    for (Eigen::Index j = 0; j < cols; ++j) {
        for (Eigen::Index i = 0; i < rows; ++i) {
            m(i, j) = scale * rng.normal();
        }
    }
    return m;
}

inline Matrix random_spd(RandomStream& rng, Eigen::Index n)
{
    const Matrix g = random_matrix(rng, n, n);
    Matrix s = g * g.transpose() / static_cast<double>(n) + 0.5 * Matrix::Identity(n, n);
    return 0.5 * (s + s.transpose());
}

inline MatrixParamSet random_params(RandomStream& rng, Eigen::Index n, Eigen::Index p)
{
    return {random_matrix(rng, n, p), random_matrix(rng, n, p, 0.5), random_spd(rng, n),
            random_spd(rng, p)};
}

}  // namespace matskew::testing
