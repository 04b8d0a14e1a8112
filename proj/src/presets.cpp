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

#include "matskew/presets.hpp"

#include "matskew/error.hpp"

namespace matskew {
namespace {

Matrix rows34(std::initializer_list<double> v)
{
    Matrix m(3, 4);
    auto it = v.begin();
    for (Eigen::Index i = 0; i < 3; ++i) {
        for (Eigen::Index j = 0; j < 4; ++j) {
            m(i, j) = *it++;
        }
    }
    return m;
}

Matrix shared_sigma()
{
    Matrix s(3, 3);
    s << 1.0, 0.5, 0.1,
         0.5, 1.0, 0.5,
         0.1, 0.5, 1.0;
    return s;
}

Matrix shared_psi()
{
    Matrix p(4, 4);
    p << 1.0, 0.0, 0.0, 0.0,
         0.0, 1.0, 0.5, 0.5,
         0.0, 0.5, 1.0, 0.1,
         0.0, 0.5, 0.1, 1.0;
    return p;
}

}  // namespace

std::vector<std::string> preset_names()
{
    return {"sim1-gh", "sim1-vg", "sim1-nig", "sim2-gh", "sim2-vg", "sim2-nig"};
}

Preset preset(std::string_view name)
{
    if (name.size() != 7 && name.size() != 8) {
        throw UsageError("unknown preset '" + std::string(name) + "'");
    }
    const std::string_view sim = name.substr(0, 5);
    if ((sim != "sim1-" && sim != "sim2-")) {
        throw UsageError("unknown preset '" + std::string(name) + "'");
    }
    const bool first = sim == "sim1-";
    const Family family = parse_family(name.substr(5));

    MatrixParamSet params;
    if (first) {
        params.m = rows34({0, 1, -1, 0,
                           1, 0, 0, -1,
                           0, 1, -1, 0});
        params.a = rows34({1, -1, 0, 1,
                           1, -1, 0, 1,
                           1, -1, 0, 1});
    } else {
        params.m = rows34({-5, 0, 0, 1,
                           -2, 1, 3, 0,
                           0, 0, 6, 1});
        params.a = rows34({1, -1, 0, 1,
                           0.5, -1, 0, -0.5,
                           0, -1, 0, 0});
    }
    params.sigma = shared_sigma();
    params.psi = shared_psi();

    MixingLaw law;
    switch (family) {
    case Family::gh: law = first ? GhLaw{2.0, 2.0} : GhLaw{2.0, -2.0}; break;
    case Family::vg: law = VgLaw{first ? 2.0 : 4.0}; break;
    case Family::nig: law = NigLaw{first ? 4.0 : 2.0}; break;
    }
    return {std::string(name), {params, law}};
}

}  // namespace matskew
