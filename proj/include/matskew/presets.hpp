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

#include <string>
#include <string_view>
#include <vector>

#include "matskew/matrixdist.hpp"

namespace matskew {

/// Built-in simulation settings: 3 x 4 matrices, two location/skewness
/// designs sharing one pair of scale matrices, each with GH, VG and NIG
/// mixing laws.
struct Preset {
    std::string name;
    MatrixSkewModel model;
};

/// Names of the form "sim1-gh", "sim2-nig", ...
std::vector<std::string> preset_names();

/// Throws UsageError for unknown names.
Preset preset(std::string_view name);

}  // namespace matskew
