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

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include "matskew/ecm.hpp"

namespace matskew::io {

/// Observations of one shape, plus the generating location when known.
struct DatasetFile {
    Eigen::Index rows = 0;
    Eigen::Index cols = 0;
    ecm::Dataset observations;
    std::optional<Matrix> location;
};

/// {"n": .., "p": .., "count": .., "observations": [[row-major n*p values], ...],
///  "location": [row-major n*p values]}  ("location" optional).
/// Observations may also be given as nested rows.
std::string dataset_to_json(const DatasetFile& file);
DatasetFile parse_dataset_json(std::string_view text, const std::string& source);

/// Long format with header obs,row,col,value (0-based indices).
DatasetFile parse_dataset_csv(std::string_view text, const std::string& source);

/// Chooses the CSV reader for a .csv extension and JSON otherwise.
DatasetFile read_dataset(const std::filesystem::path& path);

std::string read_text(const std::filesystem::path& path);

/// Writes through a temporary file in the same directory and renames it,
/// so readers never see partial output.
void write_text_atomic(const std::filesystem::path& path, std::string_view content);

/// 1-based line number of a byte offset, for error messages.
std::size_t line_of(std::string_view text, std::size_t offset);

}  // namespace matskew::io
