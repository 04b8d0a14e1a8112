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

#include "matskew/dataset_io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <tuple>

#include <json.hpp>

#include "matskew/error.hpp"

namespace matskew::io {
namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& source, std::size_t line, const std::string& what)
{
    throw InputError(source + ":" + std::to_string(line) + ": " + what);
}

Eigen::Index read_dim(const json& doc, const char* key, const std::string& source)
{
    if (!doc.contains(key) || !doc[key].is_number_integer() || doc[key].get<long long>() < 1) {
        throw InputError(source + ": field '" + key + "' must be a positive integer");
    }
    return static_cast<Eigen::Index>(doc[key].get<long long>());
}

Matrix read_matrix(const json& value, Eigen::Index n, Eigen::Index p, const std::string& what)
{
    Matrix m(n, p);
    if (!value.is_array()) {
        throw InputError(what + " must be an array");
    }
    const bool nested = !value.empty() && value.front().is_array();
    if (nested) {
        if (static_cast<Eigen::Index>(value.size()) != n) {
            throw InputError(what + " must have " + std::to_string(n) + " rows");
        }
        for (Eigen::Index i = 0; i < n; ++i) {
            const json& row = value[static_cast<std::size_t>(i)];
            if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != p) {
                throw InputError(what + " row " + std::to_string(i) + " must have " + std::to_string(p) +
                                 " entries");
            }
            for (Eigen::Index j = 0; j < p; ++j) {
                const json& v = row[static_cast<std::size_t>(j)];
                if (!v.is_number()) {
                    throw InputError(what + " has a non-numeric entry");
                }
                m(i, j) = v.get<double>();
            }
        }
    } else {
        if (static_cast<Eigen::Index>(value.size()) != n * p) {
            throw InputError(what + " must have " + std::to_string(n * p) + " values");
        }
        for (Eigen::Index k = 0; k < n * p; ++k) {
            const json& v = value[static_cast<std::size_t>(k)];
            if (!v.is_number()) {
                throw InputError(what + " has a non-numeric entry");
            }
            m(k / p, k % p) = v.get<double>();
        }
    }
    if (!m.allFinite()) {
        throw InputError(what + " has non-finite entries");
    }
    return m;
}

json row_major(const Matrix& m)
{
    json out = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            out.push_back(m(i, j));
        }
    }
    return out;
}

}  // namespace

std::size_t line_of(std::string_view text, std::size_t offset)
{
    offset = std::min(offset, text.size());
    std::size_t line = 1;
    for (std::size_t k = 0; k < offset; ++k) {
        if (text[k] == '\n') {
            ++line;
        }
    }
    return line;
}

std::string dataset_to_json(const DatasetFile& file)
{
    json doc;
    doc["n"] = file.rows;
    doc["p"] = file.cols;
    doc["count"] = file.observations.size();
    json obs = json::array();
    for (const Matrix& x : file.observations) {
        obs.push_back(row_major(x));
    }
    doc["observations"] = std::move(obs);
    if (file.location) {
        doc["location"] = row_major(*file.location);
    }
    return doc.dump() + "\n";
}

DatasetFile parse_dataset_json(std::string_view text, const std::string& source)
{
    json doc;
    try {
        doc = json::parse(text.begin(), text.end());
    } catch (const json::parse_error& e) {
        fail(source, line_of(text, e.byte == 0 ? 0 : e.byte - 1), "invalid JSON");
    }
    if (!doc.is_object()) {
        throw InputError(source + ": dataset must be a JSON object");
    }
    DatasetFile out;
    out.rows = read_dim(doc, "n", source);
    out.cols = read_dim(doc, "p", source);
    if (!doc.contains("observations") || !doc["observations"].is_array() || doc["observations"].empty()) {
        throw InputError(source + ": field 'observations' must be a nonempty array");
    }
    const json& obs = doc["observations"];
    if (doc.contains("count")) {
        if (!doc["count"].is_number_integer() || doc["count"].get<long long>() != static_cast<long long>(obs.size())) {
            throw InputError(source + ": 'count' does not match the number of observations");
        }
    }
    out.observations.reserve(obs.size());
    for (std::size_t i = 0; i < obs.size(); ++i) {
        out.observations.push_back(
            read_matrix(obs[i], out.rows, out.cols, source + ": observation " + std::to_string(i)));
    }
    if (doc.contains("location")) {
        out.location = read_matrix(doc["location"], out.rows, out.cols, source + ": location");
    }
    return out;
}

DatasetFile parse_dataset_csv(std::string_view text, const std::string& source)
{
    std::map<long long, std::map<std::pair<long long, long long>, double>> cells;
    long long max_row = -1, max_col = -1;
    std::size_t line_no = 0;
    bool header_seen = false;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t end = std::min(text.find('\n', pos), text.size());
        std::string_view line = text.substr(pos, end - pos);
        pos = end + 1;
        ++line_no;
        if (!line.empty() && line.back() == '\r') {
            line.remove_suffix(1);
        }
        if (line.empty()) {
            if (end == text.size()) {
                break;
            }
            continue;
        }
        if (!header_seen) {
            if (line != "obs,row,col,value") {
                fail(source, line_no, "expected header 'obs,row,col,value'");
            }
            header_seen = true;
            continue;
        }
        std::string_view fields[4];
        std::size_t start = 0;
        for (int f = 0; f < 4; ++f) {
            const std::size_t comma = f < 3 ? line.find(',', start) : line.size();
            if (comma == std::string_view::npos) {
                fail(source, line_no, "expected 4 fields");
            }
            fields[f] = line.substr(start, comma - start);
            start = comma + 1;
        }
        if (fields[3].find(',') != std::string_view::npos) {
            fail(source, line_no, "expected 4 fields");
        }
        long long idx[3];
        for (int f = 0; f < 3; ++f) {
            const auto r = std::from_chars(fields[f].data(), fields[f].data() + fields[f].size(), idx[f]);
            if (r.ec != std::errc() || r.ptr != fields[f].data() + fields[f].size() || idx[f] < 0) {
                fail(source, line_no, "index must be a nonnegative integer");
            }
        }
        double value = 0.0;
        {
            const std::string tmp(fields[3]);
            std::size_t used = 0;
            try {
                value = std::stod(tmp, &used);
            } catch (const std::exception&) {
                used = 0;
            }
            if (used == 0 || used != tmp.size() || !std::isfinite(value)) {
                fail(source, line_no, "value must be a finite number");
            }
        }
        auto& obs = cells[idx[0]];
        if (!obs.emplace(std::make_pair(idx[1], idx[2]), value).second) {
            fail(source, line_no, "duplicate cell");
        }
        max_row = std::max(max_row, idx[1]);
        max_col = std::max(max_col, idx[2]);
        if (end == text.size()) {
            break;
        }
    }
    if (!header_seen || cells.empty()) {
        throw InputError(source + ": no observations");
    }
    DatasetFile out;
    out.rows = static_cast<Eigen::Index>(max_row + 1);
    out.cols = static_cast<Eigen::Index>(max_col + 1);
    long long expected = 0;
    for (const auto& [obs, entries] : cells) {
        if (obs != expected) {
            throw InputError(source + ": observation indices must be 0.." + std::to_string(cells.size() - 1));
        }
        ++expected;
        if (static_cast<Eigen::Index>(entries.size()) != out.rows * out.cols) {
            throw InputError(source + ": observation " + std::to_string(obs) + " is incomplete");
        }
        Matrix m(out.rows, out.cols);
        for (const auto& [rc, v] : entries) {
            m(rc.first, rc.second) = v;
        }
        out.observations.push_back(std::move(m));
    }
    return out;
}

std::string read_text(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw InputError(path.string() + ": cannot open file");
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

DatasetFile read_dataset(const std::filesystem::path& path)
{
    const std::string text = read_text(path);
    if (path.extension() == ".csv") {
        return parse_dataset_csv(text, path.string());
    }
    return parse_dataset_json(text, path.string());
}

void write_text_atomic(const std::filesystem::path& path, std::string_view content)
{
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw std::runtime_error(path.string() + ": cannot write file");
        }
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!out) {
            throw std::runtime_error(path.string() + ": write failed");
        }
    }
    std::filesystem::rename(tmp, path);
}

}  // namespace matskew::io
