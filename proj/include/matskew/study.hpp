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

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "matskew/dataset_io.hpp"
#include "matskew/ecm.hpp"

namespace matskew::study {

struct SimulationConfig {
    std::string name;
    MatrixSkewModel model;
    int replicates = 1;
    int observations = 100;
    std::uint64_t seed = 0;
};

/// JSON config: either {"preset": "sim1-vg", ...} or an explicit model
///   {"family": "gh", "m": [[..]], "a": [[..]], "sigma": [[..]], "psi": [[..]],
///    "omega": .., "lambda": ..}        (VG: "gamma", NIG: "gamma_tilde")
/// plus optional "replicates", "observations", "seed", "name".
SimulationConfig parse_simulation_config(std::string_view text, const std::string& source);

SimulationConfig preset_config(std::string_view preset_name, int replicates, std::uint64_t seed);

/// Replicate r is drawn from stream r of the configured seed.
ecm::Dataset simulate_replicate(const SimulationConfig& config, int replicate);

/// Logical CPUs, or MATSKEW_THREADS when set to a positive integer.
unsigned default_threads();

struct ReplicateOutcome {
    bool failed = false;
    std::string error;
    ecm::FitResult result;
};

/// Fits each dataset independently on up to `threads` workers. Outcomes are
/// stored by index, so the result does not depend on scheduling.
std::vector<ReplicateOutcome> fit_replicates(const std::vector<ecm::Dataset>& datasets,
                                             const ecm::FitConfig& config, unsigned threads);

struct MatrixSummary {
    Matrix mean;
    Matrix sd;
};

struct ScalarSummary {
    std::string name;
    double truth = 0.0;
    double mean = 0.0;
    double sd = 0.0;
};

struct AggregateReport {
    std::string preset;
    std::string family;
    int replicates = 0;
    int observations = 0;
    std::uint64_t seed = 0;
    int converged = 0;
    int not_converged = 0;
    int failed = 0;
    MatrixSkewModel truth;
    // Summaries over converged replicates only (population SD).
    MatrixSummary m;
    MatrixSummary a;
    MatrixSummary sigma;
    MatrixSummary psi;
    std::vector<ScalarSummary> concentration;
    // GH only: lambda-hat SD above the threshold.
    bool lambda_dispersion_flag = false;
    std::vector<ReplicateOutcome> outcomes;
};

inline constexpr double lambda_dispersion_threshold = 1.0;

AggregateReport aggregate(const SimulationConfig& config, std::vector<ReplicateOutcome> outcomes);

/// Simulate, fit and aggregate.
AggregateReport reproduce(const SimulationConfig& config, const ecm::FitConfig& fit_config, unsigned threads);

/// Fixed-precision table; numbers printed with `digits` decimals.
std::string report_text(const AggregateReport& report, int digits = 3);
/// JSON twin with the same numbers rounded to the same precision.
std::string report_json(const AggregateReport& report, int digits = 3);

std::string fit_result_json(const ecm::FitResult& result);

struct Histogram {
    Eigen::Index column = 0;
    std::vector<double> edges;
    std::vector<std::size_t> counts;

    std::size_t total() const;
    double peak_fraction() const;
};

/// Values of one column pooled over rows and observations.
std::vector<double> pooled_column(const ecm::Dataset& data, Eigen::Index column);

/// One histogram per column. Without a range each column spans its own
/// min..max; the last bin is closed on the right.
std::vector<Histogram> column_histograms(const ecm::Dataset& data, int bins,
                                         std::optional<std::pair<double, double>> range = std::nullopt);

/// column,bin_left,bin_right,count
std::string histograms_csv(const std::vector<Histogram>& hists);
/// column,location: column means of the location matrix.
std::string location_csv(const Matrix& location);

/// Bowley quartile skewness (Q3 + Q1 - 2 Q2) / (Q3 - Q1).
double quartile_skewness(std::vector<double> values);

}  // namespace matskew::study
