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

// matskew: simulate, fit and summarize skewed matrix variate data.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "matskew/dataset_io.hpp"
#include "matskew/ecm.hpp"
#include "matskew/error.hpp"
#include "matskew/presets.hpp"
#include "matskew/study.hpp"

namespace fs = std::filesystem;
using namespace matskew;

namespace {

constexpr int kExitFit = 1;
constexpr int kExitInput = 2;

void ensure_directory(const fs::path& dir)
{
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec || !fs::is_directory(dir)) {
        throw UsageError(dir.string() + ": cannot create output directory");
    }
}

std::string replicate_file_name(const std::string& name, int r, int total)
{
    const int width = std::max(3, static_cast<int>(std::to_string(total - 1).size()));
    std::string idx = std::to_string(r);
    idx.insert(0, static_cast<std::size_t>(width) - std::min<std::size_t>(idx.size(), width), '0');
    return name + "-r" + idx + ".json";
}

int cmd_simulate(const std::string& config_path, const std::string& out_dir)
{
    const auto config = study::parse_simulation_config(io::read_text(config_path), config_path);
    std::vector<std::string> contents;
    for (int r = 0; r < config.replicates; ++r) {
        io::DatasetFile file;
        file.rows = config.model.rows();
        file.cols = config.model.cols();
        file.observations = study::simulate_replicate(config, r);
        file.location = config.model.params.m;
        contents.push_back(io::dataset_to_json(file));
    }
    ensure_directory(out_dir);
    for (int r = 0; r < config.replicates; ++r) {
        io::write_text_atomic(fs::path(out_dir) / replicate_file_name(config.name, r, config.replicates),
                              contents[static_cast<std::size_t>(r)]);
    }
    std::printf("wrote %d dataset(s) to %s\n", config.replicates, out_dir.c_str());
    return 0;
}

int cmd_fit(const std::string& data_path, const std::string& family, double epsilon, int max_iter,
            std::uint64_t seed, bool plain, const std::string& out)
{
    ecm::FitConfig config;
    config.family = parse_family(family);
    config.epsilon = epsilon;
    config.max_iter = max_iter;
    config.init_seed = seed;
    config.accelerate = !plain;
    ecm::validate(config);
    const auto file = io::read_dataset(data_path);
    ecm::FitResult result;
    try {
        result = ecm::fit(file.observations, config);
    } catch (const FitError& e) {
        std::fprintf(stderr, "matskew fit: %s\n", e.what());
        return kExitFit;
    }
    io::write_text_atomic(out, study::fit_result_json(result));
    for (const auto& w : result.warnings) {
        std::fprintf(stderr, "warning: %s\n", w.c_str());
    }
    std::printf("%s after %d iterations, log-likelihood %.6f\n", result.converged ? "converged" : "not converged",
                result.iterations, result.loglik_trace.back());
    return 0;
}

int cmd_reproduce(const std::string& preset_name, int replicates, std::uint64_t seed, unsigned threads, bool plain,
                  const std::string& out_dir)
{
    const auto config = study::preset_config(preset_name, replicates, seed);
    ecm::FitConfig fit_config;
    fit_config.family = family_of(config.model.mixing);
    fit_config.accelerate = !plain;
    const auto report = study::reproduce(config, fit_config, threads == 0 ? study::default_threads() : threads);
    const std::string text = study::report_text(report);
    const std::string json = study::report_json(report);
    ensure_directory(out_dir);
    io::write_text_atomic(fs::path(out_dir) / (config.name + "-report.txt"), text);
    io::write_text_atomic(fs::path(out_dir) / (config.name + "-report.json"), json);
    std::fputs(text.c_str(), stdout);
    return 0;
}

int cmd_marginals(const std::string& data_path, int bins, const std::vector<double>& range, const std::string& out)
{
    const auto file = io::read_dataset(data_path);
    std::optional<std::pair<double, double>> r;
    if (!range.empty()) {
        r = std::make_pair(range[0], range[1]);
    }
    const auto hists = study::column_histograms(file.observations, bins, r);
    const std::string csv = study::histograms_csv(hists);
    std::optional<std::string> loc;
    if (file.location) {
        loc = study::location_csv(*file.location);
    }
    io::write_text_atomic(out, csv);
    if (loc) {
        fs::path lp(out);
        lp.replace_filename(lp.stem().string() + "-location.csv");
        io::write_text_atomic(lp, *loc);
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Skewed matrix variate distributions: simulation and ECM fitting"};
    app.require_subcommand(1);

    std::string config_path, out, data_path, family, preset_name;
    double epsilon = 1e-6;
    int max_iter = 2000;
    std::uint64_t seed = 0;
    int replicates = 10;
    int bins = 30;
    unsigned threads = 0;
    bool plain = false;
    std::vector<double> range;

    auto* sim = app.add_subcommand("simulate", "Draw replicate datasets from a JSON config");
    sim->add_option("--config", config_path, "Simulation config (JSON)")->required();
    sim->add_option("--out", out, "Output directory")->required();

    auto* fitc = app.add_subcommand("fit", "Fit a model to one dataset");
    fitc->add_option("--data", data_path, "Dataset (JSON, or long CSV obs,row,col,value)")->required();
    fitc->add_option("--family", family, "gh, vg or nig")->required()->check(CLI::IsMember({"gh", "vg", "nig"}));
    fitc->add_option("--epsilon", epsilon, "Aitken tolerance")->capture_default_str();
    fitc->add_option("--max-iter", max_iter, "Maximum ECM sweeps")->capture_default_str();
    fitc->add_option("--seed", seed, "Initialization seed")->capture_default_str();
    fitc->add_flag("--no-accelerate", plain, "Plain ECM without extrapolation");
    fitc->add_option("--out", out, "Output file (JSON)")->required();

    auto* rep = app.add_subcommand("reproduce", "Simulate, fit and summarize a built-in preset");
    rep->add_option("--preset", preset_name, "sim1-gh, sim1-vg, sim1-nig, sim2-gh, sim2-vg or sim2-nig")
        ->required()
        ->check(CLI::IsMember(preset_names()));
    rep->add_option("--replicates", replicates, "Number of datasets")->capture_default_str();
    rep->add_option("--seed", seed, "Simulation seed")->capture_default_str();
    rep->add_option("--threads", threads, "Concurrent fits (default: MATSKEW_THREADS or logical CPUs)");
    rep->add_flag("--no-accelerate", plain, "Plain ECM without extrapolation");
    rep->add_option("--out", out, "Output directory")->required();

    auto* marg = app.add_subcommand("marginals", "Per-column pooled histograms as CSV");
    marg->add_option("--data", data_path, "Dataset file")->required();
    marg->add_option("--bins", bins, "Bins per column")->capture_default_str();
    marg->add_option("--range", range, "Common lower and upper edge")->expected(2);
    marg->add_option("--out", out, "Output CSV")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitInput;
    }

    try {
        if (*sim) {
            return cmd_simulate(config_path, out);
        }
        if (*fitc) {
            return cmd_fit(data_path, family, epsilon, max_iter, seed, plain, out);
        }
        if (*rep) {
            return cmd_reproduce(preset_name, replicates, seed, threads, plain, out);
        }
        return cmd_marginals(data_path, bins, range, out);
    } catch (const UsageError& e) {
        std::fprintf(stderr, "matskew: %s\n", e.what());
        return kExitInput;
    } catch (const DomainError& e) {
        std::fprintf(stderr, "matskew: %s\n", e.what());
        return kExitInput;
    } catch (const FitError& e) {
        std::fprintf(stderr, "matskew: %s\n", e.what());
        return kExitFit;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "matskew: %s\n", e.what());
        return kExitFit;
    }
}
