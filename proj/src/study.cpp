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

#include "matskew/study.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <mutex>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "matskew/error.hpp"
#include "matskew/presets.hpp"

namespace matskew::study {
namespace {

using nlohmann::json;

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

std::string fixed(double v, int digits)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    return buf;
}

// The value the text table shows, read back so both outputs agree exactly.
double shown(double v, int digits) { return std::stod(fixed(v, digits)); }

Matrix json_matrix(const json& doc, const char* key, const std::string& source)
{
    if (!doc.contains(key) || !doc[key].is_array() || doc[key].empty() || !doc[key].front().is_array()) {
        throw InputError(source + ": field '" + key + "' must be an array of rows");
    }
    const json& rows = doc[key];
    const std::size_t p = rows.front().size();
    Matrix m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(p));
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (!rows[i].is_array() || rows[i].size() != p) {
            throw InputError(source + ": field '" + key + "' has rows of different lengths");
        }
        for (std::size_t j = 0; j < p; ++j) {
            if (!rows[i][j].is_number()) {
                throw InputError(source + ": field '" + key + "' has a non-numeric entry");
            }
            m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j].get<double>();
        }
    }
    return m;
}

double json_number(const json& doc, const char* key, const std::string& source)
{
    if (!doc.contains(key) || !doc[key].is_number()) {
        throw InputError(source + ": field '" + key + "' must be a number");
    }
    return doc[key].get<double>();
}

json nested(const Matrix& m)
{
    json rows = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            row.push_back(m(i, j));
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

json nested_shown(const Matrix& m, int digits)
{
    json rows = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            row.push_back(shown(m(i, j), digits));
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

json mixing_json(const MixingLaw& law)
{
    return std::visit(overloaded{[](const GhLaw& g) { return json{{"omega", g.omega}, {"lambda", g.lambda}}; },
                                 [](const VgLaw& v) { return json{{"gamma", v.gamma}}; },
                                 [](const NigLaw& n) { return json{{"gamma_tilde", n.gamma_tilde}}; }},
                      law);
}

std::vector<std::pair<std::string, double>> concentration_values(const MixingLaw& law)
{
    return std::visit(
        overloaded{[](const GhLaw& g) { return std::vector<std::pair<std::string, double>>{{"omega", g.omega}, {"lambda", g.lambda}}; },
                   [](const VgLaw& v) { return std::vector<std::pair<std::string, double>>{{"gamma", v.gamma}}; },
                   [](const NigLaw& n) {
                       return std::vector<std::pair<std::string, double>>{{"gamma_tilde", n.gamma_tilde}};
                   }},
        law);
}

MatrixSummary summarize(const std::vector<const Matrix*>& xs, Eigen::Index rows, Eigen::Index cols)
{
    MatrixSummary s{Matrix::Zero(rows, cols), Matrix::Zero(rows, cols)};
    if (xs.empty()) {
        s.mean.setConstant(std::numeric_limits<double>::quiet_NaN());
        s.sd.setConstant(std::numeric_limits<double>::quiet_NaN());
        return s;
    }
    for (const Matrix* x : xs) {
        s.mean += *x;
    }
    s.mean /= static_cast<double>(xs.size());
    for (const Matrix* x : xs) {
        s.sd.array() += (*x - s.mean).array().square();
    }
    s.sd = (s.sd / static_cast<double>(xs.size())).cwiseSqrt();
    return s;
}

void append_matrix(std::ostringstream& out, const char* title, const MatrixSummary& s, int digits)
{
    out << title << "\n";
    for (Eigen::Index i = 0; i < s.mean.rows(); ++i) {
        out << " ";
        for (Eigen::Index j = 0; j < s.mean.cols(); ++j) {
            std::string cell = fixed(s.mean(i, j), digits) + " (" + fixed(s.sd(i, j), digits) + ")";
            out << " " << std::string(cell.size() < 18 ? 18 - cell.size() : 0, ' ') << cell;
        }
        out << "\n";
    }
}

}  // namespace

SimulationConfig preset_config(std::string_view preset_name, int replicates, std::uint64_t seed)
{
    if (replicates < 1) {
        throw UsageError("replicates must be at least 1");
    }
    const Preset p = preset(preset_name);
    SimulationConfig c;
    c.name = p.name;
    c.model = p.model;
    c.replicates = replicates;
    c.observations = 100;
    c.seed = seed;
    return c;
}

SimulationConfig parse_simulation_config(std::string_view text, const std::string& source)
{
    json doc;
    try {
        doc = json::parse(text.begin(), text.end());
    } catch (const json::parse_error& e) {
        throw InputError(source + ":" + std::to_string(io::line_of(text, e.byte == 0 ? 0 : e.byte - 1)) +
                         ": invalid JSON");
    }
    if (!doc.is_object()) {
        throw InputError(source + ": config must be a JSON object");
    }
    SimulationConfig c;
    if (doc.contains("preset")) {
        if (!doc["preset"].is_string()) {
            throw InputError(source + ": field 'preset' must be a string");
        }
        try {
            const Preset p = preset(doc["preset"].get<std::string>());
            c.name = p.name;
            c.model = p.model;
        } catch (const UsageError& e) {
            throw InputError(source + ": " + e.what());
        }
    } else {
        if (!doc.contains("family") || !doc["family"].is_string()) {
            throw InputError(source + ": field 'family' (gh, vg or nig) or 'preset' is required");
        }
        Family family;
        try {
            family = parse_family(doc["family"].get<std::string>());
        } catch (const UsageError& e) {
            throw InputError(source + ": " + e.what());
        }
        c.name = "custom-" + std::string(family_name(family));
        c.model.params = {json_matrix(doc, "m", source), json_matrix(doc, "a", source),
                          json_matrix(doc, "sigma", source), json_matrix(doc, "psi", source)};
        switch (family) {
        case Family::gh:
            c.model.mixing = GhLaw{json_number(doc, "omega", source), json_number(doc, "lambda", source)};
            break;
        case Family::vg: c.model.mixing = VgLaw{json_number(doc, "gamma", source)}; break;
        case Family::nig: c.model.mixing = NigLaw{json_number(doc, "gamma_tilde", source)}; break;
        }
        try {
            validate(c.model);
        } catch (const std::exception& e) {
            throw InputError(source + ": invalid model: " + e.what());
        }
    }
    auto positive_int = [&](const char* key, int fallback) {
        if (!doc.contains(key)) {
            return fallback;
        }
        if (!doc[key].is_number_integer() || doc[key].get<long long>() < 1 ||
            doc[key].get<long long>() > 1'000'000) {
            throw InputError(source + ": field '" + key + "' must be a positive integer");
        }
        return static_cast<int>(doc[key].get<long long>());
    };
    c.replicates = positive_int("replicates", 1);
    c.observations = positive_int("observations", 100);
    if (doc.contains("seed")) {
        if (!doc["seed"].is_number_unsigned()) {
            throw InputError(source + ": field 'seed' must be a nonnegative integer");
        }
        c.seed = doc["seed"].get<std::uint64_t>();
    }
    if (doc.contains("name")) {
        if (!doc["name"].is_string() || doc["name"].get<std::string>().empty()) {
            throw InputError(source + ": field 'name' must be a nonempty string");
        }
        c.name = doc["name"].get<std::string>();
    }
    return c;
}

ecm::Dataset simulate_replicate(const SimulationConfig& config, int replicate)
{
    RandomStream rng = RandomStream::derive(config.seed, static_cast<std::uint64_t>(replicate));
    return sample(rng, config.model, static_cast<std::size_t>(config.observations));
}

unsigned default_threads()
{
    if (const char* env = std::getenv("MATSKEW_THREADS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v > 0) {
            return static_cast<unsigned>(v);
        }
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

std::vector<ReplicateOutcome> fit_replicates(const std::vector<ecm::Dataset>& datasets,
                                             const ecm::FitConfig& config, unsigned threads)
{
    std::vector<ReplicateOutcome> out(datasets.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t k = next++; k < datasets.size(); k = next++) {
            try {
                out[k].result = ecm::fit(datasets[k], config);
            } catch (const std::exception& e) {
                out[k].failed = true;
                out[k].error = e.what();
            }
        }
    };
    const unsigned n = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(datasets.size())));
    if (n == 1) {
        worker();
        return out;
    }
    std::vector<std::thread> pool;
    pool.reserve(n);
    for (unsigned t = 0; t < n; ++t) {
        pool.emplace_back(worker);
    }
    for (auto& t : pool) {
        t.join();
    }
    return out;
}

AggregateReport aggregate(const SimulationConfig& config, std::vector<ReplicateOutcome> outcomes)
{
    AggregateReport r;
    r.preset = config.name;
    r.family = std::string(family_name(family_of(config.model.mixing)));
    r.replicates = static_cast<int>(outcomes.size());
    r.observations = config.observations;
    r.seed = config.seed;
    r.truth = config.model;

    std::vector<const Matrix*> ms, as, ss, ps;
    std::vector<std::vector<double>> conc;
    const auto truth_conc = concentration_values(config.model.mixing);
    conc.resize(truth_conc.size());
    for (const auto& o : outcomes) {
        if (o.failed) {
            ++r.failed;
            continue;
        }
        if (!o.result.converged) {
            ++r.not_converged;
            continue;
        }
        ++r.converged;
        const auto& pr = o.result.model.params;
        ms.push_back(&pr.m);
        as.push_back(&pr.a);
        ss.push_back(&pr.sigma);
        ps.push_back(&pr.psi);
        const auto vals = concentration_values(o.result.model.mixing);
        for (std::size_t k = 0; k < vals.size(); ++k) {
            conc[k].push_back(vals[k].second);
        }
    }
    const Eigen::Index n = config.model.rows();
    const Eigen::Index p = config.model.cols();
    r.m = summarize(ms, n, p);
    r.a = summarize(as, n, p);
    r.sigma = summarize(ss, n, n);
    r.psi = summarize(ps, p, p);
    for (std::size_t k = 0; k < truth_conc.size(); ++k) {
        ScalarSummary s{truth_conc[k].first, truth_conc[k].second, std::numeric_limits<double>::quiet_NaN(),
                        std::numeric_limits<double>::quiet_NaN()};
        if (!conc[k].empty()) {
            double sum = 0.0;
            for (double v : conc[k]) {
                sum += v;
            }
            s.mean = sum / static_cast<double>(conc[k].size());
            double ss2 = 0.0;
            for (double v : conc[k]) {
                ss2 += (v - s.mean) * (v - s.mean);
            }
            s.sd = std::sqrt(ss2 / static_cast<double>(conc[k].size()));
        }
        if (s.name == "lambda") {
            r.lambda_dispersion_flag = std::isfinite(s.sd) && s.sd > lambda_dispersion_threshold;
        }
        r.concentration.push_back(s);
    }
    r.outcomes = std::move(outcomes);
    return r;
}

AggregateReport reproduce(const SimulationConfig& config, const ecm::FitConfig& fit_config, unsigned threads)
{
    std::vector<ecm::Dataset> datasets;
    datasets.reserve(static_cast<std::size_t>(config.replicates));
    for (int r = 0; r < config.replicates; ++r) {
        datasets.push_back(simulate_replicate(config, r));
    }
    return aggregate(config, fit_replicates(datasets, fit_config, threads));
}

std::string report_text(const AggregateReport& r, int digits)
{
    std::ostringstream out;
    out << "preset " << r.preset << "  family " << r.family << "  replicates " << r.replicates
        << "  observations " << r.observations << "  seed " << r.seed << "\n";
    out << "converged " << r.converged << "  not converged " << r.not_converged << "  failed " << r.failed << "\n";
    out << "component-wise mean (sd) over converged replicates\n\n";
    append_matrix(out, "M", r.m, digits);
    append_matrix(out, "A", r.a, digits);
    append_matrix(out, "Sigma", r.sigma, digits);
    append_matrix(out, "Psi", r.psi, digits);
    out << "concentration\n";
    for (const auto& s : r.concentration) {
        out << "  " << s.name << "  truth " << fixed(s.truth, digits) << "  mean " << fixed(s.mean, digits) << " ("
            << fixed(s.sd, digits) << ")\n";
    }
    if (r.family == "gh") {
        out << "lambda dispersion " << (r.lambda_dispersion_flag ? "HIGH" : "ok") << " (threshold "
            << fixed(lambda_dispersion_threshold, digits) << ")\n";
    }
    out << "\nreplicate  status  iterations  loglik\n";
    for (std::size_t k = 0; k < r.outcomes.size(); ++k) {
        const auto& o = r.outcomes[k];
        out << "  " << k << "  ";
        if (o.failed) {
            out << "failed  -  -  " << o.error << "\n";
            continue;
        }
        out << (o.result.converged ? "converged" : "not-converged") << "  " << o.result.iterations << "  "
            << fixed(o.result.loglik_trace.back(), digits) << "\n";
    }
    return out.str();
}

std::string report_json(const AggregateReport& r, int digits)
{
    auto summary = [&](const MatrixSummary& s) {
        return json{{"mean", nested_shown(s.mean, digits)}, {"sd", nested_shown(s.sd, digits)}};
    };
    json doc;
    doc["preset"] = r.preset;
    doc["family"] = r.family;
    doc["replicates"] = r.replicates;
    doc["observations"] = r.observations;
    doc["seed"] = r.seed;
    doc["converged"] = r.converged;
    doc["not_converged"] = r.not_converged;
    doc["failed"] = r.failed;
    doc["digits"] = digits;
    doc["m"] = summary(r.m);
    doc["a"] = summary(r.a);
    doc["sigma"] = summary(r.sigma);
    doc["psi"] = summary(r.psi);
    json conc = json::object();
    for (const auto& s : r.concentration) {
        conc[s.name] = {{"truth", shown(s.truth, digits)}, {"mean", shown(s.mean, digits)}, {"sd", shown(s.sd, digits)}};
    }
    doc["concentration"] = std::move(conc);
    if (r.family == "gh") {
        doc["lambda_dispersion_flag"] = r.lambda_dispersion_flag;
    }
    json reps = json::array();
    for (const auto& o : r.outcomes) {
        if (o.failed) {
            reps.push_back({{"status", "failed"}, {"error", o.error}});
        } else {
            reps.push_back({{"status", o.result.converged ? "converged" : "not-converged"},
                            {"iterations", o.result.iterations},
                            {"loglik", shown(o.result.loglik_trace.back(), digits)}});
        }
    }
    doc["replicate_outcomes"] = std::move(reps);
    return doc.dump(2) + "\n";
}

std::string fit_result_json(const ecm::FitResult& result)
{
    json doc;
    const auto& pr = result.model.params;
    doc["family"] = std::string(family_name(family_of(result.model.mixing)));
    doc["converged"] = result.converged;
    doc["iterations"] = result.iterations;
    doc["aitken_bound"] = result.aitken_bound_available ? json(result.aitken_bound) : json(nullptr);
    doc["extrapolations"] = result.extrapolations;
    doc["m"] = nested(pr.m);
    doc["a"] = nested(pr.a);
    doc["sigma"] = nested(pr.sigma);
    doc["psi"] = nested(pr.psi);
    doc["mixing"] = mixing_json(result.model.mixing);
    doc["loglik"] = result.loglik_trace.back();
    doc["loglik_trace"] = result.loglik_trace;
    doc["warnings"] = result.warnings;
    return doc.dump(2) + "\n";
}

std::size_t Histogram::total() const
{
    std::size_t t = 0;
    for (auto c : counts) {
        t += c;
    }
    return t;
}

double Histogram::peak_fraction() const
{
    const std::size_t t = total();
    return t == 0 ? 0.0 : static_cast<double>(*std::max_element(counts.begin(), counts.end())) / static_cast<double>(t);
}

std::vector<double> pooled_column(const ecm::Dataset& data, Eigen::Index column)
{
    std::vector<double> out;
    for (const Matrix& x : data) {
        if (column < 0 || column >= x.cols()) {
            throw UsageError("column index out of range");
        }
        for (Eigen::Index i = 0; i < x.rows(); ++i) {
            out.push_back(x(i, column));
        }
    }
    return out;
}

std::vector<Histogram> column_histograms(const ecm::Dataset& data, int bins,
                                         std::optional<std::pair<double, double>> range)
{
    ecm::validate_dataset(data);
    if (bins < 1) {
        throw UsageError("bins must be at least 1");
    }
    if (range && !(range->first < range->second)) {
        throw UsageError("histogram range must satisfy lo < hi");
    }
    std::vector<Histogram> out;
    for (Eigen::Index j = 0; j < data.front().cols(); ++j) {
        const auto values = pooled_column(data, j);
        double lo, hi;
        if (range) {
            lo = range->first;
            hi = range->second;
        } else {
            const auto [mn, mx] = std::minmax_element(values.begin(), values.end());
            lo = *mn;
            hi = *mx;
            if (lo == hi) {
                lo -= 0.5;
                hi += 0.5;
            }
        }
        Histogram h;
        h.column = j;
        h.counts.assign(static_cast<std::size_t>(bins), 0);
        for (int k = 0; k <= bins; ++k) {
            h.edges.push_back(k == bins ? hi : lo + (hi - lo) * k / bins);
        }
        const double width = (hi - lo) / bins;
        for (double v : values) {
            if (v < lo || v > hi) {
                continue;
            }
            auto k = static_cast<std::size_t>(std::floor((v - lo) / width));
            k = std::min(k, static_cast<std::size_t>(bins - 1));
            // Keep the bin consistent with the printed edges.
            while (k > 0 && v < h.edges[k]) {
                --k;
            }
            while (k + 1 < static_cast<std::size_t>(bins) && v >= h.edges[k + 1]) {
                ++k;
            }
            ++h.counts[k];
        }
        out.push_back(std::move(h));
    }
    return out;
}

std::string histograms_csv(const std::vector<Histogram>& hists)
{
    std::ostringstream out;
    out << "column,bin_left,bin_right,count\n";
    char buf[96];
    for (const auto& h : hists) {
        for (std::size_t k = 0; k < h.counts.size(); ++k) {
            std::snprintf(buf, sizeof buf, "%ld,%.17g,%.17g,%zu\n", static_cast<long>(h.column), h.edges[k],
                          h.edges[k + 1], h.counts[k]);
            out << buf;
        }
    }
    return out.str();
}

std::string location_csv(const Matrix& location)
{
    std::ostringstream out;
    out << "column,location\n";
    char buf[64];
    for (Eigen::Index j = 0; j < location.cols(); ++j) {
        std::snprintf(buf, sizeof buf, "%ld,%.17g\n", static_cast<long>(j), location.col(j).mean());
        out << buf;
    }
    return out.str();
}

double quartile_skewness(std::vector<double> values)
{
    if (values.size() < 4) {
        throw UsageError("quartile skewness needs at least 4 values");
    }
    std::sort(values.begin(), values.end());
    auto quantile = [&](double q) {
        const double pos = q * static_cast<double>(values.size() - 1);
        const auto lo = static_cast<std::size_t>(std::floor(pos));
        const std::size_t hi = std::min(lo + 1, values.size() - 1);
        return values[lo] + (pos - static_cast<double>(lo)) * (values[hi] - values[lo]);
    };
    const double q1 = quantile(0.25), q2 = quantile(0.5), q3 = quantile(0.75);
    if (!(q3 > q1)) {
        return 0.0;
    }
    return (q3 + q1 - 2.0 * q2) / (q3 - q1);
}

}  // namespace matskew::study
