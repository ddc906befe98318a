// Copyright 2026 The vpm Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "vpm/experiment.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <limits>
#include <ostream>
#include <set>
#include <sstream>
#include <thread>

#include "json.hpp"
#include "vpm/errors.h"

namespace vpm {

using nlohmann::json;

std::string format_double(double v) {
    if (std::isnan(v)) {
        return "nan";
    }
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::vector<double> PhiGrid::values() const {
    std::vector<double> out(count);
    for (size_t k = 0; k < count; k++) {
        out[k] = k + 1 == count ? stop : start + (stop - start) * double(k) / double(count - 1);
    }
    return out;
}

namespace {

std::string read_file(const std::string &path, const char *what) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError(std::string("cannot open ") + what + " " + path);
    }
    std::stringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

json parse_json(const std::string &text, const char *what) {
    try {
        return json::parse(text);
    } catch (const json::exception &e) {
        throw ConfigError(std::string(what) + ": " + e.what());
    }
}

void check_keys(const json &obj, const std::set<std::string> &allowed, const std::string &where) {
    if (!obj.is_object()) {
        throw ConfigError(where + ": expected an object");
    }
    for (const auto &[key, value] : obj.items()) {
        if (!allowed.count(key)) {
            throw ConfigError(where + ": unknown key \"" + key + "\"");
        }
    }
}

// Accepts a scalar or an array of scalars.
template <typename T>
std::vector<T> scalar_or_list(const json &v, const std::string &where) {
    try {
        if (v.is_array()) {
            return v.get<std::vector<T>>();
        }
        return {v.get<T>()};
    } catch (const json::exception &e) {
        throw ConfigError(where + ": " + e.what());
    }
}

uint64_t to_budget(double v, const std::string &where) {
    if (!(v >= 1) || v > 1e18 || std::floor(v) != v) {
        throw ConfigError(where + ": sample budget must be a positive integer");
    }
    return uint64_t(v);
}

PhiGrid parse_grid(const json &g, const std::string &where) {
    check_keys(g, {"start", "stop", "count"}, where);
    try {
        PhiGrid grid{g.at("start").get<double>(), g.at("stop").get<double>(), g.at("count").get<size_t>()};
        if (grid.count < 2) {
            throw ConfigError(where + ": count must be at least 2");
        }
        if (!(grid.start < grid.stop)) {
            throw ConfigError(where + ": start must be below stop");
        }
        return grid;
    } catch (const json::exception &e) {
        throw ConfigError(where + ": " + e.what());
    }
}

NoiseEntry parse_noise_entry(const json &n) {
    check_keys(n, {"kind", "delta", "target_lambda", "pI", "px", "py", "pz"}, "noise");
    NoiseEntry e;
    try {
        e.kind = parse_noise_kind(n.at("kind").get<std::string>());
        if (e.kind == NoiseKind::kCustom) {
            PauliProbs p{n.at("pI").get<double>(), n.at("px").get<double>(), n.at("py").get<double>(),
                         n.at("pz").get<double>()};
            try {
                NoiseSpec::custom(p.p_i, p.p_x, p.p_y, p.p_z);
            } catch (const std::invalid_argument &err) {
                throw ConfigError(std::string("noise: ") + err.what());
            }
            if (n.contains("delta") || n.contains("target_lambda")) {
                throw ConfigError("noise: custom channels take explicit probabilities only");
            }
            e.custom = p;
            return e;
        }
    } catch (const json::exception &err) {
        throw ConfigError(std::string("noise: ") + err.what());
    }
    for (const char *k : {"pI", "px", "py", "pz"}) {
        if (n.contains(k)) {
            throw ConfigError(std::string("noise: \"") + k + "\" only applies to custom noise");
        }
    }
    if (n.contains("delta")) {
        e.deltas = scalar_or_list<double>(n["delta"], "noise.delta");
    }
    if (n.contains("target_lambda")) {
        e.target_lambdas = scalar_or_list<double>(n["target_lambda"], "noise.target_lambda");
    }
    if (e.deltas.empty() && e.target_lambdas.empty()) {
        throw ConfigError("noise: give \"delta\" or \"target_lambda\"");
    }
    for (double d : e.deltas) {
        if (!(d >= 0 && d < 1)) {
            throw ConfigError("noise: strength must lie in [0, 1)");
        }
    }
    for (double t : e.target_lambdas) {
        if (!(t > 0.5 && t <= 1)) {
            throw ConfigError("noise: target_lambda must lie in (0.5, 1]");
        }
    }
    return e;
}

std::vector<Scheme> parse_schemes(const json &v) {
    auto names = scalar_or_list<std::string>(v, "schemes");
    if (names.empty()) {
        throw ConfigError("schemes: list is empty");
    }
    std::vector<Scheme> out;
    for (const auto &s : names) {
        out.push_back(parse_scheme(s));
    }
    return out;
}

}  // namespace

SweepConfig parse_sweep_config(const std::string &json_text) {
    json doc = parse_json(json_text, "sweep config");
    check_keys(doc,
               {"description", "probes", "probe_file", "schemes", "phi", "phi_overrides", "noise", "M", "repeats",
                "seed", "accounting", "sampling", "out", "workers", "phi_ref"},
               "sweep config");
    SweepConfig c;
    if (!doc.contains("probes")) {
        throw ConfigError("sweep config: missing \"probes\"");
    }
    c.probes = scalar_or_list<std::string>(doc["probes"], "probes");
    if (c.probes.empty()) {
        throw ConfigError("probes: list is empty");
    }
    if (!doc.contains("schemes")) {
        throw ConfigError("sweep config: missing \"schemes\"");
    }
    c.schemes = parse_schemes(doc["schemes"]);
    if (!doc.contains("noise")) {
        throw ConfigError("sweep config: missing \"noise\"");
    }
    if (doc["noise"].is_array()) {
        for (const auto &n : doc["noise"]) {
            c.noise.push_back(parse_noise_entry(n));
        }
    } else {
        c.noise.push_back(parse_noise_entry(doc["noise"]));
    }
    if (c.noise.empty()) {
        throw ConfigError("noise: list is empty");
    }
    if (!doc.contains("M")) {
        throw ConfigError("sweep config: missing \"M\"");
    }
    for (double v : scalar_or_list<double>(doc["M"], "M")) {
        c.budgets.push_back(to_budget(v, "M"));
    }
    try {
        if (doc.contains("probe_file")) {
            c.probe_file = doc["probe_file"].get<std::string>();
        }
        if (doc.contains("phi")) {
            c.phi = parse_grid(doc["phi"], "phi");
        }
        if (doc.contains("phi_overrides")) {
            const auto &o = doc["phi_overrides"];
            if (!o.is_object()) {
                throw ConfigError("phi_overrides: expected an object keyed by probe name");
            }
            for (const auto &[name, g] : o.items()) {
                c.phi_overrides.emplace(name, parse_grid(g, "phi_overrides." + name));
            }
        }
        if (doc.contains("repeats")) {
            c.repeats = to_budget(doc["repeats"].get<double>(), "repeats");
        }
        if (doc.contains("seed")) {
            c.seed = doc["seed"].get<uint64_t>();
        }
        if (doc.contains("accounting")) {
            c.accounting = parse_accounting(doc["accounting"].get<std::string>());
        }
        if (doc.contains("sampling")) {
            c.mode = parse_sampling_mode(doc["sampling"].get<std::string>());
        }
        if (doc.contains("out")) {
            c.out = doc["out"].get<std::string>();
        }
        if (doc.contains("workers")) {
            c.workers = doc["workers"].get<size_t>();
        }
        if (doc.contains("phi_ref")) {
            c.phi_ref = doc["phi_ref"].get<double>();
        }
    } catch (const json::exception &e) {
        throw ConfigError(std::string("sweep config: ") + e.what());
    }
    return c;
}

SweepConfig load_sweep_config(const std::string &path) {
    return parse_sweep_config(read_file(path, "config file"));
}

ProbeRegistry::ProbeRegistry(const std::string &probe_file) {
    for (const auto &name : builtin_probe_names()) {
        available_.emplace(name, builtin_probe(name));
    }
    if (!probe_file.empty()) {
        for (auto &p : load_probes(probe_file)) {
            std::string name = p.name;
            available_.insert_or_assign(name, std::move(p));
        }
    }
}

const ProbeModel &ProbeRegistry::get(const std::string &name) {
    auto it = models_.find(name);
    if (it != models_.end()) {
        return *it->second;
    }
    auto src = available_.find(name);
    if (src == available_.end()) {
        throw ConfigError("unknown probe '" + name + "'");
    }
    try {
        auto model = std::make_unique<ProbeModel>(src->second);
        return *models_.emplace(name, std::move(model)).first->second;
    } catch (const NumericError &e) {
        throw ConfigError("probe " + name + ": " + e.what());
    }
}

std::vector<std::string> ProbeRegistry::names() const {
    std::vector<std::string> out;
    for (const auto &[name, p] : available_) {
        out.push_back(name);
    }
    return out;
}

size_t resolve_workers(size_t requested) {
    if (requested > 0) {
        return requested;
    }
    if (const char *env = std::getenv("VPM_WORKERS")) {
        char *end = nullptr;
        long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v > 0) {
            return size_t(v);
        }
    }
    return std::max<size_t>(1, std::thread::hardware_concurrency());
}

namespace {

PhiGrid grid_for(const SweepConfig &c, const Probe &probe) {
    auto it = c.phi_overrides.find(probe.name);
    if (it != c.phi_overrides.end()) {
        return it->second;
    }
    if (c.phi) {
        return *c.phi;
    }
    return PhiGrid{probe.domain_lo, probe.domain_hi, 21};
}

// Runs fn(0..count-1) on a pool; rethrows the failure with the lowest index.
template <typename Fn>
void parallel_for(size_t count, size_t workers, Fn fn) {
    std::atomic<size_t> next{0};
    std::vector<std::exception_ptr> errors(count);
    auto body = [&] {
        for (size_t k = next++; k < count; k = next++) {
            try {
                fn(k);
            } catch (...) {
                errors[k] = std::current_exception();
            }
        }
    };
    size_t n = std::min(workers, count);
    if (n <= 1) {
        body();
    } else {
        std::vector<std::thread> pool;
        for (size_t w = 0; w < n; w++) {
            pool.emplace_back(body);
        }
        for (auto &t : pool) {
            t.join();
        }
    }
    for (auto &e : errors) {
        if (e) {
            std::rethrow_exception(e);
        }
    }
}

struct Cell {
    const ProbeModel *model;
    NoiseSpec noise;
    std::string group;
    double phi;
};

}  // namespace

void validate_sweep(const SweepConfig &config, ProbeRegistry &registry) {
    if (config.schemes.empty()) {
        throw ConfigError("schemes: list is empty");
    }
    if (config.budgets.empty()) {
        throw ConfigError("M: list is empty");
    }
    for (const auto &[name, grid] : config.phi_overrides) {
        if (std::find(config.probes.begin(), config.probes.end(), name) == config.probes.end()) {
            throw ConfigError("phi_overrides: probe " + name + " is not part of the sweep");
        }
    }
    for (const auto &name : config.probes) {
        const auto &probe = registry.get(name).probe();
        PhiGrid g = grid_for(config, probe);
        if (g.count < 2) {
            throw ConfigError("phi grid for " + name + ": count must be at least 2");
        }
        double tol = 1e-12;
        if (g.start < probe.domain_lo - tol || g.stop > probe.domain_hi + tol) {
            throw ConfigError("phi grid for " + name + " leaves the inversion domain [" +
                              format_double(probe.domain_lo) + ", " + format_double(probe.domain_hi) + "]");
        }
        for (const auto &s : config.schemes) {
            if (shots_per_estimator(*std::min_element(config.budgets.begin(), config.budgets.end()), s,
                                    config.accounting) == 0) {
                throw ConfigError("M too small for scheme " + s.name());
            }
        }
    }
}

std::map<std::string, std::vector<ExperimentRecord>> run_sweep(const SweepConfig &config, ProbeRegistry &registry,
                                                               std::ostream *log) {
    validate_sweep(config, registry);
    size_t workers = resolve_workers(config.workers);

    // Calibration and cell layout happen up front so the record index of every
    // cell is fixed before any sampling.
    std::vector<Cell> cells;
    for (const auto &name : config.probes) {
        const ProbeModel &model = registry.get(name);
        auto phis = grid_for(config, model.probe()).values();
        for (const auto &entry : config.noise) {
            std::vector<NoiseSpec> specs;
            if (entry.custom) {
                specs.push_back(NoiseSpec::custom(entry.custom->p_i, entry.custom->p_x, entry.custom->p_y,
                                                  entry.custom->p_z));
            }
            for (double d : entry.deltas) {
                specs.push_back(NoiseSpec::preset(entry.kind, d));
            }
            for (double t : entry.target_lambdas) {
                double d = calibrate_strength(model.probe(), entry.kind, config.phi_ref, t);
                if (log) {
                    *log << "calibrated " << name << " " << to_string(entry.kind) << " lambda=" << t
                         << " -> delta=" << format_double(d) << "\n";
                }
                specs.push_back(NoiseSpec::preset(entry.kind, d));
            }
            for (const auto &spec : specs) {
                for (double phi : phis) {
                    cells.push_back({&model, spec, to_string(entry.kind), phi});
                }
            }
        }
    }
    // Build lazily constructed pipelines before the pool starts.
    for (const auto &s : config.schemes) {
        if (s.kind == Scheme::Kind::kQec) {
            for (const auto &name : config.probes) {
                try {
                    registry.get(name).qec();
                } catch (const std::invalid_argument &e) {
                    throw ConfigError("probe " + name + " cannot run qec: " + e.what());
                }
            }
        }
    }

    size_t per_cell = config.schemes.size() * config.budgets.size();
    std::vector<ExperimentRecord> records(cells.size() * per_cell);
    parallel_for(cells.size(), workers, [&](size_t k) {
        const Cell &cell = cells[k];
        const Probe &probe = cell.model->probe();
        double lambda = dominant_eigenvalue(probe, cell.phi, cell.noise);
        for (size_t s = 0; s < config.schemes.size(); s++) {
            auto report = theoretical_bias(*cell.model, cell.phi, cell.noise, config.schemes[s]);
            for (size_t b = 0; b < config.budgets.size(); b++) {
                ShotPlan plan{config.budgets[b], config.schemes[s], config.accounting, config.seed, config.mode};
                size_t idx = k * per_cell + s * config.budgets.size() + b;
                records[idx] = run_experiment(*cell.model, report, plan, config.repeats, idx, lambda);
            }
        }
    });

    std::map<std::string, std::vector<ExperimentRecord>> groups;
    for (size_t k = 0; k < cells.size(); k++) {
        auto &dst = groups[cells[k].group];
        for (size_t j = 0; j < per_cell; j++) {
            dst.push_back(records[k * per_cell + j]);
        }
    }
    for (auto &[kind, recs] : groups) {
        std::stable_sort(recs.begin(), recs.end(), [](const ExperimentRecord &a, const ExperimentRecord &b) {
            if (a.probe != b.probe) {
                return a.probe < b.probe;
            }
            if (a.scheme.ordinal() != b.scheme.ordinal()) {
                return a.scheme.ordinal() < b.scheme.ordinal();
            }
            if (a.delta != b.delta) {
                return a.delta < b.delta;
            }
            if (a.phi != b.phi) {
                return a.phi < b.phi;
            }
            return a.m < b.m;
        });
    }
    return groups;
}

const char *const kCsvHeader =
    "probe,scheme,n,phi,delta,lambda,M,accounting,seed,mu_ideal,mu_scheme,bias_theory,bias_emp,stat_theory,stat_emp,"
    "mse";

void write_csv(std::ostream &out, const std::vector<ExperimentRecord> &records) {
    out << kCsvHeader << "\n";
    for (const auto &r : records) {
        out << r.probe << ',' << r.scheme.name() << ',' << r.scheme.n << ',' << format_double(r.phi) << ','
            << format_double(r.delta) << ',' << format_double(r.lambda) << ',' << r.m << ','
            << to_string(r.accounting) << ',' << r.seed << ',' << format_double(r.mu_ideal) << ','
            << format_double(r.mu_scheme) << ',' << format_double(r.bias_theory) << ','
            << format_double(r.bias_emp) << ',' << format_double(r.stat_theory) << ',' << format_double(r.stat_emp)
            << ',' << format_double(r.mse) << "\n";
    }
}

std::string output_path_for(const std::string &out, const std::string &kind, size_t group_count) {
    if (group_count <= 1) {
        return out;
    }
    size_t slash = out.find_last_of('/');
    size_t dot = out.find_last_of('.');
    if (dot == std::string::npos || (slash != std::string::npos && dot < slash)) {
        return out + "_" + kind;
    }
    return out.substr(0, dot) + "_" + kind + out.substr(dot);
}

namespace {

std::string short_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

}  // namespace

std::string ExpectedOrder::text() const {
    if (std::isinf(hi)) {
        return ">= " + short_double(lo);
    }
    return "[" + short_double(lo) + ", " + short_double(hi) + "]";
}

ExpectedOrder expected_order(const ScalingCase &c) {
    constexpr double kInf = std::numeric_limits<double>::infinity();
    if (c.scheme.kind != Scheme::Kind::kVp || c.scheme.n == 1) {
        return {0.9, 1.1};
    }
    int n = c.scheme.n;
    if (c.kind == NoiseKind::kDephasing) {
        // Dominant eigenvector is exact, so only the eigenvalue ratio enters.
        return {n - 0.15, kInf};
    }
    if (n == 2) {
        return {1.85, 2.15};
    }
    if (c.probe == "steane7" || c.probe == "twin5") {
        return {2.85, kInf};
    }
    return {1.85, kInf};
}

ScalingConfig parse_scaling_config(const std::string &json_text) {
    json doc = parse_json(json_text, "scaling config");
    check_keys(doc, {"description", "probes", "probe_file", "schemes", "noise", "phi", "cases", "delta", "out",
                     "workers"},
               "scaling config");
    ScalingConfig c;
    try {
        if (doc.contains("probe_file")) {
            c.probe_file = doc["probe_file"].get<std::string>();
        }
        if (doc.contains("out")) {
            c.out = doc["out"].get<std::string>();
        }
        if (doc.contains("workers")) {
            c.workers = doc["workers"].get<size_t>();
        }
        if (doc.contains("delta")) {
            const auto &d = doc["delta"];
            check_keys(d, {"lo", "hi", "count"}, "delta");
            c.delta_lo = d.value("lo", c.delta_lo);
            c.delta_hi = d.value("hi", c.delta_hi);
            c.delta_count = d.value("count", c.delta_count);
        }
        bool has_product = doc.contains("probes") || doc.contains("schemes") || doc.contains("noise");
        if (has_product) {
            if (!doc.contains("probes") || !doc.contains("schemes") || !doc.contains("noise")) {
                throw ConfigError("scaling config: \"probes\", \"schemes\" and \"noise\" go together");
            }
            auto probes = scalar_or_list<std::string>(doc["probes"], "probes");
            auto schemes = parse_schemes(doc["schemes"]);
            auto kinds = scalar_or_list<std::string>(doc["noise"], "noise");
            auto phis = doc.contains("phi") ? scalar_or_list<double>(doc["phi"], "phi") : std::vector<double>{0.05};
            for (const auto &p : probes) {
                for (const auto &kind : kinds) {
                    for (const auto &s : schemes) {
                        for (double phi : phis) {
                            c.cases.push_back({p, s, parse_noise_kind(kind), phi});
                        }
                    }
                }
            }
        }
        if (doc.contains("cases")) {
            for (const auto &e : doc["cases"]) {
                check_keys(e, {"probe", "scheme", "noise", "phi"}, "cases");
                c.cases.push_back({e.at("probe").get<std::string>(), parse_scheme(e.at("scheme").get<std::string>()),
                                   parse_noise_kind(e.at("noise").get<std::string>()), e.value("phi", 0.05)});
            }
        }
    } catch (const json::exception &e) {
        throw ConfigError(std::string("scaling config: ") + e.what());
    }
    if (c.cases.empty()) {
        throw ConfigError("scaling config: no cases");
    }
    for (const auto &cs : c.cases) {
        if (cs.kind == NoiseKind::kCustom) {
            throw ConfigError("scaling config: custom noise has no strength to scale");
        }
    }
    if (c.delta_count < 6 || !(c.delta_lo > 0 && c.delta_lo < c.delta_hi && c.delta_hi < 1)) {
        throw ConfigError("scaling config: need at least 6 log-spaced strengths in (0, 1)");
    }
    return c;
}

ScalingConfig load_scaling_config(const std::string &path) {
    return parse_scaling_config(read_file(path, "config file"));
}

std::vector<ScalingResult> run_scaling(const ScalingConfig &config, ProbeRegistry &registry) {
    auto deltas = logspace(config.delta_lo, config.delta_hi, config.delta_count);
    std::vector<ScalingResult> results(config.cases.size());
    for (size_t k = 0; k < config.cases.size(); k++) {
        const auto &c = config.cases[k];
        const auto &model = registry.get(c.probe);
        if (c.phi < model.probe().domain_lo || c.phi > model.probe().domain_hi) {
            throw ConfigError("scaling case " + c.probe + ": phi outside the inversion domain");
        }
        if (c.scheme.kind == Scheme::Kind::kQec) {
            model.qec();
        }
        results[k].c = c;
        results[k].expected = expected_order(c);
    }
    parallel_for(config.cases.size(), resolve_workers(config.workers), [&](size_t k) {
        auto &r = results[k];
        try {
            const auto &model = registry.get(r.c.probe);
            std::vector<std::pair<double, double>> pts;
            for (double d : deltas) {
                pts.emplace_back(d, theoretical_bias(model, r.c.phi, NoiseSpec::preset(r.c.kind, d), r.c.scheme).bias);
            }
            r.fit = scaling_exponent(pts);
            r.pass = r.fit->r2 >= 0.99 && r.fit->slope >= r.expected.lo && r.fit->slope <= r.expected.hi;
        } catch (const std::exception &e) {
            r.error = e.what();
            r.pass = false;
        }
    });
    return results;
}

std::string scaling_report_json(const std::vector<ScalingResult> &results, const ScalingConfig &config) {
    json doc;
    doc["delta_grid"] = logspace(config.delta_lo, config.delta_hi, config.delta_count);
    json arr = json::array();
    size_t passed = 0;
    for (const auto &r : results) {
        json e;
        e["probe"] = r.c.probe;
        e["scheme"] = r.c.scheme.name();
        e["noise"] = to_string(r.c.kind);
        e["phi"] = r.c.phi;
        e["expected_slope"] = r.expected.text();
        if (r.fit) {
            e["slope"] = r.fit->slope;
            e["intercept"] = r.fit->intercept;
            e["r2"] = r.fit->r2;
        }
        if (!r.error.empty()) {
            e["error"] = r.error;
        }
        e["pass"] = r.pass;
        passed += r.pass;
        arr.push_back(e);
    }
    doc["results"] = arr;
    doc["passed"] = passed;
    doc["total"] = results.size();
    return doc.dump(2) + "\n";
}

std::vector<CalibrationEntry> run_calibration(const ProbeModel &model, NoiseKind kind,
                                              const std::vector<double> &targets, double phi_ref) {
    if (kind == NoiseKind::kCustom) {
        throw ConfigError("calibrate: custom noise has no strength to calibrate");
    }
    std::vector<CalibrationEntry> out;
    for (double t : targets) {
        if (!(t > 0.5 && t <= 1)) {
            throw ConfigError("calibrate: target " + short_double(t) + " outside (0.5, 1]");
        }
        try {
            out.push_back({t, calibrate_strength(model.probe(), kind, phi_ref, t)});
        } catch (const std::invalid_argument &e) {
            throw ConfigError(std::string("calibrate: ") + e.what());
        }
    }
    return out;
}

std::string calibration_json(const std::string &probe, NoiseKind kind, const std::vector<CalibrationEntry> &entries) {
    json doc;
    doc["probe"] = probe;
    doc["kind"] = to_string(kind);
    json arr = json::array();
    for (const auto &e : entries) {
        arr.push_back({{"target_lambda", e.target}, {"delta", e.delta}});
    }
    doc["entries"] = arr;
    return doc.dump(2) + "\n";
}

}  // namespace vpm
