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

// Command-line driver: sweeps, scaling reports, calibration tables and the
// acceptance suite.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "vpm/acceptance.h"
#include "vpm/errors.h"
#include "vpm/experiment.h"

#ifndef VPM_PRESET_DIR
#define VPM_PRESET_DIR "configs"
#endif

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumeric = 3;

// Files written so far; removed if the run fails.
std::vector<std::string> g_written;

std::string preset_path(const std::string &name) {
    std::string file = name == "sm-figs" || name == "sm-figures" ? "sm-figs" : name;
    return std::string(VPM_PRESET_DIR) + "/" + file + ".json";
}

std::string config_path(const std::string &config, const std::string &preset) {
    if (!config.empty() && !preset.empty()) {
        throw vpm::ConfigError("give either --config or --preset, not both");
    }
    if (!preset.empty()) {
        return preset_path(preset);
    }
    if (config.empty()) {
        throw vpm::ConfigError("a --config file or a --preset is required");
    }
    return config;
}

std::ofstream open_output(const std::string &path) {
    auto parent = std::filesystem::path(path).parent_path();
    if (!parent.empty()) {
        std::error_code ec;
        std::filesystem::create_directories(parent, ec);
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw vpm::ConfigError("cannot open output file " + path);
    }
    g_written.push_back(path);
    return out;
}

void finish_output(std::ofstream &out, const std::string &path) {
    out.close();
    if (!out) {
        throw std::runtime_error("write failed for " + path);
    }
}

void remove_written() {
    for (const auto &path : g_written) {
        std::error_code ec;
        std::filesystem::remove(path, ec);
    }
}

struct SweepArgs {
    std::string config;
    std::string preset;
    std::string out;
    std::optional<uint64_t> seed;
    std::optional<size_t> workers;
    std::string accounting;
    std::string probe_file;
};

int cmd_sweep(const SweepArgs &a) {
    auto cfg = vpm::load_sweep_config(config_path(a.config, a.preset));
    if (!a.out.empty()) {
        cfg.out = a.out;
    }
    if (a.seed) {
        cfg.seed = *a.seed;
    }
    if (a.workers) {
        cfg.workers = *a.workers;
    }
    if (!a.accounting.empty()) {
        cfg.accounting = vpm::parse_accounting(a.accounting);
    }
    if (!a.probe_file.empty()) {
        cfg.probe_file = a.probe_file;
    }
    vpm::ProbeRegistry registry(cfg.probe_file);
    auto groups = vpm::run_sweep(cfg, registry, &std::cerr);
    for (const auto &[kind, records] : groups) {
        std::string path = vpm::output_path_for(cfg.out, kind, groups.size());
        auto out = open_output(path);
        vpm::write_csv(out, records);
        finish_output(out, path);
        std::cerr << "wrote " << records.size() << " rows to " << path << "\n";
    }
    return 0;
}

int cmd_scaling(const SweepArgs &a) {
    auto cfg = vpm::load_scaling_config(config_path(a.config, a.preset));
    if (!a.out.empty()) {
        cfg.out = a.out;
    }
    if (a.workers) {
        cfg.workers = *a.workers;
    }
    if (!a.probe_file.empty()) {
        cfg.probe_file = a.probe_file;
    }
    vpm::ProbeRegistry registry(cfg.probe_file);
    auto results = vpm::run_scaling(cfg, registry);
    auto out = open_output(cfg.out);
    out << vpm::scaling_report_json(results, cfg) << "\n";
    finish_output(out, cfg.out);
    size_t failed = 0;
    for (const auto &r : results) {
        failed += !r.pass;
        std::cerr << (r.pass ? "pass " : "FAIL ") << r.c.probe << " " << r.c.scheme.name() << " "
                  << vpm::to_string(r.c.kind) << ": ";
        if (r.fit) {
            std::fprintf(stderr, "slope %.4f r2 %.5f", r.fit->slope, r.fit->r2);
        } else {
            std::cerr << r.error;
        }
        std::cerr << " (expected " << r.expected.text() << ")\n";
    }
    std::cerr << results.size() - failed << "/" << results.size() << " cases pass, report in " << cfg.out << "\n";
    return 0;
}

int cmd_calibrate(const std::string &probe, const std::string &noise, const std::vector<double> &targets,
                  double phi_ref, const std::string &probe_file, const std::string &out_path) {
    vpm::ProbeRegistry registry(probe_file);
    auto kind = vpm::parse_noise_kind(noise);
    std::vector<std::string> names = probe.empty() ? registry.names() : std::vector<std::string>{probe};
    std::string text;
    for (const auto &name : names) {
        auto entries = vpm::run_calibration(registry.get(name), kind, targets, phi_ref);
        text += vpm::calibration_json(name, kind, entries) + "\n";
    }
    if (out_path.empty()) {
        std::cout << text;
    } else {
        auto out = open_output(out_path);
        out << text;
        finish_output(out, out_path);
    }
    return 0;
}

int cmd_verify(const vpm::AcceptanceOptions &options, const std::string &probe_file) {
    if (!probe_file.empty()) {
        vpm::ProbeRegistry registry(probe_file);
    }
    auto results = vpm::run_acceptance(options, &std::cerr);
    bool all = true;
    for (const auto &r : results) {
        std::cout << vpm::summary_line(r) << "\n";
        all &= r.pass;
    }
    return all ? 0 : 1;
}

int cmd_probes(const std::string &probe_file) {
    vpm::ProbeRegistry registry(probe_file);
    for (const auto &name : registry.names()) {
        const auto &p = registry.get(name).probe();
        std::printf("%-10s %2zu qubits  A = %-10s  domain [%.6g, %.6g]  H variance %.6g\n", name.c_str(),
                    p.num_qubits(), p.observable.str().c_str(), p.domain_lo, p.domain_hi,
                    vpm::variance_of_hamiltonian(p));
    }
    return 0;
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"Phase-estimation bias simulator for noisy, error-corrected and purified probes."};
    app.require_subcommand(1);

    SweepArgs sweep_args;
    std::string accounting_choices = "copies|shots";
    auto add_common = [&](CLI::App *sub, bool with_sampling) {
        sub->add_option("--config", sweep_args.config, "JSON config file");
        sub->add_option("--preset", sweep_args.preset, "Checked-in config")
            ->check(CLI::IsMember({"fig4", "sm-figs", "sm-figures", "scaling"}));
        sub->add_option("--out", sweep_args.out, "Output path (overrides the config)");
        sub->add_option("--workers", sweep_args.workers, "Worker threads (default VPM_WORKERS or all cores)");
        sub->add_option("--probe-file", sweep_args.probe_file, "Extra probe definitions (JSON)");
        if (with_sampling) {
            sub->add_option("--seed", sweep_args.seed, "Base RNG seed");
            sub->add_option("--accounting", sweep_args.accounting, "VP cost accounting")
                ->check(CLI::IsMember({"copies", "shots"}));
        }
    };

    auto *sweep = app.add_subcommand("sweep", "Run a parameter sweep and write CSV");
    add_common(sweep, true);
    auto *scaling = app.add_subcommand("scaling", "Fit bias-versus-strength slopes and write a JSON report");
    add_common(scaling, false);

    std::string cal_probe, cal_noise = "depolarizing", cal_out, cal_probe_file;
    std::vector<double> cal_targets = {0.8, 0.7, 0.6};
    double cal_phi = vpm::kCalibrationPhi;
    auto *calibrate = app.add_subcommand("calibrate", "Noise strength for target dominant eigenvalues");
    calibrate->add_option("--probe", cal_probe, "Probe name (default: every probe)");
    calibrate->add_option("--noise", cal_noise, "depolarizing or dephasing")
        ->check(CLI::IsMember({"depolarizing", "dephasing"}));
    calibrate->add_option("--targets", cal_targets, "Target eigenvalues in (0.5, 1]")->delimiter(',');
    calibrate->add_option("--phi-ref", cal_phi, "Reference phase");
    calibrate->add_option("--probe-file", cal_probe_file, "Extra probe definitions (JSON)");
    calibrate->add_option("--out", cal_out, "Output path (default stdout)");

    vpm::AcceptanceOptions verify_opts;
    std::string verify_probe_file;
    auto *verify = app.add_subcommand("verify", "Run the acceptance suite");
    verify->add_option("--seed", verify_opts.seed, "Base RNG seed");
    verify->add_option("--workers", verify_opts.workers, "Worker threads");
    verify->add_option("--only", verify_opts.only, "Criteria to run")->check(CLI::Range(1, vpm::kCriterionCount));
    verify->add_option("--probe-file", verify_probe_file, "Probe definitions to validate first");

    std::string list_probe_file;
    auto *probes = app.add_subcommand("probes", "List available probes");
    probes->add_option("--probe-file", list_probe_file, "Extra probe definitions (JSON)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : kExitConfig;
    }

    try {
        if (sweep->parsed()) {
            return cmd_sweep(sweep_args);
        }
        if (scaling->parsed()) {
            return cmd_scaling(sweep_args);
        }
        if (calibrate->parsed()) {
            return cmd_calibrate(cal_probe, cal_noise, cal_targets, cal_phi, cal_probe_file, cal_out);
        }
        if (verify->parsed()) {
            return cmd_verify(verify_opts, verify_probe_file);
        }
        return cmd_probes(list_probe_file);
    } catch (const vpm::ConfigError &e) {
        remove_written();
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::invalid_argument &e) {
        remove_written();
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const vpm::NumericError &e) {
        remove_written();
        std::cerr << "numeric error: " << e.what() << "\n";
        return kExitNumeric;
    } catch (const std::exception &e) {
        remove_written();
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
