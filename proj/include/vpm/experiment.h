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

#pragma once

#include <iosfwd>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "vpm/estimation.h"
#include "vpm/sampler.h"

namespace vpm {

struct PhiGrid {
    double start = 0;
    double stop = 0;
    size_t count = 2;

    std::vector<double> values() const;
};

/// One noise family of a sweep: explicit strengths, calibration targets, or
/// a fixed custom channel.
struct NoiseEntry {
    NoiseKind kind = NoiseKind::kDepolarizing;
    std::vector<double> deltas;
    std::vector<double> target_lambdas;
    std::optional<PauliProbs> custom;
};

struct SweepConfig {
    std::vector<std::string> probes;
    std::string probe_file;
    std::vector<Scheme> schemes;
    /// Default grid for every probe; the probe's inversion domain when unset.
    std::optional<PhiGrid> phi;
    std::map<std::string, PhiGrid> phi_overrides;
    std::vector<NoiseEntry> noise;
    std::vector<uint64_t> budgets;
    uint64_t repeats = 1;
    uint64_t seed = 20240611;
    Accounting accounting = Accounting::kCopies;
    SamplingMode mode = SamplingMode::kAuto;
    std::string out = "sweep.csv";
    /// 0 picks VPM_WORKERS or the hardware concurrency.
    size_t workers = 0;
    double phi_ref = kCalibrationPhi;
};

/// Throws ConfigError.
SweepConfig parse_sweep_config(const std::string &json_text);
SweepConfig load_sweep_config(const std::string &path);

/// Resolves probe names against the built-ins and an optional probe file and
/// owns the shared models.
class ProbeRegistry {
   public:
    /// Throws ConfigError if the probe file is missing or malformed.
    explicit ProbeRegistry(const std::string &probe_file = "");

    /// Throws ConfigError on an unknown name.
    const ProbeModel &get(const std::string &name);
    std::vector<std::string> names() const;

   private:
    std::map<std::string, Probe> available_;
    std::map<std::string, std::unique_ptr<ProbeModel>> models_;
};

size_t resolve_workers(size_t requested);

/// Checks grids against the probe domains and the noise entries. Throws
/// ConfigError.
void validate_sweep(const SweepConfig &config, ProbeRegistry &registry);

/// Records grouped by noise kind name, each group sorted by
/// (probe, scheme, delta, phi, M). Independent of the worker count.
std::map<std::string, std::vector<ExperimentRecord>> run_sweep(const SweepConfig &config, ProbeRegistry &registry,
                                                               std::ostream *log = nullptr);

extern const char *const kCsvHeader;
void write_csv(std::ostream &out, const std::vector<ExperimentRecord> &records);
/// `out` for a single group, otherwise `stem_kind.ext`.
std::string output_path_for(const std::string &out, const std::string &kind, size_t group_count);

struct ScalingCase {
    std::string probe;
    Scheme scheme;
    NoiseKind kind = NoiseKind::kDepolarizing;
    double phi = 0.05;
};

/// Accepted slope interval for a case.
struct ExpectedOrder {
    double lo = 0;
    double hi = 0;
    std::string text() const;
};

ExpectedOrder expected_order(const ScalingCase &c);

struct ScalingConfig {
    std::string probe_file;
    std::vector<ScalingCase> cases;
    double delta_lo = 1e-4;
    double delta_hi = 1e-2;
    size_t delta_count = 8;
    std::string out = "scaling.json";
    size_t workers = 0;
};

ScalingConfig parse_scaling_config(const std::string &json_text);
ScalingConfig load_scaling_config(const std::string &path);

struct ScalingResult {
    ScalingCase c;
    ExpectedOrder expected;
    std::optional<ScalingFit> fit;
    std::string error;
    bool pass = false;
};

/// A failed fit marks its entry and the run continues.
std::vector<ScalingResult> run_scaling(const ScalingConfig &config, ProbeRegistry &registry);
std::string scaling_report_json(const std::vector<ScalingResult> &results, const ScalingConfig &config);

struct CalibrationEntry {
    double target = 0;
    double delta = 0;
};

/// Throws ConfigError for targets outside (0.5, 1].
std::vector<CalibrationEntry> run_calibration(const ProbeModel &model, NoiseKind kind,
                                              const std::vector<double> &targets, double phi_ref = kCalibrationPhi);
std::string calibration_json(const std::string &probe, NoiseKind kind, const std::vector<CalibrationEntry> &entries);

/// Formats with 17 significant digits.
std::string format_double(double v);

}  // namespace vpm
