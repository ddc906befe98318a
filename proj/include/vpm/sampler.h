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

#include <cstdint>
#include <random>
#include <string>

#include "vpm/estimation.h"

namespace vpm {

enum class SamplingMode { kAuto, kExact, kGaussian };
std::string to_string(SamplingMode mode);
SamplingMode parse_sampling_mode(const std::string &text);

/// Budgets at or above this use the Gaussian limit in kAuto mode.
constexpr uint64_t kGaussianThreshold = 10'000'000;

using Rng = std::mt19937_64;

uint64_t splitmix64(uint64_t x);
/// Generator for one repeat of one record; independent of execution order.
Rng substream(uint64_t seed, uint64_t record, uint64_t repeat);

/// Mean of `shots` outcomes in {+1, -1} with P(+1) = (1 + mu)/2. Throws
/// std::invalid_argument if |mu| > 1 or shots == 0.
double sample_mean(double mu, uint64_t shots, Rng &rng, SamplingMode mode = SamplingMode::kAuto);

/// Ratio of two independent trace estimators, the denominator clamped below
/// at 1e-9.
double vp_sample(const PowerTraces &traces, uint64_t shots, Rng &rng, SamplingMode mode = SamplingMode::kAuto);
double vp_sample(const DensityMatrix &rho, const PauliString &a, int n, uint64_t shots, Rng &rng,
                 SamplingMode mode = SamplingMode::kAuto);

struct ShotPlan {
    /// Total budget M.
    uint64_t m = 0;
    Scheme scheme;
    Accounting accounting = Accounting::kCopies;
    uint64_t seed = 0;
    SamplingMode mode = SamplingMode::kAuto;
};

struct ExperimentRecord {
    std::string probe;
    Scheme scheme;
    double phi = 0;
    double delta = 0;
    double lambda = 0;
    uint64_t m = 0;
    Accounting accounting = Accounting::kCopies;
    uint64_t seed = 0;
    uint64_t repeats = 0;
    double mu_ideal = 0;
    double mu_scheme = 0;
    /// Mean over repeats.
    double abar = 0;
    double phi_est = 0;
    double bias_theory = 0;
    /// Mean of phi_est - phi.
    double bias_emp = 0;
    /// Estimator variance from the closed form; NaN where the response is
    /// flat at the limit point.
    double stat_theory = 0;
    /// Population variance of phi_est over repeats.
    double stat_emp = 0;
    /// Mean of (phi_est - phi)^2.
    double mse = 0;
};

/// Samples, inverts and aggregates `repeats` estimates. `record` selects the
/// RNG substream; `lambda` is copied into the record.
ExperimentRecord run_experiment(const ProbeModel &model, double phi, const NoiseSpec &noise, const ShotPlan &plan,
                                uint64_t repeats, uint64_t record = 0, double lambda = 0);
/// Same, reusing an already computed bias report.
ExperimentRecord run_experiment(const ProbeModel &model, const BiasReport &report, const ShotPlan &plan,
                                uint64_t repeats, uint64_t record = 0, double lambda = 0);

}  // namespace vpm
