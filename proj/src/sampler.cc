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

#include "vpm/sampler.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "vpm/errors.h"

namespace vpm {

std::string to_string(SamplingMode mode) {
    switch (mode) {
        case SamplingMode::kAuto:
            return "auto";
        case SamplingMode::kExact:
            return "exact";
        case SamplingMode::kGaussian:
            return "gaussian";
    }
    return "?";
}

SamplingMode parse_sampling_mode(const std::string &text) {
    if (text == "auto") {
        return SamplingMode::kAuto;
    }
    if (text == "exact") {
        return SamplingMode::kExact;
    }
    if (text == "gaussian") {
        return SamplingMode::kGaussian;
    }
    throw ConfigError("unknown sampling mode '" + text + "' (expected auto, exact or gaussian)");
}

uint64_t splitmix64(uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

Rng substream(uint64_t seed, uint64_t record, uint64_t repeat) {
    uint64_t s = splitmix64(seed);
    s = splitmix64(s ^ record);
    s = splitmix64(s ^ (repeat * 0xd1b54a32d192ed03ULL));
    std::seed_seq seq{uint32_t(s), uint32_t(s >> 32), uint32_t(record), uint32_t(repeat)};
    return Rng(seq);
}

double sample_mean(double mu, uint64_t shots, Rng &rng, SamplingMode mode) {
    if (!(std::abs(mu) <= 1)) {
        throw std::invalid_argument("sample_mean: |mu| must not exceed 1");
    }
    if (shots == 0) {
        throw std::invalid_argument("sample_mean: need at least one shot");
    }
    if (mu == 1 || mu == -1) {
        return mu;
    }
    bool gaussian = mode == SamplingMode::kGaussian || (mode == SamplingMode::kAuto && shots >= kGaussianThreshold);
    if (gaussian) {
        std::normal_distribution<double> dist(mu, std::sqrt((1 - mu * mu) / double(shots)));
        return std::clamp(dist(rng), -1.0, 1.0);
    }
    std::binomial_distribution<uint64_t> dist(shots, 0.5 * (1 + mu));
    uint64_t k = dist(rng);
    return 2.0 * double(k) / double(shots) - 1.0;
}

double vp_sample(const PowerTraces &traces, uint64_t shots, Rng &rng, SamplingMode mode) {
    if (traces.denominator <= 1e-12) {
        throw std::invalid_argument("vp_sample: Tr[rho^n] must exceed 1e-12");
    }
    if (std::abs(traces.numerator) > traces.denominator + 1e-12) {
        throw std::invalid_argument("vp_sample: |Tr[A rho^n]| exceeds Tr[rho^n]");
    }
    double num = sample_mean(std::clamp(traces.numerator, -1.0, 1.0), shots, rng, mode);
    double den = sample_mean(std::clamp(traces.denominator, -1.0, 1.0), shots, rng, mode);
    return num / std::max(den, 1e-9);
}

double vp_sample(const DensityMatrix &rho, const PauliString &a, int n, uint64_t shots, Rng &rng,
                 SamplingMode mode) {
    return vp_sample(power_traces(rho, a, n), shots, rng, mode);
}

namespace {

// Compensated running sum.
struct KahanSum {
    double sum = 0;
    double c = 0;
    void add(double v) {
        double y = v - c;
        double t = sum + y;
        c = (t - sum) - y;
        sum = t;
    }
};

}  // namespace

ExperimentRecord run_experiment(const ProbeModel &model, const BiasReport &report, const ShotPlan &plan,
                                uint64_t repeats, uint64_t record, double lambda) {
    if (repeats == 0) {
        throw std::invalid_argument("run_experiment: need at least one repeat");
    }
    if (!(report.scheme == plan.scheme)) {
        throw std::invalid_argument("run_experiment: report and plan disagree on the scheme");
    }
    const auto &curve = model.curve();
    ExperimentRecord r;
    r.probe = model.probe().name;
    r.scheme = plan.scheme;
    r.phi = report.phi;
    r.delta = report.delta;
    r.lambda = lambda;
    r.m = plan.m;
    r.accounting = plan.accounting;
    r.seed = plan.seed;
    r.repeats = repeats;
    r.mu_ideal = report.mu_ideal;
    r.mu_scheme = report.mu_scheme;
    r.bias_theory = report.bias;
    try {
        r.stat_theory = theoretical_stat_error(curve, report, plan.m, plan.accounting);
    } catch (const NumericError &) {
        r.stat_theory = std::numeric_limits<double>::quiet_NaN();
    }

    uint64_t shots = shots_per_estimator(plan.m, plan.scheme, plan.accounting);
    if (shots == 0) {
        throw std::invalid_argument("run_experiment: budget too small for " + plan.scheme.name());
    }
    // Welford for the variance; Kahan for the plain means.
    double mean = 0;
    double m2 = 0;
    KahanSum abar_sum;
    KahanSum sq_sum;
    for (uint64_t k = 0; k < repeats; k++) {
        Rng rng = substream(plan.seed, record, k);
        double abar = plan.scheme.kind == Scheme::Kind::kVp ? vp_sample(report.traces, shots, rng, plan.mode)
                                                            : sample_mean(report.mu_scheme, shots, rng, plan.mode);
        double err = curve.invert(abar) - report.phi;
        abar_sum.add(abar);
        sq_sum.add(err * err);
        double d = err - mean;
        mean += d / double(k + 1);
        m2 += d * (err - mean);
    }
    r.abar = abar_sum.sum / double(repeats);
    r.bias_emp = mean;
    r.phi_est = report.phi + mean;
    r.stat_emp = m2 / double(repeats);
    r.mse = sq_sum.sum / double(repeats);
    return r;
}

ExperimentRecord run_experiment(const ProbeModel &model, double phi, const NoiseSpec &noise, const ShotPlan &plan,
                                uint64_t repeats, uint64_t record, double lambda) {
    return run_experiment(model, theoretical_bias(model, phi, noise, plan.scheme), plan, repeats, record, lambda);
}

}  // namespace vpm
