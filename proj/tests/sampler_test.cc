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

#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "vpm/errors.h"

using namespace vpm;

namespace {

const ProbeModel &model(const std::string &name) {
    static ProbeModel ghz(builtin_probe("ghz5"));
    static ProbeModel twin(builtin_probe("twin5"));
    static ProbeModel steane(builtin_probe("steane7"));
    if (name == "ghz5") {
        return ghz;
    }
    return name == "twin5" ? twin : steane;
}

NoiseSpec calibrated(const std::string &name, double lambda = 0.7) {
    return NoiseSpec::depolarizing(
        calibrate_strength(model(name).probe(), NoiseKind::kDepolarizing, kCalibrationPhi, lambda));
}

struct Moments {
    double mean = 0;
    double var = 0;
};

template <typename F>
Moments moments(int count, F draw) {
    double s = 0, s2 = 0;
    for (int k = 0; k < count; k++) {
        double v = draw(k);
        s += v;
        s2 += v * v;
    }
    double mean = s / count;
    return {mean, s2 / count - mean * mean};
}

}  // namespace

TEST(Rng, SplitmixReferenceValue) {
    // First output of the reference generator seeded with zero.
    EXPECT_EQ(splitmix64(0), 0xe220a8397b1dcdafULL);
}

TEST(Rng, SubstreamsAreReproducibleAndDistinct) {
    auto a = substream(1, 2, 3);
    auto b = substream(1, 2, 3);
    EXPECT_EQ(a(), b());
    EXPECT_NE(substream(1, 2, 3)(), substream(1, 2, 4)());
    EXPECT_NE(substream(1, 2, 3)(), substream(1, 3, 3)());
    EXPECT_NE(substream(1, 2, 3)(), substream(2, 2, 3)());
    // Swapping record and repeat must not collide.
    EXPECT_NE(substream(9, 4, 7)(), substream(9, 7, 4)());
}

TEST(SampleMean, EdgesAndErrors) {
    Rng rng(1);
    EXPECT_EQ(sample_mean(1, 1000, rng), 1);
    EXPECT_EQ(sample_mean(-1, 1000, rng), -1);
    EXPECT_THROW(sample_mean(1.01, 10, rng), std::invalid_argument);
    EXPECT_THROW(sample_mean(std::numeric_limits<double>::quiet_NaN(), 10, rng), std::invalid_argument);
    EXPECT_THROW(sample_mean(0.2, 0, rng), std::invalid_argument);
    EXPECT_EQ(parse_sampling_mode("gaussian"), SamplingMode::kGaussian);
    EXPECT_EQ(to_string(SamplingMode::kExact), "exact");
    EXPECT_THROW(parse_sampling_mode("poisson"), ConfigError);
}

TEST(SampleMean, ExactModeLandsOnTheShotLattice) {
    Rng rng(4);
    for (int t = 0; t < 100; t++) {
        double v = sample_mean(0.3, 7, rng, SamplingMode::kExact);
        double k = (v + 1) * 7 / 2;
        EXPECT_NEAR(k, std::round(k), 1e-12);
        EXPECT_GE(v, -1);
        EXPECT_LE(v, 1);
    }
}

TEST(SampleMean, CentralLimitAcrossSeeds) {
    const double mu = 0.3;
    const uint64_t shots = 1000;
    const int count = 4000;
    double sd = std::sqrt((1 - mu * mu) / shots);
    for (auto mode : {SamplingMode::kExact, SamplingMode::kGaussian}) {
        for (uint64_t seed = 0; seed < 100; seed += 33) {
            auto m = moments(count, [&](int k) {
                auto rng = substream(seed, 0, k);
                return sample_mean(mu, shots, rng, mode);
            });
            EXPECT_NEAR(m.mean, mu, 5 * sd / std::sqrt(count)) << to_string(mode);
            EXPECT_NEAR(m.var / (sd * sd), 1, 5 * std::sqrt(2.0 / count)) << to_string(mode);
        }
    }
}

TEST(SampleMean, ExactAndGaussianAgreeAtLargeBudget) {
    const double mu = -0.6;
    const uint64_t shots = 100000;
    const int count = 3000;
    auto draw = [&](SamplingMode mode) {
        return moments(count, [&](int k) {
            auto rng = substream(77, 1, k);
            return sample_mean(mu, shots, rng, mode);
        });
    };
    auto exact = draw(SamplingMode::kExact);
    auto gauss = draw(SamplingMode::kGaussian);
    double sd = std::sqrt((1 - mu * mu) / shots);
    EXPECT_NEAR(exact.mean, gauss.mean, 6 * sd / std::sqrt(count));
    EXPECT_NEAR(exact.var / gauss.var, 1, 0.15);
}

TEST(SampleMean, Deterministic) {
    auto a = substream(5, 6, 7);
    auto b = substream(5, 6, 7);
    EXPECT_EQ(sample_mean(0.1, 12345, a), sample_mean(0.1, 12345, b));
    auto c = substream(5, 6, 7);
    auto d = substream(5, 6, 7);
    EXPECT_EQ(sample_mean(0.1, 100'000'000, c), sample_mean(0.1, 100'000'000, d));
}

TEST(VpSample, Errors) {
    Rng rng(2);
    EXPECT_THROW(vp_sample(PowerTraces{0, 0}, 10, rng), std::invalid_argument);
    EXPECT_THROW(vp_sample(PowerTraces{0.6, 0.5}, 10, rng), std::invalid_argument);
    EXPECT_EQ(vp_sample(PowerTraces{1, 1}, 10, rng), 1);
}

TEST(VpSample, RatioMomentsFollowTheDeltaMethod) {
    const double a = 0.3, t = 0.8;
    const uint64_t shots = 100000;
    const int count = 4000;
    auto m = moments(count, [&](int k) {
        auto rng = substream(3, 0, k);
        return vp_sample(PowerTraces{a, t}, shots, rng, SamplingMode::kExact);
    });
    double var = ((1 - a * a) / (t * t) + a * a * (1 - t * t) / std::pow(t, 4)) / shots;
    EXPECT_NEAR(m.mean, a / t, 5 * std::sqrt(var / count));
    EXPECT_NEAR(m.var / var, 1, 0.15);
}

TEST(VpSample, GhzMitigatedMeanVariance) {
    const auto &ghz = model("ghz5");
    auto rho = noisy_state(ghz.probe(), 0.05, calibrated("ghz5"));
    auto traces = power_traces(rho, ghz.probe().observable, 2);
    const uint64_t shots = 250000;
    const int count = 3000;
    auto m = moments(count, [&](int k) {
        auto rng = substream(8, 0, k);
        return vp_sample(rho, ghz.probe().observable, 2, shots, rng);
    });
    double a = traces.numerator, t = traces.denominator;
    double var = ((1 - a * a) / (t * t) + a * a * (1 - t * t) / std::pow(t, 4)) / shots;
    EXPECT_NEAR(m.mean, a / t, 5 * std::sqrt(var / count));
    EXPECT_NEAR(m.var / var, 1, 0.15);
}

TEST(RunExperiment, RecordFieldsAndIdentities) {
    const auto &ghz = model("ghz5");
    auto noise = calibrated("ghz5");
    ShotPlan plan{1'000'000, Scheme::vp(2), Accounting::kCopies, 99, SamplingMode::kAuto};
    auto r = run_experiment(ghz, 0.05, noise, plan, 50, 3, 0.7);
    EXPECT_EQ(r.probe, "ghz5");
    EXPECT_EQ(r.scheme, Scheme::vp(2));
    EXPECT_EQ(r.lambda, 0.7);
    EXPECT_EQ(r.delta, noise.delta());
    EXPECT_EQ(r.m, 1'000'000u);
    EXPECT_EQ(r.repeats, 50u);
    EXPECT_EQ(r.seed, 99u);
    auto report = theoretical_bias(ghz, 0.05, noise, Scheme::vp(2));
    EXPECT_EQ(r.bias_theory, report.bias);
    EXPECT_EQ(r.stat_theory, theoretical_stat_error(ghz.curve(), report, 1'000'000));
    EXPECT_NEAR(r.mse, r.stat_emp + r.bias_emp * r.bias_emp, 1e-15 + 1e-12 * r.mse);
    EXPECT_NEAR(r.phi_est - r.phi, r.bias_emp, 1e-16);
    EXPECT_GE(r.stat_emp, 0);
}

TEST(RunExperiment, DeterministicPerRecord) {
    const auto &twin = model("twin5");
    auto noise = calibrated("twin5");
    ShotPlan plan{100'000, Scheme::qec(), Accounting::kCopies, 5, SamplingMode::kExact};
    auto a = run_experiment(twin, 0.1, noise, plan, 20, 11);
    auto b = run_experiment(twin, 0.1, noise, plan, 20, 11);
    auto c = run_experiment(twin, 0.1, noise, plan, 20, 12);
    EXPECT_EQ(a.abar, b.abar);
    EXPECT_EQ(a.mse, b.mse);
    EXPECT_NE(a.abar, c.abar);
}

TEST(RunExperiment, Errors) {
    const auto &ghz = model("ghz5");
    auto noise = NoiseSpec::depolarizing(0.01);
    ShotPlan plan{3, Scheme::vp(2), Accounting::kCopies, 1, SamplingMode::kAuto};
    EXPECT_THROW(run_experiment(ghz, 0.05, noise, plan, 1), std::invalid_argument);
    plan.m = 1000;
    EXPECT_THROW(run_experiment(ghz, 0.05, noise, plan, 0), std::invalid_argument);
    auto report = theoretical_bias(ghz, 0.05, noise, Scheme::noisy());
    EXPECT_THROW(run_experiment(ghz, report, plan, 1), std::invalid_argument);
}

TEST(RunExperiment, FlatResponseLeavesStatTheoryUndefined) {
    const auto &twin = model("twin5");
    ShotPlan plan{10000, Scheme::noisy(), Accounting::kCopies, 1, SamplingMode::kAuto};
    auto r = run_experiment(twin, 0, NoiseSpec::depolarizing(0), plan, 3);
    EXPECT_TRUE(std::isnan(r.stat_theory));
}

TEST(RunExperiment, NoiselessEstimatorIsUnbiased) {
    const auto &ghz = model("ghz5");
    ShotPlan plan{1'000'000, Scheme::noisy(), Accounting::kCopies, 21, SamplingMode::kExact};
    const uint64_t repeats = 400;
    auto r = run_experiment(ghz, 0.05, NoiseSpec::depolarizing(0), plan, repeats);
    EXPECT_EQ(r.bias_theory, 0);
    EXPECT_LT(std::abs(r.bias_emp), 4 * std::sqrt(r.stat_theory / repeats));
}

TEST(RunExperiment, EmpiricalVarianceMatchesTheory) {
    struct Cell {
        const char *probe;
        Scheme scheme;
        double phi;
    };
    const std::vector<Cell> cells = {
        {"ghz5", Scheme::noisy(), 0.05},   {"ghz5", Scheme::noisy(), 0.1},   {"ghz5", Scheme::qec(), 0.05},
        {"ghz5", Scheme::qec(), 0.1},      {"ghz5", Scheme::vp(2), 0.05},    {"ghz5", Scheme::vp(2), 0.1},
        {"ghz5", Scheme::vp(3), 0.05},     {"ghz5", Scheme::vp(3), 0.1},     {"twin5", Scheme::qec(), 0.1},
        {"twin5", Scheme::qec(), 0.2},     {"twin5", Scheme::vp(2), 0.1},    {"twin5", Scheme::vp(2), 0.2},
        {"twin5", Scheme::vp(3), 0.1},     {"twin5", Scheme::vp(3), 0.2},    {"steane7", Scheme::qec(), 0.05},
        {"steane7", Scheme::qec(), 0.1},   {"steane7", Scheme::vp(2), 0.1},  {"steane7", Scheme::vp(2), 0.2},
        {"steane7", Scheme::vp(3), 0.1},   {"steane7", Scheme::vp(3), 0.2},
    };
    const uint64_t repeats = 4000;
    uint64_t record = 0;
    for (const auto &cell : cells) {
        ShotPlan plan{10'000'000, cell.scheme, Accounting::kCopies, 2024, SamplingMode::kAuto};
        auto r = run_experiment(model(cell.probe), cell.phi, calibrated(cell.probe), plan, repeats, record++);
        EXPECT_NEAR(r.stat_emp / r.stat_theory, 1, 0.15) << cell.probe << " " << cell.scheme.name() << " " << cell.phi;
    }
}

TEST(RunExperiment, MseApproachesSquaredBiasWithBudget) {
    for (const auto &name : {"ghz5", "steane7"}) {
        for (auto scheme : {Scheme::noisy(), Scheme::qec(), Scheme::vp(2)}) {
            if (name == std::string("steane7") && scheme == Scheme::noisy()) {
                continue;  // clamped at the domain edge
            }
            std::vector<double> ratios;
            for (uint64_t m : {100'000ULL, 10'000'000ULL, 1'000'000'000ULL}) {
                ShotPlan plan{m, scheme, Accounting::kCopies, 3, SamplingMode::kAuto};
                auto r = run_experiment(model(name), 0.1, calibrated(name), plan, 500);
                ratios.push_back(r.mse / (r.bias_theory * r.bias_theory));
            }
            EXPECT_GE(ratios[0], ratios[2] - 0.01) << name << " " << scheme.name();
            EXPECT_NEAR(ratios[2], 1, 0.01) << name << " " << scheme.name();
        }
    }
}

TEST(RunExperiment, PurificationHasLowestErrorAtLargeBudget) {
    for (const auto &name : {"ghz5", "steane7"}) {
        auto noise = calibrated(name);
        for (double phi : {0.02, 0.05, 0.1, 0.15}) {
            auto mse = [&](Scheme s) {
                ShotPlan plan{1'000'000'000, s, Accounting::kCopies, 8, SamplingMode::kAuto};
                return run_experiment(model(name), phi, noise, plan, 200).mse;
            };
            double vp2 = mse(Scheme::vp(2));
            EXPECT_LT(vp2, mse(Scheme::qec())) << name << " " << phi;
            EXPECT_LT(vp2, mse(Scheme::noisy())) << name << " " << phi;
        }
        if (name == std::string("ghz5")) {
            for (double phi : {-0.02, -0.1}) {
                ShotPlan plan{1'000'000'000, Scheme::vp(2), Accounting::kCopies, 8, SamplingMode::kAuto};
                double vp2 = run_experiment(model(name), phi, noise, plan, 200).mse;
                plan.scheme = Scheme::qec();
                EXPECT_LT(vp2, run_experiment(model(name), phi, noise, plan, 200).mse);
            }
        }
    }
}
