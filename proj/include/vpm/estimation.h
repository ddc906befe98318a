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

#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "vpm/linalg.h"
#include "vpm/noise.h"
#include "vpm/qec.h"
#include "vpm/stabilizer.h"

namespace vpm {

/// Tr[A rho] for a Hermitian Pauli observable. Throws std::invalid_argument on
/// a non-Hermitian phase and NumericError if the imaginary residue exceeds
/// 1e-10.
double expectation(const DensityMatrix &rho, const PauliString &a);
double expectation(const ComplexMatrix &rho, const PauliString &a);

/// Ideal response mu(phi) of a probe on a uniform grid over its inversion
/// domain, with exact evaluators for mu and its derivative.
class ResponseCurve {
   public:
    static constexpr size_t kDefaultGrid = 1001;

    /// Throws std::invalid_argument if grid_size < 101 and NumericError if mu
    /// is not strictly monotone on the grid.
    ResponseCurve(const Probe &probe, size_t grid_size = kDefaultGrid);

    const std::vector<double> &phis() const {
        return phi_;
    }
    const std::vector<double> &mus() const {
        return mu_;
    }
    /// Centered finite differences with step equal to the grid spacing.
    const std::vector<double> &derivatives() const {
        return dmu_;
    }
    double spacing() const {
        return h_;
    }
    bool increasing() const {
        return increasing_;
    }
    double domain_lo() const {
        return phi_.front();
    }
    double domain_hi() const {
        return phi_.back();
    }

    /// Exact mu(phi) from the signal state.
    double mu(double phi) const;
    /// Exact d mu / d phi.
    double dmu(double phi) const;

    /// Clamps to the branch, interpolates the inverse with a monotone cubic
    /// and polishes against the exact mu.
    double invert(double abar) const;

   private:
    StateVector psi0_;
    PauliString observable_;
    std::vector<double> h_diag_;
    std::vector<double> phi_;
    std::vector<double> mu_;
    std::vector<double> dmu_;
    // Inverse interpolant on ascending mu: knots x_, values y_, slopes m_.
    std::vector<double> x_;
    std::vector<double> y_;
    std::vector<double> m_;
    double h_ = 0;
    bool increasing_ = true;
};

double invert_mu(const ResponseCurve &curve, double abar);

struct EigenPair {
    double lambda = 0;
    StateVector vector;
};

/// Throws NumericError if the top eigenvalue is degenerate within 1e-12.
EigenPair dominant_eigpair(const DensityMatrix &rho);

struct PowerTraces {
    /// Tr[A rho^n].
    double numerator = 0;
    /// Tr[rho^n].
    double denominator = 0;
};

/// Tr[A rho^n] and Tr[rho^n] for n in {1,...,4}.
PowerTraces power_traces(const DensityMatrix &rho, const PauliString &a, int n);
/// Tr[A rho^n] / Tr[rho^n]. Throws NumericError if Tr[rho^n] < 1e-15.
double mitigated_expectation(const DensityMatrix &rho, const PauliString &a, int n);

struct Scheme {
    enum class Kind { kNoisy, kQec, kVp };
    Kind kind = Kind::kNoisy;
    /// Purification order; 1 for noisy and qec.
    int n = 1;

    static Scheme noisy() {
        return {Kind::kNoisy, 1};
    }
    static Scheme qec() {
        return {Kind::kQec, 1};
    }
    static Scheme vp(int order);

    /// "noisy", "qec", "vp2", ...
    std::string name() const;
    /// Sort key: noisy, qec, then vp by order.
    int ordinal() const;
    bool operator==(const Scheme &) const = default;
};

/// Accepts "noisy" (alias "error"), "qec" and "vp<n>" with n in 1..4. Throws
/// ConfigError.
Scheme parse_scheme(const std::string &text);

enum class Accounting { kCopies, kShots };
std::string to_string(Accounting a);
Accounting parse_accounting(const std::string &text);

/// Probe plus its response curve and lazily built QEC pipeline; shared
/// read-only across sweep workers.
class ProbeModel {
   public:
    explicit ProbeModel(Probe probe);

    const Probe &probe() const {
        return *probe_;
    }
    const ResponseCurve &curve() const {
        return *curve_;
    }
    /// Built on first use; thread safe.
    const QecPipeline &qec() const;

   private:
    std::unique_ptr<Probe> probe_;
    std::unique_ptr<ResponseCurve> curve_;
    mutable std::once_flag qec_once_;
    mutable std::unique_ptr<QecPipeline> qec_;
};

struct BiasReport {
    double phi = 0;
    double delta = 0;
    Scheme scheme;
    double mu_ideal = 0;
    double mu_scheme = 0;
    /// invert(mu_scheme) - invert(mu_ideal).
    double bias = 0;
    /// Estimator value in the infinite-sample limit.
    double phi_scheme = 0;
    /// Tr[A rho^n] and Tr[rho^n] for vp; (mu_scheme, 1) otherwise.
    PowerTraces traces;
};

BiasReport theoretical_bias(const ProbeModel &model, double phi, const NoiseSpec &noise, const Scheme &scheme);

/// Trace-estimator shots for budget m under the given accounting.
uint64_t shots_per_estimator(uint64_t m, const Scheme &scheme, Accounting accounting);

/// Variance of the estimate for budget m. Throws NumericError if |d mu/d phi|
/// < 1e-12 at the estimator's limit point.
double theoretical_stat_error(const ResponseCurve &curve, const BiasReport &report, uint64_t m,
                              Accounting accounting = Accounting::kCopies);

struct ScalingFit {
    std::vector<double> deltas;
    std::vector<double> values;
    double slope = 0;
    double intercept = 0;
    double r2 = 0;
};

/// Least-squares line through (log delta, log |bias|). Needs >= 6 points;
/// drops |bias| <= 1e-13 and needs >= 5 left. Throws NumericError.
ScalingFit scaling_exponent(const std::vector<std::pair<double, double>> &points);

/// n log-spaced values from lo to hi inclusive.
std::vector<double> logspace(double lo, double hi, size_t n);

}  // namespace vpm
