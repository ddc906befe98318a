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

#include "vpm/estimation.h"

#include <algorithm>
#include <cmath>

#include "vpm/errors.h"

namespace vpm {

double expectation(const ComplexMatrix &rho, const PauliString &a) {
    if (!a.is_hermitian()) {
        throw std::invalid_argument("expectation: observable " + a.str() + " is not Hermitian");
    }
    cplx t = trace_pauli_product(a, rho);
    if (std::abs(t.imag()) > 1e-10) {
        throw NumericError("expectation: imaginary residue " + std::to_string(t.imag()));
    }
    return t.real();
}

double expectation(const DensityMatrix &rho, const PauliString &a) {
    return expectation(rho.matrix(), a);
}

ResponseCurve::ResponseCurve(const Probe &probe, size_t grid_size)
    : psi0_(probe.psi0), observable_(probe.observable), h_diag_(total_z_diagonal(probe.num_qubits())) {
    if (grid_size < 101) {
        throw std::invalid_argument("ResponseCurve: grid needs at least 101 points");
    }
    double lo = probe.domain_lo;
    double hi = probe.domain_hi;
    h_ = (hi - lo) / double(grid_size - 1);
    phi_.resize(grid_size);
    mu_.resize(grid_size);
    dmu_.resize(grid_size);
    for (size_t k = 0; k < grid_size; k++) {
        phi_[k] = k + 1 == grid_size ? hi : lo + h_ * double(k);
        mu_[k] = mu(phi_[k]);
        dmu_[k] = (mu(phi_[k] + h_) - mu(phi_[k] - h_)) / (2 * h_);
    }
    increasing_ = mu_.back() > mu_.front();
    for (size_t k = 0; k + 1 < grid_size; k++) {
        double step = mu_[k + 1] - mu_[k];
        if (!(increasing_ ? step > 0 : step < 0)) {
            throw NumericError("ResponseCurve: response of probe " + probe.name +
                               " is not strictly monotone near phi=" + std::to_string(phi_[k]));
        }
    }

    // Inverse phi(mu) on ascending mu knots, Fritsch-Carlson slopes.
    x_ = mu_;
    y_ = phi_;
    if (!increasing_) {
        std::reverse(x_.begin(), x_.end());
        std::reverse(y_.begin(), y_.end());
    }
    size_t n = x_.size();
    std::vector<double> secant(n - 1);
    for (size_t k = 0; k + 1 < n; k++) {
        secant[k] = (y_[k + 1] - y_[k]) / (x_[k + 1] - x_[k]);
    }
    m_.resize(n);
    m_[0] = secant[0];
    m_[n - 1] = secant[n - 2];
    for (size_t k = 1; k + 1 < n; k++) {
        m_[k] = secant[k - 1] * secant[k] <= 0 ? 0 : 0.5 * (secant[k - 1] + secant[k]);
    }
    for (size_t k = 0; k + 1 < n; k++) {
        if (secant[k] == 0) {
            m_[k] = m_[k + 1] = 0;
            continue;
        }
        double a = m_[k] / secant[k];
        double b = m_[k + 1] / secant[k];
        double r = a * a + b * b;
        if (r > 9) {
            double t = 3 / std::sqrt(r);
            m_[k] = t * a * secant[k];
            m_[k + 1] = t * b * secant[k];
        }
    }
}

double ResponseCurve::mu(double phi) const {
    uint64_t x = observable_.x_mask();
    double s = 0;
    for (size_t j = 0; j < psi0_.size(); j++) {
        if (psi0_[j] == cplx{}) {
            continue;
        }
        size_t k = j ^ x;
        cplx amp = std::conj(psi0_[k]) * observable_.basis_factor(j) * psi0_[j];
        s += (amp * std::polar(1.0, 0.5 * phi * (h_diag_[k] - h_diag_[j]))).real();
    }
    return s;
}

double ResponseCurve::dmu(double phi) const {
    uint64_t x = observable_.x_mask();
    double s = 0;
    for (size_t j = 0; j < psi0_.size(); j++) {
        if (psi0_[j] == cplx{}) {
            continue;
        }
        size_t k = j ^ x;
        double w = 0.5 * (h_diag_[k] - h_diag_[j]);
        cplx amp = std::conj(psi0_[k]) * observable_.basis_factor(j) * psi0_[j];
        s += (amp * cplx(0, w) * std::polar(1.0, phi * w)).real();
    }
    return s;
}

double ResponseCurve::invert(double abar) const {
    if (!std::isfinite(abar)) {
        throw NumericError("invert_mu: non-finite input");
    }
    size_t n = x_.size();
    if (abar <= x_.front()) {
        return y_.front();
    }
    if (abar >= x_.back()) {
        return y_.back();
    }
    size_t k = size_t(std::upper_bound(x_.begin(), x_.end(), abar) - x_.begin()) - 1;
    k = std::min(k, n - 2);
    double dx = x_[k + 1] - x_[k];
    double t = (abar - x_[k]) / dx;
    double t2 = t * t;
    double t3 = t2 * t;
    double phi = (2 * t3 - 3 * t2 + 1) * y_[k] + (t3 - 2 * t2 + t) * dx * m_[k] + (-2 * t3 + 3 * t2) * y_[k + 1] +
                 (t3 - t2) * dx * m_[k + 1];

    // Newton on the exact response, kept inside the cell by bisection.
    double lo = std::min(y_[k], y_[k + 1]);
    double hi = std::max(y_[k], y_[k + 1]);
    double f_lo = mu(lo) - abar;
    if (f_lo == 0) {
        // A node hit leaves no sign to bracket with.
        return lo;
    }
    if (phi <= lo || phi >= hi) {
        phi = 0.5 * (lo + hi);
    }
    for (int it = 0; it < 100; it++) {
        double f = mu(phi) - abar;
        if (f == 0) {
            break;
        }
        if ((f < 0) == (f_lo < 0)) {
            lo = phi;
            f_lo = f;
        } else {
            hi = phi;
        }
        double d = dmu(phi);
        double next = d != 0 ? phi - f / d : 0.5 * (lo + hi);
        if (!(next > lo && next < hi)) {
            next = 0.5 * (lo + hi);
        }
        double step = std::abs(next - phi);
        phi = next;
        if (step <= 1e-16 * std::max(1.0, std::abs(phi)) || hi - lo <= 1e-16) {
            break;
        }
    }
    return phi;
}

double invert_mu(const ResponseCurve &curve, double abar) {
    return curve.invert(abar);
}

EigenPair dominant_eigpair(const DensityMatrix &rho) {
    auto eig = hermitian_eig(rho.matrix());
    if (eig.eigenvalues.size() > 1 && eig.eigenvalues[0] - eig.eigenvalues[1] < 1e-12) {
        throw NumericError("dominant_eigpair: top eigenvalue is degenerate");
    }
    return {eig.eigenvalues[0], eig.eigenvector(0)};
}

PowerTraces power_traces(const DensityMatrix &rho, const PauliString &a, int n) {
    ComplexMatrix p = matrix_power(rho, n);
    PowerTraces out;
    out.numerator = expectation(p, a);
    out.denominator = trace(p).real();
    return out;
}

double mitigated_expectation(const DensityMatrix &rho, const PauliString &a, int n) {
    if (n < 1 || n > 3) {
        throw std::invalid_argument("mitigated_expectation: order must be 1, 2 or 3");
    }
    auto t = power_traces(rho, a, n);
    if (t.denominator < 1e-15) {
        throw NumericError("mitigated_expectation: Tr[rho^n] below 1e-15");
    }
    return t.numerator / t.denominator;
}

Scheme Scheme::vp(int order) {
    if (order < 1 || order > 4) {
        throw std::invalid_argument("Scheme::vp: order must be in 1..4");
    }
    return {Kind::kVp, order};
}

std::string Scheme::name() const {
    switch (kind) {
        case Kind::kNoisy:
            return "noisy";
        case Kind::kQec:
            return "qec";
        case Kind::kVp:
            return "vp" + std::to_string(n);
    }
    return "?";
}

int Scheme::ordinal() const {
    switch (kind) {
        case Kind::kNoisy:
            return 0;
        case Kind::kQec:
            return 1;
        case Kind::kVp:
            return 1 + n;
    }
    return 99;
}

Scheme parse_scheme(const std::string &text) {
    if (text == "noisy" || text == "error") {
        return Scheme::noisy();
    }
    if (text == "qec") {
        return Scheme::qec();
    }
    if (text.size() == 3 && text.rfind("vp", 0) == 0 && text[2] >= '1' && text[2] <= '4') {
        return Scheme::vp(text[2] - '0');
    }
    throw ConfigError("unknown scheme '" + text + "' (expected noisy, qec or vp1..vp4)");
}

std::string to_string(Accounting a) {
    return a == Accounting::kCopies ? "copies" : "shots";
}

Accounting parse_accounting(const std::string &text) {
    if (text == "copies") {
        return Accounting::kCopies;
    }
    if (text == "shots") {
        return Accounting::kShots;
    }
    throw ConfigError("unknown accounting '" + text + "' (expected copies or shots)");
}

ProbeModel::ProbeModel(Probe probe)
    : probe_(std::make_unique<Probe>(std::move(probe))), curve_(std::make_unique<ResponseCurve>(*probe_)) {
}

const QecPipeline &ProbeModel::qec() const {
    std::call_once(qec_once_, [this] { qec_ = std::make_unique<QecPipeline>(*probe_); });
    return *qec_;
}

BiasReport theoretical_bias(const ProbeModel &model, double phi, const NoiseSpec &noise, const Scheme &scheme) {
    const auto &curve = model.curve();
    const auto &probe = model.probe();
    BiasReport r;
    r.phi = phi;
    r.delta = noise.delta();
    r.scheme = scheme;
    r.mu_ideal = curve.mu(phi);
    switch (scheme.kind) {
        case Scheme::Kind::kNoisy:
            r.mu_scheme = expectation(noisy_state(probe, phi, noise), probe.observable);
            r.traces = {r.mu_scheme, 1};
            break;
        case Scheme::Kind::kQec:
            r.mu_scheme = model.qec().expectation(phi, noise);
            r.traces = {r.mu_scheme, 1};
            break;
        case Scheme::Kind::kVp: {
            r.traces = power_traces(noisy_state(probe, phi, noise), probe.observable, scheme.n);
            if (r.traces.denominator < 1e-15) {
                throw NumericError("theoretical_bias: Tr[rho^n] below 1e-15");
            }
            r.mu_scheme = r.traces.numerator / r.traces.denominator;
            break;
        }
    }
    if (!std::isfinite(r.mu_scheme) || std::abs(r.mu_scheme) > 1 + 1e-10) {
        throw NumericError("theoretical_bias: scheme expectation out of range");
    }
    r.mu_scheme = std::clamp(r.mu_scheme, -1.0, 1.0);
    r.phi_scheme = curve.invert(r.mu_scheme);
    r.bias = r.phi_scheme - curve.invert(r.mu_ideal);
    return r;
}

uint64_t shots_per_estimator(uint64_t m, const Scheme &scheme, Accounting accounting) {
    if (scheme.kind == Scheme::Kind::kVp && accounting == Accounting::kCopies) {
        return m / (2 * uint64_t(scheme.n));
    }
    return m;
}

double theoretical_stat_error(const ResponseCurve &curve, const BiasReport &report, uint64_t m,
                              Accounting accounting) {
    if (m < 1) {
        throw std::invalid_argument("theoretical_stat_error: budget must be positive");
    }
    uint64_t shots = shots_per_estimator(m, report.scheme, accounting);
    if (shots < 1) {
        throw std::invalid_argument("theoretical_stat_error: budget too small for the scheme");
    }
    double d = curve.dmu(report.phi_scheme);
    if (std::abs(d) < 1e-12) {
        throw NumericError("theoretical_stat_error: response derivative vanishes at phi=" +
                           std::to_string(report.phi_scheme));
    }
    double var_abar;
    if (report.scheme.kind == Scheme::Kind::kVp) {
        double a = report.traces.numerator;
        double t = report.traces.denominator;
        var_abar = (1 - a * a) / (t * t) + a * a * (1 - t * t) / (t * t * t * t);
    } else {
        var_abar = 1 - report.mu_scheme * report.mu_scheme;
    }
    return var_abar / double(shots) / (d * d);
}

ScalingFit scaling_exponent(const std::vector<std::pair<double, double>> &points) {
    if (points.size() < 6) {
        throw NumericError("scaling_exponent: need at least 6 points");
    }
    ScalingFit fit;
    for (const auto &[d, v] : points) {
        if (std::abs(v) > 1e-13 && d > 0) {
            fit.deltas.push_back(d);
            fit.values.push_back(std::abs(v));
        }
    }
    size_t n = fit.deltas.size();
    if (n < 5) {
        throw NumericError("scaling_exponent: fewer than 5 usable points");
    }
    double sx = 0, sy = 0;
    for (size_t k = 0; k < n; k++) {
        sx += std::log(fit.deltas[k]);
        sy += std::log(fit.values[k]);
    }
    double mx = sx / double(n);
    double my = sy / double(n);
    double sxx = 0, sxy = 0, syy = 0;
    for (size_t k = 0; k < n; k++) {
        double dx = std::log(fit.deltas[k]) - mx;
        double dy = std::log(fit.values[k]) - my;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    if (sxx == 0) {
        throw NumericError("scaling_exponent: all deltas equal");
    }
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    fit.r2 = syy == 0 ? 1 : (sxy * sxy) / (sxx * syy);
    return fit;
}

std::vector<double> logspace(double lo, double hi, size_t n) {
    std::vector<double> out(n);
    double a = std::log10(lo);
    double b = std::log10(hi);
    for (size_t k = 0; k < n; k++) {
        out[k] = n == 1 ? lo : std::pow(10.0, a + (b - a) * double(k) / double(n - 1));
    }
    return out;
}

}  // namespace vpm
