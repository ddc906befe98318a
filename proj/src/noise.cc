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

#include "vpm/noise.h"

#include <bit>
#include <cmath>
#include <iostream>
#include <map>
#include <mutex>
#include <tuple>

#include "vpm/errors.h"

namespace vpm {

std::string to_string(NoiseKind kind) {
    switch (kind) {
        case NoiseKind::kDepolarizing:
            return "depolarizing";
        case NoiseKind::kDephasing:
            return "dephasing";
        case NoiseKind::kCustom:
            return "custom";
    }
    return "?";
}

NoiseKind parse_noise_kind(const std::string &name) {
    if (name == "depolarizing") {
        return NoiseKind::kDepolarizing;
    }
    if (name == "dephasing") {
        return NoiseKind::kDephasing;
    }
    if (name == "custom") {
        return NoiseKind::kCustom;
    }
    throw ConfigError("unknown noise kind '" + name + "' (expected depolarizing, dephasing or custom)");
}

NoiseSpec::NoiseSpec(NoiseKind kind, double delta, double k_x, double k_y, double k_z)
    : kind_(kind), delta_(delta), k_x_(k_x), k_y_(k_y), k_z_(k_z) {
    validate();
}

void NoiseSpec::validate() const {
    if (!(delta_ >= 0 && delta_ <= 1)) {
        throw std::invalid_argument("NoiseSpec: strength must lie in [0, 1], got " + std::to_string(delta_));
    }
    auto p = probs();
    for (double v : {p.p_i, p.p_x, p.p_y, p.p_z}) {
        if (!(v >= 0)) {
            throw std::invalid_argument("NoiseSpec: negative or non-finite probability");
        }
    }
    if (std::abs(p.p_i + p.p_x + p.p_y + p.p_z - 1) > 1e-12) {
        throw std::invalid_argument("NoiseSpec: probabilities do not sum to 1");
    }
}

NoiseSpec NoiseSpec::depolarizing(double delta) {
    return NoiseSpec(NoiseKind::kDepolarizing, delta, 0.25, 0.25, 0.25);
}

NoiseSpec NoiseSpec::dephasing(double delta) {
    return NoiseSpec(NoiseKind::kDephasing, delta, 0, 0, 0.5);
}

NoiseSpec NoiseSpec::custom(double p_i, double p_x, double p_y, double p_z) {
    if (std::abs(p_i + p_x + p_y + p_z - 1) > 1e-12) {
        throw std::invalid_argument("NoiseSpec: probabilities do not sum to 1");
    }
    NoiseSpec s(NoiseKind::kCustom, 1, p_x, p_y, p_z);
    // Outside the mild-noise regime the first-order formulas lose meaning but
    // remain computable.
    if (p_x + p_y + p_z > 0.5 || p_i < p_x || p_i < p_y || p_i < p_z) {
        std::cerr << "warning: custom noise (pI=" << p_i << ") is outside the mild-noise regime\n";
    }
    return s;
}

NoiseSpec NoiseSpec::custom_linear(double k_x, double k_y, double k_z, double delta) {
    return NoiseSpec(NoiseKind::kCustom, delta, k_x, k_y, k_z);
}

NoiseSpec NoiseSpec::preset(NoiseKind kind, double delta) {
    switch (kind) {
        case NoiseKind::kDepolarizing:
            return depolarizing(delta);
        case NoiseKind::kDephasing:
            return dephasing(delta);
        default:
            throw std::invalid_argument("NoiseSpec::preset: custom noise has no preset");
    }
}

PauliProbs NoiseSpec::probs() const {
    PauliProbs p;
    p.p_x = k_x_ * delta_;
    p.p_y = k_y_ * delta_;
    p.p_z = k_z_ * delta_;
    p.p_i = 1 - p.p_x - p.p_y - p.p_z;
    return p;
}

NoiseSpec NoiseSpec::with_delta(double delta) const {
    return NoiseSpec(kind_, delta, k_x_, k_y_, k_z_);
}

std::vector<cplx> signal_phases(size_t num_qubits, double phi) {
    size_t dim = size_t{1} << num_qubits;
    std::vector<cplx> d(dim);
    for (size_t b = 0; b < dim; b++) {
        double h = double(num_qubits) - 2.0 * std::popcount(b);
        d[b] = std::polar(1.0, -0.5 * phi * h);
    }
    return d;
}

ComplexMatrix signal_unitary(size_t num_qubits, double phi) {
    return ComplexMatrix::diagonal(signal_phases(num_qubits, phi));
}

void apply_pauli_channel_inplace(ComplexMatrix &m, const PauliProbs &probs, uint64_t bit) {
    // (X rho X)_{ij} = rho_{i^b, j^b}; Z conjugation contributes the sign
    // s = (-1)^{i_b + j_b}, and Y rho Y = X (Z rho Z) X carries the same sign.
    size_t n = m.dim();
    double keep_same = probs.p_i + probs.p_z;
    double keep_diff = probs.p_i - probs.p_z;
    double flip_same = probs.p_x + probs.p_y;
    double flip_diff = probs.p_x - probs.p_y;
    for (size_t i = 0; i < n; i++) {
        if (i & bit) {
            continue;
        }
        size_t i1 = i | bit;
        for (size_t j = 0; j < n; j++) {
            if (j & bit) {
                continue;
            }
            size_t j1 = j | bit;
            // Same-bit pair (i,j) <-> (i1,j1); differing pair (i,j1) <-> (i1,j).
            cplx a = m(i, j);
            cplx b = m(i1, j1);
            m(i, j) = keep_same * a + flip_same * b;
            m(i1, j1) = keep_same * b + flip_same * a;
            cplx c = m(i, j1);
            cplx d = m(i1, j);
            m(i, j1) = keep_diff * c + flip_diff * d;
            m(i1, j) = keep_diff * d + flip_diff * c;
        }
    }
}

DensityMatrix apply_channel(const DensityMatrix &rho, const NoiseSpec &noise) {
    size_t n = std::countr_zero(rho.dim());
    ComplexMatrix m = rho.matrix();
    auto p = noise.probs();
    for (size_t q = 0; q < n; q++) {
        apply_pauli_channel_inplace(m, p, uint64_t{1} << q);
    }
    return DensityMatrix::from_matrix_unchecked(std::move(m));
}

void apply_signal_inplace(ComplexMatrix &m, size_t data_qubits, double phi, size_t data_shift) {
    auto phases = signal_phases(data_qubits, phi);
    size_t n = m.dim();
    for (size_t i = 0; i < n; i++) {
        cplx pi = phases[i >> data_shift];
        auto row = m.row(i);
        for (size_t j = 0; j < n; j++) {
            row[j] *= pi * std::conj(phases[j >> data_shift]);
        }
    }
}

DensityMatrix noisy_state(const Probe &probe, double phi, const NoiseSpec &noise) {
    size_t n = probe.num_qubits();
    ComplexMatrix m = ComplexMatrix::outer(probe.psi0, probe.psi0);
    auto p = noise.probs();
    for (size_t q = 0; q < n; q++) {
        apply_pauli_channel_inplace(m, p, uint64_t{1} << q);
    }
    apply_signal_inplace(m, n, phi);
    for (size_t q = 0; q < n; q++) {
        apply_pauli_channel_inplace(m, p, uint64_t{1} << q);
    }
    return DensityMatrix::from_matrix_unchecked(std::move(m));
}

double dominant_eigenvalue(const Probe &probe, double phi, const NoiseSpec &noise) {
    return hermitian_eig(noisy_state(probe, phi, noise).matrix()).eigenvalues.front();
}

double calibrate_strength(const Probe &probe, NoiseKind kind, double phi_ref, double target_lambda) {
    constexpr double kTol = 1e-8;
    if (!(target_lambda > 0.5 && target_lambda <= 1)) {
        throw std::invalid_argument("calibrate_strength: target must lie in (0.5, 1], got " +
                                    std::to_string(target_lambda));
    }
    if (target_lambda == 1) {
        return 0;
    }
    using Key = std::tuple<std::string, int, double, double>;
    static std::mutex mu;
    static std::map<Key, double> cache;
    Key key{probe.name, int(kind), phi_ref, target_lambda};
    {
        std::lock_guard<std::mutex> lock(mu);
        auto it = cache.find(key);
        if (it != cache.end()) {
            return it->second;
        }
    }

    auto lambda_at = [&](double d) { return dominant_eigenvalue(probe, phi_ref, NoiseSpec::preset(kind, d)); };
    double lo = 0;
    double hi = 0.5;
    double lam_hi = lambda_at(hi);
    if (lam_hi > target_lambda) {
        throw std::invalid_argument("calibrate_strength: target " + std::to_string(target_lambda) +
                                    " not reachable for strength <= 0.5 (lambda(0.5) = " + std::to_string(lam_hi) +
                                    ")");
    }
    double mid = 0.5 * (lo + hi);
    double lam_lo = 1;
    for (int it = 0; it < 60; it++) {
        mid = 0.5 * (lo + hi);
        double lam = lambda_at(mid);
        if (lam > lam_lo + 1e-12 || lam < lam_hi - 1e-12) {
            throw NumericError("calibrate_strength: dominant eigenvalue not monotone in strength");
        }
        if (std::abs(lam - target_lambda) < kTol) {
            break;
        }
        if (lam > target_lambda) {
            lo = mid;
            lam_lo = lam;
        } else {
            hi = mid;
            lam_hi = lam;
        }
    }
    double final_lambda = lambda_at(mid);
    if (std::abs(final_lambda - target_lambda) >= kTol) {
        throw NumericError("calibrate_strength: bisection did not reach the target");
    }
    std::lock_guard<std::mutex> lock(mu);
    cache.emplace(key, mid);
    return mid;
}

}  // namespace vpm
