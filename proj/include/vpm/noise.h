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

#include <string>

#include "vpm/linalg.h"
#include "vpm/stabilizer.h"

namespace vpm {

enum class NoiseKind { kDepolarizing, kDephasing, kCustom };

std::string to_string(NoiseKind kind);
/// Throws ConfigError on an unknown name.
NoiseKind parse_noise_kind(const std::string &name);

struct PauliProbs {
    double p_i = 1;
    double p_x = 0;
    double p_y = 0;
    double p_z = 0;
};

/// Per-qubit Pauli channel whose error probabilities are linear in a strength
/// delta: (p_x, p_y, p_z) = delta * (k_x, k_y, k_z).
///
/// A custom channel given as explicit probabilities is stored with delta = 1
/// and the probabilities as rates, so it cannot be rescaled meaningfully.
class NoiseSpec {
   public:
    NoiseSpec() = default;

    static NoiseSpec depolarizing(double delta);
    static NoiseSpec dephasing(double delta);
    static NoiseSpec custom(double p_i, double p_x, double p_y, double p_z);
    /// Custom kind that still scales with delta.
    static NoiseSpec custom_linear(double k_x, double k_y, double k_z, double delta);
    /// Preset of `kind` at strength delta; kCustom is rejected.
    static NoiseSpec preset(NoiseKind kind, double delta);

    NoiseKind kind() const {
        return kind_;
    }
    double delta() const {
        return delta_;
    }
    double k_x() const {
        return k_x_;
    }
    double k_y() const {
        return k_y_;
    }
    double k_z() const {
        return k_z_;
    }
    PauliProbs probs() const;
    NoiseSpec with_delta(double delta) const;

   private:
    NoiseSpec(NoiseKind kind, double delta, double k_x, double k_y, double k_z);
    void validate() const;

    NoiseKind kind_ = NoiseKind::kDepolarizing;
    double delta_ = 0;
    double k_x_ = 0.25;
    double k_y_ = 0.25;
    double k_z_ = 0.25;
};

/// Diagonal of U(phi) = exp(-i phi/2 sum Z).
std::vector<cplx> signal_phases(size_t num_qubits, double phi);
ComplexMatrix signal_unitary(size_t num_qubits, double phi);

/// rho -> sum_P p_P P rho P on one qubit. `bit` is the basis-index bit of the
/// qubit, which lets callers address data qubits of a larger register.
void apply_pauli_channel_inplace(ComplexMatrix &m, const PauliProbs &probs, uint64_t bit);
/// Same channel on every qubit of the register.
DensityMatrix apply_channel(const DensityMatrix &rho, const NoiseSpec &noise);

/// U rho U^dagger for the diagonal signal unitary; `data_shift` skips that
/// many low-order (ancilla) bits when computing the H eigenvalue.
void apply_signal_inplace(ComplexMatrix &m, size_t data_qubits, double phi, size_t data_shift = 0);

/// E(U(E(|psi0><psi0|))).
DensityMatrix noisy_state(const Probe &probe, double phi, const NoiseSpec &noise);

/// Largest eigenvalue of the noisy state.
double dominant_eigenvalue(const Probe &probe, double phi, const NoiseSpec &noise);

/// Strength delta in [0, 0.5] giving the target dominant eigenvalue at phi_ref,
/// by bisection. Results are cached per (probe, kind, phi_ref, target).
/// Throws std::invalid_argument when the target is outside (0.5, 1] or cannot
/// be bracketed.
double calibrate_strength(const Probe &probe, NoiseKind kind, double phi_ref, double target_lambda);

constexpr double kCalibrationPhi = 0.01;

}  // namespace vpm
