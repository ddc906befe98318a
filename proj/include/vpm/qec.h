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

#include <map>
#include <memory>
#include <vector>

#include "vpm/linalg.h"
#include "vpm/noise.h"
#include "vpm/stabilizer.h"

namespace vpm {

/// Code defined by the Z-type commuting subgroup of a probe. Because every
/// generator is diagonal, the code space is spanned by computational basis
/// states.
struct StabilizerCode {
    StabilizerGroup generators;
    size_t n_data = 0;
    /// Basis indices of the code space, ordered by descending H = sum Z
    /// eigenvalue, then ascending index.
    std::vector<uint64_t> basis;

    size_t code_dim() const {
        return basis.size();
    }
    /// Diagonal of the code projector.
    std::vector<double> projector_diagonal() const;
};

StabilizerCode build_code(const Probe &probe);

/// Bit g set iff p anticommutes with generator g.
uint64_t syndrome(const PauliString &p, const StabilizerCode &code);
/// Syndrome of a computational basis state of the data register.
uint64_t basis_syndrome(uint64_t index, const StabilizerCode &code);

struct DecoderTable {
    size_t n_data = 0;
    /// Syndrome -> correction on the data register. Missing syndromes map to
    /// the identity.
    std::map<uint64_t, PauliString> corrections;

    PauliString correction(uint64_t syn) const;
    size_t unreachable_count = 0;
};

/// Weight-one maximum-likelihood table: the syndrome of X_i maps to X_i when
/// p_x >= p_y and to Y_i otherwise. Colliding syndromes keep the lowest qubit.
DecoderTable build_decoder(const StabilizerCode &code, const NoiseSpec &noise);

/// Probe state copied into data (x) ancilla: sum_i s_i |b_i>_D |i>_A.
struct LogicalProbe {
    StabilizerCode code;
    size_t n_anc = 0;
    /// s_i = <b_i|psi0>.
    std::vector<cplx> amplitudes;

    size_t total_qubits() const {
        return code.n_data + n_anc;
    }
    /// |psi_L(phi)>, signal applied to the data register.
    StateVector state(double phi) const;
};

/// Throws NumericError if the noiseless decode-then-measure pipeline misses
/// the bare response at any of 11 check points.
LogicalProbe encode_logical(const Probe &probe);

/// V^dagger as a permutation of joint indices: |b_i>|i> -> |b_i>|0>, the
/// remaining inputs paired with the remaining outputs in index order.
std::vector<uint64_t> decoding_permutation(const LogicalProbe &logical);

/// R(rho) = sum_s C_s P_s rho P_s C_s^dagger on the joint register.
ComplexMatrix recover(const ComplexMatrix &rho, const LogicalProbe &logical, const DecoderTable &decoder);

/// Encoding, signal, post-signal noise, recovery, decoding isometry and a
/// data-only measurement of the probe observable. Build once per probe; the
/// decoder is rebuilt per noise spec.
class QecPipeline {
   public:
    explicit QecPipeline(const Probe &probe);

    const LogicalProbe &logical() const {
        return logical_;
    }

    /// State after recovery on data (x) ancilla, before decoding.
    ComplexMatrix recovered_state(double phi, const NoiseSpec &noise) const;
    /// Decoded reduced data state.
    DensityMatrix decoded_data_state(double phi, const NoiseSpec &noise) const;
    double expectation(double phi, const NoiseSpec &noise) const;

    /// V^dagger as a permutation of joint indices.
    const std::vector<uint64_t> &decoding_permutation() const {
        return decode_perm_;
    }
    ComplexMatrix decode(const ComplexMatrix &joint) const;
    /// Partial trace over the ancilla register.
    ComplexMatrix trace_out_ancilla(const ComplexMatrix &joint) const;

   private:
    const Probe *probe_;
    LogicalProbe logical_;
    std::vector<uint64_t> decode_perm_;
};

double qec_expectation(const QecPipeline &pipeline, double phi, const NoiseSpec &noise);

/// (1 - N p_z - N m)|psi_L><psi_L| + (p_z + m) sum_i Z_i|psi_L><psi_L|Z_i with
/// m = min(p_x, p_y), renormalized. Throws std::invalid_argument if the
/// leading weight is negative.
DensityMatrix first_order_qec_state(const LogicalProbe &logical, double phi, const NoiseSpec &noise);

struct TradeoffReport {
    /// Per data qubit: P Z_j P proportional to P.
    std::vector<bool> z_correctable;
    size_t correctable_count = 0;
    /// Max minus min eigenvalue of H restricted to the code space.
    double h_spread = 0;
    /// Largest H variance of a code state, (spread / 2)^2.
    double max_h_variance = 0;
};

/// Checks the diagonal Knill-Laflamme condition for every single-qubit Z
/// against the code-space spread of H. Throws NumericError if all Z are
/// correctable yet the spread is nonzero.
TradeoffReport check_c2_c3_tradeoff(const ComplexMatrix &projector);
TradeoffReport check_c2_c3_tradeoff(const StabilizerCode &code);

}  // namespace vpm
