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

#include <complex>
#include <cstdint>
#include <string>
#include <string_view>

namespace vpm {

/// Symplectic N-qubit Pauli operator with a phase in {+1, +i, -1, -i}.
///
/// The operator is `i^phase * W_0 (x) W_1 (x) ... (x) W_{N-1}` where W_q is
/// I/X/Y/Z for (x_q, z_q) = (0,0)/(1,0)/(1,1)/(0,1). Y is the standard Pauli Y,
/// not iXZ.
///
/// Bit layout follows computational-basis indices: qubit 0 is the most
/// significant bit of a basis index, so `x_mask()` can be XORed directly into
/// an index. At most 16 qubits.
class PauliString {
   public:
    static constexpr size_t kMaxQubits = 16;

    PauliString() = default;
    /// Identity on `num_qubits` qubits.
    explicit PauliString(size_t num_qubits);
    PauliString(size_t num_qubits, uint64_t x_mask, uint64_t z_mask, uint8_t phase = 0);

    /// Parses an optional sign ('+' or '-') followed by characters from IXYZ.
    /// Also accepts '_' as identity. Throws std::invalid_argument.
    static PauliString from_str(std::string_view text);
    /// Single-qubit Pauli `kind` ('X', 'Y' or 'Z') on `qubit`.
    static PauliString single(size_t num_qubits, size_t qubit, char kind);

    size_t num_qubits() const {
        return num_qubits_;
    }
    uint64_t x_mask() const {
        return x_;
    }
    uint64_t z_mask() const {
        return z_;
    }
    /// Exponent k of the global factor i^k.
    uint8_t phase() const {
        return phase_;
    }
    std::complex<double> phase_factor() const;

    bool x_bit(size_t qubit) const;
    bool z_bit(size_t qubit) const;
    /// 'I', 'X', 'Y' or 'Z' on `qubit`.
    char pauli_at(size_t qubit) const;

    bool is_hermitian() const {
        return (phase_ & 1) == 0;
    }
    bool is_identity_up_to_phase() const {
        return x_ == 0 && z_ == 0;
    }
    bool is_z_type() const {
        return x_ == 0;
    }
    size_t weight() const;

    /// Returns a copy multiplied by i^k.
    PauliString with_phase_shift(int k) const;
    /// Extends to `total_qubits` by appending identities on new low-order qubits.
    PauliString padded(size_t total_qubits) const;

    /// Amplitude factor c such that P|j> = c |j ^ x_mask()>.
    std::complex<double> basis_factor(uint64_t index) const;

    std::string str() const;

    bool operator==(const PauliString &other) const = default;

   private:
    size_t num_qubits_ = 0;
    uint64_t x_ = 0;
    uint64_t z_ = 0;
    uint8_t phase_ = 0;
};

/// Product p*q with exact phase tracking.
PauliString multiply(const PauliString &p, const PauliString &q);
/// True iff the symplectic inner product of p and q vanishes.
bool commutes(const PauliString &p, const PauliString &q);

std::ostream &operator<<(std::ostream &out, const PauliString &p);

}  // namespace vpm
