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

#include "vpm/pauli_string.h"

#include <bit>
#include <ostream>
#include <stdexcept>

namespace vpm {

namespace {

constexpr std::complex<double> kIPow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};

uint64_t qubit_bit(size_t num_qubits, size_t qubit) {
    return uint64_t{1} << (num_qubits - 1 - qubit);
}

void check_size(size_t num_qubits) {
    if (num_qubits == 0 || num_qubits > PauliString::kMaxQubits) {
        throw std::invalid_argument("PauliString: qubit count must be in [1, 16], got " + std::to_string(num_qubits));
    }
}

}  // namespace

PauliString::PauliString(size_t num_qubits) : num_qubits_(num_qubits) {
    check_size(num_qubits);
}

PauliString::PauliString(size_t num_qubits, uint64_t x_mask, uint64_t z_mask, uint8_t phase)
    : num_qubits_(num_qubits), x_(x_mask), z_(z_mask), phase_(phase & 3) {
    check_size(num_qubits);
    uint64_t full = (uint64_t{1} << num_qubits) - 1;
    if ((x_mask | z_mask) & ~full) {
        throw std::invalid_argument("PauliString: mask has bits beyond qubit count");
    }
}

PauliString PauliString::from_str(std::string_view text) {
    uint8_t phase = 0;
    if (!text.empty() && (text.front() == '+' || text.front() == '-')) {
        phase = text.front() == '-' ? 2 : 0;
        text.remove_prefix(1);
    }
    if (text.empty()) {
        throw std::invalid_argument("PauliString: empty operator string");
    }
    size_t n = text.size();
    check_size(n);
    uint64_t x = 0;
    uint64_t z = 0;
    for (size_t q = 0; q < n; q++) {
        uint64_t b = qubit_bit(n, q);
        switch (text[q]) {
            case 'I':
            case '_':
                break;
            case 'X':
                x |= b;
                break;
            case 'Y':
                x |= b;
                z |= b;
                break;
            case 'Z':
                z |= b;
                break;
            default:
                throw std::invalid_argument("PauliString: bad character '" + std::string(1, text[q]) + "' in \"" +
                                            std::string(text) + "\"");
        }
    }
    return PauliString(n, x, z, phase);
}

PauliString PauliString::single(size_t num_qubits, size_t qubit, char kind) {
    check_size(num_qubits);
    if (qubit >= num_qubits) {
        throw std::out_of_range("PauliString::single: qubit out of range");
    }
    uint64_t b = qubit_bit(num_qubits, qubit);
    switch (kind) {
        case 'X':
            return PauliString(num_qubits, b, 0);
        case 'Y':
            return PauliString(num_qubits, b, b);
        case 'Z':
            return PauliString(num_qubits, 0, b);
        default:
            throw std::invalid_argument("PauliString::single: kind must be X, Y or Z");
    }
}

std::complex<double> PauliString::phase_factor() const {
    return kIPow[phase_];
}

bool PauliString::x_bit(size_t qubit) const {
    return x_ & qubit_bit(num_qubits_, qubit);
}

bool PauliString::z_bit(size_t qubit) const {
    return z_ & qubit_bit(num_qubits_, qubit);
}

char PauliString::pauli_at(size_t qubit) const {
    constexpr char kChars[4] = {'I', 'X', 'Z', 'Y'};
    return kChars[int(x_bit(qubit)) | (int(z_bit(qubit)) << 1)];
}

size_t PauliString::weight() const {
    return std::popcount(x_ | z_);
}

PauliString PauliString::with_phase_shift(int k) const {
    PauliString r = *this;
    r.phase_ = uint8_t(((int(phase_) + k) % 4 + 4) % 4);
    return r;
}

PauliString PauliString::padded(size_t total_qubits) const {
    if (total_qubits < num_qubits_) {
        throw std::invalid_argument("PauliString::padded: cannot shrink");
    }
    size_t shift = total_qubits - num_qubits_;
    return PauliString(total_qubits, x_ << shift, z_ << shift, phase_);
}

std::complex<double> PauliString::basis_factor(uint64_t index) const {
    int k = phase_ + std::popcount(x_ & z_) + 2 * std::popcount(index & z_);
    return kIPow[k & 3];
}

std::string PauliString::str() const {
    std::string out;
    out.reserve(num_qubits_ + 2);
    switch (phase_) {
        case 0:
            out += '+';
            break;
        case 1:
            out += "+i";
            break;
        case 2:
            out += '-';
            break;
        default:
            out += "-i";
            break;
    }
    for (size_t q = 0; q < num_qubits_; q++) {
        out += pauli_at(q);
    }
    return out;
}

PauliString multiply(const PauliString &p, const PauliString &q) {
    if (p.num_qubits() != q.num_qubits()) {
        throw std::invalid_argument("multiply: qubit count mismatch");
    }
    // W = i^{xz} X^x Z^z per qubit; moving Z^{z1} past X^{x2} costs (-1)^{z1 x2}.
    uint64_t x3 = p.x_mask() ^ q.x_mask();
    uint64_t z3 = p.z_mask() ^ q.z_mask();
    int k = p.phase() + q.phase();
    k += std::popcount(p.x_mask() & p.z_mask());
    k += std::popcount(q.x_mask() & q.z_mask());
    k += 2 * std::popcount(p.z_mask() & q.x_mask());
    k -= std::popcount(x3 & z3);
    return PauliString(p.num_qubits(), x3, z3, uint8_t(((k % 4) + 4) % 4));
}

bool commutes(const PauliString &p, const PauliString &q) {
    if (p.num_qubits() != q.num_qubits()) {
        throw std::invalid_argument("commutes: qubit count mismatch");
    }
    uint64_t s = (p.x_mask() & q.z_mask()) ^ (p.z_mask() & q.x_mask());
    return (std::popcount(s) & 1) == 0;
}

std::ostream &operator<<(std::ostream &out, const PauliString &p) {
    return out << p.str();
}

}  // namespace vpm
