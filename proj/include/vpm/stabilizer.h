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

#include <optional>
#include <string>
#include <vector>

#include "vpm/linalg.h"
#include "vpm/pauli_string.h"

namespace vpm {

/// Abelian Pauli group given by independent Hermitian generators, -I excluded.
class StabilizerGroup {
   public:
    StabilizerGroup() = default;
    /// Validates commutation, independence and absence of -I.
    /// Throws std::invalid_argument.
    StabilizerGroup(size_t num_qubits, std::vector<PauliString> generators);

    size_t num_qubits() const {
        return num_qubits_;
    }
    const std::vector<PauliString> &generators() const {
        return generators_;
    }
    size_t size() const {
        return generators_.size();
    }

    /// All 2^k elements; element m is the ordered product of generators whose
    /// bit is set in m (generator 0 first).
    std::vector<PauliString> elements() const;
    bool contains(const PauliString &p) const;

   private:
    size_t num_qubits_ = 0;
    std::vector<PauliString> generators_;
};

/// GF(2) rank of the symplectic vectors (x|z), phases ignored.
size_t symplectic_rank(const std::vector<PauliString> &ps);

/// Unique state stabilized by a full group of num_qubits generators.
StateVector stabilizer_state(const StabilizerGroup &g);

/// Generators of the elements that commute with every single-qubit Z, picked
/// greedily in element enumeration order.
StabilizerGroup commuting_subgroup(const StabilizerGroup &g);

struct Probe {
    std::string name;
    StabilizerGroup group;
    PauliString observable;
    double domain_lo = 0;
    double domain_hi = 0;
    /// Cached stabilizer state.
    StateVector psi0;

    size_t num_qubits() const {
        return group.num_qubits();
    }

    /// Builds the state and checks every probe invariant. Throws
    /// std::invalid_argument naming the violated condition.
    static Probe create(std::string name, StabilizerGroup group, PauliString observable, double lo, double hi);
};

/// "ghz5", "twin5" or "steane7".
Probe builtin_probe(const std::string &name);
std::vector<std::string> builtin_probe_names();

/// <H^2> - <H>^2 for H = sum_i Z_i.
double variance_of_hamiltonian(const Probe &probe);
double variance_of_hamiltonian(std::span<const cplx> psi);

/// Diagonal of H = sum_i Z_i on n qubits: n - 2*popcount(index).
std::vector<double> total_z_diagonal(size_t num_qubits);

/// Parses a probe document {"probes":[{"name", "generators", "observable",
/// "domain"}]}. Throws ConfigError.
std::vector<Probe> load_probes(const std::string &path);
std::vector<Probe> parse_probes(const std::string &json_text);

}  // namespace vpm
