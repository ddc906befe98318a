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

#include "vpm/stabilizer.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "json.hpp"
#include "vpm/errors.h"

namespace vpm {

namespace {

// Row-reduces (x|z) vectors; returns true if v is independent of `basis` and
// inserts it.
bool insert_independent(std::vector<std::pair<uint64_t, uint64_t>> &basis, size_t n, const PauliString &p) {
    // Pack x into high bits and z into low bits so one word holds the vector.
    uint64_t v = (p.x_mask() << n) | p.z_mask();
    for (auto &[pivot, row] : basis) {
        if (v & pivot) {
            v ^= row;
        }
    }
    if (v == 0) {
        return false;
    }
    uint64_t pivot = uint64_t{1} << (63 - std::countl_zero(v));
    for (auto &[pv, row] : basis) {
        if (row & pivot) {
            row ^= v;
        }
    }
    basis.emplace_back(pivot, v);
    return true;
}

}  // namespace

size_t symplectic_rank(const std::vector<PauliString> &ps) {
    if (ps.empty()) {
        return 0;
    }
    std::vector<std::pair<uint64_t, uint64_t>> basis;
    size_t n = ps.front().num_qubits();
    size_t rank = 0;
    for (const auto &p : ps) {
        rank += insert_independent(basis, n, p);
    }
    return rank;
}

StabilizerGroup::StabilizerGroup(size_t num_qubits, std::vector<PauliString> generators)
    : num_qubits_(num_qubits), generators_(std::move(generators)) {
    if (num_qubits == 0 || num_qubits > 10) {
        throw std::invalid_argument("StabilizerGroup: qubit count must be in [1, 10]");
    }
    if (generators_.size() > num_qubits) {
        throw std::invalid_argument("StabilizerGroup: more generators than qubits");
    }
    for (size_t a = 0; a < generators_.size(); a++) {
        const auto &g = generators_[a];
        if (g.num_qubits() != num_qubits) {
            throw std::invalid_argument("StabilizerGroup: generator " + g.str() + " has wrong qubit count");
        }
        if (!g.is_hermitian()) {
            throw std::invalid_argument("StabilizerGroup: generator " + g.str() + " is not Hermitian");
        }
        if (g.is_identity_up_to_phase()) {
            throw std::invalid_argument("StabilizerGroup: identity is not a valid generator");
        }
        for (size_t b = 0; b < a; b++) {
            if (!commutes(g, generators_[b])) {
                throw std::invalid_argument("StabilizerGroup: generators " + generators_[b].str() + " and " +
                                            g.str() + " anticommute");
            }
        }
    }
    if (symplectic_rank(generators_) != generators_.size()) {
        throw std::invalid_argument("StabilizerGroup: generators are not independent");
    }
    // With independent generators the only way to reach -I is a product whose
    // Pauli part is the identity, which independence already excludes; the
    // exhaustive pass guards the phase bookkeeping anyway.
    PauliString minus_identity = PauliString(num_qubits).with_phase_shift(2);
    for (const auto &e : elements()) {
        if (e == minus_identity) {
            throw std::invalid_argument("StabilizerGroup: -I is generated");
        }
    }
}

std::vector<PauliString> StabilizerGroup::elements() const {
    size_t k = generators_.size();
    std::vector<PauliString> out;
    out.reserve(size_t{1} << k);
    out.push_back(PauliString(num_qubits_));
    // Element m = element(m without its top bit) * generator(top bit), which
    // keeps generator order ascending within each product.
    for (size_t m = 1; m < (size_t{1} << k); m++) {
        size_t top = 63 - std::countl_zero(uint64_t(m));
        out.push_back(multiply(out[m ^ (size_t{1} << top)], generators_[top]));
    }
    return out;
}

bool StabilizerGroup::contains(const PauliString &p) const {
    for (const auto &e : elements()) {
        if (e == p) {
            return true;
        }
    }
    return false;
}

StateVector stabilizer_state(const StabilizerGroup &g) {
    size_t n = g.num_qubits();
    if (g.size() != n) {
        throw std::invalid_argument("stabilizer_state: need " + std::to_string(n) + " generators, got " +
                                    std::to_string(g.size()));
    }
    size_t dim = size_t{1} << n;
    for (size_t ref = 0; ref < dim; ref++) {
        StateVector v(dim);
        v[ref] = 1;
        for (const auto &s : g.generators()) {
            StateVector sv = apply_pauli(s, v);
            for (size_t j = 0; j < dim; j++) {
                v[j] = 0.5 * (v[j] + sv[j]);
            }
        }
        double nv = norm(v);
        if (nv > 1e-6) {
            for (auto &e : v) {
                e /= nv;
            }
            normalize_phase(v);
            return v;
        }
    }
    throw std::invalid_argument("stabilizer_state: projector annihilates every basis state (-I in group)");
}

StabilizerGroup commuting_subgroup(const StabilizerGroup &g) {
    std::vector<std::pair<uint64_t, uint64_t>> basis;
    std::vector<PauliString> picked;
    for (const auto &e : g.elements()) {
        if (e.is_identity_up_to_phase() || !e.is_z_type()) {
            continue;
        }
        if (insert_independent(basis, g.num_qubits(), e)) {
            picked.push_back(e);
        }
    }
    return StabilizerGroup(g.num_qubits(), std::move(picked));
}

std::vector<double> total_z_diagonal(size_t num_qubits) {
    size_t dim = size_t{1} << num_qubits;
    std::vector<double> h(dim);
    for (size_t j = 0; j < dim; j++) {
        h[j] = double(num_qubits) - 2.0 * std::popcount(j);
    }
    return h;
}

double variance_of_hamiltonian(std::span<const cplx> psi) {
    size_t n = std::countr_zero(psi.size());
    auto h = total_z_diagonal(n);
    double m1 = 0;
    double m2 = 0;
    for (size_t j = 0; j < psi.size(); j++) {
        double w = std::norm(psi[j]);
        m1 += w * h[j];
        m2 += w * h[j] * h[j];
    }
    return m2 - m1 * m1;
}

double variance_of_hamiltonian(const Probe &probe) {
    return variance_of_hamiltonian(probe.psi0);
}

Probe Probe::create(std::string name, StabilizerGroup group, PauliString observable, double lo, double hi) {
    size_t n = group.num_qubits();
    if (group.size() != n) {
        throw std::invalid_argument("probe " + name + ": needs " + std::to_string(n) + " generators");
    }
    if (observable.num_qubits() != n) {
        throw std::invalid_argument("probe " + name + ": observable qubit count mismatch");
    }
    if (!observable.is_hermitian()) {
        throw std::invalid_argument("probe " + name + ": observable is not Hermitian");
    }
    if (observable.x_mask() == 0) {
        throw std::invalid_argument("probe " + name + ": observable commutes with every Z and carries no signal");
    }
    if (!(std::isfinite(lo) && std::isfinite(hi) && lo < hi)) {
        throw std::invalid_argument("probe " + name + ": bad inversion domain");
    }
    Probe p;
    p.name = std::move(name);
    p.psi0 = stabilizer_state(group);
    for (const auto &e : group.elements()) {
        if (e.weight() == 1) {
            throw std::invalid_argument("probe " + p.name + ": single-qubit element " + e.str() + " in group");
        }
    }
    for (const auto &s : group.generators()) {
        StateVector sv = apply_pauli(s, p.psi0);
        double d = 0;
        for (size_t j = 0; j < sv.size(); j++) {
            d = std::max(d, std::abs(sv[j] - p.psi0[j]));
        }
        if (d > 1e-10) {
            throw std::invalid_argument("probe " + p.name + ": state not stabilized by " + s.str());
        }
    }
    p.group = std::move(group);
    p.observable = observable;
    p.domain_lo = lo;
    p.domain_hi = hi;
    return p;
}

namespace {

Probe make_probe(const std::string &name, const std::vector<std::string> &gens, const std::string &obs, double lo,
                 double hi) {
    std::vector<PauliString> ps;
    for (const auto &g : gens) {
        ps.push_back(PauliString::from_str(g));
    }
    size_t n = ps.front().num_qubits();
    return Probe::create(name, StabilizerGroup(n, std::move(ps)), PauliString::from_str(obs), lo, hi);
}

}  // namespace

std::vector<std::string> builtin_probe_names() {
    return {"ghz5", "twin5", "steane7"};
}

Probe builtin_probe(const std::string &name) {
    constexpr double kPi = std::numbers::pi;
    if (name == "ghz5") {
        return make_probe(name, {"+ZZIII", "+IZZII", "+IIZZI", "+IIIZZ", "+XXXXX"}, "+YYYYY", -kPi / 10, kPi / 10);
    }
    if (name == "twin5") {
        // Aligned generators of the twin graph state after the local X
        // rotations, so the Z-type subgroup is explicit.
        return make_probe(name, {"+IZIIZ", "+IIZZI", "+IXXYX", "+XYIIY", "+YYYYX"}, "+YYYYX", 0, kPi / 10);
    }
    if (name == "steane7") {
        return make_probe(name,
                          {"+IZZZZII", "+IIIZZZZ", "+ZIZIZIZ", "+ZZZZZZZ", "+IXXXXII", "+IIIXXXX", "+XIXIXIX"},
                          "+IIIXXXX", 0, kPi / 10);
    }
    throw std::invalid_argument("unknown probe '" + name + "' (expected ghz5, twin5 or steane7)");
}

std::vector<Probe> parse_probes(const std::string &json_text) {
    using nlohmann::json;
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::exception &e) {
        throw ConfigError(std::string("probe file: ") + e.what());
    }
    if (!doc.is_object() || !doc.contains("probes") || !doc["probes"].is_array()) {
        throw ConfigError("probe file: expected an object with a \"probes\" array");
    }
    std::vector<Probe> out;
    for (const auto &entry : doc["probes"]) {
        try {
            auto name = entry.at("name").get<std::string>();
            auto gens = entry.at("generators").get<std::vector<std::string>>();
            auto obs = entry.at("observable").get<std::string>();
            auto dom = entry.at("domain").get<std::vector<double>>();
            if (gens.empty()) {
                throw ConfigError("probe " + name + ": no generators");
            }
            for (const auto &g : gens) {
                if (g.empty() || (g[0] != '+' && g[0] != '-')) {
                    throw ConfigError("probe " + name + ": generator \"" + g + "\" must start with '+' or '-'");
                }
                if (g.find('_') != std::string::npos) {
                    throw ConfigError("probe " + name + ": generator \"" + g + "\" may only use I, X, Y, Z");
                }
            }
            if (dom.size() != 2) {
                throw ConfigError("probe " + name + ": domain must be [lo, hi]");
            }
            out.push_back(make_probe(name, gens, obs, dom[0], dom[1]));
        } catch (const json::exception &e) {
            throw ConfigError(std::string("probe file: ") + e.what());
        } catch (const std::invalid_argument &e) {
            throw ConfigError(e.what());
        }
    }
    return out;
}

std::vector<Probe> load_probes(const std::string &path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open probe file " + path);
    }
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_probes(buf.str());
}

}  // namespace vpm
