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

#include "vpm/qec.h"

#include <algorithm>
#include <bit>
#include <cmath>

#include "vpm/errors.h"

namespace vpm {

std::vector<double> StabilizerCode::projector_diagonal() const {
    std::vector<double> d(size_t{1} << n_data);
    for (uint64_t b : basis) {
        d[b] = 1;
    }
    return d;
}

uint64_t basis_syndrome(uint64_t index, const StabilizerCode &code) {
    uint64_t syn = 0;
    const auto &gens = code.generators.generators();
    for (size_t g = 0; g < gens.size(); g++) {
        if (gens[g].basis_factor(index).real() < 0) {
            syn |= uint64_t{1} << g;
        }
    }
    return syn;
}

uint64_t syndrome(const PauliString &p, const StabilizerCode &code) {
    uint64_t syn = 0;
    const auto &gens = code.generators.generators();
    for (size_t g = 0; g < gens.size(); g++) {
        if (!commutes(p, gens[g])) {
            syn |= uint64_t{1} << g;
        }
    }
    return syn;
}

StabilizerCode build_code(const Probe &probe) {
    StabilizerCode code;
    code.generators = commuting_subgroup(probe.group);
    code.n_data = probe.num_qubits();
    if (code.generators.size() == 0) {
        throw std::invalid_argument("build_code: probe " + probe.name + " has no Z-type stabilizers");
    }
    for (const auto &g : code.generators.generators()) {
        if (!g.is_z_type()) {
            throw std::logic_error("build_code: commuting subgroup returned a non-diagonal generator");
        }
    }
    size_t dim = size_t{1} << code.n_data;
    for (uint64_t j = 0; j < dim; j++) {
        if (basis_syndrome(j, code) == 0) {
            code.basis.push_back(j);
        }
    }
    if (code.basis.empty()) {
        throw std::invalid_argument("build_code: empty code space");
    }
    std::stable_sort(code.basis.begin(), code.basis.end(),
                     [](uint64_t a, uint64_t b) { return std::popcount(a) < std::popcount(b); });
    return code;
}

PauliString DecoderTable::correction(uint64_t syn) const {
    auto it = corrections.find(syn);
    if (it == corrections.end()) {
        return PauliString(n_data);
    }
    return it->second;
}

DecoderTable build_decoder(const StabilizerCode &code, const NoiseSpec &noise) {
    DecoderTable table;
    table.n_data = code.n_data;
    table.corrections.emplace(0, PauliString(code.n_data));
    auto p = noise.probs();
    if (p.p_x + p.p_y > 0) {
        char kind = p.p_x >= p.p_y ? 'X' : 'Y';
        for (size_t q = 0; q < code.n_data; q++) {
            uint64_t syn = syndrome(PauliString::single(code.n_data, q, 'X'), code);
            if (syn != 0) {
                table.corrections.emplace(syn, PauliString::single(code.n_data, q, kind));
            }
        }
    }
    table.unreachable_count = (size_t{1} << code.generators.size()) - table.corrections.size();
    return table;
}

StateVector LogicalProbe::state(double phi) const {
    size_t dim = size_t{1} << total_qubits();
    StateVector v(dim);
    auto phases = signal_phases(code.n_data, phi);
    for (size_t i = 0; i < code.basis.size(); i++) {
        uint64_t b = code.basis[i];
        v[(b << n_anc) | i] = amplitudes[i] * phases[b];
    }
    return v;
}

std::vector<uint64_t> decoding_permutation(const LogicalProbe &logical) {
    size_t dim = size_t{1} << logical.total_qubits();
    std::vector<uint64_t> perm(dim, dim);
    std::vector<bool> out_used(dim, false);
    for (size_t i = 0; i < logical.code.basis.size(); i++) {
        uint64_t b = logical.code.basis[i] << logical.n_anc;
        perm[b | i] = b;
        out_used[b] = true;
    }
    size_t next_out = 0;
    for (size_t in = 0; in < dim; in++) {
        if (perm[in] != dim) {
            continue;
        }
        while (out_used[next_out]) {
            next_out++;
        }
        perm[in] = next_out;
        out_used[next_out] = true;
    }
    return perm;
}

namespace {

// <A> on the data register of a pure joint vector after V^dagger.
double decoded_pure_expectation(const StateVector &joint, const std::vector<uint64_t> &perm, size_t n_anc,
                                const PauliString &a) {
    StateVector w(joint.size());
    for (size_t k = 0; k < joint.size(); k++) {
        w[perm[k]] = joint[k];
    }
    uint64_t x = a.x_mask() << n_anc;
    PauliString ap = a.padded(a.num_qubits() + n_anc);
    cplx s = 0;
    for (size_t k = 0; k < w.size(); k++) {
        s += std::conj(w[k ^ x]) * ap.basis_factor(k) * w[k];
    }
    return s.real();
}

double bare_expectation(const Probe &probe, double phi) {
    auto phases = signal_phases(probe.num_qubits(), phi);
    StateVector psi(probe.psi0.size());
    for (size_t k = 0; k < psi.size(); k++) {
        psi[k] = phases[k] * probe.psi0[k];
    }
    auto ap = apply_pauli(probe.observable, psi);
    return inner(psi, ap).real();
}

}  // namespace

LogicalProbe encode_logical(const Probe &probe) {
    LogicalProbe lp;
    lp.code = build_code(probe);
    size_t dim = lp.code.code_dim();
    lp.n_anc = dim <= 1 ? 0 : size_t(std::bit_width(dim - 1));
    if (lp.total_qubits() > 10) {
        throw std::invalid_argument("encode_logical: data plus ancilla exceed 10 qubits");
    }
    double weight = 0;
    for (uint64_t b : lp.code.basis) {
        lp.amplitudes.push_back(probe.psi0[b]);
        weight += std::norm(probe.psi0[b]);
    }
    if (std::abs(weight - 1) > 1e-10) {
        throw NumericError("encode_logical: probe state leaks out of the code space");
    }
    auto perm = decoding_permutation(lp);
    for (int k = 0; k <= 10; k++) {
        double phi = probe.domain_lo + (probe.domain_hi - probe.domain_lo) * k / 10.0;
        double got = decoded_pure_expectation(lp.state(phi), perm, lp.n_anc, probe.observable);
        double want = bare_expectation(probe, phi);
        if (std::abs(got - want) > 1e-9) {
            throw NumericError("encode_logical: noiseless decoded response differs from the bare response at phi=" +
                               std::to_string(phi));
        }
    }
    return lp;
}

ComplexMatrix recover(const ComplexMatrix &rho, const LogicalProbe &logical, const DecoderTable &decoder) {
    size_t n = rho.dim();
    size_t total = logical.total_qubits();
    if (n != (size_t{1} << total)) {
        throw std::invalid_argument("recover: state dimension does not match the logical register");
    }
    size_t num_syn = size_t{1} << logical.code.generators.size();
    std::vector<PauliString> corr;
    corr.reserve(num_syn);
    for (size_t s = 0; s < num_syn; s++) {
        corr.push_back(decoder.correction(s).padded(total));
    }
    std::vector<uint32_t> syn(n);
    std::vector<cplx> factor(n);
    for (size_t i = 0; i < n; i++) {
        syn[i] = uint32_t(basis_syndrome(i >> logical.n_anc, logical.code));
        factor[i] = corr[syn[i]].basis_factor(i);
    }
    ComplexMatrix out(n);
    for (size_t i = 0; i < n; i++) {
        uint64_t xi = corr[syn[i]].x_mask();
        auto in_row = rho.row(i);
        auto out_row = out.row(i ^ xi);
        for (size_t j = 0; j < n; j++) {
            if (syn[j] != syn[i]) {
                continue;
            }
            out_row[j ^ xi] += factor[i] * in_row[j] * std::conj(factor[j]);
        }
    }
    return out;
}

QecPipeline::QecPipeline(const Probe &probe)
    : probe_(&probe), logical_(encode_logical(probe)), decode_perm_(vpm::decoding_permutation(logical_)) {
}

ComplexMatrix QecPipeline::recovered_state(double phi, const NoiseSpec &noise) const {
    auto psi = logical_.state(phi);
    ComplexMatrix m = ComplexMatrix::outer(psi, psi);
    auto p = noise.probs();
    // Pre-signal noise is taken as perfectly corrected; only the channel after
    // the signal acts, on data qubits only.
    for (size_t q = 0; q < logical_.code.n_data; q++) {
        apply_pauli_channel_inplace(m, p, uint64_t{1} << (logical_.n_anc + q));
    }
    return recover(m, logical_, build_decoder(logical_.code, noise));
}

ComplexMatrix QecPipeline::decode(const ComplexMatrix &joint) const {
    size_t n = joint.dim();
    ComplexMatrix out(n);
    for (size_t i = 0; i < n; i++) {
        auto in_row = joint.row(i);
        auto out_row = out.row(decode_perm_[i]);
        for (size_t j = 0; j < n; j++) {
            out_row[decode_perm_[j]] = in_row[j];
        }
    }
    return out;
}

ComplexMatrix QecPipeline::trace_out_ancilla(const ComplexMatrix &joint) const {
    size_t na = logical_.n_anc;
    size_t dd = size_t{1} << logical_.code.n_data;
    size_t da = size_t{1} << na;
    ComplexMatrix out(dd);
    for (size_t d = 0; d < dd; d++) {
        for (size_t e = 0; e < dd; e++) {
            cplx s = 0;
            for (size_t a = 0; a < da; a++) {
                s += joint((d << na) | a, (e << na) | a);
            }
            out(d, e) = s;
        }
    }
    return out;
}

DensityMatrix QecPipeline::decoded_data_state(double phi, const NoiseSpec &noise) const {
    return DensityMatrix::from_matrix_unchecked(trace_out_ancilla(decode(recovered_state(phi, noise))));
}

double QecPipeline::expectation(double phi, const NoiseSpec &noise) const {
    auto rho = decoded_data_state(phi, noise);
    return trace_pauli_product(probe_->observable, rho.matrix()).real();
}

double qec_expectation(const QecPipeline &pipeline, double phi, const NoiseSpec &noise) {
    return pipeline.expectation(phi, noise);
}

DensityMatrix first_order_qec_state(const LogicalProbe &logical, double phi, const NoiseSpec &noise) {
    auto p = noise.probs();
    double n = double(logical.code.n_data);
    double m = std::min(p.p_x, p.p_y);
    double lead = 1 - n * p.p_z - n * m;
    if (lead < 0) {
        throw std::invalid_argument("first_order_qec_state: noise too strong, leading weight is negative");
    }
    auto psi = logical.state(phi);
    ComplexMatrix base = ComplexMatrix::outer(psi, psi);
    ComplexMatrix out = lead * base;
    size_t total = logical.total_qubits();
    for (size_t q = 0; q < logical.code.n_data; q++) {
        auto z = PauliString::single(logical.code.n_data, q, 'Z').padded(total);
        out += (p.p_z + m) * apply_pauli(z, base, PauliSide::kConjugate);
    }
    out *= 1.0 / trace(out).real();
    return DensityMatrix::from_matrix_unchecked(std::move(out));
}

namespace {

void assert_tradeoff(const TradeoffReport &r) {
    if (r.correctable_count == r.z_correctable.size() && r.h_spread > 1e-9) {
        throw NumericError("check_c2_c3_tradeoff: every Z is correctable yet the code carries signal");
    }
}

}  // namespace

TradeoffReport check_c2_c3_tradeoff(const StabilizerCode &code) {
    TradeoffReport r;
    auto h = total_z_diagonal(code.n_data);
    for (size_t q = 0; q < code.n_data; q++) {
        // P Z_q P is diagonal; proportional to P iff Z_q is constant on the code basis.
        auto z = PauliString::single(code.n_data, q, 'Z');
        double first = z.basis_factor(code.basis.front()).real();
        bool constant = true;
        for (uint64_t b : code.basis) {
            constant &= z.basis_factor(b).real() == first;
        }
        r.z_correctable.push_back(constant);
        r.correctable_count += constant;
    }
    double lo = h[code.basis.front()];
    double hi = lo;
    for (uint64_t b : code.basis) {
        lo = std::min(lo, h[b]);
        hi = std::max(hi, h[b]);
    }
    r.h_spread = hi - lo;
    r.max_h_variance = 0.25 * r.h_spread * r.h_spread;
    assert_tradeoff(r);
    return r;
}

TradeoffReport check_c2_c3_tradeoff(const ComplexMatrix &projector) {
    size_t dim = projector.dim();
    size_t n = std::countr_zero(dim);
    if (hermiticity_error(projector) > 1e-10 || max_abs_diff(matmul(projector, projector), projector) > 1e-10) {
        throw std::invalid_argument("check_c2_c3_tradeoff: input is not an orthogonal projector");
    }
    double rank = trace(projector).real();
    size_t r_int = size_t(std::lround(rank));
    if (r_int == 0) {
        throw std::invalid_argument("check_c2_c3_tradeoff: empty code space");
    }
    TradeoffReport r;
    for (size_t q = 0; q < n; q++) {
        auto z = PauliString::single(n, q, 'Z');
        ComplexMatrix pzp = matmul(projector, apply_pauli(z, projector, PauliSide::kLeft));
        double lam = trace(pzp).real() / rank;
        ComplexMatrix diff = pzp - lam * projector;
        double dev = 0;
        for (const auto &e : diff.data()) {
            dev = std::max(dev, std::abs(e));
        }
        bool ok = dev < 1e-10;
        r.z_correctable.push_back(ok);
        r.correctable_count += ok;
    }
    // Shift H so the code-space eigenvalues of P(H + c)P sit strictly above
    // the zeros contributed by the complement.
    double c = double(n) + 1;
    auto h = total_z_diagonal(n);
    std::vector<cplx> hd(dim);
    for (size_t k = 0; k < dim; k++) {
        hd[k] = h[k] + c;
    }
    ComplexMatrix m = matmul(projector, matmul(ComplexMatrix::diagonal(hd), projector));
    auto eig = hermitian_eig(m);
    r.h_spread = eig.eigenvalues[0] - eig.eigenvalues[r_int - 1];
    if (r.h_spread < 1e-12) {
        r.h_spread = 0;
    }
    r.max_h_variance = 0.25 * r.h_spread * r.h_spread;
    assert_tradeoff(r);
    return r;
}

}  // namespace vpm
