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

#include <gtest/gtest.h>

#include <bit>
#include <functional>
#include <random>
#include <set>

#include "test_support.h"
#include "vpm/errors.h"
#include "vpm/estimation.h"

using namespace vpm;
using namespace vpm::testing;

namespace {

Probe ghz_probe(size_t n) {
    std::vector<PauliString> gens;
    for (size_t q = 0; q + 1 < n; q++) {
        std::string s(n, 'I');
        s[q] = s[q + 1] = 'Z';
        gens.push_back(PauliString::from_str(s));
    }
    gens.push_back(PauliString::from_str(std::string(n, 'X')));
    return Probe::create("ghz" + std::to_string(n), StabilizerGroup(n, gens),
                         PauliString::from_str(std::string(n, 'Y')), -0.3, 0.3);
}

Dense identity_dense(size_t dim) {
    Dense d = dense_zero(dim);
    for (size_t i = 0; i < dim; i++) {
        d[i][i] = 1;
    }
    return d;
}

void add_scaled(Dense &acc, const Dense &t, double w) {
    for (size_t i = 0; i < acc.size(); i++) {
        for (size_t j = 0; j < acc.size(); j++) {
            acc[i][j] += w * t[i][j];
        }
    }
}

// Whole QEC pipeline for an n-qubit GHZ probe built from dense matrices:
// code {|0..0>, |1..1>}, one ancilla, Kraus noise on the data, syndrome
// projectors from Z_q Z_{q+1}, weight-one corrections, index-order isometry.
double ghz_pipeline_oracle(size_t n, double phi, const NoiseSpec &noise) {
    size_t dim = size_t{1} << (n + 1);
    uint64_t ones = (uint64_t{1} << n) - 1;
    StateVector psi(dim);
    psi[0] = std::polar(1 / std::sqrt(2.0), -0.5 * phi * double(n));
    psi[(ones << 1) | 1] = std::polar(1 / std::sqrt(2.0), 0.5 * phi * double(n));
    Dense rho = dense_zero(dim);
    for (size_t i = 0; i < dim; i++) {
        for (size_t j = 0; j < dim; j++) {
            rho[i][j] = psi[i] * std::conj(psi[j]);
        }
    }

    auto p = noise.probs();
    Dense noisy = dense_zero(dim);
    for (size_t code = 0; code < (size_t{1} << (2 * n)); code++) {
        std::string text = "+";
        double w = 1;
        for (size_t q = 0; q < n; q++) {
            int k = (code >> (2 * q)) & 3;
            text += "IXYZ"[k];
            w *= (k == 0 ? p.p_i : k == 1 ? p.p_x : k == 2 ? p.p_y : p.p_z);
        }
        if (w == 0) {
            continue;
        }
        Dense k = dense_pauli(text + "I");
        add_scaled(noisy, schoolbook(schoolbook(k, rho), dagger(k)), w);
    }

    std::vector<Dense> gens;
    for (size_t q = 0; q + 1 < n; q++) {
        std::string s = "+" + std::string(n + 1, 'I');
        s[1 + q] = s[2 + q] = 'Z';
        gens.push_back(dense_pauli(s));
    }
    auto label = [&](const Dense &err) {
        // Syndrome of an error from its (anti)commutation with each generator.
        size_t s = 0;
        for (size_t g = 0; g < gens.size(); g++) {
            Dense a = schoolbook(err, gens[g]);
            Dense b = schoolbook(gens[g], err);
            if (max_diff(a, b) > 1e-12) {
                s |= size_t{1} << g;
            }
        }
        return s;
    };
    size_t num_syn = size_t{1} << gens.size();
    std::vector<Dense> corr(num_syn, identity_dense(dim));
    std::vector<bool> set(num_syn, false);
    set[0] = true;
    char kind = p.p_x >= p.p_y ? 'X' : 'Y';
    for (size_t q = 0; q < n; q++) {
        std::string s = "+" + std::string(n + 1, 'I');
        s[1 + q] = kind;
        Dense c = dense_pauli(s);
        size_t syn = label(c);
        if (!set[syn]) {
            corr[syn] = c;
            set[syn] = true;
        }
    }
    Dense recovered = dense_zero(dim);
    for (size_t syn = 0; syn < num_syn; syn++) {
        Dense proj = identity_dense(dim);
        for (size_t g = 0; g < gens.size(); g++) {
            double sign = (syn >> g & 1) ? -1 : 1;
            Dense f = identity_dense(dim);
            add_scaled(f, gens[g], sign);
            proj = schoolbook(proj, f);
            for (auto &row : proj) {
                for (auto &x : row) {
                    x *= 0.5;
                }
            }
        }
        Dense k = schoolbook(corr[syn], proj);
        add_scaled(recovered, schoolbook(schoolbook(k, noisy), dagger(k)), 1);
    }

    // |0..0>|0> and |1..1>|1> go to ancilla 0; other inputs fill the free
    // outputs in index order.
    std::vector<size_t> perm(dim, dim);
    std::vector<bool> used(dim, false);
    perm[0] = 0;
    perm[(ones << 1) | 1] = ones << 1;
    used[0] = used[ones << 1] = true;
    size_t next = 0;
    for (size_t in = 0; in < dim; in++) {
        if (perm[in] != dim) {
            continue;
        }
        while (used[next]) {
            next++;
        }
        perm[in] = next;
        used[next] = true;
    }
    Dense decoded = dense_zero(dim);
    for (size_t i = 0; i < dim; i++) {
        for (size_t j = 0; j < dim; j++) {
            decoded[perm[i]][perm[j]] = recovered[i][j];
        }
    }
    Dense a = dense_pauli("+" + std::string(n, 'Y') + "I");
    Dense ad = schoolbook(a, decoded);
    cplx tr = 0;
    for (size_t i = 0; i < dim; i++) {
        tr += ad[i][i];
    }
    return tr.real();
}

// Pipeline with an explicit decoder table.
double expectation_with_table(const QecPipeline &pipe, const Probe &probe, double phi, const NoiseSpec &noise,
                              const DecoderTable &table) {
    const auto &logical = pipe.logical();
    auto psi = logical.state(phi);
    ComplexMatrix m = ComplexMatrix::outer(psi, psi);
    for (size_t q = 0; q < logical.code.n_data; q++) {
        apply_pauli_channel_inplace(m, noise.probs(), uint64_t{1} << (logical.n_anc + q));
    }
    auto data = pipe.trace_out_ancilla(pipe.decode(recover(m, logical, table)));
    return trace_pauli_product(probe.observable, data).real();
}

double slope_of(const std::function<double(double)> &f, double lo = 1e-4, double hi = 1e-2) {
    std::vector<std::pair<double, double>> pts;
    for (double d : logspace(lo, hi, 8)) {
        pts.emplace_back(d, f(d));
    }
    return scaling_exponent(pts).slope;
}

ComplexMatrix projector_onto(const std::vector<StateVector> &vs) {
    ComplexMatrix p(vs.front().size());
    for (const auto &v : vs) {
        p += ComplexMatrix::outer(v, v);
    }
    return p;
}

}  // namespace

TEST(Code, BuiltinDimensionsAndBasis) {
    auto ghz = build_code(builtin_probe("ghz5"));
    EXPECT_EQ(ghz.basis, (std::vector<uint64_t>{0, 31}));
    auto twin = build_code(builtin_probe("twin5"));
    EXPECT_EQ(twin.code_dim(), 8u);
    auto steane = build_code(builtin_probe("steane7"));
    EXPECT_EQ(steane.code_dim(), 8u);
    EXPECT_EQ(steane.basis.front(), 0u);
    EXPECT_EQ(std::popcount(steane.basis[1]), 4);
    // Global Z in the group: every code word has even weight.
    for (uint64_t b : steane.basis) {
        EXPECT_EQ(std::popcount(b) % 2, 0);
    }
    for (const auto *code : {&ghz, &twin, &steane}) {
        for (size_t k = 1; k < code->basis.size(); k++) {
            auto a = code->basis[k - 1];
            auto b = code->basis[k];
            EXPECT_TRUE(std::popcount(a) < std::popcount(b) || (std::popcount(a) == std::popcount(b) && a < b));
        }
        double total = 0;
        for (double d : code->projector_diagonal()) {
            total += d;
        }
        EXPECT_EQ(total, double(code->code_dim()));
        for (uint64_t b : code->basis) {
            EXPECT_EQ(basis_syndrome(b, *code), 0u);
        }
    }
}

TEST(Code, TwinGraphCodeWords) {
    // Z on qubits (1,4) and (2,3) agree pairwise; qubit 0 is free.
    auto twin = build_code(builtin_probe("twin5"));
    for (uint64_t b : twin.basis) {
        auto bit = [&](int q) { return (b >> (4 - q)) & 1; };
        EXPECT_EQ(bit(1), bit(4));
        EXPECT_EQ(bit(2), bit(3));
    }
}

TEST(Code, ProbeStateLivesInTheCode) {
    for (const auto &name : builtin_probe_names()) {
        auto probe = builtin_probe(name);
        auto code = build_code(probe);
        auto diag = code.projector_diagonal();
        double inside = 0;
        for (size_t i = 0; i < probe.psi0.size(); i++) {
            inside += diag[i] * std::norm(probe.psi0[i]);
        }
        EXPECT_NEAR(inside, 1, 1e-12) << name;
    }
}

TEST(Syndrome, XAndYMatchAndZIsSilent) {
    for (const auto &name : builtin_probe_names()) {
        auto code = build_code(builtin_probe(name));
        size_t n = code.n_data;
        for (size_t q = 0; q < n; q++) {
            auto sx = syndrome(PauliString::single(n, q, 'X'), code);
            EXPECT_EQ(sx, syndrome(PauliString::single(n, q, 'Y'), code));
            EXPECT_EQ(syndrome(PauliString::single(n, q, 'Z'), code), 0u);
            // Flipping qubit q of a code word shows the same syndrome.
            EXPECT_EQ(basis_syndrome(code.basis.front() ^ (uint64_t{1} << (n - 1 - q)), code), sx);
        }
    }
    auto ghz = build_code(builtin_probe("ghz5"));
    std::set<uint64_t> seen;
    for (size_t q = 0; q < 5; q++) {
        seen.insert(syndrome(PauliString::single(5, q, 'X'), ghz));
    }
    EXPECT_EQ(seen.size(), 5u);
    EXPECT_EQ(seen.count(0), 0u);
}

TEST(Decoder, ChoosesLikelierFlip) {
    auto code = build_code(builtin_probe("ghz5"));
    auto dep = build_decoder(code, NoiseSpec::depolarizing(0.1));
    EXPECT_EQ(dep.corrections.size(), 6u);
    for (size_t q = 0; q < 5; q++) {
        auto x = PauliString::single(5, q, 'X');
        EXPECT_EQ(dep.correction(syndrome(x, code)).str(), x.str());
    }
    EXPECT_EQ(dep.unreachable_count, 16u - 6u);

    auto ylike = build_decoder(code, NoiseSpec::custom_linear(0.1, 0.2, 0.1, 0.5));
    for (size_t q = 0; q < 5; q++) {
        auto x = PauliString::single(5, q, 'X');
        EXPECT_EQ(ylike.correction(syndrome(x, code)).str(), PauliString::single(5, q, 'Y').str());
    }

    auto deph = build_decoder(code, NoiseSpec::dephasing(0.1));
    EXPECT_EQ(deph.corrections.size(), 1u);
    EXPECT_EQ(deph.correction(3).str(), "+IIIII");
}

TEST(Decoder, CollisionsKeepLowestQubit) {
    auto code = build_code(builtin_probe("twin5"));
    auto dec = build_decoder(code, NoiseSpec::depolarizing(0.1));
    auto s14 = syndrome(PauliString::single(5, 1, 'X'), code);
    EXPECT_EQ(s14, syndrome(PauliString::single(5, 4, 'X'), code));
    EXPECT_EQ(dec.correction(s14).str(), "+IXIII");
    // X on qubit 0 is invisible to this code.
    EXPECT_EQ(syndrome(PauliString::single(5, 0, 'X'), code), 0u);
}

TEST(Recover, FixesSingleFlipsAndKeepsPhaseErrors) {
    auto probe = builtin_probe("ghz5");
    QecPipeline pipe(probe);
    const auto &logical = pipe.logical();
    auto dec = build_decoder(logical.code, NoiseSpec::depolarizing(0.1));
    auto psi = logical.state(0.13);
    auto base = ComplexMatrix::outer(psi, psi);
    EXPECT_LT(max_abs_diff(recover(base, logical, dec), base), 1e-15);

    size_t total = logical.total_qubits();
    for (size_t q = 0; q < 5; q++) {
        auto x = PauliString::single(5, q, 'X').padded(total);
        auto flipped = apply_pauli(x, base, PauliSide::kConjugate);
        EXPECT_LT(max_abs_diff(recover(flipped, logical, dec), base), 1e-15);
        auto z = PauliString::single(5, q, 'Z').padded(total);
        auto phased = apply_pauli(z, base, PauliSide::kConjugate);
        EXPECT_LT(max_abs_diff(recover(phased, logical, dec), phased), 1e-15);
    }
    EXPECT_THROW(recover(ComplexMatrix(8), logical, dec), std::invalid_argument);
}

TEST(Recover, PreservesTraceAndFixesCodeStates) {
    std::mt19937_64 rng(3);
    auto probe = builtin_probe("ghz5");
    QecPipeline pipe(probe);
    const auto &logical = pipe.logical();
    auto dec = build_decoder(logical.code, NoiseSpec::depolarizing(0.1));
    size_t dim = size_t{1} << logical.total_qubits();
    for (int t = 0; t < 50; t++) {
        auto rho = random_density(dim, rng);
        EXPECT_NEAR(trace(recover(rho, logical, dec)).real(), 1, 1e-12);
    }
    // Random mixtures supported on code (x) ancilla are fixed points.
    std::vector<size_t> support;
    for (uint64_t b : logical.code.basis) {
        for (size_t a = 0; a < (size_t{1} << logical.n_anc); a++) {
            support.push_back((b << logical.n_anc) | a);
        }
    }
    for (int t = 0; t < 10; t++) {
        auto small = random_density(support.size(), rng);
        ComplexMatrix rho(dim);
        for (size_t i = 0; i < support.size(); i++) {
            for (size_t j = 0; j < support.size(); j++) {
                rho(support[i], support[j]) = small(i, j);
            }
        }
        EXPECT_LT(max_abs_diff(recover(rho, logical, dec), rho), 1e-15);
    }
}

TEST(Pipeline, MatchesDenseOracleOnGhz) {
    auto ghz3 = ghz_probe(3);
    QecPipeline pipe3(ghz3);
    for (auto spec : {NoiseSpec::depolarizing(0.1), NoiseSpec::dephasing(0.2),
                      NoiseSpec::custom_linear(0.1, 0.3, 0.2, 0.3), NoiseSpec::custom_linear(0.5, 0, 0, 0.2)}) {
        for (double phi : {0.0, 0.11, -0.27}) {
            EXPECT_NEAR(pipe3.expectation(phi, spec), ghz_pipeline_oracle(3, phi, spec), 1e-13);
        }
    }
    auto ghz5 = builtin_probe("ghz5");
    QecPipeline pipe5(ghz5);
    auto spec = NoiseSpec::depolarizing(0.15);
    EXPECT_NEAR(pipe5.expectation(0.07, spec), ghz_pipeline_oracle(5, 0.07, spec), 1e-12);
}

TEST(Pipeline, NoiselessDecodeReturnsTheSignalState) {
    for (const auto &name : builtin_probe_names()) {
        auto probe = builtin_probe(name);
        QecPipeline pipe(probe);
        double phi = 0.09;
        auto rho = pipe.decoded_data_state(phi, NoiseSpec::depolarizing(0)).matrix();
        auto u = signal_phases(probe.num_qubits(), phi);
        StateVector psi = probe.psi0;
        for (size_t j = 0; j < psi.size(); j++) {
            psi[j] *= u[j];
        }
        EXPECT_LT(max_abs_diff(rho, ComplexMatrix::outer(psi, psi)), 1e-13) << name;
        ResponseCurve curve(probe);
        EXPECT_NEAR(pipe.expectation(phi, NoiseSpec::depolarizing(0)), curve.mu(phi), 1e-13) << name;
    }
}

TEST(Pipeline, DecodingPermutationIsABijection) {
    for (const auto &name : builtin_probe_names()) {
        auto probe = builtin_probe(name);
        QecPipeline pipe(probe);
        auto perm = pipe.decoding_permutation();
        std::vector<uint64_t> sorted = perm;
        std::sort(sorted.begin(), sorted.end());
        for (size_t i = 0; i < sorted.size(); i++) {
            EXPECT_EQ(sorted[i], i);
        }
        const auto &logical = pipe.logical();
        for (size_t i = 0; i < logical.code.basis.size(); i++) {
            uint64_t b = logical.code.basis[i] << logical.n_anc;
            EXPECT_EQ(perm[b | i], b);
        }
    }
}

TEST(Pipeline, DecodedStateIsNormalized) {
    auto probe = builtin_probe("twin5");
    QecPipeline pipe(probe);
    auto rho = pipe.decoded_data_state(0.05, NoiseSpec::depolarizing(0.1)).matrix();
    EXPECT_NEAR(trace(rho).real(), 1, 1e-12);
    EXPECT_LT(hermiticity_error(rho), 1e-14);
    EXPECT_GT(hermitian_eig(rho).eigenvalues.back(), -1e-12);
}

TEST(Pipeline, PhaseNoiseGivesLinearBias) {
    auto probe = builtin_probe("ghz5");
    QecPipeline pipe(probe);
    ResponseCurve curve(probe);
    double phi = 0.05;
    double s = slope_of(
        [&](double d) { return std::abs(pipe.expectation(phi, NoiseSpec::depolarizing(d)) - curve.mu(phi)); });
    EXPECT_NEAR(s, 1, 0.05);
}

TEST(Pipeline, FlipOnlyNoiseIsCorrectedToFirstOrder) {
    for (const auto &name : {"ghz5", "steane7"}) {
        auto probe = builtin_probe(name);
        QecPipeline pipe(probe);
        ResponseCurve curve(probe);
        double phi = 0.05;
        double s = slope_of([&](double d) {
            return std::abs(pipe.expectation(phi, NoiseSpec::custom_linear(1, 0, 0, d)) - curve.mu(phi));
        });
        EXPECT_GE(s, 1.9) << name;
    }
}

TEST(FirstOrderState, AgreesWithPipelineToSecondOrder) {
    for (const auto &name : {"ghz5", "steane7"}) {
        auto probe = builtin_probe(name);
        QecPipeline pipe(probe);
        double phi = 0.05;
        for (auto kind : {NoiseKind::kDepolarizing, NoiseKind::kDephasing}) {
            double s = slope_of([&](double d) {
                auto spec = NoiseSpec::preset(kind, d);
                return max_abs_diff(pipe.recovered_state(phi, spec),
                                    first_order_qec_state(pipe.logical(), phi, spec).matrix());
            });
            EXPECT_GE(s, 1.9) << name << " " << to_string(kind);
        }
        auto rho = first_order_qec_state(pipe.logical(), phi, NoiseSpec::depolarizing(0.1)).matrix();
        EXPECT_NEAR(trace(rho).real(), 1, 1e-14);
    }
    auto probe = builtin_probe("ghz5");
    QecPipeline pipe(probe);
    EXPECT_THROW(first_order_qec_state(pipe.logical(), 0.05, NoiseSpec::dephasing(1)), std::invalid_argument);
}

TEST(Decoder, TieBreakDoesNotChangeFirstOrderBias) {
    auto probe = builtin_probe("twin5");
    QecPipeline pipe(probe);
    ResponseCurve curve(probe);
    const auto &code = pipe.logical().code;
    double phi = 0.05;
    auto swapped_table = [&](const NoiseSpec &spec) {
        // Same syndromes, highest qubit wins instead of lowest.
        auto table = build_decoder(code, spec);
        for (size_t q = 0; q < 5; q++) {
            uint64_t syn = syndrome(PauliString::single(5, q, 'X'), code);
            if (syn != 0) {
                table.corrections[syn] = PauliString::single(5, q, 'X');
            }
        }
        return table;
    };
    for (double d : {1e-4, 1e-3}) {
        auto spec = NoiseSpec::depolarizing(d);
        double mu_default = expectation_with_table(pipe, probe, phi, spec, build_decoder(code, spec));
        EXPECT_NEAR(mu_default, pipe.expectation(phi, spec), 1e-15);
        double mu_swapped = expectation_with_table(pipe, probe, phi, spec, swapped_table(spec));
        double bias = std::abs(curve.invert(mu_default) - phi);
        double gap = std::abs(curve.invert(mu_swapped) - curve.invert(mu_default));
        EXPECT_LT(gap, 50 * d * bias) << "delta " << d;
    }
}

TEST(Tradeoff, BuiltinCodes) {
    auto ghz = check_c2_c3_tradeoff(build_code(builtin_probe("ghz5")));
    EXPECT_EQ(ghz.correctable_count, 0u);
    EXPECT_DOUBLE_EQ(ghz.h_spread, 10);
    EXPECT_DOUBLE_EQ(ghz.max_h_variance, 25);
    for (const auto &name : builtin_probe_names()) {
        auto r = check_c2_c3_tradeoff(build_code(builtin_probe(name)));
        EXPECT_LT(r.correctable_count, r.z_correctable.size()) << name;
        EXPECT_GT(r.h_spread, 0) << name;
        EXPECT_GE(r.max_h_variance, variance_of_hamiltonian(builtin_probe(name)) - 1e-9) << name;
    }
}

TEST(Tradeoff, ProjectorForm) {
    auto full = check_c2_c3_tradeoff(ComplexMatrix::identity(4));
    EXPECT_EQ(full.correctable_count, 0u);
    EXPECT_DOUBLE_EQ(full.h_spread, 4);

    // span{|01>, |10>}: flat H, yet P Z_j P is not proportional to P.
    StateVector e01(4), e10(4);
    e01[1] = 1;
    e10[2] = 1;
    auto flat = check_c2_c3_tradeoff(projector_onto({e01, e10}));
    EXPECT_NEAR(flat.h_spread, 0, 1e-12);
    EXPECT_EQ(flat.correctable_count, 0u);

    // A four-qubit code correcting every Z carries no signal.
    double r = 1 / std::sqrt(2.0);
    StateVector a(16), b(16);
    a[0b0011] = a[0b1100] = r;
    b[0b0101] = b[0b1010] = r;
    auto erasing = check_c2_c3_tradeoff(projector_onto({a, b}));
    EXPECT_EQ(erasing.correctable_count, 4u);
    EXPECT_NEAR(erasing.h_spread, 0, 1e-12);
    EXPECT_NEAR(erasing.max_h_variance, 0, 1e-12);

    ComplexMatrix not_proj = ComplexMatrix::identity(4);
    not_proj(0, 0) = 0.5;
    EXPECT_THROW(check_c2_c3_tradeoff(not_proj), std::invalid_argument);
    EXPECT_THROW(check_c2_c3_tradeoff(ComplexMatrix(4)), std::invalid_argument);
}

TEST(Tradeoff, AgreesBetweenCodeAndProjectorForms) {
    for (const auto &name : builtin_probe_names()) {
        auto code = build_code(builtin_probe(name));
        auto diag = code.projector_diagonal();
        std::vector<cplx> d(diag.begin(), diag.end());
        auto a = check_c2_c3_tradeoff(code);
        auto b = check_c2_c3_tradeoff(ComplexMatrix::diagonal(d));
        EXPECT_EQ(a.z_correctable, b.z_correctable) << name;
        EXPECT_NEAR(a.h_spread, b.h_spread, 1e-9) << name;
    }
}
