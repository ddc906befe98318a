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

#include "vpm/linalg.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <sstream>

namespace vpm {

namespace {

void check_dim(size_t dim) {
    if (dim == 0 || dim > ComplexMatrix::kMaxDim || !std::has_single_bit(dim)) {
        throw std::invalid_argument("ComplexMatrix: dimension must be a power of two in [1, 1024], got " +
                                    std::to_string(dim));
    }
}

void check_same_dim(const ComplexMatrix &a, const ComplexMatrix &b, const char *what) {
    if (a.dim() != b.dim()) {
        throw std::invalid_argument(std::string(what) + ": dimension mismatch " + std::to_string(a.dim()) + " vs " +
                                    std::to_string(b.dim()));
    }
}

}  // namespace

ComplexMatrix::ComplexMatrix(size_t dim) : dim_(dim), data_(dim * dim) {
    check_dim(dim);
}

ComplexMatrix::ComplexMatrix(size_t dim, std::vector<cplx> entries) : dim_(dim), data_(std::move(entries)) {
    check_dim(dim);
    if (data_.size() != dim * dim) {
        throw std::invalid_argument("ComplexMatrix: expected dim*dim entries");
    }
    if (!all_finite()) {
        throw std::invalid_argument("ComplexMatrix: non-finite entry");
    }
}

ComplexMatrix ComplexMatrix::identity(size_t dim) {
    ComplexMatrix m(dim);
    for (size_t k = 0; k < dim; k++) {
        m(k, k) = 1;
    }
    return m;
}

ComplexMatrix ComplexMatrix::diagonal(std::span<const cplx> diag) {
    ComplexMatrix m(diag.size());
    for (size_t k = 0; k < diag.size(); k++) {
        m(k, k) = diag[k];
    }
    return m;
}

ComplexMatrix ComplexMatrix::outer(std::span<const cplx> v, std::span<const cplx> w) {
    if (v.size() != w.size()) {
        throw std::invalid_argument("outer: size mismatch");
    }
    ComplexMatrix m(v.size());
    for (size_t r = 0; r < v.size(); r++) {
        for (size_t c = 0; c < w.size(); c++) {
            m(r, c) = v[r] * std::conj(w[c]);
        }
    }
    return m;
}

ComplexMatrix &ComplexMatrix::operator+=(const ComplexMatrix &other) {
    check_same_dim(*this, other, "operator+=");
    for (size_t k = 0; k < data_.size(); k++) {
        data_[k] += other.data_[k];
    }
    return *this;
}

ComplexMatrix &ComplexMatrix::operator-=(const ComplexMatrix &other) {
    check_same_dim(*this, other, "operator-=");
    for (size_t k = 0; k < data_.size(); k++) {
        data_[k] -= other.data_[k];
    }
    return *this;
}

ComplexMatrix &ComplexMatrix::operator*=(cplx s) {
    for (auto &e : data_) {
        e *= s;
    }
    return *this;
}

bool ComplexMatrix::all_finite() const {
    return std::all_of(data_.begin(), data_.end(),
                       [](const cplx &e) { return std::isfinite(e.real()) && std::isfinite(e.imag()); });
}

ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix &b) {
    a += b;
    return a;
}

ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix &b) {
    a -= b;
    return a;
}

ComplexMatrix operator*(cplx s, ComplexMatrix a) {
    a *= s;
    return a;
}

ComplexMatrix matmul(const ComplexMatrix &a, const ComplexMatrix &b) {
    check_same_dim(a, b, "matmul");
    size_t n = a.dim();
    ComplexMatrix out(n);
    // i-k-j order keeps the inner loop on contiguous rows.
    for (size_t i = 0; i < n; i++) {
        auto out_row = out.row(i);
        for (size_t k = 0; k < n; k++) {
            cplx aik = a(i, k);
            if (aik == cplx{}) {
                continue;
            }
            auto b_row = b.row(k);
            for (size_t j = 0; j < n; j++) {
                out_row[j] += aik * b_row[j];
            }
        }
    }
    return out;
}

ComplexMatrix adjoint(const ComplexMatrix &a) {
    size_t n = a.dim();
    ComplexMatrix out(n);
    for (size_t r = 0; r < n; r++) {
        for (size_t c = 0; c < n; c++) {
            out(c, r) = std::conj(a(r, c));
        }
    }
    return out;
}

cplx trace(const ComplexMatrix &a) {
    cplx t = 0;
    for (size_t k = 0; k < a.dim(); k++) {
        t += a(k, k);
    }
    return t;
}

cplx trace_of_product(const ComplexMatrix &a, const ComplexMatrix &b) {
    check_same_dim(a, b, "trace_of_product");
    cplx t = 0;
    size_t n = a.dim();
    for (size_t i = 0; i < n; i++) {
        for (size_t k = 0; k < n; k++) {
            t += a(i, k) * b(k, i);
        }
    }
    return t;
}

double max_abs_diff(const ComplexMatrix &a, const ComplexMatrix &b) {
    check_same_dim(a, b, "max_abs_diff");
    double m = 0;
    auto da = a.data();
    auto db = b.data();
    for (size_t k = 0; k < da.size(); k++) {
        m = std::max(m, std::abs(da[k] - db[k]));
    }
    return m;
}

double hermiticity_error(const ComplexMatrix &a) {
    double m = 0;
    for (size_t r = 0; r < a.dim(); r++) {
        for (size_t c = r; c < a.dim(); c++) {
            m = std::max(m, std::abs(a(r, c) - std::conj(a(c, r))));
        }
    }
    return m;
}

double frobenius_norm(const ComplexMatrix &a) {
    double s = 0;
    for (const auto &e : a.data()) {
        s += std::norm(e);
    }
    return std::sqrt(s);
}

StateVector apply(const ComplexMatrix &a, std::span<const cplx> v) {
    if (v.size() != a.dim()) {
        throw std::invalid_argument("apply: dimension mismatch");
    }
    StateVector out(v.size());
    for (size_t r = 0; r < a.dim(); r++) {
        auto row = a.row(r);
        cplx s = 0;
        for (size_t c = 0; c < v.size(); c++) {
            s += row[c] * v[c];
        }
        out[r] = s;
    }
    return out;
}

cplx inner(std::span<const cplx> a, std::span<const cplx> b) {
    if (a.size() != b.size()) {
        throw std::invalid_argument("inner: size mismatch");
    }
    cplx s = 0;
    for (size_t k = 0; k < a.size(); k++) {
        s += std::conj(a[k]) * b[k];
    }
    return s;
}

double norm(std::span<const cplx> v) {
    double s = 0;
    for (const auto &e : v) {
        s += std::norm(e);
    }
    return std::sqrt(s);
}

void normalize_phase(std::span<cplx> v, double tol) {
    for (const auto &e : v) {
        double mag = std::abs(e);
        if (mag > tol) {
            cplx f = mag / e;
            for (auto &x : v) {
                x *= f;
            }
            return;
        }
    }
}

std::string density_matrix_violation(const ComplexMatrix &m, bool check_spectrum) {
    std::ostringstream out;
    if (!m.all_finite()) {
        return "non-finite entry";
    }
    double herm = hermiticity_error(m);
    if (herm > DensityMatrix::kHermitianTol) {
        out << "not Hermitian (max deviation " << herm << ")";
        return out.str();
    }
    cplx t = trace(m);
    if (std::abs(t - 1.0) > DensityMatrix::kTraceTol) {
        out << "trace " << t << " differs from 1";
        return out.str();
    }
    if (check_spectrum) {
        auto eig = hermitian_eig(m);
        double lo = eig.eigenvalues.back();
        if (lo < DensityMatrix::kEigenTol) {
            out << "negative eigenvalue " << lo;
            return out.str();
        }
    }
    return {};
}

DensityMatrix DensityMatrix::from_matrix(ComplexMatrix m, bool check_spectrum) {
    auto problem = density_matrix_violation(m, check_spectrum);
    if (!problem.empty()) {
        throw std::invalid_argument("DensityMatrix: " + problem);
    }
    return DensityMatrix(std::move(m));
}

DensityMatrix DensityMatrix::from_matrix_unchecked(ComplexMatrix m) {
    return DensityMatrix(std::move(m));
}

DensityMatrix DensityMatrix::pure(std::span<const cplx> psi) {
    double n = norm(psi);
    if (std::abs(n - 1.0) > 1e-10) {
        throw std::invalid_argument("DensityMatrix::pure: state not normalized");
    }
    return DensityMatrix(ComplexMatrix::outer(psi, psi));
}

DensityMatrix DensityMatrix::maximally_mixed(size_t dim) {
    ComplexMatrix m = ComplexMatrix::identity(dim);
    m *= 1.0 / double(dim);
    return DensityMatrix(std::move(m));
}

StateVector EigenDecomposition::eigenvector(size_t k) const {
    size_t n = eigenvectors.dim();
    StateVector v(n);
    for (size_t r = 0; r < n; r++) {
        v[r] = eigenvectors(r, k);
    }
    return v;
}

namespace {

double off_diagonal_norm(const ComplexMatrix &a) {
    double s = 0;
    for (size_t r = 0; r < a.dim(); r++) {
        for (size_t c = 0; c < a.dim(); c++) {
            if (r != c) {
                s += std::norm(a(r, c));
            }
        }
    }
    return std::sqrt(s);
}

// a precedes b when, at the first component differing by more than tol, a's
// component is larger (real part first, then imaginary part).
bool lexicographically_before(std::span<const cplx> a, std::span<const cplx> b, double tol) {
    for (size_t k = 0; k < a.size(); k++) {
        if (std::abs(a[k] - b[k]) <= tol) {
            continue;
        }
        if (std::abs(a[k].real() - b[k].real()) > tol) {
            return a[k].real() > b[k].real();
        }
        return a[k].imag() > b[k].imag();
    }
    return false;
}

}  // namespace

EigenDecomposition hermitian_eig(const ComplexMatrix &h) {
    constexpr double kInputHermitianTol = 1e-8;
    constexpr double kOffTol = 1e-12;
    constexpr int kMaxSweeps = 100;

    double herm = hermiticity_error(h);
    if (herm > kInputHermitianTol) {
        throw std::invalid_argument("hermitian_eig: input not Hermitian (max deviation " + std::to_string(herm) + ")");
    }
    size_t n = h.dim();
    ComplexMatrix a = h;
    // Symmetrize exactly so the rotations see a Hermitian matrix.
    for (size_t r = 0; r < n; r++) {
        a(r, r) = a(r, r).real();
        for (size_t c = r + 1; c < n; c++) {
            cplx avg = 0.5 * (a(r, c) + std::conj(a(c, r)));
            a(r, c) = avg;
            a(c, r) = std::conj(avg);
        }
    }
    ComplexMatrix vt = ComplexMatrix::identity(n);
    double scale = std::max(1.0, frobenius_norm(a));

    struct Rotation {
        size_t p, q;
        double c, s;
        cplx se, ce;
        double app, aqq;
    };
    std::vector<Rotation> rotations;
    std::vector<size_t> players(n);
    std::iota(players.begin(), players.end(), 0);

    int sweep = 0;
    double off = off_diagonal_norm(a);
    while (off >= kOffTol * scale) {
        if (sweep++ >= kMaxSweeps) {
            throw NumericError("hermitian_eig: no convergence after 100 sweeps, off-diagonal norm " +
                               std::to_string(off));
        }
        // Round-robin ordering: each step rotates n/2 disjoint pairs, so the
        // rotations commute and both passes run along contiguous rows.
        for (size_t round = 0; round + 1 < n; round++) {
            rotations.clear();
            for (size_t i = 0; i < n / 2; i++) {
                size_t p = players[i];
                size_t q = players[n - 1 - i];
                if (p > q) {
                    std::swap(p, q);
                }
                cplx apq = a(p, q);
                double mag = std::abs(apq);
                if (mag < 1e-300 || mag < 1e-18 * scale) {
                    a(p, q) = 0;
                    a(q, p) = 0;
                    continue;
                }
                // Phase rotation makes the (p,q) entry real, then a real
                // Jacobi rotation annihilates it.
                cplx e = std::conj(apq) / mag;  // e^{-i theta}
                double app = a(p, p).real();
                double aqq = a(q, q).real();
                double tau = (aqq - app) / (2 * mag);
                double t = (tau >= 0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1 + tau * tau));
                double c = 1 / std::sqrt(1 + t * t);
                rotations.push_back({p, q, c, t * c, t * c * e, c * e, app - t * mag, aqq + t * mag});
            }
            // W e_p = c e_p - s e^{-i theta} e_q, W e_q = s e_p + c e^{-i theta} e_q.
            // Rows: A <- W^dagger A, and vt <- W^T vt so rows of vt stay the
            // eigenvector columns.
            for (const auto &r : rotations) {
                auto row_p = a.row(r.p);
                auto row_q = a.row(r.q);
                cplx se_c = std::conj(r.se);
                cplx ce_c = std::conj(r.ce);
                for (size_t k = 0; k < n; k++) {
                    cplx apk = row_p[k];
                    cplx aqk = row_q[k];
                    row_p[k] = r.c * apk - se_c * aqk;
                    row_q[k] = r.s * apk + ce_c * aqk;
                }
                auto vt_p = vt.row(r.p);
                auto vt_q = vt.row(r.q);
                for (size_t k = 0; k < n; k++) {
                    cplx vkp = vt_p[k];
                    cplx vkq = vt_q[k];
                    vt_p[k] = r.c * vkp - r.se * vkq;
                    vt_q[k] = r.s * vkp + r.ce * vkq;
                }
            }
            // Columns: A <- A W, one row at a time.
            for (size_t k = 0; k < n; k++) {
                auto row = a.row(k);
                for (const auto &r : rotations) {
                    cplx akp = row[r.p];
                    cplx akq = row[r.q];
                    row[r.p] = r.c * akp - r.se * akq;
                    row[r.q] = r.s * akp + r.ce * akq;
                }
            }
            for (const auto &r : rotations) {
                a(r.p, r.p) = r.app;
                a(r.q, r.q) = r.aqq;
                a(r.p, r.q) = 0;
                a(r.q, r.p) = 0;
            }
            std::rotate(players.begin() + 1, players.end() - 1, players.end());
        }
        off = off_diagonal_norm(a);
    }

    std::vector<StateVector> vecs(n, StateVector(n));
    for (size_t k = 0; k < n; k++) {
        for (size_t r = 0; r < n; r++) {
            vecs[k][r] = vt(k, r);
        }
        normalize_phase(vecs[k]);
    }
    std::vector<size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](size_t x, size_t y) { return a(x, x).real() > a(y, y).real(); });
    double tie_tol = 1e-12 * scale;
    for (size_t start = 0; start < n;) {
        size_t end = start + 1;
        while (end < n && a(order[start], order[start]).real() - a(order[end], order[end]).real() <= tie_tol) {
            end++;
        }
        std::stable_sort(order.begin() + start, order.begin() + end,
                         [&](size_t x, size_t y) { return lexicographically_before(vecs[x], vecs[y], 1e-12); });
        start = end;
    }

    EigenDecomposition out;
    out.eigenvalues.resize(n);
    out.eigenvectors = ComplexMatrix(n);
    for (size_t k = 0; k < n; k++) {
        out.eigenvalues[k] = a(order[k], order[k]).real();
        for (size_t r = 0; r < n; r++) {
            out.eigenvectors(r, k) = vecs[order[k]][r];
        }
    }
    return out;
}

ComplexMatrix matrix_power(const DensityMatrix &rho, int n) {
    if (n < 1 || n > 4) {
        throw std::invalid_argument("matrix_power: n must be in {1,2,3,4}");
    }
    ComplexMatrix out = rho.matrix();
    for (int k = 1; k < n; k++) {
        out = matmul(out, rho.matrix());
    }
    return out;
}

namespace {

void check_pauli_dim(const PauliString &p, size_t dim) {
    if ((size_t{1} << p.num_qubits()) != dim) {
        throw std::invalid_argument("apply_pauli: " + std::to_string(p.num_qubits()) +
                                    "-qubit Pauli on dimension " + std::to_string(dim));
    }
}

}  // namespace

ComplexMatrix apply_pauli(const PauliString &p, const ComplexMatrix &m, PauliSide side) {
    size_t n = m.dim();
    check_pauli_dim(p, n);
    uint64_t x = p.x_mask();
    std::vector<cplx> factor(n);
    for (size_t j = 0; j < n; j++) {
        factor[j] = p.basis_factor(j);
    }
    ComplexMatrix out(n);
    switch (side) {
        case PauliSide::kLeft:
            // (P m)_{i,c} = f(i^x) m_{i^x,c}
            for (size_t i = 0; i < n; i++) {
                size_t src = i ^ x;
                cplx f = factor[src];
                auto in_row = m.row(src);
                auto out_row = out.row(i);
                for (size_t c = 0; c < n; c++) {
                    out_row[c] = f * in_row[c];
                }
            }
            break;
        case PauliSide::kRight:
            // (m P)_{r,j} = m_{r,j^x} f(j)
            for (size_t r = 0; r < n; r++) {
                auto in_row = m.row(r);
                auto out_row = out.row(r);
                for (size_t j = 0; j < n; j++) {
                    out_row[j] = in_row[j ^ x] * factor[j];
                }
            }
            break;
        case PauliSide::kConjugate:
            // (P m P^dag)_{i,j} = f(i^x) m_{i^x,j^x} conj(f(j^x))
            for (size_t i = 0; i < n; i++) {
                size_t si = i ^ x;
                cplx fi = factor[si];
                auto in_row = m.row(si);
                auto out_row = out.row(i);
                for (size_t j = 0; j < n; j++) {
                    size_t sj = j ^ x;
                    out_row[j] = fi * in_row[sj] * std::conj(factor[sj]);
                }
            }
            break;
    }
    return out;
}

StateVector apply_pauli(const PauliString &p, std::span<const cplx> v) {
    check_pauli_dim(p, v.size());
    StateVector out(v.size());
    uint64_t x = p.x_mask();
    for (size_t j = 0; j < v.size(); j++) {
        out[j ^ x] = p.basis_factor(j) * v[j];
    }
    return out;
}

cplx trace_pauli_product(const PauliString &p, const ComplexMatrix &m) {
    check_pauli_dim(p, m.dim());
    // Tr[P m] = sum_j c_j m_{j, j^x}.
    cplx t = 0;
    uint64_t x = p.x_mask();
    for (size_t j = 0; j < m.dim(); j++) {
        t += p.basis_factor(j) * m(j, j ^ x);
    }
    return t;
}

ComplexMatrix pauli_to_matrix(const PauliString &p) {
    size_t n = size_t{1} << p.num_qubits();
    ComplexMatrix m(n);
    for (size_t j = 0; j < n; j++) {
        m(j ^ p.x_mask(), j) = p.basis_factor(j);
    }
    return m;
}

}  // namespace vpm
