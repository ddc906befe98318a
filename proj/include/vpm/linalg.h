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
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "vpm/errors.h"
#include "vpm/pauli_string.h"

namespace vpm {

using cplx = std::complex<double>;
using StateVector = std::vector<cplx>;

/// Dense square complex matrix, row-major. Dimension is a power of two up to 1024.
class ComplexMatrix {
   public:
    static constexpr size_t kMaxDim = 1024;

    ComplexMatrix() = default;
    /// Zero matrix.
    explicit ComplexMatrix(size_t dim);
    /// Takes row-major entries; `entries.size()` must be dim*dim.
    ComplexMatrix(size_t dim, std::vector<cplx> entries);

    static ComplexMatrix identity(size_t dim);
    static ComplexMatrix diagonal(std::span<const cplx> diag);
    /// |v><w|.
    static ComplexMatrix outer(std::span<const cplx> v, std::span<const cplx> w);

    size_t dim() const {
        return dim_;
    }
    cplx &operator()(size_t r, size_t c) {
        return data_[r * dim_ + c];
    }
    const cplx &operator()(size_t r, size_t c) const {
        return data_[r * dim_ + c];
    }
    std::span<cplx> data() {
        return data_;
    }
    std::span<const cplx> data() const {
        return data_;
    }
    std::span<cplx> row(size_t r) {
        return {data_.data() + r * dim_, dim_};
    }
    std::span<const cplx> row(size_t r) const {
        return {data_.data() + r * dim_, dim_};
    }

    ComplexMatrix &operator+=(const ComplexMatrix &other);
    ComplexMatrix &operator-=(const ComplexMatrix &other);
    ComplexMatrix &operator*=(cplx s);

    bool all_finite() const;

   private:
    size_t dim_ = 0;
    std::vector<cplx> data_;
};

ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix &b);
ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix &b);
ComplexMatrix operator*(cplx s, ComplexMatrix a);

ComplexMatrix matmul(const ComplexMatrix &a, const ComplexMatrix &b);
ComplexMatrix adjoint(const ComplexMatrix &a);
cplx trace(const ComplexMatrix &a);
/// Tr[a b] without forming the product.
cplx trace_of_product(const ComplexMatrix &a, const ComplexMatrix &b);
double max_abs_diff(const ComplexMatrix &a, const ComplexMatrix &b);
/// max |a_ij - conj(a_ji)|.
double hermiticity_error(const ComplexMatrix &a);
double frobenius_norm(const ComplexMatrix &a);
StateVector apply(const ComplexMatrix &a, std::span<const cplx> v);

cplx inner(std::span<const cplx> a, std::span<const cplx> b);
double norm(std::span<const cplx> v);
/// Multiplies by a global phase so the first component with modulus above
/// `tol` is real and positive.
void normalize_phase(std::span<cplx> v, double tol = 1e-12);

/// Hermitian PSD unit-trace matrix.
///
/// Construction through `from_matrix` validates Hermiticity (1e-10), trace
/// (1e-10) and, when `check_spectrum` is set, the minimum eigenvalue (-1e-9).
/// Channels that are completely positive by construction use
/// `from_matrix_unchecked`.
class DensityMatrix {
   public:
    static constexpr double kHermitianTol = 1e-10;
    static constexpr double kTraceTol = 1e-10;
    static constexpr double kEigenTol = -1e-9;

    DensityMatrix() = default;

    static DensityMatrix from_matrix(ComplexMatrix m, bool check_spectrum = true);
    static DensityMatrix from_matrix_unchecked(ComplexMatrix m);
    static DensityMatrix pure(std::span<const cplx> psi);
    static DensityMatrix maximally_mixed(size_t dim);

    const ComplexMatrix &matrix() const {
        return m_;
    }
    size_t dim() const {
        return m_.dim();
    }
    const cplx &operator()(size_t r, size_t c) const {
        return m_(r, c);
    }

   private:
    explicit DensityMatrix(ComplexMatrix m) : m_(std::move(m)) {
    }
    ComplexMatrix m_;
};

/// Validates the density-matrix invariants, returning an empty string when
/// they hold and a description of the first violation otherwise.
std::string density_matrix_violation(const ComplexMatrix &m, bool check_spectrum = true);

struct EigenDecomposition {
    /// Descending.
    std::vector<double> eigenvalues;
    /// Column k is the eigenvector for eigenvalues[k].
    ComplexMatrix eigenvectors;

    StateVector eigenvector(size_t k) const;
};

/// Full spectrum of a Hermitian matrix by cyclic complex Jacobi rotations.
///
/// Eigenvalues come back in descending order. Each eigenvector has its first
/// non-negligible component real and positive; eigenvectors of (numerically)
/// equal eigenvalues are ordered by lexicographic comparison of their
/// components. Throws std::invalid_argument on non-Hermitian input and
/// NumericError if the off-diagonal mass does not fall below 1e-12 within
/// 100 sweeps.
EigenDecomposition hermitian_eig(const ComplexMatrix &h);

/// rho^n for n in {1,2,3,4}.
ComplexMatrix matrix_power(const DensityMatrix &rho, int n);

enum class PauliSide { kLeft, kRight, kConjugate };

/// P*m, m*P or P*m*P^dagger as a signed index permutation.
ComplexMatrix apply_pauli(const PauliString &p, const ComplexMatrix &m, PauliSide side);
/// P|v>.
StateVector apply_pauli(const PauliString &p, std::span<const cplx> v);
/// Tr[P m] in O(dim).
cplx trace_pauli_product(const PauliString &p, const ComplexMatrix &m);
/// Dense matrix of a Pauli string.
ComplexMatrix pauli_to_matrix(const PauliString &p);

}  // namespace vpm
