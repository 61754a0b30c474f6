// Copyright 2026 The QAE Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Dense complex linear algebra used by every other module. Matrices are
// Eigen dense types; the functions here add the Hermitian-specific
// contracts (descending spectra, symmetrization, spectral exponential).

#pragma once

#include <Eigen/Dense>
#include <complex>

namespace qae {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

inline constexpr double kHermitianTol = 1e-9;

bool is_hermitian(const ComplexMatrix& a, double tol = kHermitianTol);
bool is_unitary(const ComplexMatrix& a, double tol = 1e-9);

/// Kronecker product; `a` is the leading (most significant) factor.
ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

struct EigenDecomposition {
  RealVector eigenvalues;     // descending
  ComplexMatrix eigenvectors; // column k pairs with eigenvalues[k]
};

/// Spectral decomposition of a Hermitian matrix. Inputs within `tol` of
/// Hermitian are symmetrized as (A + A^dagger)/2 first.
///
/// Throws kNotHermitian when ||A - A^dagger||_F > tol and kNoConvergence if
/// the solver does not converge. Degenerate eigenvalues get an arbitrary
/// orthonormal basis of their eigenspace.
EigenDecomposition hermitian_eigen(const ComplexMatrix& a,
                                   double tol = kHermitianTol);

/// exp(-i h t) for Hermitian h, computed as V diag(exp(-i lambda_k t)) V^dagger.
ComplexMatrix expm_skew_hermitian(const ComplexMatrix& h, double t);

/// Principal square root of a positive semidefinite Hermitian matrix.
/// Eigenvalues in [-1e-10, 0) are clamped to zero; anything more negative
/// is rejected with kInvalidState.
ComplexMatrix sqrtm_psd(const ComplexMatrix& a);

/// Pauli matrices and the 2x2 identity.
ComplexMatrix pauli_x();
ComplexMatrix pauli_y();
ComplexMatrix pauli_z();
ComplexMatrix identity(Eigen::Index n);

}  // namespace qae
