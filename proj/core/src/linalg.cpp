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

#include "qae/linalg.hpp"

#include <cmath>
#include <sstream>

#include "qae/error.hpp"

namespace qae {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kNotHermitian: return "NotHermitian";
    case ErrorCode::kNotUnitary: return "NotUnitary";
    case ErrorCode::kNoConvergence: return "NoConvergence";
    case ErrorCode::kDimensionMismatch: return "DimensionMismatch";
    case ErrorCode::kBoundsViolation: return "BoundsViolation";
    case ErrorCode::kZeroVector: return "ZeroVector";
    case ErrorCode::kInvalidState: return "InvalidState";
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kObjectiveFailure: return "ObjectiveFailure";
    case ErrorCode::kConfigError: return "ConfigError";
    case ErrorCode::kIoError: return "IoError";
  }
  return "Unknown";
}

bool is_hermitian(const ComplexMatrix& a, double tol) {
  if (a.rows() != a.cols()) return false;
  return (a - a.adjoint()).norm() <= tol;
}

bool is_unitary(const ComplexMatrix& a, double tol) {
  if (a.rows() != a.cols()) return false;
  return (a.adjoint() * a - ComplexMatrix::Identity(a.rows(), a.cols()))
             .norm() <= tol;
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index p = 0; p < a.rows(); ++p) {
    for (Eigen::Index q = 0; q < a.cols(); ++q) {
      out.block(p * b.rows(), q * b.cols(), b.rows(), b.cols()) = a(p, q) * b;
    }
  }
  return out;
}

EigenDecomposition hermitian_eigen(const ComplexMatrix& a, double tol) {
  if (a.rows() != a.cols()) {
    std::ostringstream msg;
    msg << "expected a square matrix, got " << a.rows() << "x" << a.cols();
    fail(ErrorCode::kDimensionMismatch, msg.str());
  }
  const double asym = (a - a.adjoint()).norm();
  if (asym > tol) {
    std::ostringstream msg;
    msg << "||A - A^dagger||_F = " << asym << " exceeds " << tol;
    fail(ErrorCode::kNotHermitian, msg.str());
  }
  const ComplexMatrix sym = 0.5 * (a + a.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(sym);
  if (solver.info() != Eigen::Success) {
    fail(ErrorCode::kNoConvergence, "Hermitian eigensolver did not converge");
  }
  // Eigen returns ascending order.
  EigenDecomposition out;
  out.eigenvalues = solver.eigenvalues().reverse();
  out.eigenvectors = solver.eigenvectors().rowwise().reverse();
  return out;
}

ComplexMatrix expm_skew_hermitian(const ComplexMatrix& h, double t) {
  const EigenDecomposition eig = hermitian_eigen(h);
  ComplexVector phases(eig.eigenvalues.size());
  for (Eigen::Index k = 0; k < phases.size(); ++k) {
    const double angle = -eig.eigenvalues[k] * t;
    phases[k] = Complex(std::cos(angle), std::sin(angle));
  }
  return eig.eigenvectors * phases.asDiagonal() * eig.eigenvectors.adjoint();
}

ComplexMatrix sqrtm_psd(const ComplexMatrix& a) {
  const EigenDecomposition eig = hermitian_eigen(a);
  RealVector roots(eig.eigenvalues.size());
  for (Eigen::Index k = 0; k < roots.size(); ++k) {
    double lambda = eig.eigenvalues[k];
    if (lambda < 0.0) {
      if (lambda < -1e-10) {
        std::ostringstream msg;
        msg << "matrix is not positive semidefinite (eigenvalue " << lambda
            << ")";
        fail(ErrorCode::kInvalidState, msg.str());
      }
      lambda = 0.0;
    }
    roots[k] = std::sqrt(lambda);
  }
  return eig.eigenvectors * roots.cast<Complex>().asDiagonal() *
         eig.eigenvectors.adjoint();
}

ComplexMatrix pauli_x() {
  ComplexMatrix m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}

ComplexMatrix pauli_y() {
  ComplexMatrix m(2, 2);
  m << 0, Complex(0, -1), Complex(0, 1), 0;
  return m;
}

ComplexMatrix pauli_z() {
  ComplexMatrix m(2, 2);
  m << 1, 0, 0, -1;
  return m;
}

ComplexMatrix identity(Eigen::Index n) {
  return ComplexMatrix::Identity(n, n);
}

}  // namespace qae
