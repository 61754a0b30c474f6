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


#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "qae/error.hpp"
#include "qae/linalg.hpp"

namespace qae {
namespace {

using testing::frob;

ComplexMatrix diag(std::initializer_list<Complex> d) {
  ComplexMatrix m = ComplexMatrix::Zero(static_cast<Eigen::Index>(d.size()),
                                        static_cast<Eigen::Index>(d.size()));
  Eigen::Index i = 0;
  for (Complex v : d) m(i, i) = v, ++i;
  return m;
}

TEST(Kron, IdentityTimesIdentity) {
  EXPECT_EQ(frob(kron(identity(2), identity(2)) - identity(4)), 0.0);
}

TEST(Kron, PauliZPair) {
  EXPECT_LT(frob(kron(pauli_z(), pauli_z()) - diag({1, -1, -1, 1})), 1e-15);
}

TEST(Kron, XXFlipsZeroZero) {
  ComplexVector v = ComplexVector::Zero(4);
  v[0] = 1.0;
  const ComplexVector w = kron(pauli_x(), pauli_x()) * v;
  ComplexVector expect = ComplexVector::Zero(4);
  expect[3] = 1.0;
  EXPECT_LT((w - expect).norm(), 1e-15);
}

TEST(Kron, MatchesIndexFormulaAndIsAssociative) {
  Rng rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    const ComplexMatrix a = testing::gaussian_matrix(2, 3, rng);
    const ComplexMatrix b = testing::gaussian_matrix(3, 2, rng);
    const ComplexMatrix c = testing::gaussian_matrix(2, 2, rng);
    EXPECT_LT(frob(kron(a, b) - testing::kron_by_index(a, b)), 1e-13);
    EXPECT_LT(frob(kron(kron(a, b), c) - kron(a, kron(b, c))), 1e-13);
  }
  // Small Gaussian integers keep every product exact, so both groupings agree bit for bit.
  for (int trial = 0; trial < 20; ++trial) {
    auto integral = [&](Eigen::Index r, Eigen::Index c) {
      ComplexMatrix m = testing::gaussian_matrix(r, c, rng) * 4.0;
      return ComplexMatrix(m.unaryExpr([](Complex z) {
        return Complex(std::round(z.real()), std::round(z.imag()));
      }));
    };
    const ComplexMatrix a = integral(2, 3);
    const ComplexMatrix b = integral(3, 2);
    const ComplexMatrix c = integral(2, 2);
    EXPECT_EQ(frob(kron(kron(a, b), c) - kron(a, kron(b, c))), 0.0);
  }
}

TEST(HermitianEigen, DiagonalSortedDescending) {
  const EigenDecomposition e = hermitian_eigen(diag({0.2, 0.8}));
  ASSERT_EQ(e.eigenvalues.size(), 2);
  EXPECT_NEAR(e.eigenvalues[0], 0.8, 1e-15);
  EXPECT_NEAR(e.eigenvalues[1], 0.2, 1e-15);
}

TEST(HermitianEigen, PauliXSpectrumAndProjectors) {
  const EigenDecomposition e = hermitian_eigen(pauli_x());
  EXPECT_NEAR(e.eigenvalues[0], 1.0, 1e-14);
  EXPECT_NEAR(e.eigenvalues[1], -1.0, 1e-14);
  // Compare projectors, which do not depend on the eigenvector phase.
  const ComplexVector v = e.eigenvectors.col(0);
  ComplexMatrix expect(2, 2);
  expect << 0.5, 0.5, 0.5, 0.5;
  EXPECT_LT(frob(v * v.adjoint() - expect), 1e-14);
}

TEST(HermitianEigen, RankTwoMixture) {
  Rng rng(11);
  for (int trial = 0; trial < 10; ++trial) {
    ComplexVector a = testing::gaussian_matrix(4, 1, rng).col(0);
    ComplexVector b = testing::gaussian_matrix(4, 1, rng).col(0);
    a.normalize();
    b.normalize();
    const ComplexMatrix rho = 0.5 * (a * a.adjoint() + b * b.adjoint());
    const RealVector ev = hermitian_eigen(rho).eigenvalues;
    EXPECT_NEAR(ev[0] + ev[1], 1.0, 1e-12);
    EXPECT_LT(std::abs(ev[2]), 1e-12);
    EXPECT_LT(std::abs(ev[3]), 1e-12);
  }
}

TEST(HermitianEigen, TraceAndReconstructionProperty) {
  Rng rng(5);
  for (int trial = 0; trial < 100; ++trial) {
    const Eigen::Index n = 1 + trial % 8;
    const ComplexMatrix h = testing::random_hermitian(n, rng);
    const EigenDecomposition e = hermitian_eigen(h);
    EXPECT_NEAR(e.eigenvalues.sum(), h.trace().real(), 1e-10);
    for (Eigen::Index i = 1; i < n; ++i) {
      EXPECT_GE(e.eigenvalues[i - 1], e.eigenvalues[i]);
    }
    const ComplexMatrix rebuilt = e.eigenvectors *
                                  e.eigenvalues.cast<Complex>().asDiagonal() *
                                  e.eigenvectors.adjoint();
    EXPECT_LT(frob(rebuilt - h), 1e-10 * (1.0 + frob(h)));
  }
}

TEST(HermitianEigen, RejectsNonHermitian) {
  ComplexMatrix m = pauli_x();
  m(0, 1) = 2.0;
  try {
    hermitian_eigen(m);
    FAIL() << "expected an exception";
  } catch (const QaeError& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNotHermitian);
  }
}

TEST(Expm, ZeroTimeIsIdentity) {
  Rng rng(1);
  EXPECT_LT(frob(expm_skew_hermitian(testing::random_hermitian(4, rng), 0.0) -
                 identity(4)),
            1e-14);
}

TEST(Expm, DiagonalDrift) {
  const double t = 1.1;
  const Complex m(std::cos(t), -std::sin(t));
  const Complex p(std::cos(t), std::sin(t));
  EXPECT_LT(frob(expm_skew_hermitian(kron(pauli_z(), pauli_z()), t) -
                 diag({m, p, p, m})),
            1e-13);
}

TEST(Expm, PauliXQuarterTurn) {
  const ComplexMatrix got = expm_skew_hermitian(pauli_x(), std::numbers::pi / 2);
  EXPECT_LT(frob(got - Complex(0, -1) * pauli_x()), 1e-14);
}

TEST(Expm, MatchesTaylorOracle) {
  Rng rng(17);
  for (int trial = 0; trial < 50; ++trial) {
    const Eigen::Index n = 2 << (trial % 3);
    const ComplexMatrix h = testing::random_hermitian(n, rng);
    const double t = 0.05 * (trial + 1);
    EXPECT_LT(frob(expm_skew_hermitian(h, t) - testing::taylor_expm(h, t)), 1e-10);
  }
}

TEST(Expm, UnitaryAndSemigroup) {
  Rng rng(23);
  std::uniform_real_distribution<double> time(-5.0, 5.0);
  for (int trial = 0; trial < 100; ++trial) {
    const ComplexMatrix h = testing::random_hermitian(8, rng);
    const double t1 = time(rng), t2 = time(rng);
    const ComplexMatrix u1 = expm_skew_hermitian(h, t1);
    EXPECT_LT(frob(u1.adjoint() * u1 - identity(8)), 1e-10);
    EXPECT_LT(frob(u1 * expm_skew_hermitian(h, t2) - expm_skew_hermitian(h, t1 + t2)),
              1e-9);
  }
}

TEST(Predicates, HermitianAndUnitary) {
  EXPECT_TRUE(is_hermitian(pauli_y()));
  EXPECT_TRUE(is_unitary(pauli_y()));
  ComplexMatrix m = pauli_y();
  m(0, 0) = Complex(0.0, 1e-3);
  EXPECT_FALSE(is_hermitian(m));
  EXPECT_FALSE(is_unitary(2.0 * identity(2)));
  EXPECT_FALSE(is_hermitian(ComplexMatrix::Zero(2, 3)));
}

TEST(SqrtmPsd, SquaresBack) {
  Rng rng(29);
  for (int trial = 0; trial < 20; ++trial) {
    const ComplexMatrix rho = testing::random_density(4, rng);
    const ComplexMatrix r = sqrtm_psd(rho);
    EXPECT_LT(frob(r * r - rho), 1e-12);
  }
}

}  // namespace
}  // namespace qae
