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
#include <random>

#include "oracles.hpp"
#include "qae/dynamics.hpp"
#include "qae/error.hpp"

namespace qae {
namespace {

using testing::frob;

ControlField random_field(const ControlSystem& sys, Rng& rng) {
  ControlField u(sys.num_controls(), sys.segments());
  for (std::size_t j = 0; j < sys.num_controls(); ++j) {
    std::uniform_real_distribution<double> d(sys.bounds()[j].lower, sys.bounds()[j].upper);
    for (int s = 0; s < sys.segments(); ++s) u.at(j, s) = d(rng);
  }
  return u;
}

ControlSystem with_segments(const ControlSystem& sys, int segments, double horizon) {
  return ControlSystem(sys.drift(), sys.controls(), sys.bounds(), horizon, segments);
}

TEST(TwoQubitModel, Shape) {
  const ControlSystem sys = two_qubit_model();
  EXPECT_EQ(sys.dim(), 4);
  EXPECT_EQ(sys.segments(), 20);
  EXPECT_EQ(sys.num_controls(), 4u);
  EXPECT_DOUBLE_EQ(sys.horizon(), 1.1);
  EXPECT_EQ(sys.num_parameters(), 80u);
  EXPECT_TRUE(is_hermitian(sys.drift()));
  for (const ComplexMatrix& h : sys.controls()) EXPECT_TRUE(is_hermitian(h));
  for (const ControlBounds& b : sys.bounds()) {
    EXPECT_EQ(b.lower, -4.0);
    EXPECT_EQ(b.upper, 4.0);
  }
}

TEST(ThreeQubitModel, Shape) {
  const ControlSystem sys = three_qubit_model();
  EXPECT_EQ(sys.dim(), 8);
  EXPECT_EQ(sys.num_controls(), 6u);
  EXPECT_DOUBLE_EQ(sys.horizon(), 20.0);
  EXPECT_EQ(sys.segments(), 100);
  EXPECT_EQ(sys.num_parameters(), 600u);
  EXPECT_NEAR(std::abs(sys.drift().trace()), 0.0, 1e-15);
  for (const ControlBounds& b : sys.bounds()) {
    EXPECT_EQ(b.lower, 0.0);
    EXPECT_EQ(b.upper, 1.0);
  }
  // Site 0 is the leading tensor factor.
  EXPECT_LT(frob(embed(pauli_z(), 0, 3) - kron(pauli_z(), identity(4))), 1e-15);
  EXPECT_LT(frob(sys.controls()[1] - embed(pauli_z(), 0, 3)), 1e-15);
}

TEST(Propagate, ZeroControlsGiveDriftExponential) {
  const ControlSystem sys = two_qubit_model();
  const ControlField u(sys.num_controls(), sys.segments());
  const double t = 1.1;
  ComplexMatrix expect = ComplexMatrix::Zero(4, 4);
  const Complex m(std::cos(t), -std::sin(t)), p(std::cos(t), std::sin(t));
  expect(0, 0) = m;
  expect(1, 1) = p;
  expect(2, 2) = p;
  expect(3, 3) = m;
  EXPECT_LT(frob(propagate(sys, u) - expect), 1e-12);
}

TEST(Propagate, ConstantFieldIndependentOfSegmentation) {
  const ControlSystem base = two_qubit_model();
  const std::vector<double> amps = {0.3, -1.2, 2.5, 0.7};
  ComplexMatrix reference;
  for (int segments : {1, 2, 7, 20}) {
    const ControlSystem sys = with_segments(base, segments, base.horizon());
    const ComplexMatrix phi = propagate(sys, ControlField::constant(sys, amps));
    if (segments == 1) {
      reference = phi;
      EXPECT_LT(frob(phi - testing::taylor_expm(sys.hamiltonian(amps), sys.horizon())),
                1e-10);
    } else {
      EXPECT_LT(frob(phi - reference), 1e-10);
    }
  }
}

TEST(Propagate, LaterSegmentsMultiplyOnTheLeft) {
  const ControlSystem sys = with_segments(two_qubit_model(), 2, 1.0);
  ControlField u(sys.num_controls(), 2);
  u.at(0, 0) = 3.0;  // sigma_x on qubit 1 first
  u.at(2, 1) = 3.0;  // then sigma_y on qubit 1
  const ComplexMatrix e0 = testing::taylor_expm(sys.hamiltonian(u.segment(0)), 0.5);
  const ComplexMatrix e1 = testing::taylor_expm(sys.hamiltonian(u.segment(1)), 0.5);
  const ComplexMatrix phi = propagate(sys, u);
  EXPECT_LT(frob(phi - e1 * e0), 1e-10);
  EXPECT_GT(frob(phi - e0 * e1), 1e-3);
}

TEST(Propagate, ConcatenationOfHalves) {
  Rng rng(19);
  const ControlSystem full = two_qubit_model();
  const ControlSystem half = with_segments(full, 10, full.horizon() / 2);
  for (int trial = 0; trial < 10; ++trial) {
    const ControlField u = random_field(full, rng);
    ControlField first(half.num_controls(), 10), second(half.num_controls(), 10);
    for (std::size_t j = 0; j < full.num_controls(); ++j) {
      for (int s = 0; s < 10; ++s) {
        first.at(j, s) = u.at(j, s);
        second.at(j, s) = u.at(j, s + 10);
      }
    }
    EXPECT_LT(frob(propagate(full, u) - propagate(half, second) * propagate(half, first)),
              1e-9);
  }
}

TEST(Propagate, RandomFieldsAreUnitary) {
  Rng rng(21);
  for (const ControlSystem& sys : {two_qubit_model(), three_qubit_model()}) {
    for (int trial = 0; trial < 5; ++trial) {
      const ComplexMatrix phi = propagate(sys, random_field(sys, rng));
      EXPECT_LT(frob(phi.adjoint() * phi - identity(sys.dim())), 1e-9);
    }
  }
}

TEST(Propagate, RejectsOutOfBoundsAndWrongShape) {
  const ControlSystem sys = two_qubit_model();
  ControlField u(sys.num_controls(), sys.segments());
  u.at(1, 3) = 4.5;
  try {
    propagate(sys, u);
    FAIL();
  } catch (const QaeError& e) {
    EXPECT_EQ(e.code(), ErrorCode::kBoundsViolation);
  }
  EXPECT_THROW(propagate(sys, ControlField(3, sys.segments())), QaeError);
  const std::vector<double> short_theta(10, 0.0);
  EXPECT_THROW(ControlField::from_flat(sys, short_theta), QaeError);
}

TEST(ControlField, FlatLayoutIsControlMajor) {
  const ControlSystem sys = two_qubit_model();
  std::vector<double> theta(sys.num_parameters());
  for (std::size_t i = 0; i < theta.size(); ++i) theta[i] = static_cast<double>(i) / 100;
  const ControlField u = ControlField::from_flat(sys, theta);
  EXPECT_DOUBLE_EQ(u.at(2, 5), theta[2 * 20 + 5]);
  EXPECT_EQ(u.segment(5).size(), 4u);
  EXPECT_DOUBLE_EQ(u.segment(5)[3], theta[3 * 20 + 5]);
}

TEST(ControlField, ClipRestoresBounds) {
  Rng rng(40);
  const ControlSystem sys = three_qubit_model();
  std::normal_distribution<double> wild(0.5, 3.0);
  ControlField u(sys.num_controls(), sys.segments());
  for (std::size_t j = 0; j < sys.num_controls(); ++j)
    for (int s = 0; s < sys.segments(); ++s) u.at(j, s) = wild(rng);
  EXPECT_FALSE(u.within(sys));
  u.clip(sys);
  EXPECT_TRUE(u.within(sys));
  EXPECT_NO_THROW(propagate(sys, u));
}

TEST(ControlSystem, Validation) {
  const ComplexMatrix h = pauli_z();
  ComplexMatrix bad = pauli_x();
  bad(0, 1) = 3.0;
  auto code = [](auto fn) {
    try {
      fn();
    } catch (const QaeError& e) {
      return e.code();
    }
    return ErrorCode::kIoError;
  };
  EXPECT_EQ(code([&] { ControlSystem(bad, {}, {}, 1.0, 1); }), ErrorCode::kNotHermitian);
  EXPECT_EQ(code([&] { ControlSystem(h, {bad}, {{0, 1}}, 1.0, 1); }),
            ErrorCode::kNotHermitian);
  EXPECT_EQ(code([&] { ControlSystem(h, {pauli_x()}, {}, 1.0, 1); }),
            ErrorCode::kDimensionMismatch);
  EXPECT_EQ(code([&] { ControlSystem(h, {identity(4)}, {{0, 1}}, 1.0, 1); }),
            ErrorCode::kDimensionMismatch);
  EXPECT_EQ(code([&] { ControlSystem(h, {pauli_x()}, {{1, 1}}, 1.0, 1); }),
            ErrorCode::kInvalidArgument);
  EXPECT_EQ(code([&] { ControlSystem(h, {}, {}, 0.0, 1); }), ErrorCode::kInvalidArgument);
  EXPECT_EQ(code([&] { ControlSystem(h, {}, {}, 1.0, 0); }), ErrorCode::kInvalidArgument);
}

TEST(SegmentPropagators, ProductEqualsPropagate) {
  Rng rng(2);
  const ControlSystem sys = two_qubit_model();
  const ControlField u = random_field(sys, rng);
  ComplexMatrix phi = identity(4);
  for (const ComplexMatrix& e : segment_propagators(sys, u)) phi = e * phi;
  EXPECT_LT(frob(phi - propagate(sys, u)), 1e-14);
}

}  // namespace
}  // namespace qae
