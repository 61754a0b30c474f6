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

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "qae/autoencoder.hpp"
#include "qae/error.hpp"
#include "qae/optical.hpp"

namespace qae {
namespace {

using testing::frob;

PolarizationUnitary haar2(Rng& rng) { return PolarizationUnitary(random_unitary(2, rng)); }

// Distance to the target up to the best global phase:
// min_phi ||V - e^{i phi} T||_F^2 = 4 - 2 |Tr(T^dagger V)| for 2x2 unitaries.
double phase_distance_sq(const ComplexMatrix& v, const ComplexMatrix& t) {
  return std::max(0.0, 4.0 - 2.0 * std::abs((t.adjoint() * v).trace()));
}

// Test-side Nelder-Mead over the three plate angles.
std::array<double, 3> fit_plates(const ComplexMatrix& target, std::array<double, 3> x0) {
  auto cost = [&](const std::array<double, 3>& x) {
    return phase_distance_sq(waveplate_unitary(x[0], x[1], x[2], 0.0).matrix(), target);
  };
  std::array<std::array<double, 3>, 4> simplex;
  std::array<double, 4> f;
  for (int k = 0; k < 4; ++k) {
    simplex[k] = x0;
    if (k > 0) simplex[k][k - 1] += 0.3;
    f[k] = cost(simplex[k]);
  }
  for (int iter = 0; iter < 4000; ++iter) {
    std::array<int, 4> order = {0, 1, 2, 3};
    std::sort(order.begin(), order.end(), [&](int a, int b) { return f[a] < f[b]; });
    const int best = order[0], worst = order[3], second = order[2];
    if (f[worst] - f[best] < 1e-18 && f[best] < 1e-14) break;
    std::array<double, 3> centroid{};
    for (int k : {order[0], order[1], order[2]})
      for (int d = 0; d < 3; ++d) centroid[d] += simplex[k][d] / 3.0;
    auto along = [&](double t) {
      std::array<double, 3> p;
      for (int d = 0; d < 3; ++d) p[d] = centroid[d] + t * (simplex[worst][d] - centroid[d]);
      return p;
    };
    const auto reflected = along(-1.0);
    const double fr = cost(reflected);
    if (fr < f[best]) {
      const auto expanded = along(-2.0);
      const double fe = cost(expanded);
      if (fe < fr) simplex[worst] = expanded, f[worst] = fe;
      else simplex[worst] = reflected, f[worst] = fr;
    } else if (fr < f[second]) {
      simplex[worst] = reflected, f[worst] = fr;
    } else {
      const auto contracted = along(0.5);
      const double fc = cost(contracted);
      if (fc < f[worst]) {
        simplex[worst] = contracted, f[worst] = fc;
      } else {
        for (int k : {order[1], order[2], order[3]}) {
          for (int d = 0; d < 3; ++d)
            simplex[k][d] = simplex[best][d] + 0.5 * (simplex[k][d] - simplex[best][d]);
          f[k] = cost(simplex[k]);
        }
      }
    }
  }
  return simplex[std::min_element(f.begin(), f.end()) - f.begin()];
}

TEST(PolarizationUnitary, Validation) {
  EXPECT_THROW(PolarizationUnitary(identity(4)), QaeError);
  EXPECT_THROW(PolarizationUnitary(1.001 * identity(2)), QaeError);
  EXPECT_NO_THROW(PolarizationUnitary::identity());
}

TEST(Retarder, QuarterAndHalfWavePlates) {
  const Complex i(0.0, 1.0);
  ComplexMatrix qwp = ComplexMatrix::Zero(2, 2);
  qwp(0, 0) = 1.0;
  qwp(1, 1) = i;
  EXPECT_LT(frob(retarder(0.0, std::numbers::pi / 2) - qwp), 1e-15);
  EXPECT_LT(frob(retarder(0.0, std::numbers::pi) - pauli_z()), 1e-15);
  // A half-wave plate at 45 degrees swaps H and V.
  EXPECT_LT(frob(retarder(std::numbers::pi / 4, std::numbers::pi) - pauli_x()), 1e-15);
}

TEST(Waveplate, ZeroAnglesGiveIdentity) {
  // diag(1, i) diag(1, -1) diag(1, i) = diag(1, 1).
  EXPECT_LT(frob(waveplate_unitary(0, 0, 0, 0).matrix() - identity(2)), 1e-15);
  const Complex phase = std::polar(1.0, 0.4);
  EXPECT_LT(frob(waveplate_unitary(0, 0, 0, 0.4).matrix() - phase * identity(2)), 1e-15);
}

TEST(Waveplate, UnitaryForRandomAngles) {
  Rng rng(1);
  std::uniform_real_distribution<double> angle(-10.0, 10.0);
  for (int trial = 0; trial < 1000; ++trial) {
    const ComplexMatrix v =
        waveplate_unitary(angle(rng), angle(rng), angle(rng), angle(rng)).matrix();
    ASSERT_LE(frob(v.adjoint() * v - identity(2)), 1e-12);
  }
}

TEST(Waveplate, ReachesAnyTargetUpToPhase) {
  Rng rng(2);
  std::uniform_real_distribution<double> angle(0.0, std::numbers::pi);
  for (int trial = 0; trial < 100; ++trial) {
    const ComplexMatrix target = random_unitary(2, rng);
    double best = 1e9;
    std::array<double, 3> x{};
    for (int start = 0; start < 20 && best > 1e-12; ++start) {
      const auto cand = fit_plates(target, {angle(rng), angle(rng), angle(rng)});
      const double c = phase_distance_sq(waveplate_unitary(cand[0], cand[1], cand[2], 0).matrix(),
                                         target);
      if (c < best) best = c, x = cand;
    }
    // Recover the phase and check the full parameterization.
    const ComplexMatrix v0 = waveplate_unitary(x[0], x[1], x[2], 0.0).matrix();
    const double phi = -std::arg((target.adjoint() * v0).trace());
    const ComplexMatrix v = waveplate_unitary(x[0], x[1], x[2], phi).matrix();
    const double tphase = std::arg((target.adjoint() * v).trace());
    EXPECT_LE(frob(v - std::polar(1.0, tphase) * target), 1e-6) << "trial " << trial;
    EXPECT_NEAR(tphase, 0.0, 1e-6);
  }
}

TEST(Compose, IdentityPlates) {
  const PolarizationUnitary id = PolarizationUnitary::identity();
  EXPECT_LT(frob(compose_two_qubit_gate(id, id, id, id) - identity(4)), 1e-15);
}

TEST(Compose, PathFlip) {
  const PolarizationUnitary id = PolarizationUnitary::identity();
  const PolarizationUnitary minus(-identity(2));
  const ComplexMatrix u = compose_two_qubit_gate(id, id, id, minus);
  const Complex i(0.0, 1.0);
  EXPECT_LT(frob(u.topLeftCorner(2, 2)), 1e-15);
  EXPECT_LT(frob(u.bottomRightCorner(2, 2)), 1e-15);
  EXPECT_LT(frob(u.topRightCorner(2, 2) + i * identity(2)), 1e-15);
  EXPECT_LT(frob(u.bottomLeftCorner(2, 2) - i * identity(2)), 1e-15);
}

TEST(Compose, UnitaryForRandomPlates) {
  Rng rng(3);
  for (int trial = 0; trial < 1000; ++trial) {
    const ComplexMatrix u = compose_two_qubit_gate(haar2(rng), haar2(rng), haar2(rng), haar2(rng));
    ASSERT_LE(frob(u.adjoint() * u - identity(4)), 1e-9);
  }
}

TEST(Compose, EqualArmsActOnPolarizationOnly) {
  // With V_R = V_L = W the interferometer is transparent for the path:
  // U = blockdiag(V2 W V1, W).
  Rng rng(4);
  const PolarizationUnitary v1 = haar2(rng), v2 = haar2(rng), w = haar2(rng);
  const ComplexMatrix u = compose_two_qubit_gate(v1, v2, w, w);
  EXPECT_LT(frob(u.topLeftCorner(2, 2) - v2.matrix() * w.matrix() * v1.matrix()), 1e-12);
  EXPECT_LT(frob(u.bottomRightCorner(2, 2) - w.matrix()), 1e-12);
  EXPECT_LT(frob(u.topRightCorner(2, 2)), 1e-12);
}

TEST(GateParams, FlatRoundTripAndWrap) {
  std::array<double, OpticalGateParams::kSize> angles;
  for (std::size_t k = 0; k < angles.size(); ++k) angles[k] = -7.0 + 1.3 * k;
  const OpticalGateParams p = OpticalGateParams::from_flat(angles);
  EXPECT_EQ(p.flat(), angles);
  EXPECT_EQ(p.vr.q1, angles[8]);
  const OpticalGateParams w = p.wrapped();
  for (double a : w.flat()) {
    EXPECT_GE(a, 0.0);
    EXPECT_LT(a, 2 * std::numbers::pi);
  }
  EXPECT_LT(frob(optical_gate(w) - optical_gate(p)), 1e-12);
  EXPECT_THROW(OpticalGateParams::from_flat(std::vector<double>(15, 0.0)), QaeError);
}

TEST(CaseInputs, RankTwoAndValidation) {
  for (int c : {1, 2}) {
    const auto states = optical_case_inputs(c);
    ASSERT_EQ(states.size(), 2u);
    EXPECT_EQ(span_rank(states), 2);
  }
  EXPECT_THROW(optical_case_inputs(3), QaeError);
}

TEST(Objective, PathQubitIsTrash) {
  Rng rng(5);
  const PureState phi = random_pure_state(2, rng);
  const PureState r = PureState::basis(2, 0), l = PureState::basis(2, 1);
  const std::vector<double> zeros(OpticalGateParams::kSize, 0.0);
  const AutoencoderTask on_r(StateEnsemble::equal_weight({tensor(r, phi)}),
                             Bipartition::qubits(1, 1));
  EXPECT_NEAR(OpticalObjective(on_r, false, 1, 1).exact(zeros), 1.0, 1e-14);
  const AutoencoderTask on_l(StateEnsemble::equal_weight({tensor(l, phi)}),
                             Bipartition::qubits(1, 1));
  EXPECT_NEAR(OpticalObjective(on_l, false, 1, 1).exact(zeros), 0.0, 1e-14);
}

TEST(Objective, ShotNoiseIsUnbiased) {
  const auto inputs = optical_case_inputs(1);
  const AutoencoderTask task(StateEnsemble::equal_weight(inputs), Bipartition::qubits(1, 1));
  const OpticalObjective noisy(task, true, 3000.0, 7);
  std::vector<double> theta(OpticalGateParams::kSize, 0.3);
  const double exact = noisy.exact(theta);
  double total = 0.0;
  const int draws = 2000;
  for (int k = 0; k < draws; ++k) total += noisy.evaluate(theta);
  EXPECT_NEAR(total / draws, exact, 4.0 * std::sqrt(exact / 3000.0 / draws));
  EXPECT_THROW(OpticalObjective(task, true, 0.0, 1), QaeError);
}

class OpticalCase : public ::testing::TestWithParam<int> {};

TEST_P(OpticalCase, ReachesNearOne) {
  OpticalExperimentConfig cfg;
  const OpticalResult res = simulate_optical_experiment(optical_case_inputs(GetParam()), cfg);
  EXPECT_GE(res.exact_j2, 0.99);
  EXPECT_LE(res.trace.iterations(), 500);
  EXPECT_TRUE(is_unitary(res.gate, 1e-9));
}

INSTANTIATE_TEST_SUITE_P(Optical, OpticalCase, ::testing::Values(1, 2));

TEST(Simulate, RandomRankTwoPairs) {
  Rng rng(8);
  for (int trial = 0; trial < 20; ++trial) {
    OpticalExperimentConfig cfg;
    cfg.optimizer.seed = 100 + trial;
    // Expressiveness, not speed: train to convergence.
    cfg.optimizer.max_iterations = 3000;
    cfg.optimizer.convergence_gap = 0.0;
    const OpticalResult res = simulate_optical_experiment(
        {random_pure_state(4, rng), random_pure_state(4, rng)}, cfg);
    EXPECT_GE(res.exact_j2, 0.999) << "pair " << trial;
  }
}

TEST(Simulate, RejectsRankThree) {
  Rng rng(9);
  std::vector<PureState> three;
  for (int i = 0; i < 3; ++i) three.push_back(random_pure_state(4, rng));
  EXPECT_THROW(simulate_optical_experiment(three, OpticalExperimentConfig{}), QaeError);
}

}  // namespace
}  // namespace qae
