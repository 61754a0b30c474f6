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


#include "qae/optical.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "qae/error.hpp"

namespace qae {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double wrap(double angle) {
  const double r = std::fmod(angle, kTwoPi);
  return r < 0.0 ? r + kTwoPi : r;
}

WaveplateAngles wrap(const WaveplateAngles& a) {
  return {wrap(a.q1), wrap(a.h), wrap(a.q2), wrap(a.phase)};
}

}  // namespace

PolarizationUnitary::PolarizationUnitary(ComplexMatrix matrix)
    : matrix_(std::move(matrix)) {
  if (matrix_.rows() != 2 || matrix_.cols() != 2) {
    fail(ErrorCode::kDimensionMismatch, "polarization unitaries are 2x2");
  }
  if (!is_unitary(matrix_, 1e-10)) {
    fail(ErrorCode::kNotUnitary, "polarization operator is not unitary");
  }
}

PolarizationUnitary PolarizationUnitary::identity() {
  return PolarizationUnitary(qae::identity(2));
}

ComplexMatrix retarder(double theta, double gamma) {
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  ComplexMatrix rot(2, 2);
  rot << c, s, -s, c;
  ComplexMatrix plate = ComplexMatrix::Zero(2, 2);
  plate(0, 0) = 1.0;
  plate(1, 1) = std::polar(1.0, gamma);
  return rot.adjoint() * plate * rot;
}

PolarizationUnitary waveplate_unitary(double theta_q1, double theta_h,
                                      double theta_q2, double phase) {
  const double quarter = std::numbers::pi / 2.0;
  const double half = std::numbers::pi;
  ComplexMatrix v = retarder(theta_q2, quarter) * retarder(theta_h, half) *
                    retarder(theta_q1, quarter);
  v *= std::polar(1.0, phase);
  return PolarizationUnitary(std::move(v));
}

OpticalGateParams OpticalGateParams::from_flat(std::span<const double> angles) {
  if (angles.size() != kSize) {
    fail(ErrorCode::kDimensionMismatch, "optical gate needs 16 angles");
  }
  auto plate = [&](std::size_t k) {
    return WaveplateAngles{angles[4 * k], angles[4 * k + 1], angles[4 * k + 2],
                           angles[4 * k + 3]};
  };
  return {plate(0), plate(1), plate(2), plate(3)};
}

std::array<double, OpticalGateParams::kSize> OpticalGateParams::flat() const {
  std::array<double, kSize> out{};
  const WaveplateAngles* plates[] = {&v1, &v2, &vr, &vl};
  for (std::size_t k = 0; k < 4; ++k) {
    out[4 * k] = plates[k]->q1;
    out[4 * k + 1] = plates[k]->h;
    out[4 * k + 2] = plates[k]->q2;
    out[4 * k + 3] = plates[k]->phase;
  }
  return out;
}

OpticalGateParams OpticalGateParams::wrapped() const {
  return {wrap(v1), wrap(v2), wrap(vr), wrap(vl)};
}

ComplexMatrix compose_two_qubit_gate(const PolarizationUnitary& v1,
                                     const PolarizationUnitary& v2,
                                     const PolarizationUnitary& vr,
                                     const PolarizationUnitary& vl) {
  const Complex i(0.0, 1.0);
  const ComplexMatrix sum = 0.5 * (vr.matrix() + vl.matrix());
  const ComplexMatrix diff = 0.5 * (vr.matrix() - vl.matrix());
  ComplexMatrix u(4, 4);
  u.topLeftCorner(2, 2) = v2.matrix() * sum * v1.matrix();
  u.topRightCorner(2, 2) = -i * v2.matrix() * diff;
  u.bottomLeftCorner(2, 2) = i * diff * v1.matrix();
  u.bottomRightCorner(2, 2) = sum;
  return u;
}

ComplexMatrix optical_gate(const OpticalGateParams& p) {
  return compose_two_qubit_gate(p.v1.unitary(), p.v2.unitary(), p.vr.unitary(),
                                p.vl.unitary());
}

PureState optical_basis(int index) { return PureState::basis(4, index); }

std::vector<PureState> optical_case_inputs(int which) {
  const Complex i(0.0, 1.0);
  const double r = 1.0 / std::sqrt(2.0);
  auto pair = [&](int a, int b) {
    ComplexVector v = ComplexVector::Zero(4);
    v[a] = r;
    v[b] = i * r;
    return PureState(v);
  };
  // 0 = RH, 1 = RV, 2 = LH, 3 = LV.
  if (which == 1) return {pair(0, 1), pair(2, 3)};
  if (which == 2) return {pair(0, 3), pair(1, 2)};
  fail(ErrorCode::kConfigError, "optical case must be 1 or 2");
}

OptimizerConfig OpticalExperimentConfig::default_optimizer() {
  OptimizerConfig cfg;
  cfg.algorithm = Algorithm::kGD;
  cfg.max_iterations = 500;
  cfg.gd.alpha = 0.2;
  cfg.gd.beta = 0.01;
  return cfg;
}

OpticalObjective::OpticalObjective(const AutoencoderTask& task, bool shot_noise,
                                   double counts, std::uint64_t seed)
    : evaluator_(task), shot_noise_(shot_noise), counts_(counts), rng_(seed) {
  if (task.dim() != 4) fail(ErrorCode::kDimensionMismatch, "optical task is 2-qubit");
  if (shot_noise_ && !(counts_ > 0.0)) {
    fail(ErrorCode::kConfigError, "counts must be > 0");
  }
}

double OpticalObjective::exact(std::span<const double> theta) const {
  return evaluator_(optical_gate(OpticalGateParams::from_flat(theta)));
}

double OpticalObjective::evaluate(std::span<const double> theta) const {
  const double j2 = exact(theta);
  if (!shot_noise_) return j2;
  std::poisson_distribution<long> counts(std::max(j2, 0.0) * counts_);
  return static_cast<double>(counts(rng_)) / counts_;
}

OpticalResult simulate_optical_experiment(const std::vector<PureState>& inputs,
                                          const OpticalExperimentConfig& cfg) {
  if (inputs.empty()) fail(ErrorCode::kInvalidArgument, "no input states");
  for (const PureState& s : inputs) {
    if (s.dim() != 4) fail(ErrorCode::kDimensionMismatch, "optical inputs are 2-qubit");
  }
  if (span_rank(inputs) > 2) {
    fail(ErrorCode::kInvalidArgument, "inputs span more than the latent dimension");
  }
  const AutoencoderTask task(StateEnsemble::equal_weight(inputs),
                             Bipartition::qubits(1, 1));
  const OpticalObjective objective(task, cfg.shot_noise, cfg.counts,
                                   cfg.optimizer.seed ^ 0x9e3779b97f4a7c15ULL);
  OpticalResult out;
  out.trace = run_optimizer(objective, cfg.optimizer,
                            Box::uniform(OpticalGateParams::kSize, cfg.angle_lower,
                                         cfg.angle_upper));
  out.params = OpticalGateParams::from_flat(out.trace.final_theta.values).wrapped();
  out.gate = optical_gate(out.params);
  out.exact_j2 = objective.exact(out.trace.final_theta.values);
  return out;
}

}  // namespace qae
