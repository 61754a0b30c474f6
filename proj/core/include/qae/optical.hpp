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


// Simulated two-qubit optical gate: four polarization unitaries, each built
// from wave plates, composed through a path interferometer. Basis order is
// {|RH>, |RV>, |LH>, |LV>}; the path qubit (R/L) is the leading factor and
// plays the trash role, polarization (H/V) is the latent qubit.

#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "qae/autoencoder.hpp"
#include "qae/optimizers.hpp"

namespace qae {

/// A 2x2 unitary acting on polarization.
class PolarizationUnitary {
 public:
  /// Throws kDimensionMismatch unless 2x2, kNotUnitary beyond 1e-10.
  explicit PolarizationUnitary(ComplexMatrix matrix);
  static PolarizationUnitary identity();

  const ComplexMatrix& matrix() const { return matrix_; }

 private:
  ComplexMatrix matrix_;
};

/// Jones matrix of a linear retarder with retardance `gamma` and fast axis
/// at angle `theta`: R(-theta) diag(1, e^{i gamma}) R(theta), with
/// R(theta) = [[cos, sin], [-sin, cos]].
ComplexMatrix retarder(double theta, double gamma);

/// e^{i phase} QWP(q2) HWP(h) QWP(q1); the first plate acts first.
PolarizationUnitary waveplate_unitary(double theta_q1, double theta_h,
                                      double theta_q2, double phase);

struct WaveplateAngles {
  double q1 = 0.0;
  double h = 0.0;
  double q2 = 0.0;
  double phase = 0.0;

  PolarizationUnitary unitary() const { return waveplate_unitary(q1, h, q2, phase); }
};

/// Sixteen angles: V1, V2, VR, VL in that order, four each.
struct OpticalGateParams {
  static constexpr std::size_t kSize = 16;

  WaveplateAngles v1, v2, vr, vl;

  static OpticalGateParams from_flat(std::span<const double> angles);
  std::array<double, kSize> flat() const;
  /// Every angle reduced to [0, 2 pi).
  OpticalGateParams wrapped() const;
};

/// U = [[V2 (VR + VL) V1 / 2, -i V2 (VR - VL) / 2],
///      [i (VR - VL) V1 / 2,   (VR + VL) / 2     ]].
ComplexMatrix compose_two_qubit_gate(const PolarizationUnitary& v1,
                                     const PolarizationUnitary& v2,
                                     const PolarizationUnitary& vr,
                                     const PolarizationUnitary& vl);

ComplexMatrix optical_gate(const OpticalGateParams& params);

/// Basis states |RH>, |RV>, |LH>, |LV> (indices 0..3).
PureState optical_basis(int index);

/// Input pairs of the two built-in cases (1 or 2); kConfigError otherwise.
std::vector<PureState> optical_case_inputs(int which);

struct OpticalExperimentConfig {
  OptimizerConfig optimizer = default_optimizer();
  /// Box for every angle; wider than one period so the clip rarely binds.
  double angle_lower = -6.283185307179586;
  double angle_upper = 12.566370614359172;
  /// Replace exact J2 by Poisson(counts * J2) / counts on every evaluation.
  bool shot_noise = false;
  double counts = 3000.0;

  /// GD with alpha 0.2, beta 0.01, 500 iterations.
  static OptimizerConfig default_optimizer();
};

struct OpticalResult {
  TrainingTrace trace;
  OpticalGateParams params;  // best angles, wrapped
  ComplexMatrix gate;
  double exact_j2 = 0.0;     // noise-free J2 of `gate`
};

/// J2 of the composed gate as a function of the 16 angles.
class OpticalObjective final : public Objective {
 public:
  OpticalObjective(const AutoencoderTask& task, bool shot_noise, double counts,
                   std::uint64_t seed);

  std::size_t dimension() const override { return OpticalGateParams::kSize; }
  double evaluate(std::span<const double> theta) const override;
  double exact(std::span<const double> theta) const;

 private:
  TrashFidelityEvaluator evaluator_;
  bool shot_noise_;
  double counts_;
  mutable Rng rng_;
};

/// Trains the gate to compress the equal-weight pair of inputs onto the
/// polarization qubit with reference |R>. Throws kDimensionMismatch unless
/// both inputs are 4-dimensional and kInvalidArgument if they span more
/// than two dimensions.
OpticalResult simulate_optical_experiment(const std::vector<PureState>& inputs,
                                          const OpticalExperimentConfig& cfg);

}  // namespace qae
