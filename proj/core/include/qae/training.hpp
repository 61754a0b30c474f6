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


// Closed-loop training of control-field encoders: the objective
// theta -> J2(task, Phi(theta)) and the driver that hands it to an optimizer.

#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "qae/autoencoder.hpp"
#include "qae/dynamics.hpp"
#include "qae/optimizers.hpp"

namespace qae {

/// J2 of the encoder produced by a flattened control field. Evaluations do
/// not check bounds; optimizers clip before calling.
class ControlFieldObjective final : public Objective {
 public:
  /// Segment exponential kernel, specialized on dimension and scalar type.
  class Kernel;

  /// Throws kDimensionMismatch when the task and system dimensions differ.
  ControlFieldObjective(const AutoencoderTask& task, const ControlSystem& sys);
  ~ControlFieldObjective() override;

  std::size_t dimension() const override { return sys_.num_parameters(); }
  double evaluate(std::span<const double> theta) const override;

  /// Reuses forward states and backward projections around each segment, so
  /// every shifted value costs one segment exponential.
  std::vector<double> evaluate_coordinate_shifts(
      std::span<const double> theta,
      std::span<const double> shifts) const override;

  Box box() const;
  const ControlSystem& system() const { return sys_; }

 private:
  ComplexMatrix segment_exponential(std::span<const double> theta, int s,
                                    std::size_t shifted = SIZE_MAX,
                                    double shift = 0.0) const;
  void gather(std::span<const double> theta, int s, std::size_t shifted,
              double shift, std::vector<double>& amps) const;

  ControlSystem sys_;
  TrashFidelityEvaluator evaluator_;
  std::unique_ptr<const Kernel> kernel_;
};

struct ClosedLoopResult {
  TrainingTrace trace;
  ComplexMatrix encoder;  // Phi of the best field found
};

/// Runs cfg.algorithm on the control amplitudes of `sys` to maximize J2.
ClosedLoopResult closed_loop_train(const AutoencoderTask& task,
                                   const ControlSystem& sys,
                                   const OptimizerConfig& cfg);

}  // namespace qae
