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

// Piecewise-constant controlled dynamics (hbar = 1, atomic units).
//
// Segment 0 is the earliest; the propagator left-multiplies later segments:
//   Phi = E_{S-1} ... E_1 E_0,  E_s = exp(-i (H0 + sum_j u_j[s] H_j) T/S).

#pragma once

#include <span>
#include <vector>

#include "qae/linalg.hpp"

namespace qae {

struct ControlBounds {
  double lower = 0.0;
  double upper = 0.0;
};

class ControlSystem {
 public:
  /// Validates Hermiticity (1e-9) and shapes of all Hamiltonians,
  /// lower < upper for every control, horizon > 0 and segments >= 1.
  ControlSystem(ComplexMatrix drift, std::vector<ComplexMatrix> controls,
                std::vector<ControlBounds> bounds, double horizon,
                int segments);

  Eigen::Index dim() const { return drift_.rows(); }
  const ComplexMatrix& drift() const { return drift_; }
  const std::vector<ComplexMatrix>& controls() const { return controls_; }
  const std::vector<ControlBounds>& bounds() const { return bounds_; }
  std::size_t num_controls() const { return controls_.size(); }
  double horizon() const { return horizon_; }
  int segments() const { return segments_; }
  double segment_duration() const { return horizon_ / segments_; }

  /// Total number of free amplitudes M * S.
  std::size_t num_parameters() const { return controls_.size() * segments_; }

  /// Per-parameter bounds in flattened (control-major) order.
  std::vector<ControlBounds> parameter_bounds() const;

  /// Hamiltonian H0 + sum_j amplitudes[j] H_j.
  ComplexMatrix hamiltonian(std::span<const double> amplitudes) const;

 private:
  ComplexMatrix drift_;
  std::vector<ComplexMatrix> controls_;
  std::vector<ControlBounds> bounds_;
  double horizon_;
  int segments_;
};

/// M x S amplitude table; flattened index is control * S + segment.
class ControlField {
 public:
  ControlField(std::size_t num_controls, int segments);

  /// Reshapes a flat control-major vector.
  static ControlField from_flat(const ControlSystem& sys,
                                std::span<const double> theta);

  /// Same value on every segment of each control.
  static ControlField constant(const ControlSystem& sys,
                               std::span<const double> per_control);

  std::size_t num_controls() const { return num_controls_; }
  int segments() const { return segments_; }

  double& at(std::size_t control, int segment) {
    return values_[control * segments_ + segment];
  }
  double at(std::size_t control, int segment) const {
    return values_[control * segments_ + segment];
  }

  std::span<const double> flat() const { return values_; }

  /// Amplitudes of all controls on one segment.
  std::vector<double> segment(int s) const;

  bool within(const ControlSystem& sys) const;
  void clip(const ControlSystem& sys);

 private:
  std::size_t num_controls_;
  int segments_;
  std::vector<double> values_;
};

/// Segment propagators E_0 .. E_{S-1}. Bounds are not checked.
std::vector<ComplexMatrix> segment_propagators(const ControlSystem& sys,
                                               const ControlField& u);

/// Full propagator Phi(u). Throws kDimensionMismatch if the field shape
/// does not match and kBoundsViolation if any amplitude is out of range.
ComplexMatrix propagate(const ControlSystem& sys, const ControlField& u);

/// H0 = sz(x)sz; controls sx(x)I, I(x)sx, sy(x)I, I(x)sy in [-4, 4];
/// T = 1.1, S = 20.
ControlSystem two_qubit_model();

/// H0 = 0.1 (sx^(12) + sx^(23) + sx^(13)); controls sx^(k), sz^(k) for
/// k = 1..3 in [0, 1]; T = 20, S = 100.
ControlSystem three_qubit_model();

/// Single-qubit operator `op` embedded at `site` of an n-qubit register
/// (site 0 is the leading factor).
ComplexMatrix embed(const ComplexMatrix& op, int site, int num_qubits);

}  // namespace qae
