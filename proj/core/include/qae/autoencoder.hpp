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

// Autoencoder objectives and the eigenvalue compression bound.
//
// For an encoder U, the compression rate of an ensemble with density rho is
//   J2(U) = <ref| Tr_B(U rho U^dagger) |ref>,
// the overlap of the trash register with the reference state. Its maximum
// over all unitaries is the sum of the N_B largest eigenvalues of rho, and
// `optimal_unitary` constructs an encoder attaining it.

#pragma once

#include <vector>

#include "qae/state.hpp"

namespace qae {

class AutoencoderTask {
 public:
  /// Reference defaults to |0...0> on the trash subsystem.
  AutoencoderTask(StateEnsemble ensemble, Bipartition partition);
  AutoencoderTask(StateEnsemble ensemble, Bipartition partition,
                  PureState reference);

  const StateEnsemble& ensemble() const { return ensemble_; }
  const Bipartition& partition() const { return partition_; }
  const PureState& reference() const { return reference_; }
  Eigen::Index dim() const { return partition_.total(); }

 private:
  StateEnsemble ensemble_;
  Bipartition partition_;
  PureState reference_;
};

struct CompressionBound {
  RealVector spectrum;  // eigenvalues of rho, descending
  double bound = 0.0;   // sum of the first N_B
};

/// Compression rate via the ensemble density matrix. Throws kNotUnitary
/// when ||U^dagger U - I||_F > 1e-8.
double objective_j2(const AutoencoderTask& task, const ComplexMatrix& u);

/// Same quantity computed state by state and averaged with the weights.
double objective_j2_averaged(const AutoencoderTask& task, const ComplexMatrix& u);

/// Trash fidelity of a single input state.
double state_j2(const AutoencoderTask& task, const ComplexMatrix& u,
                std::size_t state_index);

/// Recovery fidelity <psi0| U^dagger (rho_ref (x) Tr_A(U rho0 U^dagger)) U |psi0>.
double objective_j1(const AutoencoderTask& task, const ComplexMatrix& u,
                    std::size_t state_index);

CompressionBound compression_bound(const AutoencoderTask& task);

/// U = (U_A^dagger (x) I_B) W, with W rho W^dagger diagonal in descending
/// order and U_A the Householder transfer of the reference onto |0>.
ComplexMatrix optimal_unitary(const AutoencoderTask& task);

/// Unitary H with H|x> = |y>:
///   H = I - (|x> - |y>)(<x| - <y|) / (1 - <y|x>).
/// Returns the identity when |1 - <y|x>| < 1e-12.
ComplexMatrix householder_transfer(const PureState& x, const PureState& y);

/// Product of single-step transfers x -> z_1 -> ... -> z_M -> y.
ComplexMatrix householder_chain(const PureState& x,
                                const std::vector<PureState>& waypoints,
                                const PureState& y);

/// True iff the input states span at most N_B dimensions.
bool perfect_compression_possible(const AutoencoderTask& task);

/// Trash fidelity under `u` of the normalized combination sum_i c_i |psi_i>.
/// Throws kZeroVector when the combination vanishes.
double linear_combination_property_check(const AutoencoderTask& task,
                                         const ComplexMatrix& u,
                                         const ComplexVector& coeffs);

/// Hot-path evaluator of J2 for many candidate encoders. Skips all
/// validation; J2 = sum_i p_i ||P U psi_i||^2 with P = <ref| (x) I_B.
class TrashFidelityEvaluator {
 public:
  explicit TrashFidelityEvaluator(const AutoencoderTask& task);

  /// N_B x N projection onto the reference-trash sector.
  const ComplexMatrix& trash_projector() const { return projector_; }
  /// N x Q matrix of input states.
  const ComplexMatrix& inputs() const { return inputs_; }
  const RealVector& weights() const { return weights_; }

  double operator()(const ComplexMatrix& u) const;

  /// J2 given the already projected outputs P U Psi (N_B x Q).
  double from_projected(const ComplexMatrix& projected) const;

 private:
  ComplexMatrix projector_;
  ComplexMatrix inputs_;
  RealVector weights_;
};

}  // namespace qae
