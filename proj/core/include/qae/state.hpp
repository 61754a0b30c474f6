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

// State representations, bipartitions and fidelity measures.
//
// Bipartition convention: the trash subsystem A is the leading tensor
// factor, so a basis index of A (x) B is a * dim_b + b.

#pragma once

#include <random>
#include <vector>

#include "qae/linalg.hpp"

namespace qae {

using Rng = std::mt19937_64;

class PureState {
 public:
  /// Requires ||amplitudes|| = 1 within 1e-10.
  explicit PureState(ComplexVector amplitudes);

  /// Rescales to unit norm; throws kZeroVector below 1e-12.
  static PureState normalized(const ComplexVector& amplitudes);

  /// Computational basis vector |index>.
  static PureState basis(Eigen::Index dim, Eigen::Index index);

  Eigen::Index dim() const { return amplitudes_.size(); }
  const ComplexVector& amplitudes() const { return amplitudes_; }

  ComplexMatrix projector() const {
    return amplitudes_ * amplitudes_.adjoint();
  }

 private:
  ComplexVector amplitudes_;
};

PureState tensor(const PureState& a, const PureState& b);

class DensityMatrix {
 public:
  /// Validates Hermiticity (1e-9), unit trace (1e-10) and positivity
  /// (minimum eigenvalue >= -1e-10). Throws kInvalidState otherwise.
  explicit DensityMatrix(ComplexMatrix matrix);

  static DensityMatrix from_pure(const PureState& psi);

  Eigen::Index dim() const { return matrix_.rows(); }
  const ComplexMatrix& matrix() const { return matrix_; }

 private:
  ComplexMatrix matrix_;
};

struct Bipartition {
  Eigen::Index dim_a = 1;  // trash
  Eigen::Index dim_b = 1;  // latent

  Bipartition() = default;
  Bipartition(Eigen::Index a, Eigen::Index b);

  /// Qubit counts: `trash` leading qubits, `latent` trailing qubits.
  static Bipartition qubits(int trash, int latent);

  Eigen::Index total() const { return dim_a * dim_b; }
};

enum class Subsystem { kA, kB };

class StateEnsemble {
 public:
  /// Weights must be nonnegative and sum to 1 within 1e-12; all states
  /// must share one dimension.
  StateEnsemble(std::vector<PureState> states, std::vector<double> weights);

  static StateEnsemble equal_weight(std::vector<PureState> states);

  Eigen::Index dim() const { return states_.front().dim(); }
  std::size_t size() const { return states_.size(); }
  const std::vector<PureState>& states() const { return states_; }
  const std::vector<double>& weights() const { return weights_; }

  /// Columns are the state vectors (the matrix V whose rank is SpanF).
  ComplexMatrix as_columns() const;

 private:
  std::vector<PureState> states_;
  std::vector<double> weights_;
};

/// rho = sum_i p_i |psi_i><psi_i|.
DensityMatrix ensemble_density(const StateEnsemble& ensemble);

/// Reduced state on `keep`; the other subsystem is traced out.
DensityMatrix partial_trace(const DensityMatrix& rho, const Bipartition& part,
                            Subsystem keep);

/// Raw-matrix partial trace without state validation, for hot paths and
/// non-normalized operators.
ComplexMatrix partial_trace_matrix(const ComplexMatrix& rho,
                                   const Bipartition& part, Subsystem keep);

/// <psi|rho|psi>, clamped to [0, 1].
double fidelity_pure_mixed(const PureState& psi, const DensityMatrix& rho);

/// Uhlmann fidelity [Tr sqrt(sqrt(A) B sqrt(A))]^2.
double fidelity_mixed(const DensityMatrix& a, const DensityMatrix& b);

/// Haar-random pure state (normalized complex standard-Gaussian vector).
PureState random_pure_state(Eigen::Index dim, Rng& rng);

/// Normalized vector of independent Uniform[0, 1] real amplitudes.
PureState random_positive_state(Eigen::Index dim, Rng& rng);

/// Haar-random unitary (QR of a complex Ginibre matrix with phase fix).
ComplexMatrix random_unitary(Eigen::Index dim, Rng& rng);

/// Number of singular values of the column-stacked state matrix above
/// `rel_tol` times the largest one.
int span_rank(const std::vector<PureState>& states, double rel_tol = 1e-8);

}  // namespace qae
