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

#include "qae/state.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "qae/error.hpp"

namespace qae {

namespace {

void require_same_dim(Eigen::Index a, Eigen::Index b, const char* what) {
  if (a != b) {
    std::ostringstream msg;
    msg << what << ": dimension " << a << " vs " << b;
    fail(ErrorCode::kDimensionMismatch, msg.str());
  }
}

}  // namespace

PureState::PureState(ComplexVector amplitudes)
    : amplitudes_(std::move(amplitudes)) {
  if (amplitudes_.size() == 0) {
    fail(ErrorCode::kInvalidState, "pure state must have dimension >= 1");
  }
  const double norm = amplitudes_.norm();
  if (std::abs(norm - 1.0) > 1e-10) {
    std::ostringstream msg;
    msg << "pure state norm " << norm << " differs from 1";
    fail(ErrorCode::kInvalidState, msg.str());
  }
}

PureState PureState::normalized(const ComplexVector& amplitudes) {
  const double norm = amplitudes.norm();
  if (norm < 1e-12) fail(ErrorCode::kZeroVector, "cannot normalize a zero vector");
  return PureState(amplitudes / norm);
}

PureState PureState::basis(Eigen::Index dim, Eigen::Index index) {
  if (index < 0 || index >= dim) {
    fail(ErrorCode::kInvalidArgument, "basis index out of range");
  }
  ComplexVector v = ComplexVector::Zero(dim);
  v[index] = 1.0;
  return PureState(std::move(v));
}

PureState tensor(const PureState& a, const PureState& b) {
  return PureState(kron(a.amplitudes(), b.amplitudes()));
}

DensityMatrix::DensityMatrix(ComplexMatrix matrix) : matrix_(std::move(matrix)) {
  if (matrix_.rows() != matrix_.cols() || matrix_.rows() == 0) {
    fail(ErrorCode::kInvalidState, "density matrix must be square and nonempty");
  }
  if (!is_hermitian(matrix_, kHermitianTol)) {
    fail(ErrorCode::kInvalidState, "density matrix is not Hermitian");
  }
  const Complex trace = matrix_.trace();
  if (std::abs(trace - Complex(1.0, 0.0)) > 1e-10) {
    std::ostringstream msg;
    msg << "density matrix trace " << trace << " differs from 1";
    fail(ErrorCode::kInvalidState, msg.str());
  }
  const double min_eig = hermitian_eigen(matrix_).eigenvalues.minCoeff();
  if (min_eig < -1e-10) {
    std::ostringstream msg;
    msg << "density matrix has negative eigenvalue " << min_eig;
    fail(ErrorCode::kInvalidState, msg.str());
  }
}

DensityMatrix DensityMatrix::from_pure(const PureState& psi) {
  return DensityMatrix(psi.projector());
}

Bipartition::Bipartition(Eigen::Index a, Eigen::Index b) : dim_a(a), dim_b(b) {
  if (a < 1 || b < 1) {
    fail(ErrorCode::kInvalidArgument, "subsystem dimensions must be positive");
  }
}

Bipartition Bipartition::qubits(int trash, int latent) {
  if (trash < 0 || latent < 0) {
    fail(ErrorCode::kInvalidArgument, "qubit counts must be nonnegative");
  }
  return Bipartition(Eigen::Index{1} << trash, Eigen::Index{1} << latent);
}

StateEnsemble::StateEnsemble(std::vector<PureState> states,
                             std::vector<double> weights)
    : states_(std::move(states)), weights_(std::move(weights)) {
  if (states_.empty()) fail(ErrorCode::kInvalidArgument, "ensemble is empty");
  if (states_.size() != weights_.size()) {
    fail(ErrorCode::kDimensionMismatch, "one weight per state is required");
  }
  for (const PureState& s : states_) {
    require_same_dim(s.dim(), states_.front().dim(), "ensemble state");
  }
  double total = 0.0;
  for (double w : weights_) {
    if (!(w >= 0.0)) fail(ErrorCode::kInvalidArgument, "weights must be nonnegative");
    total += w;
  }
  if (std::abs(total - 1.0) > 1e-12) {
    std::ostringstream msg;
    msg << "weights sum to " << total << ", expected 1";
    fail(ErrorCode::kInvalidArgument, msg.str());
  }
}

StateEnsemble StateEnsemble::equal_weight(std::vector<PureState> states) {
  const std::size_t q = states.size();
  if (q == 0) fail(ErrorCode::kInvalidArgument, "ensemble is empty");
  std::vector<double> weights(q, 1.0 / static_cast<double>(q));
  // Absorb the rounding residue so the sum is 1 to the last bit.
  const double partial = std::accumulate(weights.begin(), weights.end() - 1, 0.0);
  weights.back() = 1.0 - partial;
  return StateEnsemble(std::move(states), std::move(weights));
}

ComplexMatrix StateEnsemble::as_columns() const {
  ComplexMatrix v(dim(), static_cast<Eigen::Index>(states_.size()));
  for (std::size_t i = 0; i < states_.size(); ++i) {
    v.col(static_cast<Eigen::Index>(i)) = states_[i].amplitudes();
  }
  return v;
}

DensityMatrix ensemble_density(const StateEnsemble& ensemble) {
  ComplexMatrix rho = ComplexMatrix::Zero(ensemble.dim(), ensemble.dim());
  for (std::size_t i = 0; i < ensemble.size(); ++i) {
    const ComplexVector& psi = ensemble.states()[i].amplitudes();
    rho.noalias() += ensemble.weights()[i] * (psi * psi.adjoint());
  }
  return DensityMatrix(std::move(rho));
}

ComplexMatrix partial_trace_matrix(const ComplexMatrix& rho,
                                   const Bipartition& part, Subsystem keep) {
  require_same_dim(rho.rows(), part.total(), "partial trace");
  require_same_dim(rho.cols(), part.total(), "partial trace");
  const Eigen::Index na = part.dim_a;
  const Eigen::Index nb = part.dim_b;
  if (keep == Subsystem::kA) {
    ComplexMatrix out = ComplexMatrix::Zero(na, na);
    for (Eigen::Index i = 0; i < na; ++i) {
      for (Eigen::Index j = 0; j < na; ++j) {
        Complex acc = 0.0;
        for (Eigen::Index k = 0; k < nb; ++k) acc += rho(i * nb + k, j * nb + k);
        out(i, j) = acc;
      }
    }
    return out;
  }
  ComplexMatrix out = ComplexMatrix::Zero(nb, nb);
  for (Eigen::Index a = 0; a < na; ++a) {
    out += rho.block(a * nb, a * nb, nb, nb);
  }
  return out;
}

DensityMatrix partial_trace(const DensityMatrix& rho, const Bipartition& part,
                            Subsystem keep) {
  return DensityMatrix(partial_trace_matrix(rho.matrix(), part, keep));
}

double fidelity_pure_mixed(const PureState& psi, const DensityMatrix& rho) {
  require_same_dim(psi.dim(), rho.dim(), "fidelity");
  const ComplexVector& v = psi.amplitudes();
  const double f = v.dot(rho.matrix() * v).real();
  return std::clamp(f, 0.0, 1.0);
}

double fidelity_mixed(const DensityMatrix& a, const DensityMatrix& b) {
  require_same_dim(a.dim(), b.dim(), "fidelity");
  const ComplexMatrix root_a = sqrtm_psd(a.matrix());
  const ComplexMatrix inner = root_a * b.matrix() * root_a;
  const RealVector spectrum = hermitian_eigen(0.5 * (inner + inner.adjoint()))
                                  .eigenvalues;
  double trace_root = 0.0;
  for (double lambda : spectrum) trace_root += std::sqrt(std::max(lambda, 0.0));
  return std::clamp(trace_root * trace_root, 0.0, 1.0);
}

PureState random_pure_state(Eigen::Index dim, Rng& rng) {
  if (dim < 1) fail(ErrorCode::kInvalidArgument, "dimension must be >= 1");
  std::normal_distribution<double> normal(0.0, 1.0);
  ComplexVector v(dim);
  for (Eigen::Index k = 0; k < dim; ++k) {
    const double re = normal(rng);
    const double im = normal(rng);
    v[k] = Complex(re, im);
  }
  return PureState::normalized(v);
}

PureState random_positive_state(Eigen::Index dim, Rng& rng) {
  if (dim < 1) fail(ErrorCode::kInvalidArgument, "dimension must be >= 1");
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  ComplexVector v(dim);
  for (Eigen::Index k = 0; k < dim; ++k) v[k] = uniform(rng);
  return PureState::normalized(v);
}

ComplexMatrix random_unitary(Eigen::Index dim, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  ComplexMatrix g(dim, dim);
  for (Eigen::Index i = 0; i < dim; ++i) {
    for (Eigen::Index j = 0; j < dim; ++j) {
      const double re = normal(rng);
      const double im = normal(rng);
      g(i, j) = Complex(re, im);
    }
  }
  Eigen::HouseholderQR<ComplexMatrix> qr(g);
  ComplexMatrix q = qr.householderQ();
  const ComplexMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index k = 0; k < dim; ++k) {
    const Complex d = r(k, k);
    const double mag = std::abs(d);
    if (mag > 0.0) q.col(k) *= d / mag;
  }
  return q;
}

int span_rank(const std::vector<PureState>& states, double rel_tol) {
  if (states.empty()) fail(ErrorCode::kInvalidArgument, "no states given");
  ComplexMatrix v(states.front().dim(), static_cast<Eigen::Index>(states.size()));
  for (std::size_t i = 0; i < states.size(); ++i) {
    require_same_dim(states[i].dim(), v.rows(), "span rank");
    v.col(static_cast<Eigen::Index>(i)) = states[i].amplitudes();
  }
  const RealVector sv = Eigen::JacobiSVD<ComplexMatrix>(v).singularValues();
  if (sv.size() == 0 || sv[0] <= 0.0) return 0;
  const double cutoff = rel_tol * sv[0];
  return static_cast<int>((sv.array() > cutoff).count());
}

}  // namespace qae
