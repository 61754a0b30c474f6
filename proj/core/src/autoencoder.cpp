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

#include "qae/autoencoder.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "qae/error.hpp"

namespace qae {

namespace {

constexpr double kUnitaryTol = 1e-8;

void check_encoder(const AutoencoderTask& task, const ComplexMatrix& u) {
  if (u.rows() != task.dim() || u.cols() != task.dim()) {
    std::ostringstream msg;
    msg << "encoder is " << u.rows() << "x" << u.cols() << ", task dimension "
        << task.dim();
    fail(ErrorCode::kDimensionMismatch, msg.str());
  }
  if (!is_unitary(u, kUnitaryTol)) {
    fail(ErrorCode::kNotUnitary, "encoder is not unitary within 1e-8");
  }
}

const PureState& input_at(const AutoencoderTask& task, std::size_t index) {
  if (index >= task.ensemble().size()) {
    fail(ErrorCode::kInvalidArgument, "state index out of range");
  }
  return task.ensemble().states()[index];
}

double trash_overlap(const PureState& reference, const ComplexMatrix& rho_a) {
  const ComplexVector& r = reference.amplitudes();
  return std::clamp(r.dot(rho_a * r).real(), 0.0, 1.0);
}

}  // namespace

AutoencoderTask::AutoencoderTask(StateEnsemble ensemble, Bipartition partition)
    : AutoencoderTask(ensemble, partition, PureState::basis(partition.dim_a, 0)) {}

AutoencoderTask::AutoencoderTask(StateEnsemble ensemble, Bipartition partition,
                                 PureState reference)
    : ensemble_(std::move(ensemble)),
      partition_(partition),
      reference_(std::move(reference)) {
  if (ensemble_.dim() != partition_.total()) {
    std::ostringstream msg;
    msg << "ensemble dimension " << ensemble_.dim() << " vs partition "
        << partition_.dim_a << "x" << partition_.dim_b;
    fail(ErrorCode::kDimensionMismatch, msg.str());
  }
  if (reference_.dim() != partition_.dim_a) {
    fail(ErrorCode::kDimensionMismatch,
         "reference state must live on the trash subsystem");
  }
}

double objective_j2(const AutoencoderTask& task, const ComplexMatrix& u) {
  check_encoder(task, u);
  const DensityMatrix rho = ensemble_density(task.ensemble());
  const ComplexMatrix encoded = u * rho.matrix() * u.adjoint();
  return trash_overlap(task.reference(),
                       partial_trace_matrix(encoded, task.partition(), Subsystem::kA));
}

double state_j2(const AutoencoderTask& task, const ComplexMatrix& u,
                std::size_t state_index) {
  check_encoder(task, u);
  const ComplexVector out = u * input_at(task, state_index).amplitudes();
  const ComplexMatrix rho_a = partial_trace_matrix(out * out.adjoint(),
                                                   task.partition(), Subsystem::kA);
  return trash_overlap(task.reference(), rho_a);
}

double objective_j2_averaged(const AutoencoderTask& task, const ComplexMatrix& u) {
  double total = 0.0;
  for (std::size_t i = 0; i < task.ensemble().size(); ++i) {
    total += task.ensemble().weights()[i] * state_j2(task, u, i);
  }
  return total;
}

double objective_j1(const AutoencoderTask& task, const ComplexMatrix& u,
                    std::size_t state_index) {
  check_encoder(task, u);
  const ComplexVector& psi0 = input_at(task, state_index).amplitudes();
  const ComplexVector encoded = u * psi0;
  const ComplexMatrix latent = partial_trace_matrix(encoded * encoded.adjoint(),
                                                    task.partition(), Subsystem::kB);
  const ComplexMatrix decoder_input = kron(task.reference().projector(), latent);
  const Complex f = encoded.dot(decoder_input * encoded);
  return std::clamp(f.real(), 0.0, 1.0);
}

CompressionBound compression_bound(const AutoencoderTask& task) {
  const DensityMatrix rho = ensemble_density(task.ensemble());
  CompressionBound out;
  out.spectrum = hermitian_eigen(rho.matrix()).eigenvalues;
  out.bound = out.spectrum.head(task.partition().dim_b).sum();
  return out;
}

ComplexMatrix optimal_unitary(const AutoencoderTask& task) {
  const DensityMatrix rho = ensemble_density(task.ensemble());
  const EigenDecomposition eig = hermitian_eigen(rho.matrix());
  // Rows of W are eigenvectors in descending order, so W rho W^dagger = D.
  const ComplexMatrix w = eig.eigenvectors.adjoint();
  // blockdiag(M1, M4) is fixed to the identity.
  const ComplexMatrix u_a = householder_transfer(
      task.reference(), PureState::basis(task.partition().dim_a, 0));
  return kron(u_a.adjoint(), identity(task.partition().dim_b)) * w;
}

ComplexMatrix householder_transfer(const PureState& x, const PureState& y) {
  if (x.dim() != y.dim()) {
    fail(ErrorCode::kDimensionMismatch, "Householder transfer needs equal dimensions");
  }
  const ComplexVector& xv = x.amplitudes();
  const ComplexVector& yv = y.amplitudes();
  const Complex denom = 1.0 - yv.dot(xv);
  if (std::abs(denom) < 1e-12) return identity(x.dim());
  const ComplexVector diff = xv - yv;
  return identity(x.dim()) - (diff * diff.adjoint()) / denom;
}

ComplexMatrix householder_chain(const PureState& x,
                                const std::vector<PureState>& waypoints,
                                const PureState& y) {
  ComplexMatrix total = identity(x.dim());
  const PureState* from = &x;
  for (const PureState& z : waypoints) {
    total = householder_transfer(*from, z) * total;
    from = &z;
  }
  return householder_transfer(*from, y) * total;
}

bool perfect_compression_possible(const AutoencoderTask& task) {
  return span_rank(task.ensemble().states()) <= task.partition().dim_b;
}

double linear_combination_property_check(const AutoencoderTask& task,
                                         const ComplexMatrix& u,
                                         const ComplexVector& coeffs) {
  check_encoder(task, u);
  if (coeffs.size() != static_cast<Eigen::Index>(task.ensemble().size())) {
    fail(ErrorCode::kDimensionMismatch, "one coefficient per input state");
  }
  const ComplexVector combined = task.ensemble().as_columns() * coeffs;
  const PureState psi = PureState::normalized(combined);
  const ComplexVector out = u * psi.amplitudes();
  return trash_overlap(task.reference(),
                       partial_trace_matrix(out * out.adjoint(), task.partition(),
                                            Subsystem::kA));
}

TrashFidelityEvaluator::TrashFidelityEvaluator(const AutoencoderTask& task)
    : inputs_(task.ensemble().as_columns()),
      weights_(task.ensemble().size()) {
  const Eigen::Index nb = task.partition().dim_b;
  projector_ = kron(task.reference().amplitudes().adjoint(), identity(nb));
  for (std::size_t i = 0; i < task.ensemble().size(); ++i) {
    weights_[static_cast<Eigen::Index>(i)] = task.ensemble().weights()[i];
  }
}

double TrashFidelityEvaluator::operator()(const ComplexMatrix& u) const {
  return from_projected(projector_ * u * inputs_);
}

double TrashFidelityEvaluator::from_projected(const ComplexMatrix& projected) const {
  return projected.colwise().squaredNorm().transpose().dot(weights_);
}

}  // namespace qae
