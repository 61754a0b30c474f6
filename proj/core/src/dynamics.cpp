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

#include "qae/dynamics.hpp"

#include <algorithm>
#include <sstream>

#include "qae/error.hpp"

namespace qae {

ControlSystem::ControlSystem(ComplexMatrix drift,
                             std::vector<ComplexMatrix> controls,
                             std::vector<ControlBounds> bounds, double horizon,
                             int segments)
    : drift_(std::move(drift)),
      controls_(std::move(controls)),
      bounds_(std::move(bounds)),
      horizon_(horizon),
      segments_(segments) {
  if (!is_hermitian(drift_)) {
    fail(ErrorCode::kNotHermitian, "drift Hamiltonian");
  }
  if (controls_.size() != bounds_.size()) {
    fail(ErrorCode::kDimensionMismatch, "one bound pair per control is required");
  }
  for (std::size_t j = 0; j < controls_.size(); ++j) {
    if (controls_[j].rows() != dim() || controls_[j].cols() != dim()) {
      fail(ErrorCode::kDimensionMismatch, "control Hamiltonian shape");
    }
    if (!is_hermitian(controls_[j])) {
      fail(ErrorCode::kNotHermitian, "control Hamiltonian " + std::to_string(j));
    }
    if (!(bounds_[j].lower < bounds_[j].upper)) {
      fail(ErrorCode::kInvalidArgument,
           "control " + std::to_string(j) + " needs lower < upper");
    }
  }
  if (!(horizon_ > 0.0)) fail(ErrorCode::kInvalidArgument, "horizon must be > 0");
  if (segments_ < 1) fail(ErrorCode::kInvalidArgument, "segments must be >= 1");
}

std::vector<ControlBounds> ControlSystem::parameter_bounds() const {
  std::vector<ControlBounds> out;
  out.reserve(num_parameters());
  for (const ControlBounds& b : bounds_) {
    out.insert(out.end(), static_cast<std::size_t>(segments_), b);
  }
  return out;
}

ComplexMatrix ControlSystem::hamiltonian(std::span<const double> amplitudes) const {
  if (amplitudes.size() != controls_.size()) {
    fail(ErrorCode::kDimensionMismatch, "amplitude count differs from control count");
  }
  ComplexMatrix h = drift_;
  for (std::size_t j = 0; j < controls_.size(); ++j) {
    h.noalias() += amplitudes[j] * controls_[j];
  }
  return h;
}

ControlField::ControlField(std::size_t num_controls, int segments)
    : num_controls_(num_controls),
      segments_(segments),
      values_(num_controls * static_cast<std::size_t>(segments), 0.0) {}

ControlField ControlField::from_flat(const ControlSystem& sys,
                                     std::span<const double> theta) {
  if (theta.size() != sys.num_parameters()) {
    std::ostringstream msg;
    msg << "expected " << sys.num_parameters() << " amplitudes, got "
        << theta.size();
    fail(ErrorCode::kDimensionMismatch, msg.str());
  }
  ControlField u(sys.num_controls(), sys.segments());
  std::copy(theta.begin(), theta.end(), u.values_.begin());
  return u;
}

ControlField ControlField::constant(const ControlSystem& sys,
                                    std::span<const double> per_control) {
  if (per_control.size() != sys.num_controls()) {
    fail(ErrorCode::kDimensionMismatch, "one value per control is required");
  }
  ControlField u(sys.num_controls(), sys.segments());
  for (std::size_t j = 0; j < sys.num_controls(); ++j) {
    for (int s = 0; s < sys.segments(); ++s) u.at(j, s) = per_control[j];
  }
  return u;
}

std::vector<double> ControlField::segment(int s) const {
  std::vector<double> out(num_controls_);
  for (std::size_t j = 0; j < num_controls_; ++j) out[j] = at(j, s);
  return out;
}

bool ControlField::within(const ControlSystem& sys) const {
  for (std::size_t j = 0; j < num_controls_; ++j) {
    const ControlBounds& b = sys.bounds()[j];
    for (int s = 0; s < segments_; ++s) {
      const double v = at(j, s);
      if (!(v >= b.lower && v <= b.upper)) return false;
    }
  }
  return true;
}

void ControlField::clip(const ControlSystem& sys) {
  for (std::size_t j = 0; j < num_controls_; ++j) {
    const ControlBounds& b = sys.bounds()[j];
    for (int s = 0; s < segments_; ++s) {
      at(j, s) = std::clamp(at(j, s), b.lower, b.upper);
    }
  }
}

std::vector<ComplexMatrix> segment_propagators(const ControlSystem& sys,
                                               const ControlField& u) {
  if (u.num_controls() != sys.num_controls() || u.segments() != sys.segments()) {
    fail(ErrorCode::kDimensionMismatch, "control field shape does not match system");
  }
  const double dt = sys.segment_duration();
  std::vector<ComplexMatrix> out;
  out.reserve(static_cast<std::size_t>(sys.segments()));
  for (int s = 0; s < sys.segments(); ++s) {
    out.push_back(expm_skew_hermitian(sys.hamiltonian(u.segment(s)), dt));
  }
  return out;
}

ComplexMatrix propagate(const ControlSystem& sys, const ControlField& u) {
  if (u.num_controls() != sys.num_controls() || u.segments() != sys.segments()) {
    fail(ErrorCode::kDimensionMismatch, "control field shape does not match system");
  }
  if (!u.within(sys)) {
    fail(ErrorCode::kBoundsViolation, "control amplitude outside its bounds");
  }
  ComplexMatrix phi = identity(sys.dim());
  for (const ComplexMatrix& e : segment_propagators(sys, u)) {
    phi = e * phi;
  }
  return phi;
}

ComplexMatrix embed(const ComplexMatrix& op, int site, int num_qubits) {
  ComplexMatrix out = identity(1);
  for (int q = 0; q < num_qubits; ++q) {
    out = kron(out, q == site ? op : identity(2));
  }
  return out;
}

ControlSystem two_qubit_model() {
  const ComplexMatrix i2 = identity(2);
  std::vector<ComplexMatrix> controls = {
      kron(pauli_x(), i2), kron(i2, pauli_x()),
      kron(pauli_y(), i2), kron(i2, pauli_y())};
  std::vector<ControlBounds> bounds(4, ControlBounds{-4.0, 4.0});
  return ControlSystem(kron(pauli_z(), pauli_z()), std::move(controls),
                       std::move(bounds), 1.1, 20);
}

ControlSystem three_qubit_model() {
  const ComplexMatrix i2 = identity(2);
  const ComplexMatrix sx = pauli_x();
  const ComplexMatrix sz = pauli_z();
  const ComplexMatrix drift = 0.1 * kron(kron(sx, sx), i2) +
                              0.1 * kron(kron(i2, sx), sx) +
                              0.1 * kron(kron(sx, i2), sx);
  std::vector<ComplexMatrix> controls;
  for (int site = 0; site < 3; ++site) {
    controls.push_back(embed(sx, site, 3));
    controls.push_back(embed(sz, site, 3));
  }
  std::vector<ControlBounds> bounds(6, ControlBounds{0.0, 1.0});
  return ControlSystem(drift, std::move(controls), std::move(bounds), 20.0, 100);
}

}  // namespace qae
