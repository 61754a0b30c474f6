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


#include "qae/training.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <type_traits>

#include "qae/error.hpp"

namespace qae {

namespace {

bool is_real(const ComplexMatrix& m) { return m.imag().cwiseAbs().maxCoeff() == 0.0; }

}  // namespace

class ControlFieldObjective::Kernel {
 public:
  virtual ~Kernel() = default;
  /// exp(-i (H0 + sum_j amps[j] H_j) dt).
  virtual ComplexMatrix exponential(const double* amps) const = 0;
  /// psi <- exp(-i H dt) psi.
  virtual void apply(const double* amps, ComplexMatrix& psi) const = 0;
};

namespace {

// Fixed-size storage keeps the small eigensolves off the heap.
template <typename Scalar, int N>
class FixedKernel final : public ControlFieldObjective::Kernel {
 public:
  using Mat = Eigen::Matrix<Scalar, N, N>;

  explicit FixedKernel(const ControlSystem& sys) : dt_(sys.segment_duration()) {
    drift_ = convert(sys.drift());
    for (const ComplexMatrix& h : sys.controls()) controls_.push_back(convert(h));
  }

  ComplexMatrix exponential(const double* amps) const override {
    const Mat h = hamiltonian(amps);
    const Eigen::SelfAdjointEigenSolver<Mat> solver(h);
    if (solver.info() != Eigen::Success) {
      fail(ErrorCode::kNoConvergence, "segment eigensolver did not converge");
    }
    const auto v = solver.eigenvectors().template cast<Complex>().eval();
    Eigen::Matrix<Complex, N, 1> phases(v.rows());
    for (Eigen::Index k = 0; k < v.rows(); ++k) {
      phases[k] = std::polar(1.0, -solver.eigenvalues()[k] * dt_);
    }
    return v * phases.asDiagonal() * v.adjoint();
  }

  void apply(const double* amps, ComplexMatrix& psi) const override {
    const Mat h = hamiltonian(amps);
    // Taylor series of the action on the columns of psi; used while
    // ||H dt||_inf <= 1 so the terms decrease monotonically.
    const double scale = h.cwiseAbs().rowwise().sum().maxCoeff() * dt_;
    if (scale > 1.0) {
      psi = exponential(amps) * psi;
      return;
    }
    // Coefficient-based small products; the general GEMM path costs more
    // than the arithmetic at these sizes.
    if constexpr (std::is_same_v<Scalar, double>) {
      // (-i c H)(a + i b) = c H b - i c H a for real H.
      using Block = Eigen::Matrix<double, N, Eigen::Dynamic>;
      Block re = psi.real(), im = psi.imag();
      Block sum_re = re, sum_im = im, tmp;
      for (int k = 1; k <= 40; ++k) {
        const double c = dt_ / static_cast<double>(k);
        tmp.noalias() = c * h.lazyProduct(im);
        im.noalias() = -c * h.lazyProduct(re);
        re.swap(tmp);
        sum_re += re;
        sum_im += im;
        if (std::max(re.cwiseAbs().maxCoeff(), im.cwiseAbs().maxCoeff()) < 1e-17) break;
      }
      psi.real() = sum_re;
      psi.imag() = sum_im;
    } else {
      using Block = Eigen::Matrix<Complex, N, Eigen::Dynamic>;
      Block term = psi, sum = psi, tmp;
      for (int k = 1; k <= 40; ++k) {
        tmp.noalias() = h.lazyProduct(term);
        term = tmp * Complex(0.0, -dt_ / static_cast<double>(k));
        sum += term;
        if (term.cwiseAbs2().maxCoeff() < 1e-34) break;
      }
      psi = sum;
    }
  }

 private:
  Mat hamiltonian(const double* amps) const {
    Mat h = drift_;
    for (std::size_t j = 0; j < controls_.size(); ++j) h.noalias() += amps[j] * controls_[j];
    return h;
  }

  static Mat convert(const ComplexMatrix& m) {
    if constexpr (std::is_same_v<Scalar, double>) {
      return m.real();
    } else {
      return m;
    }
  }

  Mat drift_;
  std::vector<Mat, Eigen::aligned_allocator<Mat>> controls_;
  double dt_;
};

template <typename Scalar>
std::unique_ptr<const ControlFieldObjective::Kernel> kernel_for(const ControlSystem& sys) {
  switch (sys.dim()) {
    case 2: return std::make_unique<FixedKernel<Scalar, 2>>(sys);
    case 4: return std::make_unique<FixedKernel<Scalar, 4>>(sys);
    case 8: return std::make_unique<FixedKernel<Scalar, 8>>(sys);
    default: return std::make_unique<FixedKernel<Scalar, Eigen::Dynamic>>(sys);
  }
}

}  // namespace

ControlFieldObjective::ControlFieldObjective(const AutoencoderTask& task,
                                             const ControlSystem& sys)
    : sys_(sys), evaluator_(task) {
  if (task.dim() != sys.dim()) {
    fail(ErrorCode::kDimensionMismatch, "task and control system dimensions differ");
  }
  bool real = is_real(sys_.drift());
  for (const ComplexMatrix& h : sys_.controls()) real = real && is_real(h);
  kernel_ = real ? kernel_for<double>(sys_) : kernel_for<Complex>(sys_);
}

ControlFieldObjective::~ControlFieldObjective() = default;

Box ControlFieldObjective::box() const {
  std::vector<double> lo, hi;
  for (const ControlBounds& b : sys_.parameter_bounds()) {
    lo.push_back(b.lower);
    hi.push_back(b.upper);
  }
  return Box(std::move(lo), std::move(hi));
}

void ControlFieldObjective::gather(std::span<const double> theta, int s,
                                   std::size_t shifted, double shift,
                                   std::vector<double>& amps) const {
  const std::size_t segments = static_cast<std::size_t>(sys_.segments());
  amps.resize(sys_.num_controls());
  for (std::size_t j = 0; j < sys_.num_controls(); ++j) {
    const std::size_t k = j * segments + static_cast<std::size_t>(s);
    amps[j] = theta[k] + (k == shifted ? shift : 0.0);
  }
}

ComplexMatrix ControlFieldObjective::segment_exponential(std::span<const double> theta,
                                                         int s, std::size_t shifted,
                                                         double shift) const {
  std::vector<double> amps;
  gather(theta, s, shifted, shift, amps);
  return kernel_->exponential(amps.data());
}

double ControlFieldObjective::evaluate(std::span<const double> theta) const {
  if (theta.size() != dimension()) {
    fail(ErrorCode::kDimensionMismatch, "control vector length");
  }
  ComplexMatrix psi = evaluator_.inputs();
  std::vector<double> amps;
  for (int s = 0; s < sys_.segments(); ++s) {
    gather(theta, s, SIZE_MAX, 0.0, amps);
    kernel_->apply(amps.data(), psi);
  }
  return evaluator_.from_projected(evaluator_.trash_projector() * psi);
}

std::vector<double> ControlFieldObjective::evaluate_coordinate_shifts(
    std::span<const double> theta, std::span<const double> shifts) const {
  if (theta.size() != dimension() || shifts.size() != dimension()) {
    fail(ErrorCode::kDimensionMismatch, "control vector length");
  }
  const int segments = sys_.segments();
  std::vector<ComplexMatrix> e(static_cast<std::size_t>(segments));
  for (int s = 0; s < segments; ++s) e[s] = segment_exponential(theta, s);

  // forward[s] = E_{s-1} ... E_0 Psi, backward[s] = P E_{S-1} ... E_{s+1}.
  std::vector<ComplexMatrix> forward(static_cast<std::size_t>(segments));
  forward[0] = evaluator_.inputs();
  for (int s = 1; s < segments; ++s) forward[s] = e[s - 1] * forward[s - 1];
  std::vector<ComplexMatrix> backward(static_cast<std::size_t>(segments));
  backward[segments - 1] = evaluator_.trash_projector();
  for (int s = segments - 2; s >= 0; --s) backward[s] = backward[s + 1] * e[s + 1];

  std::vector<double> out(theta.size());
  const std::size_t per_control = static_cast<std::size_t>(segments);
  std::vector<double> amps;
  ComplexMatrix moved;
  for (std::size_t k = 0; k < theta.size(); ++k) {
    const int s = static_cast<int>(k % per_control);
    gather(theta, s, k, shifts[k], amps);
    moved = forward[s];
    kernel_->apply(amps.data(), moved);
    out[k] = evaluator_.from_projected(backward[s].lazyProduct(moved));
  }
  return out;
}

ClosedLoopResult closed_loop_train(const AutoencoderTask& task,
                                   const ControlSystem& sys,
                                   const OptimizerConfig& cfg) {
  const ControlFieldObjective objective(task, sys);
  ClosedLoopResult out;
  out.trace = run_optimizer(objective, cfg, objective.box());
  out.encoder =
      propagate(sys, ControlField::from_flat(sys, out.trace.final_theta.values));
  return out;
}

}  // namespace qae
