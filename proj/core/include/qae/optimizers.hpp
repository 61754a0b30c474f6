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

// Box-constrained black-box maximizers: finite-difference gradient ascent
// (GD), a real-coded genetic algorithm (GA), differential evolution (DE)
// and evolution strategies with momentum (ES).
//
// Every optimizer maximizes, clips each new vector into the box, owns its
// random stream (seeded from the config) and records the best objective
// value after every iteration. Iteration 0 of a trace is the initial state.

#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "qae/state.hpp"

namespace qae {

class Box {
 public:
  Box() = default;
  Box(std::vector<double> lower, std::vector<double> upper);
  /// Same interval for every coordinate.
  static Box uniform(std::size_t dim, double lower, double upper);

  std::size_t size() const { return lower_.size(); }
  const std::vector<double>& lower() const { return lower_; }
  const std::vector<double>& upper() const { return upper_; }

  void clip(std::span<double> theta) const;
  bool contains(std::span<const double> theta) const;

 private:
  std::vector<double> lower_;
  std::vector<double> upper_;
};

struct ParameterVector {
  std::vector<double> values;
  Box bounds;

  bool within_bounds() const { return bounds.contains(values); }
  void clip() { bounds.clip(values); }
};

/// Objective to maximize. Implementations must be deterministic.
class Objective {
 public:
  virtual ~Objective() = default;

  virtual std::size_t dimension() const = 0;
  virtual double evaluate(std::span<const double> theta) const = 0;

  /// Returns J(theta + shifts[j] e_j) for every coordinate j. The default
  /// calls evaluate() once per coordinate; structured objectives override it.
  virtual std::vector<double> evaluate_coordinate_shifts(
      std::span<const double> theta, std::span<const double> shifts) const;
};

class FunctionObjective final : public Objective {
 public:
  using Fn = std::function<double(std::span<const double>)>;
  FunctionObjective(std::size_t dim, Fn fn) : dim_(dim), fn_(std::move(fn)) {}

  std::size_t dimension() const override { return dim_; }
  double evaluate(std::span<const double> theta) const override {
    return fn_(theta);
  }

 private:
  std::size_t dim_;
  Fn fn_;
};

enum class Algorithm { kGD, kGA, kDE, kES };

std::string_view to_string(Algorithm algorithm);
/// Accepts "gd", "ga", "de", "es" (any case).
Algorithm parse_algorithm(std::string_view name);

struct GdSettings {
  double alpha = 5.0;        // learning rate
  double beta = 0.02;        // finite-difference step
  double decay = 0.995;      // applied to alpha and beta
  int decay_every = 100;
  bool single_coordinate = false;  // one random coordinate per iteration
};

struct GaSettings {
  double crossover_rate = 0.8;  // P_c
  double mutation_rate = 0.02;  // P_m
};

struct DeSettings {
  double f_mean = 0.5;
  double f_std = 0.3;
  double cr_mean = 0.5;
  double cr_std = 0.1;
};

struct EsSettings {
  double alpha = 1.0;     // learning rate
  double delta = 0.01;    // perturbation scale
  double momentum = 0.9;
  double decay = 0.98;    // applied to alpha and delta
  int decay_every = 100;
  bool mean_baseline = false;  // subtract the sample-mean fitness
};

struct OptimizerConfig {
  Algorithm algorithm = Algorithm::kGD;
  int max_iterations = 1000;
  /// Stop once the best value improves by less than this over
  /// `convergence_window` iterations. Zero disables the check.
  double convergence_gap = 1e-8;
  int convergence_window = 50;
  int population = 10;
  GdSettings gd;
  GaSettings ga;
  DeSettings de;
  EsSettings es;
  std::uint64_t seed = 1;
  /// Store theta every k iterations in the trace (0 = never).
  int checkpoint_every = 0;

  /// Throws kConfigError on out-of-range settings.
  void validate() const;
};

/// Parameter settings used for the 2-qubit and 3-qubit experiments.
OptimizerConfig paper_config(Algorithm algorithm, int num_qubits);

/// paper_config with the step sizes and budgets adjusted so that every
/// algorithm converges on the control landscapes of the bundled models.
OptimizerConfig recommended_config(Algorithm algorithm, int num_qubits);

struct TrainingTrace {
  std::vector<double> best;        // best objective after each iteration
  std::vector<long> evaluations;   // cumulative evaluations after each iteration
  long evaluations_used = 0;
  ParameterVector final_theta;     // argmax of the best value
  bool converged = false;          // stopped by the gap criterion
  std::vector<std::vector<double>> checkpoints;

  double best_value() const { return best.empty() ? 0.0 : best.back(); }
  int iterations() const { return static_cast<int>(best.size()) - 1; }
};

/// theta_i = lower_i + r_i (upper_i - lower_i), r_i ~ U[0, 1].
ParameterVector initialize(const Box& box, Rng& rng);

/// Central differences with step beta; probes are clipped into the box and
/// the quotient uses the clipped spacing. Costs 2 * dim evaluations.
std::vector<double> finite_difference_gradient(const Objective& objective,
                                              std::span<const double> theta,
                                              double beta, const Box& box);

struct EsEstimate {
  std::vector<double> gradient;
  double best_value = 0.0;         // best of the perturbed samples
  std::vector<double> best_sample;
};

/// ES estimate from `population` Gaussian perturbations:
///   g = 1 / (NP delta) sum_i (J(clip(mean + delta eps_i)) - b) eps_i,
/// with b the sample mean when `mean_baseline`, else 0.
EsEstimate es_gradient_estimate(const Objective& objective,
                                std::span<const double> mean, double delta,
                                int population, bool mean_baseline, const Box& box,
                                Rng& rng);

TrainingTrace run_gd(const Objective& objective, const OptimizerConfig& cfg,
                     const Box& box);
TrainingTrace run_ga(const Objective& objective, const OptimizerConfig& cfg,
                     const Box& box);
TrainingTrace run_de(const Objective& objective, const OptimizerConfig& cfg,
                     const Box& box);
TrainingTrace run_es(const Objective& objective, const OptimizerConfig& cfg,
                     const Box& box);

/// Dispatches on cfg.algorithm.
TrainingTrace run_optimizer(const Objective& objective, const OptimizerConfig& cfg,
                            const Box& box);

}  // namespace qae
