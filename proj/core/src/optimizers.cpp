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

#include "qae/optimizers.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numeric>
#include <sstream>

#include "qae/error.hpp"

namespace qae {

namespace {

double checked(double value) {
  if (!std::isfinite(value)) {
    fail(ErrorCode::kObjectiveFailure, "objective returned a non-finite value");
  }
  return value;
}

void require_dimension(const Objective& objective, const Box& box) {
  if (objective.dimension() != box.size()) {
    std::ostringstream msg;
    msg << "objective dimension " << objective.dimension() << " vs box "
        << box.size();
    fail(ErrorCode::kDimensionMismatch, msg.str());
  }
  if (box.size() == 0) fail(ErrorCode::kInvalidArgument, "empty parameter box");
}

// Bookkeeping shared by all optimizers: best-so-far, evaluation counts,
// the convergence-gap test and optional theta checkpoints.
class Recorder {
 public:
  Recorder(const OptimizerConfig& cfg, const Box& box) : cfg_(cfg) {
    trace_.final_theta.bounds = box;
  }

  void count(long evaluations) { evaluations_ += evaluations; }

  void offer(double value, std::span<const double> theta) {
    if (!has_best_ || value > best_) {
      best_ = value;
      has_best_ = true;
      trace_.final_theta.values.assign(theta.begin(), theta.end());
    }
  }

  /// Closes an iteration; returns true when the run should stop.
  bool end_iteration(std::span<const double> current) {
    trace_.best.push_back(best_);
    trace_.evaluations.push_back(evaluations_);
    const int iteration = static_cast<int>(trace_.best.size()) - 1;
    if (cfg_.checkpoint_every > 0 && iteration % cfg_.checkpoint_every == 0) {
      trace_.checkpoints.emplace_back(current.begin(), current.end());
    }
    if (iteration >= cfg_.max_iterations) return true;
    if (cfg_.convergence_gap > 0.0 && iteration >= cfg_.convergence_window) {
      const double before = trace_.best[static_cast<std::size_t>(
          iteration - cfg_.convergence_window)];
      if (best_ - before < cfg_.convergence_gap) {
        trace_.converged = true;
        return true;
      }
    }
    return false;
  }

  TrainingTrace finish() {
    trace_.evaluations_used = evaluations_;
    return std::move(trace_);
  }

 private:
  const OptimizerConfig& cfg_;
  TrainingTrace trace_;
  double best_ = 0.0;
  bool has_best_ = false;
  long evaluations_ = 0;
};

std::vector<double> flatten(const std::vector<std::vector<double>>& population) {
  std::vector<double> out;
  for (const auto& v : population) out.insert(out.end(), v.begin(), v.end());
  return out;
}

}  // namespace

Box::Box(std::vector<double> lower, std::vector<double> upper)
    : lower_(std::move(lower)), upper_(std::move(upper)) {
  if (lower_.size() != upper_.size()) {
    fail(ErrorCode::kDimensionMismatch, "box bounds differ in length");
  }
  for (std::size_t i = 0; i < lower_.size(); ++i) {
    if (!(lower_[i] <= upper_[i])) {
      fail(ErrorCode::kInvalidArgument, "box needs lower <= upper");
    }
  }
}

Box Box::uniform(std::size_t dim, double lower, double upper) {
  return Box(std::vector<double>(dim, lower), std::vector<double>(dim, upper));
}

void Box::clip(std::span<double> theta) const {
  for (std::size_t i = 0; i < theta.size(); ++i) {
    theta[i] = std::clamp(theta[i], lower_[i], upper_[i]);
  }
}

bool Box::contains(std::span<const double> theta) const {
  if (theta.size() != lower_.size()) return false;
  for (std::size_t i = 0; i < theta.size(); ++i) {
    if (!(theta[i] >= lower_[i] && theta[i] <= upper_[i])) return false;
  }
  return true;
}

std::vector<double> Objective::evaluate_coordinate_shifts(
    std::span<const double> theta, std::span<const double> shifts) const {
  std::vector<double> probe(theta.begin(), theta.end());
  std::vector<double> out(theta.size());
  for (std::size_t j = 0; j < theta.size(); ++j) {
    probe[j] = theta[j] + shifts[j];
    out[j] = evaluate(probe);
    probe[j] = theta[j];
  }
  return out;
}

std::string_view to_string(Algorithm algorithm) {
  switch (algorithm) {
    case Algorithm::kGD: return "gd";
    case Algorithm::kGA: return "ga";
    case Algorithm::kDE: return "de";
    case Algorithm::kES: return "es";
  }
  return "unknown";
}

Algorithm parse_algorithm(std::string_view name) {
  std::string lower(name);
  for (char& c : lower) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  if (lower == "gd") return Algorithm::kGD;
  if (lower == "ga") return Algorithm::kGA;
  if (lower == "de") return Algorithm::kDE;
  if (lower == "es") return Algorithm::kES;
  fail(ErrorCode::kConfigError, "unknown algorithm '" + std::string(name) + "'");
}

void OptimizerConfig::validate() const {
  auto bad = [](const std::string& field, const std::string& why) {
    fail(ErrorCode::kConfigError, field + ": " + why);
  };
  auto probability = [&](double p, const char* field) {
    if (!(p >= 0.0 && p <= 1.0)) bad(field, "must lie in [0, 1]");
  };
  if (max_iterations < 0) bad("max_iterations", "must be >= 0");
  if (convergence_gap < 0.0) bad("convergence_gap", "must be >= 0");
  if (convergence_window < 1) bad("convergence_window", "must be >= 1");
  if (checkpoint_every < 0) bad("checkpoint_every", "must be >= 0");
  switch (algorithm) {
    case Algorithm::kGD:
      if (!(gd.beta > 0.0)) bad("gd.beta", "must be > 0");
      if (!(gd.decay > 0.0)) bad("gd.decay", "must be > 0");
      if (gd.decay_every < 1) bad("gd.decay_every", "must be >= 1");
      break;
    case Algorithm::kGA:
      if (population < 2) bad("population", "GA needs at least 2 individuals");
      probability(ga.crossover_rate, "ga.crossover_rate");
      probability(ga.mutation_rate, "ga.mutation_rate");
      break;
    case Algorithm::kDE:
      if (population < 4) bad("population", "DE needs at least 4 individuals");
      if (de.f_std < 0.0 || de.cr_std < 0.0) bad("de", "standard deviations must be >= 0");
      break;
    case Algorithm::kES:
      if (population < 2) bad("population", "ES needs at least 2 samples");
      if (!(es.delta > 0.0)) bad("es.delta", "must be > 0");
      probability(es.momentum, "es.momentum");
      if (!(es.decay > 0.0)) bad("es.decay", "must be > 0");
      if (es.decay_every < 1) bad("es.decay_every", "must be >= 1");
      break;
  }
}

OptimizerConfig paper_config(Algorithm algorithm, int num_qubits) {
  OptimizerConfig cfg;
  cfg.algorithm = algorithm;
  const bool small = num_qubits <= 2;
  switch (algorithm) {
    case Algorithm::kGD:
      cfg.population = 1;
      cfg.max_iterations = small ? 1000 : 1500;
      break;
    case Algorithm::kGA:
    case Algorithm::kDE:
      cfg.population = small ? 10 : 50;
      cfg.max_iterations = small ? 1000 : 2000;
      break;
    case Algorithm::kES:
      cfg.population = small ? 10 : 20;
      cfg.es.alpha = small ? 1.0 : 0.2;
      cfg.es.delta = small ? 0.01 : 0.005;
      cfg.max_iterations = small ? 2000 : 3000;
      break;
  }
  return cfg;
}

OptimizerConfig recommended_config(Algorithm algorithm, int num_qubits) {
  OptimizerConfig cfg = paper_config(algorithm, num_qubits);
  const bool small = num_qubits <= 2;
  switch (algorithm) {
    case Algorithm::kGD:
      cfg.max_iterations = 3000;
      if (!small) {
        // alpha = 5 overshoots the [0, 1] amplitude box on 600 parameters.
        cfg.gd.alpha = 0.5;
        cfg.convergence_gap = 0.0;
      }
      break;
    case Algorithm::kGA:
      if (!small) cfg.max_iterations = 400;
      break;
    case Algorithm::kDE:
      // Greedy selection leaves the best unchanged for long stretches.
      cfg.convergence_gap = 0.0;
      if (!small) cfg.max_iterations = 3000;
      break;
    case Algorithm::kES:
      cfg.es.mean_baseline = true;
      if (!small) {
        cfg.es.alpha = 2.0;
        cfg.es.delta = 0.002;
        cfg.max_iterations = 6000;
        // The mean point plateaus for long stretches before improving.
        cfg.convergence_gap = 0.0;
      }
      break;
  }
  return cfg;
}

ParameterVector initialize(const Box& box, Rng& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  ParameterVector out;
  out.bounds = box;
  out.values.resize(box.size());
  for (std::size_t i = 0; i < box.size(); ++i) {
    const double r = unit(rng);
    out.values[i] = box.lower()[i] + r * (box.upper()[i] - box.lower()[i]);
  }
  out.clip();
  return out;
}

std::vector<double> finite_difference_gradient(const Objective& objective,
                                              std::span<const double> theta,
                                              double beta, const Box& box) {
  const std::size_t dim = box.size();
  if (theta.size() != dim) fail(ErrorCode::kDimensionMismatch, "theta vs box size");
  // Probe points are kept inside the box; the difference quotient uses the
  // actual spacing, which is one-sided on a face.
  std::vector<double> plus(dim), minus(dim), gradient(dim, 0.0);
  for (std::size_t j = 0; j < dim; ++j) {
    plus[j] = std::min(beta, box.upper()[j] - theta[j]);
    minus[j] = -std::min(beta, theta[j] - box.lower()[j]);
  }
  const std::vector<double> up = objective.evaluate_coordinate_shifts(theta, plus);
  const std::vector<double> down = objective.evaluate_coordinate_shifts(theta, minus);
  for (std::size_t j = 0; j < dim; ++j) {
    const double spacing = plus[j] - minus[j];
    if (spacing > 0.0) gradient[j] = (checked(up[j]) - checked(down[j])) / spacing;
  }
  return gradient;
}

TrainingTrace run_gd(const Objective& objective, const OptimizerConfig& cfg,
                     const Box& box) {
  cfg.validate();
  require_dimension(objective, box);
  Rng rng(cfg.seed);
  Recorder rec(cfg, box);
  const std::size_t dim = box.size();

  std::vector<double> theta = initialize(box, rng).values;
  double value = checked(objective.evaluate(theta));
  rec.count(1);
  rec.offer(value, theta);
  if (rec.end_iteration(theta)) return rec.finish();

  double alpha = cfg.gd.alpha;
  double beta = cfg.gd.beta;
  std::vector<double> plus(dim), minus(dim), gradient(dim);
  std::uniform_int_distribution<std::size_t> pick(0, dim - 1);

  for (int iter = 1;; ++iter) {
    auto probe_steps = [&](std::size_t j) {
      plus[j] = std::min(beta, box.upper()[j] - theta[j]);
      minus[j] = -std::min(beta, theta[j] - box.lower()[j]);
    };
    std::fill(gradient.begin(), gradient.end(), 0.0);
    if (cfg.gd.single_coordinate) {
      const std::size_t j = pick(rng);
      probe_steps(j);
      const double spacing = plus[j] - minus[j];
      if (spacing > 0.0) {
        std::vector<double> probe = theta;
        probe[j] = theta[j] + plus[j];
        const double up = checked(objective.evaluate(probe));
        probe[j] = theta[j] + minus[j];
        const double down = checked(objective.evaluate(probe));
        rec.count(2);
        gradient[j] = (up - down) / spacing;
      }
    } else {
      gradient = finite_difference_gradient(objective, theta, beta, box);
      rec.count(2 * static_cast<long>(dim));
    }
    for (std::size_t j = 0; j < dim; ++j) theta[j] += alpha * gradient[j];
    box.clip(theta);

    value = checked(objective.evaluate(theta));
    rec.count(1);
    rec.offer(value, theta);
    if (iter % cfg.gd.decay_every == 0) {
      alpha *= cfg.gd.decay;
      beta *= cfg.gd.decay;
    }
    if (rec.end_iteration(theta)) break;
  }
  return rec.finish();
}

TrainingTrace run_ga(const Objective& objective, const OptimizerConfig& cfg,
                     const Box& box) {
  cfg.validate();
  require_dimension(objective, box);
  Rng rng(cfg.seed);
  Recorder rec(cfg, box);
  const std::size_t dim = box.size();
  const std::size_t np = static_cast<std::size_t>(cfg.population);
  // ceil(NP (1 - P_c)) with a guard against 1.9999999999999996-style products.
  const auto n_elite = static_cast<std::size_t>(
      std::ceil(static_cast<double>(np) * (1.0 - cfg.ga.crossover_rate) - 1e-9));
  const std::size_t n_offspring = np - std::min(n_elite, np);

  std::vector<std::vector<double>> pop(np);
  std::vector<double> fitness(np);
  for (std::size_t i = 0; i < np; ++i) {
    pop[i] = initialize(box, rng).values;
    fitness[i] = checked(objective.evaluate(pop[i]));
    rec.offer(fitness[i], pop[i]);
  }
  rec.count(static_cast<long>(np));
  if (rec.end_iteration(flatten(pop))) return rec.finish();

  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<std::size_t> order(np);
  std::vector<double> weights(np);
  while (true) {
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return fitness[a] > fitness[b];
    });

    std::vector<std::vector<double>> next;
    std::vector<double> next_fitness;
    next.reserve(np);
    for (std::size_t k = 0; k < np - n_offspring; ++k) {
      next.push_back(pop[order[k]]);
      next_fitness.push_back(fitness[order[k]]);
    }

    // Fitness-proportional sampling; shifted when some fitness is not
    // positive so the weights stay a valid distribution.
    const double min_fit = *std::min_element(fitness.begin(), fitness.end());
    const double shift = min_fit <= 0.0 ? -min_fit + 1e-12 : 0.0;
    for (std::size_t i = 0; i < np; ++i) weights[i] = fitness[i] + shift;
    std::vector<double> cumulative(np);
    std::partial_sum(weights.begin(), weights.end(), cumulative.begin());
    const double total = cumulative.back();

    std::vector<std::vector<double>> offspring;
    offspring.reserve(n_offspring);
    for (std::size_t k = 0; k < n_offspring; ++k) {
      const double r = unit(rng) * total;
      auto it = std::upper_bound(cumulative.begin(), cumulative.end(), r);
      const std::size_t idx = std::min<std::size_t>(
          static_cast<std::size_t>(it - cumulative.begin()), np - 1);
      offspring.push_back(pop[idx]);
    }

    // Random pairing with single-point crossover; an odd leftover is kept.
    std::shuffle(offspring.begin(), offspring.end(), rng);
    if (dim >= 2) {
      std::uniform_int_distribution<std::size_t> cut_dist(1, dim - 1);
      for (std::size_t k = 0; k + 1 < offspring.size(); k += 2) {
        const std::size_t cut = cut_dist(rng);
        std::swap_ranges(offspring[k].begin() + static_cast<std::ptrdiff_t>(cut),
                         offspring[k].end(),
                         offspring[k + 1].begin() + static_cast<std::ptrdiff_t>(cut));
      }
    }
    for (auto& child : offspring) {
      for (std::size_t j = 0; j < dim; ++j) {
        if (unit(rng) < cfg.ga.mutation_rate) {
          child[j] = box.lower()[j] + unit(rng) * (box.upper()[j] - box.lower()[j]);
        }
      }
      box.clip(child);
    }

    for (auto& child : offspring) {
      const double f = checked(objective.evaluate(child));
      rec.offer(f, child);
      next.push_back(std::move(child));
      next_fitness.push_back(f);
    }
    rec.count(static_cast<long>(n_offspring));
    pop = std::move(next);
    fitness = std::move(next_fitness);
    if (rec.end_iteration(flatten(pop))) break;
  }
  return rec.finish();
}

TrainingTrace run_de(const Objective& objective, const OptimizerConfig& cfg,
                     const Box& box) {
  cfg.validate();
  require_dimension(objective, box);
  Rng rng(cfg.seed);
  Recorder rec(cfg, box);
  const std::size_t dim = box.size();
  const std::size_t np = static_cast<std::size_t>(cfg.population);

  std::vector<std::vector<double>> pop(np);
  std::vector<double> fitness(np);
  for (std::size_t i = 0; i < np; ++i) {
    pop[i] = initialize(box, rng).values;
    fitness[i] = checked(objective.evaluate(pop[i]));
    rec.offer(fitness[i], pop[i]);
  }
  rec.count(static_cast<long>(np));
  if (rec.end_iteration(flatten(pop))) return rec.finish();

  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<std::size_t> pick(0, np - 1);
  std::uniform_int_distribution<std::size_t> pick_dim(0, dim - 1);
  std::normal_distribution<double> f_dist(cfg.de.f_mean, cfg.de.f_std);
  std::normal_distribution<double> cr_dist(cfg.de.cr_mean, cfg.de.cr_std);
  std::vector<double> trial(dim);

  while (true) {
    for (std::size_t i = 0; i < np; ++i) {
      std::size_t r1, r2, r3;
      do { r1 = pick(rng); } while (r1 == i);
      do { r2 = pick(rng); } while (r2 == i || r2 == r1);
      do { r3 = pick(rng); } while (r3 == i || r3 == r1 || r3 == r2);
      const double f = std::clamp(f_dist(rng), 0.0, 1.5);
      const double cr = std::clamp(cr_dist(rng), 0.0, 1.0);
      const std::size_t forced = pick_dim(rng);
      for (std::size_t j = 0; j < dim; ++j) {
        const bool take = unit(rng) < cr || j == forced;
        trial[j] = take ? pop[r1][j] + f * (pop[r2][j] - pop[r3][j]) : pop[i][j];
      }
      box.clip(trial);
      const double value = checked(objective.evaluate(trial));
      rec.offer(value, trial);
      if (value >= fitness[i]) {
        pop[i] = trial;
        fitness[i] = value;
      }
    }
    rec.count(static_cast<long>(np));
    if (rec.end_iteration(flatten(pop))) break;
  }
  return rec.finish();
}

EsEstimate es_gradient_estimate(const Objective& objective,
                                std::span<const double> mean, double delta,
                                int population, bool mean_baseline, const Box& box,
                                Rng& rng) {
  const std::size_t dim = box.size();
  if (mean.size() != dim) fail(ErrorCode::kDimensionMismatch, "mean vs box size");
  if (population < 1) fail(ErrorCode::kInvalidArgument, "population must be >= 1");
  const std::size_t np = static_cast<std::size_t>(population);
  std::normal_distribution<double> normal(0.0, 1.0);
  // All noise is drawn before any evaluation.
  std::vector<std::vector<double>> noise(np, std::vector<double>(dim));
  for (auto& eps : noise) {
    for (double& e : eps) e = normal(rng);
  }
  EsEstimate out;
  out.gradient.assign(dim, 0.0);
  std::vector<double> sample(dim), scores(np);
  for (std::size_t i = 0; i < np; ++i) {
    for (std::size_t j = 0; j < dim; ++j) sample[j] = mean[j] + delta * noise[i][j];
    box.clip(sample);
    scores[i] = checked(objective.evaluate(sample));
    if (i == 0 || scores[i] > out.best_value) {
      out.best_value = scores[i];
      out.best_sample = sample;
    }
  }
  const double baseline =
      mean_baseline
          ? std::accumulate(scores.begin(), scores.end(), 0.0) / static_cast<double>(np)
          : 0.0;
  for (std::size_t i = 0; i < np; ++i) {
    const double w = (scores[i] - baseline) / (static_cast<double>(np) * delta);
    for (std::size_t j = 0; j < dim; ++j) out.gradient[j] += w * noise[i][j];
  }
  return out;
}

TrainingTrace run_es(const Objective& objective, const OptimizerConfig& cfg,
                     const Box& box) {
  cfg.validate();
  require_dimension(objective, box);
  Rng rng(cfg.seed);
  Recorder rec(cfg, box);
  const std::size_t dim = box.size();
  const std::size_t np = static_cast<std::size_t>(cfg.population);

  std::vector<double> mean = initialize(box, rng).values;
  double value = checked(objective.evaluate(mean));
  rec.count(1);
  rec.offer(value, mean);
  if (rec.end_iteration(mean)) return rec.finish();

  double alpha = cfg.es.alpha;
  double delta = cfg.es.delta;
  const double beta = cfg.es.momentum;
  std::vector<double> velocity(dim, 0.0);

  for (int iter = 1;; ++iter) {
    const EsEstimate est =
        es_gradient_estimate(objective, mean, delta, cfg.population,
                             cfg.es.mean_baseline, box, rng);
    rec.offer(est.best_value, est.best_sample);
    rec.count(static_cast<long>(np));
    const std::vector<double>& grad = est.gradient;
    for (std::size_t j = 0; j < dim; ++j) {
      velocity[j] = beta * velocity[j] + (1.0 - beta) * grad[j];
      mean[j] += alpha * velocity[j];
    }
    box.clip(mean);

    value = checked(objective.evaluate(mean));
    rec.count(1);
    rec.offer(value, mean);
    if (iter % cfg.es.decay_every == 0) {
      alpha *= cfg.es.decay;
      delta *= cfg.es.decay;
    }
    if (rec.end_iteration(mean)) break;
  }
  return rec.finish();
}

TrainingTrace run_optimizer(const Objective& objective, const OptimizerConfig& cfg,
                            const Box& box) {
  switch (cfg.algorithm) {
    case Algorithm::kGD: return run_gd(objective, cfg, box);
    case Algorithm::kGA: return run_ga(objective, cfg, box);
    case Algorithm::kDE: return run_de(objective, cfg, box);
    case Algorithm::kES: return run_es(objective, cfg, box);
  }
  fail(ErrorCode::kConfigError, "unknown algorithm");
}

}  // namespace qae
