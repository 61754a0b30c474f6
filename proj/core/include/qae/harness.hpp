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


// Experiment orchestration: configs, repeated seeded runs, parameter sweeps,
// the invariant verification suite, and CSV/JSON persistence.

#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "qae/autoencoder.hpp"
#include "qae/optical.hpp"
#include "qae/optimizers.hpp"

namespace qae {

enum class SystemKind { kTwoQubit, kThreeQubit, kOptical };

std::string_view to_string(SystemKind kind);
/// Accepts "two_qubit", "three_qubit", "optical"; '-' may replace '_'.
SystemKind parse_system(std::string_view name);
int num_qubits(SystemKind kind);

/// How random input states are drawn for each run.
enum class StateDistribution {
  kUniformReal,  // normalized vectors of Uniform[0, 1] amplitudes
  kHaar,         // normalized complex Gaussian vectors
};

std::string_view to_string(StateDistribution dist);
StateDistribution parse_distribution(std::string_view name);

struct ExperimentConfig {
  SystemKind system = SystemKind::kTwoQubit;
  int q = 2;
  int latent_qubits = 1;
  OptimizerConfig optimizer;
  int runs = 20;
  std::uint64_t seed = 1;
  StateDistribution state_distribution = StateDistribution::kUniformReal;
  int optical_case = 1;     // optical system only
  bool shot_noise = false;  // optical system only

  /// Throws kConfigError naming the offending field.
  void validate() const;
};

/// Defaults for a system/algorithm pair, using recommended_config for the
/// optimizer (or the optical defaults).
ExperimentConfig default_experiment(SystemKind system, Algorithm algorithm);

/// Parses JSON text. Missing fields keep the defaults of the named system
/// and algorithm; unknown fields and bad values raise kConfigError.
ExperimentConfig parse_experiment_config(std::string_view json_text);
ExperimentConfig load_experiment_config(const std::filesystem::path& path);
std::string to_json(const ExperimentConfig& cfg);

struct RunRecord {
  int run = 0;
  std::uint64_t seed = 0;
  double expected = 0.0;           // compression bound
  double actual = 0.0;             // best J2
  double degree_of_success = 0.0;  // actual / expected
  double j1_mean = 0.0;            // mean recovery fidelity at the best encoder
  int iterations = 0;
  long evaluations = 0;
  double wall_time = 0.0;          // seconds
};

struct Aggregate {
  double mean = 0.0;
  double std = 0.0;  // sample standard deviation (n - 1), 0 for one run
};

Aggregate aggregate(const std::vector<double>& values);

struct RunSummary {
  ExperimentConfig config;
  std::vector<RunRecord> runs;
  Aggregate expected, actual, degree_of_success, j1_mean;

  /// Recomputes the aggregates from `runs`.
  void recompute();
};

struct ExperimentResult {
  RunSummary summary;
  std::vector<TrainingTrace> traces;  // one per run
};

/// Number of parallel run workers: QAE_THREADS if set to a positive
/// integer, otherwise the hardware concurrency.
int worker_count();

/// Input states for one run, drawn from `rng`.
std::vector<PureState> draw_inputs(const ExperimentConfig& cfg, Rng& rng);

/// Runs cfg.runs independent repetitions. Run k uses seed + k for its
/// inputs and optimizer, so results do not depend on scheduling.
ExperimentResult run_experiment(const ExperimentConfig& cfg, int workers = 0);

/// trace_run<k>.csv, summary.json and plot_fig3.csv under `dir`.
void write_experiment(const ExperimentResult& result,
                      const std::filesystem::path& dir);

struct TraceRow {
  int iteration = 0;
  double best_j2 = 0.0;
  long evaluations = 0;
};

void write_trace_csv(const TrainingTrace& trace, const std::filesystem::path& path);
std::vector<TraceRow> read_trace_csv(const std::filesystem::path& path);

void write_summary_json(const RunSummary& summary, const std::filesystem::path& path);
RunSummary read_summary_json(const std::filesystem::path& path);

/// One compression ratio N / N_B expressed in qubits.
struct ChiRatio {
  int total_qubits = 2;
  int latent_qubits = 1;
  int num() const { return 1 << total_qubits; }
  int den() const { return 1 << latent_qubits; }
};

struct SweepConfig {
  std::vector<ChiRatio> ratios = {{2, 1}, {3, 2}, {3, 1}};
  std::vector<int> q_values = {1, 2, 4, 8};
  int runs = 20;
  std::uint64_t seed = 1;
  StateDistribution state_distribution = StateDistribution::kUniformReal;
  Algorithm two_qubit_algorithm = Algorithm::kGD;
  Algorithm three_qubit_algorithm = Algorithm::kES;
  int max_iterations = 0;  // 0 keeps the per-system default

  void validate() const;
};

SweepConfig parse_sweep_config(std::string_view json_text);

struct SweepRow {
  int chi_num = 0;
  int chi_den = 0;
  int q = 0;
  int run = 0;
  double expected = 0.0;
  double actual = 0.0;
  double degree_of_success = 0.0;
};

/// The experiment config used for one (ratio, Q) cell of a sweep.
ExperimentConfig sweep_cell(const SweepConfig& cfg, const ChiRatio& ratio, int q);

std::vector<SweepRow> run_sweep(const SweepConfig& cfg, int workers = 0);

void write_sweep_csv(const std::vector<SweepRow>& rows, const std::filesystem::path& path);
std::vector<SweepRow> read_sweep_csv(const std::filesystem::path& path);

using PartialTraceFn =
    std::function<ComplexMatrix(const ComplexMatrix&, const Bipartition&, Subsystem)>;

/// Deliberately wrong partial trace (keeps the wrong subsystem's diagonal
/// pairing) used as a negative control for the verify suite.
ComplexMatrix faulty_partial_trace(const ComplexMatrix& rho, const Bipartition& part,
                                   Subsystem keep);

struct VerifyOptions {
  int samples = 10000;  // bound-dominance unitaries
  int pairs = 1000;     // Householder pairs and density matrices
  int fidelity_samples = 10000;
  int tasks_per_side = 100;
  std::uint64_t seed = 1;
  PartialTraceFn partial_trace = partial_trace_matrix;
};

struct CheckResult {
  std::string name;
  bool passed = false;
  long cases = 0;
  long failures = 0;
  double worst = 0.0;  // largest violation seen
  std::string detail;
};

struct VerifyReport {
  std::vector<CheckResult> checks;
  bool all_passed() const;
  /// Tab-separated table: name, status, cases, failures, worst, detail.
  std::string table() const;
};

VerifyReport run_verify(const VerifyOptions& options);

}  // namespace qae
