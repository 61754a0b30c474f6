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


#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "qae/autoencoder.hpp"
#include "qae/dynamics.hpp"
#include "qae/training.hpp"

namespace qae {
namespace {

AutoencoderTask make_task(int total, int latent, int q, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<PureState> states;
  for (int k = 0; k < q; ++k) states.push_back(random_positive_state(1 << total, rng));
  return AutoencoderTask(StateEnsemble::equal_weight(states),
                         Bipartition::qubits(total - latent, latent));
}

ControlSystem model(int total) {
  return total == 3 ? three_qubit_model() : two_qubit_model();
}

std::vector<double> random_theta(const ControlFieldObjective& obj, std::uint64_t seed) {
  Rng rng(seed);
  return initialize(obj.box(), rng).values;
}

void BM_Propagate(benchmark::State& state) {
  const int total = static_cast<int>(state.range(0));
  const ControlSystem sys = model(total);
  Rng rng(1);
  const ParameterVector p = initialize(
      Box::uniform(sys.num_parameters(), 0.0, 1.0), rng);
  const ControlField u = ControlField::from_flat(sys, p.values);
  for (auto _ : state) benchmark::DoNotOptimize(propagate(sys, u));
}
BENCHMARK(BM_Propagate)->Arg(2)->Arg(3);

void BM_ObjectiveEvaluate(benchmark::State& state) {
  const int total = static_cast<int>(state.range(0));
  const AutoencoderTask task = make_task(total, total - 1, 4, 2);
  const ControlFieldObjective obj(task, model(total));
  const std::vector<double> theta = random_theta(obj, 3);
  for (auto _ : state) benchmark::DoNotOptimize(obj.evaluate(theta));
}
BENCHMARK(BM_ObjectiveEvaluate)->Arg(2)->Arg(3);

// One full finite-difference gradient: 2 * dim shifted evaluations.
void BM_CoordinateShifts(benchmark::State& state) {
  const int total = static_cast<int>(state.range(0));
  const AutoencoderTask task = make_task(total, total - 1, 4, 2);
  const ControlFieldObjective obj(task, model(total));
  const std::vector<double> theta = random_theta(obj, 3);
  const std::vector<double> shifts(theta.size(), 1e-3);
  for (auto _ : state) {
    benchmark::DoNotOptimize(obj.evaluate_coordinate_shifts(theta, shifts));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long>(theta.size()));
}
BENCHMARK(BM_CoordinateShifts)->Arg(2)->Arg(3);

void BM_CompressionBound(benchmark::State& state) {
  const AutoencoderTask task = make_task(3, 1, static_cast<int>(state.range(0)), 4);
  for (auto _ : state) benchmark::DoNotOptimize(compression_bound(task));
}
BENCHMARK(BM_CompressionBound)->Arg(2)->Arg(8);

void BM_OptimalUnitary(benchmark::State& state) {
  const AutoencoderTask task = make_task(3, 2, 4, 5);
  for (auto _ : state) benchmark::DoNotOptimize(optimal_unitary(task));
}
BENCHMARK(BM_OptimalUnitary);

void BM_Expm(benchmark::State& state) {
  Rng rng(6);
  const Eigen::Index n = state.range(0);
  ComplexMatrix h = random_unitary(n, rng);
  h = (h + h.adjoint()).eval();
  for (auto _ : state) benchmark::DoNotOptimize(expm_skew_hermitian(h, 0.1));
}
BENCHMARK(BM_Expm)->Arg(4)->Arg(8);

}  // namespace
}  // namespace qae

BENCHMARK_MAIN();
