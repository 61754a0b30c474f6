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


#include "qae/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <memory>
#include <mutex>
#include <sstream>
#include <thread>

#include "json.hpp"
#include "qae/dynamics.hpp"
#include "qae/error.hpp"
#include "qae/training.hpp"

namespace qae {

using nlohmann::json;

namespace {

std::string canonical_name(std::string_view name) {
  std::string out(name);
  for (char& c : out) {
    c = c == '-' ? '_' : static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  }
  return out;
}

// Reads optional fields of a JSON object, rejecting anything unexpected.
class FieldReader {
 public:
  FieldReader(const json& obj, std::string prefix) : obj_(obj), prefix_(std::move(prefix)) {
    if (!obj_.is_object()) fail(ErrorCode::kConfigError, where("") + "expected an object");
  }

  template <typename T>
  void get(const char* key, T& out) {
    seen_.emplace_back(key);
    const auto it = obj_.find(key);
    if (it == obj_.end()) return;
    try {
      out = it->template get<T>();
    } catch (const json::exception& e) {
      fail(ErrorCode::kConfigError, where(key) + e.what());
    }
  }

  const json* child(const char* key) {
    seen_.emplace_back(key);
    const auto it = obj_.find(key);
    return it == obj_.end() ? nullptr : &*it;
  }

  std::string where(std::string_view key) const {
    return "config field '" + prefix_ + std::string(key) + "': ";
  }

  void reject_unknown() const {
    for (auto it = obj_.begin(); it != obj_.end(); ++it) {
      if (std::find(seen_.begin(), seen_.end(), it.key()) == seen_.end()) {
        fail(ErrorCode::kConfigError, "unknown config field '" + prefix_ + it.key() + "'");
      }
    }
  }

 private:
  const json& obj_;
  std::string prefix_;
  std::vector<std::string> seen_;
};

json parse_json(std::string_view text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    fail(ErrorCode::kConfigError, std::string("invalid JSON: ") + e.what());
  }
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::kIoError, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorCode::kIoError, "cannot write " + path.string());
  out << text;
  if (!out) fail(ErrorCode::kIoError, "write failed for " + path.string());
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::vector<std::vector<std::string>> read_csv(const std::filesystem::path& path,
                                               std::string_view header) {
  std::istringstream in(read_file(path));
  std::string line;
  if (!std::getline(in, line) || line != header) {
    fail(ErrorCode::kIoError, path.string() + ": unexpected header");
  }
  std::vector<std::vector<std::string>> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    rows.push_back(std::move(cells));
  }
  return rows;
}

double to_double(const std::string& s) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used == s.size()) return v;
  } catch (const std::exception&) {
  }
  fail(ErrorCode::kIoError, "bad number '" + s + "'");
}

long to_long(const std::string& s) {
  const double v = to_double(s);
  return static_cast<long>(v);
}

void read_optimizer(const json& j, OptimizerConfig& o) {
  FieldReader r(j, "optimizer.");
  r.get("max_iterations", o.max_iterations);
  r.get("convergence_gap", o.convergence_gap);
  r.get("convergence_window", o.convergence_window);
  r.get("population", o.population);
  r.get("checkpoint_every", o.checkpoint_every);
  if (const json* g = r.child("gd")) {
    FieldReader gr(*g, "optimizer.gd.");
    gr.get("alpha", o.gd.alpha);
    gr.get("beta_perturb", o.gd.beta);
    gr.get("decay", o.gd.decay);
    gr.get("decay_every", o.gd.decay_every);
    gr.get("single_coordinate", o.gd.single_coordinate);
    gr.reject_unknown();
  }
  if (const json* g = r.child("ga")) {
    FieldReader gr(*g, "optimizer.ga.");
    gr.get("pc", o.ga.crossover_rate);
    gr.get("pm", o.ga.mutation_rate);
    gr.reject_unknown();
  }
  if (const json* d = r.child("de")) {
    FieldReader dr(*d, "optimizer.de.");
    dr.get("f_mean", o.de.f_mean);
    dr.get("f_std", o.de.f_std);
    dr.get("cr_mean", o.de.cr_mean);
    dr.get("cr_std", o.de.cr_std);
    dr.reject_unknown();
  }
  if (const json* e = r.child("es")) {
    FieldReader er(*e, "optimizer.es.");
    er.get("alpha", o.es.alpha);
    er.get("delta", o.es.delta);
    er.get("momentum_beta", o.es.momentum);
    er.get("decay", o.es.decay);
    er.get("decay_every", o.es.decay_every);
    er.get("mean_baseline", o.es.mean_baseline);
    er.reject_unknown();
  }
  r.reject_unknown();
}

json optimizer_json(const OptimizerConfig& o) {
  return {
      {"max_iterations", o.max_iterations},
      {"convergence_gap", o.convergence_gap},
      {"convergence_window", o.convergence_window},
      {"population", o.population},
      {"checkpoint_every", o.checkpoint_every},
      {"gd", {{"alpha", o.gd.alpha}, {"beta_perturb", o.gd.beta}, {"decay", o.gd.decay},
              {"decay_every", o.gd.decay_every},
              {"single_coordinate", o.gd.single_coordinate}}},
      {"ga", {{"pc", o.ga.crossover_rate}, {"pm", o.ga.mutation_rate}}},
      {"de", {{"f_mean", o.de.f_mean}, {"f_std", o.de.f_std}, {"cr_mean", o.de.cr_mean},
              {"cr_std", o.de.cr_std}}},
      {"es", {{"alpha", o.es.alpha}, {"delta", o.es.delta},
              {"momentum_beta", o.es.momentum}, {"decay", o.es.decay},
              {"decay_every", o.es.decay_every}, {"mean_baseline", o.es.mean_baseline}}},
  };
}

json config_json(const ExperimentConfig& c) {
  return {
      {"system", to_string(c.system)},
      {"q", c.q},
      {"latent_qubits", c.latent_qubits},
      {"algorithm", to_string(c.optimizer.algorithm)},
      {"optimizer", optimizer_json(c.optimizer)},
      {"runs", c.runs},
      {"seed", c.seed},
      {"state_distribution", to_string(c.state_distribution)},
      {"optical_case", c.optical_case},
      {"shot_noise", c.shot_noise},
  };
}

ExperimentConfig config_from_json(const json& j) {
  FieldReader r(j, "");
  std::string system = "two_qubit";
  std::string algorithm = "gd";
  r.get("system", system);
  r.get("algorithm", algorithm);
  ExperimentConfig cfg;
  try {
    cfg = default_experiment(parse_system(system), parse_algorithm(algorithm));
  } catch (const QaeError& e) {
    fail(ErrorCode::kConfigError, r.where("system/algorithm") + e.what());
  }
  r.get("q", cfg.q);
  r.get("latent_qubits", cfg.latent_qubits);
  r.get("runs", cfg.runs);
  r.get("seed", cfg.seed);
  std::string dist(to_string(cfg.state_distribution));
  r.get("state_distribution", dist);
  cfg.state_distribution = parse_distribution(dist);
  r.get("optical_case", cfg.optical_case);
  r.get("shot_noise", cfg.shot_noise);
  if (const json* o = r.child("optimizer")) read_optimizer(*o, cfg.optimizer);
  r.reject_unknown();
  cfg.validate();
  return cfg;
}

json record_json(const RunRecord& rec) {
  return {{"run", rec.run},
          {"seed", rec.seed},
          {"expected_fidelity", rec.expected},
          {"actual_fidelity", rec.actual},
          {"degree_of_success", rec.degree_of_success},
          {"recovered_fidelity_mean", rec.j1_mean},
          {"iterations", rec.iterations},
          {"evaluations", rec.evaluations},
          {"wall_time", rec.wall_time}};
}

json aggregate_json(const Aggregate& a) { return {{"mean", a.mean}, {"std", a.std}}; }

Aggregate aggregate_from(const json& j) {
  return {j.at("mean").get<double>(), j.at("std").get<double>()};
}

// Runs body(k) for k in [0, n) on up to `workers` threads. Each index is
// processed exactly once; the first exception is rethrown.
void parallel_for(int n, int workers, const std::function<void(int)>& body) {
  workers = std::max(1, std::min(workers, n));
  if (workers == 1) {
    for (int k = 0; k < n; ++k) body(k);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (int k = next++; k < n; k = next++) {
        try {
          body(k);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!error) error = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

ControlSystem model_for(SystemKind kind) {
  return kind == SystemKind::kThreeQubit ? three_qubit_model() : two_qubit_model();
}

double mean_j1(const AutoencoderTask& task, const ComplexMatrix& encoder) {
  double total = 0.0;
  for (std::size_t i = 0; i < task.ensemble().size(); ++i) {
    total += objective_j1(task, encoder, i);
  }
  return total / static_cast<double>(task.ensemble().size());
}

RunRecord run_once(const ExperimentConfig& cfg, int k, TrainingTrace& trace) {
  const auto start = std::chrono::steady_clock::now();
  RunRecord rec;
  rec.run = k;
  rec.seed = cfg.seed + static_cast<std::uint64_t>(k);
  Rng rng(rec.seed);
  const std::vector<PureState> inputs = draw_inputs(cfg, rng);
  OptimizerConfig opt = cfg.optimizer;
  opt.seed = rng();

  const int n = num_qubits(cfg.system);
  const AutoencoderTask task(StateEnsemble::equal_weight(inputs),
                             Bipartition::qubits(n - cfg.latent_qubits, cfg.latent_qubits));
  ComplexMatrix encoder;
  if (cfg.system == SystemKind::kOptical) {
    OpticalExperimentConfig oc;
    oc.optimizer = opt;
    oc.shot_noise = cfg.shot_noise;
    OpticalResult res = simulate_optical_experiment(inputs, oc);
    trace = std::move(res.trace);
    encoder = std::move(res.gate);
    rec.actual = res.exact_j2;
  } else {
    ClosedLoopResult res = closed_loop_train(task, model_for(cfg.system), opt);
    trace = std::move(res.trace);
    encoder = std::move(res.encoder);
    rec.actual = trace.best_value();
  }
  rec.expected = compression_bound(task).bound;
  rec.degree_of_success = rec.actual / rec.expected;
  rec.j1_mean = mean_j1(task, encoder);
  rec.iterations = trace.iterations();
  rec.evaluations = trace.evaluations_used;
  rec.wall_time =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return rec;
}

std::string task_label(const ExperimentConfig& cfg) {
  std::ostringstream s;
  s << num_qubits(cfg.system) << "->" << cfg.latent_qubits << " (Q=" << cfg.q << ")";
  return s.str();
}

int log2_exact(int value, const char* field) {
  for (int k = 0; k < 8; ++k) {
    if ((1 << k) == value) return k;
  }
  fail(ErrorCode::kConfigError, std::string("config field '") + field +
                                    "': dimensions must be powers of two");
}

}  // namespace

std::string_view to_string(SystemKind kind) {
  switch (kind) {
    case SystemKind::kTwoQubit: return "two_qubit";
    case SystemKind::kThreeQubit: return "three_qubit";
    case SystemKind::kOptical: return "optical";
  }
  return "unknown";
}

SystemKind parse_system(std::string_view name) {
  const std::string s = canonical_name(name);
  if (s == "two_qubit") return SystemKind::kTwoQubit;
  if (s == "three_qubit") return SystemKind::kThreeQubit;
  if (s == "optical") return SystemKind::kOptical;
  fail(ErrorCode::kConfigError, "unknown system '" + std::string(name) + "'");
}

int num_qubits(SystemKind kind) { return kind == SystemKind::kThreeQubit ? 3 : 2; }

std::string_view to_string(StateDistribution dist) {
  return dist == StateDistribution::kHaar ? "haar" : "uniform_real";
}

StateDistribution parse_distribution(std::string_view name) {
  const std::string s = canonical_name(name);
  if (s == "haar") return StateDistribution::kHaar;
  if (s == "uniform_real") return StateDistribution::kUniformReal;
  fail(ErrorCode::kConfigError, "unknown state_distribution '" + std::string(name) + "'");
}

void ExperimentConfig::validate() const {
  auto bad = [](const char* field, const std::string& why) {
    fail(ErrorCode::kConfigError, std::string("config field '") + field + "': " + why);
  };
  const int n = num_qubits(system);
  if (q < 1) bad("q", "must be >= 1");
  if (latent_qubits < 1 || latent_qubits >= n) {
    bad("latent_qubits", "must lie in [1, " + std::to_string(n - 1) + "]");
  }
  if (runs < 1) bad("runs", "must be >= 1");
  if (system == SystemKind::kOptical) {
    if (optical_case != 1 && optical_case != 2) bad("optical_case", "must be 1 or 2");
    if (q != 2) bad("q", "the optical cases have two inputs");
  }
  try {
    optimizer.validate();
  } catch (const QaeError& e) {
    fail(ErrorCode::kConfigError, std::string("config field 'optimizer': ") + e.what());
  }
}

ExperimentConfig default_experiment(SystemKind system, Algorithm algorithm) {
  ExperimentConfig cfg;
  cfg.system = system;
  if (system == SystemKind::kOptical) {
    cfg.optimizer = OpticalExperimentConfig::default_optimizer();
    cfg.optimizer.algorithm = algorithm;
    if (algorithm != Algorithm::kGD) {
      const int iterations = cfg.optimizer.max_iterations;
      cfg.optimizer = recommended_config(algorithm, 2);
      cfg.optimizer.max_iterations = iterations;
    }
  } else {
    cfg.optimizer = recommended_config(algorithm, num_qubits(system));
  }
  return cfg;
}

ExperimentConfig parse_experiment_config(std::string_view json_text) {
  return config_from_json(parse_json(json_text));
}

ExperimentConfig load_experiment_config(const std::filesystem::path& path) {
  return parse_experiment_config(read_file(path));
}

std::string to_json(const ExperimentConfig& cfg) { return config_json(cfg).dump(2); }

Aggregate aggregate(const std::vector<double>& values) {
  Aggregate a;
  if (values.empty()) return a;
  double sum = 0.0;
  for (double v : values) sum += v;
  a.mean = sum / static_cast<double>(values.size());
  if (values.size() > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - a.mean) * (v - a.mean);
    a.std = std::sqrt(ss / static_cast<double>(values.size() - 1));
  }
  return a;
}

void RunSummary::recompute() {
  std::vector<double> e, a, d, j;
  for (const RunRecord& r : runs) {
    e.push_back(r.expected);
    a.push_back(r.actual);
    d.push_back(r.degree_of_success);
    j.push_back(r.j1_mean);
  }
  expected = aggregate(e);
  actual = aggregate(a);
  degree_of_success = aggregate(d);
  j1_mean = aggregate(j);
}

int worker_count() {
  if (const char* env = std::getenv("QAE_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<int>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

std::vector<PureState> draw_inputs(const ExperimentConfig& cfg, Rng& rng) {
  if (cfg.system == SystemKind::kOptical) return optical_case_inputs(cfg.optical_case);
  const Eigen::Index dim = Eigen::Index{1} << num_qubits(cfg.system);
  std::vector<PureState> out;
  out.reserve(static_cast<std::size_t>(cfg.q));
  for (int i = 0; i < cfg.q; ++i) {
    out.push_back(cfg.state_distribution == StateDistribution::kHaar
                      ? random_pure_state(dim, rng)
                      : random_positive_state(dim, rng));
  }
  return out;
}

ExperimentResult run_experiment(const ExperimentConfig& cfg, int workers) {
  cfg.validate();
  ExperimentResult out;
  out.summary.config = cfg;
  out.summary.runs.resize(static_cast<std::size_t>(cfg.runs));
  out.traces.resize(static_cast<std::size_t>(cfg.runs));
  parallel_for(cfg.runs, workers > 0 ? workers : worker_count(), [&](int k) {
    out.summary.runs[k] = run_once(cfg, k, out.traces[k]);
  });
  out.summary.recompute();
  return out;
}

void write_trace_csv(const TrainingTrace& trace, const std::filesystem::path& path) {
  std::string text = "iteration,best_j2,evaluations\n";
  for (std::size_t i = 0; i < trace.best.size(); ++i) {
    text += std::to_string(i) + "," + fmt(trace.best[i]) + "," +
            std::to_string(trace.evaluations[i]) + "\n";
  }
  write_file(path, text);
}

std::vector<TraceRow> read_trace_csv(const std::filesystem::path& path) {
  std::vector<TraceRow> out;
  for (const auto& cells : read_csv(path, "iteration,best_j2,evaluations")) {
    if (cells.size() != 3) fail(ErrorCode::kIoError, path.string() + ": bad row");
    out.push_back({static_cast<int>(to_long(cells[0])), to_double(cells[1]),
                   to_long(cells[2])});
  }
  return out;
}

void write_summary_json(const RunSummary& summary, const std::filesystem::path& path) {
  json runs = json::array();
  for (const RunRecord& r : summary.runs) runs.push_back(record_json(r));
  const json doc = {
      {"config", config_json(summary.config)},
      {"runs", runs},
      {"aggregate",
       {{"expected_fidelity", aggregate_json(summary.expected)},
        {"actual_fidelity", aggregate_json(summary.actual)},
        {"degree_of_success", aggregate_json(summary.degree_of_success)},
        {"recovered_fidelity_mean", aggregate_json(summary.j1_mean)}}},
  };
  write_file(path, doc.dump(2) + "\n");
}

RunSummary read_summary_json(const std::filesystem::path& path) {
  const json doc = parse_json(read_file(path));
  RunSummary s;
  try {
    s.config = config_from_json(doc.at("config"));
    for (const json& r : doc.at("runs")) {
      RunRecord rec;
      rec.run = r.at("run").get<int>();
      rec.seed = r.at("seed").get<std::uint64_t>();
      rec.expected = r.at("expected_fidelity").get<double>();
      rec.actual = r.at("actual_fidelity").get<double>();
      rec.degree_of_success = r.at("degree_of_success").get<double>();
      rec.j1_mean = r.at("recovered_fidelity_mean").get<double>();
      rec.iterations = r.at("iterations").get<int>();
      rec.evaluations = r.at("evaluations").get<long>();
      rec.wall_time = r.at("wall_time").get<double>();
      s.runs.push_back(rec);
    }
    const json& agg = doc.at("aggregate");
    s.expected = aggregate_from(agg.at("expected_fidelity"));
    s.actual = aggregate_from(agg.at("actual_fidelity"));
    s.degree_of_success = aggregate_from(agg.at("degree_of_success"));
    s.j1_mean = aggregate_from(agg.at("recovered_fidelity_mean"));
  } catch (const json::exception& e) {
    fail(ErrorCode::kIoError, path.string() + ": " + e.what());
  }
  return s;
}

void write_experiment(const ExperimentResult& result, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) fail(ErrorCode::kIoError, "cannot create " + dir.string());
  for (std::size_t k = 0; k < result.traces.size(); ++k) {
    write_trace_csv(result.traces[k], dir / ("trace_run" + std::to_string(k) + ".csv"));
  }
  write_summary_json(result.summary, dir / "summary.json");
  std::string fig = "task,run,expected,actual,degree_of_success\n";
  const std::string label = task_label(result.summary.config);
  for (const RunRecord& r : result.summary.runs) {
    fig += label + "," + std::to_string(r.run) + "," + fmt(r.expected) + "," +
           fmt(r.actual) + "," + fmt(r.degree_of_success) + "\n";
  }
  write_file(dir / "plot_fig3.csv", fig);
}

void SweepConfig::validate() const {
  auto bad = [](const char* field, const std::string& why) {
    fail(ErrorCode::kConfigError, std::string("config field '") + field + "': " + why);
  };
  if (ratios.empty()) bad("ratios", "at least one ratio is required");
  for (const ChiRatio& r : ratios) {
    if (r.total_qubits != 2 && r.total_qubits != 3) bad("ratios", "input must be 2 or 3 qubits");
    if (r.latent_qubits < 1 || r.latent_qubits >= r.total_qubits) {
      bad("ratios", "latent dimension must be smaller than the input dimension");
    }
  }
  if (q_values.empty()) bad("q_values", "at least one Q is required");
  for (int q : q_values) {
    if (q < 1) bad("q_values", "every Q must be >= 1");
  }
  if (runs < 1) bad("runs", "must be >= 1");
  if (max_iterations < 0) bad("max_iterations", "must be >= 0");
}

SweepConfig parse_sweep_config(std::string_view json_text) {
  const json doc = parse_json(json_text);
  FieldReader r(doc, "");
  SweepConfig cfg;
  if (const json* ratios = r.child("ratios")) {
    cfg.ratios.clear();
    try {
      for (const json& pair : *ratios) {
        const auto dims = pair.get<std::vector<int>>();
        if (dims.size() != 2) fail(ErrorCode::kConfigError, "config field 'ratios': use [N, N_B]");
        cfg.ratios.push_back({log2_exact(dims[0], "ratios"), log2_exact(dims[1], "ratios")});
      }
    } catch (const json::exception& e) {
      fail(ErrorCode::kConfigError, std::string("config field 'ratios': ") + e.what());
    }
  }
  r.get("q_values", cfg.q_values);
  r.get("runs", cfg.runs);
  r.get("seed", cfg.seed);
  r.get("max_iterations", cfg.max_iterations);
  std::string dist(to_string(cfg.state_distribution));
  std::string two(to_string(cfg.two_qubit_algorithm));
  std::string three(to_string(cfg.three_qubit_algorithm));
  r.get("state_distribution", dist);
  r.get("two_qubit_algorithm", two);
  r.get("three_qubit_algorithm", three);
  r.reject_unknown();
  cfg.state_distribution = parse_distribution(dist);
  cfg.two_qubit_algorithm = parse_algorithm(two);
  cfg.three_qubit_algorithm = parse_algorithm(three);
  cfg.validate();
  return cfg;
}

ExperimentConfig sweep_cell(const SweepConfig& cfg, const ChiRatio& ratio, int q) {
  const SystemKind system =
      ratio.total_qubits == 3 ? SystemKind::kThreeQubit : SystemKind::kTwoQubit;
  ExperimentConfig cell = default_experiment(
      system, system == SystemKind::kThreeQubit ? cfg.three_qubit_algorithm
                                                : cfg.two_qubit_algorithm);
  cell.q = q;
  cell.latent_qubits = ratio.latent_qubits;
  cell.runs = cfg.runs;
  cell.state_distribution = cfg.state_distribution;
  cell.seed = cfg.seed + 100000ULL * static_cast<std::uint64_t>(ratio.total_qubits) +
              10000ULL * static_cast<std::uint64_t>(ratio.latent_qubits) +
              100ULL * static_cast<std::uint64_t>(q);
  if (cfg.max_iterations > 0) cell.optimizer.max_iterations = cfg.max_iterations;
  return cell;
}

std::vector<SweepRow> run_sweep(const SweepConfig& cfg, int workers) {
  cfg.validate();
  std::vector<SweepRow> rows;
  for (const ChiRatio& ratio : cfg.ratios) {
    for (int q : cfg.q_values) {
      const ExperimentResult res = run_experiment(sweep_cell(cfg, ratio, q), workers);
      for (const RunRecord& r : res.summary.runs) {
        rows.push_back({ratio.num(), ratio.den(), q, r.run, r.expected, r.actual,
                        r.degree_of_success});
      }
    }
  }
  return rows;
}

void write_sweep_csv(const std::vector<SweepRow>& rows, const std::filesystem::path& path) {
  std::string text = "chi_num,chi_den,q,run,expected,actual,degree_of_success\n";
  for (const SweepRow& r : rows) {
    text += std::to_string(r.chi_num) + "," + std::to_string(r.chi_den) + "," +
            std::to_string(r.q) + "," + std::to_string(r.run) + "," + fmt(r.expected) +
            "," + fmt(r.actual) + "," + fmt(r.degree_of_success) + "\n";
  }
  write_file(path, text);
}

std::vector<SweepRow> read_sweep_csv(const std::filesystem::path& path) {
  std::vector<SweepRow> out;
  for (const auto& c :
       read_csv(path, "chi_num,chi_den,q,run,expected,actual,degree_of_success")) {
    if (c.size() != 7) fail(ErrorCode::kIoError, path.string() + ": bad row");
    out.push_back({static_cast<int>(to_long(c[0])), static_cast<int>(to_long(c[1])),
                   static_cast<int>(to_long(c[2])), static_cast<int>(to_long(c[3])),
                   to_double(c[4]), to_double(c[5]), to_double(c[6])});
  }
  return out;
}

ComplexMatrix faulty_partial_trace(const ComplexMatrix& rho, const Bipartition& part,
                                   Subsystem keep) {
  if (keep == Subsystem::kB) return partial_trace_matrix(rho, part, keep);
  // Treats A as the trailing factor: sums rho[k * N_A + p, k * N_A + p'].
  ComplexMatrix out = ComplexMatrix::Zero(part.dim_a, part.dim_a);
  for (Eigen::Index p = 0; p < part.dim_a; ++p) {
    for (Eigen::Index pp = 0; pp < part.dim_a; ++pp) {
      for (Eigen::Index k = 0; k < part.dim_b; ++k) {
        out(p, pp) += rho(k * part.dim_a + p, k * part.dim_a + pp);
      }
    }
  }
  return out;
}

bool VerifyReport::all_passed() const {
  return std::all_of(checks.begin(), checks.end(),
                     [](const CheckResult& c) { return c.passed; });
}

std::string VerifyReport::table() const {
  std::ostringstream s;
  s << "check\tstatus\tcases\tfailures\tworst\tdetail\n";
  for (const CheckResult& c : checks) {
    char worst[32];
    std::snprintf(worst, sizeof(worst), "%.3e", c.worst);
    s << c.name << '\t' << (c.passed ? "PASS" : "FAIL") << '\t' << c.cases << '\t'
      << c.failures << '\t' << worst << '\t' << c.detail << '\n';
  }
  return s.str();
}

namespace {

struct RandomTask {
  Bipartition part;
  std::vector<PureState> states;
};

RandomTask random_task(Rng& rng, int max_q = 8) {
  std::uniform_int_distribution<int> qubits(2, 3);
  const int n = qubits(rng);
  std::uniform_int_distribution<int> latent(1, n - 1);
  std::uniform_int_distribution<int> count(1, max_q);
  const int nb = latent(rng);
  RandomTask t{Bipartition::qubits(n - nb, nb), {}};
  const int q = count(rng);
  for (int i = 0; i < q; ++i) t.states.push_back(random_pure_state(t.part.total(), rng));
  return t;
}

CheckResult named(std::string name) {
  CheckResult c;
  c.name = std::move(name);
  return c;
}

void tally(CheckResult& c, double violation, double tol) {
  ++c.cases;
  c.worst = std::max(c.worst, violation);
  if (!(violation <= tol)) ++c.failures;
}

CheckResult finish(CheckResult c, std::string detail) {
  c.passed = c.failures == 0 && c.cases > 0;
  c.detail = std::move(detail);
  return c;
}

}  // namespace

VerifyReport run_verify(const VerifyOptions& opt) {
  VerifyReport report;
  Rng rng(opt.seed);

  {
    CheckResult c = named("bound_dominance");
    RandomTask t;
    double bound = 0.0;
    std::unique_ptr<TrashFidelityEvaluator> eval;
    for (int i = 0; i < opt.samples; ++i) {
      if (i % 100 == 0) {
        t = random_task(rng);
        const AutoencoderTask task(StateEnsemble::equal_weight(t.states), t.part);
        bound = compression_bound(task).bound;
        eval = std::make_unique<TrashFidelityEvaluator>(task);
      }
      const double j2 = (*eval)(random_unitary(t.part.total(), rng));
      tally(c, j2 - bound, 1e-9);
    }
    report.checks.push_back(finish(c, "J2(U) <= bound + 1e-9 for Haar U"));
  }
  {
    CheckResult c = named("bound_saturation");
    for (int i = 0; i < 200; ++i) {
      const RandomTask t = random_task(rng);
      const AutoencoderTask task(StateEnsemble::equal_weight(t.states), t.part);
      tally(c, std::abs(objective_j2(task, optimal_unitary(task)) -
                        compression_bound(task).bound), 1e-9);
    }
    report.checks.push_back(finish(c, "|J2(U*) - bound| <= 1e-9"));
  }
  {
    CheckResult c = named("householder_transfer");
    for (int i = 0; i < opt.pairs; ++i) {
      const PureState x = random_pure_state(8, rng);
      const PureState y = random_pure_state(8, rng);
      const ComplexMatrix h = householder_transfer(x, y);
      const double err = std::max((h * x.amplitudes() - y.amplitudes()).norm(),
                                  (h.adjoint() * h - identity(8)).norm());
      tally(c, err, 1e-10);
    }
    report.checks.push_back(finish(c, "||Hx - y|| and ||H^dagger H - I|| <= 1e-10"));
  }
  {
    CheckResult c = named("reduced_diagonal_identity");
    for (int i = 0; i < opt.pairs; ++i) {
      const RandomTask t = random_task(rng, 4);
      const ComplexMatrix rho =
          ensemble_density(StateEnsemble::equal_weight(t.states)).matrix();
      const ComplexMatrix rho_a = opt.partial_trace(rho, t.part, Subsystem::kA);
      double err = 0.0;
      if (rho_a.rows() != t.part.dim_a || rho_a.cols() != t.part.dim_a) {
        err = 1.0;
      } else {
        for (Eigen::Index p = 0; p < t.part.dim_a; ++p) {
          Complex direct = 0.0;
          for (Eigen::Index k = 0; k < t.part.dim_b; ++k) {
            direct += rho(p * t.part.dim_b + k, p * t.part.dim_b + k);
          }
          err = std::max(err, std::abs(rho_a(p, p) - direct));
        }
      }
      tally(c, err, 1e-12);
    }
    report.checks.push_back(finish(c, "[Tr_B rho]_pp = sum_k rho_(pk),(pk)"));
  }
  {
    CheckResult c = named("j1_le_j2");
    for (int i = 0; i < opt.fidelity_samples; ++i) {
      RandomTask t = random_task(rng, 1);
      const AutoencoderTask task(StateEnsemble::equal_weight(t.states), t.part);
      const ComplexMatrix u = random_unitary(t.part.total(), rng);
      tally(c, objective_j1(task, u, 0) - state_j2(task, u, 0), 1e-9);
    }
    report.checks.push_back(finish(c, "J1 <= J2 + 1e-9 for random (U, psi)"));
  }
  {
    CheckResult c = named("rank_criterion_sufficient");
    for (int i = 0; i < opt.tasks_per_side; ++i) {
      RandomTask t = random_task(rng);
      if (t.states.size() > static_cast<std::size_t>(t.part.dim_b)) {
        t.states.erase(t.states.begin() + t.part.dim_b, t.states.end());
      }
      const AutoencoderTask task(StateEnsemble::equal_weight(t.states), t.part);
      const bool predicted = perfect_compression_possible(task);
      const double gap = 1.0 - objective_j2(task, optimal_unitary(task));
      tally(c, predicted ? gap : 1.0, 1e-9);
    }
    report.checks.push_back(finish(c, "rank <= N_B gives J2(U*) = 1"));
  }
  {
    CheckResult c = named("rank_criterion_necessary");
    for (int i = 0; i < opt.tasks_per_side; ++i) {
      std::uniform_int_distribution<int> qubits(2, 3);
      const int n = qubits(rng);
      std::uniform_int_distribution<int> latent(1, n - 1);
      const int nb_q = latent(rng);
      const Bipartition part = Bipartition::qubits(n - nb_q, nb_q);
      std::uniform_int_distribution<int> count(static_cast<int>(part.dim_b) + 1,
                                               static_cast<int>(part.total()));
      const int q = count(rng);
      const ComplexMatrix basis = random_unitary(part.total(), rng);
      std::vector<PureState> states;
      for (int k = 0; k < q; ++k) states.emplace_back(basis.col(k));
      const AutoencoderTask task(StateEnsemble::equal_weight(states), part);
      const double expected = static_cast<double>(part.dim_b) / q;
      double err = std::abs(compression_bound(task).bound - expected);
      if (perfect_compression_possible(task) || !(expected < 1.0)) err = 1.0;
      tally(c, err, 1e-12);
    }
    report.checks.push_back(finish(c, "orthonormal Q > N_B gives bound N_B/Q < 1"));
  }
  {
    CheckResult c = named("linear_combination");
    for (int i = 0; i < opt.tasks_per_side; ++i) {
      RandomTask t = random_task(rng);
      if (t.states.size() > static_cast<std::size_t>(t.part.dim_b)) {
        t.states.erase(t.states.begin() + t.part.dim_b, t.states.end());
      }
      const AutoencoderTask task(StateEnsemble::equal_weight(t.states), t.part);
      const ComplexMatrix u = optimal_unitary(task);
      ComplexVector coeffs(static_cast<Eigen::Index>(t.states.size()));
      std::normal_distribution<double> g(0.0, 1.0);
      for (Eigen::Index k = 0; k < coeffs.size(); ++k) coeffs[k] = Complex(g(rng), g(rng));
      tally(c, 1.0 - linear_combination_property_check(task, u, coeffs), 1e-8);
    }
    report.checks.push_back(finish(c, "combinations of compressed inputs stay compressed"));
  }
  {
    CheckResult c = named("objective_two_paths");
    for (int i = 0; i < opt.tasks_per_side; ++i) {
      const RandomTask t = random_task(rng);
      const AutoencoderTask task(StateEnsemble::equal_weight(t.states), t.part);
      const ComplexMatrix u = random_unitary(t.part.total(), rng);
      tally(c, std::abs(objective_j2(task, u) - objective_j2_averaged(task, u)), 1e-10);
    }
    report.checks.push_back(finish(c, "density and per-state J2 agree within 1e-10"));
  }
  return report;
}

}  // namespace qae
