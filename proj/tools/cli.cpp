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


#include "cli.hpp"

#include <cstdio>
#include <fstream>
#include <filesystem>
#include <map>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "qae/autoencoder.hpp"
#include "qae/error.hpp"
#include "qae/harness.hpp"

namespace qae::cli {

namespace {

using nlohmann::json;

std::string read_text(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::kConfigError, "cannot read " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

// Lowest set bit position of a power of two, or -1.
int log2_exact(int n) {
  if (n < 1 || (n & (n - 1)) != 0) return -1;
  int k = 0;
  while ((1 << k) < n) ++k;
  return k;
}

// State file: {"states": [[[re, im], ...], ...], "weights": [...]} with
// weights optional (equal by default).
StateEnsemble load_states(const std::string& path) {
  json doc;
  try {
    doc = json::parse(read_text(path));
  } catch (const json::exception& e) {
    fail(ErrorCode::kConfigError, path + ": " + e.what());
  }
  if (!doc.contains("states") || !doc["states"].is_array() || doc["states"].empty()) {
    fail(ErrorCode::kConfigError, path + ": field 'states' must be a non-empty array");
  }
  std::vector<PureState> states;
  try {
    for (const json& s : doc["states"]) {
      ComplexVector v(static_cast<Eigen::Index>(s.size()));
      for (std::size_t i = 0; i < s.size(); ++i) {
        const json& a = s[i];
        v[static_cast<Eigen::Index>(i)] =
            a.is_array() ? Complex(a.at(0).get<double>(), a.at(1).get<double>())
                         : Complex(a.get<double>(), 0.0);
      }
      states.push_back(PureState::normalized(v));
    }
    if (doc.contains("weights")) {
      return StateEnsemble(std::move(states), doc["weights"].get<std::vector<double>>());
    }
  } catch (const json::exception& e) {
    fail(ErrorCode::kConfigError, path + ": " + e.what());
  } catch (const QaeError& e) {
    fail(ErrorCode::kConfigError, path + ": " + e.what());
  }
  return StateEnsemble::equal_weight(std::move(states));
}

struct BoundArgs {
  bool orthonormal = false;
  int q = 2;
  int dim = 4;
  int latent_dim = 2;
  std::uint64_t seed = 1;
  std::string states;
  std::string distribution = "uniform_real";
};

int cmd_bound(const BoundArgs& a, std::ostream& out) {
  std::vector<PureState> states;
  StateEnsemble ensemble = [&] {
    if (!a.states.empty()) return load_states(a.states);
    if (a.q < 1) fail(ErrorCode::kConfigError, "--q must be >= 1");
    if (a.orthonormal) {
      if (a.q > a.dim) fail(ErrorCode::kConfigError, "--orthonormal needs q <= dim");
      for (int i = 0; i < a.q; ++i) states.push_back(PureState::basis(a.dim, i));
    } else {
      const StateDistribution dist = parse_distribution(a.distribution);
      Rng rng(a.seed);
      for (int i = 0; i < a.q; ++i) {
        states.push_back(dist == StateDistribution::kHaar
                             ? random_pure_state(a.dim, rng)
                             : random_positive_state(a.dim, rng));
      }
    }
    return StateEnsemble::equal_weight(states);
  }();
  const Eigen::Index dim = ensemble.dim();
  if (a.latent_dim < 1 || dim % a.latent_dim != 0) {
    fail(ErrorCode::kConfigError, "--latent-dim must divide the state dimension");
  }
  const AutoencoderTask task(ensemble, Bipartition(dim / a.latent_dim, a.latent_dim));
  const CompressionBound b = compression_bound(task);
  out << "dim " << dim << " latent_dim " << a.latent_dim << " q " << ensemble.size()
      << "\nspectrum";
  for (Eigen::Index i = 0; i < b.spectrum.size(); ++i) out << ' ' << num(b.spectrum[i]);
  out << "\nbound " << num(b.bound) << '\n';
  return kOk;
}

struct TrainArgs {
  std::string config;
  std::string system;
  std::string algo;
  int q = 0;
  int latent = 0;
  int runs = 0;
  int optical_case = 0;
  int iterations = 0;
  bool shot_noise = false;
  std::uint64_t seed = 0;
  std::string out_dir = "qae_out";
  int threads = 0;
};

void print_summary(const RunSummary& s, std::ostream& out) {
  out << "run\texpected\tactual\tdegree_of_success\tj1_mean\titerations\n";
  for (const RunRecord& r : s.runs) {
    out << r.run << '\t' << num(r.expected) << '\t' << num(r.actual) << '\t'
        << num(r.degree_of_success) << '\t' << num(r.j1_mean) << '\t' << r.iterations
        << '\n';
  }
  out << "mean\t" << num(s.expected.mean) << '\t' << num(s.actual.mean) << '\t'
      << num(s.degree_of_success.mean) << '\t' << num(s.j1_mean.mean) << '\n';
  out << "std\t" << num(s.expected.std) << '\t' << num(s.actual.std) << '\t'
      << num(s.degree_of_success.std) << '\t' << num(s.j1_mean.std) << '\n';
}

int cmd_train(const TrainArgs& a, std::ostream& out) {
  ExperimentConfig cfg;
  if (!a.config.empty()) {
    cfg = load_experiment_config(a.config);
    if (!a.system.empty() || !a.algo.empty()) {
      const SystemKind sys = a.system.empty() ? cfg.system : parse_system(a.system);
      const Algorithm alg =
          a.algo.empty() ? cfg.optimizer.algorithm : parse_algorithm(a.algo);
      if (sys != cfg.system || alg != cfg.optimizer.algorithm) {
        cfg.system = sys;
        cfg.optimizer = default_experiment(sys, alg).optimizer;
      }
    }
  } else {
    cfg = default_experiment(parse_system(a.system.empty() ? "two_qubit" : a.system),
                             parse_algorithm(a.algo.empty() ? "gd" : a.algo));
    if (cfg.system == SystemKind::kOptical) cfg.runs = 1;
  }
  if (a.q > 0) cfg.q = a.q;
  if (a.latent > 0) cfg.latent_qubits = a.latent;
  if (a.runs > 0) cfg.runs = a.runs;
  if (a.optical_case > 0) cfg.optical_case = a.optical_case;
  if (a.iterations > 0) cfg.optimizer.max_iterations = a.iterations;
  if (a.shot_noise) cfg.shot_noise = true;
  if (a.seed > 0) cfg.seed = a.seed;
  try {
    cfg.validate();
  } catch (const QaeError& e) {
    fail(ErrorCode::kConfigError, e.what());
  }
  const ExperimentResult res = run_experiment(cfg, a.threads);
  print_summary(res.summary, out);
  if (!a.out_dir.empty()) {
    write_experiment(res, a.out_dir);
    out << "wrote " << a.out_dir << '\n';
  }
  return kOk;
}

struct SweepArgs {
  std::string config;
  std::string ratios;
  std::string q_values;
  int runs = 0;
  int iterations = 0;
  std::uint64_t seed = 0;
  std::string out_dir = "qae_out";
  int threads = 0;
};

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, sep)) {
    if (!item.empty()) parts.push_back(item);
  }
  return parts;
}

int to_int(const std::string& text, const std::string& what) {
  try {
    std::size_t used = 0;
    const int v = std::stoi(text, &used);
    if (used == text.size()) return v;
  } catch (const std::exception&) {
  }
  fail(ErrorCode::kConfigError, what + ": '" + text + "' is not an integer");
}

int cmd_sweep(const SweepArgs& a, std::ostream& out) {
  SweepConfig cfg;
  if (!a.config.empty()) cfg = parse_sweep_config(read_text(a.config));
  if (!a.ratios.empty()) {
    cfg.ratios.clear();
    for (const std::string& r : split(a.ratios, ',')) {
      const std::vector<std::string> nd = split(r, '/');
      if (nd.size() != 2) fail(ErrorCode::kConfigError, "--ratios expects N/N_B items");
      const int n = log2_exact(to_int(nd[0], "--ratios"));
      const int nb = log2_exact(to_int(nd[1], "--ratios"));
      if (n < 0 || nb < 0) {
        fail(ErrorCode::kConfigError, "--ratios dimensions must be powers of two");
      }
      cfg.ratios.push_back({n, nb});
    }
  }
  if (!a.q_values.empty()) {
    cfg.q_values.clear();
    for (const std::string& q : split(a.q_values, ',')) {
      cfg.q_values.push_back(to_int(q, "--q-values"));
    }
  }
  if (a.runs > 0) cfg.runs = a.runs;
  if (a.iterations > 0) cfg.max_iterations = a.iterations;
  if (a.seed > 0) cfg.seed = a.seed;
  cfg.validate();

  const std::vector<SweepRow> rows = run_sweep(cfg, a.threads);
  std::map<std::tuple<int, int, int>, std::vector<double>> actual, expected;
  for (const SweepRow& r : rows) {
    actual[{r.chi_num, r.chi_den, r.q}].push_back(r.actual);
    expected[{r.chi_num, r.chi_den, r.q}].push_back(r.expected);
  }
  out << "chi\tq\texpected_mean\tactual_mean\tactual_std\n";
  for (const auto& [key, values] : actual) {
    const auto& [n, nb, q] = key;
    const Aggregate act = aggregate(values);
    out << n << '/' << nb << '\t' << q << '\t' << num(aggregate(expected[key]).mean)
        << '\t' << num(act.mean) << '\t' << num(act.std) << '\n';
  }
  if (!a.out_dir.empty()) {
    std::filesystem::create_directories(a.out_dir);
    const std::filesystem::path path = std::filesystem::path(a.out_dir) / "sweep.csv";
    write_sweep_csv(rows, path);
    out << "wrote " << path.string() << '\n';
  }
  return kOk;
}

struct VerifyArgs {
  VerifyOptions options;
  bool faulty = false;
};

int cmd_verify(VerifyArgs a, std::ostream& out) {
  if (a.faulty) a.options.partial_trace = faulty_partial_trace;
  const VerifyReport report = run_verify(a.options);
  out << report.table();
  out << (report.all_passed() ? "verify: PASS\n" : "verify: FAIL\n");
  return report.all_passed() ? kOk : kCheckFailed;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Quantum autoencoder training and analysis"};
  app.require_subcommand(1);

  BoundArgs bound;
  CLI::App* b = app.add_subcommand("bound", "Print the compression bound of an ensemble");
  b->add_flag("--orthonormal", bound.orthonormal, "Use q computational basis states");
  b->add_option("--q", bound.q, "Number of input states");
  b->add_option("--dim", bound.dim, "State dimension N");
  b->add_option("--latent-dim", bound.latent_dim, "Latent dimension N_B");
  b->add_option("--seed", bound.seed, "Seed for random states");
  b->add_option("--states", bound.states, "JSON state file");
  b->add_option("--distribution", bound.distribution, "uniform_real or haar");
  std::string unused_dir;
  b->add_option("--out-dir", unused_dir, "Ignored; accepted for uniformity");
  std::string unused_config;
  b->add_option("--config", unused_config, "Ignored; accepted for uniformity");

  TrainArgs train;
  CLI::App* t = app.add_subcommand("train", "Train encoders for random ensembles");
  t->add_option("--config", train.config, "Experiment config (JSON)");
  t->add_option("--system", train.system, "two-qubit, three-qubit or optical");
  t->add_option("--algo", train.algo, "gd, ga, de or es");
  t->add_option("--q", train.q, "Number of input states");
  t->add_option("--latent", train.latent, "Latent qubits");
  t->add_option("--runs", train.runs, "Independent runs");
  t->add_option("--case", train.optical_case, "Optical input case (1 or 2)");
  t->add_option("--iterations", train.iterations, "Override the iteration budget");
  t->add_flag("--shot-noise", train.shot_noise, "Poisson counting noise (optical)");
  t->add_option("--seed", train.seed, "Base seed");
  t->add_option("--out-dir", train.out_dir, "Output directory");
  t->add_option("--threads", train.threads, "Worker threads (0 = auto)");

  SweepArgs sweep;
  CLI::App* s = app.add_subcommand("sweep", "Compression-ratio sweep over Q");
  s->add_option("--config", sweep.config, "Sweep config (JSON)");
  s->add_option("--ratios", sweep.ratios, "Comma list of N/N_B, e.g. 4/2,8/4,8/2");
  s->add_option("--q-values", sweep.q_values, "Comma list of Q values");
  s->add_option("--runs", sweep.runs, "Runs per cell");
  s->add_option("--iterations", sweep.iterations, "Override the iteration budget");
  s->add_option("--seed", sweep.seed, "Base seed");
  s->add_option("--out-dir", sweep.out_dir, "Output directory");
  s->add_option("--threads", sweep.threads, "Worker threads (0 = auto)");

  VerifyArgs verify;
  CLI::App* v = app.add_subcommand("verify", "Run the invariant checks");
  v->add_option("--samples", verify.options.samples, "Bound-dominance unitaries");
  v->add_option("--pairs", verify.options.pairs, "Householder pairs / density matrices");
  v->add_option("--fidelity-samples", verify.options.fidelity_samples,
                "J1 <= J2 samples");
  v->add_option("--tasks", verify.options.tasks_per_side, "Rank-criterion tasks per side");
  v->add_option("--seed", verify.options.seed, "Seed");
  v->add_flag("--inject-faulty-partial-trace", verify.faulty,
              "Negative control: swap in a wrong partial trace");
  std::string verify_dir;
  v->add_option("--out-dir", verify_dir, "Also write verify.tsv here");
  std::string verify_config;
  v->add_option("--config", verify_config, "Ignored; accepted for uniformity");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kConfig;
  }

  try {
    if (*b) return cmd_bound(bound, out);
    if (*t) return cmd_train(train, out);
    if (*s) return cmd_sweep(sweep, out);
    std::ostringstream text;
    const int code = cmd_verify(verify, text);
    out << text.str();
    if (!verify_dir.empty()) {
      std::filesystem::create_directories(verify_dir);
      std::ofstream(std::filesystem::path(verify_dir) / "verify.tsv") << text.str();
    }
    return code;
  } catch (const QaeError& e) {
    err << "error: " << e.what() << '\n';
    switch (e.code()) {
      case ErrorCode::kConfigError:
      case ErrorCode::kInvalidArgument:
      case ErrorCode::kIoError:
        return kConfig;
      default:
        return kNumerical;
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kNumerical;
  }
}

}  // namespace qae::cli
