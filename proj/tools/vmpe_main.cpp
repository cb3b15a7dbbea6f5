// Copyright 2026 The vmpe Authors
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

// Command-line front end: run, evaluate, pool-info, bound, verify, bench.
//
// Exit status: 0 on success, 1 on configuration or input errors, 2 on runtime
// failures (propagation blow-up, failed verification).

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "vmpe/adapt.hpp"
#include "vmpe/bench.hpp"
#include "vmpe/circuit.hpp"
#include "vmpe/exact.hpp"
#include "vmpe/hamiltonian.hpp"
#include "vmpe/overlap.hpp"
#include "vmpe/pool.hpp"
#include "vmpe/propagation.hpp"
#include "vmpe/verify.hpp"

namespace fs = std::filesystem;
using namespace vmpe;

namespace {

constexpr int kExitInput = 1;
constexpr int kExitRuntime = 2;

// Raised for failures that should map to the runtime exit status.
class RuntimeFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string read_text(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw std::invalid_argument("cannot write '" + path.string() + "'");
  out << text;
}

fs::path prepare_out_dir(const std::string& dir) {
  fs::path p(dir);
  std::error_code ec;
  fs::create_directories(p, ec);
  if (ec || !fs::is_directory(p)) {
    throw std::invalid_argument("output directory '" + dir + "' is not usable");
  }
  return p;
}

std::optional<int> parse_cutoff(const std::string& s) {
  if (s == "exact") return std::nullopt;
  size_t used = 0;
  int c = 0;
  try {
    c = std::stoi(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != s.size()) throw std::invalid_argument("bad cutoff '" + s + "'");
  return c;
}

TruncationPolicy policy_for(std::optional<int> cutoff, int n_modes) {
  return TruncationPolicy::length(cutoff.value_or(2 * n_modes));
}

// Flags shared by subcommands that load a Hamiltonian and a run configuration.
struct Common {
  std::string config;
  std::string fcidump;
  std::string out;
  std::string cutoff;
  std::string picture;
  std::optional<int> iterations;
  std::string selection;
  std::optional<size_t> trim_tau;
  std::optional<int> trim_kappa;
  std::optional<int> threads;
  std::optional<uint64_t> seed;
  bool no_timing = false;

  RunConfig resolve() const {
    RunConfig cfg;
    if (!config.empty()) cfg = run_config_from_json(read_text(config));
    if (!cutoff.empty()) cfg.cutoff = parse_cutoff(cutoff);
    if (!picture.empty()) cfg.picture = picture_from_string(picture);
    if (iterations) cfg.max_iterations = *iterations;
    if (!selection.empty()) cfg.selection = selection_mode_from_string(selection);
    if (trim_tau) cfg.trim_tau = *trim_tau;
    if (trim_kappa) cfg.trim_kappa = *trim_kappa;
    if (threads) cfg.threads = *threads;
    if (seed) cfg.seed = *seed;
    cfg.validate();
    return cfg;
  }
};

void add_config_flags(CLI::App* app, Common& c) {
  app->add_option("--config", c.config, "run configuration JSON")->check(CLI::ExistingFile);
  app->add_option("--cutoff", c.cutoff, "length cutoff (even integer or 'exact')");
  app->add_option("--picture", c.picture, "heisenberg or schrodinger");
  app->add_option("--iterations", c.iterations, "maximum greedy iterations");
  app->add_option("--selection", c.selection, "gradient, ggf or mixed");
  app->add_option("--trim-tau", c.trim_tau, "candidates kept between refreshes (0 = off)");
  app->add_option("--trim-kappa", c.trim_kappa, "full-pool refresh period");
  app->add_option("--threads", c.threads, "worker threads (0 = auto)");
  app->add_option("--seed", c.seed, "seed for stochastic choices");
}

int cmd_run(const Common& c, bool dress) {
  RunConfig cfg = c.resolve();
  MolecularIntegrals ints = read_fcidump_file(c.fcidump);
  fs::path out = prepare_out_dir(c.out);

  std::ofstream csv(out / "trajectory.csv");
  if (!csv) throw std::invalid_argument("cannot write trajectory.csv");
  RunResult r = run_adapt(ints, cfg, [](const IterationRecord& row) {
    std::fprintf(stderr, "iter %3d  E = %.12f  %s\n", row.iteration, row.energy,
                 row.label.c_str());
  });
  write_trajectory_csv(csv, r.trajectory, !c.no_timing);
  write_text(out / "circuit.json", circuit_to_json(r.circuit));
  write_text(out / "config.json", run_config_to_json(cfg) + "\n");
  if (dress) {
    MolecularIntegrals dressed = dress_integrals(ints, r.circuit.orbital_rotations());
    std::ofstream f(out / "dressed.fcidump");
    if (!f) throw std::invalid_argument("cannot write dressed.fcidump");
    write_fcidump(f, dressed);
  }
  std::printf("%s\n", r.stop_reason.c_str());
  if (!r.trajectory.empty()) {
    std::printf("final energy %.12f after %d iterations\n", r.trajectory.back().energy,
                r.trajectory.back().iteration);
  }
  if (r.aborted) throw RuntimeFailure(r.stop_reason);
  return 0;
}

struct LoadedCircuit {
  FermionicCircuit circuit;
  SparseOperator hamiltonian;
  std::vector<Gate> gates;
};

LoadedCircuit load_circuit(const std::string& fcidump, const std::string& circuit_path) {
  LoadedCircuit lc;
  MolecularIntegrals ints = read_fcidump_file(fcidump);
  lc.circuit = circuit_from_json(read_text(circuit_path));
  if (lc.circuit.n_spatial != ints.n_spatial) {
    throw std::invalid_argument("circuit and FCIDUMP orbital counts differ");
  }
  lc.hamiltonian = majorana_hamiltonian(ints, lc.circuit.ordering);
  lc.gates = lc.circuit.gates();
  return lc;
}

int cmd_evaluate(const Common& c, const std::string& circuit_path, const std::string& cutoffs,
                 bool oracle) {
  LoadedCircuit lc = load_circuit(c.fcidump, circuit_path);
  const Picture picture = c.picture.empty() ? Picture::kHeisenberg : picture_from_string(c.picture);
  const int n = lc.circuit.n_modes();

  std::vector<std::optional<int>> cs;
  std::stringstream ss(cutoffs);
  for (std::string item; std::getline(ss, item, ',');) cs.push_back(parse_cutoff(item));
  if (cs.empty()) throw std::invalid_argument("no cutoffs given");
  for (const auto& cut : cs) policy_for(cut, n).validate();

  std::optional<double> exact_energy;
  if (oracle && n <= exact::kMaxModes) {
    exact::State psi = exact::evolve(lc.circuit.reference, lc.gates, lc.circuit.params);
    exact_energy = exact::expectation(lc.hamiltonian, psi);
  }
  std::printf("# format_version=1\n");
  std::printf(exact_energy ? "cutoff,energy,delta_previous,oracle_energy,oracle_error\n"
                           : "cutoff,energy,delta_previous\n");
  std::optional<double> prev;
  for (const auto& cut : cs) {
    double e = expectation(lc.hamiltonian, lc.gates, lc.circuit.params, lc.circuit.reference,
                           policy_for(cut, n), picture);
    std::string label = cut ? std::to_string(*cut) : "exact";
    std::printf("%s,%.17g,", label.c_str(), e);
    if (prev) std::printf("%.17g", e - *prev);
    if (exact_energy) std::printf(",%.17g,%.17g", *exact_energy, std::abs(e - *exact_energy));
    std::printf("\n");
    prev = e;
  }
  return 0;
}

int cmd_pool_info(const Common& c, std::optional<int> occupied, std::optional<int> virt,
                  const PoolOptions& opts, bool reduce) {
  int n_spatial = 0, n_alpha = 0, n_beta = 0;
  if (!c.fcidump.empty()) {
    MolecularIntegrals ints = read_fcidump_file(c.fcidump);
    n_spatial = ints.n_spatial;
    n_alpha = ints.n_alpha();
    n_beta = ints.n_beta();
  } else if (occupied && virt) {
    n_spatial = *occupied + *virt;
    n_alpha = n_beta = *occupied;
  } else {
    throw std::invalid_argument("pool-info needs --fcidump or both --occupied and --virtual");
  }
  Pool pool = build_majoranic_pool(n_spatial, n_alpha, n_beta, opts);
  if (reduce) pool = reduce_pool(pool);
  std::printf("modes %d\n", pool.n_modes);
  std::printf("singles %zu\n", pool.count(ExcitationKind::kSingle));
  std::printf("same_spin_doubles %zu\n", pool.count(ExcitationKind::kSameSpinDouble));
  std::printf("opposite_spin_doubles %zu\n", pool.count(ExcitationKind::kOppositeSpinDouble));
  std::printf("total %zu\n", pool.size());
  return 0;
}

struct BoundArgs {
  std::string circuit;
  std::string spectral;
  std::optional<double> lambda2;
  std::optional<double> lambda_p;
  std::string convention;
};

int cmd_bound(const Common& c, const BoundArgs& b) {
  LoadedCircuit lc = load_circuit(c.fcidump, b.circuit);
  MolecularIntegrals ints = read_fcidump_file(c.fcidump);
  const int n = lc.circuit.n_modes();
  std::optional<int> cut = c.cutoff.empty() ? std::nullopt : parse_cutoff(c.cutoff);
  const TruncationPolicy pol = policy_for(cut, n);
  pol.validate();
  const Picture picture = c.picture.empty() ? Picture::kHeisenberg : picture_from_string(c.picture);

  nlohmann::json side;
  try {
    side = nlohmann::json::parse(read_text(b.spectral));
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("spectral sidecar: ") + e.what());
  }
  for (const auto& [k, v] : side.items()) {
    if (k != "e0" && k != "s1" && k != "s1_top") {
      throw std::invalid_argument("spectral sidecar: unknown key '" + k + "'");
    }
  }
  if (!side.contains("e0") || !side.contains("s1")) {
    throw std::invalid_argument("spectral sidecar needs e0 and s1");
  }
  const double e0 = side["e0"].get<double>();
  const double s1 = side["s1"].get<double>();
  std::optional<double> s1_top;
  if (side.contains("s1_top")) s1_top = side["s1_top"].get<double>();

  PenaltyOptions po;
  po.ordering = lc.circuit.ordering;
  if (b.lambda2) po.lambda2 = *b.lambda2;
  po.lambda_p = b.lambda_p;
  if (!b.convention.empty()) po.convention = lambda_p_convention_from_string(b.convention);
  PenaltyHamiltonian hp = build_penalty_hamiltonian(ints.n_spatial, ints.n_electrons, po);

  const double e = expectation(lc.hamiltonian, lc.gates, lc.circuit.params,
                               lc.circuit.reference, pol, picture);
  const double p = expectation(hp.op, lc.gates, lc.circuit.params, lc.circuit.reference, pol,
                               picture);

  nlohmann::json j;
  j["format_version"] = 1;
  j["cutoff"] = cut ? nlohmann::json(*cut) : nlohmann::json("exact");
  j["energy"] = e;
  j["penalty"] = p;
  j["lambda2"] = hp.lambda2;
  j["lambda_p"] = hp.lambda_p;
  auto put = [&](const char* name, const OverlapBound& ob) {
    j["bounds"][name] = {{"raw", ob.raw}, {"value", ob.value}};
  };
  auto skip = [&](const char* name, const std::string& why) { j["bounds"][name] = {{"skipped", why}}; };
  if (s1_top) {
    put("simple", lower_bound_simple(e, e0, std::min(s1, *s1_top)));
    if (p <= hp.lambda2) {
      put("penalty", lower_bound_penalty({e0, s1, *s1_top, hp.lambda2, hp.lambda_p, p, e}));
    } else {
      skip("penalty", "penalty expectation exceeds lambda2");
    }
    put("unknown_gap", lower_bound_unknown_gap(e, e0, s1, p, hp.lambda2, *s1_top < s1));
  } else {
    skip("simple", "s1_top not given");
    skip("penalty", "s1_top not given");
    put("unknown_gap", lower_bound_unknown_gap(e, e0, s1, p, hp.lambda2, true));
  }
  std::printf("%s\n", j.dump(2).c_str());
  return 0;
}

int cmd_verify(int n_modes, int instances, uint64_t seed) {
  if (n_modes > exact::kMaxModes) {
    throw std::invalid_argument("verify needs at most " + std::to_string(exact::kMaxModes) +
                                " modes for the dense oracle; pass a smaller --modes");
  }
  if (n_modes < 4 || n_modes % 2 != 0) throw std::invalid_argument("--modes must be even and >= 4");
  bool ok = true;
  auto line = [&](const char* name, const verify::ErrorStats& s, double tol) {
    bool pass = s.max_error <= tol;
    ok = ok && pass;
    std::printf("%s %-24s max %.3e mean %.3e over %d (tol %.0e)\n", pass ? "PASS" : "FAIL", name,
                s.max_error, s.mean_error, s.count, tol);
  };
  line("oracle-equivalence", verify::oracle_equivalence(n_modes, instances, 20, seed), 1e-10);
  for (int c : {4, 6}) {
    std::string name = "picture-equivalence-c" + std::to_string(c);
    line(name.c_str(), verify::picture_equivalence(n_modes, instances, 20, c, seed), 1e-12);
  }
  line("gradient", verify::gradient_check(n_modes, instances, 12, 4, 1e-5, 1e-12, seed), 1e-6);
  if (!ok) throw RuntimeFailure("verification failed");
  return 0;
}

int cmd_bench(const std::string& out, uint64_t seed, double min_seconds) {
  std::vector<bench::Row> rows;
  for (const auto& c : bench::default_suite()) rows.push_back(bench::run_case(c, seed, min_seconds));
  if (out.empty()) {
    bench::write_csv(std::cout, rows);
  } else {
    std::ofstream f(out);
    if (!f) throw std::invalid_argument("cannot write '" + out + "'");
    bench::write_csv(f, rows);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Majorana propagation energy estimation and greedy circuit construction"};
  app.require_subcommand(1);

  Common common;

  auto* run = app.add_subcommand("run", "greedy circuit construction");
  add_config_flags(run, common);
  run->add_option("--fcidump", common.fcidump, "input integrals")->required();
  run->add_option("--out", common.out, "output directory")->required();
  run->add_flag("--no-timing", common.no_timing, "leave the seconds column empty");
  bool dress = false;
  run->add_flag("--dress", dress, "also write integrals dressed by the final rotations");

  auto* evaluate = app.add_subcommand("evaluate", "energy of a saved circuit at several cutoffs");
  std::string circuit_path, cutoffs = "4,6,8";
  bool no_oracle = false;
  evaluate->add_option("--fcidump", common.fcidump, "input integrals")->required();
  evaluate->add_option("--circuit", circuit_path, "circuit JSON")->required();
  evaluate->add_option("--cutoffs", cutoffs, "comma-separated cutoffs");
  evaluate->add_option("--picture", common.picture, "heisenberg or schrodinger");
  evaluate->add_flag("--no-oracle", no_oracle, "skip the dense oracle column");

  auto* pool_info = app.add_subcommand("pool-info", "pool sizes");
  std::optional<int> occupied, virt;
  PoolOptions pool_opts;
  bool reduce = false;
  pool_info->add_option("--fcidump", common.fcidump, "take orbital counts from integrals");
  pool_info->add_option("--occupied", occupied, "occupied orbitals per spin sector");
  pool_info->add_option("--virtual", virt, "virtual orbitals per spin sector");
  pool_info->add_flag("--all-pairs", pool_opts.all_pairs, "excitations between all orbitals");
  pool_info->add_flag("--expand-classes", pool_opts.expand_classes, "list every class member");
  pool_info->add_flag("--reduce", reduce, "one representative per class");

  auto* bound = app.add_subcommand("bound", "ground-state overlap lower bounds");
  BoundArgs bargs;
  bound->add_option("--fcidump", common.fcidump, "input integrals")->required();
  bound->add_option("--circuit", bargs.circuit, "circuit JSON")->required();
  bound->add_option("--spectral", bargs.spectral, "JSON with e0, s1 and optional s1_top")
      ->required();
  bound->add_option("--cutoff", common.cutoff, "length cutoff (default exact)");
  bound->add_option("--picture", common.picture, "heisenberg or schrodinger");
  bound->add_option("--lambda2", bargs.lambda2, "lower bound on the penalty gap");
  bound->add_option("--lambda-p", bargs.lambda_p, "upper bound on the penalty spectrum");
  bound->add_option("--lambda-p-convention", bargs.convention, "spin-orbitals or spatial-orbitals");

  auto* verify_cmd = app.add_subcommand("verify", "oracle cross-checks at a given mode count");
  int modes = 8, instances = 10;
  uint64_t seed = 1;
  verify_cmd->add_option("--modes", modes, "spin-orbitals");
  verify_cmd->add_option("--instances", instances, "random instances per check");
  verify_cmd->add_option("--seed", seed, "instance seed");

  auto* bench_cmd = app.add_subcommand("bench", "timing CSV for the benchmark suite");
  std::string bench_out;
  double min_seconds = 0.2;
  bench_cmd->add_option("--out", bench_out, "CSV path (default stdout)");
  bench_cmd->add_option("--seed", seed, "instance seed");
  bench_cmd->add_option("--min-seconds", min_seconds, "timing window per measurement");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : kExitInput;
  }

  try {
    if (*run) return cmd_run(common, dress);
    if (*evaluate) return cmd_evaluate(common, circuit_path, cutoffs, !no_oracle);
    if (*pool_info) return cmd_pool_info(common, occupied, virt, pool_opts, reduce);
    if (*bound) return cmd_bound(common, bargs);
    if (*verify_cmd) return cmd_verify(modes, instances, seed);
    if (*bench_cmd) return cmd_bench(bench_out, seed, min_seconds);
  } catch (const RuntimeFailure& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitRuntime;
  } catch (const std::invalid_argument& e) {  // includes ConfigError
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitInput;
  } catch (const FcidumpError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitInput;
  } catch (const PropagationBlowup& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitRuntime;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitRuntime;
  }
  return 0;
}
