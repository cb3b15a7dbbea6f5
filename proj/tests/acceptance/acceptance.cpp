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

// Prints one PASS/FAIL line per acceptance criterion and exits nonzero if
// any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <numbers>
#include <string>

#include <json.hpp>

#include "vmpe/adapt.hpp"
#include "vmpe/bench.hpp"
#include "vmpe/exact.hpp"
#include "vmpe/instances.hpp"
#include "vmpe/pool.hpp"
#include "vmpe/surrogate.hpp"
#include "vmpe/verify.hpp"

namespace {

using namespace vmpe;

constexpr double kPi = std::numbers::pi;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

// 1. Engine at cutoff 2N against the state vector.
Outcome oracle_equivalence() {
  constexpr double kTol = 1e-10;
  verify::ErrorStats all;
  int count = 0;
  const int modes[] = {8, 10, 12};
  for (int i = 0; i < 3; ++i) {
    int n = i == 2 ? 16 : 17;
    auto s = verify::oracle_equivalence(modes[i], n, 20, 1000 + 100 * i);
    all.max_error = std::max(all.max_error, s.max_error);
    count += s.count;
  }
  return {count == 50 && all.max_error < kTol,
          fmt("max |E - E_dense| = %.2e over %d instances (tol %.0e)", all.max_error, count, kTol)};
}

// 2. Mean truncation error over cutoffs 2, 4, 6, 8.
Outcome cutoff_decay() {
  const std::vector<int> cutoffs = {2, 4, 6, 8};
  auto err = verify::cutoff_errors(10, 30, 20, cutoffs, 2000);
  bool decreasing = true;
  double ratio = 0.0;
  for (size_t k = 1; k < err.size(); ++k) {
    decreasing = decreasing && err[k] < err[k - 1];
    ratio += err[k] / err[k - 1] / (err.size() - 1);
  }
  return {decreasing && ratio < 0.5,
          fmt("mean errors %.3e %.3e %.3e %.3e, decreasing=%s, mean ratio %.3f (need < 0.5)",
              err[0], err[1], err[2], err[3], decreasing ? "yes" : "no", ratio)};
}

// 3. Heisenberg and Schrodinger expectations under the same truncation.
Outcome picture_equivalence() {
  constexpr double kTol = 1e-12;
  double worst = 0.0;
  for (int c : {4, 6}) {
    worst = std::max(worst, verify::picture_equivalence(8, 30, 20, c, 3000).max_error);
  }
  return {worst < kTol, fmt("max |E_H - E_S| = %.2e at cutoffs 4,6 (tol %.0e)", worst, kTol)};
}

// 4. Adjoint gradient against central differences.
Outcome gradient() {
  constexpr double kTol = 1e-6;
  auto s = verify::gradient_check(8, 20, 12, 4, 1e-5, 1e-12, 4000);
  return {s.max_error < kTol, fmt("max relative error %.2e over %d components (tol %.0e)",
                                  s.max_error, s.count, kTol)};
}

// Minimum of f on [-pi, pi): grid, then golden-section refinement.
double grid_minimum(const std::function<double(double)>& f, int points) {
  double best_t = -kPi, best = f(-kPi);
  const double h = 2.0 * kPi / points;
  for (int k = 1; k < points; ++k) {
    double t = -kPi + h * k;
    double v = f(t);
    if (v < best) {
      best = v;
      best_t = t;
    }
  }
  double a = best_t - h, b = best_t + h;
  const double g = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = b - g * (b - a), x2 = a + g * (b - a);
  double f1 = f(x1), f2 = f(x2);
  for (int it = 0; it < 80; ++it) {
    if (f1 < f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - g * (b - a);
      f1 = f(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + g * (b - a);
      f2 = f(x2);
    }
  }
  return std::min(best, std::min(f1, f2));
}

// 5. Three-point sinusoid against the surrogate landscape of an added gate.
Outcome ggf_landscape() {
  double fit_err = 0.0, imp_err = 0.0;
  instances::Rng rng(5000);
  for (int trial = 0; trial < 5; ++trial) {
    verify::Instance in = verify::random_instance(8, 15, 4, 5100 + trial);
    // The candidate acts first on the reference, with its own slot.
    std::vector<Gate> gates;
    gates.push_back({instances::random_monomial(8, 4, rng), 15, 1.0});
    gates.insert(gates.end(), in.gates.begin(), in.gates.end());
    SurrogateGraph g = SurrogateGraph::build(in.hamiltonian, gates, in.reference,
                                             TruncationPolicy::length(4), Picture::kHeisenberg);
    std::vector<double> p = in.params;
    p.push_back(0.0);
    auto energy = [&](double t) {
      p.back() = t;
      return g.energy(p);
    };
    const double e0 = energy(0.0);
    SinusoidFit fit = fit_sinusoid(e0, energy(kPi / 2), energy(-kPi / 2));
    for (int k = 0; k < 10; ++k) {
      double t = std::uniform_real_distribution<double>(-kPi, kPi)(rng);
      fit_err = std::max(fit_err, std::abs(fit(t) - energy(t)));
    }
    double grid = grid_minimum(energy, 1000) - e0;
    imp_err = std::max(imp_err, std::abs(fit.improvement - grid));
  }
  return {fit_err < 1e-10 && imp_err < 1e-8,
          fmt("fit error %.2e (tol 1e-10), improvement vs refined 1000-point grid %.2e (tol 1e-8)",
              fit_err, imp_err)};
}

// 6. Pool sizes.
Outcome pool_count() {
  size_t big = build_majoranic_pool(20, 10, 10).size();
  size_t small = build_majoranic_pool(2, 1, 1).size();
  return {big == 14250 && small == 3, fmt("o=v=10: %zu (want 14250), o=v=1: %zu (want 3)", big,
                                          small)};
}

// 7. Members of an equivalence class reach the same best single-gate energy,
// computed on the state vector.
Outcome pool_reduction() {
  constexpr double kTol = 1e-10;
  double worst = 0.0, total = 0.0;
  int classes = 0;
  for (uint64_t seed = 0; seed < 4; ++seed) {
    verify::Instance in = verify::random_instance(8, 8, 4, 7000 + seed);
    instances::Rng rng(7100 + seed);
    FockState ref = instances::random_fock(8, 1 + static_cast<int>(seed % 7), rng);
    auto improvement = [&](const Monomial& m) {
      std::vector<Gate> gates{Gate{m, static_cast<int>(in.params.size()), 1.0}};
      gates.insert(gates.end(), in.gates.begin(), in.gates.end());
      std::vector<double> p = in.params;
      auto e = [&](double t) {
        p.push_back(t);
        double v = exact::expectation(in.hamiltonian, exact::evolve(ref, gates, p));
        p.pop_back();
        return v;
      };
      return fit_sinusoid(e(0.0), e(kPi / 2), e(-kPi / 2)).improvement;
    };
    for (uint64_t modes = 0; modes < 256; ++modes) {
      if (std::popcount(modes) != 4) continue;
      for (int parity : {0, 1}) {
        auto members = class_members(8, modes, parity);
        double first = improvement(members[0]);
        total += std::abs(first);
        for (size_t k = 1; k < members.size(); ++k) {
          worst = std::max(worst, std::abs(improvement(members[k]) - first));
        }
        ++classes;
      }
    }
  }
  return {worst < kTol, fmt("max spread %.2e over %d classes of 8 on random Fock states (tol "
                            "%.0e), mean |improvement| %.2e",
                            worst, classes, kTol, total / classes)};
}

// 8. Dressed integrals: same spectrum, and rotations moved onto the Hamiltonian.
Outcome dressing() {
  constexpr double kTol = 1e-9;
  double spec = 0.0, energy = 0.0;
  instances::Rng rng(8000);
  for (int n_spatial : {3, 4, 5}) {
    for (RotationMode mode : {RotationMode::kRestricted, RotationMode::kUnrestricted}) {
      const int ne = 2 * (n_spatial / 2);
      MolecularIntegrals ints = instances::random_integrals(n_spatial, ne, rng);
      FermionicCircuit c = make_reference_circuit(n_spatial, ne / 2, ne / 2, mode);
      for (int k = 0; k < 4; ++k) {
        c.append_body({{Gate{instances::random_monomial(2 * n_spatial, 4, rng), 0, 1.0}}, "x"},
                      0.0);
      }
      c.params = instances::random_angles(c.params.size(), rng);
      MolecularIntegrals dressed = dress_integrals(ints, c.orbital_rotations());
      auto a = exact::full_spectrum(majorana_hamiltonian(ints));
      auto b = exact::full_spectrum(majorana_hamiltonian(dressed));
      spec = std::max(spec, (a - b).cwiseAbs().maxCoeff());
      auto all = c.gates();
      auto body = c.body_gates();
      double with = exact::expectation(majorana_hamiltonian(ints),
                                       exact::evolve(c.reference, all, c.params));
      double without = exact::expectation(majorana_hamiltonian(dressed),
                                          exact::evolve(c.reference, body, c.params));
      energy = std::max(energy, std::abs(with - without));
    }
  }
  return {spec < kTol && energy < kTol,
          fmt("spectrum diff %.2e, energy diff %.2e for N = 6, 8, 10 (tol %.0e)", spec, energy,
              kTol)};
}

// 9. Greedy run on the H4 chain.
Outcome end_to_end() {
  const std::string base = std::string(VMPE_FIXTURE_DIR) + "/h4_chain_r15";
  MolecularIntegrals ints = read_fcidump_file(base + ".fcidump");
  std::ifstream meta(base + ".json");
  const double stored = nlohmann::json::parse(meta)["fci_energy"].get<double>();
  const double oracle = exact::sector_spectrum(majorana_hamiltonian(ints), ints.n_spatial,
                                               ints.n_electrons, 0)
                            .energies(0);
  RunConfig cfg;
  cfg.cutoff.reset();
  cfg.max_iterations = 30;
  RunResult r = run_adapt(ints, cfg);
  cfg.trim_tau = build_majoranic_pool(ints.n_spatial, ints.n_alpha(), ints.n_beta()).size();
  RunResult again = run_adapt(ints, cfg);

  bool monotone = true;
  for (size_t i = 1; i < r.trajectory.size(); ++i) {
    monotone = monotone && r.trajectory[i].energy <= r.trajectory[i - 1].energy;
  }
  bool identical = r.trajectory.size() == again.trajectory.size();
  for (size_t i = 0; identical && i < r.trajectory.size(); ++i) {
    identical = r.trajectory[i].energy == again.trajectory[i].energy &&
                r.trajectory[i].params_hash == again.trajectory[i].params_hash &&
                r.trajectory[i].label == again.trajectory[i].label;
  }
  const int iterations = static_cast<int>(r.trajectory.size()) - 1;
  const double err = r.trajectory.back().energy - oracle;
  bool pass = !r.aborted && std::abs(err) < 1e-3 && iterations <= 30 && monotone && identical &&
              std::abs(oracle - stored) < 1e-8;
  return {pass, fmt("E - E_oracle = %.2e after %d iterations (tol 1e-3), monotone=%s, "
                    "trimmed rerun identical=%s, oracle vs stored %.1e",
                    err, iterations, monotone ? "yes" : "no", identical ? "yes" : "no",
                    std::abs(oracle - stored))};
}

// 10. Overlap lower bounds against exact overlaps.
Outcome overlap_bounds() {
  auto r = verify::overlap_bound_soundness(500, 10000);
  return {r.trials >= 500 && r.violations == 0 && r.ordering_violations == 0,
          fmt("%d trials, %d bound violations, %d ordering violations, min margin %.2e, "
              "penalty bounds skipped for p > lambda2 in %d",
              r.trials, r.violations, r.ordering_violations, r.min_margin, r.penalty_skipped)};
}

// 11. Gradient overhead and re-evaluation speed.
Outcome performance() {
  double worst_ratio = 0.0, speedup = 0.0;
  for (const auto& c : bench::default_suite()) {
    bench::Row row = bench::run_case(c, 11000, 1.0);
    worst_ratio = std::max(worst_ratio, row.gradient_ratio);
    if (c.n_modes == 20 && c.n_gates == 300) speedup = row.rebuild_speedup();
  }
  return {worst_ratio <= 3.5 && speedup >= 20.0,
          fmt("max gradient/energy time %.2f (need <= 3.5), rebuild/evaluate %.0fx on 300 gates, "
              "20 modes (need >= 20)",
              worst_ratio, speedup)};
}

// 12. Per-iteration time against system size at cutoff 4.
Outcome scaling() {
  std::vector<double> n, t;
  for (int modes : {8, 12, 16, 20}) {
    n.push_back(modes);
    t.push_back(bench::seconds_per_iteration(modes, 4, 3, 12000));
  }
  double slope = bench::loglog_slope(n, t);
  return {slope <= 8.0, fmt("log-log slope %.2f (need <= 8); seconds/iteration %.2e %.2e %.2e "
                            "%.2e",
                            slope, t[0], t[1], t[2], t[3])};
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    Outcome (*run)();
  };
  const Criterion criteria[] = {
      {1, "oracle-equivalence", oracle_equivalence},
      {2, "cutoff-decay", cutoff_decay},
      {3, "picture-equivalence", picture_equivalence},
      {4, "analytic-gradient", gradient},
      {5, "ggf-landscape", ggf_landscape},
      {6, "pool-count", pool_count},
      {7, "pool-reduction", pool_reduction},
      {8, "dressing", dressing},
      {9, "end-to-end-h4", end_to_end},
      {10, "overlap-bounds", overlap_bounds},
      {11, "performance", performance},
      {12, "scaling", scaling},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    double sec = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("%s %2d %-20s %s [%.1f s]\n", o.pass ? "PASS" : "FAIL", c.id, c.name,
                o.detail.c_str(), sec);
    std::fflush(stdout);
    failed += !o.pass;
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(std::size(criteria)) - failed,
              std::size(criteria));
  return failed == 0 ? 0 : 1;
}
