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

#include "vmpe/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

#include "vmpe/adapt.hpp"
#include "vmpe/instances.hpp"
#include "vmpe/surrogate.hpp"
#include "vmpe/verify.hpp"

namespace vmpe::bench {

namespace {

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t) {
  return std::chrono::duration<double>(Clock::now() - t).count();
}

template <typename F>
double time_per_call(F&& f, double min_seconds) {
  f();  // warm-up
  int calls = 0;
  auto t0 = Clock::now();
  double elapsed = 0.0;
  do {
    f();
    ++calls;
    elapsed = since(t0);
  } while (elapsed < min_seconds);
  return elapsed / calls;
}

}  // namespace

std::vector<Case> default_suite() {
  return {
      {"small-h", 8, 60, 4, Picture::kHeisenberg},
      {"small-s", 8, 60, 4, Picture::kSchrodinger},
      {"mid-h", 12, 120, 4, Picture::kHeisenberg},
      {"mid-h-c6", 12, 120, 6, Picture::kHeisenberg},
      {"large-h", 20, 300, 4, Picture::kHeisenberg},
  };
}

Row run_case(const Case& c, uint64_t seed, double min_seconds) {
  verify::Instance in = verify::random_instance(c.n_modes, c.n_gates, 4, seed);
  const TruncationPolicy pol = TruncationPolicy::length(c.cutoff);
  Row r;
  r.c = c;
  auto t0 = Clock::now();
  SurrogateGraph g = SurrogateGraph::build(in.hamiltonian, in.gates, in.reference, pol,
                                           c.picture);
  r.build_seconds = since(t0);
  r.nodes = g.n_nodes();
  volatile double sink = 0.0;
  std::vector<double> grad;
  // Short alternating rounds: the ratio is taken within a round so that slow
  // stretches of the host affect both sides, then the median round is kept.
  constexpr int kRounds = 31;
  std::vector<double> te, tg, ratio;
  for (int k = 0; k < kRounds; ++k) {
    te.push_back(time_per_call([&] { sink = sink + g.energy(in.params); }, min_seconds / kRounds));
    tg.push_back(time_per_call([&] { sink = sink + g.energy_and_gradient(in.params, grad); },
                               min_seconds / kRounds));
    ratio.push_back(tg.back() / te.back());
  }
  r.energy_seconds = *std::min_element(te.begin(), te.end());
  r.gradient_seconds = *std::min_element(tg.begin(), tg.end());
  std::nth_element(ratio.begin(), ratio.begin() + kRounds / 2, ratio.end());
  r.gradient_ratio = ratio[kRounds / 2];
  return r;
}

void write_csv(std::ostream& os, const std::vector<Row>& rows) {
  os << "# format_version=1\n";
  os << "name,n_modes,n_gates,cutoff,picture,nodes,build_s,energy_s,gradient_s,gradient_ratio,"
        "rebuild_speedup\n";
  char buf[256];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%s,%d,%d,%d,%s,%zu,%.6e,%.6e,%.6e,%.4f,%.2f\n",
                  r.c.name.c_str(), r.c.n_modes, r.c.n_gates, r.c.cutoff,
                  to_string(r.c.picture).c_str(), r.nodes, r.build_seconds, r.energy_seconds,
                  r.gradient_seconds, r.gradient_ratio, r.rebuild_speedup());
    os << buf;
  }
}

double seconds_per_iteration(int n_modes, int cutoff, int iterations, uint64_t seed) {
  const int n_spatial = n_modes / 2;
  instances::Rng rng(seed);
  MolecularIntegrals ints = instances::random_integrals(n_spatial, 2 * (n_spatial / 2), rng);
  RunConfig cfg;
  cfg.cutoff = cutoff;
  cfg.max_iterations = iterations;
  cfg.improvement_floor = 0.0;
  RunResult r = run_adapt(ints, cfg);
  double total = 0.0;
  int count = 0;
  for (const auto& row : r.trajectory) {
    if (row.iteration == 0) continue;
    total += row.seconds;
    ++count;
  }
  if (count == 0) throw std::runtime_error("no greedy iterations were recorded");
  return total / count;
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("slope: need 2+ points");
  double mx = 0.0, my = 0.0;
  const double n = static_cast<double>(x.size());
  for (size_t i = 0; i < x.size(); ++i) {
    mx += std::log(x[i]) / n;
    my += std::log(y[i]) / n;
  }
  double sxy = 0.0, sxx = 0.0;
  for (size_t i = 0; i < x.size(); ++i) {
    double dx = std::log(x[i]) - mx;
    sxy += dx * (std::log(y[i]) - my);
    sxx += dx * dx;
  }
  return sxy / sxx;
}

}  // namespace vmpe::bench
