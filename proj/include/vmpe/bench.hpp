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

#ifndef VMPE_BENCH_HPP
#define VMPE_BENCH_HPP

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "vmpe/propagation.hpp"

namespace vmpe::bench {

struct Case {
  std::string name;
  int n_modes = 8;
  int n_gates = 50;
  int cutoff = 4;
  Picture picture = Picture::kHeisenberg;
};

struct Row {
  Case c;
  size_t nodes = 0;
  double build_seconds = 0.0;
  double energy_seconds = 0.0;    // per evaluation, fastest round
  double gradient_seconds = 0.0;  // energy and gradient, per evaluation, fastest round
  double gradient_ratio = 0.0;    // median over rounds of gradient / energy time
  double rebuild_speedup() const { return build_seconds / energy_seconds; }
};

/// Random molecular Hamiltonians and random length-4 circuits.
std::vector<Case> default_suite();

/// Times build, energy and energy+gradient of one case. Energy and gradient
/// are timed in alternating rounds sharing `min_seconds` each.
Row run_case(const Case& c, uint64_t seed, double min_seconds = 0.2);

/// Columns: name, n_modes, n_gates, cutoff, picture, nodes, build_s, energy_s,
/// gradient_s, gradient_ratio, rebuild_speedup.
void write_csv(std::ostream& os, const std::vector<Row>& rows);

/// Mean wall time of a greedy iteration on a random half-filled molecule.
double seconds_per_iteration(int n_modes, int cutoff, int iterations, uint64_t seed);

/// Least-squares slope of log(y) against log(x).
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace vmpe::bench

#endif  // VMPE_BENCH_HPP
