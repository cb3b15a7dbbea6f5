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

#ifndef VMPE_VERIFY_HPP
#define VMPE_VERIFY_HPP

#include <cstdint>
#include <vector>

#include "vmpe/overlap.hpp"
#include "vmpe/propagation.hpp"

// Randomized cross-checks of the engine against the dense oracle. Every
// routine is deterministic in its seed.
namespace vmpe::verify {

struct ErrorStats {
  int count = 0;
  double max_error = 0.0;
  double mean_error = 0.0;

  void add(double err);
};

/// Random molecular Hamiltonian, half-filled reference and a random
/// circuit of length-`gate_length` generators, one slot per gate.
struct Instance {
  int n_spatial = 0;
  SparseOperator hamiltonian;
  FockState reference;
  std::vector<Gate> gates;
  std::vector<double> params;
};
Instance random_instance(int n_modes, int n_gates, int gate_length, uint64_t seed,
                         double angle_scale = 1.0);

/// |E_engine(cutoff 2N) - E_dense| over random instances.
ErrorStats oracle_equivalence(int n_modes, int instances, int n_gates, uint64_t seed);

/// |E_Heisenberg - E_Schrodinger| at the given cutoff.
ErrorStats picture_equivalence(int n_modes, int instances, int n_gates, int cutoff,
                               uint64_t seed);

/// Mean |E_c - E_exact| per cutoff over the same random instances.
std::vector<double> cutoff_errors(int n_modes, int instances, int n_gates,
                                  const std::vector<int>& cutoffs, uint64_t seed,
                                  double angle_scale = 1.0);

/// Surrogate gradient against central differences with step h. The error
/// of component k is |g_k - fd_k| / max(|fd_k|, floor).
ErrorStats gradient_check(int n_modes, int instances, int n_params, int cutoff, double h,
                          double floor, uint64_t seed);

struct BoundReport {
  int trials = 0;
  int skipped = 0;
  /// Trials where p exceeded lambda2, so the penalty bounds do not apply.
  int penalty_skipped = 0;
  int violations = 0;
  int ordering_violations = 0;
  /// Smallest exact overlap minus bound over all bounds and trials.
  double min_margin = 1.0;
};

/// Random spin-symmetric systems and states near their singlet ground state;
/// every bound is compared with the exact overlap.
BoundReport overlap_bound_soundness(int trials, uint64_t seed,
                                    const PenaltyOptions& penalty = {});

}  // namespace vmpe::verify

#endif  // VMPE_VERIFY_HPP
