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

#ifndef VMPE_ADAPT_HPP
#define VMPE_ADAPT_HPP

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "vmpe/circuit.hpp"
#include "vmpe/hamiltonian.hpp"
#include "vmpe/optimizer.hpp"
#include "vmpe/pool.hpp"
#include "vmpe/propagation.hpp"
#include "vmpe/surrogate.hpp"

namespace vmpe {

/// Invalid run configuration.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class SelectionMode { kGradient, kGgf, kMixed };
enum class Placement { kDefault, kFront, kBack };
enum class InitMode { kAuto, kZero, kGgf };
enum class Reoptimize { kAll, kNewOnly };

struct RunConfig {
  /// Length cutoff; empty means exact (2N).
  std::optional<int> cutoff = 6;
  std::optional<int> generalized_cutoff;
  bool paired_accept = false;
  Picture picture = Picture::kHeisenberg;
  Placement placement = Placement::kDefault;

  PoolOptions pool;
  bool reduce_pool = false;
  SelectionMode selection = SelectionMode::kMixed;
  /// Keep the top tau candidates between refreshes; 0 disables trimming.
  size_t trim_tau = 0;
  int trim_kappa = 1;

  int max_iterations = 30;
  double improvement_floor = 1e-9;
  LbfgsOptions optimizer;
  InitMode init = InitMode::kAuto;
  Reoptimize reoptimize = Reoptimize::kAll;
  RotationMode rotations = RotationMode::kRestricted;

  size_t max_nodes = SurrogateGraph::kDefaultMaxNodes;
  int threads = 1;
  uint64_t seed = 0;

  TruncationPolicy policy(int n_modes) const;
  /// Front for Heisenberg, back for Schrodinger unless set.
  Placement resolved_placement() const;
  /// Throws ConfigError.
  void validate() const;
};

/// Parses the run-config JSON. Unknown keys are errors.
RunConfig run_config_from_json(const std::string& text, const RunConfig& defaults = {});
std::string run_config_to_json(const RunConfig& config);

std::string to_string(SelectionMode m);
SelectionMode selection_mode_from_string(const std::string& s);

struct IterationRecord {
  int iteration = 0;
  double energy = 0.0;
  std::string label;
  std::string generators;  // ';'-separated signed hex monomials
  int slot = -1;
  double theta_init = 0.0;
  double score = 0.0;
  double predicted_improvement = 0.0;
  size_t pool_evaluated = 0;
  size_t active_pool = 0;
  size_t live_monomials = 0;
  int optimizer_evaluations = 0;
  std::string params_hash;
  double seconds = 0.0;
};

struct RunResult {
  FermionicCircuit circuit;
  std::vector<IterationRecord> trajectory;
  std::string stop_reason;
  bool aborted = false;
};

/// Called after each recorded iteration.
using IterationCallback = std::function<void(const IterationRecord&)>;

/// Greedy loop: score the pool, insert the best candidate, reoptimize, record.
/// Propagation blow-up stops the loop with aborted = true and the partial
/// trajectory.
RunResult run_adapt(const SparseOperator& hamiltonian, int n_spatial, int n_alpha, int n_beta,
                    const RunConfig& config, const IterationCallback& on_iteration = {});
RunResult run_adapt(const MolecularIntegrals& ints, const RunConfig& config,
                    const IterationCallback& on_iteration = {});

/// Fixed column set; the seconds column is left empty when timing is off.
void write_trajectory_csv(std::ostream& os, const std::vector<IterationRecord>& rows,
                          bool timing = true);

/// FNV-1a over the parameter bytes, as 16 hex digits.
std::string hash_params(const std::vector<double>& params);

}  // namespace vmpe

#endif  // VMPE_ADAPT_HPP
