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

#ifndef VMPE_SURROGATE_HPP
#define VMPE_SURROGATE_HPP

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "vmpe/monomial.hpp"
#include "vmpe/propagation.hpp"
#include "vmpe/sparse_operator.hpp"

namespace vmpe {

class PropagationBlowup : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SurrogateStats {
  size_t nodes = 0;
  size_t sources = 0;
  size_t sinks = 0;
  size_t ops = 0;
  size_t rotation_ops = 0;
  size_t one_way_ops = 0;
  size_t scale_ops = 0;
  size_t layers = 0;
  size_t max_layer_ops = 0;
  double build_seconds = 0.0;

  std::string to_json() const;
};

/// Static record of which monomials exist after each gate under a structural
/// truncation policy, and how coefficients flow between them.
///
/// Node ids are stable: a node, once created, persists to the end. Each layer
/// holds one op per anticommuting node pair; within a layer ops touch
/// disjoint nodes. Not thread-safe: evaluation reuses scratch buffers.
class SurrogateGraph {
 public:
  static constexpr size_t kDefaultMaxNodes = 200'000'000;

  /// `circuit` is in state order. Throws UnsupportedPolicy for
  /// coefficient-dependent rules and PropagationBlowup past `max_nodes`.
  static SurrogateGraph build(const SparseOperator& hamiltonian, std::span<const Gate> circuit,
                              const FockState& reference, const TruncationPolicy& policy,
                              Picture picture, size_t max_nodes = kDefaultMaxNodes);

  Picture picture() const { return picture_; }
  const TruncationPolicy& policy() const { return policy_; }
  const FockState& reference() const { return reference_; }
  /// Circuit in state order.
  const std::vector<Gate>& circuit() const { return circuit_; }
  int n_params() const;
  size_t n_nodes() const { return nodes_.size(); }
  const Monomial& node(size_t id) const { return nodes_[id]; }
  const SurrogateStats& stats() const { return stats_; }

  double energy(std::span<const double> params) const;
  /// Writes dE/dparams into `grad` (resized to n_params()) and returns E.
  double energy_and_gradient(std::span<const double> params, std::vector<double>& grad) const;

  /// Node coefficients after the first `n_layers` propagation layers.
  SparseOperator values_after(std::span<const double> params, size_t n_layers) const;
  size_t n_layers() const { return layers_.size(); }

  /// Adds a gate at the end of propagation: applied to the reference first
  /// (Heisenberg) or applied last (Schrodinger).
  void append_layer(const Gate& gate);

  /// Changes the reference occupation; sinks or sources are re-weighted.
  void set_reference(const FockState& reference);

 private:
  // a: node id in the low 30 bits, op kind in the top two.
  // b: partner id in the low 31 bits, branch sign in bit 31.
  struct Op {
    uint32_t a;
    uint32_t b;
  };
  enum Kind : uint32_t { kRotation = 0, kOneWayAB = 1, kOneWayBA = 2 };
  static constexpr uint32_t kIdMask = (1u << 30) - 1;
  static constexpr uint32_t kPartnerMask = (1u << 31) - 1;
  // Pair ops in [begin, end) of ops_; scale-only nodes in
  // [scale_begin, scale_end) of scales_.
  // Ops of a layer touch disjoint pairs and are grouped by kind:
  // rotations in [begin, ab), one-way a->b in [ab, ba), b->a in [ba, end).
  struct Layer {
    size_t begin;
    size_t ab;
    size_t ba;
    size_t end;
    size_t scale_begin;
    size_t scale_end;
    int slot;
    double sign;
  };

  SurrogateGraph() = default;
  int32_t intern(const Monomial& m);
  void add_layer(const Gate& gate);
  void reweight();
  void push_op(uint32_t a, uint32_t b, Kind kind, int sign);
  void forward(std::span<const double> params, size_t n_layers, std::vector<double>& v) const;

  Picture picture_ = Picture::kHeisenberg;
  TruncationPolicy policy_;
  FockState reference_;
  SparseOperator hamiltonian_;
  std::vector<Gate> circuit_;
  size_t max_nodes_ = kDefaultMaxNodes;

  std::vector<Monomial> nodes_;
  std::unordered_map<Monomial, int32_t, MonomialHash> index_;
  std::vector<Op> ops_;
  std::vector<uint32_t> scales_;
  std::vector<Layer> layers_;
  std::vector<int32_t> source_nodes_;
  std::vector<double> source_values_;
  std::vector<int32_t> sink_nodes_;
  std::vector<double> sink_weights_;
  SurrogateStats stats_;

  mutable std::vector<double> values_;
  mutable std::vector<double> pairs_;
  mutable std::vector<double> tape_;
  mutable std::vector<double> trig_;
};

}  // namespace vmpe

#endif  // VMPE_SURROGATE_HPP
