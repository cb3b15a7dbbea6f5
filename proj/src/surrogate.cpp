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

#include "vmpe/surrogate.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include <json.hpp>

namespace vmpe {

std::string SurrogateStats::to_json() const {
  nlohmann::json j = {{"nodes", nodes},   {"sources", sources}, {"sinks", sinks},
                      {"ops", ops},       {"rotation_ops", rotation_ops},
                      {"one_way_ops", one_way_ops}, {"scale_ops", scale_ops},       {"layers", layers},   {"max_layer_ops", max_layer_ops},
                      {"build_seconds", build_seconds}};
  return j.dump();
}

SurrogateGraph SurrogateGraph::build(const SparseOperator& hamiltonian,
                                     std::span<const Gate> circuit, const FockState& reference,
                                     const TruncationPolicy& policy, Picture picture,
                                     size_t max_nodes) {
  auto t0 = std::chrono::steady_clock::now();
  policy.validate();
  if (!policy.is_structural()) {
    throw UnsupportedPolicy("surrogate graph requires a structural truncation policy");
  }
  if (reference.n_modes != hamiltonian.n_modes()) {
    throw std::invalid_argument("reference and Hamiltonian mode counts differ");
  }
  SurrogateGraph g;
  g.picture_ = picture;
  g.policy_ = policy;
  g.reference_ = reference;
  g.hamiltonian_ = hamiltonian;
  g.max_nodes_ = max_nodes;
  g.circuit_.assign(circuit.begin(), circuit.end());

  if (picture == Picture::kHeisenberg) {
    for (const auto& [m, c] : hamiltonian.sorted_terms()) {
      g.source_nodes_.push_back(g.intern(m));
      g.source_values_.push_back(c);
    }
    for (size_t k = circuit.size(); k-- > 0;) g.add_layer(circuit[k]);
  } else {
    SparseOperator rho = expand_fock_projector_unnormalized(
        reference, policy.pair_budget(reference.n_modes));
    for (const auto& [m, c] : rho.sorted_terms()) {
      g.source_nodes_.push_back(g.intern(m));
      g.source_values_.push_back(c);
    }
    for (const Gate& gate : circuit) g.add_layer(gate);
  }
  g.reweight();
  g.stats_.build_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return g;
}

int32_t SurrogateGraph::intern(const Monomial& m) {
  auto [it, inserted] = index_.try_emplace(m, static_cast<int32_t>(nodes_.size()));
  if (inserted) {
    if (nodes_.size() >= max_nodes_) {
      index_.erase(it);
      throw PropagationBlowup("surrogate graph exceeded " + std::to_string(max_nodes_) +
                              " live monomials");
    }
    nodes_.push_back(m);
  }
  return it->second;
}

void SurrogateGraph::push_op(uint32_t a, uint32_t b, Kind kind, int sign) {
  ops_.push_back({a | (static_cast<uint32_t>(kind) << 30), b | (sign < 0 ? 1u << 31 : 0u)});
  if (kind == kRotation) ++stats_.rotation_ops;
  else ++stats_.one_way_ops;
}

void SurrogateGraph::add_layer(const Gate& gate) {
  validate_gate(gate);
  if (gate.generator.n_modes() != reference_.n_modes) {
    throw std::invalid_argument("gate mode count mismatch");
  }
  const Monomial g = gate.generator;
  const int dir = picture_ == Picture::kHeisenberg ? 1 : -1;
  const size_t begin = ops_.size();
  const size_t scale_begin = scales_.size();
  const size_t snapshot = nodes_.size();
  for (size_t a = 0; a < snapshot; ++a) {
    const Monomial na = nodes_[a];
    if (commutes(na, g)) continue;
    const Monomial mu = na ^ g;
    const bool to_mu = policy_.admits(mu);
    const bool to_a = policy_.admits(na);
    const int sab = dir * anticommutator_sign(g, na);
    const uint32_t ua = static_cast<uint32_t>(a);
    auto it = index_.find(mu);
    uint32_t ub;
    if (it != index_.end()) {
      if (static_cast<size_t>(it->second) < a) continue;
      ub = static_cast<uint32_t>(it->second);
    } else if (to_mu) {
      ub = static_cast<uint32_t>(intern(mu));
    } else {
      scales_.push_back(ua);
      continue;
    }
    // the reverse branch factor is always -sab
    if (to_mu && to_a) {
      push_op(ua, ub, kRotation, sab);
    } else if (to_mu) {
      push_op(ua, ub, kOneWayAB, sab);
    } else if (to_a) {
      push_op(ua, ub, kOneWayBA, -sab);
    } else {
      scales_.push_back(ua);
      scales_.push_back(ub);
    }
  }
  auto kind_of = [](const Op& op) { return op.a >> 30; };
  auto first = ops_.begin() + static_cast<std::ptrdiff_t>(begin);
  auto ab = std::stable_partition(first, ops_.end(),
                                  [&](const Op& op) { return kind_of(op) == kRotation; });
  auto ba = std::stable_partition(ab, ops_.end(),
                                  [&](const Op& op) { return kind_of(op) == kOneWayAB; });
  layers_.push_back({begin, static_cast<size_t>(ab - ops_.begin()),
                     static_cast<size_t>(ba - ops_.begin()), ops_.size(), scale_begin,
                     scales_.size(), gate.slot, gate.sign});
  stats_.scale_ops = scales_.size();
  stats_.ops = ops_.size() + scales_.size();
  stats_.layers = layers_.size();
  stats_.nodes = nodes_.size();
  stats_.max_layer_ops =
      std::max(stats_.max_layer_ops, ops_.size() - begin + scales_.size() - scale_begin);
}

void SurrogateGraph::append_layer(const Gate& gate) {
  add_layer(gate);
  if (picture_ == Picture::kHeisenberg) {
    circuit_.insert(circuit_.begin(), gate);
  } else {
    circuit_.push_back(gate);
  }
  reweight();
}

void SurrogateGraph::set_reference(const FockState& reference) {
  if (reference.n_modes != reference_.n_modes) {
    throw std::invalid_argument("reference mode count mismatch");
  }
  reference_ = reference;
  reweight();
}

void SurrogateGraph::reweight() {
  sink_nodes_.clear();
  sink_weights_.clear();
  if (picture_ == Picture::kHeisenberg) {
    for (size_t id = 0; id < nodes_.size(); ++id) {
      if (!nodes_[id].is_paired()) continue;
      sink_nodes_.push_back(static_cast<int32_t>(id));
      sink_weights_.push_back(paired_eigenvalue(nodes_[id], reference_));
    }
  } else {
    for (size_t k = 0; k < source_nodes_.size(); ++k) {
      source_values_[k] = paired_eigenvalue(nodes_[source_nodes_[k]], reference_);
    }
    for (size_t id = 0; id < nodes_.size(); ++id) {
      double c = hamiltonian_.coefficient(nodes_[id]);
      if (c == 0.0) continue;
      sink_nodes_.push_back(static_cast<int32_t>(id));
      sink_weights_.push_back(c);
    }
  }
  stats_.nodes = nodes_.size();
  stats_.sources = source_nodes_.size();
  stats_.sinks = sink_nodes_.size();
}

int SurrogateGraph::n_params() const {
  int n = 0;
  for (const Gate& g : circuit_) n = std::max(n, g.slot + 1);
  return n;
}

void SurrogateGraph::forward(std::span<const double> params, size_t n_layers,
                             std::vector<double>& v) const {
  v.assign(nodes_.size(), 0.0);
  for (size_t k = 0; k < source_nodes_.size(); ++k) v[source_nodes_[k]] = source_values_[k];
  double* vv = v.data();
  const Op* ops = ops_.data();
  const uint32_t* scales = scales_.data();
  for (size_t l = 0; l < n_layers; ++l) {
    const Layer& layer = layers_[l];
    if (layer.slot >= static_cast<int>(params.size())) {
      throw std::out_of_range("gate slot beyond parameter vector");
    }
    const double theta = layer.sign * params[layer.slot];
    const double c = std::cos(theta), s = std::sin(theta);
    for (size_t i = layer.scale_begin; i < layer.scale_end; ++i) vv[scales[i]] *= c;
    for (size_t i = layer.begin; i < layer.ab; ++i) {
      const uint32_t a = ops[i].a & kIdMask, b = ops[i].b & kPartnerMask;
      const double ss = (ops[i].b >> 31) ? -s : s;
      const double x = vv[a], y = vv[b];
      vv[a] = c * x - ss * y;
      vv[b] = c * y + ss * x;
    }
    for (size_t i = layer.ab; i < layer.ba; ++i) {
      const uint32_t a = ops[i].a & kIdMask, b = ops[i].b & kPartnerMask;
      const double ss = (ops[i].b >> 31) ? -s : s;
      const double x = vv[a];
      vv[a] = c * x;
      vv[b] = c * vv[b] + ss * x;
    }
    for (size_t i = layer.ba; i < layer.end; ++i) {
      const uint32_t a = ops[i].a & kIdMask, b = ops[i].b & kPartnerMask;
      const double ss = (ops[i].b >> 31) ? -s : s;
      const double y = vv[b];
      vv[a] = c * vv[a] + ss * y;
      vv[b] = c * y;
    }
  }
}

double SurrogateGraph::energy(std::span<const double> params) const {
  forward(params, layers_.size(), values_);
  double e = 0.0;
  for (size_t k = 0; k < sink_nodes_.size(); ++k) e += sink_weights_[k] * values_[sink_nodes_[k]];
  return e;
}

double SurrogateGraph::energy_and_gradient(std::span<const double> params,
                                           std::vector<double>& grad) const {
  // Scale-only inputs are recovered by dividing by cos(theta); layers with a
  // vanishing cosine tape them instead. Rotations are undone exactly.
  constexpr double kMinCos = 1e-6;
  const size_t n = nodes_.size();
  pairs_.assign(2 * n, 0.0);
  double* vl = pairs_.data();
  for (size_t k = 0; k < source_nodes_.size(); ++k) vl[2 * source_nodes_[k]] = source_values_[k];
  if (tape_.size() < 2 * ops_.size() + scales_.size()) {
    tape_.resize(2 * ops_.size() + scales_.size());
  }
  double* tp = tape_.data();
  trig_.resize(2 * layers_.size());
  double* trig = trig_.data();
  const Op* ops = ops_.data();
  const uint32_t* scales = scales_.data();
  for (const Layer& layer : layers_) {
    if (layer.slot >= static_cast<int>(params.size())) {
      throw std::out_of_range("gate slot beyond parameter vector");
    }
    const double theta = layer.sign * params[layer.slot];
    const double c = std::cos(theta), s = std::sin(theta);
    *trig++ = c;
    *trig++ = s;
    if (std::abs(c) < kMinCos) {
      for (size_t i = layer.scale_begin; i < layer.scale_end; ++i) {
        *tp++ = vl[2 * scales[i]];
      }
    }
    for (size_t i = layer.scale_begin; i < layer.scale_end; ++i) vl[2 * scales[i]] *= c;
    for (size_t i = layer.begin; i < layer.ab; ++i) {
      const size_t a = 2 * (ops[i].a & kIdMask), b = 2 * (ops[i].b & kPartnerMask);
      const double ss = (ops[i].b >> 31) ? -s : s;
      const double x = vl[a], y = vl[b];
      vl[a] = c * x - ss * y;
      vl[b] = c * y + ss * x;
    }
    for (size_t i = layer.ab; i < layer.ba; ++i) {
      const size_t a = 2 * (ops[i].a & kIdMask), b = 2 * (ops[i].b & kPartnerMask);
      const double ss = (ops[i].b >> 31) ? -s : s;
      const double x = vl[a], y = vl[b];
      *tp++ = x;
      *tp++ = y;
      vl[a] = c * x;
      vl[b] = c * y + ss * x;
    }
    for (size_t i = layer.ba; i < layer.end; ++i) {
      const size_t a = 2 * (ops[i].a & kIdMask), b = 2 * (ops[i].b & kPartnerMask);
      const double ss = (ops[i].b >> 31) ? -s : s;
      const double x = vl[a], y = vl[b];
      *tp++ = x;
      *tp++ = y;
      vl[a] = c * x + ss * y;
      vl[b] = c * y;
    }
  }
  double e = 0.0;
  for (size_t k = 0; k < sink_nodes_.size(); ++k) {
    e += sink_weights_[k] * vl[2 * sink_nodes_[k]];
    vl[2 * sink_nodes_[k] + 1] = sink_weights_[k];
  }

  grad.assign(params.size(), 0.0);
  const double* t = tp;
  for (size_t l = layers_.size(); l-- > 0;) {
    const Layer& layer = layers_[l];
    const double c = trig_[2 * l], s = trig_[2 * l + 1];
    double dtheta = 0.0;
    for (size_t i = layer.end; i-- > layer.ba;) {
      const size_t a = 2 * (ops[i].a & kIdMask), b = 2 * (ops[i].b & kPartnerMask);
      const double sc = (ops[i].b >> 31) ? -c : c;
      const double ss = (ops[i].b >> 31) ? -s : s;
      const double la = vl[a + 1], lb = vl[b + 1];
      t -= 2;
      const double x = t[0], y = t[1];
      dtheta += la * (-s * x + sc * y) + lb * (-s * y);
      vl[a + 1] = c * la;
      vl[b + 1] = c * lb + ss * la;
      vl[a] = x;
      vl[b] = y;
    }
    for (size_t i = layer.ba; i-- > layer.ab;) {
      const size_t a = 2 * (ops[i].a & kIdMask), b = 2 * (ops[i].b & kPartnerMask);
      const double sc = (ops[i].b >> 31) ? -c : c;
      const double ss = (ops[i].b >> 31) ? -s : s;
      const double la = vl[a + 1], lb = vl[b + 1];
      t -= 2;
      const double x = t[0], y = t[1];
      dtheta += la * (-s * x) + lb * (-s * y + sc * x);
      vl[a + 1] = c * la + ss * lb;
      vl[b + 1] = c * lb;
      vl[a] = x;
      vl[b] = y;
    }
    for (size_t i = layer.ab; i-- > layer.begin;) {
      // d(X, Y)/dtheta = (-Y', X') with the branch sign folded in.
      const size_t a = 2 * (ops[i].a & kIdMask), b = 2 * (ops[i].b & kPartnerMask);
      const double ss = (ops[i].b >> 31) ? -s : s;
      const double sg = (ops[i].b >> 31) ? -1.0 : 1.0;
      const double la = vl[a + 1], lb = vl[b + 1];
      const double xo = vl[a], yo = vl[b];
      dtheta += sg * (lb * xo - la * yo);
      vl[a] = c * xo + ss * yo;
      vl[b] = c * yo - ss * xo;
      vl[a + 1] = c * la + ss * lb;
      vl[b + 1] = c * lb - ss * la;
    }
    if (std::abs(c) < kMinCos) {
      t -= layer.scale_end - layer.scale_begin;
      for (size_t i = layer.scale_begin; i < layer.scale_end; ++i) {
        const size_t a = 2 * scales[i];
        const double x = t[i - layer.scale_begin];
        dtheta -= vl[a + 1] * s * x;
        vl[a] = x;
        vl[a + 1] *= c;
      }
    } else {
      // lambda * v is unchanged by a scale, so sum it before undoing.
      const double inv_c = 1.0 / c;
      double acc = 0.0;
      for (size_t i = layer.scale_begin; i < layer.scale_end; ++i) {
        const size_t a = 2 * scales[i];
        const double x = vl[a], la = vl[a + 1];
        acc += la * x;
        vl[a] = x * inv_c;
        vl[a + 1] = la * c;
      }
      dtheta -= s * inv_c * acc;
    }
    grad[layer.slot] += layer.sign * dtheta;
  }
  return e;
}

SparseOperator SurrogateGraph::values_after(std::span<const double> params,
                                            size_t n_layers) const {
  if (n_layers > layers_.size()) throw std::out_of_range("layer count");
  std::vector<double> v;
  forward(params, n_layers, v);
  SparseOperator out(reference_.n_modes);
  out.reserve(nodes_.size());
  for (size_t id = 0; id < nodes_.size(); ++id) {
    if (v[id] != 0.0) out.set(nodes_[id], v[id]);
  }
  return out;
}

}  // namespace vmpe
