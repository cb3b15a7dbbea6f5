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

#include "vmpe/propagation.hpp"

#include <algorithm>
#include <cmath>

namespace vmpe {

void validate_gate(const Gate& gate) {
  if (gate.generator.is_identity()) throw std::invalid_argument("identity gate generator");
  if (gate.generator.length() % 2 != 0) {
    throw std::invalid_argument("odd-length gate generator " + gate.generator.to_string());
  }
  if (gate.slot < 0) throw std::invalid_argument("negative parameter slot");
}

std::string to_string(Picture p) {
  return p == Picture::kHeisenberg ? "heisenberg" : "schrodinger";
}

Picture picture_from_string(const std::string& s) {
  if (s == "heisenberg" || s == "H") return Picture::kHeisenberg;
  if (s == "schrodinger" || s == "schroedinger" || s == "S") return Picture::kSchrodinger;
  throw std::invalid_argument("unknown picture '" + s + "'");
}

void TruncationPolicy::validate() const {
  if (!length_cutoff && !generalized_length_cutoff) {
    throw std::invalid_argument("truncation policy needs a length or generalized-length cutoff");
  }
  if (length_cutoff && *length_cutoff < 0) throw std::invalid_argument("negative cutoff");
  if (generalized_length_cutoff && *generalized_length_cutoff < 0) {
    throw std::invalid_argument("negative generalized cutoff");
  }
  if (coeff_truncate && !(*coeff_truncate >= 0.0)) {
    throw std::invalid_argument("invalid coefficient threshold");
  }
  if (coeff_accept && !(*coeff_accept >= 0.0)) {
    throw std::invalid_argument("invalid acceptance threshold");
  }
}

bool TruncationPolicy::keeps(const Monomial& m, double coeff) const {
  double a = std::abs(coeff);
  if (a < kNumericalFloor) return false;
  if (coeff_accept && a >= *coeff_accept) return true;
  if (paired_accept && m.is_paired()) return true;
  if (coeff_truncate && a < *coeff_truncate) return false;
  return true;
}

int TruncationPolicy::pair_budget(int n_modes) const {
  if (paired_accept) return n_modes;
  int budget = n_modes;
  if (length_cutoff) budget = std::min(budget, *length_cutoff / 2);
  if (generalized_length_cutoff) budget = std::min(budget, *generalized_length_cutoff);
  return budget;
}

namespace {

void enumerate_pairs(const FockState& state, int max_pairs, double scale, SparseOperator& out) {
  const int n = state.n_modes;
  std::vector<int> chosen;
  auto rec = [&](auto&& self, int start) -> void {
    Monomial m = Monomial::paired(n, chosen);
    out.set(m, scale * paired_eigenvalue(m, state));
    if (static_cast<int>(chosen.size()) == max_pairs) return;
    for (int j = start; j < n; ++j) {
      chosen.push_back(j);
      self(self, j + 1);
      chosen.pop_back();
    }
  };
  rec(rec, 0);
}

}  // namespace

SparseOperator expand_fock_projector(const FockState& state, int max_pairs) {
  SparseOperator out(state.n_modes);
  enumerate_pairs(state, max_pairs, std::ldexp(1.0, -state.n_modes), out);
  return out;
}

SparseOperator expand_fock_projector_unnormalized(const FockState& state, int max_pairs) {
  SparseOperator out(state.n_modes);
  enumerate_pairs(state, max_pairs, 1.0, out);
  return out;
}

void conjugate_in_place(SparseOperator& op, const Gate& gate, double theta,
                        const TruncationPolicy& policy, Picture picture) {
  const Monomial& g = gate.generator;
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  const double dir = picture == Picture::kHeisenberg ? 1.0 : -1.0;
  auto& terms = op.terms();

  std::vector<std::pair<Monomial, double>> anti;
  for (auto& kv : terms) {
    if (commutes(kv.first, g)) continue;
    anti.emplace_back(kv.first, kv.second);
    kv.second *= c;
  }
  std::vector<Monomial> touched;
  touched.reserve(anti.size());
  for (const auto& [m, x] : anti) {
    Monomial mu = m ^ g;
    double v = dir * anticommutator_sign(g, m) * s * x;
    if (!policy.admits(mu, v)) continue;
    terms[mu] += v;
    touched.push_back(mu);
  }
  if (policy.is_structural()) {
    auto sweep = [&](const Monomial& m) {
      auto it = terms.find(m);
      if (it != terms.end() && std::abs(it->second) < kNumericalFloor) terms.erase(it);
    };
    for (const auto& kv : anti) sweep(kv.first);
    for (const auto& m : touched) sweep(m);
  } else {
    std::erase_if(terms, [&](const auto& kv) {
      return !kv.first.is_identity() && !policy.keeps(kv.first, kv.second);
    });
  }
}

SparseOperator conjugate_through_gate(const SparseOperator& op, const Gate& gate,
                                      double theta, const TruncationPolicy& policy,
                                      Picture picture) {
  SparseOperator out = op;
  conjugate_in_place(out, gate, theta, policy, picture);
  return out;
}

SparseOperator propagate(const SparseOperator& op, std::span<const Gate> circuit,
                         std::span<const double> params, const TruncationPolicy& policy,
                         Picture picture) {
  policy.validate();
  SparseOperator out = op;
  const size_t n = circuit.size();
  for (size_t k = 0; k < n; ++k) {
    const Gate& gate = picture == Picture::kHeisenberg ? circuit[n - 1 - k] : circuit[k];
    if (gate.slot >= static_cast<int>(params.size())) {
      throw std::out_of_range("gate slot beyond parameter vector");
    }
    conjugate_in_place(out, gate, gate.angle(params), policy, picture);
  }
  return out;
}

double reference_expectation(const SparseOperator& op, const FockState& reference) {
  double e = 0.0;
  for (const auto& [m, c] : op.terms()) {
    if (m.is_paired()) e += c * paired_eigenvalue(m, reference);
  }
  return e;
}

double expectation(const SparseOperator& hamiltonian, std::span<const Gate> circuit,
                   std::span<const double> params, const FockState& reference,
                   const TruncationPolicy& policy, Picture picture) {
  if (picture == Picture::kHeisenberg) {
    return reference_expectation(propagate(hamiltonian, circuit, params, policy, picture),
                                 reference);
  }
  SparseOperator rho = expand_fock_projector_unnormalized(
      reference, policy.pair_budget(reference.n_modes));
  rho = propagate(rho, circuit, params, policy, picture);
  return dot(rho, hamiltonian);
}

}  // namespace vmpe
