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

#ifndef VMPE_PROPAGATION_HPP
#define VMPE_PROPAGATION_HPP

#include <cmath>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "vmpe/monomial.hpp"
#include "vmpe/sparse_operator.hpp"

namespace vmpe {

/// U = exp(-i (sign * params[slot]) M / 2).
struct Gate {
  Monomial generator;
  int slot = 0;
  double sign = 1.0;

  double angle(std::span<const double> params) const { return sign * params[slot]; }
};

/// Throws std::invalid_argument unless the generator is a non-identity
/// monomial of even length.
void validate_gate(const Gate& gate);

enum class Picture { kHeisenberg, kSchrodinger };

std::string to_string(Picture p);
Picture picture_from_string(const std::string& s);

class UnsupportedPolicy : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Rules deciding which monomials survive propagation.
///
/// Acceptance rules are checked first; a monomial accepted by any of them is
/// kept. Otherwise any truncation rule that fires drops it.
struct TruncationPolicy {
  std::optional<int> length_cutoff;
  std::optional<int> generalized_length_cutoff;
  std::optional<double> coeff_truncate;
  std::optional<double> coeff_accept;
  bool paired_accept = false;

  static TruncationPolicy length(int cutoff, bool paired = false) {
    TruncationPolicy p;
    p.length_cutoff = cutoff;
    p.paired_accept = paired;
    return p;
  }
  static TruncationPolicy exact(int n_modes) { return length(2 * n_modes); }

  /// No rule depends on coefficient values.
  bool is_structural() const { return !coeff_truncate && !coeff_accept; }
  /// Throws std::invalid_argument if no length rule is set.
  void validate() const;

  /// Structural verdict for a newly generated branch.
  bool admits(const Monomial& m) const {
    if (paired_accept && m.is_paired()) return true;
    if (length_cutoff && m.length() > *length_cutoff) return false;
    if (generalized_length_cutoff && m.generalized_length() > *generalized_length_cutoff) {
      return false;
    }
    return true;
  }
  /// Branch admission: structural verdict or coefficient acceptance.
  bool admits(const Monomial& m, double coeff) const {
    if (coeff_accept && std::abs(coeff) >= *coeff_accept) return true;
    return admits(m);
  }
  /// Post-merge verdict on a live coefficient.
  bool keeps(const Monomial& m, double coeff) const;
  /// Largest number of mode pairs a propagated Fock projector may keep.
  int pair_budget(int n_modes) const;
};

/// Coefficients below this are always dropped.
inline constexpr double kNumericalFloor = 1e-15;

/// |n><n| = 2^-N sum_J prod_{j in J} (-1)^{n_j} mbar_j, keeping at most
/// `max_pairs` pairs. Coefficients are +-2^-N.
SparseOperator expand_fock_projector(const FockState& state, int max_pairs);

/// Same expansion with coefficients +-1.
SparseOperator expand_fock_projector_unnormalized(const FockState& state, int max_pairs);

/// U^dag O U (Heisenberg) or U O U^dag (Schrodinger) under the policy.
SparseOperator conjugate_through_gate(const SparseOperator& op, const Gate& gate,
                                      double theta, const TruncationPolicy& policy,
                                      Picture picture);

void conjugate_in_place(SparseOperator& op, const Gate& gate, double theta,
                        const TruncationPolicy& policy, Picture picture);

/// Gates are in state order: |psi> = U_L ... U_1 |ref>. Heisenberg conjugates
/// by U_L first, Schrodinger by U_1 first.
SparseOperator propagate(const SparseOperator& op, std::span<const Gate> circuit,
                         std::span<const double> params, const TruncationPolicy& policy,
                         Picture picture);

/// <ref| U^dag H U |ref> under the policy.
double expectation(const SparseOperator& hamiltonian, std::span<const Gate> circuit,
                   std::span<const double> params, const FockState& reference,
                   const TruncationPolicy& policy, Picture picture);

/// sum_nu c_nu <ref|M_nu|ref>.
double reference_expectation(const SparseOperator& op, const FockState& reference);

}  // namespace vmpe

#endif  // VMPE_PROPAGATION_HPP
