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

#ifndef VMPE_CIRCUIT_HPP
#define VMPE_CIRCUIT_HPP

#include <iosfwd>
#include <string>
#include <vector>

#include "vmpe/hamiltonian.hpp"
#include "vmpe/propagation.hpp"
#include "vmpe/sparse_operator.hpp"

namespace vmpe {

/// Gates for exp(theta * G) where G = sum_nu z_nu M_nu is anti-Hermitian with
/// mutually commuting terms. All gates share `slot`.
std::vector<Gate> generator_gates(const ComplexOperator& generator, int slot);

/// a^dag_p a_q - a^dag_q a_p on spin-orbitals.
ComplexOperator single_excitation_generator(int n_modes, int p, int q);
/// a^dag_a a^dag_b a_j a_i - h.c. on spin-orbitals.
ComplexOperator double_excitation_generator(int n_modes, int i, int j, int a, int b);

/// exp(theta (a^dag_p a_q - a^dag_q a_p)) as two commuting length-2 gates.
std::vector<Gate> single_excitation_gates(int n_modes, int p, int q, int slot);

/// Gates sharing one parameter slot.
struct CircuitElement {
  std::vector<Gate> gates;
  std::string label;
};

enum class RotationMode { kNone, kRestricted, kUnrestricted };

std::string to_string(RotationMode m);
RotationMode rotation_mode_from_string(const std::string& s);

/// HF reference, a body of pool elements, then active orbital rotations.
///
/// State order: |psi> = R_K ... R_1 B_L ... B_1 |ref>.
struct FermionicCircuit {
  int n_spatial = 0;
  SpinOrdering ordering = SpinOrdering::kInterleaved;
  FockState reference;
  std::vector<CircuitElement> body;
  std::vector<CircuitElement> rotations;
  std::vector<OrbitalRotation> rotation_specs;  // theta read from params
  std::vector<int> rotation_slots;
  std::vector<double> params;

  int n_modes() const { return 2 * n_spatial; }
  std::vector<Gate> gates() const;
  std::vector<Gate> body_gates() const;
  std::vector<Gate> rotation_gates() const;
  /// Rotations with their current angles, in application order.
  std::vector<OrbitalRotation> orbital_rotations() const;
  /// Adds a body element next to the reference with a fresh slot.
  int prepend_body(CircuitElement element, double theta);
  /// Adds a body element after the existing body with a fresh slot.
  int append_body(CircuitElement element, double theta);
};

/// Empty body plus one rotation per spatial pair p < q and spin, all at zero.
/// Restricted rotations share a slot between spins.
FermionicCircuit make_reference_circuit(int n_spatial, int n_alpha, int n_beta,
                                        RotationMode rotations,
                                        SpinOrdering ordering = SpinOrdering::kInterleaved);

/// JSON with format_version, reference, elements, rotations and angles.
std::string circuit_to_json(const FermionicCircuit& circuit);
FermionicCircuit circuit_from_json(const std::string& text);

}  // namespace vmpe

#endif  // VMPE_CIRCUIT_HPP
