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

#ifndef VMPE_INSTANCES_HPP
#define VMPE_INSTANCES_HPP

#include <random>
#include <vector>

#include "vmpe/hamiltonian.hpp"
#include "vmpe/propagation.hpp"

// Seeded random problem instances for verification and benchmarking.
namespace vmpe::instances {

using Rng = std::mt19937_64;

/// Restricted integrals with the 8-fold symmetry of real orbitals.
MolecularIntegrals random_integrals(int n_spatial, int n_electrons, Rng& rng,
                                    double two_body_scale = 0.25);

Monomial random_monomial(int n_modes, int length, Rng& rng);

/// One slot per gate, unit signs.
std::vector<Gate> random_circuit(int n_modes, int n_gates, int length, Rng& rng);

std::vector<double> random_angles(int n, Rng& rng, double lo = -3.14159265358979,
                                  double hi = 3.14159265358979);

FockState random_fock(int n_modes, int n_particles, Rng& rng);

}  // namespace vmpe::instances

#endif  // VMPE_INSTANCES_HPP
