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

#ifndef VMPE_EXACT_HPP
#define VMPE_EXACT_HPP

#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "vmpe/hamiltonian.hpp"
#include "vmpe/monomial.hpp"
#include "vmpe/propagation.hpp"
#include "vmpe/sparse_operator.hpp"

// Dense state-vector reference. Basis index bit p is the occupation of mode p;
// Jordan-Wigner strings run over lower modes.
namespace vmpe::exact {

inline constexpr int kMaxModes = 14;

using State = Eigen::VectorXcd;

State fock_vector(const FockState& state);

/// M_nu |psi>, built from the ladder definitions of the generators.
State apply_monomial(const Monomial& nu, const State& psi);
State apply_operator(const SparseOperator& op, const State& psi);
double expectation(const SparseOperator& op, const State& psi);

/// exp(-i theta M / 2) |psi>.
State apply_gate(const Monomial& generator, double theta, const State& psi);
/// U_L ... U_1 |ref>.
State evolve(const FockState& reference, std::span<const Gate> circuit,
             std::span<const double> params);

Eigen::MatrixXcd ladder_matrix(int n_modes, int mode, bool dagger);
/// Generator m_{k+1} from ladder matrices.
Eigen::MatrixXcd generator_matrix(int n_modes, int k);
/// i^{L(L-1)/2} times the ordered product of generator matrices.
Eigen::MatrixXcd monomial_matrix(const Monomial& nu);
/// Columns from apply_monomial.
Eigen::MatrixXcd operator_matrix(const SparseOperator& op);
/// Second-quantized Hamiltonian assembled directly from ladder matrices.
Eigen::MatrixXcd fermion_hamiltonian_matrix(const MolecularIntegrals& ints,
                                            SpinOrdering ordering = SpinOrdering::kInterleaved);

/// Eigenpairs of an operator restricted to fixed particle number and 2*Sz,
/// optionally to the S^2 = S(S+1) eigenspace. Vectors are in the full space.
struct SectorSpectrum {
  Eigen::VectorXd energies;
  Eigen::MatrixXcd vectors;
};

SectorSpectrum sector_spectrum(const SparseOperator& op, int n_spatial, int n_particles,
                               int two_sz, std::optional<double> spin_s = std::nullopt,
                               SpinOrdering ordering = SpinOrdering::kInterleaved);

/// Full spectrum of a Hermitian operator over the whole Fock space.
Eigen::VectorXd full_spectrum(const SparseOperator& op);

/// |<a|b>|^2. Throws std::invalid_argument on a dimension mismatch.
double overlap(const State& a, const State& b);
/// |<psi(params)|v>|^2 for the circuit state.
double exact_overlap(const FockState& reference, std::span<const Gate> circuit,
                     std::span<const double> params, const State& v);

}  // namespace vmpe::exact

#endif  // VMPE_EXACT_HPP
