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

#ifndef VMPE_HAMILTONIAN_HPP
#define VMPE_HAMILTONIAN_HPP

#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "vmpe/monomial.hpp"
#include "vmpe/sparse_operator.hpp"

namespace vmpe {

enum class SpinOrdering { kInterleaved, kBlocked };

enum class Spin { kAlpha = 0, kBeta = 1 };

/// Spin-orbital index of spatial orbital p (0-based).
int spin_orbital(int p, Spin spin, int n_spatial, SpinOrdering ordering);

/// One- and two-electron integrals over spatial orbitals.
///
/// Two-electron blocks are chemist-ordered (pq|rs): electron 1 in p,q and
/// electron 2 in r,s. For the mixed block, electron 1 is alpha.
struct MolecularIntegrals {
  int n_spatial = 0;
  int n_electrons = 0;
  int ms2 = 0;
  double core = 0.0;
  bool restricted = true;
  Eigen::MatrixXd h1a, h1b;
  std::vector<double> eri_aa, eri_bb, eri_ab;

  static MolecularIntegrals zeros(int n_spatial, bool restricted = true);

  size_t index(int p, int q, int r, int s) const {
    size_t n = static_cast<size_t>(n_spatial);
    return ((static_cast<size_t>(p) * n + q) * n + r) * n + s;
  }
  /// (pq|rs) with p,q of spin s1 and r,s of spin s2.
  double chemist(Spin s1, Spin s2, int p, int q, int r, int s) const;
  /// <pq|rs> = (pr|qs).
  double physicist(Spin s1, Spin s2, int p, int q, int r, int s) const {
    return chemist(s1, s2, p, r, q, s);
  }
  const Eigen::MatrixXd& h1(Spin s) const { return s == Spin::kAlpha ? h1a : h1b; }

  int n_alpha() const { return (n_electrons + ms2) / 2; }
  int n_beta() const { return (n_electrons - ms2) / 2; }
};

/// Malformed or unreadable FCIDUMP input.
class FcidumpError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

MolecularIntegrals read_fcidump(std::istream& is);
MolecularIntegrals read_fcidump_file(const std::string& path);
void write_fcidump(std::ostream& os, const MolecularIntegrals& ints,
                   double tol = 1e-15);

/// H = core + sum h a^dag a + 1/2 sum (pq|rs) a^dag_p a^dag_r a_s a_q
/// as real Majorana coefficients.
SparseOperator majorana_hamiltonian(const MolecularIntegrals& ints,
                                    SpinOrdering ordering = SpinOrdering::kInterleaved,
                                    double prune = 1e-14);

SparseOperator number_operator(int n_spatial,
                               SpinOrdering ordering = SpinOrdering::kInterleaved);
SparseOperator sz_operator(int n_spatial,
                           SpinOrdering ordering = SpinOrdering::kInterleaved);
SparseOperator s_squared_operator(int n_spatial,
                                  SpinOrdering ordering = SpinOrdering::kInterleaved);

/// Lowest-index occupation with the given alpha and beta counts.
FockState hartree_fock_state(int n_spatial, int n_alpha, int n_beta,
                             SpinOrdering ordering = SpinOrdering::kInterleaved);

/// Slater-Condon energy of an occupation-number state.
double determinant_energy(const MolecularIntegrals& ints, const FockState& state,
                          SpinOrdering ordering = SpinOrdering::kInterleaved);

enum class RotationSector { kAlpha, kBeta, kBoth };

/// exp(theta (a^dag_p a_q - a^dag_q a_p)) on spatial orbitals p, q.
struct OrbitalRotation {
  int p = 0;
  int q = 0;
  double theta = 0.0;
  RotationSector sector = RotationSector::kBoth;
};

/// Per-spin orbital transform W such that R^dag a^dag_p R = sum_r a^dag_r W_rp
/// for R = R_K ... R_1, with rotations listed in application order.
Eigen::MatrixXd rotation_transform(int n_spatial, std::span<const OrbitalRotation> rotations,
                                   Spin spin);

/// Integrals of R^dag H R.
MolecularIntegrals dress_integrals(const MolecularIntegrals& ints,
                                   std::span<const OrbitalRotation> rotations);

}  // namespace vmpe

#endif  // VMPE_HAMILTONIAN_HPP
