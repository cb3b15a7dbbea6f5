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

#include <cmath>

#include <gtest/gtest.h>

#include "vmpe/exact.hpp"
#include "vmpe/hamiltonian.hpp"
#include "vmpe/instances.hpp"
#include "vmpe/propagation.hpp"

namespace vmpe {
namespace {

TEST(Propagation, FockProjectorExpansionMatchesDense) {
  instances::Rng rng(1);
  const int n = 4;
  for (int trial = 0; trial < 5; ++trial) {
    FockState st = instances::random_fock(n, trial % 5, rng);
    SparseOperator proj = expand_fock_projector(st, n);
    EXPECT_EQ(proj.size(), 16u);
    for (const auto& [m, c] : proj.terms()) EXPECT_DOUBLE_EQ(std::abs(c), 1.0 / 16.0);
    Eigen::MatrixXcd dense = exact::operator_matrix(proj);
    Eigen::MatrixXcd want = Eigen::MatrixXcd::Zero(16, 16);
    want(static_cast<Eigen::Index>(st.occupation), static_cast<Eigen::Index>(st.occupation)) = 1.0;
    EXPECT_LT((dense - want).cwiseAbs().maxCoeff(), 1e-14);
  }
  EXPECT_EQ(expand_fock_projector(FockState{6, 3}, 2).size(), 1u + 6u + 15u);
}

TEST(Propagation, SingleGateConjugationMatchesDense) {
  instances::Rng rng(2);
  const int n = 3;
  for (int trial = 0; trial < 100; ++trial) {
    Monomial g = instances::random_monomial(n, 2 + 2 * (trial % 2), rng);
    Monomial nu = instances::random_monomial(n, 1 + trial % 6, rng);
    double theta = instances::random_angles(1, rng)[0];
    SparseOperator op(n);
    op.add(nu, 1.0);
    for (Picture pic : {Picture::kHeisenberg, Picture::kSchrodinger}) {
      SparseOperator out =
          conjugate_through_gate(op, Gate{g, 0, 1.0}, theta, TruncationPolicy::exact(n), pic);
      Eigen::MatrixXcd u = std::cos(theta / 2) * Eigen::MatrixXcd::Identity(8, 8) -
                           std::complex<double>(0, std::sin(theta / 2)) * exact::monomial_matrix(g);
      Eigen::MatrixXcd m = exact::monomial_matrix(nu);
      Eigen::MatrixXcd want = pic == Picture::kHeisenberg ? Eigen::MatrixXcd(u.adjoint() * m * u)
                                                          : Eigen::MatrixXcd(u * m * u.adjoint());
      EXPECT_LT((exact::operator_matrix(out) - want).cwiseAbs().maxCoeff(), 1e-12);
    }
  }
}

TEST(Propagation, ExactCutoffMatchesStateVector) {
  instances::Rng rng(3);
  const int n_spatial = 3;
  MolecularIntegrals ints = instances::random_integrals(n_spatial, 3, rng);
  SparseOperator h = majorana_hamiltonian(ints);
  FockState ref = instances::random_fock(6, 3, rng);
  auto gates = instances::random_circuit(6, 12, 4, rng);
  auto params = instances::random_angles(12, rng);
  double want = exact::expectation(h, exact::evolve(ref, gates, params));
  for (Picture pic : {Picture::kHeisenberg, Picture::kSchrodinger}) {
    double got = expectation(h, gates, params, ref, TruncationPolicy::exact(6), pic);
    EXPECT_NEAR(got, want, 1e-10) << to_string(pic);
  }
}

TEST(Propagation, TruncationKeepsBranchesWithinCutoff) {
  instances::Rng rng(4);
  MolecularIntegrals ints = instances::random_integrals(3, 3, rng);
  SparseOperator h = majorana_hamiltonian(ints);
  auto gates = instances::random_circuit(6, 10, 4, rng);
  auto params = instances::random_angles(10, rng);
  SparseOperator out =
      propagate(h, gates, params, TruncationPolicy::length(4), Picture::kHeisenberg);
  EXPECT_LE(out.max_length(), 4);
  TruncationPolicy gen;
  gen.generalized_length_cutoff = 2;
  SparseOperator g2 = propagate(h, gates, params, gen, Picture::kHeisenberg);
  for (const auto& [m, c] : g2.terms()) {
    if (h.coefficient(m) == 0.0) EXPECT_LE(m.generalized_length(), 2);
  }
}

TEST(Propagation, PictureEquivalenceUnderLengthTruncation) {
  instances::Rng rng(5);
  MolecularIntegrals ints = instances::random_integrals(4, 4, rng);
  SparseOperator h = majorana_hamiltonian(ints);
  FockState ref = hartree_fock_state(4, 2, 2);
  auto gates = instances::random_circuit(8, 15, 4, rng);
  auto params = instances::random_angles(15, rng);
  for (int c : {4, 6}) {
    TruncationPolicy pol = TruncationPolicy::length(c);
    double eh = expectation(h, gates, params, ref, pol, Picture::kHeisenberg);
    double es = expectation(h, gates, params, ref, pol, Picture::kSchrodinger);
    EXPECT_NEAR(eh, es, 1e-12) << "cutoff " << c;
  }
}

TEST(Propagation, CoefficientTruncationDropsSmallTerms) {
  instances::Rng rng(6);
  MolecularIntegrals ints = instances::random_integrals(3, 3, rng);
  SparseOperator h = majorana_hamiltonian(ints);
  auto gates = instances::random_circuit(6, 10, 4, rng);
  auto params = instances::random_angles(10, rng, -0.3, 0.3);
  TruncationPolicy pol = TruncationPolicy::exact(6);
  pol.coeff_truncate = 1e-3;
  SparseOperator out = propagate(h, gates, params, pol, Picture::kHeisenberg);
  for (const auto& [m, c] : out.terms()) {
    if (!m.is_identity()) EXPECT_GE(std::abs(c), 1e-3);
  }
}

TEST(Propagation, InvalidInputs) {
  TruncationPolicy none;
  SparseOperator h(2);
  h.add(Monomial(2), 1.0);
  std::vector<Gate> gates{{Monomial::from_indices(2, {0, 1}), 0, 1.0}};
  std::vector<double> params{0.1};
  EXPECT_THROW(propagate(h, gates, params, none, Picture::kHeisenberg), std::invalid_argument);
  EXPECT_THROW(validate_gate(Gate{Monomial::from_indices(2, {0}), 0, 1.0}), std::invalid_argument);
  EXPECT_THROW(validate_gate(Gate{Monomial(2), 0, 1.0}), std::invalid_argument);
}

}  // namespace
}  // namespace vmpe
