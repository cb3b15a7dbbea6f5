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

#include <bit>
#include <cmath>

#include <gtest/gtest.h>

#include "vmpe/exact.hpp"
#include "vmpe/overlap.hpp"
#include "vmpe/verify.hpp"

namespace vmpe {
namespace {

double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

// Number of singlets of n orbitals holding `n_el` electrons.
double singlet_count(int n, int n_el) {
  return binomial(n + 1, n_el / 2) * binomial(n + 1, n_el / 2 + 1) / (n + 1);
}

TEST(Penalty, NullSpaceIsCorrectSectorSinglets) {
  for (int n = 1; n <= 5; ++n) {
    for (int n_exp = 0; n_exp <= 2 * n; n_exp += 2) {
      if (n == 5 && n_exp != 4) continue;  // keep the 1024-dim case to one sector
      PenaltyHamiltonian hp = build_penalty_hamiltonian(n, n_exp);
      Eigen::MatrixXcd m = exact::operator_matrix(hp.op);
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m);
      const auto& ev = es.eigenvalues();
      EXPECT_GT(ev(0), -1e-9);
      int nulls = 0;
      double min_pos = INFINITY;
      for (Eigen::Index i = 0; i < ev.size(); ++i) {
        if (std::abs(ev(i)) < 1e-9) {
          ++nulls;
        } else {
          min_pos = std::min(min_pos, ev(i));
        }
      }
      EXPECT_EQ(nulls, singlet_count(n, n_exp)) << n << " " << n_exp;
      EXPECT_NEAR(min_pos, hp.spectrum.lambda2, 1e-9);
      EXPECT_NEAR(ev(ev.size() - 1), hp.spectrum.lambda_max, 1e-9);
      EXPECT_TRUE(hp.bounds_valid());

      // Null vectors carry the expected particle count and zero total spin.
      Eigen::MatrixXcd num = exact::operator_matrix(number_operator(n));
      Eigen::MatrixXcd s2 = exact::operator_matrix(s_squared_operator(n));
      for (Eigen::Index i = 0; i < nulls; ++i) {
        const auto v = es.eigenvectors().col(i);
        EXPECT_NEAR((v.adjoint() * num * v)(0, 0).real(), n_exp, 1e-8);
        EXPECT_NEAR((v.adjoint() * s2 * v)(0, 0).real(), 0.0, 1e-8);
      }
    }
  }
}

TEST(Penalty, DefaultsAndSectorValues) {
  PenaltyHamiltonian hp = build_penalty_hamiltonian(2, 2);
  EXPECT_EQ(hp.lambda2, 1.0);
  EXPECT_NEAR(hp.lambda_p, 4.0 + 8.0 / 3.0, 1e-12);
  EXPECT_NEAR(lambda_p_formula(14, 14, LambdaPConvention::kSpinOrbitals), 196.0 + 56.0 / 3.0,
              1e-12);
  EXPECT_NEAR(lambda_p_formula(14, 14, LambdaPConvention::kSpatialOrbitals), 196.0 + 28.0 / 3.0,
              1e-12);

  // HF singlet gives p = 0; one extra electron gives p >= A.
  Eigen::MatrixXcd m = exact::operator_matrix(hp.op);
  exact::State hf = exact::fock_vector(hartree_fock_state(2, 1, 1));
  EXPECT_NEAR((hf.adjoint() * m * hf)(0, 0).real(), 0.0, 1e-12);
  exact::State extra = exact::fock_vector(hartree_fock_state(2, 2, 1));
  EXPECT_GE((extra.adjoint() * m * extra)(0, 0).real(), 1.0 - 1e-12);

  EXPECT_THROW(build_penalty_hamiltonian(2, 2, {{0.0, 0.0, 0.0}}), std::invalid_argument);
  EXPECT_THROW(build_penalty_hamiltonian(2, 2, {{-1.0, 0.0, 1.0}}), std::invalid_argument);
  EXPECT_THROW(build_penalty_hamiltonian(2, 5), std::invalid_argument);
  PenaltyOptions bad;
  bad.lambda2 = 10.0;
  bad.lambda_p = 5.0;
  EXPECT_THROW(build_penalty_hamiltonian(2, 2, bad), std::invalid_argument);
}

TEST(Penalty, ConventionsBoundTheSpectrum) {
  for (int n = 1; n <= 50; ++n) {
    for (int n_exp = 0; n_exp <= 2 * n; n_exp += 2) {
      PenaltySpectrum s = penalty_spectrum(n, n_exp, {});
      for (auto c : {LambdaPConvention::kSpinOrbitals, LambdaPConvention::kSpatialOrbitals}) {
        EXPECT_GE(lambda_p_formula(n, n_exp, c), s.lambda_max - 1e-9) << n << " " << n_exp;
      }
      EXPECT_GE(s.lambda2, 1.0);
    }
  }
}

TEST(Triplet, PenaltyOnTripletIsAtLeastLambda2) {
  PenaltyHamiltonian hp = build_penalty_hamiltonian(3, 2);
  auto trip = exact::sector_spectrum(hp.op, 3, 2, 0, 1.0);
  Eigen::MatrixXcd m = exact::operator_matrix(hp.op);
  for (Eigen::Index i = 0; i < trip.vectors.cols(); ++i) {
    auto v = trip.vectors.col(i);
    EXPECT_GE((v.adjoint() * m * v)(0, 0).real(), hp.lambda2 - 1e-10);
  }
}

TEST(Bounds, SimpleEdgeValues) {
  EXPECT_DOUBLE_EQ(lower_bound_simple(-2.0, -2.0, -1.0).value, 1.0);
  EXPECT_DOUBLE_EQ(lower_bound_simple(-1.0, -2.0, -1.0).value, 0.0);
  EXPECT_DOUBLE_EQ(lower_bound_simple(-1.5, -2.0, -1.0).value, 0.5);
  OverlapBound above = lower_bound_simple(0.0, -2.0, -1.0);
  EXPECT_DOUBLE_EQ(above.raw, -1.0);
  EXPECT_DOUBLE_EQ(above.value, 0.0);
  EXPECT_THROW(lower_bound_simple(-1.5, -1.0, -2.0), std::domain_error);
  EXPECT_THROW(lower_bound_simple(NAN, -2.0, -1.0), std::domain_error);
}

TEST(Bounds, KnownAlphaReductions) {
  const double e = -1.7, e0 = -2.0, s1 = -1.0, top = -1.4;
  EXPECT_DOUBLE_EQ(lower_bound_known_alpha(e, e0, s1, top, 0.0).raw, (s1 - e) / (s1 - e0));
  EXPECT_DOUBLE_EQ(lower_bound_known_alpha(e, e0, s1, s1, 0.3).raw,
                   lower_bound_simple(e, e0, s1).raw);
  EXPECT_THROW(lower_bound_known_alpha(e, e0, s1, top, 1.5), std::domain_error);
  EXPECT_THROW(lower_bound_known_alpha(e, s1, e0, top, 0.1), std::domain_error);
}

TEST(Bounds, PenaltyBranchesAndFallback) {
  SpectralData d{-2.0, -1.0, -1.4, 1.0, 20.0, 0.0, -1.7};
  EXPECT_DOUBLE_EQ(lower_bound_penalty(d).raw, 0.7);
  d.p = 0.1;
  EXPECT_NEAR(lower_bound_penalty(d).raw, 0.7 - 0.1 * 0.4, 1e-15);
  d.s1_top = -0.5;
  EXPECT_NEAR(lower_bound_penalty(d).raw, 0.7 + 0.1 / 20.0 * 0.5, 1e-15);
  EXPECT_NEAR(lower_bound_unknown_gap(-1.7, -2.0, -1.0, 0.1, 1.0, true).raw, 0.6, 1e-15);
  EXPECT_NEAR(lower_bound_unknown_gap(-1.7, -2.0, -1.0, 0.1, 1.0, false).raw, 0.7, 1e-15);
  EXPECT_DOUBLE_EQ(lower_bound_unknown_gap(-2.0, -2.0, -1.0, 0.0, 1.0, true).value, 1.0);
  d.p = 1.5;
  EXPECT_THROW(lower_bound_penalty(d), std::domain_error);
  d.p = -0.1;
  EXPECT_THROW(lower_bound_penalty(d), std::domain_error);
}

TEST(Bounds, SoundOnRandomSystems) {
  verify::BoundReport r = verify::overlap_bound_soundness(200, 7);
  EXPECT_EQ(r.trials, 200);
  EXPECT_EQ(r.violations, 0) << "min margin " << r.min_margin;
  EXPECT_EQ(r.ordering_violations, 0);
  EXPECT_LT(r.penalty_skipped, r.trials / 2);
}

TEST(Bounds, SimpleBoundOnRandomState) {
  // 8 modes, unconstrained random state and generic Hamiltonian.
  verify::Instance in = verify::random_instance(8, 6, 4, 3);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(exact::operator_matrix(in.hamiltonian));
  exact::State psi = exact::evolve(in.reference, in.gates, in.params);
  double e = exact::expectation(in.hamiltonian, psi);
  double e0 = es.eigenvalues()(0), e1 = es.eigenvalues()(1);
  ASSERT_LT(e0, e1 - 1e-9);
  double truth = exact::overlap(psi, es.eigenvectors().col(0));
  EXPECT_LE(lower_bound_simple(e, e0, e1).value, truth + 1e-10);
}

TEST(ExactOverlap, IdentityAndOrthogonal) {
  verify::Instance in = verify::random_instance(6, 5, 4, 2);
  exact::State psi = exact::evolve(in.reference, in.gates, in.params);
  EXPECT_NEAR(exact::exact_overlap(in.reference, in.gates, in.params, psi), 1.0, 1e-12);
  exact::State other = exact::fock_vector(FockState{6, 0b111000});
  exact::State orth = other - psi * psi.dot(other);
  EXPECT_NEAR(exact::exact_overlap(in.reference, in.gates, in.params, orth.normalized()), 0.0,
              1e-12);
  EXPECT_THROW(exact::overlap(psi, exact::State::Zero(4)), std::invalid_argument);
}

}  // namespace
}  // namespace vmpe
