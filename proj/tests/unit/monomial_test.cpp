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

#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "vmpe/exact.hpp"
#include "vmpe/instances.hpp"
#include "vmpe/monomial.hpp"
#include "vmpe/sparse_operator.hpp"

namespace vmpe {
namespace {

Monomial from_mask(int n, uint64_t mask) { return Monomial(n, mask, 0); }

TEST(Monomial, ProductMatchesDenseMatricesExhaustively) {
  for (int n = 1; n <= 3; ++n) {
    const uint64_t count = uint64_t{1} << (2 * n);
    std::vector<Eigen::MatrixXcd> mats;
    for (uint64_t a = 0; a < count; ++a) mats.push_back(exact::monomial_matrix(from_mask(n, a)));
    for (uint64_t a = 0; a < count; ++a) {
      for (uint64_t b = 0; b < count; ++b) {
        SignedMonomial p = multiply(from_mask(n, a), from_mask(n, b));
        ASSERT_EQ(p.monomial, from_mask(n, a ^ b));
        Eigen::MatrixXcd want = mats[a] * mats[b];
        Eigen::MatrixXcd got = p.factor() * mats[a ^ b];
        ASSERT_LT((want - got).cwiseAbs().maxCoeff(), 1e-12) << "n=" << n << " a=" << a << " b=" << b;
      }
    }
  }
}

TEST(Monomial, CanonicalPhaseIsHermitian) {
  for (uint64_t a = 0; a < 64; ++a) {
    Eigen::MatrixXcd m = exact::monomial_matrix(from_mask(3, a));
    EXPECT_LT((m - m.adjoint()).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_LT((m * m - Eigen::MatrixXcd::Identity(8, 8)).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(Monomial, CommutationMatchesDense) {
  for (uint64_t a = 0; a < 64; ++a) {
    for (uint64_t b = 0; b < 64; ++b) {
      Eigen::MatrixXcd ma = exact::monomial_matrix(from_mask(3, a));
      Eigen::MatrixXcd mb = exact::monomial_matrix(from_mask(3, b));
      bool dense = (ma * mb - mb * ma).cwiseAbs().maxCoeff() < 1e-12;
      ASSERT_EQ(commutes(from_mask(3, a), from_mask(3, b)), dense);
    }
  }
}

TEST(Monomial, ProductAcrossWordBoundary) {
  instances::Rng rng(7);
  for (int trial = 0; trial < 2000; ++trial) {
    Monomial a = instances::random_monomial(64, 1 + trial % 9, rng);
    Monomial b = instances::random_monomial(64, 1 + trial % 7, rng);
    // reference swap count by direct enumeration
    int swaps = 0;
    for (int j : b.indices())
      for (int i : a.indices())
        if (i > j) ++swaps;
    auto r = [](int l) { return l * (l - 1) / 2; };
    int lc = (a ^ b).length();
    int k = (((r(a.length()) + r(b.length()) - r(lc) + 2 * swaps) % 4) + 4) % 4;
    ASSERT_EQ(product_phase(a, b), k);
  }
}

TEST(Monomial, AnticommutatorSignIsAntisymmetricAcrossPartner) {
  instances::Rng rng(11);
  int checked = 0;
  while (checked < 500) {
    Monomial g = instances::random_monomial(6, 4, rng);
    Monomial nu = instances::random_monomial(6, 1 + checked % 6, rng);
    if (commutes(g, nu)) continue;
    EXPECT_EQ(anticommutator_sign(g, nu), -anticommutator_sign(g, g ^ nu));
    ++checked;
  }
}

TEST(Monomial, PairedEigenvalueMatchesDense) {
  const int n = 3;
  for (uint64_t occ = 0; occ < 8; ++occ) {
    FockState st{n, occ};
    exact::State psi = exact::fock_vector(st);
    for (uint64_t a = 0; a < 64; ++a) {
      Monomial m = from_mask(n, a);
      exact::State out = exact::apply_monomial(m, psi);
      double dense = psi.dot(out).real();
      ASSERT_NEAR(paired_eigenvalue(m, st), dense, 1e-12) << m.to_string();
    }
  }
}

TEST(Monomial, SinglePairEigenvalueOnVacuum) {
  FockState vac{1, 0};
  EXPECT_EQ(paired_eigenvalue(Monomial::from_indices(1, {0, 1}), vac), -1.0);
  FockState full{1, 1};
  EXPECT_EQ(paired_eigenvalue(Monomial::from_indices(1, {0, 1}), full), 1.0);
}

TEST(Monomial, ApplyMonomialMatchesLadderMatrices) {
  instances::Rng rng(3);
  const int n = 4;
  for (int trial = 0; trial < 50; ++trial) {
    Monomial m = instances::random_monomial(n, 1 + trial % 8, rng);
    Eigen::MatrixXcd dense = exact::monomial_matrix(m);
    exact::State psi = exact::State::Random(16);
    EXPECT_LT((dense * psi - exact::apply_monomial(m, psi)).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(Monomial, ModeParityAndSupport) {
  Monomial m = Monomial::from_indices(64, {0, 1, 2, 127, 126, 125});
  EXPECT_EQ(m.mode_parity(), (uint64_t{1} << 1) | (uint64_t{1} << 62));
  EXPECT_EQ(m.mode_support(), 0b11 | (uint64_t{3} << 62));
  EXPECT_EQ(m.generalized_length(), 4);
  EXPECT_FALSE(m.is_paired());
  Monomial p = Monomial::from_indices(64, {0, 1, 126, 127});
  ASSERT_TRUE(p.pairing().has_value());
  EXPECT_EQ(*p.pairing(), (std::vector<int>{0, 63}));
}

TEST(Monomial, StringRoundTrip) {
  Monomial m = Monomial::from_indices(4, {0, 1});
  EXPECT_EQ(m.to_string(), "N=4:0x03");
  EXPECT_EQ(Monomial::from_string("N=4:0x003"), m);
  instances::Rng rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    Monomial r = instances::random_monomial(1 + trial % 64, 1, rng);
    EXPECT_EQ(Monomial::from_string(r.to_string()), r);
  }
  EXPECT_THROW(Monomial::from_string("N=2:0x10"), std::invalid_argument);
  EXPECT_THROW(Monomial::from_string("garbage"), std::invalid_argument);
  EXPECT_THROW(Monomial::from_string("N=65:0x1"), std::invalid_argument);
}

TEST(Monomial, IndexOutOfRangeThrows) {
  EXPECT_THROW(Monomial::from_indices(2, {4}), std::out_of_range);
}

TEST(SparseOperator, TextRoundTrip) {
  SparseOperator op(3);
  op.add(Monomial(3), -1.25);
  op.add(Monomial::from_indices(3, {0, 1}), 0.1);
  op.add(Monomial::from_indices(3, {1, 2, 4, 5}), 1.0 / 3.0);
  std::stringstream ss;
  write_operator(ss, op);
  SparseOperator back = read_operator(ss);
  ASSERT_EQ(back.size(), op.size());
  for (const auto& [m, c] : op.terms()) EXPECT_EQ(back.coefficient(m), c);
}

TEST(SparseOperator, LadderProductMatchesDense) {
  const int n = 3;
  for (int p = 0; p < n; ++p)
    for (int q = 0; q < n; ++q)
      for (bool dp : {false, true})
        for (bool dq : {false, true}) {
          const Ladder ops[] = {{p, dp}, {q, dq}};
          ComplexOperator op = ladder_product(n, ops);
          Eigen::MatrixXcd got = Eigen::MatrixXcd::Zero(8, 8);
          for (const auto& [m, c] : op.terms()) got += c * exact::monomial_matrix(m);
          Eigen::MatrixXcd want = exact::ladder_matrix(n, p, dp) * exact::ladder_matrix(n, q, dq);
          ASSERT_LT((got - want).cwiseAbs().maxCoeff(), 1e-12);
        }
}

}  // namespace
}  // namespace vmpe
