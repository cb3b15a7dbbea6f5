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

#include "vmpe/hamiltonian.hpp"
#include "vmpe/instances.hpp"
#include "vmpe/surrogate.hpp"

namespace vmpe {
namespace {

struct Case {
  SparseOperator h;
  FockState ref;
  std::vector<Gate> gates;
  std::vector<double> params;
};

Case make_case(uint64_t seed, int n_spatial, int n_gates) {
  instances::Rng rng(seed);
  Case c;
  MolecularIntegrals ints = instances::random_integrals(n_spatial, n_spatial, rng);
  c.h = majorana_hamiltonian(ints);
  c.ref = hartree_fock_state(n_spatial, (n_spatial + 1) / 2, n_spatial / 2);
  for (int k = 0; k < n_gates; ++k) {
    c.gates.push_back({instances::random_monomial(2 * n_spatial, k % 3 == 0 ? 2 : 4, rng), k, 1.0});
  }
  c.params = instances::random_angles(n_gates, rng);
  return c;
}

TEST(Surrogate, MatchesDirectPropagation) {
  for (uint64_t seed = 1; seed <= 4; ++seed) {
    Case c = make_case(seed, 4, 14);
    for (Picture pic : {Picture::kHeisenberg, Picture::kSchrodinger}) {
      for (int cutoff : {2, 4, 6, 8}) {
        for (bool paired : {false, true}) {
          if (pic == Picture::kSchrodinger && cutoff < 4) continue;
          TruncationPolicy pol = TruncationPolicy::length(cutoff, paired);
          SurrogateGraph g = SurrogateGraph::build(c.h, c.gates, c.ref, pol, pic);
          double direct = expectation(c.h, c.gates, c.params, c.ref, pol, pic);
          EXPECT_NEAR(g.energy(c.params), direct, 1e-12)
              << to_string(pic) << " c=" << cutoff << " paired=" << paired;
        }
      }
    }
  }
}

TEST(Surrogate, GeneralizedLengthMatchesDirect) {
  Case c = make_case(9, 4, 12);
  TruncationPolicy pol;
  pol.generalized_length_cutoff = 3;
  SurrogateGraph g = SurrogateGraph::build(c.h, c.gates, c.ref, pol, Picture::kHeisenberg);
  EXPECT_NEAR(g.energy(c.params),
              expectation(c.h, c.gates, c.params, c.ref, pol, Picture::kHeisenberg), 1e-12);
}

TEST(Surrogate, GradientMatchesFiniteDifferences) {
  Case c = make_case(5, 4, 12);
  c.gates[3].slot = 7;
  c.gates[3].sign = -1.0;
  for (Picture pic : {Picture::kHeisenberg, Picture::kSchrodinger}) {
    SurrogateGraph g =
        SurrogateGraph::build(c.h, c.gates, c.ref, TruncationPolicy::length(4, pic == Picture::kHeisenberg), pic);
    std::vector<double> grad;
    double e = g.energy_and_gradient(c.params, grad);
    EXPECT_NEAR(e, g.energy(c.params), 1e-13);
    for (size_t k = 0; k < c.params.size(); ++k) {
      auto p = c.params;
      p[k] += 1e-5;
      double ep = g.energy(p);
      p[k] -= 2e-5;
      double em = g.energy(p);
      double fd = (ep - em) / 2e-5;
      EXPECT_NEAR(grad[k], fd, 1e-7 * std::max(1.0, std::abs(fd))) << "param " << k;
    }
    EXPECT_EQ(grad[3], 0.0);
  }
}

TEST(Surrogate, GradientAtQuarterTurnAngles) {
  Case c = make_case(11, 4, 10);
  c.params[2] = std::acos(-1.0) / 2;
  c.params[5] = -std::acos(-1.0) / 2;
  c.params[6] = 1e-5 + std::acos(-1.0) / 2;
  SurrogateGraph g = SurrogateGraph::build(c.h, c.gates, c.ref, TruncationPolicy::length(4),
                                           Picture::kHeisenberg);
  std::vector<double> grad;
  g.energy_and_gradient(c.params, grad);
  for (size_t k = 0; k < c.params.size(); ++k) {
    auto p = c.params;
    p[k] += 1e-5;
    double ep = g.energy(p);
    p[k] -= 2e-5;
    double fd = (ep - g.energy(p)) / 2e-5;
    EXPECT_NEAR(grad[k], fd, 1e-7 * std::max(1.0, std::abs(fd))) << "param " << k;
  }
}

TEST(Surrogate, AppendLayerEqualsRebuild) {
  Case c = make_case(6, 4, 10);
  TruncationPolicy pol = TruncationPolicy::length(4, true);
  Gate extra{Monomial::from_indices(8, {0, 3, 4, 7}), 10, 1.0};
  auto params = c.params;
  params.push_back(0.77);

  SurrogateGraph h = SurrogateGraph::build(c.h, c.gates, c.ref, pol, Picture::kHeisenberg);
  h.append_layer(extra);
  std::vector<Gate> front = c.gates;
  front.insert(front.begin(), extra);
  SurrogateGraph hr = SurrogateGraph::build(c.h, front, c.ref, pol, Picture::kHeisenberg);
  EXPECT_NEAR(h.energy(params), hr.energy(params), 1e-12);
  EXPECT_EQ(h.circuit().front().slot, 10);

  TruncationPolicy spol = TruncationPolicy::length(4);
  SurrogateGraph s = SurrogateGraph::build(c.h, c.gates, c.ref, spol, Picture::kSchrodinger);
  s.append_layer(extra);
  std::vector<Gate> back = c.gates;
  back.push_back(extra);
  SurrogateGraph sr = SurrogateGraph::build(c.h, back, c.ref, spol, Picture::kSchrodinger);
  EXPECT_NEAR(s.energy(params), sr.energy(params), 1e-12);
}

TEST(Surrogate, SetReferenceReweights) {
  Case c = make_case(7, 3, 8);
  FockState other{6, 0b010110};
  for (Picture pic : {Picture::kHeisenberg, Picture::kSchrodinger}) {
    TruncationPolicy pol = TruncationPolicy::length(6);
    SurrogateGraph g = SurrogateGraph::build(c.h, c.gates, c.ref, pol, pic);
    g.set_reference(other);
    EXPECT_NEAR(g.energy(c.params), expectation(c.h, c.gates, c.params, other, pol, pic), 1e-12);
  }
}

TEST(Surrogate, RejectsCoefficientPolicyAndBlowsUp) {
  Case c = make_case(8, 3, 6);
  TruncationPolicy pol = TruncationPolicy::length(4);
  pol.coeff_truncate = 1e-6;
  EXPECT_THROW(SurrogateGraph::build(c.h, c.gates, c.ref, pol, Picture::kHeisenberg),
               UnsupportedPolicy);
  EXPECT_THROW(SurrogateGraph::build(c.h, c.gates, c.ref, TruncationPolicy::length(12),
                                     Picture::kHeisenberg, 50),
               PropagationBlowup);
}

TEST(Surrogate, ValuesAfterFullDepthMatchPropagate) {
  Case c = make_case(10, 3, 8);
  TruncationPolicy pol = TruncationPolicy::length(4);
  SurrogateGraph g = SurrogateGraph::build(c.h, c.gates, c.ref, pol, Picture::kHeisenberg);
  SparseOperator a = g.values_after(c.params, g.n_layers());
  SparseOperator b = propagate(c.h, c.gates, c.params, pol, Picture::kHeisenberg);
  for (const auto& [m, v] : b.terms()) EXPECT_NEAR(a.coefficient(m), v, 1e-12);
  for (const auto& [m, v] : a.terms()) EXPECT_NEAR(b.coefficient(m), v, 1e-12);
}

}  // namespace
}  // namespace vmpe
