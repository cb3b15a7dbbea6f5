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

#include "vmpe/verify.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "vmpe/exact.hpp"
#include "vmpe/hamiltonian.hpp"
#include "vmpe/instances.hpp"
#include "vmpe/surrogate.hpp"

namespace vmpe::verify {

void ErrorStats::add(double err) {
  mean_error = (mean_error * count + err) / (count + 1);
  ++count;
  max_error = std::max(max_error, err);
}

Instance random_instance(int n_modes, int n_gates, int gate_length, uint64_t seed,
                         double angle_scale) {
  instances::Rng rng(seed);
  Instance inst;
  inst.n_spatial = n_modes / 2;
  MolecularIntegrals ints = instances::random_integrals(inst.n_spatial, inst.n_spatial, rng);
  inst.hamiltonian = majorana_hamiltonian(ints);
  inst.reference =
      hartree_fock_state(inst.n_spatial, (inst.n_spatial + 1) / 2, inst.n_spatial / 2);
  inst.gates = instances::random_circuit(n_modes, n_gates, gate_length, rng);
  const double a = std::numbers::pi * angle_scale;
  inst.params = instances::random_angles(n_gates, rng, -a, a);
  return inst;
}

ErrorStats oracle_equivalence(int n_modes, int instances, int n_gates, uint64_t seed) {
  ErrorStats s;
  for (int i = 0; i < instances; ++i) {
    Instance in = random_instance(n_modes, n_gates, 4, seed + i);
    double engine = expectation(in.hamiltonian, in.gates, in.params, in.reference,
                                TruncationPolicy::exact(n_modes), Picture::kHeisenberg);
    double dense = exact::expectation(in.hamiltonian,
                                      exact::evolve(in.reference, in.gates, in.params));
    s.add(std::abs(engine - dense));
  }
  return s;
}

ErrorStats picture_equivalence(int n_modes, int instances, int n_gates, int cutoff,
                               uint64_t seed) {
  ErrorStats s;
  const TruncationPolicy pol = TruncationPolicy::length(cutoff);
  for (int i = 0; i < instances; ++i) {
    Instance in = random_instance(n_modes, n_gates, 4, seed + i);
    double h = expectation(in.hamiltonian, in.gates, in.params, in.reference, pol,
                           Picture::kHeisenberg);
    double sch = expectation(in.hamiltonian, in.gates, in.params, in.reference, pol,
                             Picture::kSchrodinger);
    s.add(std::abs(h - sch));
  }
  return s;
}

std::vector<double> cutoff_errors(int n_modes, int instances, int n_gates,
                                  const std::vector<int>& cutoffs, uint64_t seed,
                                  double angle_scale) {
  std::vector<double> mean(cutoffs.size(), 0.0);
  for (int i = 0; i < instances; ++i) {
    Instance in = random_instance(n_modes, n_gates, 4, seed + i, angle_scale);
    double want = exact::expectation(in.hamiltonian,
                                     exact::evolve(in.reference, in.gates, in.params));
    for (size_t k = 0; k < cutoffs.size(); ++k) {
      double got = expectation(in.hamiltonian, in.gates, in.params, in.reference,
                               TruncationPolicy::length(cutoffs[k]), Picture::kHeisenberg);
      mean[k] += std::abs(got - want) / instances;
    }
  }
  return mean;
}

ErrorStats gradient_check(int n_modes, int instances, int n_params, int cutoff, double h,
                          double floor, uint64_t seed) {
  ErrorStats s;
  for (int i = 0; i < instances; ++i) {
    // Two extra gates reuse slot 0, one with a negated angle.
    Instance in = random_instance(n_modes, n_params + 2, 4, seed + i);
    in.gates[n_params].slot = 0;
    in.gates[n_params + 1].slot = 0;
    in.gates[n_params + 1].sign = -1.0;
    in.params.resize(n_params);
    SurrogateGraph g = SurrogateGraph::build(in.hamiltonian, in.gates, in.reference,
                                             TruncationPolicy::length(cutoff),
                                             Picture::kHeisenberg);
    std::vector<double> grad;
    g.energy_and_gradient(in.params, grad);
    for (int k = 0; k < n_params; ++k) {
      auto p = in.params;
      p[k] += h;
      double ep = g.energy(p);
      p[k] -= 2.0 * h;
      double em = g.energy(p);
      double fd = (ep - em) / (2.0 * h);
      s.add(std::abs(grad[k] - fd) / std::max(std::abs(fd), floor));
    }
  }
  return s;
}

namespace {

using exact::State;

struct System {
  int n_spatial = 0;
  int n_expected = 0;
  Eigen::MatrixXcd h;
  Eigen::MatrixXcd penalty;
  Eigen::MatrixXcd singlets;  // columns: correct-sector singlet eigenvectors
  double e0 = 0.0, s1 = 0.0, s1_top = 0.0;
};

// Lowest energy outside the correct-sector singlet space. The Hamiltonian is
// spin-symmetric, so each particle sector's minimum shows up at the smallest
// |Sz|, and S >= 1 at the right particle count shows up at Sz = 1.
double lowest_non_singlet(const SparseOperator& h, int n_spatial, int n_expected) {
  double best = INFINITY;
  for (int n = 0; n <= 2 * n_spatial; ++n) {
    int two_sz = n == n_expected ? 2 : n % 2;
    if (two_sz > std::min(n, 2 * n_spatial - n)) continue;
    auto spec = exact::sector_spectrum(h, n_spatial, n, two_sz);
    best = std::min(best, spec.energies(0));
  }
  return best;
}

bool make_system(std::mt19937_64& rng, const PenaltyOptions& popt, System& sys) {
  std::uniform_int_distribution<int> norb(2, 4);
  sys.n_spatial = norb(rng);
  sys.n_expected = sys.n_spatial % 2 == 0 ? sys.n_spatial : sys.n_spatial - 1;
  MolecularIntegrals ints = instances::random_integrals(sys.n_spatial, sys.n_expected, rng);
  SparseOperator h = majorana_hamiltonian(ints);
  // A number penalty keeps the other particle sectors above the ground state.
  std::uniform_real_distribution<double> mu(0.5, 4.0);
  SparseOperator n = number_operator(sys.n_spatial);
  n.add(Monomial::identity(2 * sys.n_spatial), -static_cast<double>(sys.n_expected));
  ComplexOperator nc = to_complex(n);
  SparseOperator n2 = to_real(multiply(nc, nc));
  n2 *= mu(rng);
  h += n2;

  auto singlet = exact::sector_spectrum(h, sys.n_spatial, sys.n_expected, 0, 0.0);
  if (singlet.energies.size() < 2) return false;
  sys.e0 = singlet.energies(0);
  sys.s1 = singlet.energies(1);
  sys.s1_top = lowest_non_singlet(h, sys.n_spatial, sys.n_expected);
  if (!(sys.e0 < sys.s1 - 1e-8) || !(sys.e0 < sys.s1_top - 1e-8)) return false;
  sys.singlets = singlet.vectors;
  sys.h = exact::operator_matrix(h);
  sys.penalty =
      exact::operator_matrix(build_penalty_hamiltonian(sys.n_spatial, sys.n_expected, popt).op);
  return true;
}

State random_state(std::mt19937_64& rng, const System& sys) {
  std::normal_distribution<double> gauss;
  std::uniform_real_distribution<double> logu(-3.0, 0.3);
  const double sing = std::pow(10.0, logu(rng));
  const double other = std::pow(10.0, logu(rng) - 0.7);
  const Eigen::Index dim = sys.h.rows();
  const Eigen::Index ns = sys.singlets.cols();
  Eigen::VectorXcd c(ns);
  for (Eigen::Index k = 0; k < ns; ++k) c(k) = {gauss(rng), gauss(rng)};
  c *= sing;
  c(0) += 1.0;
  State psi = sys.singlets * c;
  State noise(dim);
  for (Eigen::Index k = 0; k < dim; ++k) noise(k) = {gauss(rng), gauss(rng)};
  noise -= sys.singlets * (sys.singlets.adjoint() * noise);
  psi += other * noise.normalized();
  return psi.normalized();
}

}  // namespace

BoundReport overlap_bound_soundness(int trials, uint64_t seed, const PenaltyOptions& penalty) {
  std::mt19937_64 rng(seed);
  BoundReport r;
  constexpr double kTol = 1e-10;
  System sys;
  int attempts = 0;
  while (r.trials < trials) {
    if (attempts++ % 4 == 0 || sys.h.size() == 0) {
      // A few states per system keeps the eigensolves cheap.
      while (!make_system(rng, penalty, sys)) ++r.skipped;
    }
    PenaltyHamiltonian hp = build_penalty_hamiltonian(sys.n_spatial, sys.n_expected, penalty);
    State psi = random_state(rng, sys);
    const double e = (psi.adjoint() * sys.h * psi)(0, 0).real();
    const double p = std::max(0.0, (psi.adjoint() * sys.penalty * psi)(0, 0).real());
    const double truth = std::norm(sys.singlets.col(0).dot(psi));
    const double singlet_weight = (sys.singlets.adjoint() * psi).squaredNorm();
    const double alpha_sq = std::clamp(1.0 - singlet_weight, 0.0, 1.0);
    ++r.trials;

    auto check = [&](const OverlapBound& b) {
      r.min_margin = std::min(r.min_margin, truth - b.value);
      if (b.value > truth + kTol) ++r.violations;
    };
    const double e1 = std::min(sys.s1, sys.s1_top);
    OverlapBound t1 = lower_bound_simple(e, sys.e0, e1);
    OverlapBound t2 = lower_bound_known_alpha(e, sys.e0, sys.s1, sys.s1_top, alpha_sq);
    check(t1);
    check(t2);
    bool in_range = sys.s1_top >= sys.s1 || (e > sys.e0 && e < sys.s1_top);
    if (in_range && t2.raw < t1.raw - kTol) ++r.ordering_violations;

    if (p > hp.lambda2) {
      ++r.penalty_skipped;
      continue;
    }
    SpectralData d{sys.e0, sys.s1, sys.s1_top, hp.lambda2, hp.lambda_p, p, e};
    OverlapBound t3 = lower_bound_penalty(d);
    bool below = sys.s1_top < sys.s1;
    OverlapBound t4 = lower_bound_unknown_gap(e, sys.e0, sys.s1, p, hp.lambda2, below);
    OverlapBound t4_safe = lower_bound_unknown_gap(e, sys.e0, sys.s1, p, hp.lambda2, true);
    check(t3);
    check(t4);
    check(t4_safe);
    if (t3.raw < t4.raw - kTol) ++r.ordering_violations;
  }
  return r;
}

}  // namespace vmpe::verify
