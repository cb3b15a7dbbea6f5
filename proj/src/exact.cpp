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

#include "vmpe/exact.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>

namespace vmpe::exact {

namespace {

using cd = std::complex<double>;

void check_size(int n_modes) {
  if (n_modes < 1 || n_modes > kMaxModes) {
    throw std::invalid_argument("dense oracle supports 1.." + std::to_string(kMaxModes) +
                                " modes, got " + std::to_string(n_modes));
  }
}

double jw_sign(uint64_t basis, int mode) {
  uint64_t below = basis & ((uint64_t{1} << mode) - 1);
  return (std::popcount(below) & 1) ? -1.0 : 1.0;
}

}  // namespace

State fock_vector(const FockState& state) {
  check_size(state.n_modes);
  State psi = State::Zero(Eigen::Index{1} << state.n_modes);
  psi(static_cast<Eigen::Index>(state.occupation)) = 1.0;
  return psi;
}

namespace {

// M |basis> = amp |result> for the generator list of M.
std::pair<cd, uint64_t> monomial_on_basis(std::span<const int> gens, uint64_t basis) {
  const int len = static_cast<int>(gens.size());
  cd amp = i_pow(len * (len - 1) / 2);
  // rightmost generator acts first
  for (int t = len - 1; t >= 0; --t) {
    int k = gens[t];
    int mode = k / 2;
    bool occ = (basis >> mode) & 1u;
    double sgn = jw_sign(basis, mode);
    if (k % 2 == 0) {
      // a^dag + a
      amp *= sgn;
    } else {
      // i (a^dag - a)
      amp *= occ ? cd(0.0, -sgn) : cd(0.0, sgn);
    }
    basis ^= uint64_t{1} << mode;
  }
  return {amp, basis};
}

}  // namespace

State apply_monomial(const Monomial& nu, const State& psi) {
  const int n = nu.n_modes();
  check_size(n);
  const Eigen::Index dim = Eigen::Index{1} << n;
  if (psi.size() != dim) throw std::invalid_argument("state dimension mismatch");
  std::vector<int> gens = nu.indices();
  State out = State::Zero(dim);
  for (Eigen::Index b = 0; b < dim; ++b) {
    if (psi(b) == cd(0.0)) continue;
    auto [amp, target] = monomial_on_basis(gens, static_cast<uint64_t>(b));
    out(static_cast<Eigen::Index>(target)) += amp * psi(b);
  }
  return out;
}

State apply_operator(const SparseOperator& op, const State& psi) {
  State out = State::Zero(psi.size());
  for (const auto& [m, c] : op.terms()) out += c * apply_monomial(m, psi);
  return out;
}

double expectation(const SparseOperator& op, const State& psi) {
  return psi.dot(apply_operator(op, psi)).real() / psi.squaredNorm();
}

State apply_gate(const Monomial& generator, double theta, const State& psi) {
  return std::cos(theta / 2) * psi - cd(0.0, std::sin(theta / 2)) * apply_monomial(generator, psi);
}

State evolve(const FockState& reference, std::span<const Gate> circuit,
             std::span<const double> params) {
  State psi = fock_vector(reference);
  for (const Gate& g : circuit) psi = apply_gate(g.generator, g.angle(params), psi);
  return psi;
}

Eigen::MatrixXcd ladder_matrix(int n_modes, int mode, bool dagger) {
  check_size(n_modes);
  const Eigen::Index dim = Eigen::Index{1} << n_modes;
  Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(dim, dim);
  for (Eigen::Index b = 0; b < dim; ++b) {
    uint64_t basis = static_cast<uint64_t>(b);
    bool occ = (basis >> mode) & 1u;
    if (occ == dagger) continue;
    a(static_cast<Eigen::Index>(basis ^ (uint64_t{1} << mode)), b) = jw_sign(basis, mode);
  }
  return a;
}

Eigen::MatrixXcd generator_matrix(int n_modes, int k) {
  int mode = k / 2;
  Eigen::MatrixXcd ad = ladder_matrix(n_modes, mode, true);
  Eigen::MatrixXcd a = ladder_matrix(n_modes, mode, false);
  if (k % 2 == 0) return ad + a;
  return cd(0.0, 1.0) * (ad - a);
}

Eigen::MatrixXcd monomial_matrix(const Monomial& nu) {
  const int n = nu.n_modes();
  check_size(n);
  const Eigen::Index dim = Eigen::Index{1} << n;
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Identity(dim, dim);
  std::vector<int> gens = nu.indices();
  for (int k : gens) m = m * generator_matrix(n, k);
  const int len = static_cast<int>(gens.size());
  return i_pow(len * (len - 1) / 2) * m;
}

Eigen::MatrixXcd operator_matrix(const SparseOperator& op) {
  const int n = op.n_modes();
  check_size(n);
  const Eigen::Index dim = Eigen::Index{1} << n;
  Eigen::MatrixXcd out(dim, dim);
  for (Eigen::Index b = 0; b < dim; ++b) {
    State e = State::Zero(dim);
    e(b) = 1.0;
    out.col(b) = apply_operator(op, e);
  }
  return out;
}

Eigen::MatrixXcd fermion_hamiltonian_matrix(const MolecularIntegrals& ints,
                                            SpinOrdering ordering) {
  const int n = ints.n_spatial;
  const int n_modes = 2 * n;
  check_size(n_modes);
  std::vector<Eigen::MatrixXcd> ad(n_modes), a(n_modes);
  for (int p = 0; p < n_modes; ++p) {
    ad[p] = ladder_matrix(n_modes, p, true);
    a[p] = ladder_matrix(n_modes, p, false);
  }
  const Eigen::Index dim = Eigen::Index{1} << n_modes;
  Eigen::MatrixXcd h = ints.core * Eigen::MatrixXcd::Identity(dim, dim);
  const Spin spins[] = {Spin::kAlpha, Spin::kBeta};
  for (Spin s : spins)
    for (int p = 0; p < n; ++p)
      for (int q = 0; q < n; ++q) {
        double v = ints.h1(s)(p, q);
        if (v == 0.0) continue;
        h += v * ad[spin_orbital(p, s, n, ordering)] * a[spin_orbital(q, s, n, ordering)];
      }
  for (Spin s1 : spins)
    for (Spin s2 : spins)
      for (int p = 0; p < n; ++p)
        for (int q = 0; q < n; ++q)
          for (int r = 0; r < n; ++r)
            for (int s = 0; s < n; ++s) {
              double v = ints.chemist(s1, s2, p, q, r, s);
              if (v == 0.0) continue;
              h += 0.5 * v * ad[spin_orbital(p, s1, n, ordering)] *
                   ad[spin_orbital(r, s2, n, ordering)] * a[spin_orbital(s, s2, n, ordering)] *
                   a[spin_orbital(q, s1, n, ordering)];
            }
  return h;
}

SectorSpectrum sector_spectrum(const SparseOperator& op, int n_spatial, int n_particles,
                               int two_sz, std::optional<double> spin_s,
                               SpinOrdering ordering) {
  const int n_modes = 2 * n_spatial;
  check_size(n_modes);
  if (op.n_modes() != n_modes) throw std::invalid_argument("operator mode count mismatch");
  uint64_t alpha_mask = 0;
  for (int p = 0; p < n_spatial; ++p) {
    alpha_mask |= uint64_t{1} << spin_orbital(p, Spin::kAlpha, n_spatial, ordering);
  }
  const Eigen::Index dim = Eigen::Index{1} << n_modes;
  std::vector<Eigen::Index> basis;
  for (Eigen::Index b = 0; b < dim; ++b) {
    uint64_t u = static_cast<uint64_t>(b);
    int na = std::popcount(u & alpha_mask);
    int nb = std::popcount(u & ~alpha_mask);
    if (na + nb == n_particles && na - nb == two_sz) basis.push_back(b);
  }
  const Eigen::Index d = static_cast<Eigen::Index>(basis.size());
  if (d == 0) throw std::invalid_argument("empty symmetry sector");
  std::vector<Eigen::Index> position(dim, -1);
  for (Eigen::Index i = 0; i < d; ++i) position[basis[i]] = i;

  auto project = [&](const SparseOperator& o) {
    std::vector<std::pair<std::vector<int>, double>> terms;
    for (const auto& [m, c] : o.terms()) terms.emplace_back(m.indices(), c);
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(d, d);
    std::vector<cd> column(dim, cd(0.0));
    std::vector<char> seen(dim, 0);
    std::vector<uint64_t> touched;
    for (Eigen::Index j = 0; j < d; ++j) {
      for (const auto& [gens, c] : terms) {
        auto [amp, target] = monomial_on_basis(gens, static_cast<uint64_t>(basis[j]));
        if (!seen[target]) {
          seen[target] = 1;
          touched.push_back(target);
        }
        column[target] += c * amp;
      }
      for (uint64_t t : touched) {
        Eigen::Index row = position[static_cast<Eigen::Index>(t)];
        if (row >= 0) {
          m(row, j) = column[t];
        } else if (std::abs(column[t]) > 1e-10) {
          throw std::domain_error("operator leaks out of sector");
        }
        column[t] = 0.0;
        seen[t] = 0;
      }
      touched.clear();
    }
    return m;
  };

  Eigen::MatrixXcd h = project(op);
  Eigen::MatrixXcd sub = Eigen::MatrixXcd::Identity(d, d);
  if (spin_s) {
    Eigen::MatrixXcd s2 = project(s_squared_operator(n_spatial, ordering));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(s2);
    double target = *spin_s * (*spin_s + 1.0);
    std::vector<Eigen::Index> keep;
    for (Eigen::Index i = 0; i < d; ++i) {
      if (std::abs(es.eigenvalues()(i) - target) < 1e-8) keep.push_back(i);
    }
    if (keep.empty()) throw std::invalid_argument("no states with requested total spin");
    sub.resize(d, static_cast<Eigen::Index>(keep.size()));
    for (size_t i = 0; i < keep.size(); ++i) sub.col(i) = es.eigenvectors().col(keep[i]);
  }
  Eigen::MatrixXcd hs = sub.adjoint() * h * sub;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(hs);
  SectorSpectrum out;
  out.energies = es.eigenvalues();
  Eigen::MatrixXcd local = sub * es.eigenvectors();
  out.vectors = Eigen::MatrixXcd::Zero(dim, local.cols());
  for (Eigen::Index i = 0; i < d; ++i) out.vectors.row(basis[i]) = local.row(i);
  return out;
}

Eigen::VectorXd full_spectrum(const SparseOperator& op) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(operator_matrix(op), Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

double overlap(const State& a, const State& b) {
  if (a.size() != b.size()) throw std::invalid_argument("overlap: dimension mismatch");
  return std::norm(a.dot(b));
}

double exact_overlap(const FockState& reference, std::span<const Gate> circuit,
                     std::span<const double> params, const State& v) {
  if (v.size() != (Eigen::Index{1} << reference.n_modes)) {
    throw std::invalid_argument("overlap: dimension mismatch");
  }
  return overlap(evolve(reference, circuit, params), v);
}

}  // namespace vmpe::exact
