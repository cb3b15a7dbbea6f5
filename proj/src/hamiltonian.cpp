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

#include "vmpe/hamiltonian.hpp"

#include <array>
#include <cmath>
#include <stdexcept>

namespace vmpe {

namespace {

constexpr std::array<Spin, 2> kSpins{Spin::kAlpha, Spin::kBeta};

void accumulate(ComplexOperator& acc, const ComplexOperator& term) {
  for (const auto& [m, c] : term.terms()) acc.add(m, c);
}

ComplexOperator one_body_op(int n_modes, int p, int q, std::complex<double> c) {
  const Ladder ops[] = {{p, true}, {q, false}};
  return ladder_product(n_modes, ops, c);
}

SparseOperator finish(const ComplexOperator& op, double prune) {
  SparseOperator out = to_real(op, 1e-10);
  out.prune(prune);
  return out;
}

bool sector_has(RotationSector sector, Spin spin) {
  if (sector == RotationSector::kBoth) return true;
  return (sector == RotationSector::kAlpha) == (spin == Spin::kAlpha);
}

// Applies W to one index of a four-index tensor.
std::vector<double> transform_index(const std::vector<double>& in, const Eigen::MatrixXd& w,
                                    int n, int which) {
  std::vector<double> out(in.size(), 0.0);
  size_t stride[4] = {static_cast<size_t>(n) * n * n, static_cast<size_t>(n) * n,
                      static_cast<size_t>(n), 1};
  size_t s = stride[which];
  for (size_t base = 0; base < in.size(); ++base) {
    size_t idx = (base / s) % n;
    if (idx != 0) continue;
    for (int a = 0; a < n; ++a) {
      double sum = 0.0;
      for (int b = 0; b < n; ++b) sum += w(a, b) * in[base + b * s];
      out[base + a * s] = sum;
    }
  }
  return out;
}

std::vector<double> transform4(const std::vector<double>& eri, const Eigen::MatrixXd& w1,
                               const Eigen::MatrixXd& w2, int n) {
  std::vector<double> t = transform_index(eri, w1, n, 0);
  t = transform_index(t, w1, n, 1);
  t = transform_index(t, w2, n, 2);
  return transform_index(t, w2, n, 3);
}

}  // namespace

int spin_orbital(int p, Spin spin, int n_spatial, SpinOrdering ordering) {
  if (ordering == SpinOrdering::kInterleaved) return 2 * p + static_cast<int>(spin);
  return p + (spin == Spin::kBeta ? n_spatial : 0);
}

SparseOperator majorana_hamiltonian(const MolecularIntegrals& ints, SpinOrdering ordering,
                                    double prune) {
  const int n = ints.n_spatial;
  const int n_modes = 2 * n;
  if (n_modes > Monomial::kMaxModes) throw std::invalid_argument("too many orbitals");
  ComplexOperator acc(n_modes);
  acc.add(Monomial(n_modes), ints.core);
  for (Spin s : kSpins) {
    const Eigen::MatrixXd& h = ints.h1(s);
    for (int p = 0; p < n; ++p)
      for (int q = 0; q < n; ++q) {
        if (std::abs(h(p, q)) < 1e-14) continue;
        accumulate(acc, one_body_op(n_modes, spin_orbital(p, s, n, ordering),
                                    spin_orbital(q, s, n, ordering), h(p, q)));
      }
  }
  for (Spin s1 : kSpins)
    for (Spin s2 : kSpins)
      for (int p = 0; p < n; ++p)
        for (int q = 0; q < n; ++q)
          for (int r = 0; r < n; ++r)
            for (int s = 0; s < n; ++s) {
              double v = ints.chemist(s1, s2, p, q, r, s);
              if (std::abs(v) < 1e-14) continue;
              int P = spin_orbital(p, s1, n, ordering);
              int Q = spin_orbital(q, s1, n, ordering);
              int R = spin_orbital(r, s2, n, ordering);
              int S = spin_orbital(s, s2, n, ordering);
              if (P == R || Q == S) continue;
              const Ladder ops[] = {{P, true}, {R, true}, {S, false}, {Q, false}};
              accumulate(acc, ladder_product(n_modes, ops, 0.5 * v));
            }
  return finish(acc, prune);
}

SparseOperator number_operator(int n_spatial, SpinOrdering ordering) {
  const int n_modes = 2 * n_spatial;
  ComplexOperator acc(n_modes);
  for (Spin s : kSpins)
    for (int p = 0; p < n_spatial; ++p) {
      int P = spin_orbital(p, s, n_spatial, ordering);
      accumulate(acc, one_body_op(n_modes, P, P, 1.0));
    }
  return finish(acc, 1e-14);
}

namespace {

ComplexOperator sz_complex(int n_spatial, SpinOrdering ordering) {
  const int n_modes = 2 * n_spatial;
  ComplexOperator acc(n_modes);
  for (int p = 0; p < n_spatial; ++p) {
    int a = spin_orbital(p, Spin::kAlpha, n_spatial, ordering);
    int b = spin_orbital(p, Spin::kBeta, n_spatial, ordering);
    accumulate(acc, one_body_op(n_modes, a, a, 0.5));
    accumulate(acc, one_body_op(n_modes, b, b, -0.5));
  }
  return acc;
}

}  // namespace

SparseOperator sz_operator(int n_spatial, SpinOrdering ordering) {
  return finish(sz_complex(n_spatial, ordering), 1e-14);
}

SparseOperator s_squared_operator(int n_spatial, SpinOrdering ordering) {
  const int n_modes = 2 * n_spatial;
  ComplexOperator s_plus(n_modes), s_minus(n_modes);
  for (int p = 0; p < n_spatial; ++p) {
    int a = spin_orbital(p, Spin::kAlpha, n_spatial, ordering);
    int b = spin_orbital(p, Spin::kBeta, n_spatial, ordering);
    accumulate(s_plus, one_body_op(n_modes, a, b, 1.0));
    accumulate(s_minus, one_body_op(n_modes, b, a, 1.0));
  }
  ComplexOperator sz = sz_complex(n_spatial, ordering);
  // S^2 = S- S+ + Sz + Sz^2
  ComplexOperator total = multiply(s_minus, s_plus);
  total += sz;
  total += multiply(sz, sz);
  return finish(total, 1e-14);
}

FockState hartree_fock_state(int n_spatial, int n_alpha, int n_beta, SpinOrdering ordering) {
  if (n_alpha > n_spatial || n_beta > n_spatial || n_alpha < 0 || n_beta < 0) {
    throw std::invalid_argument("electron count exceeds orbitals");
  }
  FockState st{2 * n_spatial, 0};
  for (int p = 0; p < n_alpha; ++p)
    st.occupation |= uint64_t{1} << spin_orbital(p, Spin::kAlpha, n_spatial, ordering);
  for (int p = 0; p < n_beta; ++p)
    st.occupation |= uint64_t{1} << spin_orbital(p, Spin::kBeta, n_spatial, ordering);
  return st;
}

double determinant_energy(const MolecularIntegrals& ints, const FockState& state,
                          SpinOrdering ordering) {
  const int n = ints.n_spatial;
  std::vector<std::pair<int, Spin>> occ;
  for (Spin s : kSpins)
    for (int p = 0; p < n; ++p)
      if (state.occupied(spin_orbital(p, s, n, ordering))) occ.emplace_back(p, s);
  double e = ints.core;
  for (auto [p, s] : occ) e += ints.h1(s)(p, p);
  for (auto [p, sp] : occ)
    for (auto [q, sq] : occ) {
      e += 0.5 * ints.chemist(sp, sq, p, p, q, q);
      if (sp == sq) e -= 0.5 * ints.chemist(sp, sp, p, q, q, p);
    }
  return e;
}

Eigen::MatrixXd rotation_transform(int n_spatial, std::span<const OrbitalRotation> rotations,
                                   Spin spin) {
  Eigen::MatrixXd w = Eigen::MatrixXd::Identity(n_spatial, n_spatial);
  for (const OrbitalRotation& rot : rotations) {
    if (!sector_has(rot.sector, spin)) continue;
    if (rot.p < 0 || rot.q < 0 || rot.p >= n_spatial || rot.q >= n_spatial || rot.p == rot.q) {
      throw std::invalid_argument("invalid orbital rotation indices");
    }
    // exp(-kappa) with kappa_pq = theta, kappa_qp = -theta
    Eigen::MatrixXd g = Eigen::MatrixXd::Identity(n_spatial, n_spatial);
    double c = std::cos(rot.theta), s = std::sin(rot.theta);
    g(rot.p, rot.p) = c;
    g(rot.q, rot.q) = c;
    g(rot.p, rot.q) = -s;
    g(rot.q, rot.p) = s;
    w = w * g;
  }
  return w;
}

MolecularIntegrals dress_integrals(const MolecularIntegrals& ints,
                                   std::span<const OrbitalRotation> rotations) {
  const int n = ints.n_spatial;
  Eigen::MatrixXd wa = rotation_transform(n, rotations, Spin::kAlpha);
  Eigen::MatrixXd wb = rotation_transform(n, rotations, Spin::kBeta);
  bool same = ints.restricted && wa.isApprox(wb, 0.0);
  MolecularIntegrals out = MolecularIntegrals::zeros(n, same);
  out.n_electrons = ints.n_electrons;
  out.ms2 = ints.ms2;
  out.core = ints.core;
  out.h1a = wa * ints.h1a * wa.transpose();
  out.h1b = wb * ints.h1b * wb.transpose();
  if (same) {
    out.eri_aa = transform4(ints.eri_aa, wa, wa, n);
    return out;
  }
  auto block = [&](Spin s1, Spin s2) {
    std::vector<double> src(out.eri_aa.size());
    for (int p = 0; p < n; ++p)
      for (int q = 0; q < n; ++q)
        for (int r = 0; r < n; ++r)
          for (int s = 0; s < n; ++s)
            src[ints.index(p, q, r, s)] = ints.chemist(s1, s2, p, q, r, s);
    return src;
  };
  out.eri_aa = transform4(block(Spin::kAlpha, Spin::kAlpha), wa, wa, n);
  out.eri_bb = transform4(block(Spin::kBeta, Spin::kBeta), wb, wb, n);
  out.eri_ab = transform4(block(Spin::kAlpha, Spin::kBeta), wa, wb, n);
  return out;
}

}  // namespace vmpe
