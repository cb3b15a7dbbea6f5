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

#include "vmpe/instances.hpp"

#include <algorithm>
#include <numeric>

namespace vmpe::instances {

MolecularIntegrals random_integrals(int n_spatial, int n_electrons, Rng& rng,
                                    double two_body_scale) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const int n = n_spatial;
  MolecularIntegrals ints = MolecularIntegrals::zeros(n, true);
  ints.n_electrons = n_electrons;
  ints.ms2 = n_electrons % 2;
  ints.core = u(rng);
  for (int p = 0; p < n; ++p) {
    ints.h1a(p, p) = -2.0 + 1.5 * p / std::max(1, n - 1) + 0.2 * u(rng);
    for (int q = 0; q < p; ++q) {
      double v = 0.3 * u(rng);
      ints.h1a(p, q) = v;
      ints.h1a(q, p) = v;
    }
  }
  ints.h1b = ints.h1a;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j <= i; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l <= k; ++l) {
          if (i * (i + 1) / 2 + j < k * (k + 1) / 2 + l) continue;
          double v = two_body_scale * u(rng);
          if (i == j && k == l) v = std::abs(v) + 0.5;
          for (auto [a, b, c, d] : {std::array{i, j, k, l}, std::array{j, i, k, l},
                                    std::array{i, j, l, k}, std::array{j, i, l, k},
                                    std::array{k, l, i, j}, std::array{l, k, i, j},
                                    std::array{k, l, j, i}, std::array{l, k, j, i}}) {
            ints.eri_aa[ints.index(a, b, c, d)] = v;
          }
        }
  return ints;
}

Monomial random_monomial(int n_modes, int length, Rng& rng) {
  std::vector<int> idx(2 * n_modes);
  std::iota(idx.begin(), idx.end(), 0);
  for (int k = 0; k < length; ++k) {
    std::uniform_int_distribution<int> pick(k, 2 * n_modes - 1);
    std::swap(idx[k], idx[pick(rng)]);
  }
  return Monomial::from_indices(n_modes, std::span<const int>(idx.data(), length));
}

std::vector<Gate> random_circuit(int n_modes, int n_gates, int length, Rng& rng) {
  std::vector<Gate> gates;
  gates.reserve(n_gates);
  for (int k = 0; k < n_gates; ++k) gates.push_back({random_monomial(n_modes, length, rng), k, 1.0});
  return gates;
}

std::vector<double> random_angles(int n, Rng& rng, double lo, double hi) {
  std::uniform_real_distribution<double> u(lo, hi);
  std::vector<double> out(n);
  for (double& x : out) x = u(rng);
  return out;
}

FockState random_fock(int n_modes, int n_particles, Rng& rng) {
  std::vector<int> modes(n_modes);
  std::iota(modes.begin(), modes.end(), 0);
  std::shuffle(modes.begin(), modes.end(), rng);
  modes.resize(n_particles);
  return FockState::from_modes(n_modes, modes);
}

}  // namespace vmpe::instances
