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

#include "vmpe/overlap.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace vmpe {

std::string to_string(LambdaPConvention c) {
  return c == LambdaPConvention::kSpinOrbitals ? "spin-orbitals" : "spatial-orbitals";
}

LambdaPConvention lambda_p_convention_from_string(const std::string& s) {
  if (s == "spin-orbitals" || s == "qubits") return LambdaPConvention::kSpinOrbitals;
  if (s == "spatial-orbitals") return LambdaPConvention::kSpatialOrbitals;
  throw std::invalid_argument("unknown lambda_p convention '" + s + "'");
}

PenaltySpectrum penalty_spectrum(int n_spatial, int n_expected, const PenaltyConstants& k) {
  const int nq = 2 * n_spatial;
  PenaltySpectrum out;
  out.lambda2 = std::numeric_limits<double>::infinity();
  for (int n = 0; n <= nq; ++n) {
    // Twice the spin: from N mod 2 up to the count of unpaired electrons.
    const int two_s_max = std::min(n, nq - n);
    const double dn = n - n_expected;
    for (int two_s = n % 2; two_s <= two_s_max; two_s += 2) {
      const double s = 0.5 * two_s;
      for (int two_sz = -two_s; two_sz <= two_s; two_sz += 2) {
        const double sz = 0.5 * two_sz;
        double v = k.a * dn * dn + k.b * sz * sz + k.c * s * (s + 1.0);
        out.lambda_max = std::max(out.lambda_max, v);
        if (v > 1e-12) out.lambda2 = std::min(out.lambda2, v);
      }
    }
  }
  return out;
}

double lambda_p_formula(int n_spatial, int n_expected, LambdaPConvention c) {
  const int nq = 2 * n_spatial;
  const double m = std::max(nq - n_expected, n_expected);
  const double n = c == LambdaPConvention::kSpinOrbitals ? nq : n_spatial;
  return m * m + 2.0 * n / 3.0;
}

namespace {

SparseOperator square(const SparseOperator& op) {
  ComplexOperator c = to_complex(op);
  SparseOperator out = to_real(multiply(c, c));
  out.prune(1e-14);
  return out;
}

}  // namespace

PenaltyHamiltonian build_penalty_hamiltonian(int n_spatial, int n_expected,
                                             const PenaltyOptions& options) {
  const PenaltyConstants& k = options.constants;
  if (n_spatial < 1) throw std::invalid_argument("penalty: need at least one orbital");
  if (!(k.a >= 0.0 && k.b >= 0.0 && k.c >= 0.0) || k.a + k.b + k.c == 0.0) {
    throw std::invalid_argument("penalty: constants must be nonnegative and not all zero");
  }
  if (n_expected < 0 || n_expected > 2 * n_spatial) {
    throw std::invalid_argument("penalty: particle count out of range");
  }
  const int n_modes = 2 * n_spatial;
  PenaltyHamiltonian out;
  out.op = SparseOperator(n_modes);
  const Monomial id = Monomial::identity(n_modes);

  if (k.a != 0.0) {
    SparseOperator shifted = number_operator(n_spatial, options.ordering);
    shifted.add(id, -static_cast<double>(n_expected));
    SparseOperator t = square(shifted);
    t *= k.a;
    out.op += t;
  }
  if (k.b != 0.0) {
    SparseOperator t = square(sz_operator(n_spatial, options.ordering));
    t *= k.b;
    out.op += t;
  }
  if (k.c != 0.0) {
    SparseOperator t = s_squared_operator(n_spatial, options.ordering);
    t *= k.c;
    out.op += t;
  }
  out.op.prune(1e-14);

  out.spectrum = penalty_spectrum(n_spatial, n_expected, k);
  out.lambda2 = options.lambda2;
  out.lambda_p = options.lambda_p.value_or(lambda_p_formula(n_spatial, n_expected,
                                                            options.convention));
  if (!(out.lambda2 > 0.0) || out.lambda2 > out.lambda_p) {
    throw std::invalid_argument("penalty: need 0 < lambda2 <= lambda_p");
  }
  return out;
}

namespace {

OverlapBound clamp(double raw) { return {raw, std::clamp(raw, 0.0, 1.0)}; }

void require_finite(std::initializer_list<double> xs) {
  for (double x : xs) {
    if (!std::isfinite(x)) throw std::domain_error("overlap bound: non-finite input");
  }
}

void require_gap(double e0, double s1, const char* upper) {
  if (!(e0 < s1)) {
    throw std::domain_error(std::string("overlap bound: need E0 < ") + upper);
  }
}

void require_penalty(double p, double lambda2) {
  if (!(lambda2 > 0.0)) throw std::domain_error("overlap bound: lambda2 must be positive");
  if (p < 0.0 || p > lambda2) throw std::domain_error("overlap bound: need 0 <= p <= lambda2");
}

}  // namespace

OverlapBound lower_bound_simple(double e, double e0, double e1) {
  require_finite({e, e0, e1});
  require_gap(e0, e1, "E1");
  return clamp(1.0 - (e - e0) / (e1 - e0));
}

OverlapBound lower_bound_known_alpha(double e, double e0, double s1, double s1_top,
                                     double alpha_sq) {
  require_finite({e, e0, s1, s1_top, alpha_sq});
  require_gap(e0, s1, "S1");
  if (alpha_sq < 0.0 || alpha_sq > 1.0) {
    throw std::domain_error("overlap bound: alpha_sq must lie in [0, 1]");
  }
  const double gap = s1 - e0;
  return clamp((s1 - e) / gap - alpha_sq * (s1 - s1_top) / gap);
}

OverlapBound lower_bound_penalty(const SpectralData& d) {
  require_finite({d.e, d.e0, d.s1, d.s1_top, d.p, d.lambda2, d.lambda_p});
  require_gap(d.e0, d.s1, "S1");
  require_penalty(d.p, d.lambda2);
  if (d.lambda_p < d.lambda2) throw std::domain_error("overlap bound: need lambda2 <= lambda_p");
  const double gap = d.s1 - d.e0;
  const double weight = d.s1_top < d.s1 ? d.p / d.lambda2 : d.p / d.lambda_p;
  return clamp((d.s1 - d.e) / gap - weight * (d.s1 - d.s1_top) / gap);
}

OverlapBound lower_bound_unknown_gap(double e, double e0, double s1, double p, double lambda2,
                                     bool s1top_below) {
  require_finite({e, e0, s1, p, lambda2});
  require_gap(e0, s1, "S1");
  require_penalty(p, lambda2);
  double raw = (s1 - e) / (s1 - e0);
  if (s1top_below) raw -= p / lambda2;
  return clamp(raw);
}

}  // namespace vmpe
