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

#ifndef VMPE_OVERLAP_HPP
#define VMPE_OVERLAP_HPP

#include <optional>
#include <string>

#include "vmpe/hamiltonian.hpp"
#include "vmpe/sparse_operator.hpp"

namespace vmpe {

/// Coefficients of A (N - N_exp)^2 + B Sz^2 + C S^2.
struct PenaltyConstants {
  double a = 1.0;
  double b = 0.0;
  double c = 4.0 / 3.0;
};

/// Which count N enters max(N_q - N_exp, N_exp)^2 + 2N/3.
enum class LambdaPConvention { kSpinOrbitals, kSpatialOrbitals };

std::string to_string(LambdaPConvention c);
LambdaPConvention lambda_p_convention_from_string(const std::string& s);

struct PenaltyOptions {
  PenaltyConstants constants;
  /// Lower bound on the smallest positive eigenvalue.
  double lambda2 = 1.0;
  /// Upper bound on the spectrum; empty means the convention formula.
  std::optional<double> lambda_p;
  LambdaPConvention convention = LambdaPConvention::kSpinOrbitals;
  SpinOrdering ordering = SpinOrdering::kInterleaved;
};

/// Smallest positive and largest eigenvalue, from the (N, S, Sz) sector labels.
struct PenaltySpectrum {
  double lambda2 = 0.0;
  double lambda_max = 0.0;
};
PenaltySpectrum penalty_spectrum(int n_spatial, int n_expected, const PenaltyConstants& k);

double lambda_p_formula(int n_spatial, int n_expected, LambdaPConvention c);

struct PenaltyHamiltonian {
  SparseOperator op;
  double lambda2 = 0.0;
  double lambda_p = 0.0;
  /// Exact sector values, for checking the configured bounds.
  PenaltySpectrum spectrum;
  bool bounds_valid() const {
    return lambda2 <= spectrum.lambda2 + 1e-12 && lambda_p >= spectrum.lambda_max - 1e-12;
  }
};

/// Throws std::invalid_argument for negative or all-zero constants,
/// N_exp outside [0, 2 n_spatial], or lambda2 > lambda_p.
PenaltyHamiltonian build_penalty_hamiltonian(int n_spatial, int n_expected,
                                             const PenaltyOptions& options = {});

/// Bounds are clamped to [0, 1]; `raw` is the unclamped formula.
struct OverlapBound {
  double raw = 0.0;
  double value = 0.0;
};

/// Inputs to the penalty bounds. E0 < S1 is required.
struct SpectralData {
  double e0 = 0.0;
  double s1 = 0.0;
  double s1_top = 0.0;
  double lambda2 = 1.0;
  double lambda_p = 1.0;
  double p = 0.0;
  double e = 0.0;
};

/// Energy-only bound with first excited energy E1. Throws std::domain_error
/// unless E0 < E1.
OverlapBound lower_bound_simple(double e, double e0, double e1);
/// Bound from a known non-singlet weight alpha_sq.
OverlapBound lower_bound_known_alpha(double e, double e0, double s1, double s1_top,
                                     double alpha_sq);
/// Penalty bound: p / lambda2 weights S1 - S1_top when S1_top < S1, p / lambda_p
/// otherwise. Requires 0 <= p <= lambda2 <= lambda_p.
OverlapBound lower_bound_penalty(const SpectralData& d);
/// Penalty bound without S1_top; `s1top_below` selects the branch, and
/// passing true is always safe.
OverlapBound lower_bound_unknown_gap(double e, double e0, double s1, double p, double lambda2,
                                     bool s1top_below);

}  // namespace vmpe

#endif  // VMPE_OVERLAP_HPP
