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

#ifndef VMPE_POOL_HPP
#define VMPE_POOL_HPP

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "vmpe/circuit.hpp"
#include "vmpe/hamiltonian.hpp"
#include "vmpe/propagation.hpp"
#include "vmpe/sparse_operator.hpp"

namespace vmpe {

enum class ExcitationKind { kSingle, kSameSpinDouble, kOppositeSpinDouble };

/// One pool entry. Gates use slot 0 and share the candidate's angle.
struct PoolCandidate {
  ExcitationKind kind = ExcitationKind::kSingle;
  std::vector<int> modes;  // spin-orbitals: (p, q) or (i, j, a, b)
  std::vector<Gate> gates;
  std::string label;

  CircuitElement element() const { return {gates, label}; }
};

struct PoolOptions {
  /// Every spin-preserving pair instead of occupied to virtual only.
  bool all_pairs = false;
  /// Each double contributes all eight monomials of its class.
  bool expand_classes = false;
  SpinOrdering ordering = SpinOrdering::kInterleaved;
};

struct Pool {
  int n_modes = 0;
  std::vector<PoolCandidate> candidates;

  size_t size() const { return candidates.size(); }
  size_t count(ExcitationKind kind) const;
};

/// Spin-preserving singles (two commuting length-2 gates) and doubles (one
/// length-4 representative) from the occupied to the virtual orbitals.
Pool build_majoranic_pool(int n_spatial, int n_alpha, int n_beta, const PoolOptions& options = {});

/// Class key of an even monomial: its mode set and the parity of x-type
/// generators on those modes.
struct MonomialClass {
  uint64_t modes = 0;
  int parity = 0;
  friend bool operator==(const MonomialClass&, const MonomialClass&) = default;
};
MonomialClass monomial_class(const Monomial& m);

/// Monomials with one generator on each mode of `modes` and the given parity.
std::vector<Monomial> class_members(int n_modes, uint64_t modes, int parity);

/// Keeps the first single-gate candidate per class; composites are kept.
Pool reduce_pool(const Pool& pool);

/// Fourier form E(t) = c0 + sum_k (a_k cos kt + b_k sin kt), k <= degree.
struct Landscape {
  int degree = 1;
  double c0 = 0.0;
  double a[2] = {0.0, 0.0};
  double b[2] = {0.0, 0.0};

  double operator()(double t) const;
  double derivative(double t) const;
};

/// Three-point fit of C + A sin(t + B) from E(0), E(pi/2), E(-pi/2).
struct SinusoidFit {
  double amplitude = 0.0;  // A >= 0
  double phase = 0.0;      // B
  double offset = 0.0;     // C
  double improvement = 0.0;
  double theta_star = 0.0;

  double operator()(double t) const;
};
SinusoidFit fit_sinusoid(double e0, double e_plus, double e_minus);

/// Exact trigonometric fit of the given degree (1 or 2) from equally spaced
/// samples; degree 1 samples at 0 and +-pi/2.
Landscape fit_landscape(int degree, const std::function<double(double)>& energy);

/// Immutable snapshot for scoring candidates placed next to the reference
/// (Heisenberg) or after the body (Schrodinger).
class SelectionContext {
 public:
  /// `evolved` is the Hamiltonian propagated through the whole circuit.
  static SelectionContext heisenberg_front(SparseOperator evolved, const FockState& reference,
                                           const TruncationPolicy& policy);
  /// `state` is the reference projector propagated through the body;
  /// `observable` is the Hamiltonian conjugated through the remaining gates.
  static SelectionContext schrodinger_back(SparseOperator state, SparseOperator observable,
                                           const TruncationPolicy& policy);

  Picture picture() const { return picture_; }
  double energy() const { return energy_; }

  /// Energy with the candidate inserted at angle theta.
  double energy_at(const PoolCandidate& c, double theta) const;
  /// dE/dtheta at theta = 0.
  double gradient(const PoolCandidate& c) const;
  /// Exact single-angle landscape of the candidate.
  Landscape landscape(const PoolCandidate& c) const;

 private:
  double single_energy(const Gate& g, double theta) const;
  double single_slope(const Gate& g) const;
  SparseOperator restrict_to(const std::vector<Gate>& gates) const;

  Picture picture_ = Picture::kHeisenberg;
  TruncationPolicy policy_;
  FockState reference_;
  SparseOperator primary_;     // evolved H or propagated state
  SparseOperator observable_;  // Schrodinger only
  std::unordered_map<uint64_t, std::vector<std::pair<Monomial, double>>> buckets_;
  double energy_ = 0.0;
};

struct SelectionScore {
  size_t index = 0;
  double score = 0.0;        // |gradient| or -improvement
  double improvement = 0.0;  // GGF energy change, <= 0
  double theta_star = 0.0;
  double gradient = 0.0;
};

/// Scores are returned in the order of `active`.
std::vector<SelectionScore> score_pool_gradient(const Pool& pool, std::span<const size_t> active,
                                                const SelectionContext& ctx, int threads = 1);
std::vector<SelectionScore> score_pool_ggf(const Pool& pool, std::span<const size_t> active,
                                           const SelectionContext& ctx, int threads = 1);

/// GGF result for one candidate. Composite candidates use a degree-2 fit.
SelectionScore ggf_score(const PoolCandidate& c, const SelectionContext& ctx);
/// Minimum of a landscape relative to t = 0; `gradient` is its slope there.
SelectionScore ggf_from_landscape(const Landscape& l);

/// Highest score; ties go to the lowest candidate index.
const SelectionScore& best_score(std::span<const SelectionScore> scores);

/// Candidate indices of the top `tau` scores, ascending by index.
std::vector<size_t> trim_pool(std::span<const SelectionScore> scores, size_t tau);

/// Iteration 1 and every multiple of kappa (1-based iterations).
bool is_refresh_iteration(int iteration, int kappa);

/// label, kind and gate list per candidate.
void write_pool_csv(std::ostream& os, const Pool& pool);
/// iteration, candidate, score, rank.
void write_scores_csv(std::ostream& os, int iteration, std::span<const SelectionScore> scores,
                      bool header);

}  // namespace vmpe

#endif  // VMPE_POOL_HPP
