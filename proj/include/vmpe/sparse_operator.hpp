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

#ifndef VMPE_SPARSE_OPERATOR_HPP
#define VMPE_SPARSE_OPERATOR_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <iosfwd>
#include <span>
#include <unordered_map>
#include <utility>
#include <vector>

#include "vmpe/monomial.hpp"

namespace vmpe {

/// Linear combination of monomials with scalar coefficients.
template <typename Scalar>
class BasicOperator {
 public:
  using Map = std::unordered_map<Monomial, Scalar, MonomialHash>;

  BasicOperator() = default;
  explicit BasicOperator(int n_modes) : n_modes_(n_modes) {}

  int n_modes() const { return n_modes_; }
  size_t size() const { return terms_.size(); }
  bool empty() const { return terms_.empty(); }

  void add(const Monomial& m, Scalar c) { terms_[m] += c; }
  void set(const Monomial& m, Scalar c) { terms_[m] = c; }
  Scalar coefficient(const Monomial& m) const {
    auto it = terms_.find(m);
    return it == terms_.end() ? Scalar(0) : it->second;
  }

  const Map& terms() const { return terms_; }
  Map& terms() { return terms_; }
  void reserve(size_t n) { terms_.reserve(n); }

  /// Drops terms with |c| < threshold.
  void prune(double threshold) {
    std::erase_if(terms_, [&](const auto& kv) {
      return std::abs(kv.second) < threshold;
    });
  }

  int max_length() const {
    int best = 0;
    for (const auto& [m, c] : terms_) best = std::max(best, m.length());
    return best;
  }

  /// Terms in ascending monomial order.
  std::vector<std::pair<Monomial, Scalar>> sorted_terms() const {
    std::vector<std::pair<Monomial, Scalar>> out(terms_.begin(), terms_.end());
    std::sort(out.begin(), out.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    return out;
  }

  BasicOperator& operator+=(const BasicOperator& other) {
    for (const auto& [m, c] : other.terms_) terms_[m] += c;
    return *this;
  }
  BasicOperator& operator*=(Scalar s) {
    for (auto& kv : terms_) kv.second *= s;
    return *this;
  }

 private:
  Map terms_;
  int n_modes_ = 0;
};

using SparseOperator = BasicOperator<double>;
using ComplexOperator = BasicOperator<std::complex<double>>;

/// Sum over shared monomials of a_nu * b_nu.
double dot(const SparseOperator& a, const SparseOperator& b);

ComplexOperator multiply(const ComplexOperator& a, const ComplexOperator& b);
ComplexOperator to_complex(const SparseOperator& op);

/// Real part of a Hermitian combination. Throws if an imaginary part exceeds tol.
SparseOperator to_real(const ComplexOperator& op, double tol = 1e-10);

/// "# n_modes=N" header, then one "N=..:0x..<TAB>coefficient" line per term,
/// sorted by monomial.
void write_operator(std::ostream& os, const SparseOperator& op);
SparseOperator read_operator(std::istream& is);

/// Single ladder operator a_p or a_p^dagger on spin-orbital p.
struct Ladder {
  int mode;
  bool dagger;
};

/// Majorana expansion of coeff * (ordered product of ladder operators),
/// using a = (m_{2p+1} + i m_{2p+2}) / 2 in 1-based generator labels.
ComplexOperator ladder_product(int n_modes, std::span<const Ladder> ops,
                               std::complex<double> coeff = 1.0);

}  // namespace vmpe

#endif  // VMPE_SPARSE_OPERATOR_HPP
