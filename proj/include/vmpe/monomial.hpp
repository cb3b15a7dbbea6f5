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

#ifndef VMPE_MONOMIAL_HPP
#define VMPE_MONOMIAL_HPP

#include <array>
#include <bit>
#include <complex>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace vmpe {

/// Majorana monomial on N fermionic modes (2N Majorana generators).
///
/// Bit k (0-based) set means generator m_{k+1} is present. Mode j (0-based)
/// owns bits 2j and 2j+1. The represented operator carries the canonical
/// phase i^{L(L-1)/2}, L the length, which makes it Hermitian.
class Monomial {
 public:
  static constexpr int kMaxModes = 64;

  Monomial() = default;
  explicit Monomial(int n_modes);
  Monomial(int n_modes, uint64_t lo, uint64_t hi = 0);

  static Monomial identity(int n_modes) { return Monomial(n_modes); }
  static Monomial from_indices(int n_modes, std::span<const int> majoranas);
  static Monomial from_indices(int n_modes, std::initializer_list<int> majoranas);
  /// Monomial with both generators of every listed mode set.
  static Monomial paired(int n_modes, std::span<const int> modes);

  int n_modes() const { return n_modes_; }
  int length() const {
    return std::popcount(words_[0]) + std::popcount(words_[1]);
  }
  bool is_identity() const { return (words_[0] | words_[1]) == 0; }
  bool test(int k) const { return (words_[k >> 6] >> (k & 63)) & 1u; }
  void set(int k) { words_[k >> 6] |= uint64_t{1} << (k & 63); }
  void flip(int k) { words_[k >> 6] ^= uint64_t{1} << (k & 63); }
  uint64_t word(int w) const { return words_[w]; }

  /// Bit j set iff mode j carries exactly one generator.
  uint64_t mode_parity() const;
  /// Bit j set iff mode j carries at least one generator.
  uint64_t mode_support() const;
  /// Number of modes touched.
  int generalized_length() const { return std::popcount(mode_support()); }
  /// True iff the monomial is a product of whole pairs m_{2j-1} m_{2j}.
  bool is_paired() const { return mode_parity() == 0; }
  /// Modes of a paired monomial, ascending; empty optional if not paired.
  std::optional<std::vector<int>> pairing() const;

  std::vector<int> indices() const;

  /// "N=<modes>:0x<hex>" with ceil(2N/4) zero-padded digits.
  std::string to_string() const;
  static Monomial from_string(std::string_view text);

  Monomial operator^(const Monomial& other) const {
    return Monomial(n_modes_, words_[0] ^ other.words_[0],
                    words_[1] ^ other.words_[1]);
  }
  Monomial operator&(const Monomial& other) const {
    return Monomial(n_modes_, words_[0] & other.words_[0],
                    words_[1] & other.words_[1]);
  }

  friend bool operator==(const Monomial& a, const Monomial& b) {
    return a.words_ == b.words_ && a.n_modes_ == b.n_modes_;
  }
  /// Orders by the highest differing bit.
  friend bool operator<(const Monomial& a, const Monomial& b) {
    if (a.words_[1] != b.words_[1]) return a.words_[1] < b.words_[1];
    return a.words_[0] < b.words_[0];
  }

  size_t hash() const {
    uint64_t h = words_[0] * 0x9E3779B97F4A7C15ull;
    h ^= (words_[1] + 0x632BE59BD9B4E019ull) * 0xC2B2AE3D27D4EB4Full;
    return static_cast<size_t>(h ^ (h >> 29));
  }

 private:
  std::array<uint64_t, 2> words_{0, 0};
  int n_modes_ = 0;
};

struct MonomialHash {
  size_t operator()(const Monomial& m) const { return m.hash(); }
};

/// Power of i in {0,1,2,3}.
using IPower = int;

inline std::complex<double> i_pow(IPower k) {
  switch (k & 3) {
    case 0: return {1.0, 0.0};
    case 1: return {0.0, 1.0};
    case 2: return {-1.0, 0.0};
    default: return {0.0, -1.0};
  }
}

struct SignedMonomial {
  Monomial monomial;
  IPower phase = 0;  // product equals i^phase * monomial

  std::complex<double> factor() const { return i_pow(phase); }
};

/// M_a M_b = i^phase M_{a xor b}.
SignedMonomial multiply(const Monomial& a, const Monomial& b);
/// Phase exponent of the product only.
IPower product_phase(const Monomial& a, const Monomial& b);

inline bool commutes(const Monomial& a, const Monomial& b) {
  int overlap = (a & b).length();
  return ((a.length() * b.length() - overlap) & 1) == 0;
}

/// Real factor i * i^phase(a,b) for anticommuting a, b. Always +1 or -1.
inline int anticommutator_sign(const Monomial& a, const Monomial& b) {
  IPower k = (product_phase(a, b) + 1) & 3;
  return k == 0 ? 1 : -1;
}

/// Occupation-number basis state. Bit j set means mode j occupied.
struct FockState {
  int n_modes = 0;
  uint64_t occupation = 0;

  bool occupied(int j) const { return (occupation >> j) & 1u; }
  int n_particles() const { return std::popcount(occupation); }
  static FockState from_modes(int n_modes, std::span<const int> occupied);
};

/// <n|M_nu|n> for paired nu; zero if nu is not paired.
double paired_eigenvalue(const Monomial& nu, const FockState& n);

}  // namespace vmpe

template <>
struct std::hash<vmpe::Monomial> {
  size_t operator()(const vmpe::Monomial& m) const { return m.hash(); }
};

#endif  // VMPE_MONOMIAL_HPP
