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

#include "vmpe/monomial.hpp"

#include <charconv>
#include <stdexcept>

namespace vmpe {

namespace {

// Gathers the even-position bits of x into the low 32 bits.
uint64_t compress_even(uint64_t x) {
  x &= 0x5555555555555555ull;
  x = (x | (x >> 1)) & 0x3333333333333333ull;
  x = (x | (x >> 2)) & 0x0F0F0F0F0F0F0F0Full;
  x = (x | (x >> 4)) & 0x00FF00FF00FF00FFull;
  x = (x | (x >> 8)) & 0x0000FFFF0000FFFFull;
  x = (x | (x >> 16)) & 0x00000000FFFFFFFFull;
  return x;
}

uint64_t prefix_xor(uint64_t x) {
  x ^= x << 1;
  x ^= x << 2;
  x ^= x << 4;
  x ^= x << 8;
  x ^= x << 16;
  x ^= x << 32;
  return x;
}

int canonical_exponent(int length) { return (length * (length - 1) / 2) & 3; }

void check_modes(int n_modes) {
  if (n_modes < 0 || n_modes > Monomial::kMaxModes) {
    throw std::invalid_argument("mode count out of range: " +
                                std::to_string(n_modes));
  }
}

}  // namespace

Monomial::Monomial(int n_modes) : n_modes_(n_modes) { check_modes(n_modes); }

Monomial::Monomial(int n_modes, uint64_t lo, uint64_t hi)
    : words_{lo, hi}, n_modes_(n_modes) {}

Monomial Monomial::from_indices(int n_modes, std::span<const int> majoranas) {
  Monomial m(n_modes);
  for (int k : majoranas) {
    if (k < 0 || k >= 2 * n_modes) {
      throw std::out_of_range("Majorana index out of range: " +
                              std::to_string(k));
    }
    m.flip(k);
  }
  return m;
}

Monomial Monomial::from_indices(int n_modes,
                                std::initializer_list<int> majoranas) {
  return from_indices(n_modes,
                      std::span<const int>(majoranas.begin(), majoranas.size()));
}

Monomial Monomial::paired(int n_modes, std::span<const int> modes) {
  Monomial m(n_modes);
  for (int j : modes) {
    if (j < 0 || j >= n_modes) throw std::out_of_range("mode out of range");
    m.set(2 * j);
    m.set(2 * j + 1);
  }
  return m;
}

uint64_t Monomial::mode_parity() const {
  uint64_t lo = compress_even(words_[0] ^ (words_[0] >> 1));
  uint64_t hi = compress_even(words_[1] ^ (words_[1] >> 1));
  return lo | (hi << 32);
}

uint64_t Monomial::mode_support() const {
  uint64_t lo = compress_even(words_[0] | (words_[0] >> 1));
  uint64_t hi = compress_even(words_[1] | (words_[1] >> 1));
  return lo | (hi << 32);
}

std::optional<std::vector<int>> Monomial::pairing() const {
  if (!is_paired()) return std::nullopt;
  std::vector<int> modes;
  uint64_t support = mode_support();
  while (support) {
    modes.push_back(std::countr_zero(support));
    support &= support - 1;
  }
  return modes;
}

std::vector<int> Monomial::indices() const {
  std::vector<int> out;
  for (int w = 0; w < 2; ++w) {
    uint64_t x = words_[w];
    while (x) {
      out.push_back(64 * w + std::countr_zero(x));
      x &= x - 1;
    }
  }
  return out;
}

std::string Monomial::to_string() const {
  int digits = std::max(1, (2 * n_modes_ + 3) / 4);
  std::string hex(digits, '0');
  static constexpr char kHex[] = "0123456789abcdef";
  for (int d = 0; d < digits; ++d) {
    int bit = 4 * d;
    unsigned nibble = static_cast<unsigned>((words_[bit >> 6] >> (bit & 63)) & 0xF);
    hex[digits - 1 - d] = kHex[nibble];
  }
  return "N=" + std::to_string(n_modes_) + ":0x" + hex;
}

Monomial Monomial::from_string(std::string_view text) {
  auto bad = [&]() {
    return std::invalid_argument("malformed monomial: " + std::string(text));
  };
  if (text.substr(0, 2) != "N=") throw bad();
  size_t colon = text.find(':');
  if (colon == std::string_view::npos) throw bad();
  int n = 0;
  auto [p, ec] = std::from_chars(text.data() + 2, text.data() + colon, n);
  if (ec != std::errc() || p != text.data() + colon) throw bad();
  check_modes(n);
  std::string_view hex = text.substr(colon + 1);
  if (hex.substr(0, 2) != "0x" && hex.substr(0, 2) != "0X") throw bad();
  hex.remove_prefix(2);
  if (hex.empty()) throw bad();
  Monomial m(n);
  int bit = 0;
  for (auto it = hex.rbegin(); it != hex.rend(); ++it, bit += 4) {
    char c = *it;
    unsigned v;
    if (c >= '0' && c <= '9') v = c - '0';
    else if (c >= 'a' && c <= 'f') v = c - 'a' + 10;
    else if (c >= 'A' && c <= 'F') v = c - 'A' + 10;
    else throw bad();
    for (int b = 0; b < 4; ++b) {
      if (!((v >> b) & 1u)) continue;
      if (bit + b >= 2 * n) throw bad();
      m.set(bit + b);
    }
  }
  return m;
}

IPower product_phase(const Monomial& a, const Monomial& b) {
  uint64_t b0 = b.word(0), b1 = b.word(1);
  uint64_t incl0 = prefix_xor(b0);
  uint64_t incl1 = prefix_xor(b1);
  uint64_t excl0 = incl0 << 1;
  uint64_t excl1 = incl1 << 1;
  if (std::popcount(b0) & 1) excl1 = ~excl1;
  int swaps = std::popcount(a.word(0) & excl0) + std::popcount(a.word(1) & excl1);
  int la = a.length(), lb = b.length();
  int lc = la + lb - 2 * (a & b).length();
  int k = canonical_exponent(la) + canonical_exponent(lb) -
          canonical_exponent(lc) + 2 * (swaps & 1);
  return ((k % 4) + 4) & 3;
}

SignedMonomial multiply(const Monomial& a, const Monomial& b) {
  return SignedMonomial{a ^ b, product_phase(a, b)};
}

FockState FockState::from_modes(int n_modes, std::span<const int> occupied) {
  FockState s{n_modes, 0};
  for (int j : occupied) {
    if (j < 0 || j >= n_modes) throw std::out_of_range("occupied mode out of range");
    s.occupation |= uint64_t{1} << j;
  }
  return s;
}

double paired_eigenvalue(const Monomial& nu, const FockState& n) {
  if (!nu.is_paired()) return 0.0;
  uint64_t modes = nu.mode_support();
  int parity = std::popcount(modes) + std::popcount(modes & n.occupation);
  return (parity & 1) ? -1.0 : 1.0;
}

}  // namespace vmpe
