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

#include "vmpe/sparse_operator.hpp"

#include <charconv>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace vmpe {

double dot(const SparseOperator& a, const SparseOperator& b) {
  const SparseOperator& small = a.size() <= b.size() ? a : b;
  const SparseOperator& large = a.size() <= b.size() ? b : a;
  double sum = 0.0;
  for (const auto& [m, c] : small.terms()) {
    auto it = large.terms().find(m);
    if (it != large.terms().end()) sum += c * it->second;
  }
  return sum;
}

ComplexOperator multiply(const ComplexOperator& a, const ComplexOperator& b) {
  ComplexOperator out(std::max(a.n_modes(), b.n_modes()));
  for (const auto& [ma, ca] : a.terms()) {
    for (const auto& [mb, cb] : b.terms()) {
      SignedMonomial p = multiply(ma, mb);
      out.add(p.monomial, ca * cb * p.factor());
    }
  }
  return out;
}

ComplexOperator to_complex(const SparseOperator& op) {
  ComplexOperator out(op.n_modes());
  out.reserve(op.size());
  for (const auto& [m, c] : op.terms()) out.set(m, c);
  return out;
}

SparseOperator to_real(const ComplexOperator& op, double tol) {
  SparseOperator out(op.n_modes());
  out.reserve(op.size());
  for (const auto& [m, c] : op.terms()) {
    if (std::abs(c.imag()) > tol) {
      throw std::domain_error("non-Hermitian term " + m.to_string() +
                              " imag=" + std::to_string(c.imag()));
    }
    out.set(m, c.real());
  }
  return out;
}

void write_operator(std::ostream& os, const SparseOperator& op) {
  os << "# n_modes=" << op.n_modes() << "\n";
  char buf[64];
  for (const auto& [m, c] : op.sorted_terms()) {
    std::snprintf(buf, sizeof buf, "%.17g", c);
    os << m.to_string() << '\t' << buf << '\n';
  }
}

SparseOperator read_operator(std::istream& is) {
  SparseOperator op;
  bool have_modes = false;
  std::string line;
  int line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    if (line.empty()) continue;
    if (line[0] == '#') {
      auto pos = line.find("n_modes=");
      if (pos != std::string::npos) {
        op = SparseOperator(std::stoi(line.substr(pos + 8)));
        have_modes = true;
      }
      continue;
    }
    std::istringstream ls(line);
    std::string mono, coeff;
    if (!(ls >> mono >> coeff)) {
      throw std::invalid_argument("operator line " + std::to_string(line_no) +
                                  ": expected monomial and coefficient");
    }
    Monomial m = Monomial::from_string(mono);
    if (!have_modes) {
      op = SparseOperator(m.n_modes());
      have_modes = true;
    } else if (m.n_modes() != op.n_modes()) {
      throw std::invalid_argument("operator line " + std::to_string(line_no) +
                                  ": mode count mismatch");
    }
    op.add(m, std::stod(coeff));
  }
  return op;
}

ComplexOperator ladder_product(int n_modes, std::span<const Ladder> ops,
                               std::complex<double> coeff) {
  using C = std::complex<double>;
  std::vector<std::pair<Monomial, C>> acc{{Monomial(n_modes), coeff}};
  for (const Ladder& l : ops) {
    if (l.mode < 0 || l.mode >= n_modes) throw std::out_of_range("ladder mode");
    Monomial x = Monomial::from_indices(n_modes, {2 * l.mode});
    Monomial y = Monomial::from_indices(n_modes, {2 * l.mode + 1});
    C cy = l.dagger ? C(0.0, -0.5) : C(0.0, 0.5);
    std::vector<std::pair<Monomial, C>> next;
    next.reserve(acc.size() * 2);
    for (const auto& [m, c] : acc) {
      SignedMonomial px = multiply(m, x);
      SignedMonomial py = multiply(m, y);
      next.emplace_back(px.monomial, c * 0.5 * px.factor());
      next.emplace_back(py.monomial, c * cy * py.factor());
    }
    acc.swap(next);
  }
  ComplexOperator out(n_modes);
  for (const auto& [m, c] : acc) out.add(m, c);
  std::erase_if(out.terms(), [](const auto& kv) { return std::abs(kv.second) == 0.0; });
  return out;
}

}  // namespace vmpe
