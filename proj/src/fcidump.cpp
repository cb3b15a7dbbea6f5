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

#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "vmpe/hamiltonian.hpp"

namespace vmpe {

namespace {

FcidumpError line_error(int line, const std::string& what) {
  return FcidumpError("FCIDUMP line " + std::to_string(line) + ": " + what);
}

std::string upper(std::string s) {
  for (char& c : s) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return s;
}

// Parses KEY=value pairs from the namelist text. List values keep only the
// first entry.
std::map<std::string, std::string> parse_namelist(const std::string& text) {
  std::map<std::string, std::string> out;
  std::string s = upper(text);
  for (char& c : s) {
    if (c == ',' || c == '\n' || c == '\r' || c == '\t') c = ' ';
  }
  size_t pos = 0;
  while ((pos = s.find('=', pos)) != std::string::npos) {
    size_t k_end = pos;
    while (k_end > 0 && s[k_end - 1] == ' ') --k_end;
    size_t k_begin = k_end;
    while (k_begin > 0 && (std::isalnum(static_cast<unsigned char>(s[k_begin - 1])) ||
                           s[k_begin - 1] == '_')) {
      --k_begin;
    }
    size_t v_begin = pos + 1;
    while (v_begin < s.size() && s[v_begin] == ' ') ++v_begin;
    size_t v_end = v_begin;
    while (v_end < s.size() && s[v_end] != ' ') ++v_end;
    out[s.substr(k_begin, k_end - k_begin)] = s.substr(v_begin, v_end - v_begin);
    pos = v_end;
  }
  return out;
}

void set_symmetric8(std::vector<double>& eri, const MolecularIntegrals& ints, int i,
                    int j, int k, int l, double v) {
  for (auto [a, b, c, d] : {std::array{i, j, k, l}, std::array{j, i, k, l},
                            std::array{i, j, l, k}, std::array{j, i, l, k},
                            std::array{k, l, i, j}, std::array{l, k, i, j},
                            std::array{k, l, j, i}, std::array{l, k, j, i}}) {
    eri[ints.index(a, b, c, d)] = v;
  }
}

void set_symmetric4(std::vector<double>& eri, const MolecularIntegrals& ints, int i,
                    int j, int k, int l, double v) {
  for (auto [a, b, c, d] : {std::array{i, j, k, l}, std::array{j, i, k, l},
                            std::array{i, j, l, k}, std::array{j, i, l, k}}) {
    eri[ints.index(a, b, c, d)] = v;
  }
}

}  // namespace

MolecularIntegrals MolecularIntegrals::zeros(int n_spatial, bool restricted) {
  MolecularIntegrals ints;
  ints.n_spatial = n_spatial;
  ints.restricted = restricted;
  ints.h1a = Eigen::MatrixXd::Zero(n_spatial, n_spatial);
  ints.h1b = ints.h1a;
  size_t n4 = static_cast<size_t>(n_spatial) * n_spatial * n_spatial * n_spatial;
  ints.eri_aa.assign(n4, 0.0);
  if (!restricted) {
    ints.eri_bb.assign(n4, 0.0);
    ints.eri_ab.assign(n4, 0.0);
  }
  return ints;
}

double MolecularIntegrals::chemist(Spin s1, Spin s2, int p, int q, int r, int s) const {
  if (restricted) return eri_aa[index(p, q, r, s)];
  if (s1 == s2) return (s1 == Spin::kAlpha ? eri_aa : eri_bb)[index(p, q, r, s)];
  if (s1 == Spin::kAlpha) return eri_ab[index(p, q, r, s)];
  return eri_ab[index(r, s, p, q)];
}

MolecularIntegrals read_fcidump(std::istream& is) {
  std::string header;
  std::string line;
  int line_no = 0;
  bool started = false, ended = false;
  while (!ended && std::getline(is, line)) {
    ++line_no;
    std::string u = upper(line);
    if (!started) {
      auto pos = u.find("&FCI");
      if (pos == std::string::npos) {
        if (u.find_first_not_of(" \t\r") == std::string::npos) continue;
        throw line_error(line_no, "expected &FCI header");
      }
      started = true;
      u = u.substr(pos + 4);
      line = line.substr(pos + 4);
    }
    auto end_pos = u.find("&END");
    if (end_pos == std::string::npos) {
      auto slash = u.find('/');
      if (slash != std::string::npos) end_pos = slash;
    }
    if (end_pos != std::string::npos) {
      header += line.substr(0, end_pos);
      ended = true;
    } else {
      header += line + " ";
    }
  }
  if (!ended) throw line_error(line_no, "unterminated header");

  auto keys = parse_namelist(header);
  auto get_int = [&](const std::string& key, std::optional<int> fallback) {
    auto it = keys.find(key);
    if (it == keys.end()) {
      if (fallback) return *fallback;
      throw line_error(line_no, "missing " + key);
    }
    try {
      return std::stoi(it->second);
    } catch (const std::exception&) {
      throw line_error(line_no, "bad value for " + key);
    }
  };
  int norb = get_int("NORB", std::nullopt);
  if (norb <= 0 || norb > Monomial::kMaxModes / 2) {
    throw line_error(line_no, "NORB out of range");
  }
  bool unrestricted = get_int("IUHF", 0) != 0;
  MolecularIntegrals ints = MolecularIntegrals::zeros(norb, !unrestricted);
  ints.n_electrons = get_int("NELEC", std::nullopt);
  ints.ms2 = get_int("MS2", 0);
  if (ints.n_electrons < 0 || ints.n_electrons > 2 * norb ||
      std::abs(ints.ms2) > ints.n_electrons || (ints.n_electrons + ints.ms2) % 2 != 0) {
    throw line_error(line_no, "inconsistent NELEC/MS2");
  }

  int section = 0;
  while (std::getline(is, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::istringstream ls(line);
    std::string value_text;
    int i, j, k, l;
    if (!(ls >> value_text >> i >> j >> k >> l)) {
      throw line_error(line_no, "expected 'value i j k l'");
    }
    for (char& c : value_text) {
      if (c == 'd' || c == 'D') c = 'e';
    }
    double v;
    try {
      size_t used = 0;
      v = std::stod(value_text, &used);
      if (used != value_text.size()) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
      throw line_error(line_no, "bad numeric value '" + value_text + "'");
    }
    if (!std::isfinite(v)) throw line_error(line_no, "non-finite value");
    for (int idx : {i, j, k, l}) {
      if (idx < 0 || idx > norb) throw line_error(line_no, "orbital index out of range");
    }
    if (i == 0 && j == 0 && k == 0 && l == 0) {
      if (unrestricted && section < 5) {
        ++section;
      } else {
        ints.core = v;
      }
      continue;
    }
    if (i == 0 || j == 0) throw line_error(line_no, "malformed index pattern");
    --i;
    --j;
    if (k == 0 && l == 0) {
      Eigen::MatrixXd* h = &ints.h1a;
      if (unrestricted) {
        if (section == 3) h = &ints.h1a;
        else if (section == 4) h = &ints.h1b;
        else throw line_error(line_no, "one-body term outside one-body section");
      }
      (*h)(i, j) = v;
      (*h)(j, i) = v;
      continue;
    }
    if (k == 0 || l == 0) throw line_error(line_no, "malformed index pattern");
    --k;
    --l;
    if (!unrestricted) {
      set_symmetric8(ints.eri_aa, ints, i, j, k, l, v);
    } else if (section == 0) {
      set_symmetric8(ints.eri_aa, ints, i, j, k, l, v);
    } else if (section == 1) {
      set_symmetric8(ints.eri_bb, ints, i, j, k, l, v);
    } else if (section == 2) {
      set_symmetric4(ints.eri_ab, ints, i, j, k, l, v);
    } else {
      throw line_error(line_no, "two-body term outside two-body section");
    }
  }
  if (!unrestricted) ints.h1b = ints.h1a;
  return ints;
}

MolecularIntegrals read_fcidump_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FcidumpError("cannot open FCIDUMP '" + path + "'");
  return read_fcidump(in);
}

void write_fcidump(std::ostream& os, const MolecularIntegrals& ints, double tol) {
  const int n = ints.n_spatial;
  os << "&FCI NORB=" << n << ",NELEC=" << ints.n_electrons << ",MS2=" << ints.ms2
     << ",\n  ORBSYM=";
  for (int p = 0; p < n; ++p) os << "1,";
  os << "\n  ISYM=1,";
  if (!ints.restricted) os << "\n  IUHF=1,";
  os << "\n &END\n";
  char buf[96];
  auto emit = [&](double v, int i, int j, int k, int l) {
    std::snprintf(buf, sizeof buf, "%23.16e %4d %4d %4d %4d\n", v, i, j, k, l);
    os << buf;
  };
  auto two_body8 = [&](const std::vector<double>& eri) {
    for (int i = 0; i < n; ++i)
      for (int j = 0; j <= i; ++j)
        for (int k = 0; k < n; ++k)
          for (int l = 0; l <= k; ++l) {
            if (i * (i + 1) / 2 + j < k * (k + 1) / 2 + l) continue;
            double v = eri[ints.index(i, j, k, l)];
            if (std::abs(v) > tol) emit(v, i + 1, j + 1, k + 1, l + 1);
          }
  };
  auto one_body = [&](const Eigen::MatrixXd& h) {
    for (int i = 0; i < n; ++i)
      for (int j = 0; j <= i; ++j)
        if (std::abs(h(i, j)) > tol) emit(h(i, j), i + 1, j + 1, 0, 0);
  };
  if (ints.restricted) {
    two_body8(ints.eri_aa);
    one_body(ints.h1a);
  } else {
    two_body8(ints.eri_aa);
    emit(0.0, 0, 0, 0, 0);
    two_body8(ints.eri_bb);
    emit(0.0, 0, 0, 0, 0);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j <= i; ++j)
        for (int k = 0; k < n; ++k)
          for (int l = 0; l <= k; ++l) {
            double v = ints.eri_ab[ints.index(i, j, k, l)];
            if (std::abs(v) > tol) emit(v, i + 1, j + 1, k + 1, l + 1);
          }
    emit(0.0, 0, 0, 0, 0);
    one_body(ints.h1a);
    emit(0.0, 0, 0, 0, 0);
    one_body(ints.h1b);
    emit(0.0, 0, 0, 0, 0);
  }
  emit(ints.core, 0, 0, 0, 0);
}

}  // namespace vmpe
