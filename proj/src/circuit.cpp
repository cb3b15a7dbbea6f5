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

#include "vmpe/circuit.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <json.hpp>

namespace vmpe {

std::vector<Gate> generator_gates(const ComplexOperator& generator, int slot) {
  std::vector<Gate> gates;
  for (const auto& [m, z] : generator.sorted_terms()) {
    if (std::abs(z) < 1e-14) continue;
    if (std::abs(z.real()) > 1e-12) {
      throw std::invalid_argument("generator_gates: generator is not anti-Hermitian");
    }
    // z M = -i w M with w = -Im z; exp(theta z M) = exp(-i (2 w theta) M / 2).
    gates.push_back(Gate{m, slot, -2.0 * z.imag()});
  }
  for (size_t i = 0; i < gates.size(); ++i) {
    for (size_t j = i + 1; j < gates.size(); ++j) {
      if (!commutes(gates[i].generator, gates[j].generator)) {
        throw std::invalid_argument("generator_gates: terms do not commute");
      }
    }
  }
  return gates;
}

ComplexOperator single_excitation_generator(int n_modes, int p, int q) {
  if (p == q) throw std::invalid_argument("single excitation needs p != q");
  Ladder fwd[] = {{p, true}, {q, false}};
  Ladder bwd[] = {{q, true}, {p, false}};
  ComplexOperator g = ladder_product(n_modes, fwd);
  g += ladder_product(n_modes, bwd, -1.0);
  g.prune(1e-14);
  return g;
}

ComplexOperator double_excitation_generator(int n_modes, int i, int j, int a, int b) {
  if (i == j || a == b) throw std::invalid_argument("double excitation needs distinct modes");
  Ladder fwd[] = {{a, true}, {b, true}, {j, false}, {i, false}};
  Ladder bwd[] = {{i, true}, {j, true}, {b, false}, {a, false}};
  ComplexOperator g = ladder_product(n_modes, fwd);
  g += ladder_product(n_modes, bwd, -1.0);
  g.prune(1e-14);
  return g;
}

std::vector<Gate> single_excitation_gates(int n_modes, int p, int q, int slot) {
  return generator_gates(single_excitation_generator(n_modes, p, q), slot);
}

std::string to_string(RotationMode m) {
  switch (m) {
    case RotationMode::kNone: return "none";
    case RotationMode::kRestricted: return "restricted";
    case RotationMode::kUnrestricted: return "unrestricted";
  }
  return "none";
}

RotationMode rotation_mode_from_string(const std::string& s) {
  if (s == "none") return RotationMode::kNone;
  if (s == "restricted") return RotationMode::kRestricted;
  if (s == "unrestricted") return RotationMode::kUnrestricted;
  throw std::invalid_argument("unknown rotation mode '" + s + "'");
}

namespace {

void append_gates(std::vector<Gate>& out, const std::vector<CircuitElement>& elements) {
  for (const auto& e : elements) out.insert(out.end(), e.gates.begin(), e.gates.end());
}

int next_slot(const FermionicCircuit& c) { return static_cast<int>(c.params.size()); }

std::string sector_name(RotationSector s) {
  switch (s) {
    case RotationSector::kAlpha: return "a";
    case RotationSector::kBeta: return "b";
    case RotationSector::kBoth: return "ab";
  }
  return "ab";
}

RotationSector sector_from_name(const std::string& s) {
  if (s == "a") return RotationSector::kAlpha;
  if (s == "b") return RotationSector::kBeta;
  if (s == "ab") return RotationSector::kBoth;
  throw std::invalid_argument("unknown rotation sector '" + s + "'");
}

CircuitElement rotation_element(int n_spatial, SpinOrdering ordering, const OrbitalRotation& r,
                                int slot) {
  CircuitElement e;
  e.label = "R " + std::to_string(r.p) + "," + std::to_string(r.q) + " " + sector_name(r.sector);
  int n = 2 * n_spatial;
  for (Spin s : {Spin::kAlpha, Spin::kBeta}) {
    if (r.sector == RotationSector::kAlpha && s == Spin::kBeta) continue;
    if (r.sector == RotationSector::kBeta && s == Spin::kAlpha) continue;
    auto g = single_excitation_gates(n, spin_orbital(r.p, s, n_spatial, ordering),
                                     spin_orbital(r.q, s, n_spatial, ordering), slot);
    e.gates.insert(e.gates.end(), g.begin(), g.end());
  }
  return e;
}

}  // namespace

std::vector<Gate> FermionicCircuit::gates() const {
  std::vector<Gate> out = body_gates();
  append_gates(out, rotations);
  return out;
}

std::vector<Gate> FermionicCircuit::body_gates() const {
  std::vector<Gate> out;
  append_gates(out, body);
  return out;
}

std::vector<Gate> FermionicCircuit::rotation_gates() const {
  std::vector<Gate> out;
  append_gates(out, rotations);
  return out;
}

std::vector<OrbitalRotation> FermionicCircuit::orbital_rotations() const {
  std::vector<OrbitalRotation> out = rotation_specs;
  for (size_t k = 0; k < out.size(); ++k) out[k].theta = params[rotation_slots[k]];
  return out;
}

int FermionicCircuit::prepend_body(CircuitElement element, double theta) {
  int slot = next_slot(*this);
  for (auto& g : element.gates) g.slot = slot;
  params.push_back(theta);
  body.insert(body.begin(), std::move(element));
  return slot;
}

int FermionicCircuit::append_body(CircuitElement element, double theta) {
  int slot = next_slot(*this);
  for (auto& g : element.gates) g.slot = slot;
  params.push_back(theta);
  body.push_back(std::move(element));
  return slot;
}

FermionicCircuit make_reference_circuit(int n_spatial, int n_alpha, int n_beta,
                                        RotationMode rotations, SpinOrdering ordering) {
  FermionicCircuit c;
  c.n_spatial = n_spatial;
  c.ordering = ordering;
  c.reference = hartree_fock_state(n_spatial, n_alpha, n_beta, ordering);
  if (rotations == RotationMode::kNone) return c;
  for (int p = 0; p < n_spatial; ++p) {
    for (int q = p + 1; q < n_spatial; ++q) {
      if (rotations == RotationMode::kRestricted) {
        OrbitalRotation r{p, q, 0.0, RotationSector::kBoth};
        int slot = next_slot(c);
        c.params.push_back(0.0);
        c.rotations.push_back(rotation_element(n_spatial, ordering, r, slot));
        c.rotation_specs.push_back(r);
        c.rotation_slots.push_back(slot);
      } else {
        for (auto sector : {RotationSector::kAlpha, RotationSector::kBeta}) {
          OrbitalRotation r{p, q, 0.0, sector};
          int slot = next_slot(c);
          c.params.push_back(0.0);
          c.rotations.push_back(rotation_element(n_spatial, ordering, r, slot));
          c.rotation_specs.push_back(r);
          c.rotation_slots.push_back(slot);
        }
      }
    }
  }
  return c;
}

namespace {

using nlohmann::json;

json gates_json(const std::vector<Gate>& gates) {
  json a = json::array();
  for (const auto& g : gates) {
    a.push_back({{"generator", g.generator.to_string()}, {"slot", g.slot}, {"sign", g.sign}});
  }
  return a;
}

std::vector<Gate> gates_from_json(const json& a, int n_modes, size_t n_params) {
  std::vector<Gate> out;
  for (const auto& g : a) {
    Gate gate{Monomial::from_string(g.at("generator").get<std::string>()),
              g.at("slot").get<int>(), g.at("sign").get<double>()};
    if (gate.generator.n_modes() != n_modes) {
      throw std::invalid_argument("circuit JSON: generator mode count mismatch");
    }
    if (gate.slot < 0 || static_cast<size_t>(gate.slot) >= n_params) {
      throw std::invalid_argument("circuit JSON: gate slot out of range");
    }
    validate_gate(gate);
    out.push_back(gate);
  }
  return out;
}

}  // namespace

std::string circuit_to_json(const FermionicCircuit& c) {
  json j;
  j["format_version"] = 1;
  j["n_spatial"] = c.n_spatial;
  j["ordering"] = c.ordering == SpinOrdering::kInterleaved ? "interleaved" : "blocked";
  std::vector<int> occ;
  for (int k = 0; k < c.reference.n_modes; ++k) {
    if (c.reference.occupied(k)) occ.push_back(k);
  }
  j["reference"] = occ;
  j["params"] = c.params;
  json body = json::array();
  for (const auto& e : c.body) body.push_back({{"label", e.label}, {"gates", gates_json(e.gates)}});
  j["body"] = body;
  json rot = json::array();
  for (size_t k = 0; k < c.rotations.size(); ++k) {
    const auto& r = c.rotation_specs[k];
    rot.push_back({{"label", c.rotations[k].label},
                   {"p", r.p},
                   {"q", r.q},
                   {"sector", sector_name(r.sector)},
                   {"slot", c.rotation_slots[k]},
                   {"gates", gates_json(c.rotations[k].gates)}});
  }
  j["rotations"] = rot;
  return j.dump(1);
}

FermionicCircuit circuit_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("circuit JSON: ") + e.what());
  }
  try {
    if (j.at("format_version").get<int>() != 1) {
      throw std::invalid_argument("circuit JSON: unsupported format_version");
    }
    FermionicCircuit c;
    c.n_spatial = j.at("n_spatial").get<int>();
    std::string ord = j.at("ordering").get<std::string>();
    if (ord != "interleaved" && ord != "blocked") {
      throw std::invalid_argument("circuit JSON: unknown ordering '" + ord + "'");
    }
    c.ordering = ord == "interleaved" ? SpinOrdering::kInterleaved : SpinOrdering::kBlocked;
    int n = c.n_modes();
    if (n < 1 || n > Monomial::kMaxModes) throw std::invalid_argument("circuit JSON: bad n_spatial");
    c.reference = FockState::from_modes(n, j.at("reference").get<std::vector<int>>());
    c.params = j.at("params").get<std::vector<double>>();
    for (const auto& e : j.at("body")) {
      c.body.push_back({gates_from_json(e.at("gates"), n, c.params.size()),
                        e.at("label").get<std::string>()});
    }
    for (const auto& e : j.at("rotations")) {
      OrbitalRotation r{e.at("p").get<int>(), e.at("q").get<int>(), 0.0,
                        sector_from_name(e.at("sector").get<std::string>())};
      c.rotations.push_back({gates_from_json(e.at("gates"), n, c.params.size()),
                             e.at("label").get<std::string>()});
      c.rotation_specs.push_back(r);
      c.rotation_slots.push_back(e.at("slot").get<int>());
    }
    return c;
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("circuit JSON: ") + e.what());
  }
}

}  // namespace vmpe
