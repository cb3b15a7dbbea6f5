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

#include <fstream>
#include <sstream>

#include <gtest/gtest.h>
#include <json.hpp>

#include "vmpe/adapt.hpp"
#include "vmpe/exact.hpp"

namespace vmpe {
namespace {

struct Molecule {
  MolecularIntegrals ints;
  double fci_energy;
};

Molecule load(const std::string& stem) {
  std::string base = std::string(VMPE_FIXTURE_DIR) + "/" + stem;
  std::ifstream meta(base + ".json");
  nlohmann::json j = nlohmann::json::parse(meta);
  return {read_fcidump_file(base + ".fcidump"), j["fci_energy"].get<double>()};
}

double circuit_energy(const MolecularIntegrals& ints, const FermionicCircuit& c) {
  SparseOperator h = majorana_hamiltonian(ints);
  auto gates = c.gates();
  return exact::expectation(h, exact::evolve(c.reference, gates, c.params));
}

TEST(Adapt, H2ReachesFci) {
  Molecule m = load("h2_sto3g");
  RunConfig cfg;
  cfg.cutoff.reset();
  RunResult r = run_adapt(m.ints, cfg);
  ASSERT_FALSE(r.aborted) << r.stop_reason;
  ASSERT_GE(r.trajectory.size(), 2u);
  EXPECT_NEAR(r.trajectory.back().energy, m.fci_energy, 1e-6);
  EXPECT_NEAR(circuit_energy(m.ints, r.circuit), r.trajectory.back().energy, 1e-10);
}

TEST(Adapt, ExactReferenceStopsImmediately) {
  MolecularIntegrals ints = MolecularIntegrals::zeros(3);
  ints.n_electrons = 2;
  for (int p = 0; p < 3; ++p) ints.h1a(p, p) = -1.0 + 0.5 * p;
  ints.h1b = ints.h1a;
  RunResult r = run_adapt(ints, RunConfig{});
  ASSERT_EQ(r.trajectory.size(), 1u);
  EXPECT_NEAR(r.trajectory[0].energy, -2.0, 1e-12);
  EXPECT_NE(r.stop_reason.find("floor"), std::string::npos);
}

TEST(Adapt, ZeroIterationsRecordsBaselineOnly) {
  Molecule m = load("h4_chain_r15");
  RunConfig cfg;
  cfg.max_iterations = 0;
  RunResult r = run_adapt(m.ints, cfg);
  ASSERT_EQ(r.trajectory.size(), 1u);
  EXPECT_EQ(r.trajectory[0].iteration, 0);
  EXPECT_LE(r.trajectory[0].energy, circuit_energy(m.ints, make_reference_circuit(
                                                               4, 2, 2, RotationMode::kNone)) +
                                        1e-12);
}

TEST(Adapt, TrajectoryIsMonotoneAndConsistent) {
  Molecule m = load("h4_chain_r15");
  RunConfig cfg;
  cfg.max_iterations = 6;
  int calls = 0;
  RunResult r = run_adapt(m.ints, cfg, [&](const IterationRecord&) { ++calls; });
  ASSERT_FALSE(r.aborted);
  EXPECT_EQ(calls, static_cast<int>(r.trajectory.size()));
  for (size_t i = 1; i < r.trajectory.size(); ++i) {
    EXPECT_LE(r.trajectory[i].energy, r.trajectory[i - 1].energy + 1e-12) << i;
    EXPECT_GT(r.trajectory[i].score, 0.0);
    EXPECT_EQ(r.trajectory[i].slot, static_cast<int>(r.circuit.params.size()) -
                                        static_cast<int>(r.trajectory.size() - i));
  }
  EXPECT_EQ(r.trajectory.back().params_hash, hash_params(r.circuit.params));
  EXPECT_GE(r.trajectory.back().energy, m.fci_energy - 1e-9);
}

TEST(Adapt, FullTrimIsIdentity) {
  Molecule m = load("h4_chain_r15");
  RunConfig cfg;
  cfg.max_iterations = 4;
  RunResult base = run_adapt(m.ints, cfg);
  cfg.trim_tau = build_majoranic_pool(4, 2, 2).size();
  cfg.trim_kappa = 2;
  RunResult trimmed = run_adapt(m.ints, cfg);
  ASSERT_EQ(base.trajectory.size(), trimmed.trajectory.size());
  for (size_t i = 0; i < base.trajectory.size(); ++i) {
    EXPECT_EQ(base.trajectory[i].energy, trimmed.trajectory[i].energy);
    EXPECT_EQ(base.trajectory[i].label, trimmed.trajectory[i].label);
    EXPECT_EQ(base.trajectory[i].params_hash, trimmed.trajectory[i].params_hash);
  }
}

TEST(Adapt, PicturesAgreeWhenExact) {
  Molecule m = load("h2_sto3g");
  RunConfig cfg;
  cfg.cutoff.reset();
  cfg.max_iterations = 3;
  RunResult h = run_adapt(m.ints, cfg);
  cfg.picture = Picture::kSchrodinger;
  RunResult s = run_adapt(m.ints, cfg);
  cfg.placement = Placement::kFront;
  RunResult sf = run_adapt(m.ints, cfg);
  ASSERT_EQ(h.trajectory.size(), s.trajectory.size());
  ASSERT_EQ(h.trajectory.size(), sf.trajectory.size());
  for (size_t i = 0; i < h.trajectory.size(); ++i) {
    EXPECT_NEAR(h.trajectory[i].energy, s.trajectory[i].energy, 1e-8) << i;
    EXPECT_NEAR(h.trajectory[i].energy, sf.trajectory[i].energy, 1e-8) << i;
  }
}

TEST(Adapt, RotationsAndFullReoptimizationHelp) {
  Molecule m = load("h4_chain_r20");
  RunConfig cfg;
  cfg.max_iterations = 4;
  double with = run_adapt(m.ints, cfg).trajectory.back().energy;
  cfg.rotations = RotationMode::kNone;
  double without = run_adapt(m.ints, cfg).trajectory.back().energy;
  cfg.reoptimize = Reoptimize::kNewOnly;
  double new_only = run_adapt(m.ints, cfg).trajectory.back().energy;
  EXPECT_LE(with, without + 1e-9);
  EXPECT_LE(without, new_only + 1e-9);
}

TEST(Adapt, GradientSelectionRuns) {
  Molecule m = load("h2_sto3g");
  RunConfig cfg;
  cfg.selection = SelectionMode::kGradient;
  cfg.init = InitMode::kZero;
  RunResult r = run_adapt(m.ints, cfg);
  EXPECT_NEAR(r.trajectory.back().energy, m.fci_energy, 1e-6);
  EXPECT_EQ(r.trajectory[1].theta_init, 0.0);
}

TEST(Adapt, ConfigJsonRoundTrip) {
  RunConfig c;
  c.cutoff = 8;
  c.picture = Picture::kSchrodinger;
  c.selection = SelectionMode::kGgf;
  c.trim_tau = 50;
  c.trim_kappa = 3;
  c.reoptimize = Reoptimize::kNewOnly;
  c.rotations = RotationMode::kUnrestricted;
  RunConfig back = run_config_from_json(run_config_to_json(c));
  EXPECT_EQ(run_config_to_json(back), run_config_to_json(c));
  EXPECT_EQ(*back.cutoff, 8);
  EXPECT_EQ(back.trim_tau, 50u);

  EXPECT_FALSE(run_config_from_json(R"({"cutoff": "exact"})").cutoff.has_value());
  EXPECT_THROW(run_config_from_json(R"({"cutof": 6})"), ConfigError);
  EXPECT_THROW(run_config_from_json(R"({"cutoff": 5})"), ConfigError);
  EXPECT_THROW(run_config_from_json(R"({"selection": "best"})"), ConfigError);
  EXPECT_THROW(run_config_from_json(R"({"trim": {"kappa": 0}})"), ConfigError);
  EXPECT_THROW(run_config_from_json("{"), ConfigError);
  EXPECT_THROW(run_config_from_json(R"({"picture": "schrodinger", "pool": {"reduce": true}})"),
               ConfigError);
}

TEST(Adapt, CutoffBelowHamiltonianIsRejected) {
  Molecule m = load("h2_sto3g");
  RunConfig cfg;
  cfg.cutoff = 2;
  EXPECT_THROW(run_adapt(m.ints, cfg), ConfigError);
}

TEST(Adapt, TrajectoryCsv) {
  IterationRecord r;
  r.iteration = 1;
  r.energy = -1.1;
  r.label = "S 0a->2a";
  r.seconds = 0.25;
  std::ostringstream with, without;
  write_trajectory_csv(with, {r}, true);
  write_trajectory_csv(without, {r}, false);
  EXPECT_EQ(with.str().rfind("# format_version=1\n", 0), 0u);
  EXPECT_NE(with.str().find("-1.1000000000000001"), std::string::npos);
  EXPECT_NE(with.str().find(",0.250000\n"), std::string::npos);
  EXPECT_EQ(without.str().back(), '\n');
  EXPECT_EQ(without.str().find("0.25"), std::string::npos);
}

TEST(Adapt, HashIsStable) {
  EXPECT_EQ(hash_params({}), "cbf29ce484222325");
  EXPECT_NE(hash_params({0.0}), hash_params({-0.0}));
}

}  // namespace
}  // namespace vmpe
