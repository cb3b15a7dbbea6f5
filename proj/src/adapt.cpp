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

#include "vmpe/adapt.hpp"

#include <chrono>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <numeric>
#include <ostream>

#include <json.hpp>

namespace vmpe {

TruncationPolicy RunConfig::policy(int n_modes) const {
  TruncationPolicy p = TruncationPolicy::length(cutoff.value_or(2 * n_modes), paired_accept);
  p.generalized_length_cutoff = generalized_cutoff;
  return p;
}

Placement RunConfig::resolved_placement() const {
  if (placement != Placement::kDefault) return placement;
  return picture == Picture::kHeisenberg ? Placement::kFront : Placement::kBack;
}

void RunConfig::validate() const {
  if (cutoff && (*cutoff < 2 || *cutoff % 2 != 0)) {
    throw ConfigError("cutoff must be an even integer >= 2");
  }
  if (generalized_cutoff && *generalized_cutoff < 1) {
    throw ConfigError("generalized_cutoff must be positive");
  }
  if (max_iterations < 0) throw ConfigError("max_iterations must be >= 0");
  if (trim_kappa < 1) throw ConfigError("trim kappa must be >= 1");
  if (!(improvement_floor >= 0.0)) throw ConfigError("improvement_floor must be >= 0");
  if (optimizer.max_evaluations < 1) throw ConfigError("optimizer max_evaluations must be >= 1");
  if (optimizer.memory < 1) throw ConfigError("optimizer memory must be >= 1");
  if (!(optimizer.gradient_tolerance >= 0.0)) {
    throw ConfigError("optimizer gradient_tolerance must be >= 0");
  }
  if (threads < 0) throw ConfigError("threads must be >= 0");
  if (reduce_pool && resolved_placement() != Placement::kFront) {
    throw ConfigError("pool reduction requires front placement");
  }
}

std::string to_string(SelectionMode m) {
  switch (m) {
    case SelectionMode::kGradient: return "gradient";
    case SelectionMode::kGgf: return "ggf";
    case SelectionMode::kMixed: return "mixed";
  }
  return "mixed";
}

SelectionMode selection_mode_from_string(const std::string& s) {
  if (s == "gradient") return SelectionMode::kGradient;
  if (s == "ggf") return SelectionMode::kGgf;
  if (s == "mixed") return SelectionMode::kMixed;
  throw ConfigError("unknown selection mode '" + s + "'");
}

namespace {

using nlohmann::json;

template <typename T>
T pick(const std::string& s, std::initializer_list<std::pair<const char*, T>> options,
       const char* what) {
  for (const auto& [name, value] : options) {
    if (s == name) return value;
  }
  throw ConfigError(std::string("unknown ") + what + " '" + s + "'");
}

void check_keys(const json& j, std::initializer_list<const char*> allowed, const char* where) {
  if (!j.is_object()) throw ConfigError(std::string(where) + " must be an object");
  for (const auto& [key, value] : j.items()) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || key == a;
    if (!ok) throw ConfigError(std::string("unknown key '") + key + "' in " + where);
  }
}

}  // namespace

RunConfig run_config_from_json(const std::string& text, const RunConfig& defaults) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  RunConfig c = defaults;
  try {
    check_keys(j,
               {"cutoff", "generalized_cutoff", "paired_accept", "picture", "placement", "pool",
                "selection", "trim", "max_iterations", "improvement_floor", "optimizer", "init",
                "reoptimize", "rotations", "ordering", "max_nodes", "threads", "seed"},
               "config");
    if (j.contains("cutoff")) {
      const auto& v = j["cutoff"];
      if (v.is_string() && v.get<std::string>() == "exact") {
        c.cutoff.reset();
      } else {
        c.cutoff = v.get<int>();
      }
    }
    if (j.contains("generalized_cutoff")) {
      const auto& v = j["generalized_cutoff"];
      if (v.is_null()) {
        c.generalized_cutoff.reset();
      } else {
        c.generalized_cutoff = v.get<int>();
      }
    }
    if (j.contains("paired_accept")) c.paired_accept = j["paired_accept"].get<bool>();
    if (j.contains("picture")) {
      try {
        c.picture = picture_from_string(j["picture"].get<std::string>());
      } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
      }
    }
    if (j.contains("placement")) {
      c.placement = pick<Placement>(j["placement"].get<std::string>(),
                                    {{"default", Placement::kDefault},
                                     {"front", Placement::kFront},
                                     {"back", Placement::kBack}},
                                    "placement");
    }
    if (j.contains("pool")) {
      const auto& p = j["pool"];
      check_keys(p, {"all_pairs", "expand_classes", "reduce"}, "pool");
      if (p.contains("all_pairs")) c.pool.all_pairs = p["all_pairs"].get<bool>();
      if (p.contains("expand_classes")) c.pool.expand_classes = p["expand_classes"].get<bool>();
      if (p.contains("reduce")) c.reduce_pool = p["reduce"].get<bool>();
    }
    if (j.contains("selection")) {
      c.selection = selection_mode_from_string(j["selection"].get<std::string>());
    }
    if (j.contains("trim")) {
      const auto& t = j["trim"];
      check_keys(t, {"tau", "kappa"}, "trim");
      if (t.contains("tau")) c.trim_tau = t["tau"].get<size_t>();
      if (t.contains("kappa")) c.trim_kappa = t["kappa"].get<int>();
    }
    if (j.contains("max_iterations")) c.max_iterations = j["max_iterations"].get<int>();
    if (j.contains("improvement_floor")) c.improvement_floor = j["improvement_floor"].get<double>();
    if (j.contains("optimizer")) {
      const auto& o = j["optimizer"];
      check_keys(o, {"gradient_tolerance", "value_tolerance", "max_evaluations", "memory"},
                 "optimizer");
      if (o.contains("gradient_tolerance")) {
        c.optimizer.gradient_tolerance = o["gradient_tolerance"].get<double>();
      }
      if (o.contains("value_tolerance")) {
        c.optimizer.value_tolerance = o["value_tolerance"].get<double>();
      }
      if (o.contains("max_evaluations")) {
        c.optimizer.max_evaluations = o["max_evaluations"].get<int>();
      }
      if (o.contains("memory")) c.optimizer.memory = o["memory"].get<int>();
    }
    if (j.contains("init")) {
      c.init = pick<InitMode>(j["init"].get<std::string>(),
                              {{"auto", InitMode::kAuto},
                               {"zero", InitMode::kZero},
                               {"ggf_theta_star", InitMode::kGgf}},
                              "init");
    }
    if (j.contains("reoptimize")) {
      c.reoptimize = pick<Reoptimize>(j["reoptimize"].get<std::string>(),
                                      {{"all", Reoptimize::kAll}, {"new", Reoptimize::kNewOnly}},
                                      "reoptimize");
    }
    if (j.contains("rotations")) {
      try {
        c.rotations = rotation_mode_from_string(j["rotations"].get<std::string>());
      } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
      }
    }
    if (j.contains("ordering")) {
      c.pool.ordering = pick<SpinOrdering>(
          j["ordering"].get<std::string>(),
          {{"interleaved", SpinOrdering::kInterleaved}, {"blocked", SpinOrdering::kBlocked}},
          "ordering");
    }
    if (j.contains("max_nodes")) c.max_nodes = j["max_nodes"].get<size_t>();
    if (j.contains("threads")) c.threads = j["threads"].get<int>();
    if (j.contains("seed")) c.seed = j["seed"].get<uint64_t>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  c.validate();
  return c;
}

std::string run_config_to_json(const RunConfig& c) {
  json j;
  if (c.cutoff) {
    j["cutoff"] = *c.cutoff;
  } else {
    j["cutoff"] = "exact";
  }
  j["generalized_cutoff"] = c.generalized_cutoff ? json(*c.generalized_cutoff) : json(nullptr);
  j["paired_accept"] = c.paired_accept;
  j["picture"] = to_string(c.picture);
  j["placement"] = c.placement == Placement::kDefault ? "default"
                   : c.placement == Placement::kFront ? "front"
                                                      : "back";
  j["pool"] = {{"all_pairs", c.pool.all_pairs},
               {"expand_classes", c.pool.expand_classes},
               {"reduce", c.reduce_pool}};
  j["selection"] = to_string(c.selection);
  j["trim"] = {{"tau", c.trim_tau}, {"kappa", c.trim_kappa}};
  j["max_iterations"] = c.max_iterations;
  j["improvement_floor"] = c.improvement_floor;
  j["optimizer"] = {{"gradient_tolerance", c.optimizer.gradient_tolerance},
                    {"value_tolerance", c.optimizer.value_tolerance},
                    {"max_evaluations", c.optimizer.max_evaluations},
                    {"memory", c.optimizer.memory}};
  j["init"] = c.init == InitMode::kAuto ? "auto" : c.init == InitMode::kZero ? "zero"
                                                                             : "ggf_theta_star";
  j["reoptimize"] = c.reoptimize == Reoptimize::kAll ? "all" : "new";
  j["rotations"] = to_string(c.rotations);
  j["ordering"] = c.pool.ordering == SpinOrdering::kInterleaved ? "interleaved" : "blocked";
  j["max_nodes"] = c.max_nodes;
  j["threads"] = c.threads;
  j["seed"] = c.seed;
  return j.dump(2);
}

std::string hash_params(const std::vector<double>& params) {
  uint64_t h = 0xcbf29ce484222325ull;
  for (double v : params) {
    unsigned char bytes[sizeof(double)];
    std::memcpy(bytes, &v, sizeof v);
    for (unsigned char b : bytes) {
      h ^= b;
      h *= 0x100000001b3ull;
    }
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016" PRIx64, h);
  return buf;
}

namespace {

using Clock = std::chrono::steady_clock;

std::string generator_list(const std::vector<Gate>& gates) {
  std::string out;
  for (const auto& g : gates) {
    if (!out.empty()) out += ';';
    out += g.sign < 0 ? '-' : '+';
    out += g.generator.to_string();
  }
  return out;
}

class Driver {
 public:
  Driver(const SparseOperator& h, int n_spatial, int n_alpha, int n_beta, const RunConfig& cfg)
      : h_(h), cfg_(cfg), placement_(cfg.resolved_placement()) {
    cfg_.validate();
    const int n = 2 * n_spatial;
    if (h.n_modes() != n) throw ConfigError("Hamiltonian mode count does not match orbitals");
    policy_ = cfg_.policy(n);
    if (policy_.length_cutoff && *policy_.length_cutoff < h.max_length()) {
      throw ConfigError("cutoff is below the Hamiltonian's longest monomial");
    }
    circuit_ = make_reference_circuit(n_spatial, n_alpha, n_beta, cfg_.rotations,
                                      cfg_.pool.ordering);
    pool_ = build_majoranic_pool(n_spatial, n_alpha, n_beta, cfg_.pool);
    if (cfg_.reduce_pool) pool_ = reduce_pool(pool_);
    active_.resize(pool_.size());
    std::iota(active_.begin(), active_.end(), size_t{0});
  }

  RunResult run(const IterationCallback& cb) {
    RunResult result;
    auto emit = [&](const IterationRecord& r) {
      result.trajectory.push_back(r);
      if (cb) cb(r);
    };
    try {
      auto t0 = Clock::now();
      rebuild();
      IterationRecord base;
      base.iteration = 0;
      base.label = "reference";
      base.energy = optimize(base.optimizer_evaluations, -1);
      base.live_monomials = graph_->n_nodes();
      base.params_hash = hash_params(circuit_.params);
      base.seconds = seconds_since(t0);
      emit(base);
      double energy = base.energy;

      result.stop_reason = "iteration limit reached";
      for (int it = 1; it <= cfg_.max_iterations; ++it) {
        auto start = Clock::now();
        IterationRecord rec;
        rec.iteration = it;
        if (pool_.size() == 0) {
          result.stop_reason = "empty pool";
          break;
        }
        Selection sel = select(it, energy);
        rec.pool_evaluated = sel.evaluated;
        rec.active_pool = active_.size();
        if (sel.best.score < cfg_.improvement_floor) {
          result.stop_reason = "best candidate below improvement floor";
          break;
        }
        const PoolCandidate& cand = pool_.candidates[sel.best.index];
        rec.label = cand.label;
        rec.generators = generator_list(cand.gates);
        rec.score = sel.best.score;
        rec.predicted_improvement = sel.best.improvement;
        rec.theta_init = sel.theta_init;
        rec.slot = insert(cand, sel.theta_init);
        energy = optimize(rec.optimizer_evaluations, rec.slot);
        rec.energy = energy;
        rec.live_monomials = graph_->n_nodes();
        rec.params_hash = hash_params(circuit_.params);
        rec.seconds = seconds_since(start);
        emit(rec);
      }
    } catch (const PropagationBlowup& e) {
      result.aborted = true;
      result.stop_reason = std::string("propagation blow-up: ") + e.what();
    }
    result.circuit = circuit_;
    return result;
  }

 private:
  struct Selection {
    SelectionScore best;
    double theta_init = 0.0;
    size_t evaluated = 0;
  };

  static double seconds_since(Clock::time_point t) {
    return std::chrono::duration<double>(Clock::now() - t).count();
  }

  void rebuild() {
    graph_.emplace(SurrogateGraph::build(h_, circuit_.gates(), circuit_.reference, policy_,
                                   cfg_.picture, cfg_.max_nodes));
  }

  // Returns the optimized energy. new_slot < 0 or kAll optimizes everything.
  double optimize(int& evaluations, int new_slot) {
    const size_t n = circuit_.params.size();
    if (n == 0) {
      evaluations = 1;
      return graph_->energy(circuit_.params);
    }
    std::vector<double> full = circuit_.params;
    std::vector<double> grad;
    if (cfg_.reoptimize == Reoptimize::kNewOnly && new_slot >= 0) {
      auto f = [&](const Eigen::VectorXd& x, Eigen::VectorXd& g) {
        full[new_slot] = x[0];
        double e = graph_->energy_and_gradient(full, grad);
        g[0] = grad[new_slot];
        return e;
      };
      LbfgsResult r =
          minimize_lbfgs(f, Eigen::VectorXd::Constant(1, circuit_.params[new_slot]), cfg_.optimizer);
      circuit_.params[new_slot] = r.x[0];
      evaluations = r.evaluations;
      return r.value;
    }
    auto f = [&](const Eigen::VectorXd& x, Eigen::VectorXd& g) {
      std::vector<double> p(x.data(), x.data() + x.size());
      double e = graph_->energy_and_gradient(p, grad);
      g = Eigen::Map<const Eigen::VectorXd>(grad.data(), static_cast<Eigen::Index>(grad.size()));
      return e;
    };
    Eigen::VectorXd x0 =
        Eigen::Map<const Eigen::VectorXd>(circuit_.params.data(), static_cast<Eigen::Index>(n));
    LbfgsResult r = minimize_lbfgs(f, x0, cfg_.optimizer);
    circuit_.params.assign(r.x.data(), r.x.data() + r.x.size());
    evaluations = r.evaluations;
    return r.value;
  }

  bool incremental() const {
    if (cfg_.picture == Picture::kHeisenberg) return placement_ == Placement::kFront;
    return placement_ == Placement::kBack && circuit_.rotations.empty();
  }

  bool fast_context() const {
    return (cfg_.picture == Picture::kHeisenberg && placement_ == Placement::kFront) ||
           (cfg_.picture == Picture::kSchrodinger && placement_ == Placement::kBack);
  }

  // Scores `active` candidates by the given mode.
  std::vector<SelectionScore> score(const std::vector<size_t>& active, bool ggf, double energy) {
    if (fast_context()) {
      const SelectionContext& ctx = context();
      return ggf ? score_pool_ggf(pool_, active, ctx, cfg_.threads)
                 : score_pool_gradient(pool_, active, ctx, cfg_.threads);
    }
    std::vector<SelectionScore> out;
    out.reserve(active.size());
    for (size_t idx : active) {
      const PoolCandidate& c = pool_.candidates[idx];
      Landscape l = fit_landscape(static_cast<int>(c.gates.size()),
                                  [&](double t) { return trial_energy(c, t); });
      SelectionScore s = ggf_from_landscape(l);
      s.index = idx;
      if (!ggf) s.score = std::abs(s.gradient);
      out.push_back(s);
    }
    (void)energy;
    return out;
  }

  // Energy with the candidate inserted at the configured place.
  double trial_energy(const PoolCandidate& c, double theta) {
    FermionicCircuit trial = circuit_;
    CircuitElement e = c.element();
    if (placement_ == Placement::kFront) {
      trial.prepend_body(e, theta);
    } else {
      trial.append_body(e, theta);
    }
    return expectation(h_, trial.gates(), trial.params, trial.reference, policy_, cfg_.picture);
  }

  const SelectionContext& context() {
    if (ctx_) return *ctx_;
    if (cfg_.picture == Picture::kHeisenberg) {
      ctx_ = SelectionContext::heisenberg_front(
          graph_->values_after(circuit_.params, graph_->n_layers()), circuit_.reference, policy_);
    } else {
      size_t body_layers = circuit_.body_gates().size();
      SparseOperator observable = h_;
      if (!circuit_.rotations.empty()) {
        observable = propagate(h_, circuit_.rotation_gates(), circuit_.params,
                               TruncationPolicy::exact(h_.n_modes()), Picture::kHeisenberg);
      }
      ctx_ = SelectionContext::schrodinger_back(
          graph_->values_after(circuit_.params, body_layers), std::move(observable), policy_);
    }
    return *ctx_;
  }

  Selection select(int iteration, double energy) {
    ctx_.reset();
    Selection sel;
    const bool trimming = cfg_.trim_tau > 0 && cfg_.trim_tau < pool_.size();
    const bool select_ggf = cfg_.selection != SelectionMode::kGradient;
    if (trimming && is_refresh_iteration(iteration, cfg_.trim_kappa)) {
      std::vector<size_t> all(pool_.size());
      std::iota(all.begin(), all.end(), size_t{0});
      bool rank_ggf = cfg_.selection == SelectionMode::kGgf;
      auto ranks = score(all, rank_ggf, energy);
      sel.evaluated += ranks.size();
      active_ = trim_pool(ranks, cfg_.trim_tau);
    }
    auto scores = score(active_, select_ggf, energy);
    sel.evaluated += scores.size();
    sel.best = best_score(scores);
    bool use_theta = cfg_.init == InitMode::kGgf || (cfg_.init == InitMode::kAuto && select_ggf);
    if (use_theta) {
      if (!select_ggf) {
        auto one = score({sel.best.index}, true, energy);
        sel.theta_init = one[0].theta_star;
      } else {
        sel.theta_init = sel.best.theta_star;
      }
    }
    return sel;
  }

  int insert(const PoolCandidate& c, double theta) {
    CircuitElement e = c.element();
    int slot;
    if (placement_ == Placement::kFront) {
      slot = circuit_.prepend_body(e, theta);
    } else {
      slot = circuit_.append_body(e, theta);
    }
    if (incremental()) {
      const auto& gates = placement_ == Placement::kFront ? circuit_.body.front().gates
                                                          : circuit_.body.back().gates;
      if (cfg_.picture == Picture::kHeisenberg) {
        for (auto g = gates.rbegin(); g != gates.rend(); ++g) graph_->append_layer(*g);
      } else {
        for (const auto& g : gates) graph_->append_layer(g);
      }
      if (graph_->n_nodes() > cfg_.max_nodes) {
        throw PropagationBlowup("surrogate exceeded max_nodes");
      }
    } else {
      rebuild();
    }
    ctx_.reset();
    return slot;
  }

  const SparseOperator& h_;
  RunConfig cfg_;
  Placement placement_;
  TruncationPolicy policy_;
  FermionicCircuit circuit_;
  Pool pool_;
  std::vector<size_t> active_;
  std::optional<SurrogateGraph> graph_;
  std::optional<SelectionContext> ctx_;
};

}  // namespace

RunResult run_adapt(const SparseOperator& hamiltonian, int n_spatial, int n_alpha, int n_beta,
                    const RunConfig& config, const IterationCallback& on_iteration) {
  Driver d(hamiltonian, n_spatial, n_alpha, n_beta, config);
  return d.run(on_iteration);
}

RunResult run_adapt(const MolecularIntegrals& ints, const RunConfig& config,
                    const IterationCallback& on_iteration) {
  SparseOperator h = majorana_hamiltonian(ints, config.pool.ordering);
  return run_adapt(h, ints.n_spatial, ints.n_alpha(), ints.n_beta(), config, on_iteration);
}

void write_trajectory_csv(std::ostream& os, const std::vector<IterationRecord>& rows,
                          bool timing) {
  os << "# format_version=1\n";
  os << "iteration,energy,label,generators,slot,theta_init,score,predicted_improvement,"
        "pool_evaluated,active_pool,live_monomials,optimizer_evaluations,params_hash,seconds\n";
  char buf[64];
  auto num = [&](double v) {
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return std::string(buf);
  };
  for (const auto& r : rows) {
    os << r.iteration << ',' << num(r.energy) << ",\"" << r.label << "\"," << r.generators << ','
       << r.slot << ',' << num(r.theta_init) << ',' << num(r.score) << ','
       << num(r.predicted_improvement) << ',' << r.pool_evaluated << ',' << r.active_pool << ','
       << r.live_monomials << ',' << r.optimizer_evaluations << ',' << r.params_hash << ',';
    if (timing) {
      std::snprintf(buf, sizeof buf, "%.6f", r.seconds);
      os << buf;
    }
    os << '\n';
  }
}

}  // namespace vmpe
