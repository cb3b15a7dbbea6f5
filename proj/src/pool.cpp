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

#include "vmpe/pool.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <ostream>
#include <stdexcept>
#include <thread>
#include <unordered_set>

namespace vmpe {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr uint64_t kEvenBits = 0x5555555555555555ull;

std::string spin_label(int p, Spin s) {
  return std::to_string(p) + (s == Spin::kAlpha ? "a" : "b");
}

Monomial lowest_term(const ComplexOperator& g) {
  auto terms = g.sorted_terms();
  if (terms.empty()) throw std::logic_error("empty excitation generator");
  return terms.front().first;
}

struct Orbital {
  int p;
  Spin s;
};

class PoolBuilder {
 public:
  PoolBuilder(int n_spatial, const PoolOptions& opt) : n_spatial_(n_spatial), opt_(opt) {
    pool_.n_modes = 2 * n_spatial;
  }

  int so(Orbital o) const { return spin_orbital(o.p, o.s, n_spatial_, opt_.ordering); }

  void single(Orbital from, Orbital to) {
    PoolCandidate c;
    c.kind = ExcitationKind::kSingle;
    c.modes = {so(from), so(to)};
    c.gates = single_excitation_gates(pool_.n_modes, so(to), so(from), 0);
    c.label = "S " + spin_label(from.p, from.s) + "->" + spin_label(to.p, to.s);
    pool_.candidates.push_back(std::move(c));
  }

  void dbl(ExcitationKind kind, Orbital i, Orbital j, Orbital a, Orbital b) {
    std::vector<int> modes = {so(i), so(j), so(a), so(b)};
    auto g = double_excitation_generator(pool_.n_modes, modes[0], modes[1], modes[2], modes[3]);
    std::string label = "D " + spin_label(i.p, i.s) + "," + spin_label(j.p, j.s) + "->" +
                        spin_label(a.p, a.s) + "," + spin_label(b.p, b.s);
    Monomial rep = lowest_term(g);
    // Distinct pairings of one mode set can share a representative.
    if (!used_.insert(rep).second) return;
    if (!opt_.expand_classes) {
      pool_.candidates.push_back({kind, modes, {Gate{rep, 0, 1.0}}, label});
      return;
    }
    MonomialClass cls = monomial_class(rep);
    int k = 0;
    for (const auto& m : class_members(pool_.n_modes, cls.modes, cls.parity)) {
      if (m != rep && !used_.insert(m).second) continue;
      pool_.candidates.push_back(
          {kind, modes, {Gate{m, 0, 1.0}}, label + " #" + std::to_string(k++)});
    }
  }

  Pool take() { return std::move(pool_); }

 private:
  int n_spatial_;
  PoolOptions opt_;
  Pool pool_;
  std::unordered_set<Monomial, MonomialHash> used_;
};

}  // namespace

size_t Pool::count(ExcitationKind kind) const {
  return static_cast<size_t>(std::count_if(candidates.begin(), candidates.end(),
                                           [&](const auto& c) { return c.kind == kind; }));
}

Pool build_majoranic_pool(int n_spatial, int n_alpha, int n_beta, const PoolOptions& options) {
  if (n_spatial < 1 || 2 * n_spatial > Monomial::kMaxModes) {
    throw std::invalid_argument("pool: n_spatial out of range");
  }
  if (n_alpha < 0 || n_beta < 0 || n_alpha > n_spatial || n_beta > n_spatial) {
    throw std::invalid_argument("pool: inconsistent occupation counts");
  }
  PoolBuilder b(n_spatial, options);
  const Spin spins[] = {Spin::kAlpha, Spin::kBeta};
  auto n_occ = [&](Spin s) { return s == Spin::kAlpha ? n_alpha : n_beta; };

  if (!options.all_pairs) {
    for (Spin s : spins) {
      for (int i = 0; i < n_occ(s); ++i) {
        for (int a = n_occ(s); a < n_spatial; ++a) b.single({i, s}, {a, s});
      }
    }
    for (Spin s : spins) {
      int o = n_occ(s);
      for (int i = 0; i < o; ++i) {
        for (int j = i + 1; j < o; ++j) {
          for (int a = o; a < n_spatial; ++a) {
            for (int c = a + 1; c < n_spatial; ++c) {
              b.dbl(ExcitationKind::kSameSpinDouble, {i, s}, {j, s}, {a, s}, {c, s});
            }
          }
        }
      }
    }
    for (int i = 0; i < n_alpha; ++i) {
      for (int j = 0; j < n_beta; ++j) {
        for (int a = n_alpha; a < n_spatial; ++a) {
          for (int c = n_beta; c < n_spatial; ++c) {
            b.dbl(ExcitationKind::kOppositeSpinDouble, {i, Spin::kAlpha}, {j, Spin::kBeta},
                  {a, Spin::kAlpha}, {c, Spin::kBeta});
          }
        }
      }
    }
    return b.take();
  }

  for (Spin s : spins) {
    for (int p = 0; p < n_spatial; ++p) {
      for (int q = p + 1; q < n_spatial; ++q) b.single({p, s}, {q, s});
    }
  }
  for (Spin s : spins) {
    for (int i = 0; i < n_spatial; ++i) {
      for (int j = i + 1; j < n_spatial; ++j) {
        for (int a = 0; a < n_spatial; ++a) {
          for (int c = a + 1; c < n_spatial; ++c) {
            if (a == i || a == j || c == i || c == j) continue;
            if (std::make_pair(i, j) > std::make_pair(a, c)) continue;
            b.dbl(ExcitationKind::kSameSpinDouble, {i, s}, {j, s}, {a, s}, {c, s});
          }
        }
      }
    }
  }
  for (int i = 0; i < n_spatial; ++i) {
    for (int a = i + 1; a < n_spatial; ++a) {
      for (int j = 0; j < n_spatial; ++j) {
        for (int c = 0; c < n_spatial; ++c) {
          if (j == c) continue;
          b.dbl(ExcitationKind::kOppositeSpinDouble, {i, Spin::kAlpha}, {j, Spin::kBeta},
                {a, Spin::kAlpha}, {c, Spin::kBeta});
        }
      }
    }
  }
  return b.take();
}

MonomialClass monomial_class(const Monomial& m) {
  uint64_t modes = m.mode_support();
  int x = std::popcount(m.word(0) & kEvenBits) + std::popcount(m.word(1) & kEvenBits);
  return {modes, x & 1};
}

std::vector<Monomial> class_members(int n_modes, uint64_t modes, int parity) {
  std::vector<int> list;
  for (int j = 0; j < n_modes; ++j) {
    if ((modes >> j) & 1u) list.push_back(j);
  }
  const int k = static_cast<int>(list.size());
  std::vector<Monomial> out;
  for (uint32_t choice = 0; choice < (1u << k); ++choice) {
    // Bit t of `choice` selects the y generator on mode list[t].
    int x = k - std::popcount(choice);
    if ((x & 1) != parity) continue;
    Monomial m(n_modes);
    for (int t = 0; t < k; ++t) m.set(2 * list[t] + ((choice >> t) & 1u));
    out.push_back(m);
  }
  std::sort(out.begin(), out.end());
  return out;
}

Pool reduce_pool(const Pool& pool) {
  struct KeyHash {
    size_t operator()(const MonomialClass& k) const {
      return std::hash<uint64_t>{}(k.modes * 2 + static_cast<uint64_t>(k.parity));
    }
  };
  std::unordered_set<MonomialClass, KeyHash> seen;
  Pool out;
  out.n_modes = pool.n_modes;
  for (const auto& c : pool.candidates) {
    if (c.gates.size() == 1 && !seen.insert(monomial_class(c.gates[0].generator)).second) {
      continue;
    }
    out.candidates.push_back(c);
  }
  return out;
}

double Landscape::operator()(double t) const {
  double e = c0;
  for (int k = 0; k < degree; ++k) e += a[k] * std::cos((k + 1) * t) + b[k] * std::sin((k + 1) * t);
  return e;
}

double Landscape::derivative(double t) const {
  double d = 0.0;
  for (int k = 0; k < degree; ++k) {
    d += (k + 1) * (b[k] * std::cos((k + 1) * t) - a[k] * std::sin((k + 1) * t));
  }
  return d;
}

double SinusoidFit::operator()(double t) const { return offset + amplitude * std::sin(t + phase); }

SinusoidFit fit_sinusoid(double e0, double e_plus, double e_minus) {
  SinusoidFit f;
  f.offset = 0.5 * (e_plus + e_minus);
  double d = 0.5 * (e_plus - e_minus);
  double b = e0 - f.offset;
  f.amplitude = std::hypot(b, d);
  if (f.amplitude < 1e-14) {
    f.amplitude = 0.0;
    return f;
  }
  f.phase = std::atan2(b, d);
  f.improvement = std::min(0.0, f.offset - f.amplitude - e0);
  f.theta_star = std::remainder(-0.5 * kPi - f.phase, 2.0 * kPi);
  return f;
}

SelectionContext SelectionContext::heisenberg_front(SparseOperator evolved,
                                                    const FockState& reference,
                                                    const TruncationPolicy& policy) {
  if (!policy.is_structural()) {
    throw UnsupportedPolicy("selection requires a structural truncation policy");
  }
  SelectionContext ctx;
  ctx.picture_ = Picture::kHeisenberg;
  ctx.policy_ = policy;
  ctx.reference_ = reference;
  for (const auto& [m, c] : evolved.terms()) ctx.buckets_[m.mode_parity()].emplace_back(m, c);
  for (auto& [key, list] : ctx.buckets_) {
    std::sort(list.begin(), list.end(),
              [](const auto& x, const auto& y) { return x.first < y.first; });
  }
  ctx.primary_ = std::move(evolved);
  ctx.energy_ = reference_expectation(ctx.primary_, reference);
  return ctx;
}

SelectionContext SelectionContext::schrodinger_back(SparseOperator state,
                                                    SparseOperator observable,
                                                    const TruncationPolicy& policy) {
  if (!policy.is_structural()) {
    throw UnsupportedPolicy("selection requires a structural truncation policy");
  }
  SelectionContext ctx;
  ctx.picture_ = Picture::kSchrodinger;
  ctx.policy_ = policy;
  ctx.primary_ = std::move(state);
  ctx.observable_ = std::move(observable);
  ctx.energy_ = dot(ctx.primary_, ctx.observable_);
  return ctx;
}

namespace {

// E(t) = base + cos t * c + sin t * s for one gate at angle t.
struct Trig {
  double base = 0.0;
  double c = 0.0;
  double s = 0.0;
};

}  // namespace

double SelectionContext::single_energy(const Gate& g, double theta) const {
  const Monomial& gen = g.generator;
  Trig t;
  if (picture_ == Picture::kHeisenberg) {
    const uint64_t key = gen.mode_parity();
    if (auto it = buckets_.find(0); it != buckets_.end()) {
      for (const auto& [m, c] : it->second) {
        double eig = paired_eigenvalue(m, reference_);
        if (commutes(m, gen)) {
          t.base += c * eig;
          continue;
        }
        t.c += c * eig;
        if (key == 0) {
          Monomial mu = m ^ gen;
          if (policy_.admits(mu)) t.s += anticommutator_sign(gen, m) * c * paired_eigenvalue(mu, reference_);
        }
      }
    }
    if (key != 0) {
      if (auto it = buckets_.find(key); it != buckets_.end()) {
        for (const auto& [m, c] : it->second) {
          if (commutes(m, gen)) continue;
          Monomial mu = m ^ gen;
          if (!policy_.admits(mu)) continue;
          t.s += anticommutator_sign(gen, m) * c * paired_eigenvalue(mu, reference_);
        }
      }
    }
  } else {
    for (const auto& [eta, h] : observable_.terms()) {
      if (commutes(eta, gen)) continue;
      t.c += primary_.coefficient(eta) * h;
      if (policy_.admits(eta)) {
        t.s += anticommutator_sign(gen, eta) * primary_.coefficient(eta ^ gen) * h;
      }
    }
    t.base = energy_ - t.c;
  }
  return t.base + t.c * std::cos(theta) + t.s * std::sin(theta);
}

double SelectionContext::single_slope(const Gate& g) const {
  const Monomial& gen = g.generator;
  double s = 0.0;
  if (picture_ == Picture::kHeisenberg) {
    auto it = buckets_.find(gen.mode_parity());
    if (it == buckets_.end()) return 0.0;
    for (const auto& [m, c] : it->second) {
      if (commutes(m, gen)) continue;
      Monomial mu = m ^ gen;
      if (!policy_.admits(mu)) continue;
      s += anticommutator_sign(gen, m) * c * paired_eigenvalue(mu, reference_);
    }
  } else {
    for (const auto& [eta, h] : observable_.terms()) {
      if (commutes(eta, gen) || !policy_.admits(eta)) continue;
      s += anticommutator_sign(gen, eta) * primary_.coefficient(eta ^ gen) * h;
    }
  }
  return s;
}

SparseOperator SelectionContext::restrict_to(const std::vector<Gate>& gates) const {
  std::vector<Monomial> shifts{Monomial(primary_.n_modes())};
  for (const auto& g : gates) {
    const size_t n = shifts.size();
    for (size_t k = 0; k < n; ++k) shifts.push_back(shifts[k] ^ g.generator);
  }
  SparseOperator sub(primary_.n_modes());
  if (picture_ == Picture::kHeisenberg) {
    std::unordered_set<uint64_t> keys;
    for (const auto& m : shifts) keys.insert(m.mode_parity());
    for (uint64_t key : keys) {
      auto it = buckets_.find(key);
      if (it == buckets_.end()) continue;
      for (const auto& [m, c] : it->second) sub.set(m, c);
    }
  } else {
    for (const auto& [eta, h] : observable_.terms()) {
      for (const auto& s : shifts) {
        Monomial nu = eta ^ s;
        auto it = primary_.terms().find(nu);
        if (it != primary_.terms().end()) sub.set(nu, it->second);
      }
    }
  }
  return sub;
}

double SelectionContext::energy_at(const PoolCandidate& cand, double theta) const {
  if (cand.gates.size() == 1) {
    const Gate& g = cand.gates[0];
    return single_energy(g, g.sign * theta);
  }
  SparseOperator sub = restrict_to(cand.gates);
  const size_t n = cand.gates.size();
  for (size_t k = 0; k < n; ++k) {
    const Gate& g = picture_ == Picture::kHeisenberg ? cand.gates[n - 1 - k] : cand.gates[k];
    conjugate_in_place(sub, g, g.sign * theta, policy_, picture_);
  }
  return picture_ == Picture::kHeisenberg ? reference_expectation(sub, reference_)
                                          : dot(sub, observable_);
}

double SelectionContext::gradient(const PoolCandidate& cand) const {
  double d = 0.0;
  for (const auto& g : cand.gates) d += g.sign * single_slope(g);
  return d;
}

Landscape fit_landscape(int degree, const std::function<double(double)>& energy) {
  Landscape l;
  l.degree = degree;
  if (degree == 1) {
    double e0 = energy(0.0);
    double ep = energy(0.5 * kPi);
    double em = energy(-0.5 * kPi);
    l.c0 = 0.5 * (ep + em);
    l.a[0] = e0 - l.c0;
    l.b[0] = 0.5 * (ep - em);
    return l;
  }
  if (degree != 2) throw std::invalid_argument("fit_landscape: degree must be 1 or 2");
  constexpr int kPoints = 5;
  double e[kPoints];
  for (int k = 0; k < kPoints; ++k) e[k] = energy(2.0 * kPi * k / kPoints);
  for (int k = 0; k < kPoints; ++k) l.c0 += e[k] / kPoints;
  for (int m = 1; m <= 2; ++m) {
    for (int k = 0; k < kPoints; ++k) {
      double t = 2.0 * kPi * k / kPoints;
      l.a[m - 1] += 2.0 / kPoints * e[k] * std::cos(m * t);
      l.b[m - 1] += 2.0 / kPoints * e[k] * std::sin(m * t);
    }
  }
  return l;
}

Landscape SelectionContext::landscape(const PoolCandidate& cand) const {
  if (cand.gates.size() > 2) {
    throw std::invalid_argument("landscape: candidates have one or two gates");
  }
  return fit_landscape(static_cast<int>(cand.gates.size()),
                       [&](double t) { return energy_at(cand, t); });
}

SelectionScore ggf_from_landscape(const Landscape& l) {
  SelectionScore s;
  s.gradient = l.derivative(0.0);
  if (l.degree == 1) {
    // Samples reproduce E(0) and E(+-pi/2) exactly.
    SinusoidFit f = fit_sinusoid(l.c0 + l.a[0], l.c0 + l.b[0], l.c0 - l.b[0]);
    s.improvement = f.improvement;
    s.theta_star = f.theta_star;
    s.score = -s.improvement;
    return s;
  }
  const double e0 = l(0.0);
  constexpr int kGrid = 360;
  double best_t = 0.0;
  double best_e = e0;
  for (int k = 1; k < kGrid; ++k) {
    double t = -kPi + 2.0 * kPi * k / kGrid;
    double e = l(t);
    if (e < best_e) {
      best_e = e;
      best_t = t;
    }
  }
  // Newton polish on the derivative.
  double t = best_t;
  for (int it = 0; it < 50; ++it) {
    double d2 = 0.0;
    for (int k = 0; k < l.degree; ++k) {
      double m = k + 1;
      d2 -= m * m * (l.a[k] * std::cos(m * t) + l.b[k] * std::sin(m * t));
    }
    if (d2 <= 0.0) break;
    double step = l.derivative(t) / d2;
    t -= step;
    if (std::abs(step) < 1e-15) break;
  }
  if (l(t) < best_e) {
    best_e = l(t);
    best_t = std::remainder(t, 2.0 * kPi);
  }
  s.improvement = std::min(0.0, best_e - e0);
  s.theta_star = s.improvement < 0.0 ? best_t : 0.0;
  s.score = -s.improvement;
  return s;
}

SelectionScore ggf_score(const PoolCandidate& cand, const SelectionContext& ctx) {
  SelectionScore s = ggf_from_landscape(ctx.landscape(cand));
  s.gradient = ctx.gradient(cand);
  return s;
}

namespace {

template <typename Fn>
std::vector<SelectionScore> score_all(const Pool& pool, std::span<const size_t> active,
                                      int threads, Fn&& fn) {
  std::vector<SelectionScore> out(active.size());
  auto work = [&](size_t begin, size_t end) {
    for (size_t k = begin; k < end; ++k) {
      out[k] = fn(pool.candidates.at(active[k]));
      out[k].index = active[k];
    }
  };
  if (threads == 0) threads = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  if (threads <= 1 || active.size() < 64) {
    work(0, active.size());
    return out;
  }
  std::vector<std::thread> pool_threads;
  const size_t chunk = (active.size() + threads - 1) / threads;
  for (int t = 0; t < threads; ++t) {
    size_t b = t * chunk;
    size_t e = std::min(active.size(), b + chunk);
    if (b >= e) break;
    pool_threads.emplace_back(work, b, e);
  }
  for (auto& t : pool_threads) t.join();
  return out;
}

}  // namespace

std::vector<SelectionScore> score_pool_gradient(const Pool& pool, std::span<const size_t> active,
                                                const SelectionContext& ctx, int threads) {
  return score_all(pool, active, threads, [&](const PoolCandidate& c) {
    SelectionScore s;
    s.gradient = ctx.gradient(c);
    s.score = std::abs(s.gradient);
    return s;
  });
}

std::vector<SelectionScore> score_pool_ggf(const Pool& pool, std::span<const size_t> active,
                                           const SelectionContext& ctx, int threads) {
  return score_all(pool, active, threads,
                   [&](const PoolCandidate& c) { return ggf_score(c, ctx); });
}

const SelectionScore& best_score(std::span<const SelectionScore> scores) {
  if (scores.empty()) throw std::invalid_argument("best_score: no scores");
  const SelectionScore* best = &scores[0];
  for (const auto& s : scores) {
    if (s.score > best->score || (s.score == best->score && s.index < best->index)) best = &s;
  }
  return *best;
}

std::vector<size_t> trim_pool(std::span<const SelectionScore> scores, size_t tau) {
  if (tau < 1) throw std::invalid_argument("trim_pool: tau must be at least 1");
  std::vector<const SelectionScore*> order;
  for (const auto& s : scores) order.push_back(&s);
  std::stable_sort(order.begin(), order.end(), [](const auto* x, const auto* y) {
    if (x->score != y->score) return x->score > y->score;
    return x->index < y->index;
  });
  if (order.size() > tau) order.resize(tau);
  std::vector<size_t> keep;
  for (const auto* s : order) keep.push_back(s->index);
  std::sort(keep.begin(), keep.end());
  return keep;
}

bool is_refresh_iteration(int iteration, int kappa) {
  if (kappa < 1) throw std::invalid_argument("refresh period must be at least 1");
  return iteration == 1 || iteration % kappa == 0;
}

void write_pool_csv(std::ostream& os, const Pool& pool) {
  os << "candidate,kind,label,gates\n";
  for (size_t k = 0; k < pool.candidates.size(); ++k) {
    const auto& c = pool.candidates[k];
    const char* kind = c.kind == ExcitationKind::kSingle           ? "single"
                       : c.kind == ExcitationKind::kSameSpinDouble ? "double_same"
                                                                   : "double_opposite";
    os << k << ',' << kind << ',' << c.label << ',';
    for (size_t g = 0; g < c.gates.size(); ++g) {
      if (g) os << ';';
      os << (c.gates[g].sign < 0 ? "-" : "+") << c.gates[g].generator.to_string();
    }
    os << '\n';
  }
}

void write_scores_csv(std::ostream& os, int iteration, std::span<const SelectionScore> scores,
                      bool header) {
  if (header) os << "iteration,candidate,score,rank\n";
  std::vector<size_t> order(scores.size());
  for (size_t k = 0; k < order.size(); ++k) order[k] = k;
  std::stable_sort(order.begin(), order.end(), [&](size_t x, size_t y) {
    if (scores[x].score != scores[y].score) return scores[x].score > scores[y].score;
    return scores[x].index < scores[y].index;
  });
  std::vector<size_t> rank(scores.size());
  for (size_t r = 0; r < order.size(); ++r) rank[order[r]] = r + 1;
  char buf[64];
  for (size_t k = 0; k < scores.size(); ++k) {
    std::snprintf(buf, sizeof buf, "%.17g", scores[k].score);
    os << iteration << ',' << scores[k].index << ',' << buf << ',' << rank[k] << '\n';
  }
}

}  // namespace vmpe
