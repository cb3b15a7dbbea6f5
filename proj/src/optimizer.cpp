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

#include "vmpe/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

namespace vmpe {

namespace {

constexpr double kC1 = 1e-4;
constexpr double kC2 = 0.9;

struct Sample {
  double alpha = 0.0;
  double f = 0.0;
  double slope = 0.0;
  Eigen::VectorXd x;
  Eigen::VectorXd g;
};

class Evaluator {
 public:
  Evaluator(const Objective& f, int budget) : f_(f), budget_(budget) {}

  bool exhausted() const { return count_ >= budget_; }
  int count() const { return count_; }

  double operator()(const Eigen::VectorXd& x, Eigen::VectorXd& g) {
    g.resize(x.size());
    double v = f_(x, g);
    ++count_;
    if (!std::isfinite(v) || !g.allFinite()) {
      throw NonFiniteEnergy("non-finite energy or gradient after " + std::to_string(count_) +
                            " evaluations");
    }
    if (v < best_f_) {
      best_f_ = v;
      best_x_ = x;
      best_g_ = g;
    }
    return v;
  }

  double best_f() const { return best_f_; }
  const Eigen::VectorXd& best_x() const { return best_x_; }
  const Eigen::VectorXd& best_g() const { return best_g_; }

 private:
  const Objective& f_;
  int budget_;
  int count_ = 0;
  double best_f_ = INFINITY;
  Eigen::VectorXd best_x_, best_g_;
};

double cubic_step(const Sample& a, const Sample& b) {
  double d1 = a.slope + b.slope - 3.0 * (a.f - b.f) / (a.alpha - b.alpha);
  double disc = d1 * d1 - a.slope * b.slope;
  if (disc < 0.0) return NAN;
  double d2 = std::copysign(std::sqrt(disc), b.alpha - a.alpha);
  return b.alpha -
         (b.alpha - a.alpha) * (b.slope + d2 - d1) / (b.slope - a.slope + 2.0 * d2);
}

// Strong Wolfe search along d from (x, f0, slope0). Returns false if no
// acceptable point was found within the budget.
bool line_search(Evaluator& eval, const Eigen::VectorXd& x, double f0, double slope0,
                 const Eigen::VectorXd& d, double alpha0, Sample& out) {
  auto probe = [&](double alpha) {
    Sample s;
    s.alpha = alpha;
    s.x = x + alpha * d;
    s.f = eval(s.x, s.g);
    s.slope = s.g.dot(d);
    return s;
  };
  auto armijo_fails = [&](const Sample& s) { return s.f > f0 + kC1 * s.alpha * slope0; };
  auto curvature_ok = [&](const Sample& s) { return std::abs(s.slope) <= -kC2 * slope0; };

  auto zoom = [&](Sample lo, Sample hi) -> bool {
    for (int it = 0; it < 30 && !eval.exhausted(); ++it) {
      double a = std::min(lo.alpha, hi.alpha);
      double b = std::max(lo.alpha, hi.alpha);
      double t = cubic_step(lo, hi);
      double margin = 0.1 * (b - a);
      if (!std::isfinite(t) || t < a + margin || t > b - margin) t = 0.5 * (a + b);
      Sample s = probe(t);
      if (armijo_fails(s) || s.f >= lo.f) {
        hi = std::move(s);
      } else {
        if (curvature_ok(s)) {
          out = std::move(s);
          return true;
        }
        if (s.slope * (hi.alpha - lo.alpha) >= 0.0) hi = lo;
        lo = std::move(s);
      }
      if (std::abs(hi.alpha - lo.alpha) < 1e-16 * std::max(1.0, lo.alpha)) break;
    }
    if (lo.alpha > 0.0 && lo.f < f0) {
      out = std::move(lo);
      return true;
    }
    return false;
  };

  Sample prev;
  prev.alpha = 0.0;
  prev.f = f0;
  prev.slope = slope0;
  prev.x = x;
  double alpha = alpha0;
  for (int it = 0; it < 30 && !eval.exhausted(); ++it) {
    Sample s = probe(alpha);
    if (armijo_fails(s) || (it > 0 && s.f >= prev.f)) return zoom(std::move(prev), std::move(s));
    if (curvature_ok(s)) {
      out = std::move(s);
      return true;
    }
    if (s.slope >= 0.0) return zoom(std::move(s), std::move(prev));
    prev = std::move(s);
    alpha *= 2.0;
  }
  if (prev.alpha > 0.0) {
    out = std::move(prev);
    return true;
  }
  return false;
}

}  // namespace

LbfgsResult minimize_lbfgs(const Objective& f, const Eigen::VectorXd& x0,
                           const LbfgsOptions& options) {
  Evaluator eval(f, std::max(1, options.max_evaluations));
  LbfgsResult r;
  Eigen::VectorXd x = x0;
  Eigen::VectorXd g;
  double fx = eval(x, g);

  std::deque<Eigen::VectorXd> s_hist, y_hist;
  std::deque<double> rho_hist;
  auto finish = [&](bool converged, std::string msg) {
    r.x = eval.best_x();
    r.value = eval.best_f();
    r.gradient_norm = eval.best_g().size() ? eval.best_g().lpNorm<Eigen::Infinity>() : 0.0;
    r.evaluations = eval.count();
    r.converged = converged;
    r.message = std::move(msg);
    return r;
  };

  if (x.size() == 0) return finish(true, "no parameters");
  bool steepest = false;
  for (;;) {
    if (g.lpNorm<Eigen::Infinity>() <= options.gradient_tolerance) {
      return finish(true, "gradient tolerance reached");
    }
    if (eval.exhausted()) return finish(false, "evaluation budget exhausted");

    // Two-loop recursion.
    Eigen::VectorXd q = g;
    std::vector<double> alpha(s_hist.size());
    for (int i = static_cast<int>(s_hist.size()) - 1; i >= 0; --i) {
      alpha[i] = rho_hist[i] * s_hist[i].dot(q);
      q -= alpha[i] * y_hist[i];
    }
    if (!s_hist.empty()) q *= s_hist.back().dot(y_hist.back()) / y_hist.back().squaredNorm();
    for (size_t i = 0; i < s_hist.size(); ++i) {
      double beta = rho_hist[i] * y_hist[i].dot(q);
      q += (alpha[i] - beta) * s_hist[i];
    }
    Eigen::VectorXd d = -q;
    double slope = g.dot(d);
    if (!(slope < 0.0)) {
      s_hist.clear();
      y_hist.clear();
      rho_hist.clear();
      d = -g;
      slope = g.dot(d);
    }
    double step0 = s_hist.empty() ? std::min(1.0, 1.0 / g.norm()) : 1.0;

    Sample next;
    if (!line_search(eval, x, fx, slope, d, step0, next)) {
      if (s_hist.empty() || steepest) return finish(false, "line search failed");
      s_hist.clear();
      y_hist.clear();
      rho_hist.clear();
      steepest = true;
      continue;
    }
    steepest = false;
    ++r.iterations;
    Eigen::VectorXd s = next.x - x;
    Eigen::VectorXd y = next.g - g;
    double sy = s.dot(y);
    double decrease = fx - next.f;
    x = std::move(next.x);
    g = std::move(next.g);
    double f_old = fx;
    fx = next.f;
    if (sy > 1e-12 * s.norm() * y.norm()) {
      s_hist.push_back(std::move(s));
      y_hist.push_back(std::move(y));
      rho_hist.push_back(1.0 / sy);
      if (static_cast<int>(s_hist.size()) > options.memory) {
        s_hist.pop_front();
        y_hist.pop_front();
        rho_hist.pop_front();
      }
    }
    if (decrease <= options.value_tolerance * std::max(std::abs(f_old), std::abs(fx))) {
      bool small_g = g.lpNorm<Eigen::Infinity>() <= options.gradient_tolerance;
      return finish(small_g, "function decrease below tolerance");
    }
  }
}

}  // namespace vmpe
