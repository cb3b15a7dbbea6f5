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

#ifndef VMPE_OPTIMIZER_HPP
#define VMPE_OPTIMIZER_HPP

#include <functional>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace vmpe {

class NonFiniteEnergy : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct LbfgsOptions {
  /// Stop when max |g_i| falls below this.
  double gradient_tolerance = 1e-7;
  /// Stop when a step lowers f by less than this relative amount.
  double value_tolerance = 1e-15;
  int max_evaluations = 200;
  int memory = 10;
};

struct LbfgsResult {
  Eigen::VectorXd x;
  double value = 0.0;
  double gradient_norm = 0.0;  // max |g_i| at x
  int evaluations = 0;
  int iterations = 0;
  bool converged = false;
  std::string message;
};

/// Returns f(x) and writes the gradient into g (already sized).
using Objective = std::function<double(const Eigen::VectorXd& x, Eigen::VectorXd& g)>;

/// Limited-memory BFGS with a strong Wolfe line search. The returned point is
/// the best one evaluated, so value <= f(x0). Throws NonFiniteEnergy if f or
/// its gradient is not finite.
LbfgsResult minimize_lbfgs(const Objective& f, const Eigen::VectorXd& x0,
                           const LbfgsOptions& options = {});

}  // namespace vmpe

#endif  // VMPE_OPTIMIZER_HPP
