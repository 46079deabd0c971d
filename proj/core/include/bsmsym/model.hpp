/*
 * Copyright 2026 The bsmsym authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef BSMSYM_MODEL_HPP
#define BSMSYM_MODEL_HPP

#include <cstdint>

#include "bsmsym/eval.hpp"
#include "bsmsym/expr.hpp"
#include "bsmsym/zerotest.hpp"

namespace bsmsym {

// The pricing equation under stochastic volatility, solved for u_t:
//
//   Delta = u_t + 1/2 f(y)^2 x^2 u_xx + rho beta x f(y) u_xy
//         + 1/2 beta^2 u_yy + r x u_x
//         + (alpha (m - y) - beta rho (mu - r)/f(y)) u_y - r u
//
// with f(y) = f0 (constant volatility) or f(y) = k/(y - m) (hyperbolic).
// The hyperbolic case carries the derived constant
// g = 2 (alpha + rho beta (mu - r)/k).

enum class VolCase { Const, Hyperbolic };

class ModelError : public std::runtime_error {
 public:
  explicit ModelError(const std::string& what) : std::runtime_error(what) {}
};

struct ModelParams {
  double r = 0.05;
  double rho = 0.3;
  double m = 0.0;
  double mu = 0.1;
  double alpha = 1.2;
  double beta = 0.4;
  VolCase vol = VolCase::Const;
  double f0 = 0.5;  // Const case
  double k = 0.8;   // Hyperbolic case

  /// g = 2 (alpha + rho beta (mu - r)/k); Hyperbolic only.
  double g() const;

  /// Checks |rho| < 1, beta != 0, f0/k != 0 and that g recomputed from the
  /// raw parameters matches g() exactly.
  void validate() const;

  /// Default test parameter set (chosen for genericity away from singular
  /// loci, not ground truth); recorded in every report.
  static ModelParams defaults(VolCase vol = VolCase::Const);
  /// Hyperbolic defaults with alpha tuned so that g == 0 exactly.
  static ModelParams defaults_g_zero();
};

/// The volatility function f as an expression in y.
Expr vol_function(VolCase vol);

/// Delta as an expression in jet coordinates and parameter symbols; the
/// coefficient of u_t is exactly one.
Expr build_equation(VolCase vol);

/// The hyperbolic equation with the drift written as (1/2) g (m - y) u_y.
Expr build_equation_gform();
/// The hyperbolic g = 0 equation (no u_y drift).
Expr build_equation_g0();

/// Parameter symbol values (r, rho, m, mu, alpha, beta and f0 or k plus g).
Bindings parameter_bindings(const ModelParams& params);

/// Default sampling box for (t, x, y): t in [0.1, 1], x in [0.5, 2],
/// y in [m + 0.2, m + 1.5]; keeps x > 0 and y > m.
SampleBox default_box(const ModelParams& params);

/// Verifies alpha (m - y) - beta rho (mu - r) (y - m)/k == (1/2) g (m - y)
/// as expressions in y at the given parameter values.
ZeroTestReport drift_identity_check(const ModelParams& params, int trials = 200,
                                    std::uint64_t seed = 42);

}  // namespace bsmsym

#endif  // BSMSYM_MODEL_HPP
