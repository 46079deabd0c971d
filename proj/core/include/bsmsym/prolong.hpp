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

#ifndef BSMSYM_PROLONG_HPP
#define BSMSYM_PROLONG_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <string>

#include "bsmsym/model.hpp"

namespace bsmsym {

/// Point vector field  xi_t d/dt + xi_x d/dx + xi_y d/dy + eta d/du
/// with coefficients depending on (t, x, y, u) only.
struct VectorField {
  Expr xi_t, xi_x, xi_y, eta;
  std::string name;

  VectorField() = default;
  VectorField(Expr xt, Expr xx, Expr xy, Expr e, std::string nm = {});
};

VectorField operator+(const VectorField& A, const VectorField& B);
VectorField operator-(const VectorField& A, const VectorField& B);
/// Component-wise scaling by an expression (exact on rational coefficients).
VectorField scale(const Expr& c, const VectorField& X);
/// Exact structural zero test of all four components (after expand).
bool is_zero_field(const VectorField& X);

/// Total derivative D_v with u and its derivatives treated as functions of
/// (t, x, y); introduces jet symbols one order above those present.
Expr total_derivative(const Expr& e, int var_id);

/// Second-prolongation coefficients of a point vector field.
struct Prolonged {
  Expr eta_t, eta_x, eta_y, eta_xx, eta_xy, eta_yy;
};

/// eta^J = D_J(eta - sum_i xi^i u_i) + sum_i xi^i u_{J,i}.  Third-order jet
/// symbols cancel by construction; a residual one raises ExprError.
Prolonged prolong2(const VectorField& X);

struct SymmetryReport {
  std::string field;
  bool pass = false;
  double max_rel_residual = 0.0;
  std::optional<std::map<int, double>> witness;
  double witness_residual = 0.0;
  std::uint64_t seed = 0;
  int trials = 0;
  double tolerance = 0.0;
};

/// Forms E = pr2(X)(Delta), restricts to the solution manifold by the exact
/// substitution u_t := -(Delta - u_t), and samples the result over the
/// model's box with jet coordinates drawn independently from [-2, 2].
SymmetryReport check_symmetry(const VectorField& X, const ModelParams& params,
                              int trials = 200, std::uint64_t seed = 42,
                              double tol = 1e-9);

}  // namespace bsmsym

#endif  // BSMSYM_PROLONG_HPP
