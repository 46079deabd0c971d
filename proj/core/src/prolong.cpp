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

#include "bsmsym/prolong.hpp"

#include <array>

namespace bsmsym {

namespace {

Expr S(int id) { return Expr::symbol(id); }

void check_point_coefficient(const Expr& e, const std::string& field,
                             const char* component) {
  for (int s : free_symbols(e))
    if (jet_order(s) >= 1)
      throw ExprError("vector field '" + field + "': " + component +
                      " contains a jet coordinate of order >= 1");
}

}  // namespace

VectorField::VectorField(Expr xt, Expr xx, Expr xy, Expr e, std::string nm)
    : xi_t(std::move(xt)),
      xi_x(std::move(xx)),
      xi_y(std::move(xy)),
      eta(std::move(e)),
      name(std::move(nm)) {
  check_point_coefficient(xi_t, name, "xi_t");
  check_point_coefficient(xi_x, name, "xi_x");
  check_point_coefficient(xi_y, name, "xi_y");
  check_point_coefficient(eta, name, "eta");
}

VectorField operator+(const VectorField& A, const VectorField& B) {
  return {A.xi_t + B.xi_t, A.xi_x + B.xi_x, A.xi_y + B.xi_y, A.eta + B.eta,
          A.name.empty() ? B.name : A.name + " + " + B.name};
}

VectorField operator-(const VectorField& A, const VectorField& B) {
  return {A.xi_t - B.xi_t, A.xi_x - B.xi_x, A.xi_y - B.xi_y, A.eta - B.eta,
          A.name + " - " + B.name};
}

VectorField scale(const Expr& c, const VectorField& X) {
  return {c * X.xi_t, c * X.xi_x, c * X.xi_y, c * X.eta, X.name};
}

bool is_zero_field(const VectorField& X) {
  return expand(X.xi_t).is_zero() && expand(X.xi_x).is_zero() &&
         expand(X.xi_y).is_zero() && expand(X.eta).is_zero();
}

Expr total_derivative(const Expr& e, int var_id) {
  if (symbol_kind(var_id) != SymKind::Var)
    throw ExprError("total_derivative: not an independent variable");
  if (max_jet_order(e) > 2)
    throw ExprError("total_derivative: input beyond second-order jets");
  std::vector<Expr> terms{differentiate(e, var_id)};
  for (int s : free_symbols(e)) {
    if (jet_order(s) < 0) continue;
    Expr partial = differentiate(e, s);
    if (partial.is_zero()) continue;
    terms.push_back(partial * S(jet_extend(s, var_id)));
  }
  return Expr::sum(std::move(terms));
}

Prolonged prolong2(const VectorField& X) {
  // Characteristic Q = eta - xi^t u_t - xi^x u_x - xi^y u_y.
  Expr Q = X.eta - X.xi_t * S(sym::u_t) - X.xi_x * S(sym::u_x) -
           X.xi_y * S(sym::u_y);

  auto first = [&](int v) {
    Expr e = total_derivative(Q, v) + X.xi_t * S(jet_extend(sym::u_t, v)) +
             X.xi_x * S(jet_extend(sym::u_x, v)) +
             X.xi_y * S(jet_extend(sym::u_y, v));
    return expand(e);
  };
  auto second = [&](int v1, int v2) {
    Expr d = total_derivative(total_derivative(Q, v1), v2);
    int j1 = jet_extend(jet_extend(sym::u, v1), v2);
    Expr e = d + X.xi_t * S(jet_extend(j1, sym::t)) +
             X.xi_x * S(jet_extend(j1, sym::x)) +
             X.xi_y * S(jet_extend(j1, sym::y));
    return expand(e);
  };

  Prolonged out;
  out.eta_t = first(sym::t);
  out.eta_x = first(sym::x);
  out.eta_y = first(sym::y);
  out.eta_xx = second(sym::x, sym::x);
  out.eta_xy = second(sym::x, sym::y);
  out.eta_yy = second(sym::y, sym::y);

  for (const Expr* e : {&out.eta_t, &out.eta_x, &out.eta_y, &out.eta_xx,
                        &out.eta_xy, &out.eta_yy}) {
    if (max_jet_order(*e) > 2)
      throw ExprError(
          "prolong2: residual third-order jet symbol after normalization "
          "(field '" + X.name + "')");
  }
  return out;
}

SymmetryReport check_symmetry(const VectorField& X, const ModelParams& params,
                              int trials, std::uint64_t seed, double tol) {
  params.validate();
  Expr delta = build_equation(params.vol);

  Prolonged pr = prolong2(X);
  std::vector<Expr> terms;
  auto add = [&](const Expr& coeff, int jet_or_var) {
    Expr partial = differentiate(delta, jet_or_var);
    if (!partial.is_zero()) terms.push_back(coeff * partial);
  };
  add(X.xi_t, sym::t);
  add(X.xi_x, sym::x);
  add(X.xi_y, sym::y);
  add(X.eta, sym::u);
  add(pr.eta_t, sym::u_t);
  add(pr.eta_x, sym::u_x);
  add(pr.eta_y, sym::u_y);
  add(pr.eta_xx, sym::u_xx);
  add(pr.eta_xy, sym::u_xy);
  add(pr.eta_yy, sym::u_yy);
  Expr E = Expr::sum(std::move(terms));

  // Restrict to the solution manifold: Delta is linear with unit u_t
  // coefficient, so u_t = -(Delta - u_t) exactly.  Mixed t-derivatives that
  // survive in E (fields whose xi_t depends on x, y or u) are eliminated
  // first through total derivatives of the same relation.
  Expr rest = expand(delta - S(sym::u_t));
  Expr minus_rest = -rest;
  if (depends_on(E, sym::u_tx))
    E = substitute(E, sym::u_tx, total_derivative(minus_rest, sym::x));
  if (depends_on(E, sym::u_ty))
    E = substitute(E, sym::u_ty, total_derivative(minus_rest, sym::y));
  if (depends_on(E, sym::u_tt))
    throw ExprError("check_symmetry: unexpected u_tt in the determining "
                    "expression");
  E = substitute(E, sym::u_t, minus_rest);
  E = expand(E);

  Bindings binds = parameter_bindings(params);
  SampleBox box = default_box(params);  // jets fall back to [-2, 2]

  SymmetryReport rep;
  rep.field = X.name;
  rep.seed = seed;
  rep.trials = trials;
  rep.tolerance = tol;
  ZeroTestReport z = is_probably_zero(E, box, trials, seed, tol, &binds);
  rep.pass = z.is_zero;
  rep.max_rel_residual = z.max_rel_residual;
  rep.witness = z.witness;
  rep.witness_residual = z.witness_residual;
  return rep;
}

}  // namespace bsmsym
