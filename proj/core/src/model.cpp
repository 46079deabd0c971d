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

#include "bsmsym/model.hpp"

#include <cmath>

namespace bsmsym {

namespace {

Expr S(int id) { return Expr::symbol(id); }

}  // namespace

double ModelParams::g() const {
  if (vol != VolCase::Hyperbolic)
    throw ModelError("g is defined for the hyperbolic volatility case only");
  return 2.0 * (alpha + rho * beta * (mu - r) / k);
}

void ModelParams::validate() const {
  if (!(std::abs(rho) < 1.0)) throw ModelError("|rho| must be < 1");
  if (beta == 0.0) throw ModelError("beta must be nonzero");
  if (vol == VolCase::Const && f0 == 0.0)
    throw ModelError("f0 must be nonzero in the constant-volatility case");
  if (vol == VolCase::Hyperbolic) {
    if (k == 0.0) throw ModelError("k must be nonzero in the hyperbolic case");
    double recomputed = 2.0 * (alpha + rho * beta * (mu - r) / k);
    if (recomputed != g())
      throw ModelError("stored g does not match its defining combination");
  }
}

ModelParams ModelParams::defaults(VolCase vol) {
  ModelParams p;
  p.vol = vol;
  return p;
}

ModelParams ModelParams::defaults_g_zero() {
  ModelParams p = defaults(VolCase::Hyperbolic);
  p.alpha = -p.rho * p.beta * (p.mu - p.r) / p.k;
  return p;
}

Expr vol_function(VolCase vol) {
  if (vol == VolCase::Const) return S(sym::f0);
  return Expr::quotient(S(sym::k), S(sym::y) - S(sym::m));
}

namespace {

Expr equation_with_drift(VolCase vol, const Expr& drift) {
  Expr f = vol_function(vol);
  Expr half = Expr::rational(1, 2);
  Expr x = S(sym::x);
  return S(sym::u_t) +
         half * f * f * x * x * S(sym::u_xx) +
         S(sym::rho) * S(sym::beta) * x * f * S(sym::u_xy) +
         half * S(sym::beta) * S(sym::beta) * S(sym::u_yy) +
         S(sym::r) * x * S(sym::u_x) + drift * S(sym::u_y) -
         S(sym::r) * S(sym::u);
}

}  // namespace

Expr build_equation(VolCase vol) {
  Expr drift = S(sym::alpha) * (S(sym::m) - S(sym::y)) -
               Expr::quotient(S(sym::beta) * S(sym::rho) *
                                  (S(sym::mu) - S(sym::r)),
                              vol_function(vol));
  return equation_with_drift(vol, drift);
}

Expr build_equation_gform() {
  Expr drift = Expr::rational(1, 2) * S(sym::g) * (S(sym::m) - S(sym::y));
  return equation_with_drift(VolCase::Hyperbolic, drift);
}

Expr build_equation_g0() {
  return equation_with_drift(VolCase::Hyperbolic, Expr());
}

Bindings parameter_bindings(const ModelParams& params) {
  params.validate();
  Bindings b;
  b.set(sym::r, params.r)
      .set(sym::rho, params.rho)
      .set(sym::m, params.m)
      .set(sym::mu, params.mu)
      .set(sym::alpha, params.alpha)
      .set(sym::beta, params.beta);
  if (params.vol == VolCase::Const) {
    b.set(sym::f0, params.f0);
  } else {
    b.set(sym::k, params.k);
    b.set(sym::g, params.g());
  }
  return b;
}

SampleBox default_box(const ModelParams& params) {
  SampleBox box;
  box.set(sym::t, 0.1, 1.0);
  box.set(sym::x, 0.5, 2.0);
  box.set(sym::y, params.m + 0.2, params.m + 1.5);
  return box;
}

ZeroTestReport drift_identity_check(const ModelParams& params, int trials,
                                    std::uint64_t seed) {
  if (params.vol != VolCase::Hyperbolic)
    throw ModelError("drift_identity_check applies to the hyperbolic case");
  Expr lhs = S(sym::alpha) * (S(sym::m) - S(sym::y)) -
             Expr::quotient(S(sym::beta) * S(sym::rho) *
                                (S(sym::mu) - S(sym::r)) * (S(sym::y) - S(sym::m)),
                            S(sym::k));
  Expr rhs = Expr::rational(1, 2) * S(sym::g) * (S(sym::m) - S(sym::y));
  Bindings binds = parameter_bindings(params);
  return is_probably_zero(lhs - rhs, default_box(params), trials, seed, 1e-9,
                          &binds);
}

}  // namespace bsmsym
