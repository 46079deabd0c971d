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

#include "bsmsym/eval.hpp"

#include <cmath>

#include "bsmsym/specfun.hpp"

namespace bsmsym {

namespace {

constexpr double kPoleFloor = 1e-300;

double to_double(const Rational& q) { return q.convert_to<double>(); }

Complex int_pow(Complex base, long long e) {
  if (e < 0) {
    if (std::abs(base) < kPoleFloor)
      throw EvalError(EvalError::Code::Pole, "division by near-zero value");
    return 1.0 / int_pow(base, -e);
  }
  Complex acc = 1.0;
  Complex b = base;
  unsigned long long n = static_cast<unsigned long long>(e);
  while (n) {
    if (n & 1ULL) acc *= b;
    b *= b;
    n >>= 1ULL;
  }
  return acc;
}

}  // namespace

Complex Bindings::get(int sym_id) const {
  const auto& v = values_[static_cast<std::size_t>(sym_id)];
  if (!v)
    throw EvalError(EvalError::Code::UnboundSymbol,
                    "unbound symbol '" + std::string(symbol_name(sym_id)) + "'");
  return *v;
}

Bindings Bindings::merged(const Bindings& other) const {
  Bindings out = *this;
  for (int i = 0; i < sym::count; ++i)
    if (other.bound(i)) out.set(i, other.values_[static_cast<std::size_t>(i)].value());
  if (other.unknown_) out.unknown_ = other.unknown_;
  return out;
}

Complex eval_numeric(const Expr& e, const Bindings& bindings) {
  switch (e.kind()) {
    case Kind::Number:
      return Complex(to_double(e.number_value()), 0.0);
    case Kind::Symbol:
      return bindings.get(e.symbol_id());
    case Kind::Sum: {
      Complex acc = 0.0;
      for (const auto& kid : e.children()) acc += eval_numeric(kid, bindings);
      return acc;
    }
    case Kind::Product: {
      Complex acc = 1.0;
      for (const auto& kid : e.children()) acc *= eval_numeric(kid, bindings);
      return acc;
    }
    case Kind::Pow: {
      Complex base = eval_numeric(e.children()[0], bindings);
      Complex expo = eval_numeric(e.children()[1], bindings);
      if (std::abs(expo.imag()) < 1e-14 &&
          std::abs(expo.real() - std::round(expo.real())) < 1e-14 &&
          std::abs(expo.real()) < 1e9) {
        return int_pow(base, static_cast<long long>(std::llround(expo.real())));
      }
      if (std::abs(base) < kPoleFloor) {
        if (expo.real() > 0.0) return 0.0;
        throw EvalError(EvalError::Code::Pole, "near-zero base of negative power");
      }
      return std::exp(expo * std::log(base));
    }
    case Kind::Exp:
      return std::exp(eval_numeric(e.children()[0], bindings));
    case Kind::Ln: {
      Complex arg = eval_numeric(e.children()[0], bindings);
      if (std::abs(arg) < kPoleFloor)
        throw EvalError(EvalError::Code::Pole, "ln of near-zero value");
      return std::log(arg);
    }
    case Kind::SpecFun: {
      const auto& ps = e.spec_params();
      Complex arg = eval_numeric(e.children()[0], bindings);
      try {
        switch (e.spec_fn()) {
          case SpecFn::KummerM:
            return specfun::kummer_m(eval_numeric(ps[0], bindings),
                                     eval_numeric(ps[1], bindings), arg)
                .value;
          case SpecFn::KummerU:
            return specfun::kummer_u(eval_numeric(ps[0], bindings),
                                     eval_numeric(ps[1], bindings), arg)
                .value;
          case SpecFn::WhittakerM:
            return specfun::whittaker_m(eval_numeric(ps[0], bindings),
                                        eval_numeric(ps[1], bindings), arg)
                .value;
          case SpecFn::WhittakerW:
            return specfun::whittaker_w(eval_numeric(ps[0], bindings),
                                        eval_numeric(ps[1], bindings), arg)
                .value;
          case SpecFn::BesselJ:
            return specfun::bessel_j(eval_numeric(ps[0], bindings), arg).value;
          case SpecFn::BesselY:
            return specfun::bessel_y(eval_numeric(ps[0], bindings), arg).value;
        }
      } catch (const specfun::Error& err) {
        throw EvalError(EvalError::Code::SpecFun,
                        std::string(specfn_name(e.spec_fn())) + ": " + err.what());
      }
      break;
    }
    case Kind::Unknown: {
      if (!bindings.unknown())
        throw EvalError(EvalError::Code::UnboundUnknown,
                        "no binding for the unknown function w");
      Complex arg = eval_numeric(e.children()[0], bindings);
      return bindings.unknown()(e.unknown_order(), arg);
    }
  }
  throw EvalError(EvalError::Code::UnboundSymbol, "unhandled node kind");
}

}  // namespace bsmsym
