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

#ifndef BSMSYM_EVAL_HPP
#define BSMSYM_EVAL_HPP

#include <array>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>

#include "bsmsym/expr.hpp"

namespace bsmsym {

class EvalError : public std::runtime_error {
 public:
  enum class Code { UnboundSymbol, Pole, SpecFun, UnboundUnknown };
  EvalError(Code c, const std::string& what) : std::runtime_error(what), code(c) {}
  Code code;
};

/// Numeric assignment for symbols plus an optional binding for the opaque
/// unknown function w (called with the derivative order and the argument).
class Bindings {
 public:
  using UnknownFn = std::function<Complex(int order, Complex arg)>;

  Bindings& set(int sym_id, Complex v) {
    values_[static_cast<std::size_t>(sym_id)] = v;
    return *this;
  }
  Bindings& set(int sym_id, double v) { return set(sym_id, Complex(v, 0.0)); }
  Bindings& unset(int sym_id) {
    values_[static_cast<std::size_t>(sym_id)].reset();
    return *this;
  }
  bool bound(int sym_id) const {
    return values_[static_cast<std::size_t>(sym_id)].has_value();
  }
  Complex get(int sym_id) const;

  Bindings& set_unknown(UnknownFn fn) {
    unknown_ = std::move(fn);
    return *this;
  }
  const UnknownFn& unknown() const { return unknown_; }

  /// Overlay `other` on top of this (other wins on conflicts).
  Bindings merged(const Bindings& other) const;

 private:
  std::array<std::optional<Complex>, sym::count> values_{};
  UnknownFn unknown_;
};

/// Evaluate in double-precision complex arithmetic with principal branches
/// for ln, sqrt and non-integer powers.  Throws EvalError on unbound
/// symbols, poles (divisor magnitude below 1e-300) and propagated
/// special-function failures.
Complex eval_numeric(const Expr& e, const Bindings& bindings);

}  // namespace bsmsym

#endif  // BSMSYM_EVAL_HPP
