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

#ifndef BSMSYM_EXPR_HPP
#define BSMSYM_EXPR_HPP

#include <complex>
#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace bsmsym {

using Rational = boost::multiprecision::cpp_rational;
using Complex = std::complex<double>;

/// Thrown on invalid expression construction or an unsupported
/// symbolic operation (e.g. a derivative rule that does not exist).
class ExprError : public std::runtime_error {
 public:
  explicit ExprError(const std::string& what) : std::runtime_error(what) {}
};

// ---------------------------------------------------------------------------
// Symbols
//
// The symbol table is fixed: model parameters, reduction constants,
// independent variables (t, x, y), jet coordinates of u up to order three,
// and the bookkeeping symbols (h, w, w', w'') used by reduced ODEs.
// Jet coordinates are mutually independent symbols; multi-indices are kept
// in the canonical order t < x < y (u_yx is always written u_xy).
// ---------------------------------------------------------------------------

enum class SymKind { Param, Var, Jet, Aux };

namespace sym {
enum Id : int {
  r = 0,
  rho,
  m,
  mu,
  alpha,
  beta,
  f0,
  k,
  g,
  k1,
  k2,
  a,
  b,
  p,
  C,
  C1,
  C2,
  t,
  x,
  y,
  u,
  u_t,
  u_x,
  u_y,
  u_tt,
  u_tx,
  u_ty,
  u_xx,
  u_xy,
  u_yy,
  u_ttt,
  u_ttx,
  u_tty,
  u_txx,
  u_txy,
  u_tyy,
  u_xxx,
  u_xxy,
  u_xyy,
  u_yyy,
  h,
  w,
  wp,
  wpp,
  count
};
}  // namespace sym

SymKind symbol_kind(int id);
std::string_view symbol_name(int id);
int symbol_from_name(std::string_view name);  // throws ExprError on unknown

/// Order of a jet coordinate (u -> 0, u_xy -> 2); -1 for non-jet symbols.
int jet_order(int id);

/// Jet index raised by one differentiation: jet_extend(u_x, y) == u_xy.
/// Throws if the result would exceed order three.
int jet_extend(int jet_id, int var_id);

// ---------------------------------------------------------------------------
// Expression trees
// ---------------------------------------------------------------------------

enum class Kind { Number, Symbol, Sum, Product, Pow, Exp, Ln, SpecFun, Unknown };

enum class SpecFn { KummerM, KummerU, WhittakerM, WhittakerW, BesselJ, BesselY };

std::string_view specfn_name(SpecFn fn);

namespace detail {
struct Node;
}

/// Immutable symbolic expression.  All factories normalize on construction
/// (flatten sums/products, fold exact rational constants, collect identical
/// terms and powers of identical bases), so structurally equal values compare
/// equal with `same()`.  Values are cheap shared handles, safe to copy and
/// share across threads.
class Expr {
 public:
  Expr();  // the literal 0

  // --- leaf factories ---
  static Expr integer(long long v);
  static Expr rational(long long num, long long den);
  static Expr number(Rational v);
  static Expr symbol(int id);
  static Expr symbol(std::string_view name);

  // --- combinators (normalizing) ---
  static Expr sum(std::vector<Expr> terms);
  static Expr product(std::vector<Expr> factors);
  /// Power with a variable-free exponent.  If `exponent` depends on a
  /// variable or jet coordinate the result is rewritten as exp(e*ln(base));
  /// all non-integer powers use the principal branch.
  static Expr pow(Expr base, Expr exponent);
  static Expr exp(Expr arg);
  static Expr ln(Expr arg);
  static Expr sqrt(Expr arg);
  /// numerator/denominator.  Throws if `den` is the literal zero constant.
  static Expr quotient(Expr num, Expr den);
  /// Special-function node.  Parameter slots must be variable-free.
  static Expr special(SpecFn fn, std::vector<Expr> params, Expr arg);
  /// The opaque unknown function w and its derivatives: unknown(n, arg)
  /// stands for w^(n)(arg).  Evaluation requires a function binding.
  static Expr unknown(int order, Expr arg);

  // --- inspection ---
  Kind kind() const;
  bool is_zero() const;
  bool is_one() const;
  bool is_number() const;
  const Rational& number_value() const;
  int symbol_id() const;
  SpecFn spec_fn() const;
  const std::vector<Expr>& spec_params() const;
  int unknown_order() const;
  /// Children: Sum/Product terms, {base, exponent} for Pow, {arg} for
  /// Exp/Ln/SpecFun/Unknown.
  const std::vector<Expr>& children() const;

  std::size_t hash() const;
  bool same(const Expr& other) const;  // structural equality

  /// Total structural order (deterministic, pointer-free).
  static int compare(const Expr& a, const Expr& b);

  /// Debug dump in prefix notation, e.g. "(+ (* 2 x) (pow y 1/2))".
  /// Not a stability contract.
  std::string to_prefix() const;

  const detail::Node* node() const { return node_.get(); }

 private:
  explicit Expr(std::shared_ptr<const detail::Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const detail::Node> node_;
  friend struct detail::NodeFactory;
};

inline Expr operator+(const Expr& a, const Expr& b) { return Expr::sum({a, b}); }
inline Expr operator-(const Expr& a, const Expr& b) {
  return Expr::sum({a, Expr::product({Expr::integer(-1), b})});
}
inline Expr operator-(const Expr& a) {
  return Expr::product({Expr::integer(-1), a});
}
inline Expr operator*(const Expr& a, const Expr& b) {
  return Expr::product({a, b});
}
inline Expr operator/(const Expr& a, const Expr& b) {
  return Expr::quotient(a, b);
}

struct ExprLess {
  bool operator()(const Expr& a, const Expr& b) const {
    return Expr::compare(a, b) < 0;
  }
};

// ---------------------------------------------------------------------------
// Symbolic operations
// ---------------------------------------------------------------------------

/// Exact partial derivative with respect to one symbol.  Jet coordinates are
/// treated as mutually independent.  Special-function nodes use the standard
/// derivative identities (Kummer parameter shifts, Bessel recurrence,
/// Whittaker via the Kummer representation).
Expr differentiate(const Expr& e, int sym_id);

/// Replace every occurrence of a symbol by an expression.
Expr substitute(const Expr& e, int sym_id, const Expr& replacement);

/// Re-run the lightweight structural normalization (idempotent).
Expr normalize(const Expr& e);

/// Distribute products over sums and expand small positive integer powers of
/// sums, then normalize.  Used for exact coefficient-level identities.
Expr expand(const Expr& e);

bool depends_on(const Expr& e, int sym_id);
std::vector<int> free_symbols(const Expr& e);
/// Highest jet order appearing in e (-1 if no jet coordinate appears).
int max_jet_order(const Expr& e);

}  // namespace bsmsym

#endif  // BSMSYM_EXPR_HPP
