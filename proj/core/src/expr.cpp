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

#include "bsmsym/expr.hpp"

#include <algorithm>
#include <array>
#include <map>
#include <sstream>

namespace bsmsym {

// ---------------------------------------------------------------------------
// Symbol table
// ---------------------------------------------------------------------------

namespace {

struct SymbolInfo {
  std::string_view name;
  SymKind kind;
  int order;  // jet order, -1 otherwise
};

constexpr std::array<SymbolInfo, sym::count> kSymbols = {{
    {"r", SymKind::Param, -1},     {"rho", SymKind::Param, -1},
    {"m", SymKind::Param, -1},     {"mu", SymKind::Param, -1},
    {"alpha", SymKind::Param, -1}, {"beta", SymKind::Param, -1},
    {"f0", SymKind::Param, -1},    {"k", SymKind::Param, -1},
    {"g", SymKind::Param, -1},     {"k1", SymKind::Param, -1},
    {"k2", SymKind::Param, -1},    {"a", SymKind::Param, -1},
    {"b", SymKind::Param, -1},     {"p", SymKind::Param, -1},
    {"C", SymKind::Param, -1},     {"C1", SymKind::Param, -1},
    {"C2", SymKind::Param, -1},    {"t", SymKind::Var, -1},
    {"x", SymKind::Var, -1},       {"y", SymKind::Var, -1},
    {"u", SymKind::Jet, 0},        {"u_t", SymKind::Jet, 1},
    {"u_x", SymKind::Jet, 1},      {"u_y", SymKind::Jet, 1},
    {"u_tt", SymKind::Jet, 2},     {"u_tx", SymKind::Jet, 2},
    {"u_ty", SymKind::Jet, 2},     {"u_xx", SymKind::Jet, 2},
    {"u_xy", SymKind::Jet, 2},     {"u_yy", SymKind::Jet, 2},
    {"u_ttt", SymKind::Jet, 3},    {"u_ttx", SymKind::Jet, 3},
    {"u_tty", SymKind::Jet, 3},    {"u_txx", SymKind::Jet, 3},
    {"u_txy", SymKind::Jet, 3},    {"u_tyy", SymKind::Jet, 3},
    {"u_xxx", SymKind::Jet, 3},    {"u_xxy", SymKind::Jet, 3},
    {"u_xyy", SymKind::Jet, 3},    {"u_yyy", SymKind::Jet, 3},
    {"h", SymKind::Aux, -1},       {"w", SymKind::Aux, -1},
    {"wp", SymKind::Aux, -1},      {"wpp", SymKind::Aux, -1},
}};

void check_symbol_id(int id) {
  if (id < 0 || id >= sym::count)
    throw ExprError("unknown symbol id " + std::to_string(id));
}

}  // namespace

SymKind symbol_kind(int id) {
  check_symbol_id(id);
  return kSymbols[static_cast<std::size_t>(id)].kind;
}

std::string_view symbol_name(int id) {
  check_symbol_id(id);
  return kSymbols[static_cast<std::size_t>(id)].name;
}

int symbol_from_name(std::string_view name) {
  for (int i = 0; i < sym::count; ++i)
    if (kSymbols[static_cast<std::size_t>(i)].name == name) return i;
  throw ExprError("unknown symbol name '" + std::string(name) + "'");
}

int jet_order(int id) {
  check_symbol_id(id);
  return kSymbols[static_cast<std::size_t>(id)].order;
}

int jet_extend(int jet_id, int var_id) {
  if (jet_order(jet_id) < 0) throw ExprError("jet_extend: not a jet symbol");
  if (symbol_kind(var_id) != SymKind::Var)
    throw ExprError("jet_extend: not a variable");
  // Multi-index as (nt, nx, ny) counts recovered from the suffix.
  std::string_view nm = symbol_name(jet_id);
  int nt = 0, nx = 0, ny = 0;
  for (std::size_t i = 2; i < nm.size(); ++i) {
    if (nm[i] == 't') ++nt;
    if (nm[i] == 'x') ++nx;
    if (nm[i] == 'y') ++ny;
  }
  if (var_id == sym::t) ++nt;
  if (var_id == sym::x) ++nx;
  if (var_id == sym::y) ++ny;
  if (nt + nx + ny > 3)
    throw ExprError("jet_extend: order above three not represented");
  std::string out = "u";
  if (nt + nx + ny > 0) out += "_";
  out.append(static_cast<std::size_t>(nt), 't');
  out.append(static_cast<std::size_t>(nx), 'x');
  out.append(static_cast<std::size_t>(ny), 'y');
  return symbol_from_name(out);
}

std::string_view specfn_name(SpecFn fn) {
  switch (fn) {
    case SpecFn::KummerM: return "KummerM";
    case SpecFn::KummerU: return "KummerU";
    case SpecFn::WhittakerM: return "WhittakerM";
    case SpecFn::WhittakerW: return "WhittakerW";
    case SpecFn::BesselJ: return "BesselJ";
    case SpecFn::BesselY: return "BesselY";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// Nodes
// ---------------------------------------------------------------------------

namespace detail {

struct Node {
  Kind kind = Kind::Number;
  Rational value;           // Number
  int sym = -1;             // Symbol
  SpecFn fn{};              // SpecFun
  int order = 0;            // Unknown
  std::vector<Expr> params; // SpecFun parameter slots
  std::vector<Expr> kids;
  std::size_t hash = 0;
};

struct NodeFactory {
  static Expr make(std::shared_ptr<const Node> n) { return Expr(std::move(n)); }
};

namespace {

std::size_t hash_combine(std::size_t seed, std::size_t v) {
  return seed ^ (v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
}

std::size_t node_hash(const Node& n) {
  std::size_t s = static_cast<std::size_t>(n.kind) * 0x9e3779b1u + 1;
  switch (n.kind) {
    case Kind::Number: {
      s = hash_combine(s, std::hash<std::string>{}(n.value.str()));
      break;
    }
    case Kind::Symbol:
      s = hash_combine(s, static_cast<std::size_t>(n.sym) + 17);
      break;
    case Kind::SpecFun:
      s = hash_combine(s, static_cast<std::size_t>(n.fn) + 71);
      for (const auto& p : n.params) s = hash_combine(s, p.hash());
      break;
    case Kind::Unknown:
      s = hash_combine(s, static_cast<std::size_t>(n.order) + 131);
      break;
    default:
      break;
  }
  for (const auto& c : n.kids) s = hash_combine(s, c.hash());
  return s;
}

Expr finish(Node n) {
  n.hash = node_hash(n);
  return NodeFactory::make(std::make_shared<const Node>(std::move(n)));
}

}  // namespace
}  // namespace detail

using detail::Node;

namespace {

const Expr& expr_zero() {
  static const Expr e = Expr::number(Rational(0));
  return e;
}
const Expr& expr_one() {
  static const Expr e = Expr::number(Rational(1));
  return e;
}

bool is_integer(const Rational& q) {
  return boost::multiprecision::denominator(q) == 1;
}

// Exact rational power for integer exponents that fit in long long.
Rational rational_pow(const Rational& base, long long e) {
  using boost::multiprecision::cpp_int;
  if (e == 0) return Rational(1);
  if (base == 0 && e < 0)
    throw ExprError("zero raised to a negative power");
  cpp_int num = boost::multiprecision::numerator(base);
  cpp_int den = boost::multiprecision::denominator(base);
  unsigned long long n = static_cast<unsigned long long>(e < 0 ? -e : e);
  cpp_int pn = boost::multiprecision::pow(num, static_cast<unsigned>(n));
  cpp_int pd = boost::multiprecision::pow(den, static_cast<unsigned>(n));
  if (e < 0) return Rational(pd, pn);
  return Rational(pn, pd);
}

bool exponent_is_plain(const Expr& e) {
  // Exponents may contain parameters but not variables, jets or unknowns.
  for (int s : free_symbols(e)) {
    SymKind k = symbol_kind(s);
    if (k == SymKind::Var || k == SymKind::Jet) return false;
  }
  std::vector<const Node*> stack{e.node()};
  while (!stack.empty()) {
    const Node* n = stack.back();
    stack.pop_back();
    if (n->kind == Kind::Unknown) return false;
    for (const auto& c : n->kids) stack.push_back(c.node());
    for (const auto& c : n->params) stack.push_back(c.node());
  }
  return true;
}

}  // namespace

// ---------------------------------------------------------------------------
// Expr basics
// ---------------------------------------------------------------------------

Expr::Expr() { *this = expr_zero(); }

Kind Expr::kind() const { return node_->kind; }

bool Expr::is_zero() const {
  return node_->kind == Kind::Number && node_->value == 0;
}
bool Expr::is_one() const {
  return node_->kind == Kind::Number && node_->value == 1;
}
bool Expr::is_number() const { return node_->kind == Kind::Number; }

const Rational& Expr::number_value() const {
  if (!is_number()) throw ExprError("number_value on non-number");
  return node_->value;
}

int Expr::symbol_id() const {
  if (node_->kind != Kind::Symbol) throw ExprError("symbol_id on non-symbol");
  return node_->sym;
}

SpecFn Expr::spec_fn() const {
  if (node_->kind != Kind::SpecFun) throw ExprError("spec_fn on non-specfun");
  return node_->fn;
}

const std::vector<Expr>& Expr::spec_params() const {
  if (node_->kind != Kind::SpecFun)
    throw ExprError("spec_params on non-specfun");
  return node_->params;
}

int Expr::unknown_order() const {
  if (node_->kind != Kind::Unknown)
    throw ExprError("unknown_order on non-unknown");
  return node_->order;
}

const std::vector<Expr>& Expr::children() const { return node_->kids; }

std::size_t Expr::hash() const { return node_->hash; }

int Expr::compare(const Expr& a, const Expr& b) {
  const Node* na = a.node();
  const Node* nb = b.node();
  if (na == nb) return 0;
  if (na->kind != nb->kind)
    return static_cast<int>(na->kind) < static_cast<int>(nb->kind) ? -1 : 1;
  switch (na->kind) {
    case Kind::Number:
      if (na->value == nb->value) return 0;
      return na->value < nb->value ? -1 : 1;
    case Kind::Symbol:
      if (na->sym == nb->sym) return 0;
      return na->sym < nb->sym ? -1 : 1;
    case Kind::SpecFun: {
      if (na->fn != nb->fn) return na->fn < nb->fn ? -1 : 1;
      for (std::size_t i = 0; i < na->params.size(); ++i) {
        int c = compare(na->params[i], nb->params[i]);
        if (c != 0) return c;
      }
      break;
    }
    case Kind::Unknown:
      if (na->order != nb->order) return na->order < nb->order ? -1 : 1;
      break;
    default:
      break;
  }
  if (na->kids.size() != nb->kids.size())
    return na->kids.size() < nb->kids.size() ? -1 : 1;
  for (std::size_t i = 0; i < na->kids.size(); ++i) {
    int c = compare(na->kids[i], nb->kids[i]);
    if (c != 0) return c;
  }
  return 0;
}

bool Expr::same(const Expr& other) const {
  if (node_.get() == other.node_.get()) return true;
  if (hash() != other.hash()) return false;
  return compare(*this, other) == 0;
}

// ---------------------------------------------------------------------------
// Leaf factories
// ---------------------------------------------------------------------------

Expr Expr::integer(long long v) { return number(Rational(v)); }

Expr Expr::rational(long long num, long long den) {
  if (den == 0) throw ExprError("rational with zero denominator");
  return number(Rational(num, den));
}

Expr Expr::number(Rational v) {
  Node n;
  n.kind = Kind::Number;
  n.value = std::move(v);
  return detail::finish(std::move(n));
}

Expr Expr::symbol(int id) {
  check_symbol_id(id);
  Node n;
  n.kind = Kind::Symbol;
  n.sym = id;
  return detail::finish(std::move(n));
}

Expr Expr::symbol(std::string_view name) { return symbol(symbol_from_name(name)); }

// ---------------------------------------------------------------------------
// Sum
// ---------------------------------------------------------------------------

namespace {

// Split a normalized term into (rational coefficient, core).
std::pair<Rational, Expr> split_coefficient(const Expr& term) {
  if (term.is_number()) return {term.number_value(), expr_one()};
  if (term.kind() == Kind::Product) {
    const auto& kids = term.children();
    if (!kids.empty() && kids[0].is_number()) {
      Rational c = kids[0].number_value();
      if (kids.size() == 2) return {c, kids[1]};
      std::vector<Expr> rest(kids.begin() + 1, kids.end());
      // Rebuild directly: the factors are already normalized and sorted.
      Node n;
      n.kind = Kind::Product;
      n.kids = std::move(rest);
      return {c, detail::finish(std::move(n))};
    }
  }
  return {Rational(1), term};
}

Expr attach_coefficient(const Rational& c, const Expr& core) {
  if (core.is_one()) return Expr::number(c);
  if (c == 1) return core;
  std::vector<Expr> kids;
  if (core.kind() == Kind::Product) {
    kids.reserve(core.children().size() + 1);
    kids.push_back(Expr::number(c));
    for (const auto& kid : core.children()) kids.push_back(kid);
  } else {
    kids = {Expr::number(c), core};
  }
  Node n;
  n.kind = Kind::Product;
  n.kids = std::move(kids);
  return detail::finish(std::move(n));
}

}  // namespace

Expr Expr::sum(std::vector<Expr> terms) {
  Rational constant(0);
  std::map<Expr, Rational, ExprLess> collected;
  std::vector<Expr> queue(std::move(terms));
  std::reverse(queue.begin(), queue.end());
  while (!queue.empty()) {
    Expr e = std::move(queue.back());
    queue.pop_back();
    if (e.kind() == Kind::Sum) {
      for (auto it = e.children().rbegin(); it != e.children().rend(); ++it)
        queue.push_back(*it);
      continue;
    }
    if (e.is_number()) {
      constant += e.number_value();
      continue;
    }
    auto [c, core] = split_coefficient(e);
    collected[core] += c;
  }
  std::vector<Expr> out;
  out.reserve(collected.size() + 1);
  if (constant != 0) out.push_back(number(constant));
  for (const auto& [core, c] : collected) {
    if (c == 0) continue;
    out.push_back(attach_coefficient(c, core));
  }
  if (out.empty()) return expr_zero();
  if (out.size() == 1) return out[0];
  Node n;
  n.kind = Kind::Sum;
  n.kids = std::move(out);
  return detail::finish(std::move(n));
}

// ---------------------------------------------------------------------------
// Product
// ---------------------------------------------------------------------------

Expr Expr::product(std::vector<Expr> factors) {
  Rational coeff(1);
  std::map<Expr, std::vector<Expr>, ExprLess> base_exponents;
  std::vector<Expr> exp_args;  // arguments of exp factors, to be summed
  std::vector<Expr> queue(std::move(factors));
  std::reverse(queue.begin(), queue.end());
  while (!queue.empty()) {
    Expr e = std::move(queue.back());
    queue.pop_back();
    if (e.kind() == Kind::Product) {
      for (auto it = e.children().rbegin(); it != e.children().rend(); ++it)
        queue.push_back(*it);
      continue;
    }
    if (e.is_number()) {
      coeff *= e.number_value();
      continue;
    }
    if (e.kind() == Kind::Exp) {
      exp_args.push_back(e.children()[0]);
      continue;
    }
    if (e.kind() == Kind::Pow) {
      base_exponents[e.children()[0]].push_back(e.children()[1]);
      continue;
    }
    base_exponents[e].push_back(expr_one());
  }
  if (coeff == 0) return expr_zero();

  std::vector<Expr> out;
  for (auto& [base, exps] : base_exponents) {
    Expr total = exps.size() == 1 ? exps[0] : sum(std::move(exps));
    if (total.is_zero()) continue;
    Expr p = pow(base, total);
    if (p.is_number()) {
      coeff *= p.number_value();
      if (coeff == 0) return expr_zero();
      continue;
    }
    if (p.kind() == Kind::Product) {
      // pow() may fold (a*b)^n back into a product; merge its factors.
      for (const auto& kid : p.children()) {
        if (kid.is_number())
          coeff *= kid.number_value();
        else
          out.push_back(kid);
      }
      continue;
    }
    if (p.kind() == Kind::Exp) {
      exp_args.push_back(p.children()[0]);
      continue;
    }
    out.push_back(p);
  }
  if (!exp_args.empty()) {
    Expr e = exp(sum(std::move(exp_args)));
    if (!e.is_one()) out.push_back(e);
  }
  if (coeff == 0) return expr_zero();
  std::sort(out.begin(), out.end(),
            [](const Expr& a, const Expr& b) { return compare(a, b) < 0; });
  if (out.empty()) return number(coeff);
  if (coeff != 1) {
    std::vector<Expr> with_c;
    with_c.reserve(out.size() + 1);
    with_c.push_back(number(coeff));
    for (auto& e : out) with_c.push_back(std::move(e));
    out = std::move(with_c);
  } else if (out.size() == 1) {
    return out[0];
  }
  Node n;
  n.kind = Kind::Product;
  n.kids = std::move(out);
  return detail::finish(std::move(n));
}

// ---------------------------------------------------------------------------
// Pow / Exp / Ln
// ---------------------------------------------------------------------------

Expr Expr::pow(Expr base, Expr exponent) {
  if (!exponent_is_plain(exponent)) {
    // Variable exponent: principal-branch rewrite.
    return exp(product({std::move(exponent), ln(std::move(base))}));
  }
  if (exponent.is_zero()) {
    if (base.is_zero()) throw ExprError("0^0 is undefined");
    return expr_one();
  }
  if (exponent.is_one()) return base;
  if (base.is_one()) return expr_one();

  bool exp_int_small = false;
  long long e_ll = 0;
  if (exponent.is_number() && is_integer(exponent.number_value())) {
    const auto& num = boost::multiprecision::numerator(exponent.number_value());
    if (num >= -64 && num <= 64) {
      exp_int_small = true;
      e_ll = num.convert_to<long long>();
    }
  }

  if (base.is_number()) {
    if (base.is_zero()) {
      bool positive = exponent.is_number() && exponent.number_value() > 0;
      if (!positive) throw ExprError("division by the literal zero constant");
      return expr_zero();
    }
    if (exp_int_small) return number(rational_pow(base.number_value(), e_ll));
  }

  if (exp_int_small) {
    // Integer powers are branch-free, so they distribute over products and
    // compose with inner powers.
    if (base.kind() == Kind::Product) {
      std::vector<Expr> kids;
      kids.reserve(base.children().size());
      for (const auto& kid : base.children())
        kids.push_back(pow(kid, exponent));
      return product(std::move(kids));
    }
    if (base.kind() == Kind::Pow) {
      Expr inner_e = product({base.children()[1], exponent});
      return pow(base.children()[0], inner_e);
    }
    if (base.kind() == Kind::Exp)
      return exp(product({base.children()[0], exponent}));
  }

  Node n;
  n.kind = Kind::Pow;
  n.kids = {std::move(base), std::move(exponent)};
  return detail::finish(std::move(n));
}

Expr Expr::exp(Expr arg) {
  if (arg.is_zero()) return expr_one();
  if (arg.kind() == Kind::Ln) return arg.children()[0];
  Node n;
  n.kind = Kind::Exp;
  n.kids = {std::move(arg)};
  return detail::finish(std::move(n));
}

Expr Expr::ln(Expr arg) {
  if (arg.is_zero()) throw ExprError("ln of the literal zero constant");
  if (arg.is_one()) return expr_zero();
  Node n;
  n.kind = Kind::Ln;
  n.kids = {std::move(arg)};
  return detail::finish(std::move(n));
}

Expr Expr::sqrt(Expr arg) { return pow(std::move(arg), rational(1, 2)); }

Expr Expr::quotient(Expr num, Expr den) {
  if (den.is_zero()) throw ExprError("division by the literal zero constant");
  return product({std::move(num), pow(std::move(den), integer(-1))});
}

Expr Expr::special(SpecFn fn, std::vector<Expr> params, Expr arg) {
  std::size_t expected = (fn == SpecFn::BesselJ || fn == SpecFn::BesselY) ? 1 : 2;
  if (params.size() != expected)
    throw ExprError(std::string(specfn_name(fn)) + ": wrong parameter count");
  for (const auto& p : params)
    if (!exponent_is_plain(p))
      throw ExprError(std::string(specfn_name(fn)) +
                      ": parameter slot depends on a variable");
  Node n;
  n.kind = Kind::SpecFun;
  n.fn = fn;
  n.params = std::move(params);
  n.kids = {std::move(arg)};
  return detail::finish(std::move(n));
}

Expr Expr::unknown(int order, Expr arg) {
  if (order < 0) throw ExprError("unknown: negative derivative order");
  Node n;
  n.kind = Kind::Unknown;
  n.order = order;
  n.kids = {std::move(arg)};
  return detail::finish(std::move(n));
}

// ---------------------------------------------------------------------------
// differentiate
// ---------------------------------------------------------------------------

namespace {

Expr d_specfun(const Expr& e, int v) {
  const Expr& arg = e.children()[0];
  Expr darg = differentiate(arg, v);
  if (darg.is_zero()) return Expr();
  const auto& ps = e.spec_params();
  for (const auto& p : ps)
    if (depends_on(p, v))
      throw ExprError(std::string(specfn_name(e.spec_fn())) +
                      ": no derivative rule for parameter slots");
  const Expr one = Expr::integer(1);
  const Expr half = Expr::rational(1, 2);
  switch (e.spec_fn()) {
    case SpecFn::KummerM: {
      // d/dz M(a,b,z) = (a/b) M(a+1,b+1,z)
      Expr shifted = Expr::special(SpecFn::KummerM, {ps[0] + one, ps[1] + one}, arg);
      return Expr::product({Expr::quotient(ps[0], ps[1]), shifted, darg});
    }
    case SpecFn::KummerU: {
      // d/dz U(a,b,z) = -a U(a+1,b+1,z)
      Expr shifted = Expr::special(SpecFn::KummerU, {ps[0] + one, ps[1] + one}, arg);
      return Expr::product({-ps[0], shifted, darg});
    }
    case SpecFn::BesselJ:
    case SpecFn::BesselY: {
      // C'_n = (C_{n-1} - C_{n+1}) / 2
      Expr lo = Expr::special(e.spec_fn(), {ps[0] - one}, arg);
      Expr hi = Expr::special(e.spec_fn(), {ps[0] + one}, arg);
      return Expr::product({half, lo - hi, darg});
    }
    case SpecFn::WhittakerM:
    case SpecFn::WhittakerW: {
      // Via the Kummer representation  e^{-z/2} z^{nu+1/2} {M|U}(A,B,z)
      // with A = nu - kappa + 1/2, B = 1 + 2 nu.
      const Expr& kp = ps[0];
      const Expr& nu = ps[1];
      Expr A = nu - kp + half;
      Expr B = one + Expr::integer(2) * nu;
      Expr front = (nu + half) * Expr::pow(arg, Expr::integer(-1)) - half;
      Expr prefactor = Expr::product(
          {Expr::exp(Expr::product({Expr::rational(-1, 2), arg})),
           Expr::pow(arg, nu + half)});
      Expr tail;
      if (e.spec_fn() == SpecFn::WhittakerM) {
        Expr shifted = Expr::special(SpecFn::KummerM, {A + one, B + one}, arg);
        tail = Expr::product({Expr::quotient(A, B), prefactor, shifted});
      } else {
        Expr shifted = Expr::special(SpecFn::KummerU, {A + one, B + one}, arg);
        tail = Expr::product({-A, prefactor, shifted});
      }
      return Expr::product({front * e + tail, darg});
    }
  }
  throw ExprError("unhandled special function");
}

}  // namespace

Expr differentiate(const Expr& e, int v) {
  check_symbol_id(v);
  switch (e.kind()) {
    case Kind::Number:
      return Expr();
    case Kind::Symbol:
      return e.symbol_id() == v ? Expr::integer(1) : Expr();
    case Kind::Sum: {
      std::vector<Expr> terms;
      terms.reserve(e.children().size());
      for (const auto& kid : e.children()) terms.push_back(differentiate(kid, v));
      return Expr::sum(std::move(terms));
    }
    case Kind::Product: {
      std::vector<Expr> terms;
      const auto& kids = e.children();
      for (std::size_t i = 0; i < kids.size(); ++i) {
        Expr dk = differentiate(kids[i], v);
        if (dk.is_zero()) continue;
        std::vector<Expr> factors;
        factors.reserve(kids.size());
        for (std::size_t j = 0; j < kids.size(); ++j)
          factors.push_back(j == i ? dk : kids[j]);
        terms.push_back(Expr::product(std::move(factors)));
      }
      return Expr::sum(std::move(terms));
    }
    case Kind::Pow: {
      const Expr& base = e.children()[0];
      const Expr& expo = e.children()[1];
      Expr db = differentiate(base, v);
      Expr de = differentiate(expo, v);
      std::vector<Expr> terms;
      if (!db.is_zero()) {
        Expr drop = Expr::pow(base, expo - Expr::integer(1));
        terms.push_back(Expr::product({expo, drop, db}));
      }
      if (!de.is_zero()) terms.push_back(Expr::product({e, Expr::ln(base), de}));
      return Expr::sum(std::move(terms));
    }
    case Kind::Exp: {
      Expr da = differentiate(e.children()[0], v);
      if (da.is_zero()) return Expr();
      return Expr::product({e, da});
    }
    case Kind::Ln: {
      Expr da = differentiate(e.children()[0], v);
      if (da.is_zero()) return Expr();
      return Expr::product(
          {da, Expr::pow(e.children()[0], Expr::integer(-1))});
    }
    case Kind::SpecFun:
      return d_specfun(e, v);
    case Kind::Unknown: {
      Expr da = differentiate(e.children()[0], v);
      if (da.is_zero()) return Expr();
      return Expr::product(
          {Expr::unknown(e.unknown_order() + 1, e.children()[0]), da});
    }
  }
  throw ExprError("unhandled node kind in differentiate");
}

// ---------------------------------------------------------------------------
// substitute / normalize / expand
// ---------------------------------------------------------------------------

namespace {

template <typename F>
Expr rebuild(const Expr& e, F&& recurse) {
  switch (e.kind()) {
    case Kind::Number:
    case Kind::Symbol:
      return e;
    case Kind::Sum: {
      std::vector<Expr> kids;
      kids.reserve(e.children().size());
      for (const auto& kid : e.children()) kids.push_back(recurse(kid));
      return Expr::sum(std::move(kids));
    }
    case Kind::Product: {
      std::vector<Expr> kids;
      kids.reserve(e.children().size());
      for (const auto& kid : e.children()) kids.push_back(recurse(kid));
      return Expr::product(std::move(kids));
    }
    case Kind::Pow:
      return Expr::pow(recurse(e.children()[0]), recurse(e.children()[1]));
    case Kind::Exp:
      return Expr::exp(recurse(e.children()[0]));
    case Kind::Ln:
      return Expr::ln(recurse(e.children()[0]));
    case Kind::SpecFun: {
      std::vector<Expr> params;
      params.reserve(e.spec_params().size());
      for (const auto& p : e.spec_params()) params.push_back(recurse(p));
      return Expr::special(e.spec_fn(), std::move(params),
                           recurse(e.children()[0]));
    }
    case Kind::Unknown:
      return Expr::unknown(e.unknown_order(), recurse(e.children()[0]));
  }
  throw ExprError("unhandled node kind in rebuild");
}

}  // namespace

Expr substitute(const Expr& e, int sym_id, const Expr& replacement) {
  if (e.kind() == Kind::Symbol && e.symbol_id() == sym_id) return replacement;
  if (!depends_on(e, sym_id)) return e;
  return rebuild(e, [&](const Expr& kid) {
    return substitute(kid, sym_id, replacement);
  });
}

Expr normalize(const Expr& e) {
  return rebuild(e, [](const Expr& kid) { return normalize(kid); });
}

namespace {

// Multiply two expanded expressions, distributing over sums.
Expr expand_mul(const Expr& a, const Expr& b) {
  auto terms_of = [](const Expr& e) -> std::vector<Expr> {
    if (e.kind() == Kind::Sum) return e.children();
    return {e};
  };
  std::vector<Expr> out;
  for (const auto& ta : terms_of(a))
    for (const auto& tb : terms_of(b)) out.push_back(ta * tb);
  return Expr::sum(std::move(out));
}

}  // namespace

Expr expand(const Expr& e) {
  switch (e.kind()) {
    case Kind::Number:
    case Kind::Symbol:
      return e;
    case Kind::Sum: {
      std::vector<Expr> kids;
      for (const auto& kid : e.children()) kids.push_back(expand(kid));
      return Expr::sum(std::move(kids));
    }
    case Kind::Product: {
      Expr acc = Expr::integer(1);
      for (const auto& kid : e.children()) acc = expand_mul(acc, expand(kid));
      return acc;
    }
    case Kind::Pow: {
      Expr base = expand(e.children()[0]);
      const Expr& expo = e.children()[1];
      if (expo.is_number() && is_integer(expo.number_value())) {
        const auto& num = boost::multiprecision::numerator(expo.number_value());
        if (num >= 2 && num <= 16 && base.kind() == Kind::Sum) {
          long long n = num.convert_to<long long>();
          Expr acc = base;
          for (long long i = 1; i < n; ++i) acc = expand_mul(acc, base);
          return acc;
        }
      }
      return Expr::pow(base, expo);
    }
    default:
      return rebuild(e, [](const Expr& kid) { return expand(kid); });
  }
}

// ---------------------------------------------------------------------------
// queries
// ---------------------------------------------------------------------------

namespace {

void walk_symbols(const Expr& e, std::array<bool, sym::count>& seen) {
  const Node* n = e.node();
  if (n->kind == Kind::Symbol) {
    seen[static_cast<std::size_t>(n->sym)] = true;
    return;
  }
  for (const auto& p : n->params) walk_symbols(p, seen);
  for (const auto& kid : n->kids) walk_symbols(kid, seen);
}

}  // namespace

bool depends_on(const Expr& e, int sym_id) {
  check_symbol_id(sym_id);
  const Node* n = e.node();
  if (n->kind == Kind::Symbol) return n->sym == sym_id;
  for (const auto& p : n->params)
    if (depends_on(p, sym_id)) return true;
  for (const auto& kid : n->kids)
    if (depends_on(kid, sym_id)) return true;
  return false;
}

std::vector<int> free_symbols(const Expr& e) {
  std::array<bool, sym::count> seen{};
  walk_symbols(e, seen);
  std::vector<int> out;
  for (int i = 0; i < sym::count; ++i)
    if (seen[static_cast<std::size_t>(i)]) out.push_back(i);
  return out;
}

int max_jet_order(const Expr& e) {
  int best = -1;
  for (int s : free_symbols(e)) best = std::max(best, jet_order(s));
  return best;
}

// ---------------------------------------------------------------------------
// printing
// ---------------------------------------------------------------------------

namespace {

void print_prefix(const Expr& e, std::ostream& os) {
  switch (e.kind()) {
    case Kind::Number:
      os << e.number_value();
      return;
    case Kind::Symbol:
      os << symbol_name(e.symbol_id());
      return;
    case Kind::Sum:
    case Kind::Product: {
      os << (e.kind() == Kind::Sum ? "(+" : "(*");
      for (const auto& kid : e.children()) {
        os << ' ';
        print_prefix(kid, os);
      }
      os << ')';
      return;
    }
    case Kind::Pow:
      os << "(pow ";
      print_prefix(e.children()[0], os);
      os << ' ';
      print_prefix(e.children()[1], os);
      os << ')';
      return;
    case Kind::Exp:
    case Kind::Ln:
      os << (e.kind() == Kind::Exp ? "(exp " : "(ln ");
      print_prefix(e.children()[0], os);
      os << ')';
      return;
    case Kind::SpecFun: {
      os << '(' << specfn_name(e.spec_fn());
      for (const auto& p : e.spec_params()) {
        os << ' ';
        print_prefix(p, os);
      }
      os << ' ';
      print_prefix(e.children()[0], os);
      os << ')';
      return;
    }
    case Kind::Unknown:
      os << "(w" << std::string(static_cast<std::size_t>(e.unknown_order()), '\'')
         << ' ';
      print_prefix(e.children()[0], os);
      os << ')';
      return;
  }
}

}  // namespace

std::string Expr::to_prefix() const {
  std::ostringstream os;
  print_prefix(*this, os);
  return os.str();
}

}  // namespace bsmsym
