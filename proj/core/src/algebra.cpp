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

#include "bsmsym/algebra.hpp"

#include <random>
#include <sstream>

namespace bsmsym {

namespace {

Expr S(int id) { return Expr::symbol(id); }
Expr I(long long v) { return Expr::integer(v); }
Expr Q(long long n, long long d) { return Expr::rational(n, d); }

const Expr kZero{};

}  // namespace

std::string_view case_name(CaseTag tag) {
  switch (tag) {
    case CaseTag::ConstVol: return "const";
    case CaseTag::HypGNonzero: return "hyp-g";
    case CaseTag::HypGZero: return "hyp-g0";
  }
  return "?";
}

CaseTag case_from_name(std::string_view name) {
  if (name == "const") return CaseTag::ConstVol;
  if (name == "hyp-g") return CaseTag::HypGNonzero;
  if (name == "hyp-g0") return CaseTag::HypGZero;
  throw ExprError("unknown case '" + std::string(name) +
                  "' (expected const, hyp-g or hyp-g0)");
}

VolCase case_vol(CaseTag tag) {
  return tag == CaseTag::ConstVol ? VolCase::Const : VolCase::Hyperbolic;
}

ModelParams case_params(CaseTag tag) {
  if (tag == CaseTag::HypGZero) return ModelParams::defaults_g_zero();
  return ModelParams::defaults(case_vol(tag));
}

GeneratorCatalog generator_catalog(CaseTag tag) {
  GeneratorCatalog cat;
  cat.tag = tag;
  const Expr t = S(sym::t), x = S(sym::x), y = S(sym::y), u = S(sym::u);
  const Expr al = S(sym::alpha), be = S(sym::beta), rh = S(sym::rho);
  const Expr r = S(sym::r), mm = S(sym::m), muv = S(sym::mu);

  cat.fields.emplace_back(I(1), kZero, kZero, kZero, "X1");
  cat.fields.emplace_back(kZero, x, kZero, kZero, "X2");
  cat.fields.emplace_back(kZero, kZero, kZero, u, "X3");

  if (tag == CaseTag::ConstVol) {
    const Expr f = S(sym::f0);
    cat.fields.emplace_back(kZero, kZero, Expr::exp(-al * t), kZero, "X4");
    cat.fields.emplace_back(
        kZero, f * f * (rh * rh + al * t) * x, f * rh * be,
        Q(1, 2) * al * (t * (f * f - I(2) * r) + I(2) * Expr::ln(x)) * u, "X5");
    Expr eat = Expr::exp(al * t);
    cat.fields.emplace_back(
        kZero, I(2) * be * f * f * rh * eat * x, be * be * f * eat,
        I(-2) * eat * (al * f * (mm - y) + be * rh * (r - muv)) * u, "X6");
    return cat;
  }

  const Expr gg = S(sym::g), kk = S(sym::k);
  if (tag == CaseTag::HypGNonzero) {
    Expr em = Expr::exp(-gg * t);
    Expr ep = Expr::exp(gg * t);
    cat.fields.emplace_back(em, em * r * x, Q(-1, 2) * em * gg * (y - mm),
                            em * u * r, "X4");
    cat.fields.emplace_back(
        ep, ep * Expr::quotient(x, be) * (rh * gg * kk + be * r),
        Q(1, 2) * ep * gg * (y - mm),
        ep * Expr::quotient(u, I(2) * be * be) *
            (gg * gg * Expr::pow(y - mm, I(2)) +
             be * be * (I(2) * r - gg)),
        "X5");
    cat.combination =
        scale(I(2) * gg, cat.fields[0]) +
        scale(Expr::quotient(gg * gg * rh * kk, be) + I(2) * r, cat.fields[1]) +
        scale(Q(-1, 2) * gg * (gg - I(4) * r), cat.fields[2]);
    cat.combination->name = "X";
    return cat;
  }

  // HypGZero
  cat.fields.emplace_back(
      t, Expr::quotient(rh * kk + I(2) * be * r * t, I(2) * be) * x,
      Q(1, 2) * (y - mm), r * t * u, "X4");
  cat.fields.emplace_back(
      t * t, Expr::quotient(x * t, be) * (rh * kk + be * r * t),
      t * (y - mm),
      Expr::quotient(u, I(2) * be * be) *
          (Expr::pow(y - mm, I(2)) +
           be * be * (I(2) * r * t * t - t)),
      "X5");
  return cat;
}

VectorField commutator(const VectorField& A, const VectorField& B) {
  auto apply = [](const VectorField& X, const Expr& f) {
    return X.xi_t * differentiate(f, sym::t) +
           X.xi_x * differentiate(f, sym::x) +
           X.xi_y * differentiate(f, sym::y) +
           X.eta * differentiate(f, sym::u);
  };
  auto comp = [&](const Expr& fa, const Expr& fb) {
    return apply(A, fb) - apply(B, fa);
  };
  return {comp(A.xi_t, B.xi_t), comp(A.xi_x, B.xi_x), comp(A.xi_y, B.xi_y),
          comp(A.eta, B.eta), "[" + A.name + "," + B.name + "]"};
}

// ---------------------------------------------------------------------------
// Expected tables
// ---------------------------------------------------------------------------

namespace {

struct Combination {
  // coefficient and 1-based generator index; index 0 names the special
  // combination X of the g != 0 table.
  std::vector<std::pair<Expr, int>> parts;
  std::string rendered;
};

Combination expected_bracket(CaseTag tag, int i, int j) {
  const Expr al = S(sym::alpha), f = S(sym::f0), r = S(sym::r), gg = S(sym::g);
  Combination c;
  auto set = [&](std::vector<std::pair<Expr, int>> parts, std::string txt) {
    c.parts = std::move(parts);
    c.rendered = std::move(txt);
  };
  set({}, "0");
  if (tag == CaseTag::ConstVol) {
    if (i == 1 && j == 4) set({{-al, 4}}, "-alpha X4");
    if (i == 1 && j == 5)
      set({{f * f * al, 2}, {al * (Q(1, 2) * f * f - r), 3}},
          "f0^2 alpha X2 + alpha (1/2 f0^2 - r) X3");
    if (i == 1 && j == 6) set({{al, 6}}, "alpha X6");
    if (i == 2 && j == 5) set({{al, 3}}, "alpha X3");
    if (i == 4 && j == 6) set({{I(2) * al * f, 3}}, "2 alpha f0 X3");
  } else if (tag == CaseTag::HypGNonzero) {
    if (i == 1 && j == 4) set({{-gg, 4}}, "-g X4");
    if (i == 1 && j == 5) set({{gg, 5}}, "g X5");
    if (i == 4 && j == 5) set({{I(1), 0}}, "X");
  } else {
    if (i == 1 && j == 4)
      set({{I(1), 1}, {r, 2}, {r, 3}}, "X1 + r X2 + r X3");
    if (i == 1 && j == 5) set({{Q(-1, 2), 3}, {I(2), 4}}, "-1/2 X3 + 2 X4");
    if (i == 4 && j == 5) set({{I(1), 5}}, "X5");
  }
  return c;
}

VectorField build_combination(const GeneratorCatalog& cat,
                              const Combination& c) {
  VectorField acc(kZero, kZero, kZero, kZero, "expected");
  for (const auto& [coeff, idx] : c.parts) {
    const VectorField& base =
        idx == 0 ? *cat.combination : cat.fields[static_cast<std::size_t>(idx - 1)];
    acc = acc + scale(coeff, base);
  }
  acc.name = c.rendered;
  return acc;
}

ModelParams random_params(CaseTag tag, std::mt19937_64& rng) {
  auto draw = [&](double lo, double hi) {
    return lo + (hi - lo) * std::uniform_real_distribution<double>(0.0, 1.0)(rng);
  };
  ModelParams p = case_params(tag);
  p.r = draw(0.01, 0.2);
  p.rho = draw(-0.8, 0.8);
  p.m = draw(-0.5, 0.5);
  p.mu = draw(0.0, 0.3);
  p.alpha = draw(0.2, 2.0);
  p.beta = draw(0.1, 1.0);
  p.f0 = draw(0.2, 1.5);
  p.k = draw(0.3, 1.5);
  if (tag == CaseTag::HypGZero)
    p.alpha = -p.rho * p.beta * (p.mu - p.r) / p.k;
  return p;
}

}  // namespace

BracketTableReport verify_bracket_table(CaseTag tag, int extra_draws,
                                        std::uint64_t seed) {
  GeneratorCatalog cat = generator_catalog(tag);
  const int n = static_cast<int>(cat.fields.size());

  BracketTableReport rep;
  rep.tag = tag;
  rep.draws = extra_draws;
  rep.seed = seed;
  rep.all_pass = true;

  std::mt19937_64 rng(seed);
  std::vector<ModelParams> draws{case_params(tag)};
  for (int d = 0; d < extra_draws; ++d) draws.push_back(random_params(tag, rng));

  for (int i = 1; i <= n; ++i) {
    for (int j = i + 1; j <= n; ++j) {
      BracketCell cell;
      cell.i = i;
      cell.j = j;
      Combination expected = expected_bracket(tag, i, j);
      cell.expected = expected.rendered;

      VectorField bracket =
          commutator(cat.fields[static_cast<std::size_t>(i - 1)],
                     cat.fields[static_cast<std::size_t>(j - 1)]);
      VectorField diff = bracket - build_combination(cat, expected);
      cell.symbolic_exact = is_zero_field(diff);

      cell.numeric_pass = true;
      SampleBox box;
      box.set(sym::t, 0.1, 1.0).set(sym::x, 0.5, 2.0).set(sym::u, -2.0, 2.0);
      for (const Expr* comp : {&diff.xi_t, &diff.xi_x, &diff.xi_y, &diff.eta}) {
        if (comp->is_zero()) continue;
        for (const auto& params : draws) {
          Bindings binds = parameter_bindings(params);
          SampleBox b = box;
          b.set(sym::y, params.m + 0.2, params.m + 1.5);
          ZeroTestReport z =
              is_probably_zero(*comp, b, 40, seed + 1000 * i + j, 1e-9, &binds);
          cell.max_rel_residual =
              std::max(cell.max_rel_residual, z.max_rel_residual);
          if (!z.is_zero) cell.numeric_pass = false;
        }
      }
      if (!cell.symbolic_exact || !cell.numeric_pass) {
        rep.all_pass = false;
        std::ostringstream os;
        os << "xi_t=" << bracket.xi_t.to_prefix()
           << " xi_x=" << bracket.xi_x.to_prefix()
           << " xi_y=" << bracket.xi_y.to_prefix()
           << " eta=" << bracket.eta.to_prefix();
        cell.computed = os.str();
      }
      rep.cells.push_back(std::move(cell));
    }
  }
  return rep;
}

JacobiReport jacobi_check(CaseTag tag, int count, std::uint64_t seed) {
  GeneratorCatalog cat = generator_catalog(tag);
  const int n = static_cast<int>(cat.fields.size());
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> pick(0, n - 1);

  JacobiReport rep;
  rep.triples = count;
  rep.seed = seed;
  rep.pass = true;

  ModelParams params = case_params(tag);
  Bindings binds = parameter_bindings(params);
  SampleBox box = default_box(params);
  box.set(sym::u, -2.0, 2.0);

  for (int c = 0; c < count; ++c) {
    const VectorField& A = cat.fields[static_cast<std::size_t>(pick(rng))];
    const VectorField& B = cat.fields[static_cast<std::size_t>(pick(rng))];
    const VectorField& Cf = cat.fields[static_cast<std::size_t>(pick(rng))];
    VectorField s = commutator(commutator(A, B), Cf) +
                    commutator(commutator(B, Cf), A) +
                    commutator(commutator(Cf, A), B);
    for (const Expr* comp : {&s.xi_t, &s.xi_x, &s.xi_y, &s.eta}) {
      if (comp->is_zero()) continue;
      ZeroTestReport z =
          is_probably_zero(*comp, box, 25, seed + static_cast<std::uint64_t>(c),
                           1e-9, &binds);
      rep.max_rel_residual = std::max(rep.max_rel_residual, z.max_rel_residual);
      if (!z.is_zero) rep.pass = false;
    }
  }
  return rep;
}

std::string render_table_text(const BracketTableReport& rep) {
  int n = 0;
  for (const auto& c : rep.cells) n = std::max(n, c.j);
  std::ostringstream os;
  os << "bracket table, case " << case_name(rep.tag) << "\n";
  os << "[Xi,Xj]";
  for (int j = 1; j <= n; ++j) os << "\tX" << j;
  os << "\n";
  auto find = [&](int i, int j) -> const BracketCell* {
    for (const auto& c : rep.cells)
      if (c.i == i && c.j == j) return &c;
    return nullptr;
  };
  for (int i = 1; i <= n; ++i) {
    os << "X" << i;
    for (int j = 1; j <= n; ++j) {
      os << '\t';
      if (i == j) {
        os << "0";
      } else if (i < j) {
        const BracketCell* c = find(i, j);
        os << (c ? c->expected : "?");
        if (c && !(c->symbolic_exact && c->numeric_pass)) os << " [FAIL]";
      } else {
        const BracketCell* c = find(j, i);
        if (c && c->expected == "0")
          os << "0";
        else
          os << "-(" << (c ? c->expected : "?") << ")";
      }
    }
    os << "\n";
  }
  return os.str();
}

}  // namespace bsmsym
