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

#include "bsmsym/zerotest.hpp"

#include <cmath>
#include <random>
#include <vector>

namespace bsmsym {

ZeroTestReport is_probably_zero(const Expr& e, const SampleBox& box, int trials,
                                std::uint64_t seed, double tol,
                                const Bindings* fixed) {
  if (trials < 1) throw ExprError("is_probably_zero: trials must be >= 1");

  std::vector<int> sampled;
  for (int s : free_symbols(e))
    if (!fixed || !fixed->bound(s)) sampled.push_back(s);

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  ZeroTestReport rep;
  rep.seed = seed;
  rep.tolerance = tol;

  const int max_attempts = trials * 10 + 10;
  int attempts = 0;
  while (rep.trials < trials && attempts < max_attempts) {
    ++attempts;
    Bindings binds = fixed ? *fixed : Bindings{};
    std::map<int, double> point;
    for (int s : sampled) {
      auto [lo, hi] = box.range(s);
      double v = lo + (hi - lo) * unit(rng);
      point[s] = v;
      binds.set(s, v);
    }
    Complex value;
    double scale = 1.0;
    try {
      value = eval_numeric(e, binds);
      // Scale by the largest additive subterm so the tolerance is relative
      // to what the sum actually cancels.
      if (e.kind() == Kind::Sum) {
        double biggest = 0.0;
        for (const auto& term : e.children())
          biggest = std::max(biggest, std::abs(eval_numeric(term, binds)));
        scale += biggest;
      } else {
        scale += std::abs(value);
      }
    } catch (const EvalError& err) {
      if (err.code == EvalError::Code::UnboundSymbol ||
          err.code == EvalError::Code::UnboundUnknown)
        throw;
      ++rep.singular_skips;
      continue;
    }
    if (!std::isfinite(value.real()) || !std::isfinite(value.imag()) ||
        !std::isfinite(scale)) {
      ++rep.singular_skips;
      continue;
    }
    ++rep.trials;
    double rel = std::abs(value) / scale;
    rep.max_rel_residual = std::max(rep.max_rel_residual, rel);
    if (rel >= tol && !rep.witness) {
      rep.witness = point;
      rep.witness_residual = std::abs(value);
    }
  }
  if (rep.trials == 0)
    throw InconclusiveError(
        "is_probably_zero: every sampled point hit a singularity");
  if (rep.trials < trials && !rep.witness)
    throw InconclusiveError(
        "is_probably_zero: only " + std::to_string(rep.trials) + " of " +
        std::to_string(trials) + " trials evaluated cleanly");
  rep.is_zero = !rep.witness.has_value();
  return rep;
}

}  // namespace bsmsym
