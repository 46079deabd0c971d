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

#ifndef BSMSYM_ZEROTEST_HPP
#define BSMSYM_ZEROTEST_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <utility>

#include "bsmsym/eval.hpp"
#include "bsmsym/expr.hpp"

namespace bsmsym {

/// Real sampling intervals per symbol.  Symbols without an explicit range
/// fall back to `fallback` when sampling.
struct SampleBox {
  std::map<int, std::pair<double, double>> ranges;
  std::pair<double, double> fallback{-2.0, 2.0};

  SampleBox& set(int sym_id, double lo, double hi) {
    ranges[sym_id] = {lo, hi};
    return *this;
  }
  std::pair<double, double> range(int sym_id) const {
    auto it = ranges.find(sym_id);
    return it == ranges.end() ? fallback : it->second;
  }
};

/// All sampled points hit singularities; the test is inconclusive, never a
/// silent pass.
class InconclusiveError : public std::runtime_error {
 public:
  explicit InconclusiveError(const std::string& what)
      : std::runtime_error(what) {}
};

struct ZeroTestReport {
  bool is_zero = false;
  int trials = 0;
  int singular_skips = 0;
  double max_rel_residual = 0.0;  // max |e| / scale over sampled points
  std::uint64_t seed = 0;
  double tolerance = 0.0;
  /// Witness point and residual for a nonzero verdict.
  std::optional<std::map<int, double>> witness;
  double witness_residual = 0.0;
};

/// Probabilistic identity test: samples every free symbol of `e` that is not
/// bound by `fixed` uniformly from `box`, evaluates, and reports zero iff
/// |e| < tol * (1 + magnitude of the largest additive subterm) at every
/// sampled point.  Deterministic for a fixed seed.  Points hitting
/// singularities are resampled; if every attempt is singular an
/// InconclusiveError is thrown.
ZeroTestReport is_probably_zero(const Expr& e, const SampleBox& box, int trials,
                                std::uint64_t seed, double tol = 1e-9,
                                const Bindings* fixed = nullptr);

}  // namespace bsmsym

#endif  // BSMSYM_ZEROTEST_HPP
