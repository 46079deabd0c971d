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

#ifndef BSMSYM_ALGEBRA_HPP
#define BSMSYM_ALGEBRA_HPP

#include <optional>
#include <string>
#include <vector>

#include "bsmsym/prolong.hpp"

namespace bsmsym {

enum class CaseTag { ConstVol, HypGNonzero, HypGZero };

std::string_view case_name(CaseTag tag);            // const | hyp-g | hyp-g0
CaseTag case_from_name(std::string_view name);      // throws on unknown
VolCase case_vol(CaseTag tag);
/// Default parameters matching the case (alpha tuned for HypGZero).
ModelParams case_params(CaseTag tag);

/// The generators admitted by the equation in each volatility case
/// (six for constant volatility, five for each hyperbolic case), with
/// exact symbolic parameter coefficients.
struct GeneratorCatalog {
  CaseTag tag;
  std::vector<VectorField> fields;  // X1..Xn in order
  /// The combination X = 2g X1 + (g^2 rho k/beta + 2r) X2 - (1/2)g(g-4r) X3
  /// appearing in the g != 0 bracket table.
  std::optional<VectorField> combination;
};

GeneratorCatalog generator_catalog(CaseTag tag);

/// Lie bracket [A, B] applied component-wise to the coefficient functions.
VectorField commutator(const VectorField& A, const VectorField& B);

struct BracketCell {
  int i = 0, j = 0;          // 1-based generator indices, i < j
  std::string expected;      // rendered linear combination ("0" when zero)
  bool symbolic_exact = false;
  bool numeric_pass = false;
  double max_rel_residual = 0.0;
  std::string computed;      // serialized bracket, filled on failure
};

struct BracketTableReport {
  CaseTag tag{};
  bool all_pass = false;
  int draws = 0;
  std::uint64_t seed = 0;
  std::vector<BracketCell> cells;
};

/// Verifies every cell of the case's bracket table, exactly at the
/// symbolic-coefficient level and numerically at `extra_draws` random
/// parameter draws.
BracketTableReport verify_bracket_table(CaseTag tag, int extra_draws = 5,
                                        std::uint64_t seed = 42);

/// Jacobi identity on `count` random triples; exact and sampled.
struct JacobiReport {
  bool pass = false;
  int triples = 0;
  std::uint64_t seed = 0;
  double max_rel_residual = 0.0;
};
JacobiReport jacobi_check(CaseTag tag, int count = 20, std::uint64_t seed = 42);

/// Text rendering of the expected table in the row/column layout used for
/// reporting.
std::string render_table_text(const BracketTableReport& report);

}  // namespace bsmsym

#endif  // BSMSYM_ALGEBRA_HPP
