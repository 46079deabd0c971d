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

#ifndef BSMSYM_FD_HPP
#define BSMSYM_FD_HPP

#include <functional>
#include <string>
#include <vector>

#include "bsmsym/solutions.hpp"

namespace bsmsym {

class FDError : public std::runtime_error {
 public:
  explicit FDError(const std::string& what) : std::runtime_error(what) {}
};

/// Terminal-value problem on [x0,x1] x [y0,y1] x [t0,t1]: data given at t1,
/// marched backward to t0.  Second-order central differences; the mixed
/// derivative is always treated explicitly.  ADI is a Douglas splitting with
/// a Craig-Sneyd corrector (second order in time); Explicit is forward Euler
/// in backward time, subject to the stability bound below.
struct GridSpec {
  double x0 = 0.5, x1 = 2.0;
  double y0 = 0.2, y1 = 1.5;
  double t0 = 0.1, t1 = 1.0;
  int nx = 21, ny = 21, nt = 40;
  enum class Scheme { Explicit, ADI } scheme = Scheme::ADI;
  /// Test hook: degrade the u_x stencil to first order (one-sided); used by
  /// the convergence harness mutation test.
  bool first_order_x_stencil = false;

  double hx() const { return (x1 - x0) / (nx - 1); }
  double hy() const { return (y1 - y0) / (ny - 1); }
  double dt() const { return (t1 - t0) / nt; }
  double x(int i) const { return x0 + i * hx(); }
  double y(int j) const { return y0 + j * hy(); }

  /// nx, ny, nt >= 3; for the explicit scheme, enforces
  ///   dt * max(2 a11/hx^2 + 2 a22/hy^2 + |a12|/(hx hy)
  ///            + |b1|/hx + |b2|/hy + r) <= 1
  /// over the grid (a11 = f^2 x^2/2, a22 = beta^2/2, a12 = rho beta x f,
  /// b1 = r x, b2 = the u_y drift).
  void validate(const ModelParams& params) const;
  /// Smallest nt satisfying the explicit stability bound.
  int stable_nt(const ModelParams& params) const;
};

using SpaceTimeFn = std::function<double(double t, double x, double y)>;

struct FDSolution {
  GridSpec grid;
  ModelParams params;
  std::string manufactured_case;     // empty when data was user-supplied
  std::vector<double> values;        // level t = t0, row-major [j*nx + i]
  std::vector<double> terminal;      // level t = t1

  double at(int i, int j) const { return values[static_cast<std::size_t>(j) * grid.nx + i]; }
};

/// Marches the terminal data backward with Dirichlet boundary data on all
/// four spatial sides.  Aborts with FDError if any value exceeds 1e12.
FDSolution solve(const ModelParams& params, const GridSpec& grid,
                 const SpaceTimeFn& terminal, const SpaceTimeFn& boundary);

/// Terminal and boundary data taken from a catalog solution (real part).
FDSolution solve_manufactured(const ModelParams& params, const GridSpec& grid,
                              const BuiltSolution& manufactured);

/// Max-norm error against a reference at the final (t = t0) level, interior
/// nodes only.
double max_error(const FDSolution& sol, const SpaceTimeFn& exact);

struct ConvergenceLevel {
  int nx = 0, ny = 0, nt = 0;
  double error = 0.0;
};

struct ConvergenceReport {
  std::string case_id;
  GridSpec::Scheme scheme{};
  std::vector<ConvergenceLevel> levels;
  std::vector<double> observed_orders;  // empty when errors are not monotone
  bool monotone = false;
  bool exact = false;  // errors at rounding level; no order claim
};

/// Errors against the manufactured solution on a refinement ladder; each
/// level halves h in both spatial directions with dt ~ h^2 (explicit) or
/// dt ~ h (ADI).  Observed order = log2(e_coarse / e_fine) per step.
ConvergenceReport convergence_order(const std::string& case_id,
                                    const std::vector<GridSpec>& ladder);

/// The standard ladder used by reports: `levels` grids starting from
/// base_n points per direction inside the case's box.
std::vector<GridSpec> standard_ladder(const SolutionCase& c, int levels,
                                      int base_n, GridSpec::Scheme scheme,
                                      const ModelParams& params,
                                      bool first_order_mutation = false);

}  // namespace bsmsym

#endif  // BSMSYM_FD_HPP
