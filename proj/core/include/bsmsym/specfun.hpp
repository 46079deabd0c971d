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

#ifndef BSMSYM_SPECFUN_HPP
#define BSMSYM_SPECFUN_HPP

#include <complex>
#include <stdexcept>
#include <string>

namespace bsmsym::specfun {

using Complex = std::complex<double>;

enum class Method { Series, Asymptotic, Connection, Exact };

struct Result {
  Complex value;
  double error_est = 0.0;  // estimated absolute error, always finite
  int terms = 0;           // series terms / iterations used
  Method method = Method::Series;
};

/// Unsupported parameters (integer degeneracies), poles, or series that do
/// not converge within the iteration budget.
class Error : public std::runtime_error {
 public:
  enum class Code { UnsupportedParameter, Pole, NonConvergence };
  Error(Code c, const std::string& what) : std::runtime_error(what), code(c) {}
  Code code;
};

/// Principal-branch log-gamma (Lanczos approximation, ~1e-13 relative).
Complex log_gamma(Complex z);
Complex gamma(Complex z);
/// 1/Gamma(z); exactly zero at non-positive integers (within 1e-12).
Complex reciprocal_gamma(Complex z);

/// Kummer confluent hypergeometric M(a,b,z) = 1F1(a;b;z).
/// Power series with term-ratio stopping for |z| <= 30, large-z asymptotic
/// connection beyond.  b must not be a non-positive integer (tol 1e-10).
Result kummer_m(Complex a, Complex b, Complex z);

/// Kummer U(a,b,z) via the two-M connection formula (b non-integer) for
/// moderate z, large-z asymptotic expansion for |z| > 30.
Result kummer_u(Complex a, Complex b, Complex z);

/// Whittaker M_{kappa,nu}(z) = e^{-z/2} z^{nu+1/2} M(nu-kappa+1/2, 1+2nu, z).
Result whittaker_m(Complex kappa, Complex nu, Complex z);
/// Whittaker W_{kappa,nu}(z) via the U representation.
Result whittaker_w(Complex kappa, Complex nu, Complex z);

/// Bessel J_n(z): ascending series for |z| <= 25, Hankel asymptotic beyond.
Result bessel_j(Complex n, Complex z);
/// Bessel Y_n(z) via (J_n cos n pi - J_{-n}) / sin n pi; n must be at least
/// 1e-8 away from an integer.
Result bessel_y(Complex n, Complex z);

}  // namespace bsmsym::specfun

#endif  // BSMSYM_SPECFUN_HPP
