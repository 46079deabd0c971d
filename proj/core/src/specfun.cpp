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

#include "bsmsym/specfun.hpp"

#include <cmath>
#include <limits>

namespace bsmsym::specfun {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kSeriesTol = 1e-16;
constexpr int kMaxTerms = 10000;
constexpr double kKummerAsymSwitch = 30.0;
constexpr double kBesselAsymSwitch = 25.0;

bool near_nonpositive_integer(Complex z, double tol) {
  double re = z.real();
  if (re > 0.5) return false;
  double rounded = std::round(re);
  return std::abs(re - rounded) < tol && std::abs(z.imag()) < tol;
}

bool near_integer(Complex z, double tol) {
  return std::abs(z.real() - std::round(z.real())) < tol &&
         std::abs(z.imag()) < tol;
}

}  // namespace

// ---------------------------------------------------------------------------
// Gamma
// ---------------------------------------------------------------------------

Complex log_gamma(Complex z) {
  // Lanczos, g = 7, 9 coefficients.
  static const double coef[9] = {
      0.99999999999980993,      676.5203681218851,     -1259.1392167224028,
      771.32342877765313,      -176.61502916214059,    12.507343278686905,
      -0.13857109526572012,     9.9843695780195716e-6, 1.5056327351493116e-7};
  if (z.real() < 0.5) {
    // Reflection: log Gamma(z) = log(pi / sin(pi z)) - log Gamma(1 - z).
    return std::log(kPi / std::sin(kPi * z)) - log_gamma(1.0 - z);
  }
  z -= 1.0;
  Complex acc = coef[0];
  for (int i = 1; i < 9; ++i) acc += coef[i] / (z + static_cast<double>(i));
  Complex t = z + 7.5;
  return 0.5 * std::log(2.0 * kPi) + (z + 0.5) * std::log(t) - t + std::log(acc);
}

Complex gamma(Complex z) { return std::exp(log_gamma(z)); }

Complex reciprocal_gamma(Complex z) {
  if (near_nonpositive_integer(z, 1e-12)) return 0.0;
  return std::exp(-log_gamma(z));
}

// ---------------------------------------------------------------------------
// Kummer M
// ---------------------------------------------------------------------------

namespace {

Result kummer_m_series(Complex a, Complex b, Complex z) {
  Result res;
  res.method = Method::Series;
  Complex sum = 1.0, term = 1.0;
  int small_run = 0;
  for (int n = 0; n < kMaxTerms; ++n) {
    term *= (a + static_cast<double>(n)) / (b + static_cast<double>(n)) * z /
            static_cast<double>(n + 1);
    sum += term;
    res.terms = n + 1;
    if (std::abs(term) < kSeriesTol * std::abs(sum)) {
      if (++small_run >= 3) {
        res.value = sum;
        res.error_est = std::abs(term) +
                        std::numeric_limits<double>::epsilon() *
                            std::abs(sum) * std::sqrt(double(res.terms));
        return res;
      }
    } else {
      small_run = 0;
    }
  }
  throw Error(Error::Code::NonConvergence,
              "kummer_m: series did not converge within 10000 terms");
}

// Truncated asymptotic sum  sum_s (c1)_s (c2)_s / s! * w^s, stopped at the
// smallest term; returns the sum and the magnitude of the first omitted term.
Complex asym_sum(Complex c1, Complex c2, Complex w, double& err, int& terms) {
  Complex sum = 1.0, term = 1.0;
  double prev = std::numeric_limits<double>::max();
  err = 0.0;
  for (int s = 0; s < 60; ++s) {
    Complex next = term * (c1 + static_cast<double>(s)) *
                   (c2 + static_cast<double>(s)) * w / static_cast<double>(s + 1);
    double mag = std::abs(next);
    if (mag > prev || mag < kSeriesTol * std::abs(sum)) {
      err = mag;
      terms = s + 1;
      return sum;
    }
    sum += next;
    term = next;
    prev = mag;
  }
  err = std::abs(term);
  terms = 60;
  return sum;
}

Result kummer_m_asymptotic(Complex a, Complex b, Complex z) {
  // DLMF 13.7.1-13.7.2: two contributions, exponential and algebraic.
  Result res;
  res.method = Method::Asymptotic;
  double e1, e2;
  int t1 = 0, t2 = 0;
  Complex s1 = asym_sum(b - a, 1.0 - a, 1.0 / z, e1, t1);
  Complex s2 = asym_sum(a, a - b + 1.0, -1.0 / z, e2, t2);
  Complex gb = gamma(b);
  Complex expo = std::exp(z + (a - b) * std::log(z)) * reciprocal_gamma(a);
  // Upper sign of e^{+-i pi a} for ph z in (-pi/2, 3pi/2].
  double sgn = (std::arg(z) > -kPi / 2.0) ? 1.0 : -1.0;
  Complex alg = std::exp(Complex(0.0, sgn * kPi) * a - a * std::log(z)) *
                reciprocal_gamma(b - a);
  res.value = gb * (expo * s1 + alg * s2);
  res.error_est =
      std::abs(gb) * (std::abs(expo) * e1 + std::abs(alg) * e2) +
      std::numeric_limits<double>::epsilon() * std::abs(res.value) * 8;
  res.terms = t1 + t2;
  return res;
}

}  // namespace

Result kummer_m(Complex a, Complex b, Complex z) {
  if (near_nonpositive_integer(b, 1e-10))
    throw Error(Error::Code::UnsupportedParameter,
                "kummer_m: b is (near) a non-positive integer");
  if (std::abs(z) == 0.0) return {Complex(1.0), 0.0, 0, Method::Exact};
  if (near_nonpositive_integer(a, 1e-12)) {
    // Terminating polynomial; the series is exact.
    return kummer_m_series(a, b, z);
  }
  if (z.real() < 0.0) {
    // Kummer transform keeps the series terms from cancelling.
    Result inner = near_nonpositive_integer(b - a, 1e-12) ||
                           std::abs(z) <= kKummerAsymSwitch
                       ? kummer_m_series(b - a, b, -z)
                       : kummer_m_asymptotic(b - a, b, -z);
    Complex f = std::exp(z);
    inner.value *= f;
    inner.error_est *= std::abs(f);
    return inner;
  }
  if (std::abs(z) > kKummerAsymSwitch) return kummer_m_asymptotic(a, b, z);
  return kummer_m_series(a, b, z);
}

// ---------------------------------------------------------------------------
// Kummer U
// ---------------------------------------------------------------------------

Result kummer_u(Complex a, Complex b, Complex z) {
  if (std::abs(z) == 0.0)
    throw Error(Error::Code::Pole, "kummer_u: z = 0 pole");
  if (std::abs(a) < 1e-14) return {Complex(1.0), 0.0, 0, Method::Exact};
  if (std::abs(z) > kKummerAsymSwitch) {
    // U(a,b,z) ~ z^{-a} 2F0(a, a-b+1; -1/z)
    Result res;
    res.method = Method::Asymptotic;
    double err;
    int terms = 0;
    Complex s = asym_sum(a, a - b + 1.0, -1.0 / z, err, terms);
    Complex front = std::exp(-a * std::log(z));
    res.value = front * s;
    res.error_est = std::abs(front) * err +
                    std::numeric_limits<double>::epsilon() * std::abs(res.value) * 8;
    res.terms = terms;
    return res;
  }
  if (near_integer(b, 1e-10))
    throw Error(Error::Code::UnsupportedParameter,
                "kummer_u: integer b not supported by the connection formula");
  // U = Gamma(1-b)/Gamma(a-b+1) M(a,b,z) + Gamma(b-1)/Gamma(a) z^{1-b} M(a-b+1,2-b,z)
  Result m1 = kummer_m(a, b, z);
  Result m2 = kummer_m(a - b + 1.0, 2.0 - b, z);
  Complex c1 = gamma(1.0 - b) * reciprocal_gamma(a - b + 1.0);
  Complex c2 = gamma(b - 1.0) * reciprocal_gamma(a) *
               std::exp((1.0 - b) * std::log(z));
  Result res;
  res.method = Method::Connection;
  Complex t1 = c1 * m1.value;
  Complex t2 = c2 * m2.value;
  res.value = t1 + t2;
  double cancel = std::max(std::abs(t1), std::abs(t2));
  res.error_est = std::abs(c1) * m1.error_est + std::abs(c2) * m2.error_est +
                  std::numeric_limits<double>::epsilon() * cancel * 8;
  res.terms = m1.terms + m2.terms;
  return res;
}

// ---------------------------------------------------------------------------
// Whittaker M and W
// ---------------------------------------------------------------------------

namespace {

Result whittaker_common(Complex kappa, Complex nu, Complex z, bool second_kind) {
  Complex A = nu - kappa + 0.5;
  Complex B = 1.0 + 2.0 * nu;
  if (!second_kind && near_nonpositive_integer(B, 1e-10))
    throw Error(Error::Code::UnsupportedParameter,
                "whittaker_m: 1 + 2 nu is (near) a non-positive integer");
  Result inner = second_kind ? kummer_u(A, B, z) : kummer_m(A, B, z);
  Complex front = std::exp(-0.5 * z + (nu + 0.5) * std::log(z));
  Result res = inner;
  res.value = front * inner.value;
  res.error_est = std::abs(front) * inner.error_est +
                  std::numeric_limits<double>::epsilon() * std::abs(res.value) * 4;
  return res;
}

}  // namespace

Result whittaker_m(Complex kappa, Complex nu, Complex z) {
  return whittaker_common(kappa, nu, z, false);
}

Result whittaker_w(Complex kappa, Complex nu, Complex z) {
  return whittaker_common(kappa, nu, z, true);
}

// ---------------------------------------------------------------------------
// Bessel J and Y
// ---------------------------------------------------------------------------

namespace {

Result bessel_j_series(Complex n, Complex z) {
  Result res;
  res.method = Method::Series;
  Complex zh = 0.5 * z;
  Complex front = std::exp(n * std::log(zh) - log_gamma(n + 1.0));
  Complex q = -zh * zh;
  Complex sum = 1.0, term = 1.0;
  int small_run = 0;
  for (int kk = 0; kk < kMaxTerms; ++kk) {
    term *= q / (static_cast<double>(kk + 1) * (n + static_cast<double>(kk + 1)));
    sum += term;
    res.terms = kk + 1;
    if (std::abs(term) < kSeriesTol * std::abs(sum)) {
      if (++small_run >= 3) break;
    } else {
      small_run = 0;
    }
    if (kk == kMaxTerms - 1)
      throw Error(Error::Code::NonConvergence, "bessel_j: series stalled");
  }
  res.value = front * sum;
  res.error_est = std::abs(front) *
                      (std::abs(term) + std::numeric_limits<double>::epsilon() *
                                            std::abs(sum) * std::sqrt(double(res.terms))) +
                  std::numeric_limits<double>::epsilon() * std::abs(res.value) * 4;
  return res;
}

// Hankel asymptotic moduli P, Q (DLMF 10.17.3); valid |z| large.
void bessel_pq(Complex n, Complex z, Complex& P, Complex& Q, double& err, int& used) {
  Complex mu = 4.0 * n * n;
  Complex term = 1.0;
  P = 1.0;
  Q = 0.0;
  err = 0.0;
  used = 0;
  double prev = std::numeric_limits<double>::max();
  for (int kk = 1; kk <= 30; ++kk) {
    double d = 2.0 * kk - 1.0;
    term *= (mu - d * d) / (static_cast<double>(kk) * 8.0 * z);
    double mag = std::abs(term);
    if (mag > prev) {
      err = mag;
      break;
    }
    prev = mag;
    used = kk;
    // P = t0 - t2 + t4 - ..., Q = t1 - t3 + t5 - ... with t_k = a_k/z^k.
    double phase = (kk % 4 == 0 || kk % 4 == 1) ? 1.0 : -1.0;
    if (kk % 2 == 1)
      Q += phase * term;
    else
      P += phase * term;
    err = mag;
  }
}

Result bessel_j_asymptotic(Complex n, Complex z, bool second_kind) {
  Complex P, Q;
  double err;
  int used;
  bessel_pq(n, z, P, Q, err, used);
  Complex omega = z - (0.5 * n + 0.25) * kPi;
  Complex amp = std::sqrt(2.0 / (kPi * z));
  Result res;
  res.method = Method::Asymptotic;
  if (!second_kind)
    res.value = amp * (std::cos(omega) * P - std::sin(omega) * Q);
  else
    res.value = amp * (std::sin(omega) * P + std::cos(omega) * Q);
  double osc = std::max(std::abs(std::cos(omega)), std::abs(std::sin(omega)));
  res.error_est = std::abs(amp) * osc * err +
                  std::numeric_limits<double>::epsilon() * std::abs(res.value) * 8;
  res.terms = used;
  return res;
}

}  // namespace

Result bessel_j(Complex n, Complex z) {
  if (std::abs(z) == 0.0) {
    if (std::abs(n) < 1e-14) return {Complex(1.0), 0.0, 0, Method::Exact};
    if (n.real() > 0.0) return {Complex(0.0), 0.0, 0, Method::Exact};
    throw Error(Error::Code::Pole, "bessel_j: z = 0 with Re(n) < 0");
  }
  if (std::abs(z) > kBesselAsymSwitch) return bessel_j_asymptotic(n, z, false);
  return bessel_j_series(n, z);
}

Result bessel_y(Complex n, Complex z) {
  if (near_integer(n, 1e-8))
    throw Error(Error::Code::UnsupportedParameter,
                "bessel_y: order too close to an integer; perturb the order");
  if (std::abs(z) == 0.0) throw Error(Error::Code::Pole, "bessel_y: z = 0 pole");
  if (std::abs(z) > kBesselAsymSwitch) return bessel_j_asymptotic(n, z, true);
  Result jp = bessel_j(n, z);
  Result jm = bessel_j(-n, z);
  Complex cn = std::cos(kPi * n), sn = std::sin(kPi * n);
  Result res;
  res.method = Method::Connection;
  res.value = (jp.value * cn - jm.value) / sn;
  res.error_est = (jp.error_est * std::abs(cn) + jm.error_est) / std::abs(sn) +
                  std::numeric_limits<double>::epsilon() *
                      (std::abs(jp.value * cn) + std::abs(jm.value)) /
                      std::abs(sn) * 4;
  res.terms = jp.terms + jm.terms;
  return res;
}

}  // namespace bsmsym::specfun
