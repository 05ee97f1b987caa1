// Copyright 2026 the gpsamp authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef GPSAMP_DETAIL_SPECFUN_HPP
#define GPSAMP_DETAIL_SPECFUN_HPP

#include <cmath>
#include <limits>

#include "gpsamp/errors.hpp"

namespace gpsamp::detail {

inline double norm_cdf(double z) { return 0.5 * std::erfc(-z * M_SQRT1_2); }

inline double norm_pdf(double z) {
  return std::exp(-0.5 * z * z) * 0.3989422804014326779399461;
}

// Wichura's AS241 (PPND16): inverse standard normal CDF, ~1e-15 accurate.
inline double norm_ppf(double p) {
  if (!(p > 0.0 && p < 1.0)) {
    if (p == 0.0) return -std::numeric_limits<double>::infinity();
    if (p == 1.0) return std::numeric_limits<double>::infinity();
    throw Error("norm_ppf: p outside [0,1]");
  }
  const double q = p - 0.5;
  double r;
  if (std::abs(q) <= 0.425) {
    r = 0.180625 - q * q;
    return q *
           (((((((2.5090809287301226727e3 * r + 3.3430575583588128105e4) * r +
                 6.7265770927008700853e4) * r + 4.5921953931549871457e4) * r +
               1.3731693765509461125e4) * r + 1.9715909503065514427e3) * r +
             1.3314166789178437745e2) * r + 3.3871328727963666080e0) /
           (((((((5.2264952788528545610e3 * r + 2.8729085735721942674e4) * r +
                 3.9307895800092710610e4) * r + 2.1213794301586595867e4) * r +
               5.3941960214247511077e3) * r + 6.8718700749205790830e2) * r +
             4.2313330701600911252e1) * r + 1.0);
  }
  r = q < 0 ? p : 1.0 - p;
  r = std::sqrt(-std::log(r));
  double val;
  if (r <= 5.0) {
    r -= 1.6;
    val = (((((((7.74545014278341407640e-4 * r + 2.27238449892691845833e-2) * r +
               2.41780725177450611770e-1) * r + 1.27045825245236838258e0) * r +
             3.64784832476320460504e0) * r + 5.76949722146069140550e0) * r +
           4.63033784615654529590e0) * r + 1.42343711074968357734e0) /
          (((((((1.05075007164441684324e-9 * r + 5.47593808499534494600e-4) * r +
               1.51986665636164571966e-2) * r + 1.48103976427480074590e-1) * r +
             6.89767334985100004550e-1) * r + 1.67638483018380384940e0) * r +
           2.05319162663775882187e0) * r + 1.0);
  } else {
    r -= 5.0;
    val = (((((((2.01033439929228813265e-7 * r + 2.71155556874348757815e-5) * r +
               1.24266094738807843860e-3) * r + 2.65321895265761230930e-2) * r +
             2.96560571828504891230e-1) * r + 1.78482653991729133580e0) * r +
           5.46378491116411436990e0) * r + 6.65790464350110377720e0) /
          (((((((2.04426310338993978564e-15 * r + 1.42151175831644588870e-7) * r +
               1.84631831751005468180e-5) * r + 7.86869131145613259100e-4) * r +
             1.48753612908506148525e-2) * r + 1.36929880922735805310e-1) * r +
           5.99832206555887937690e-1) * r + 1.0);
  }
  return q < 0 ? -val : val;
}

// regularized lower incomplete gamma P(a, x): series for x < a+1, Lentz
// continued fraction otherwise
inline double gamma_p(double a, double x) {
  require(a > 0 && x >= 0, "gamma_p: invalid arguments");
  if (x == 0) return 0.0;
  const double gln = std::lgamma(a);
  if (x < a + 1.0) {
    double ap = a, sum = 1.0 / a, del = sum;
    for (int i = 0; i < 500; ++i) {
      ap += 1.0;
      del *= x / ap;
      sum += del;
      if (std::abs(del) < std::abs(sum) * 1e-16) break;
    }
    return sum * std::exp(-x + a * std::log(x) - gln);
  }
  double b = x + 1.0 - a, c = 1e300, d = 1.0 / b, h = d;
  for (int i = 1; i < 500; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < 1e-300) d = 1e-300;
    c = b + an / c;
    if (std::abs(c) < 1e-300) c = 1e-300;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < 1e-16) break;
  }
  return 1.0 - std::exp(-x + a * std::log(x) - gln) * h;
}

// inverse of gamma_p in x: Wilson-Hilferty start + safeguarded Newton
inline double gamma_p_inv(double a, double p) {
  require(a > 0 && p >= 0 && p < 1, "gamma_p_inv: invalid arguments");
  if (p == 0) return 0.0;
  const double z = norm_ppf(p);
  const double t = 1.0 - 1.0 / (9.0 * a) + z / (3.0 * std::sqrt(a));
  double x = a * t * t * t;
  if (!(x > 0)) x = 1e-8;
  const double gln = std::lgamma(a);
  double lo = 0.0, hi = std::numeric_limits<double>::infinity();
  for (int it = 0; it < 100; ++it) {
    const double f = gamma_p(a, x) - p;
    if (f > 0)
      hi = x;
    else
      lo = x;
    const double dpdx = std::exp(-x + (a - 1.0) * std::log(x) - gln);
    double step = dpdx > 0 ? f / dpdx : 0.0;
    double xn = x - step;
    if (!(xn > lo && (xn < hi))) xn = std::isfinite(hi) ? 0.5 * (lo + hi) : 2 * x;
    if (std::abs(xn - x) <= 1e-14 * std::max(1.0, x)) return xn;
    x = xn;
  }
  return x;
}

inline double chi_squared_inv(double dof, double p) {
  return 2.0 * gamma_p_inv(0.5 * dof, p);
}

}  // namespace gpsamp::detail

#endif
