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

#ifndef GPSAMP_FASTMATH_HPP
#define GPSAMP_FASTMATH_HPP

#include <bit>
#include <cmath>
#include <cstddef>

namespace gpsamp::fastmath {

// Branch-free sin/cos designed for auto-vectorized loops over feature
// matrices, where libm's scalar cos dominates the runtime otherwise.
// Range reduction: r = x - k*2pi (Cody-Waite, 3 parts), then half-angle
// u = r/2 in [-pi/2, pi/2] with Taylor polynomials long enough for ~1e-15
// absolute error; sin x = 2 su cu, cos x = 1 - 2 su^2.
// Valid for |x| up to ~2^26; feature-map arguments stay far below that.

namespace detail {
constexpr double kTwoPiHi = 6.28318530717958623200;   // 2pi rounded
constexpr double kTwoPiMd = 2.44929359829470635446e-16;
constexpr double kTwoPiLo = -5.98947365379886177e-33;
constexpr double kInvTwoPi = 0.15915494309189534561;

inline void half_angle_sincos(double u, double& su, double& cu) {
  const double z = u * u;
  // sin(u) = u (1 + z p), Taylor through u^19
  double p = -8.22063524662432971696e-18;
  p = p * z + 2.81145725434552076320e-15;
  p = p * z - 7.64716373181981647590e-13;
  p = p * z + 1.60590438368216145994e-10;
  p = p * z - 2.50521083854417187751e-08;
  p = p * z + 2.75573192239198747630e-06;
  p = p * z - 1.98412698412698412698e-04;
  p = p * z + 8.33333333333333333333e-03;
  p = p * z - 1.66666666666666666667e-01;
  su = u + u * z * p;
  // cos(u) = 1 + z q, Taylor through u^20
  double q = -1.56192069685862264622e-16;
  q = q * z + 4.77947733238738529744e-14;
  q = q * z - 1.14707455977297247139e-11;
  q = q * z + 2.08767569878680989792e-09;
  q = q * z - 2.75573192239858906526e-07;
  q = q * z + 2.48015873015873015873e-05;
  q = q * z - 1.38888888888888888889e-03;
  q = q * z + 4.16666666666666666667e-02;
  q = q * z - 5.00000000000000000000e-01;
  cu = 1.0 + z * q;
}
}  // namespace detail

inline void sincos1(double x, double& s, double& c) {
  const double k = std::nearbyint(x * detail::kInvTwoPi);
  double r = x - k * detail::kTwoPiHi;
  r -= k * detail::kTwoPiMd;
  r -= k * detail::kTwoPiLo;
  double su, cu;
  detail::half_angle_sincos(0.5 * r, su, cu);
  s = 2.0 * su * cu;
  c = 1.0 - 2.0 * su * su;
}

inline double fast_cos(double x) {
  double s, c;
  sincos1(x, s, c);
  return c;
}

inline double fast_sin(double x) {
  double s, c;
  sincos1(x, s, c);
  return s;
}

inline void cos_array(const double* x, double* out, std::ptrdiff_t n) {
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const double k = std::nearbyint(x[i] * detail::kInvTwoPi);
    double r = x[i] - k * detail::kTwoPiHi;
    r -= k * detail::kTwoPiMd;
    r -= k * detail::kTwoPiLo;
    double su, cu;
    detail::half_angle_sincos(0.5 * r, su, cu);
    out[i] = 1.0 - 2.0 * su * su;
  }
}

inline void sincos_array(const double* x, double* s, double* c,
                         std::ptrdiff_t n) {
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const double k = std::nearbyint(x[i] * detail::kInvTwoPi);
    double r = x[i] - k * detail::kTwoPiHi;
    r -= k * detail::kTwoPiMd;
    r -= k * detail::kTwoPiLo;
    double su, cu;
    detail::half_angle_sincos(0.5 * r, su, cu);
    s[i] = 2.0 * su * cu;
    c[i] = 1.0 - 2.0 * su * su;
  }
}

// Single-precision batch cos for bulk Monte Carlo path evaluation (pick-freeze
// sweeps); ~1e-6 absolute error, accumulate downstream sums in double.
inline void cos_array_f(const float* x, float* out, std::ptrdiff_t n) {
  constexpr float kInv2PiF = 0.15915494309189534561f;
  constexpr float k2PiHiF = 6.2831855f;
  constexpr float k2PiLoF = -1.7484555e-07f;
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const float k = std::nearbyintf(x[i] * kInv2PiF);
    float r = x[i] - k * k2PiHiF;
    r -= k * k2PiLoF;
    const float u = 0.5f * r;
    const float z = u * u;
    float p = -2.3889859e-08f;  // sin(u)/u through u^11
    p = p * z + 2.7525562e-06f;
    p = p * z - 1.9840874e-04f;
    p = p * z + 8.3333310e-03f;
    p = p * z - 1.6666667e-01f;
    const float su = u + u * z * p;
    out[i] = 1.0f - 2.0f * su * su;
  }
}

// exp for negative arguments (squared-exponential kernels), float batch.
// exp(x) = 2^(x*log2e) via exponent reconstruction + degree-5 polynomial.
inline void exp_array_f(const float* x, float* out, std::ptrdiff_t n) {
  constexpr float kLog2e = 1.442695040f;
  constexpr float kLn2Hi = 0.693359375f;
  constexpr float kLn2Lo = -2.12194440e-4f;
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    float v = x[i];
    if (v < -87.0f) v = -87.0f;
    if (v > 87.0f) v = 87.0f;
    const float k = std::nearbyintf(v * kLog2e);
    float r = v - k * kLn2Hi;
    r -= k * kLn2Lo;
    float p = 1.9875691500e-4f;
    p = p * r + 1.3981999507e-3f;
    p = p * r + 8.3334519073e-3f;
    p = p * r + 4.1665795894e-2f;
    p = p * r + 1.6666665459e-1f;
    p = p * r + 5.0000001201e-1f;
    const float poly = 1.0f + r + r * r * p;
    const int e = (static_cast<int>(k) + 127) << 23;
    out[i] = poly * std::bit_cast<float>(e);
  }
}

}  // namespace gpsamp::fastmath

#endif
