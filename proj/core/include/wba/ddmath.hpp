// SPDX-License-Identifier: MIT
#pragma once

#include "wba/accum.hpp"

// Elementary functions on double-double values: exp, log, pow and the
// circle-frequency sin/cos pair used for torus phases. Roughly 31 significant
// digits, which is what keeps error floors near 1e-28 measurable.

namespace wba {

// hi/lo splittings of the usual constants.
inline constexpr dd kDDPi{3.141592653589793116e+00, 1.224646799147353207e-16};
inline constexpr dd kDDTwoPi{6.283185307179586232e+00, 2.449293598294706414e-16};
inline constexpr dd kDDHalfPi{1.570796326794896558e+00, 6.123233995736766036e-17};
inline constexpr dd kDDLn2{6.931471805599452862e-01, 2.319046813846299558e-17};
inline constexpr dd kDDE{2.718281828459045091e+00, 1.445646891729250158e-16};

dd dd_exp(dd a);
// Requires a > 0.
dd dd_log(dd a);
// a > 0; exp(b log a).
dd dd_pow(dd a, dd b);

struct dd_sincos {
  dd sin;
  dd cos;
};

// sin(2*pi*t) and cos(2*pi*t). Accurate for |t| up to ~2^40; intended for
// t already reduced to [0,1).
dd_sincos dd_sincospi2(dd t);

}  // namespace wba
