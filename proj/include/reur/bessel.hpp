#pragma once

namespace reur {

// Modified Bessel functions of the first kind for x >= 0, returned with
// the exponential growth removed: e^{-x} I_n(x). Power series up to
// x = 15, large-argument asymptotic expansion beyond.
double bessel_i0_scaled(double x);
double bessel_i1_scaled(double x);

/// ln I_0(x), finite for all x >= 0.
double log_bessel_i0(double x);

/// I_1(x) / I_0(x), strictly increasing from 0 to 1.
double bessel_ratio(double x);

/// d/dx of bessel_ratio: 1 - A/x - A^2 (1/2 at x = 0).
double bessel_ratio_derivative(double x);

} // namespace reur
