#pragma once
#include <string>

#include "eisen/errors.hpp"

namespace eisen {

/*
  Even, nonnegative, rapidly decaying weights used to smooth family
  averages.  Two built-ins:

    gaussian              w(x) = exp(-pi x^2)
    smoothed indicator    w(t) = 1 on [0,1], a smooth bump decay on
                          (1, 1+1/X), 0 beyond; parameter X sets sharpness.

  The Mellin transform W(s) = int_0^infty w(x) x^{s-1} dx is evaluated
  numerically (log substitution + Simpson), so no constant is hardcoded.
*/
struct WeightFunction {
  std::string id;      // "gaussian" | "indicator"
  double param = 0.0;  // indicator sharpness X
  double scale = 1.0;  // overall multiplier (identities are linear in w)

  double operator()(double x) const;
  // x beyond which w is negligible (|w| < 1e-18 * scale)
  double support_bound() const;
  // Mellin transform at real s > 0
  double mellin(double s) const;

  static WeightFunction gaussian();
  static WeightFunction smoothed_indicator(double X);
};

/*
  Even test function with compactly supported Fourier transform,
  normalized as phi_hat(t) = int phi(x) e(-tx) dx.  Built-in:

    phi_v(x) = (sin(pi v x) / (pi v x))^2,
    phi_v_hat(t) = (v - |t|)/v^2 for |t| <= v, 0 beyond.
*/
struct TestFunction {
  double v = 1.0;

  double phi(double x) const;
  double phi_hat(double t) const;

  static TestFunction sinc_squared(double v);
};

// Numerical check that phi_hat really is the Fourier transform of phi:
// |numerical FT(phi)(t) - phi_hat(t)| maximized over a fixed t-grid in
// [0, v + 1/2].  Piecewise Simpson plus analytic oscillatory tails.
double fourier_residual(const TestFunction& f);

}  // namespace eisen
