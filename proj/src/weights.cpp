#include "eisen/weights.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "eisen/summation.hpp"

namespace eisen {
namespace {

constexpr double PI = 3.14159265358979323846;

// Simpson on [a, b] with n (even) intervals.
template <typename F>
double simpson(F&& f, double a, double b, int n) {
  double h = (b - a) / n;
  NeumaierSum s;
  s.add(f(a));
  s.add(f(b));
  for (int i = 1; i < n; ++i) s.add((i % 2 ? 4.0 : 2.0) * f(a + i * h));
  return s.value() * h / 3.0;
}

}  // namespace

double WeightFunction::operator()(double x) const {
  double t = std::abs(x);
  if (id == "gaussian") return scale * std::exp(-PI * t * t);
  if (id == "indicator") {
    double X = param;
    if (t <= 1.0) return scale;
    if (t >= 1.0 + 1.0 / X) return 0.0;
    double u = X * (t - 1.0);
    return scale * std::exp(1.0 - 1.0 / (1.0 - u * u));
  }
  throw InvalidRange("WeightFunction: unknown id " + id);
}

double WeightFunction::support_bound() const {
  if (id == "gaussian") return 3.7;  // exp(-pi * 3.7^2) < 1e-18
  if (id == "indicator") return 1.0 + 1.0 / param;
  throw InvalidRange("WeightFunction: unknown id " + id);
}

double WeightFunction::mellin(double s) const {
  if (s <= 0.0) throw InvalidRange("mellin: s <= 0");
  // int_0^inf w(x) x^{s-1} dx = int_-inf^{log R} w(e^u) e^{su} du
  double R = support_bound() * (id == "gaussian" ? 4.0 : 1.0);
  double lo = -60.0 / s;  // e^{s*lo} = e^{-60}: integrand negligible
  double hi = std::log(R);
  int n = 1 << 16;
  auto f = [&](double u) { return (*this)(std::exp(u)) * std::exp(s * u); };
  return simpson(f, lo, hi, n);
}

WeightFunction WeightFunction::gaussian() { return {"gaussian", 0.0, 1.0}; }

WeightFunction WeightFunction::smoothed_indicator(double X) {
  if (X < 1.0) throw InvalidRange("smoothed_indicator: X < 1");
  return {"indicator", X, 1.0};
}

double TestFunction::phi(double x) const {
  double u = PI * v * x;
  if (std::abs(u) < 1e-8) return 1.0 - u * u / 3.0;
  double s = std::sin(u) / u;
  return s * s;
}

double TestFunction::phi_hat(double t) const {
  double a = std::abs(t);
  if (a >= v) return 0.0;
  return (v - a) / (v * v);
}

TestFunction TestFunction::sinc_squared(double v) {
  if (v <= 0.0) throw InvalidRange("sinc_squared: v <= 0");
  return {v};
}

namespace {

/*
  tail_cos(a, X) = int_X^inf cos(a x) / x^2 dx.
  For a = 0 this is 1/X.  Otherwise substitute y = a x and integrate by
  parts:  int_Y^inf cos(y)/y^2 dy = cos(Y)/Y - (pi/2 - Si(Y)), and for
  large Y the sine-integral remainder has the standard asymptotic
  pi/2 - Si(Y) = cos(Y)/Y (1 - 2/Y^2 + 24/Y^4) + sin(Y)/Y^2 (1 - 6/Y^2 + ...).
  The cutoffs used below keep Y > 300, so truncating the series after the
  listed terms leaves an error far below 1e-12 absolute.
*/
double tail_cos(double a, double X) {
  if (a == 0.0) return 1.0 / X;
  double Y = a * X;
  double c = std::cos(Y), s = std::sin(Y);
  double y2 = Y * Y;
  double rem = c / Y * (1.0 - 2.0 / y2 + 24.0 / (y2 * y2)) +
               s / y2 * (1.0 - 6.0 / y2 + 120.0 / (y2 * y2));
  return a * (c / Y - rem);
}

}  // namespace

double fourier_residual(const TestFunction& f) {
  const double v = f.v;
  const double X = 8192.0;  // truncation point of the numeric integral
  double worst = 0.0;
  std::vector<double> grid;
  for (double t = 0.0; t <= v + 0.5; t += v / 8.0) grid.push_back(t);
  grid.push_back(v);          // the kink
  grid.push_back(v - 1e-3);   // just inside the support
  for (double t : grid) {
    auto integrand = [&](double x) {
      return f.phi(x) * std::cos(2.0 * PI * t * x);
    };
    // 2 * int_0^X phi cos: dense near zero, coarser on the long tail
    double head = simpson(integrand, 0.0, 64.0, 64 * 1024);
    double tail = simpson(integrand, 64.0, X, static_cast<int>((X - 64) * 128));
    // analytic remainder of int_X^inf using
    // phi(x) = (1 - cos(2 pi v x)) / (2 pi^2 v^2 x^2):
    double rem = (tail_cos(2.0 * PI * t, X) -
                  0.5 * (tail_cos(2.0 * PI * (v - t), X) +
                         tail_cos(2.0 * PI * (v + t), X))) /
                 (2.0 * PI * PI * v * v);
    double num = 2.0 * (head + tail + rem);
    worst = std::max(worst, std::abs(num - f.phi_hat(t)));
  }
  return worst;
}

}  // namespace eisen
