#pragma once
#include <complex>
#include <string>
#include <vector>

#include "eisen/cubic.hpp"
#include "eisen/eisenstein.hpp"
#include "eisen/errors.hpp"
#include "eisen/gauss.hpp"

namespace eisen {

/*
  Numerical Hecke L-functions for primitive cubic characters chi of
  conductor f coprime to 3 with chi trivial on units (N(f) = 1 mod 9).

  The completed function

      Lambda(s, chi) = (3 N(f))^{s/2} (2 pi)^{-s} Gamma(s) L(s, chi)
                     = Q^s Gamma(s) L(s, chi),       Q = sqrt(3 N(f)) / (2 pi),

  is entire and satisfies

      Lambda(s, chi) = eps(chi) Lambda(1 - s, chibar),
      eps(chi) = W(chi) / sqrt(N(f)),  |eps| = 1,

  with W(chi) the Gauss-sum root number from gauss.hpp.  Evaluation uses a
  smoothed approximate functional equation with incomplete-gamma weights;
  zeros on the critical line are located by scanning, refined by a complex
  secant iteration, and certified by an argument-principle count over a
  rectangle enclosing the scanned segment.
*/

// ---------------------------------------------------------------------------
// Special functions (complex double precision, relative accuracy ~1e-13).

// log Gamma(z), analytically continued (imaginary part is not reduced mod
// 2*pi); Lanczos approximation with reflection for Re z < 1/2.
std::complex<double> log_gamma(std::complex<double> z);

// Digamma psi(z) = Gamma'(z)/Gamma(z); recurrence shift into |z| > 12
// followed by the Bernoulli asymptotic series.
std::complex<double> digamma(std::complex<double> z);

// Upper incomplete gamma Gamma(s, w) = int_w^infty t^{s-1} e^{-t} dt along
// the ray of w (principal branch of w^s).  Lower series for moderate |w|,
// Legendre continued fraction otherwise; throws InsufficientTruncation if
// either expansion fails to converge.
std::complex<double> upper_gamma(std::complex<double> s,
                                 std::complex<double> w);

// ---------------------------------------------------------------------------
// Dirichlet coefficients and the completed L-function.

struct LData {
  CharacterSpec chi;
  // a[m] = sum of chi(ideal) over ideals of norm m, 1 <= m <= M (a[0] unused).
  std::vector<std::complex<double>> a;
  i64 M = 0;
  std::complex<double> root_number{0.0, 0.0};  // W(chi)
  std::complex<double> epsilon{0.0, 0.0};      // W(chi) / sqrt(N(f))
  double q = 0.0;                              // sqrt(3 N(f)) / (2 pi)
  i64 conductor_norm = 0;
};

// Euler-product coefficients of the primitive character of conductor
// n1 * n2 attached to chi (values chi_{n1} chi_{n2}^2 at prime ideals, so
// primes dividing the modulus but not the conductor contribute their honest
// Euler factors).  Throws NotPrimitive / NotHecke for characters outside the
// supported family and InvalidRange beyond the documented cap N <= 2000.
LData coefficients(const CharacterSpec& chi, i64 M);

// Lambda(s, chi) by the smoothed approximate functional equation.  Valid for
// -6 <= Re s <= 7, |Im s| <= 35 (InvalidRange outside); throws
// InsufficientTruncation when ld.M is too small for this height.  If
// err_estimate is non-null it receives a heuristic bound combining the
// truncated tail with accumulated rounding.
std::complex<double> lambda_eval(const LData& ld, std::complex<double> s,
                                 double* err_estimate = nullptr);

// L(s, chi) = Lambda(s, chi) / (Q^s Gamma(s)).
std::complex<double> l_eval(const LData& ld, std::complex<double> s);

// |Lambda(s, chi) - eps(chi) Lambda(1 - s, chibar)|; ld_conj must hold the
// conjugate character (same conductor norm).
double fe_residual(const LData& ld, const LData& ld_conj,
                   std::complex<double> s);

// ---------------------------------------------------------------------------
// Zeros on the critical line.

struct CriticalZero {
  double gamma = 0.0;
  int multiplicity = 1;
};

struct ZeroList {
  CharacterSpec chi;
  double T = 0.0;
  std::vector<CriticalZero> zeros;  // ordinates in [0, T], ascending
};

// All zeros of Lambda(1/2 + i gamma) with 0 <= gamma <= T, each located to
// within delta.  The critical-line scan is refined by complex secant
// iteration; completeness is certified by comparing against the winding
// number of Lambda around the rectangle [1/2 - 0.45, 1/2 + 0.45] x
// [-pad, T + pad].  A disagreement that survives two scan refinements, an
// off-line zero, or a non-integral winding aborts with CountMismatch.
// T <= 30 (InvalidRange beyond).
ZeroList find_zeros(const LData& ld, double T, double delta);

// CSV persistence: header line "# eisen zero-list v1", then
// n_a,n_b,norm,gamma,multiplicity rows ('.' decimal separator).
void save_zero_list(const std::string& path, const ZeroList& zl);
ZeroList load_zero_list(const std::string& path);

}  // namespace eisen
