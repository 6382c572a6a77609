#pragma once
#include <complex>
#include <optional>

#include "eisen/cubic.hpp"
#include "eisen/eisenstein.hpp"
#include "eisen/weights.hpp"

namespace eisen {

inline constexpr i64 GAUSS_DIRECT_CAP = 1'000'000;

/*
  Cubic Gauss sum over Z[w],

    g(r,n) = sum_{alpha mod n} chi_n(alpha) e(tr(r alpha / n)),

  tr(u+vw) = 2u - v.  Since tr(r alpha / n) = tr(r alpha conj(n)) / N(n),
  the phase is an exact integer residue mod N(n), reduced before
  exponentiation; no fractional part is lost at large N(n).
*/
struct GaussSum {
  EisensteinInt r;
  EisensteinInt n;
  std::complex<double> value;
  // N(n) when n is square-free and (r,n) = 1, which forces |value|^2 = N(n)
  std::optional<i64> exact_norm_sq;
};

// Literal summation over a complete residue system, norm-ascending order,
// compensated accumulation.  g(r,1) = 1 by the empty-sum convention.
// Throws CapExceeded when N(n) > cap.
GaussSum gauss_direct(const EisensteinInt& r, const EisensteinInt& n,
                      i64 cap = GAUSS_DIRECT_CAP);

// g(r, pi^k) for a primary prime pi by the prime-power closed forms.
// With j = v_pi(r) and r = pi^j r':
//   k = j+1 :  -N(pi)^j                  when k = 0 mod 3
//              N(pi)^j g(r', pi)         when k = 1 mod 3
//              N(pi)^j conj(g(r', pi))   when k = 2 mod 3
//   k != j+1:  N(pi)^{k-1}(N(pi) - 1)    when 3 | k and k <= j
//              0                         otherwise.
// The base sum g(1, pi) comes from gauss_direct.
std::complex<double> gauss_prime_power(const EisensteinInt& r,
                                       const EisensteinInt& pi, int k,
                                       i64 cap = GAUSS_DIRECT_CAP);

// Multiplicative evaluation: factor n and peel prime powers through the
// coprime splitting g(r, n1 n2) = g(r n1, n2) g(r, n1) and the twist
// g(rs, n) = conj(chi_n(s)) g(r, n).
GaussSum gauss_fast(const EisensteinInt& r, const EisensteinInt& n,
                    i64 cap = GAUSS_DIRECT_CAP);

// g(r, pi) for a primary prime pi through the residue field, with no cap:
//  - split pi (N = p): residues are 0..p-1; one generator orbit labels
//    F_p^* by cube class, one linear pass accumulates e(t/p) per class;
//    O(p) time, p bytes.
//  - inert pi = -q: the F_q^*-cosets collapse the double sum to
//    q * chi_pi(x0 + w), x0 = (q+1)/2; q = 2 falls back to gauss_direct.
std::complex<double> gauss_prime(const EisensteinInt& r,
                                 const EisensteinInt& pi);

struct RootNumber {
  CharacterSpec chi;
  std::complex<double> value;
};

// W(chi) = chi(sqrt(-3)) g(1, f) with f the conductor, sqrt(-3) = 1 + 2w,
// the character evaluated as chi_n on residues mod f.  |W|^2 = N(f).
// Throws NotPrimitive unless chi is primitive with conductor != (1).
RootNumber root_number(const CharacterSpec& chi);

// Independent route for square-free n: the defining sum
//   W = sum_{x mod n} chi_n(x)^power e(tr(x / (n sqrt(-3)))),
// phase an exact residue mod 3 N(n).  power = 2 gives W of the conjugate
// character; power must not be divisible by 3.
std::complex<double> root_number_direct(const EisensteinInt& n, int power = 1,
                                        i64 cap = GAUSS_DIRECT_CAP);

// |LHS - RHS| for the Poisson summation identity of a primitive chi:
//   sum_z chi(z) w(N(z)/Y)
//     = (Y / W(conj chi)) sum_z conj(chi)(z) what(sqrt(Y N(z) / N(f))),
//   what(t) = int int w(N(x + y w)) e(-t y) dx dy,
// both lattice sums truncated where the summands drop below 1e-18 and the
// transform tabulated by nested Simpson rules (V(y) = int w(u^2+3y^2/4) du,
// then a cosine integral against V).  Throws QuadratureFailure when the
// oscillatory tail of the transform cannot be brought under the internal
// error budget.
double poisson_check(const CharacterSpec& chi, const WeightFunction& w,
                     double Y);

}  // namespace eisen
