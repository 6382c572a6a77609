#pragma once
#include <complex>
#include <string>
#include <utility>
#include <vector>

#include "eisen/eisenstein.hpp"

namespace eisen {

/*
  The averaged Gauss-sum statistic

    H(Z, r, lambda) = sum_{pi primary prime, (pi, r) = 1, N(pi) <= Z}
                        gtilde_lambda(r, pi) log N(pi),

    gtilde_lambda(r, c) = g(r, c) lambda(c) N(c)^{-1/2},

  together with the machinery that bounds it: Vaughan's identity as an
  exact finite decomposition, the bilinear rewriting of its Type II
  pieces, the Type I sums F_a(z, r, lambda), the generating functions
  psi(r, lambda, s) and h_a(r, lambda, s) in their absolutely convergent
  range, and the balancing helper behind the exponent bookkeeping.
*/

/*
  Twist characters admitted by the statistic: a ray class character
  mod 9 times an optional cubic-symbol twist (./m)_3 with a fixed
  primary modulus m.  Such lambda are multiplicative, vanish exactly on
  arguments sharing a factor with 3m, take values in the cube roots of
  unity elsewhere, and have bounded conductor; wider families are
  rejected by lambda_char.
*/
struct LambdaChar {
  int ray_label = 0;
  EisensteinInt twist{1, 0};

  // 0 when gcd(x, 3 * twist) != 1, else an exact cube root of unity.
  std::complex<double> operator()(const EisensteinInt& x) const;
  // lambda(x)^3 in exponent arithmetic: exactly 0 or 1.
  double cube(const EisensteinInt& x) const;
  bool is_trivial() const;
  // stable tag used in CSV/JSON output: "l<label>" or "l<label>x<a>_<b>"
  std::string id() const;
};

// Checked constructor; throws InvalidRange for a label outside [0, h9)
// or a non-primary twist modulus.
LambdaChar lambda_char(int ray_label, const EisensteinInt& twist = {1, 0});

/*
  H(Z, r, lambda) for primary r.  Computed twice: once as the prime sum
  above and once as the von Mangoldt sum over primary prime powers c,
  (c, r) = 1, N(c) <= Z, of gtilde_lambda(r, c) Lambda(c).  The two are
  equal term by term because g(r, pi^k) = 0 for k >= 2 when (pi, r) = 1;
  a disagreement beyond 1e-9 (1 + |H|) raises IdentityViolation.  Throws
  InvalidRange for Z < 2 or r not primary.
*/
std::complex<double> h_statistic(i64 Z, const EisensteinInt& r,
                                 const LambdaChar& lambda);

struct HsumEntry {
  i64 Z = 0;
  std::complex<double> value;
};

/*
  H sampled at `points` geometrically spaced cutoffs in [Z_min, Z_max]
  (one sieve pass, so successive entries are prefix sums of the same
  prime stream by construction), plus a least-squares fit of log |H|
  against log Z.  slope_stderr is the one-sigma error of the fitted
  slope; the fit is a diagnostic, not a proof.  Requires 2 <= Z_min <
  Z_max and at least 8 distinct cutoffs (InvalidRange).
*/
struct HsumReport {
  EisensteinInt r{1, 0};
  std::string lambda_id;
  std::vector<HsumEntry> grid;
  double slope = 0.0;
  double slope_stderr = 0.0;
};

HsumReport h_scan(i64 Z_min, i64 Z_max, int points, const EisensteinInt& r,
                  const LambdaChar& lambda);

// Header line "# eisen hsum v1", then rows Z, r_a, r_b, lambda_id,
// re(H), im(H) with %.17g floats and '.' decimal separator.
void save_hsum_csv(const std::string& path,
                   const std::vector<HsumReport>& reports);

/*
  Vaughan decomposition of H(2Z) - H(Z).  Every Sigma_j runs over
  square-free primary a, b, c with Z < N(abc) <= 2Z and (r, abc) = 1,
  sums Lambda(a) mu_K(b) gtilde_lambda(r, abc), and restricts the ranges
  by

    Sigma_0:   N(bc) <= u
    Sigma_1:   N(b) <= u
    Sigma_2':  N(ab) <= u
    Sigma_2'': N(a), N(b) <= u < N(ab)
    Sigma_3:   N(b) <= u < N(a), N(bc)
    Sigma_4:   N(a) < N(bc) <= u.

  Then Sigma_0 = Sigma_1 - Sigma_2' - Sigma_2'' - Sigma_3 + Sigma_4,
  Sigma_0 = H(2Z) - H(Z), and Sigma_4 = 0 once u <= Z^{1/3}.
*/
struct VaughanReport {
  i64 Z = 0;
  i64 u = 0;
  EisensteinInt r{1, 0};
  std::string lambda_id;
  std::complex<double> sigma0, sigma1, sigma2p, sigma2pp, sigma3, sigma4;
  // |Sigma_0 - Sigma_1 + Sigma_2' + Sigma_2'' + Sigma_3 - Sigma_4|
  double identity_residual = 0.0;
};

/*
  One literal sweep over (a, b, c) fills all six sums (products that are
  not square-free contribute 0 since g(r, abc) then vanishes); both the
  five-term identity and Sigma_0 = H(2Z) - H(Z) are verified, and a
  residual above 1e-8 (1 + max |Sigma_j|) raises IdentityViolation --
  this is an exact combinatorial identity, so any violation is an
  arithmetic bug, not a truncation artifact.  Requires Z >= 2,
  1 <= u <= Z, r primary (InvalidRange); for u > Z the five-term
  identity genuinely fails (primes with Z < N <= u survive the Moebius
  collapse), so that range is rejected rather than mis-reported.
*/
VaughanReport vaughan_decompose(i64 Z, const EisensteinInt& r, i64 u,
                                const LambdaChar& lambda);

// The report as a single JSON object (keys Z, u, r, lambda_id, the six
// sigma pairs, identity_residual).
std::string vaughan_json(const VaughanReport& report);

/*
  Sigma_2'' and Sigma_3 recomputed through their bilinear form

    sum_{Z < N(vw) <= 2Z, N(v), N(w) > u} A(v) B(w) conj(chi_v(w)),

  using g(r, abc) = conj(chi_ab(c)) g(r, ab) g(r, c) for (ab, c) = 1
  (both sides vanish otherwise): for Sigma_2'' the coefficients are
  A(v) = sum_{ab = v, N(a), N(b) <= u} Lambda(a) mu_K(b) gtilde(r, v)
  and B(w) = gtilde(r, w); for Sigma_3 they are C(v) = Lambda(v)
  gtilde(r, v) and D(w) = sum_{bc = w, N(b) <= u} mu_K(b) gtilde(r, w).
  The N(w) > u restriction in Sigma_2'' is only automatic when
  u <= Z^{1/3} (then N(c) > Z/u^2 >= u), so larger u raises
  InvalidRange.  Disagreement with the direct triple sums beyond
  1e-8 (1 + |Sigma|) raises IdentityViolation.
*/
struct BilinearForms {
  std::complex<double> sigma2pp, sigma3;
};

BilinearForms bilinear_forms(i64 Z, const EisensteinInt& r, i64 u,
                             const LambdaChar& lambda);

/*
  Type I sum F_a(z, r, lambda) = sum over primary b with a | b,
  (b, r) = 1, N(b) <= z of gtilde_lambda(r, b).  Only square-free b
  contribute (g(r, b) = 0 otherwise for (b, r) = 1).  Requires a
  square-free primary with (a, r) = 1, r primary, z >= 1 (InvalidRange).
*/
std::complex<double> type1_sum_F(i64 z, const EisensteinInt& a,
                                 const EisensteinInt& r,
                                 const LambdaChar& lambda);

/*
  Truncation of psi(r, lambda, s) = sum_{b primary} lambda(b) g(r, b)
  N(b)^{-s} at N(b) <= B.  tail_bound is the crude remainder estimate
  from |g(r, b)| <= N(b) and #{primary b, N(b) = n} <= d(n) <= 2 sqrt n:

    |tail| <= 2 B^{3/2 - sigma} + 2 B^{5/2 - sigma} / (sigma - 5/2)

  for sigma = Re(s) > 5/2, infinity otherwise.  No analytic
  continuation is attempted anywhere in this module.
*/
struct PsiTruncation {
  std::complex<double> value;
  double tail_bound = 0.0;
};

PsiTruncation psi_truncated(const EisensteinInt& r, const LambdaChar& lambda,
                            std::complex<double> s, i64 B);

/*
  r = r1 r2^2 r3^3 with r1, r2 square-free and coprime; r3_star is the
  product of the primes dividing r3 but not r1 r2.  Requires r primary
  (InvalidRange); the recomposition is re-checked on the way out.
*/
struct ShiftDecomposition {
  EisensteinInt r{1, 0};
  EisensteinInt r1{1, 0}, r2{1, 0}, r3{1, 0};
  EisensteinInt r3_star{1, 0};
};

ShiftDecomposition shift_decompose(const EisensteinInt& r);

/*
  Factorization identity for h_a(r, lambda, s) = sum_{b primary, a | b,
  (b, r) = 1} lambda(b) g(r, b) N(b)^{-s}: with r = r1 r2^2 r3^3 as
  above,

    h_a = g(r, a) lambda(a) N(a)^{-s}
            prod_{pi | a r1 r2} (1 - lambda(pi)^3 N(pi)^{2-3s})^{-1}
          sum_{d | r3*} mu_K(d) lambda(d) g(a r1 r2^2, d) N(d)^{-s}
            prod_{pi | d} (1 - lambda(pi)^3 N(pi)^{2-3s})^{-1}
          sum_{c | d a r1} mu_K(c) N(c)^{1-2s} lambda(c)^2
            conj(g(d a r1 r2^2 / c, c)) psi(d a r1 r2^2 / c, lambda, s).

  Both sides are expanded as Dirichlet series in N(.)^{-s} up to norm B
  and the maximum coefficient mismatch is returned.  Truncating every
  factor at B keeps the first B coefficients of the product exact, so
  the residual measures arithmetic consistency only.  Requires a
  square-free primary, r primary, (a, r) = 1, B >= 1 (InvalidRange).
*/
double verify_ha_identity(const EisensteinInt& a, const EisensteinInt& r,
                          const LambdaChar& lambda, i64 B);

/*
  Balancing helper for L(H) = sum_i A_i H^{a_i} + sum_j B_j H^{-b_j}
  over H in [H1, H2]: h_star minimizes L on a geometric grid refined by
  ternary search (L is convex in log H), minimum = L(h_star), and

    bound = sum_{i,j} (A_i^{b_j} B_j^{a_i})^{1/(a_i + b_j)}
          + sum_i A_i H1^{a_i} + sum_j B_j H2^{-b_j}

  dominates the true minimum up to a factor depending only on the term
  counts (already for one term of each kind on an unconstrained range the
  minimum of A H^a + B H^{-b} exceeds the cross term (A^b B^a)^{1/(a+b)}
  by the factor (a/b)^{b/(a+b)} + (b/a)^{a/(a+b)} <= 2, and m + n such
  windows cover the general case).  Every A_i, B_j, a_i, b_j must be
  positive and 0 < H1 <= H2 (InvalidRange).
*/
struct BalanceResult {
  double h_star = 0.0;
  double minimum = 0.0;
  double bound = 0.0;
};

BalanceResult balance_bound(
    const std::vector<std::pair<double, double>>& terms_A,
    const std::vector<std::pair<double, double>>& terms_B, double H1,
    double H2);

}  // namespace eisen
