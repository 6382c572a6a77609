#pragma once
#include <complex>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "eisen/eisenstein.hpp"
#include "eisen/fraction.hpp"
#include "eisen/weights.hpp"

namespace eisen {

/*
  One-level density of low-lying zeros for two families of primitive cubic
  characters, each weighted by w(N(cond chi)/X):

    full   chi_{a b^2},  a, b primary square-free coprime, a b^2 = 1 mod 9,
           conductor ab;
    thin   chi_n, n != 1 primary square-free, n = 1 mod 9, conductor n.

  Both consist of Hecke characters (trivial on units), so values on ideals
  are well defined and the L-machinery applies.  The statistic is

    D(X) = (1/A_F) sum_chi w(N(f_chi)/X) sum_gamma phi(gamma log X / 2 pi),

  with A_F the weighted family mass.  The explicit formula turns D into a
  conductor term, a digamma integral, and weighted prime sums; this module
  computes that prime side, the zero side (via the lfunction module) for
  small X, the family asymptotics, the error statistic E_F, and the
  non-vanishing proportion bound drawn from D.
*/

enum class Family { full, thin };
std::string family_name(Family f);

// One character: chi_a * chi_b^2 of conductor ab (thin members have b = 1).
struct FamilyMember {
  EisensteinInt a{1, 0};
  EisensteinInt b{1, 0};
  i64 cond_norm = 1;
};

// Members with N(cond) <= X * support_bound(w), sorted by conductor norm.
std::vector<FamilyMember> enumerate_family(Family f, const WeightFunction& w,
                                           double X);

/*
  Family constants, both evaluated by truncated Euler products over the
  prime table (no hardcoded decimals):

    dedekind_zeta2             zeta_K(2) = prod (1 - N(p)^-2)^-1
    full_family_euler_product  prod_{p not above 3} (1 - 3/N^2 + 2/N^3)
*/
double dedekind_zeta2();
double full_family_euler_product();

/*
  Weighted mass A_F(X) = sum_chi w(N(f)/X), the matching log-conductor sum
  sum_chi w(N(f)/X) log N(f), and the predicted leading term:

    thin:  zeta_K(2)^-1 * pi * W(1) * X / (4 sqrt(3) h9)
    full:  2 pi W(1) / (9 h9 sqrt(3)) * prod(1 - 3/N^2 + 2/N^3) * X log X

  with W the Mellin transform of w and h9 the ray class number mod 9.
*/
struct MassResult {
  double a_f = 0.0;
  double log_weighted = 0.0;  // sum w(N(f)/X) log N(f)
  double predicted = 0.0;
  std::size_t members = 0;
};
MassResult family_mass(Family f, const WeightFunction& w, double X);

/*
  S_F(y) = sum_{chi in F + trivial} w(N(f)/X) sum_{N(p) <= y, p not above 3}
           chi(p) log N(p).

  prime_major sweeps primes outermost, turning each chi_n(g) into a table
  lookup chi_g(n mod g) by cubic reciprocity (both arguments primary);
  character_major is the literal double loop used to cross-check it.
*/
enum class SumOrder { prime_major, character_major };
std::complex<double> prime_sum_S(Family f, const WeightFunction& w, double X,
                                 double y,
                                 SumOrder order = SumOrder::prime_major);

// (2 / log X) Int phi(t) Re psi(1/2 + 2 pi i t / log X) dt with an honest
// error bound: Simpson panels to t = 64, then closed forms from the
// asymptotic psi(1/2 + iy) ~ log y - 1/(24 y^2) plus a numerically
// integrated oscillatory remainder.  Requires the built-in phi_v shape.
struct GammaTerm {
  double value = 0.0;
  double budget = 0.0;
};
GammaTerm gamma_term(const TestFunction& phi, double X);

struct DensityBreakdown {
  double conductor_term = 0.0;  // phi_hat(0) <log N(f)> / log X
  double gamma_term = 0.0;
  double prime_k1 = 0.0;  // k = 1 prime sum, already divided by A log X
  double prime_k2 = 0.0;
  double k3_bound = 0.0;  // bound on the omitted k >= 3 tail
  double zero_tail = 0.0;  // zero-side truncation bound (when computed)
};

struct DensityReport {
  std::string family;
  double X = 0.0;
  double v = 0.0;
  std::size_t members = 0;
  double a_f = 0.0;
  double a_f_predicted = 0.0;
  double d_primeside = 0.0;
  std::optional<double> d_zeroside;
  double e_f = 0.0;  // error statistic E_F(X)
  double budget = 0.0;
  DensityBreakdown breakdown;
};

struct DensityOptions {
  // E_F with chi(p) inside the k-sum (the display form) instead of
  // chi(p^k) + chi(p^{2k}) (the identity-bearing form, default).
  bool literal_error_term = false;
  // > 0: also average the zero side, hunting zeros to this height for
  // every member.  Only sensible for small X.
  double zero_side_T = 0.0;
};

/*
  D(X) assembled from the explicit formula, per character:

    phi_hat(0) log N(f)/log X + gamma_term
      - sum_p sum_{k=1,2} (chi(p^k) + chi(p^{2k}))
            phi_hat(k log N(p)/log X) log N(p) / (N(p)^{k/2} log X),

  averaged with weights w(N(f)/X)/A_F.  The k >= 3 truncation is bounded
  into `budget`, never dropped silently.  Throws SupportExceeded if
  phi_hat fails to vanish at |t| >= v, InvalidRange for X < 10.
*/
DensityReport one_level_density_primeside(Family f, const WeightFunction& w,
                                          const TestFunction& phi, double X,
                                          const DensityOptions& opts = {});

/*
  The un-averaged explicit formula for one character chi_n, the sharpest
  identity in the module: every zero of Lambda(s, chi) with |gamma| <= T
  (both chi and its conjugate are hunted) against the full prime side with
  all k >= 1, the exact digamma integral, and the conductor term.  delta =
  |zero side - prime side| must sit inside the reported budget, which
  collects the zero tail above T, the quadrature bound, and root-finding
  slack.
*/
struct ExplicitFormulaCheck {
  double zero_side = 0.0;
  double prime_side = 0.0;
  double delta = 0.0;
  double budget = 0.0;
  std::size_t zeros_used = 0;
};
ExplicitFormulaCheck explicit_formula_check(const EisensteinInt& n,
                                            const TestFunction& phi, double X,
                                            double T);

/*
  Non-vanishing proportion for the thin family with phi_v: asymptotically
  p0 >= 1 - 1/v (exact rational, = 2/13 at v = 13/11); empirically
  1 - phi_hat(0) - |D(X) - phi_hat(0)| at finite X.  Throws
  UnsupportedRange for the full family, v > 13/11, or v <= 0.
*/
struct NonvanishingBound {
  Fraction asymptotic{0, 1};  // max(0, 1 - 1/v)
  double phi_hat0 = 0.0;      // 1/v
  double empirical = 0.0;
};
NonvanishingBound nonvanishing_bound(Family f, const WeightFunction& w,
                                     double X, const Fraction& v);

// CSV: "# eisen density-report v1" then
// family,X,v,A_F,D_primeside,D_zeroside,E_F,budget (empty zero side when
// absent).  Load validates the header.
void save_density_reports(const std::string& path,
                          const std::vector<DensityReport>& reports);
std::vector<DensityReport> load_density_reports(const std::string& path);

// JSON config -> (w, phi):
//   {"weight": {"id": "gaussian"},            "test": {"v": 0.5}}
//   {"weight": {"id": "indicator", "param": 100.0}, ...}
// Missing blocks default to gaussian / v = 1/2; unknown ids throw
// InvalidRange.
std::pair<WeightFunction, TestFunction> parse_weight_config(
    const std::string& json_text);

}  // namespace eisen
