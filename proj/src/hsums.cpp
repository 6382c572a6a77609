#include "eisen/hsums.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <utility>
#include <vector>

#include "eisen/cubic.hpp"
#include "eisen/errors.hpp"
#include "eisen/factor.hpp"
#include "eisen/gauss.hpp"
#include "eisen/sieve.hpp"
#include "eisen/summation.hpp"
#include "json.hpp"

namespace eisen {

namespace {

using cd = std::complex<double>;

// primary conjugate of a primary element: conj(a + bw) = (a - b) - bw,
// and (a - b, -b) = (1, 0) mod 3 again.
EisensteinInt conj_primary(const EisensteinInt& x) {
  return {x.a - x.b, -x.b};
}

/*
  Guard on the O(p) split-prime evaluator: for a split primary prime pi
  the cube of the Gauss sum is rational-side computable,

    g(1, pi)^3 = -N(pi) pi,

  (the Jacobi-sum normalization J(chi, chi) = -pi for pi = 1 mod 3), so
  a drifted exponential table or a mis-labelled cube class is caught at
  cost O(1) per prime instead of silently corrupting every H value
  downstream.
*/
void check_cube_relation(const EisensteinInt& pi, cd g1) {
  double p = double(norm(pi));
  cd diff = g1 * g1 * g1 + p * to_complex(pi);
  if (std::abs(diff) > 1e-7 * p * std::sqrt(p) + 1e-9)
    throw IdentityViolation("h sum: split Gauss sum fails g^3 = -N(pi) pi");
}

/*
  H at several cutoffs from one pass over the primary primes in norm
  order.  Split primes come in conjugate pairs adjacent in the table and
  g(1, conj pi) = conj g(1, pi), so each rational split prime costs one
  O(p) evaluation; inert primes are O(1) through the coset collapse in
  gauss_prime.  The twist g(r, pi) = conj(chi_pi(r)) g(1, pi) then costs
  a symbol.  Alongside the prime sum the k >= 2 prime-power terms of the
  von Mangoldt form are evaluated through the closed forms (all zero for
  (pi, r) = 1) and their total is required to stay below
  1e-9 (1 + |H|): the two forms of the statistic are checked against
  each other rather than assumed equal.
*/
std::vector<cd> h_values(const std::vector<i64>& zs, const EisensteinInt& r,
                         const LambdaChar& lambda) {
  i64 zmax = zs.back();
  auto table = default_table(zmax);
  ComplexSum prime_form;
  ComplexSum weighted_extra;
  std::vector<cd> out;
  std::size_t zi = 0;

  auto flush_upto = [&](i64 next_norm) {
    while (zi < zs.size() && next_norm > zs[zi]) {
      cd h = prime_form.value();
      if (std::abs(weighted_extra.value()) > 1e-9 * (1.0 + std::abs(h)))
        throw IdentityViolation(
            "h sum: prime and von Mangoldt forms disagree");
      out.push_back(h);
      ++zi;
    }
  };

  EisensteinInt cached_pi{0, 0};
  cd cached_g1{0.0, 0.0};
  for (std::size_t i = 0; i < table->primes.size(); ++i) {
    i64 n = table->norms[i];
    if (n > zmax) break;
    flush_upto(n);
    const EisensteinInt& pi = table->primes[i];
    if (!coprime(pi, r)) continue;
    cd lam = lambda(pi);
    if (lam == cd{0.0, 0.0}) continue;
    cd g1;
    if (pi.b != 0 && cached_pi == conj_primary(pi)) {
      g1 = std::conj(cached_g1);
    } else {
      g1 = gauss_prime(EIS_ONE, pi);
      if (pi.b != 0) {
        check_cube_relation(pi, g1);
        cached_pi = pi;
        cached_g1 = g1;
      }
    }
    cd g = cubic_symbol_fast(r, pi).conj().to_complex() * g1;
    double ln = std::log(double(n));
    prime_form.add(g * lam * (ln / std::sqrt(double(n))));
    cd lamk = lam;
    i64 nk = n;
    for (int k = 2; nk <= zmax / n; ++k) {
      nk *= n;
      lamk *= lam;
      cd gk = gauss_prime_power(r, pi, k);
      weighted_extra.add(gk * lamk * (ln / std::sqrt(double(nk))));
    }
  }
  flush_upto(std::numeric_limits<i64>::max());
  return out;
}

// square-free primary n coprime to r, with everything the Vaughan sweep
// needs precomputed: norm, log norm, Moebius value, prime factors, and
// gtilde_lambda(r, n) = g(r, n) lambda(n) N(n)^{-1/2}.
struct SqfEntry {
  EisensteinInt n;
  i64 norm = 1;
  double logn = 0.0;
  int mu = 1;
  std::vector<EisensteinInt> pf;
};

struct SqfData {
  std::vector<SqfEntry> entries;  // ascending norm
  std::vector<i64> norms;         // parallel to entries
  std::map<EisensteinInt, cd> gt;
};

SqfData build_sqf(i64 bound, const EisensteinInt& r,
                  const LambdaChar& lambda) {
  SqfData d;
  for (const EisensteinInt& n : enumerate_primary(bound)) {
    if (!coprime(n, r)) continue;
    Factorization f = factor(n);
    bool sqf = true;
    for (const PrimePower& pp : f.factors)
      if (pp.exp > 1) sqf = false;
    if (!sqf) continue;
    SqfEntry e;
    e.n = n;
    e.norm = norm(n);
    e.logn = std::log(double(e.norm));
    e.mu = (f.factors.size() % 2 == 0) ? 1 : -1;
    for (const PrimePower& pp : f.factors) e.pf.push_back(pp.prime);
    d.gt.emplace(n, gauss_fast(r, n).value * lambda(n) /
                        std::sqrt(double(e.norm)));
    d.norms.push_back(e.norm);
    d.entries.push_back(std::move(e));
  }
  return d;
}

void check_vaughan_args(i64 Z, const EisensteinInt& r, i64 u,
                        const char* who) {
  if (Z < 2) throw InvalidRange(std::string(who) + ": Z < 2");
  if (u < 1 || u > Z)
    throw InvalidRange(std::string(who) + ": u outside [1, Z]");
  if (!is_primary(r)) throw InvalidRange(std::string(who) + ": r not primary");
}

// square-free divisors (d, mu_K(d)) of a square-free element given its
// prime list, by subset expansion; includes (1, +1).
std::vector<std::pair<EisensteinInt, int>> sqfree_divisors(
    const std::vector<EisensteinInt>& pf) {
  std::vector<std::pair<EisensteinInt, int>> out;
  out.reserve(std::size_t(1) << pf.size());
  out.emplace_back(EIS_ONE, 1);
  for (const EisensteinInt& p : pf) {
    std::size_t m = out.size();
    for (std::size_t i = 0; i < m; ++i)
      out.emplace_back(mul(out[i].first, p), -out[i].second);
  }
  return out;
}

// Dirichlet series truncated at norm B: index = norm, slot 0 unused.
using Series = std::vector<cd>;

// (x * y)(n) = sum_{ij = n} x(i) y(j); truncating both factors at B
// keeps the first B coefficients of the product exact.
Series series_mul(const Series& x, const Series& y, i64 B) {
  Series z(std::size_t(B) + 1);
  for (i64 i = 1; i <= B; ++i) {
    if (x[std::size_t(i)] == cd{0.0, 0.0}) continue;
    for (i64 j = 1; j <= B / i; ++j) {
      if (y[std::size_t(j)] == cd{0.0, 0.0}) continue;
      z[std::size_t(i * j)] += x[std::size_t(i)] * y[std::size_t(j)];
    }
  }
  return z;
}

// (1 - lambda(pi)^3 N(pi)^{2-3s})^{-1} as a series: the coefficient at
// norm N(pi)^{3k} is (lambda(pi)^3 N(pi)^2)^k, and lambda(pi)^3 is
// exactly 0 or 1.
Series euler_inv_factor(const EisensteinInt& pi, const LambdaChar& lambda,
                        i64 B) {
  Series f(std::size_t(B) + 1);
  f[1] = 1.0;
  i64 np = norm(pi);
  __int128 cube = (__int128)np * np * np;
  if (cube > B) return f;
  i64 step = i64(cube);
  double q = lambda.cube(pi) * double(np) * double(np);
  double coef = 1.0;
  for (i64 idx = 1; idx <= B / step;) {
    idx *= step;
    coef *= q;
    f[std::size_t(idx)] = coef;
  }
  return f;
}

}  // namespace

/* ---------------- twist characters ---------------- */

std::complex<double> LambdaChar::operator()(const EisensteinInt& x) const {
  i64 nm = norm(x) % 3;
  if (nm < 0) nm += 3;
  if (nm == 0) return {0.0, 0.0};
  int e = ray_class_mod9().characters.at(std::size_t(ray_label)).exponent(x);
  if (norm(twist) != 1) {
    CubicValue tw = cubic_symbol_fast(x, twist);
    if (tw.zero) return {0.0, 0.0};
    e += tw.e;
  }
  return CubicValue::Root(e).to_complex();
}

double LambdaChar::cube(const EisensteinInt& x) const {
  i64 nm = norm(x) % 3;
  if (nm < 0) nm += 3;
  if (nm == 0) return 0.0;
  if (norm(twist) != 1 && cubic_symbol_fast(x, twist).zero) return 0.0;
  return 1.0;
}

bool LambdaChar::is_trivial() const {
  return norm(twist) == 1 &&
         ray_class_mod9().characters.at(std::size_t(ray_label)).is_principal();
}

std::string LambdaChar::id() const {
  std::string s = "l" + std::to_string(ray_label);
  if (norm(twist) != 1)
    s += "x" + std::to_string(twist.a) + "_" + std::to_string(twist.b);
  return s;
}

LambdaChar lambda_char(int ray_label, const EisensteinInt& twist) {
  const RayClassGroup& g = ray_class_mod9();
  if (ray_label < 0 || ray_label >= g.h9)
    throw InvalidRange("lambda_char: ray class label outside [0, h9)");
  if (g.exponent != 3)
    throw InvalidRange("lambda_char: ray class group mod 9 not of exponent 3");
  if (!is_primary(twist))
    throw InvalidRange("lambda_char: twist modulus not primary");
  LambdaChar l;
  l.ray_label = ray_label;
  l.twist = twist;
  return l;
}

/* ---------------- the statistic ---------------- */

std::complex<double> h_statistic(i64 Z, const EisensteinInt& r,
                                 const LambdaChar& lambda) {
  if (Z < 2) throw InvalidRange("h_statistic: Z < 2");
  if (!is_primary(r)) throw InvalidRange("h_statistic: r not primary");
  return h_values({Z}, r, lambda)[0];
}

HsumReport h_scan(i64 Z_min, i64 Z_max, int points, const EisensteinInt& r,
                  const LambdaChar& lambda) {
  if (Z_min < 2 || Z_min >= Z_max)
    throw InvalidRange("h_scan: need 2 <= Z_min < Z_max");
  if (!is_primary(r)) throw InvalidRange("h_scan: r not primary");
  std::vector<i64> zs;
  double l0 = std::log(double(Z_min)), l1 = std::log(double(Z_max));
  for (int k = 0; k < points; ++k) {
    double t = (points == 1) ? 0.0 : double(k) / double(points - 1);
    i64 z = llround(std::exp(l0 + t * (l1 - l0)));
    zs.push_back(std::min(Z_max, std::max(Z_min, z)));
  }
  zs.front() = Z_min;
  zs.back() = Z_max;
  std::sort(zs.begin(), zs.end());
  zs.erase(std::unique(zs.begin(), zs.end()), zs.end());
  if (i64(zs.size()) < 8)
    throw InvalidRange("h_scan: fewer than 8 distinct cutoffs");

  std::vector<cd> hs = h_values(zs, r, lambda);
  HsumReport rep;
  rep.r = r;
  rep.lambda_id = lambda.id();
  for (std::size_t i = 0; i < zs.size(); ++i)
    rep.grid.push_back({zs[i], hs[i]});

  // least squares on log |H| vs log Z, skipping empty partial sums
  std::vector<double> xs, ys;
  for (const HsumEntry& e : rep.grid) {
    double m = std::abs(e.value);
    if (m > 0.0) {
      xs.push_back(std::log(double(e.Z)));
      ys.push_back(std::log(m));
    }
  }
  std::size_t m = xs.size();
  rep.slope = 0.0;
  rep.slope_stderr = std::numeric_limits<double>::infinity();
  if (m >= 2) {
    double xbar = 0.0, ybar = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      xbar += xs[i];
      ybar += ys[i];
    }
    xbar /= double(m);
    ybar /= double(m);
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      sxx += (xs[i] - xbar) * (xs[i] - xbar);
      sxy += (xs[i] - xbar) * (ys[i] - ybar);
    }
    rep.slope = sxy / sxx;
    if (m >= 3) {
      double ss = 0.0;
      for (std::size_t i = 0; i < m; ++i) {
        double res = ys[i] - ybar - rep.slope * (xs[i] - xbar);
        ss += res * res;
      }
      rep.slope_stderr = std::sqrt(ss / double(m - 2) / sxx);
    }
  }
  return rep;
}

void save_hsum_csv(const std::string& path,
                   const std::vector<HsumReport>& reports) {
  std::ofstream f(path);
  if (!f) throw InvalidRange("save_hsum_csv: cannot open " + path);
  f << "# eisen hsum v1\n";
  f << "Z,r_a,r_b,lambda_id,re_h,im_h\n";
  char buf[64];
  auto put = [&](double x) {
    std::snprintf(buf, sizeof buf, "%.17g", x);
    f << buf;
  };
  for (const HsumReport& rep : reports)
    for (const HsumEntry& e : rep.grid) {
      f << e.Z << ',' << rep.r.a << ',' << rep.r.b << ',' << rep.lambda_id
        << ',';
      put(e.value.real());
      f << ',';
      put(e.value.imag());
      f << '\n';
    }
}

/* ---------------- Vaughan decomposition ---------------- */

VaughanReport vaughan_decompose(i64 Z, const EisensteinInt& r, i64 u,
                                const LambdaChar& lambda) {
  check_vaughan_args(Z, r, u, "vaughan_decompose");
  SqfData d = build_sqf(2 * Z, r, lambda);

  ComplexSum s0, s1, s2p, s2pp, s3, s4;
  for (const SqfEntry& ea : d.entries) {
    if (ea.pf.size() != 1) continue;  // Lambda supported on primes here
    i64 na = ea.norm;
    if (na > 2 * Z) break;
    for (const SqfEntry& eb : d.entries) {
      i64 nb = eb.norm;
      if (nb > 2 * Z / na) break;
      i64 nab = na * nb;
      EisensteinInt ab = mul(ea.n, eb.n);
      // c range: Z < na nb nc <= 2Z
      auto lo = std::upper_bound(d.norms.begin(), d.norms.end(), Z / nab);
      auto hi = std::upper_bound(d.norms.begin(), d.norms.end(), 2 * Z / nab);
      for (auto it = lo; it != hi; ++it) {
        const SqfEntry& ec = d.entries[std::size_t(it - d.norms.begin())];
        i64 nc = ec.norm;
        i64 nabc = nab * nc;
        if (nabc <= Z || nabc > 2 * Z) continue;
        auto g = d.gt.find(mul(ab, ec.n));
        if (g == d.gt.end()) continue;  // abc not square-free
        cd t = double(eb.mu) * ea.logn * g->second;
        i64 nbc = nb * nc;
        if (nbc <= u) s0.add(t);
        if (nb <= u) s1.add(t);
        if (nab <= u) s2p.add(t);
        if (na <= u && nb <= u && nab > u) s2pp.add(t);
        if (nb <= u && na > u && nbc > u) s3.add(t);
        if (na < nbc && nbc <= u) s4.add(t);
      }
    }
  }

  VaughanReport rep;
  rep.Z = Z;
  rep.u = u;
  rep.r = r;
  rep.lambda_id = lambda.id();
  rep.sigma0 = s0.value();
  rep.sigma1 = s1.value();
  rep.sigma2p = s2p.value();
  rep.sigma2pp = s2pp.value();
  rep.sigma3 = s3.value();
  rep.sigma4 = s4.value();

  cd resid = rep.sigma0 - rep.sigma1 + rep.sigma2p + rep.sigma2pp +
             rep.sigma3 - rep.sigma4;
  rep.identity_residual = std::abs(resid);
  double scale = 0.0;
  for (cd s : {rep.sigma0, rep.sigma1, rep.sigma2p, rep.sigma2pp, rep.sigma3,
               rep.sigma4})
    scale = std::max(scale, std::abs(s));
  if (rep.identity_residual > 1e-8 * (1.0 + scale))
    throw IdentityViolation("vaughan_decompose: five-term identity failed");

  // independent route: Sigma_0 must equal H(2Z) - H(Z), computed through
  // the O(p) prime evaluator rather than the factored Gauss sums above
  std::vector<cd> h = h_values({Z, 2 * Z}, r, lambda);
  if (std::abs(rep.sigma0 - (h[1] - h[0])) >
      1e-8 * (1.0 + std::abs(rep.sigma0)))
    throw IdentityViolation("vaughan_decompose: Sigma_0 != H(2Z) - H(Z)");
  return rep;
}

std::string vaughan_json(const VaughanReport& rep) {
  nlohmann::json j;
  j["Z"] = rep.Z;
  j["u"] = rep.u;
  j["r"] = {rep.r.a, rep.r.b};
  j["lambda_id"] = rep.lambda_id;
  auto pair = [](cd z) { return nlohmann::json::array({z.real(), z.imag()}); };
  j["sigma0"] = pair(rep.sigma0);
  j["sigma1"] = pair(rep.sigma1);
  j["sigma2p"] = pair(rep.sigma2p);
  j["sigma2pp"] = pair(rep.sigma2pp);
  j["sigma3"] = pair(rep.sigma3);
  j["sigma4"] = pair(rep.sigma4);
  j["identity_residual"] = rep.identity_residual;
  return j.dump();
}

/* ---------------- bilinear forms ---------------- */

BilinearForms bilinear_forms(i64 Z, const EisensteinInt& r, i64 u,
                             const LambdaChar& lambda) {
  check_vaughan_args(Z, r, u, "bilinear_forms");
  if ((__int128)u * u * u > Z)
    throw InvalidRange("bilinear_forms: u > Z^{1/3}");
  VaughanReport direct = vaughan_decompose(Z, r, u, lambda);
  SqfData d = build_sqf(2 * Z, r, lambda);

  ComplexSum s2pp, s3;
  for (const SqfEntry& ev : d.entries) {
    i64 nv = ev.norm;
    if (nv <= u) continue;
    if (nv > 2 * Z / (u + 1)) break;  // no w with N(w) > u fits
    /*
      A(v) = sum_{ab = v, a prime, N(a) <= u, N(b) <= u} Lambda(a)
             mu_K(b) gtilde(r, v): since v is square-free,
      mu_K(v / a) = -mu_K(v), so the coefficient in front of
      gtilde(r, v) collapses to -mu_K(v) sum_{a | v, N(a) <= u,
      N(v)/N(a) <= u} log N(a).
    */
    double acoef = 0.0;
    for (const EisensteinInt& p : ev.pf) {
      i64 np = norm(p);
      if (np <= u && nv / np <= u) acoef += std::log(double(np));
    }
    acoef *= -double(ev.mu);
    double ccoef = (ev.pf.size() == 1) ? ev.logn : 0.0;
    if (acoef == 0.0 && ccoef == 0.0) continue;
    cd gv = d.gt.at(ev.n);
    auto lo = std::upper_bound(d.norms.begin(), d.norms.end(),
                               std::max(u, Z / nv));
    auto hi = std::upper_bound(d.norms.begin(), d.norms.end(), 2 * Z / nv);
    for (auto it = lo; it != hi; ++it) {
      const SqfEntry& ew = d.entries[std::size_t(it - d.norms.begin())];
      i64 nw = ew.norm;
      i64 nvw = nv * nw;
      if (nvw <= Z || nvw > 2 * Z) continue;
      CubicValue chi = cubic_symbol_fast(ew.n, ev.n);
      if (chi.zero) continue;  // (v, w) != 1: the product is not square-free
      cd base = gv * chi.conj().to_complex() * d.gt.at(ew.n);
      if (acoef != 0.0) s2pp.add(acoef * base);
      if (ccoef != 0.0) {
        // D(w) = sum_{bc = w, N(b) <= u} mu_K(b) gtilde(r, w)
        int dcoef = 0;
        for (const auto& [b, mu] : sqfree_divisors(ew.pf))
          if (norm(b) <= u) dcoef += mu;
        if (dcoef != 0) s3.add(ccoef * double(dcoef) * base);
      }
    }
  }

  BilinearForms out{s2pp.value(), s3.value()};
  if (std::abs(out.sigma2pp - direct.sigma2pp) >
      1e-8 * (1.0 + std::abs(out.sigma2pp)))
    throw IdentityViolation("bilinear_forms: Sigma_2'' mismatch");
  if (std::abs(out.sigma3 - direct.sigma3) >
      1e-8 * (1.0 + std::abs(out.sigma3)))
    throw IdentityViolation("bilinear_forms: Sigma_3 mismatch");
  return out;
}

/* ---------------- Type I sums ---------------- */

std::complex<double> type1_sum_F(i64 z, const EisensteinInt& a,
                                 const EisensteinInt& r,
                                 const LambdaChar& lambda) {
  if (z < 1) throw InvalidRange("type1_sum_F: z < 1");
  if (!is_primary(r)) throw InvalidRange("type1_sum_F: r not primary");
  if (!is_primary(a) || !is_squarefree(a))
    throw InvalidRange("type1_sum_F: a not square-free primary");
  if (!coprime(a, r)) throw InvalidRange("type1_sum_F: (a, r) != 1");
  i64 na = norm(a);
  if (na > z) return {0.0, 0.0};
  ComplexSum acc;
  for (const EisensteinInt& m : enumerate_primary(z / na)) {
    // b = am contributes only when square-free: g(r, b) = 0 otherwise
    // since (b, r) = 1
    if (!is_squarefree(m) || !coprime(m, a)) continue;
    if (!coprime(m, r)) continue;
    EisensteinInt b = mul(a, m);
    cd lam = lambda(b);
    if (lam == cd{0.0, 0.0}) continue;
    acc.add(gauss_fast(r, b).value * lam / std::sqrt(double(norm(b))));
  }
  return acc.value();
}

/* ---------------- generating functions ---------------- */

PsiTruncation psi_truncated(const EisensteinInt& r, const LambdaChar& lambda,
                            std::complex<double> s, i64 B) {
  if (B < 1) throw InvalidRange("psi_truncated: B < 1");
  if (norm(r) == 0) throw ZeroInput("psi_truncated: r = 0");
  ComplexSum acc;
  for (const EisensteinInt& b : enumerate_primary(B)) {
    cd lam = lambda(b);
    if (lam == cd{0.0, 0.0}) continue;
    cd g = gauss_fast(r, b).value;
    if (g == cd{0.0, 0.0}) continue;
    acc.add(lam * g * std::exp(-s * std::log(double(norm(b)))));
  }
  PsiTruncation out;
  out.value = acc.value();
  double sigma = s.real();
  if (sigma > 2.5)
    out.tail_bound = 2.0 * std::pow(double(B), 1.5 - sigma) +
                     2.0 * std::pow(double(B), 2.5 - sigma) / (sigma - 2.5);
  else
    out.tail_bound = std::numeric_limits<double>::infinity();
  return out;
}

ShiftDecomposition shift_decompose(const EisensteinInt& r) {
  if (!is_primary(r)) throw InvalidRange("shift_decompose: r not primary");
  SquarefreeSplit s = squarefree_split(r);
  if (s.lambda_exp != 0)
    throw IdentityViolation("shift_decompose: lambda part of a primary r");
  EisensteinInt back = mul(s.n1, mul(mul(s.n2, s.n2),
                                     mul(s.n3, mul(s.n3, s.n3))));
  back = mul(s.unit, back);
  if (back != r)
    throw IdentityViolation("shift_decompose: recomposition mismatch");
  ShiftDecomposition out;
  out.r = r;
  out.r1 = s.n1;
  out.r2 = s.n2;
  out.r3 = s.n3;
  out.r3_star = s.r3_star;
  return out;
}

double verify_ha_identity(const EisensteinInt& a, const EisensteinInt& r,
                          const LambdaChar& lambda, i64 B) {
  if (B < 1) throw InvalidRange("verify_ha_identity: B < 1");
  if (!is_primary(a) || !is_squarefree(a))
    throw InvalidRange("verify_ha_identity: a not square-free primary");
  if (!is_primary(r)) throw InvalidRange("verify_ha_identity: r not primary");
  if (!coprime(a, r)) throw InvalidRange("verify_ha_identity: (a, r) != 1");

  // left side: coefficients of sum_{a | b, (b, r) = 1} lambda(b) g(r, b)
  Series lhs(std::size_t(B) + 1);
  i64 na = norm(a);
  if (na <= B) {
    for (const EisensteinInt& m : enumerate_primary(B / na)) {
      if (!coprime(m, r)) continue;
      EisensteinInt b = mul(a, m);
      cd lam = lambda(b);
      if (lam == cd{0.0, 0.0}) continue;
      lhs[std::size_t(norm(b))] += lam * gauss_fast(r, b).value;
    }
  }

  // right side: the factored form, every Dirichlet factor truncated at B
  Series rhs(std::size_t(B) + 1);
  if (na <= B) {
    ShiftDecomposition sd = shift_decompose(r);
    EisensteinInt ar1r2 = mul(a, mul(sd.r1, sd.r2));
    EisensteinInt ar1r22 = mul(ar1r2, sd.r2);

    Series acc(std::size_t(B) + 1);
    acc[std::size_t(na)] = gauss_fast(r, a).value * lambda(a);
    for (const PrimePower& pp : factor(ar1r2).factors)
      acc = series_mul(acc, euler_inv_factor(pp.prime, lambda, B), B);

    std::map<EisensteinInt, Series> psi_cache;
    auto psi_series = [&](const EisensteinInt& m) -> const Series& {
      auto it = psi_cache.find(m);
      if (it != psi_cache.end()) return it->second;
      Series ps(std::size_t(B) + 1);
      for (const EisensteinInt& b : enumerate_primary(B)) {
        cd lam = lambda(b);
        if (lam == cd{0.0, 0.0}) continue;
        ps[std::size_t(norm(b))] += lam * gauss_fast(m, b).value;
      }
      return psi_cache.emplace(m, std::move(ps)).first->second;
    };

    std::vector<EisensteinInt> star_pf;
    for (const PrimePower& pp : factor(sd.r3_star).factors)
      star_pf.push_back(pp.prime);

    Series dsum(std::size_t(B) + 1);
    for (const auto& [dd, mud] : sqfree_divisors(star_pf)) {
      i64 nd = norm(dd);
      if (nd > B) continue;
      Series termd(std::size_t(B) + 1);
      termd[std::size_t(nd)] =
          double(mud) * lambda(dd) * gauss_fast(ar1r22, dd).value;
      for (const PrimePower& pp : factor(dd).factors)
        termd = series_mul(termd, euler_inv_factor(pp.prime, lambda, B), B);

      EisensteinInt dar1 = mul(dd, mul(a, sd.r1));
      EisensteinInt m_all = mul(dd, ar1r22);
      std::vector<EisensteinInt> dar1_pf;
      for (const PrimePower& pp : factor(dar1).factors)
        dar1_pf.push_back(pp.prime);

      Series csum(std::size_t(B) + 1);
      for (const auto& [c, muc] : sqfree_divisors(dar1_pf)) {
        i64 nc = norm(c);
        if (nc > B / nc) continue;  // N(c)^2 beyond the window
        EisensteinInt mdiv = exact_div(m_all, c);
        Series termc(std::size_t(B) + 1);
        cd lamc = lambda(c);
        termc[std::size_t(nc * nc)] =
            double(muc) * double(nc) * lamc * lamc *
            std::conj(gauss_fast(mdiv, c).value);
        Series piece = series_mul(termc, psi_series(mdiv), B);
        for (i64 n = 1; n <= B; ++n) csum[std::size_t(n)] += piece[std::size_t(n)];
      }
      Series piece = series_mul(termd, csum, B);
      for (i64 n = 1; n <= B; ++n) dsum[std::size_t(n)] += piece[std::size_t(n)];
    }
    rhs = series_mul(acc, dsum, B);
  }

  double worst = 0.0;
  for (i64 n = 1; n <= B; ++n)
    worst = std::max(worst,
                     std::abs(lhs[std::size_t(n)] - rhs[std::size_t(n)]));
  return worst;
}

/* ---------------- balancing helper ---------------- */

BalanceResult balance_bound(
    const std::vector<std::pair<double, double>>& terms_A,
    const std::vector<std::pair<double, double>>& terms_B, double H1,
    double H2) {
  if (terms_A.empty() || terms_B.empty())
    throw InvalidRange("balance_bound: empty term list");
  for (const auto& [c, e] : terms_A)
    if (!(c > 0.0) || !(e > 0.0) || !std::isfinite(c) || !std::isfinite(e))
      throw InvalidRange("balance_bound: nonpositive A term");
  for (const auto& [c, e] : terms_B)
    if (!(c > 0.0) || !(e > 0.0) || !std::isfinite(c) || !std::isfinite(e))
      throw InvalidRange("balance_bound: nonpositive B term");
  if (!(H1 > 0.0) || !(H2 >= H1) || !std::isfinite(H2))
    throw InvalidRange("balance_bound: need 0 < H1 <= H2");

  auto L = [&](double lh) {
    NeumaierSum s;
    for (const auto& [c, e] : terms_A) s.add(c * std::exp(e * lh));
    for (const auto& [c, e] : terms_B) s.add(c * std::exp(-e * lh));
    return s.value();
  };

  // L is a sum of exponentials in log H, hence convex there: a coarse
  // geometric grid brackets the minimum, ternary search pins it down
  double l1 = std::log(H1), l2 = std::log(H2);
  const int K = 512;
  double best = l1, bestv = L(l1);
  for (int k = 1; k <= K; ++k) {
    double lh = l1 + (l2 - l1) * double(k) / double(K);
    double v = L(lh);
    if (v < bestv) {
      bestv = v;
      best = lh;
    }
  }
  double step = (l2 - l1) / double(K);
  double lo = std::max(l1, best - step), hi = std::min(l2, best + step);
  for (int it = 0; it < 200 && hi - lo > 1e-14 * (1.0 + std::abs(lo)); ++it) {
    double m1 = lo + (hi - lo) / 3.0, m2 = hi - (hi - lo) / 3.0;
    if (L(m1) <= L(m2))
      hi = m2;
    else
      lo = m1;
  }
  double lstar = 0.5 * (lo + hi);
  if (L(lstar) < bestv) {
    bestv = L(lstar);
    best = lstar;
  }

  NeumaierSum b;
  for (const auto& [Ai, ai] : terms_A)
    for (const auto& [Bj, bj] : terms_B)
      b.add(std::exp((bj * std::log(Ai) + ai * std::log(Bj)) / (ai + bj)));
  for (const auto& [Ai, ai] : terms_A) b.add(Ai * std::exp(ai * l1));
  for (const auto& [Bj, bj] : terms_B) b.add(Bj * std::exp(-bj * l2));

  BalanceResult out;
  out.h_star = std::exp(best);
  out.minimum = bestv;
  out.bound = b.value();
  return out;
}

}  // namespace eisen
