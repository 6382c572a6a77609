#include "eisen/gauss.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <tuple>
#include <vector>

#include "eisen/factor.hpp"
#include "eisen/summation.hpp"

namespace eisen {
namespace {

constexpr double kTau = 6.2831853071795864769252867665590;

std::complex<double> omega_c(int e) { return CubicValue::Root(e).to_complex(); }

std::complex<double> e_frac(i64 num, i64 den) {
  double x = kTau * (double(num) / double(den));
  return {std::cos(x), std::sin(x)};
}

bool norm_lex_less(const EisensteinInt& u, const EisensteinInt& v) {
  i64 nu = norm(u), nv = norm(v);
  if (nu != nv) return nu < nv;
  return u < v;
}

// Complete residue system of n in HNF-box coordinates, norm-ascending.
std::vector<EisensteinInt> sorted_residues(const EisensteinInt& n) {
  ResidueBox box = residue_box(n);
  std::vector<EisensteinInt> out;
  out.reserve(std::size_t(box.count()));
  for (i64 x = 0; x < box.f; ++x)
    for (i64 y = 0; y < box.g; ++y) out.push_back({x, y});
  std::sort(out.begin(), out.end(), norm_lex_less);
  return out;
}

// All z != 0 with N(z) <= bound, norm-ascending.
std::vector<EisensteinInt> lattice_by_norm(i64 bound) {
  std::vector<EisensteinInt> out;
  i64 A = i64(std::floor(std::sqrt(4.0 * double(bound) / 3.0))) + 1;
  for (i64 a = -A; a <= A; ++a)
    for (i64 b = -A; b <= A; ++b) {
      if (a == 0 && b == 0) continue;
      if (norm({a, b}) <= bound) out.push_back({a, b});
    }
  std::sort(out.begin(), out.end(), norm_lex_less);
  return out;
}

i64 find_generator(i64 p) {
  auto fac = factor_rational(p - 1);
  for (i64 g = 2;; ++g) {
    bool ok = true;
    for (const auto& [q, e] : fac) {
      (void)e;
      if (powmod_i64(g, (p - 1) / q, p) == 1) {
        ok = false;
        break;
      }
    }
    if (ok) return g;
  }
}

/*
  chi_pi as a lookup over the residue field of a primary prime pi.
  Split pi (norm p): residues are the integers 0..p-1 under w = -a/b mod p;
  a generator orbit stamps each unit with its chi-exponent.  Inert pi = -q
  (norm q^2): residues are x + yw, 0 <= x,y < q; chi is trivial on F_q^* so
  it is constant on the q+1 cosets c*(x + w) and c*1, and one symbol per
  coset rep fills the table.  Entry 3 marks non-units.
*/
struct CharTable {
  i64 p = 0;   // split: the rational prime; inert: q*q
  i64 q = 0;   // inert only, else 0
  i64 wp = 0;  // split: integer image of w
  std::vector<unsigned char> cls;

  // chi-exponent of z, or -1 when pi | z
  int exponent(const EisensteinInt& z) const {
    unsigned char c;
    if (q == 0) {
      i64 x = z.a % p, y = z.b % p;
      if (x < 0) x += p;
      if (y < 0) y += p;
      c = cls[std::size_t((x + y * wp) % p)];
    } else {
      i64 x = z.a % q, y = z.b % q;
      if (x < 0) x += q;
      if (y < 0) y += q;
      c = cls[std::size_t(x + q * y)];
    }
    return c == 3 ? -1 : int(c);
  }
};

CharTable build_char_table(const EisensteinInt& pi) {
  CharTable T;
  i64 P = norm(pi);
  if (pi.b == 0) {
    i64 q = -pi.a;  // primary inert primes are -q with q = 2 mod 3
    T.q = q;
    T.p = q * q;
    T.cls.assign(std::size_t(q * q), 3);
    for (i64 c = 1; c < q; ++c) T.cls[std::size_t(c)] = 0;
    for (i64 x = 0; x < q; ++x) {
      CubicValue v = cubic_symbol_prime({x, 1}, pi);
      for (i64 c = 1; c < q; ++c)
        T.cls[std::size_t((c * x) % q + q * c)] = (unsigned char)v.e;
    }
    return T;
  }
  i64 p = P;
  T.p = p;
  i64 b = pi.b % p;
  if (b < 0) b += p;
  i64 a = pi.a % p;
  if (a < 0) a += p;
  T.wp = (p - a) % p * powmod_i64(b, p - 2, p) % p;
  i64 g = find_generator(p);
  CubicValue vg = cubic_symbol_prime({g, 0}, pi);
  if (vg.zero || vg.e == 0)
    throw InvalidRange("char table: generator is a cube, modulus not prime?");
  int eg = vg.e;
  T.cls.assign(std::size_t(p), 3);
  i64 x = 1;
  int k3 = 0;
  for (i64 k = 0; k + 1 < p; ++k) {
    T.cls[std::size_t(x)] = (unsigned char)((eg * k3) % 3);
    x = i64((__int128)x * g % p);
    if (++k3 == 3) k3 = 0;
  }
  return T;
}

// chi_n evaluated through the prime tables of n's factorization.
struct CharEval {
  std::vector<std::pair<CharTable, int>> parts;  // (table, exponent mod 3)

  explicit CharEval(const Factorization& fac) {
    for (const PrimePower& pp : fac.factors)
      if (pp.exp % 3 != 0)
        parts.emplace_back(build_char_table(pp.prime), pp.exp % 3);
      else
        parts.emplace_back(build_char_table(pp.prime), 0);
  }
  // exponent of chi_n(z), or -1 when gcd(z, n) != 1.  Cube factors
  // contribute exponent 0 but still knock out their multiples.
  int exponent(const EisensteinInt& z) const {
    int e = 0;
    for (const auto& [tab, k] : parts) {
      int c = tab.exponent(z);
      if (c < 0) return -1;
      e += k * c;
    }
    return e % 3;
  }
};

void check_modulus(const EisensteinInt& n, const char* who) {
  if (norm(n) == 0) throw ZeroModulus(std::string(who) + ": zero modulus");
  if (norm(n) % 3 == 0)
    throw ModulusNotCoprimeToThree(std::string(who) +
                                   ": modulus shares a factor with 3");
  if (!is_primary(n))
    throw InvalidRange(std::string(who) + ": modulus must be primary");
}

}  // namespace

GaussSum gauss_direct(const EisensteinInt& r, const EisensteinInt& n,
                      i64 cap) {
  if (norm(r) == 0) throw ZeroInput("gauss_direct: r = 0");
  check_modulus(n, "gauss_direct");
  i64 N = norm(n);
  GaussSum out{r, n, {1.0, 0.0}, std::nullopt};
  if (N == 1) {
    out.exact_norm_sq = 1;
    return out;
  }
  if (N > cap) throw CapExceeded("gauss_direct: N(n) above cap");
  Factorization fac = factor(n);
  CharEval chi(fac);
  EisensteinInt cn = conj(n);
  ComplexSum acc;
  for (const EisensteinInt& al : sorted_residues(n)) {
    int e = chi.exponent(al);
    if (e < 0) continue;
    i64 ph = trace(mul(mul(r, al), cn)) % N;
    if (ph < 0) ph += N;
    acc.add(omega_c(e) * e_frac(ph, N));
  }
  out.value = acc.value();
  bool sf = true;
  for (const PrimePower& pp : fac.factors) sf = sf && pp.exp == 1;
  if (sf && coprime(r, n)) out.exact_norm_sq = N;
  return out;
}

std::complex<double> gauss_prime_power(const EisensteinInt& r,
                                       const EisensteinInt& pi, int k,
                                       i64 cap) {
  if (norm(r) == 0) throw ZeroInput("gauss_prime_power: r = 0");
  if (k <= 0) throw InvalidRange("gauss_prime_power: k must be positive");
  check_modulus(pi, "gauss_prime_power");
  int j = 0;
  EisensteinInt rr = r;
  while (divides(pi, rr)) {
    rr = exact_div(rr, pi);
    ++j;
  }
  double p = double(norm(pi));
  if (k == j + 1) {
    double pj = std::pow(p, j);
    if (k % 3 == 0) return {-pj, 0.0};
    CubicValue c = cubic_symbol_fast(rr, pi);
    std::complex<double> grr =
        omega_c((3 - c.e) % 3) * gauss_direct(EIS_ONE, pi, cap).value;
    return pj * (k % 3 == 1 ? grr : std::conj(grr));
  }
  if (k % 3 == 0 && k <= j) return {std::pow(p, k - 1) * (p - 1.0), 0.0};
  return {0.0, 0.0};
}

GaussSum gauss_fast(const EisensteinInt& r, const EisensteinInt& n, i64 cap) {
  if (norm(r) == 0) throw ZeroInput("gauss_fast: r = 0");
  check_modulus(n, "gauss_fast");
  GaussSum out{r, n, {1.0, 0.0}, std::nullopt};
  if (norm(n) == 1) {
    out.exact_norm_sq = 1;
    return out;
  }
  Factorization fac = factor(n);
  std::complex<double> acc{1.0, 0.0};
  EisensteinInt rshift = r;
  for (const PrimePower& pp : fac.factors) {
    acc *= gauss_prime_power(rshift, pp.prime, pp.exp, cap);
    for (int i = 0; i < pp.exp; ++i) rshift = mul(rshift, pp.prime);
  }
  out.value = acc;
  bool sf = true;
  for (const PrimePower& pp : fac.factors) sf = sf && pp.exp == 1;
  if (sf && coprime(r, n)) out.exact_norm_sq = norm(n);
  return out;
}

std::complex<double> gauss_prime(const EisensteinInt& r,
                                 const EisensteinInt& pi) {
  if (norm(r) == 0) throw ZeroInput("gauss_prime: r = 0");
  check_modulus(pi, "gauss_prime");
  i64 P = norm(pi);
  if (pi.b == 0) {
    i64 q = -pi.a;
    {
      auto fq = factor_rational(q);
      if (fq.size() != 1 || fq[0].second != 1)
        throw InvalidRange("gauss_prime: modulus not prime");
    }
    if (q == 2) return gauss_direct(r, pi).value;
    CubicValue cr = cubic_symbol_fast(r, pi);
    if (cr.zero) return {0.0, 0.0};  // pi | r: no k = j+1 escape at k = 1
    CubicValue cx = cubic_symbol_prime({(q + 1) / 2, 1}, pi);
    return double(q) * omega_c((cx.e + 3 - cr.e) % 3);
  }
  {
    auto fp = factor_rational(P);
    if (fp.size() != 1 || fp[0].second != 1)
      throw InvalidRange("gauss_prime: modulus not prime");
  }
  CharTable T = build_char_table(pi);
  i64 A = trace(mul(r, conj(pi))) % P;
  if (A < 0) A += P;
  if (A == 0) return {0.0, 0.0};  // exactly when pi | r
  ComplexSum S[3];
  std::complex<double> rot = e_frac(1, P);
  std::complex<double> cur{1.0, 0.0};
  for (i64 t = 1; t < P; ++t) {
    if ((t & 4095) == 0)
      cur = e_frac(t, P);  // renormalize the rotation drift
    else
      cur *= rot;
    S[T.cls[std::size_t(t)]].add(cur);
  }
  std::complex<double> total = S[0].value() + omega_c(1) * S[1].value() +
                               omega_c(2) * S[2].value();
  int ea = T.cls[std::size_t(A)];
  return omega_c((3 - ea) % 3) * total;
}

RootNumber root_number(const CharacterSpec& chi) {
  if (!chi.is_primitive || norm(chi.conductor) == 1)
    throw NotPrimitive("root_number: character is not primitive");
  const EisensteinInt& f = chi.conductor;
  i64 Nf = norm(f);
  CharEval ev(chi.factorization);
  EisensteinInt cf = conj(f);
  ComplexSum acc;
  for (const EisensteinInt& al : sorted_residues(f)) {
    int e = ev.exponent(al);
    if (e < 0) continue;
    i64 ph = trace(mul(al, cf)) % Nf;
    if (ph < 0) ph += Nf;
    acc.add(omega_c(e) * e_frac(ph, Nf));
  }
  int e3 = ev.exponent(EIS_SQRT_M3);
  return {chi, omega_c(e3) * acc.value()};
}

std::complex<double> root_number_direct(const EisensteinInt& n, int power,
                                        i64 cap) {
  check_modulus(n, "root_number_direct");
  if (power % 3 == 0)
    throw InvalidRange("root_number_direct: power must be a non-cube");
  i64 N = norm(n);
  if (N > cap) throw CapExceeded("root_number_direct: N(n) above cap");
  EisensteinInt m = mul(n, EIS_SQRT_M3);
  i64 Nm = norm(m);  // 3 N(n)
  EisensteinInt cm = conj(m);
  CharEval ev(factor(n));
  int pw = power % 3;
  if (pw < 0) pw += 3;
  ComplexSum acc;
  for (const EisensteinInt& al : sorted_residues(n)) {
    int e = ev.exponent(al);
    if (e < 0) continue;
    i64 ph = trace(mul(al, cm)) % Nm;
    if (ph < 0) ph += Nm;
    acc.add(omega_c((e * pw) % 3) * e_frac(ph, Nm));
  }
  return acc.value();
}

namespace {

/*
  what(t) = int int w(N(x+yw)) e(-ty) dx dy.  Writing u = x - y/2 turns the
  norm into u^2 + 3y^2/4, so the transform is the cosine integral of
  V(y) = int w(u^2 + 3y^2/4) du.  V is tabulated on a Simpson grid wide
  enough that w has dropped below 1e-18 of its scale at the edge.
*/
struct WhatTable {
  double ymax = 0.0, h = 0.0;
  int ny = 0;
  std::vector<double> V;  // V(i h), i = 0..ny

  // Composite Boole rule: the h^6 error term keeps the oscillatory noise
  // (which grows like (2 pi t)^6 h^6) far below the 1e-14 decay floor the
  // truncation logic relies on.
  double eval(double t) const {
    NeumaierSum s;
    double c0 = kTau * t;
    auto f = [&](int i) { return V[std::size_t(i)] * std::cos(c0 * (i * h)); };
    for (int b = 0; b + 4 <= ny; b += 4)
      s.add(7.0 * (f(b) + f(b + 4)) + 32.0 * (f(b + 1) + f(b + 3)) +
            12.0 * f(b + 2));
    return 2.0 * (2.0 * h / 45.0) * s.value();
  }
};

std::shared_ptr<const WhatTable> what_table(const WeightFunction& w) {
  static std::mutex mu;
  static std::map<std::tuple<std::string, double, double>,
                  std::shared_ptr<const WhatTable>>
      cache;
  std::tuple<std::string, double, double> key{w.id, w.param, w.scale};
  {
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
  }
  double sb = w.support_bound();
  double U = std::sqrt(sb) * 1.02 + 0.02;
  auto tab = std::make_shared<WhatTable>();
  tab->ymax = std::sqrt(4.0 * sb / 3.0) * 1.02 + 0.02;
  tab->ny = 65536;
  tab->h = tab->ymax / tab->ny;
  tab->V.resize(std::size_t(tab->ny) + 1);
  const int nu = 2048;
  const double hu = U / nu;
  for (int i = 0; i <= tab->ny; ++i) {
    double c = 0.75 * (i * tab->h) * (i * tab->h);
    NeumaierSum s;
    s.add(w(c));
    for (int k = 1; k < nu; ++k) {
      double u = k * hu;
      s.add((k % 2 ? 4.0 : 2.0) * w(u * u + c));
    }
    s.add(w(U * U + c));
    tab->V[std::size_t(i)] = 2.0 * (hu / 3.0) * s.value();
  }
  std::lock_guard<std::mutex> lock(mu);
  cache.emplace(key, tab);
  return tab;
}

}  // namespace

double poisson_check(const CharacterSpec& chi, const WeightFunction& w,
                     double Y) {
  if (Y <= 0.0) throw InvalidRange("poisson_check: Y must be positive");
  if (!chi.is_primitive || norm(chi.conductor) == 1)
    throw NotPrimitive("poisson_check: character is not primitive");
  i64 Nf = norm(chi.conductor);
  CharEval ev(chi.factorization);
  auto tab = what_table(w);

  // Locate where the transform has decayed for good: twenty consecutive
  // quarter-steps below 1e-14 of the weight scale.
  double floor_mag = 1e-14 * std::max(1.0, std::fabs(w.scale));
  double tcut = -1.0;
  int run = 0;
  for (double t = 2.0; t <= 60.0; t += 0.25) {
    if (std::fabs(tab->eval(t)) < floor_mag) {
      if (++run >= 20) {
        tcut = t - 4.75;
        break;
      }
    } else {
      run = 0;
    }
  }
  if (tcut < 0.0)
    throw QuadratureFailure("poisson_check: transform tail does not decay");

  ComplexSum lhs;
  i64 nmax_l = i64(std::ceil(Y * w.support_bound()));
  std::size_t count_l = 0;
  for (const EisensteinInt& z : lattice_by_norm(nmax_l)) {
    int e = ev.exponent(z);
    if (e < 0) continue;
    lhs.add(omega_c(e) * w(double(norm(z)) / Y));
    ++count_l;
  }

  std::complex<double> wbar = std::conj(root_number(chi).value);
  i64 nmax_r = std::max<i64>(1, i64(std::ceil(tcut * tcut * double(Nf) / Y)));
  std::map<i64, double> memo;
  ComplexSum rhs;
  for (const EisensteinInt& z : lattice_by_norm(nmax_r)) {
    int e = ev.exponent(z);
    if (e < 0) continue;
    i64 nz = norm(z);
    auto it = memo.find(nz);
    double wh;
    if (it != memo.end()) {
      wh = it->second;
    } else {
      wh = tab->eval(std::sqrt(Y * double(nz) / double(Nf)));
      memo.emplace(nz, wh);
    }
    rhs.add(omega_c((3 - e) % 3) * wh);
  }
  std::complex<double> lhs_v = lhs.value();
  std::complex<double> rhs_v = (Y / wbar) * rhs.value();

  // Tail audit: worst sampled transform magnitude past the cut, times the
  // lattice count out to 4x the truncation norm.
  double m2 = 0.0;
  for (double t = tcut; t <= 2.0 * tcut; t += 0.25)
    m2 = std::max(m2, std::fabs(tab->eval(t)));
  double tail = m2 * 3.6276 * 3.0 * double(nmax_r) * Y / std::abs(wbar) +
                double(count_l) * 1e-18 * std::max(1.0, std::fabs(w.scale));
  if (tail > 1e-7 * std::max(1.0, std::abs(lhs_v)))
    throw QuadratureFailure("poisson_check: truncation tail above budget");

  return std::abs(lhs_v - rhs_v);
}

}  // namespace eisen
