#include "eisen/factor.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>

namespace eisen {
namespace {

// Smallest-prime-factor sieve, grown geometrically on demand.
std::mutex spf_mutex;
std::vector<i64> spf_table;  // spf_table[i] = least prime factor of i

void ensure_spf(i64 bound) {
  if (static_cast<i64>(spf_table.size()) > bound) return;
  i64 n = std::max<i64>(bound + 1, 2 * spf_table.size());
  n = std::max<i64>(n, 1 << 16);
  spf_table.assign(n, 0);
  for (i64 i = 2; i < n; ++i) {
    if (spf_table[i] != 0) continue;
    for (i64 j = i; j < n; j += i)
      if (spf_table[j] == 0) spf_table[j] = i;
  }
}

i64 mulmod(i64 a, i64 b, i64 p) {
  return static_cast<i64>(static_cast<i128>(a) * b % p);
}

}  // namespace

i64 powmod_i64(i64 x, i64 e, i64 p) {
  i64 r = 1 % p;
  x %= p;
  if (x < 0) x += p;
  while (e > 0) {
    if (e & 1) r = mulmod(r, x, p);
    x = mulmod(x, x, p);
    e >>= 1;
  }
  return r;
}

std::vector<std::pair<i64, int>> factor_rational(i64 n) {
  if (n < 1) throw InvalidRange("factor_rational: n < 1");
  std::vector<std::pair<i64, int>> out;
  if (n < (i64(1) << 27)) {
    std::lock_guard<std::mutex> lk(spf_mutex);
    ensure_spf(n);
    while (n > 1) {
      i64 p = spf_table[n];
      int e = 0;
      while (n % p == 0) {
        n /= p;
        ++e;
      }
      out.push_back({p, e});
    }
    return out;
  }
  // Rare large arguments: trial division, so the sieve never has to scale
  // with the largest norm seen.
  for (i64 d = 2; d * d <= n; ++d) {
    if (n % d) continue;
    int e = 0;
    while (n % d == 0) {
      n /= d;
      ++e;
    }
    out.push_back({d, e});
  }
  if (n > 1) out.push_back({n, 1});
  return out;
}

i64 sqrt_mod(i64 a, i64 p) {
  a %= p;
  if (a < 0) a += p;
  if (a == 0) return 0;
  if (p == 2) return a;
  if (powmod_i64(a, (p - 1) / 2, p) != 1)
    throw InvalidRange("sqrt_mod: non-residue");
  if (p % 4 == 3) {
    i64 r = powmod_i64(a, (p + 1) / 4, p);
    return std::min(r, p - r);
  }
  // Tonelli-Shanks
  i64 q = p - 1;
  int s = 0;
  while (q % 2 == 0) {
    q /= 2;
    ++s;
  }
  i64 z = 2;
  while (powmod_i64(z, (p - 1) / 2, p) != p - 1) ++z;
  i64 m = s;
  i64 c = powmod_i64(z, q, p);
  i64 t = powmod_i64(a, q, p);
  i64 r = powmod_i64(a, (q + 1) / 2, p);
  while (t != 1) {
    i64 t2 = t;
    int i = 0;
    while (t2 != 1) {
      t2 = mulmod(t2, t2, p);
      ++i;
    }
    i64 b = c;
    for (i64 j = 0; j < m - i - 1; ++j) b = mulmod(b, b, p);
    m = i;
    c = mulmod(b, b, p);
    t = mulmod(t, c, p);
    r = mulmod(r, b, p);
  }
  return std::min(r, p - r);
}

EisensteinInt split_prime_above(i64 p) {
  if (p % 3 != 1) throw InvalidRange("split_prime_above: p != 1 mod 3");
  // w satisfies w^2 + w + 1 = 0 mod p, i.e. w = (-1 + sqrt(-3)) / 2.
  i64 s = sqrt_mod(p - 3, p);
  i64 w = mulmod(s - 1 + p, (p + 1) / 2, p);
  EisensteinInt pi = gcd(EisensteinInt{p, 0}, EisensteinInt{w, -1});
  if (norm(pi) != p) throw InvalidRange("split_prime_above: bad gcd");
  EisensteinInt pib = primary_associate(conj(pi)).primary;
  return std::min(pi, pib);
}

Factorization factor(const EisensteinInt& n) {
  i64 nn = norm(n);
  if (nn == 0) throw ZeroInput("factor of zero");
  Factorization f;
  EisensteinInt core = n;
  while (norm(core) % 3 == 0) {
    core = exact_div(core, EIS_LAMBDA);
    ++f.lambda_exp;
  }
  i64 nc = norm(core);
  for (auto [p, e] : factor_rational(nc)) {
    if (p % 3 == 2) {
      // inert: p stays prime, norm p^2, exponent e/2; -p is primary.
      f.factors.push_back({EisensteinInt{-p, 0}, e / 2});
      for (int k = 0; k < e / 2; ++k)
        core = exact_div(core, EisensteinInt{-p, 0});
    } else {
      EisensteinInt pi = split_prime_above(p);
      EisensteinInt pib = primary_associate(conj(pi)).primary;
      int e1 = 0;
      while (divides(pi, core)) {
        core = exact_div(core, pi);
        ++e1;
      }
      int e2 = e - e1;
      if (e1 > 0) f.factors.push_back({pi, e1});
      if (e2 > 0) {
        f.factors.push_back({pib, e2});
        for (int k = 0; k < e2; ++k) core = exact_div(core, pib);
      }
    }
  }
  if (norm(core) != 1) throw InvalidRange("factor: leftover non-unit");
  f.unit = core;
  std::sort(f.factors.begin(), f.factors.end(),
            [](const PrimePower& x, const PrimePower& y) {
              i64 nx = norm(x.prime), ny = norm(y.prime);
              return nx != ny ? nx < ny : x.prime < y.prime;
            });
  return f;
}

EisensteinInt recompose(const Factorization& f) {
  EisensteinInt out = f.unit;
  for (int k = 0; k < f.lambda_exp; ++k) out = mul(out, EIS_LAMBDA);
  for (const auto& pp : f.factors)
    for (int k = 0; k < pp.exp; ++k) out = mul(out, pp.prime);
  return out;
}

int moebius(const Factorization& f) {
  if (f.lambda_exp > 0) throw NotCoprimeToThree("moebius: lambda divides");
  for (const auto& pp : f.factors)
    if (pp.exp > 1) return 0;
  return f.factors.size() % 2 == 0 ? 1 : -1;
}

int moebius(const EisensteinInt& n) {
  i64 nn = norm(n);
  if (nn == 0) throw ZeroInput("moebius of zero");
  if (nn % 3 == 0) throw NotCoprimeToThree("moebius: 3 | norm");
  return moebius(factor(n));
}

double von_mangoldt(const Factorization& f) {
  if (f.lambda_exp > 0) throw NotCoprimeToThree("von_mangoldt: lambda divides");
  if (f.factors.size() != 1) return 0.0;
  return std::log(static_cast<double>(norm(f.factors[0].prime)));
}

double von_mangoldt(const EisensteinInt& n) {
  i64 nn = norm(n);
  if (nn == 0) throw ZeroInput("von_mangoldt of zero");
  if (nn % 3 == 0) throw NotCoprimeToThree("von_mangoldt: 3 | norm");
  return von_mangoldt(factor(n));
}

bool is_squarefree(const EisensteinInt& n) {
  Factorization f = factor(n);
  if (f.lambda_exp > 1) return false;
  for (const auto& pp : f.factors)
    if (pp.exp > 1) return false;
  return true;
}

SquarefreeSplit squarefree_split(const EisensteinInt& n) {
  Factorization f = factor(n);
  SquarefreeSplit s;
  s.unit = f.unit;
  s.lambda_exp = f.lambda_exp;
  for (const auto& pp : f.factors) {
    int e1 = pp.exp % 3 == 1 ? 1 : 0;
    int e2 = pp.exp % 3 == 2 ? 1 : 0;
    int e3 = (pp.exp - e1 - 2 * e2) / 3;
    if (e1) s.n1 = mul(s.n1, pp.prime);
    if (e2) s.n2 = mul(s.n2, pp.prime);
    for (int k = 0; k < e3; ++k) s.n3 = mul(s.n3, pp.prime);
    if (e3 >= 1 && e1 == 0 && e2 == 0) s.r3_star = mul(s.r3_star, pp.prime);
  }
  return s;
}

}  // namespace eisen
