#include "eisen/eisenstein.hpp"

namespace eisen {
namespace {

// floor division for 128-bit integers (C++ '/' truncates toward zero).
i128 floordiv(i128 a, i128 b) {
  i128 q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

// round(a / n) for n > 0, ties toward +infinity:  floor((2a + n) / (2n)).
i128 round_div(i128 a, i128 n) { return floordiv(2 * a + n, 2 * n); }

}  // namespace

PrimaryPair primary_associate(const EisensteinInt& z) {
  i64 n = norm(z);
  if (n == 0) throw ZeroInput("primary_associate of zero");
  if (n % 3 == 0) throw NotCoprimeToThree("primary_associate: 3 | norm");
  for (const auto& u : units()) {
    EisensteinInt p = mul(u, z);
    if (is_primary(p)) return {u, p};
  }
  // Unreachable: the six associates of an element coprime to 3 hit every
  // invertible residue class of (Z[w]/3)^x exactly once.
  throw ZeroInput("primary_associate: no primary associate");
}

DivMod divmod_rounded(const EisensteinInt& x, const EisensteinInt& y) {
  i128 ny = static_cast<i128>(y.a) * y.a - static_cast<i128>(y.a) * y.b +
            static_cast<i128>(y.b) * y.b;
  if (ny == 0) throw ZeroModulus("divmod_rounded by zero");
  // x * conj(y) in 128-bit; conj(y) = (y.a - y.b, -y.b).
  i128 ca = static_cast<i128>(y.a) - y.b;
  i128 cb = -static_cast<i128>(y.b);
  i128 ta = static_cast<i128>(x.a) * ca - static_cast<i128>(x.b) * cb;
  i128 tb = static_cast<i128>(x.a) * cb + static_cast<i128>(x.b) * ca -
            static_cast<i128>(x.b) * cb;
  EisensteinInt q{detail::checked_i64(round_div(ta, ny), "divmod_rounded"),
                  detail::checked_i64(round_div(tb, ny), "divmod_rounded")};
  EisensteinInt r = sub(x, mul(q, y));
  return {q, r};
}

bool divides(const EisensteinInt& d, const EisensteinInt& x) {
  if (norm(d) == 0) return norm(x) == 0;
  return norm(divmod_rounded(x, d).r) == 0;
}

EisensteinInt exact_div(const EisensteinInt& x, const EisensteinInt& d) {
  DivMod dm = divmod_rounded(x, d);
  if (dm.r != EIS_ZERO) throw ZeroInput("exact_div: not divisible");
  return dm.q;
}

EisensteinInt gcd(EisensteinInt x, EisensteinInt y) {
  if (norm(x) == 0 && norm(y) == 0) throw BothZero("gcd(0, 0)");
  while (norm(y) != 0) {
    EisensteinInt r = divmod_rounded(x, y).r;
    x = y;
    y = r;
  }
  // Canonical associate: strip lambda powers, make the cofactor primary.
  int k = 0;
  EisensteinInt core = x;
  while (norm(core) % 3 == 0) {
    core = exact_div(core, EIS_LAMBDA);
    ++k;
  }
  EisensteinInt out = primary_associate(core).primary;
  for (int i = 0; i < k; ++i) out = mul(out, EIS_LAMBDA);
  return out;
}

EisensteinInt modpow(const EisensteinInt& a, i64 e, const EisensteinInt& m) {
  if (norm(m) == 0) throw ZeroModulus("modpow modulus zero");
  if (e < 0) throw InvalidRange("modpow: negative exponent");
  // Centered remainders keep intermediates small; the box representative at
  // the end makes results comparable across call sites.
  EisensteinInt base = divmod_rounded(a, m).r;
  EisensteinInt acc = divmod_rounded(EIS_ONE, m).r;
  while (e > 0) {
    if (e & 1) acc = divmod_rounded(mul(acc, base), m).r;
    base = divmod_rounded(mul(base, base), m).r;
    e >>= 1;
  }
  return mod_reduce(acc, m);
}

ResidueBox residue_box(const EisensteinInt& m) {
  i64 n = norm(m);
  if (n == 0) throw ZeroModulus("residue_box of zero");
  // Lattice rows m = (a, b) and m*w = (-b, a-b); Euclid on the second
  // coordinates leaves rows (e, g) and (f, 0) with f*g = +-N(m).
  i128 r0a = m.a, r0b = m.b;
  i128 r1a = -static_cast<i128>(m.b), r1b = static_cast<i128>(m.a) - m.b;
  while (r1b != 0) {
    i128 q = floordiv(r0b, r1b);
    i128 na = r0a - q * r1a, nb = r0b - q * r1b;
    r0a = r1a;
    r0b = r1b;
    r1a = na;
    r1b = nb;
  }
  if (r0b < 0) {
    r0a = -r0a;
    r0b = -r0b;
  }
  if (r1a < 0) r1a = -r1a;
  ResidueBox box;
  box.m = m;
  box.f = detail::checked_i64(r1a, "residue_box");
  box.g = detail::checked_i64(r0b, "residue_box");
  // Normalize the off-diagonal entry into [0, f).
  i128 e = r0a;
  if (box.f > 1) {
    e %= box.f;
    if (e < 0) e += box.f;
  } else {
    e = 0;
  }
  box.e = detail::checked_i64(e, "residue_box");
  return box;
}

EisensteinInt reduce(const ResidueBox& box, const EisensteinInt& x) {
  i128 xa = x.a, xb = x.b;
  i128 k = floordiv(xb, box.g);
  xa -= k * box.e;
  xb -= k * box.g;
  xa -= floordiv(xa, box.f) * box.f;
  return {detail::checked_i64(xa, "reduce"), detail::checked_i64(xb, "reduce")};
}

EisensteinInt mod_reduce(const EisensteinInt& x, const EisensteinInt& m) {
  return reduce(residue_box(m), x);
}

}  // namespace eisen
