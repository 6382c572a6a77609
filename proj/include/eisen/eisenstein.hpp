#pragma once
#include <array>
#include <complex>
#include <cstdint>
#include <string>

#include "eisen/errors.hpp"

namespace eisen {

using i64 = std::int64_t;
using i128 = __int128;

/*
  Elements of Z[w], w = exp(2*pi*i/3), stored as a + b*w on 64-bit
  coordinates.  The ring is Euclidean for the norm

      N(a + bw) = a^2 - ab + b^2,

  has six units +-1, +-w, +-w^2, and class number one.  An element coprime
  to 3 has exactly one associate congruent to 1 mod 3 ("primary"); primary
  representatives make factorizations and character moduli canonical.

  Coordinates stay within int64; any multiplication or norm that would
  overflow throws OverflowError instead of wrapping.  Workloads here keep
  norms far below 2^62, so the checked 64-bit representation is both exact
  and fast.
*/
struct EisensteinInt {
  i64 a = 0;
  i64 b = 0;

  constexpr EisensteinInt() = default;
  constexpr EisensteinInt(i64 a_, i64 b_) : a(a_), b(b_) {}

  friend constexpr bool operator==(const EisensteinInt& x,
                                   const EisensteinInt& y) {
    return x.a == y.a && x.b == y.b;
  }
  friend constexpr bool operator!=(const EisensteinInt& x,
                                   const EisensteinInt& y) {
    return !(x == y);
  }
  // Lexicographic; used only for canonical tie-breaking in norm-sorted lists.
  friend constexpr bool operator<(const EisensteinInt& x,
                                  const EisensteinInt& y) {
    return x.a != y.a ? x.a < y.a : x.b < y.b;
  }

  std::string str() const {
    return "(" + std::to_string(a) + "," + std::to_string(b) + ")";
  }
};

inline constexpr EisensteinInt EIS_ZERO{0, 0};
inline constexpr EisensteinInt EIS_ONE{1, 0};
// 1 - w, the ramified prime above 3:  3 = -w^2 (1-w)^2.
inline constexpr EisensteinInt EIS_LAMBDA{1, -1};
// Fixed square root of -3: (1 + 2w)^2 = -3.  Every formula involving
// sqrt(-3) uses this representative.
inline constexpr EisensteinInt EIS_SQRT_M3{1, 2};

namespace detail {
inline i64 checked_i64(i128 v, const char* what) {
  if (v > static_cast<i128>(INT64_MAX) || v < static_cast<i128>(INT64_MIN))
    throw OverflowError(what);
  return static_cast<i64>(v);
}
}  // namespace detail

inline EisensteinInt add(const EisensteinInt& x, const EisensteinInt& y) {
  return {detail::checked_i64(static_cast<i128>(x.a) + y.a, "add"),
          detail::checked_i64(static_cast<i128>(x.b) + y.b, "add")};
}
inline EisensteinInt sub(const EisensteinInt& x, const EisensteinInt& y) {
  return {detail::checked_i64(static_cast<i128>(x.a) - y.a, "sub"),
          detail::checked_i64(static_cast<i128>(x.b) - y.b, "sub")};
}
inline constexpr EisensteinInt neg(const EisensteinInt& x) {
  return {-x.a, -x.b};
}

// (a+bw)(c+dw) = (ac - bd) + (ad + bc - bd) w   since w^2 = -1 - w.
inline EisensteinInt mul(const EisensteinInt& x, const EisensteinInt& y) {
  i128 ac = static_cast<i128>(x.a) * y.a;
  i128 bd = static_cast<i128>(x.b) * y.b;
  i128 ad = static_cast<i128>(x.a) * y.b;
  i128 bc = static_cast<i128>(x.b) * y.a;
  return {detail::checked_i64(ac - bd, "mul"),
          detail::checked_i64(ad + bc - bd, "mul")};
}

// conj(a+bw) = (a-b) - b w.
inline EisensteinInt conj(const EisensteinInt& x) {
  return {detail::checked_i64(static_cast<i128>(x.a) - x.b, "conj"), -x.b};
}

inline i64 norm(const EisensteinInt& x) {
  i128 n = static_cast<i128>(x.a) * x.a - static_cast<i128>(x.a) * x.b +
           static_cast<i128>(x.b) * x.b;
  return detail::checked_i64(n, "norm");
}

// trace(a+bw) = (a+bw) + conj(a+bw) = 2a - b.
inline i64 trace(const EisensteinInt& x) {
  return detail::checked_i64(2 * static_cast<i128>(x.a) - x.b, "trace");
}

inline const std::array<EisensteinInt, 6>& units() {
  static const std::array<EisensteinInt, 6> u = {
      EisensteinInt{1, 0},  EisensteinInt{-1, 0},  EisensteinInt{0, 1},
      EisensteinInt{0, -1}, EisensteinInt{-1, -1}, EisensteinInt{1, 1}};
  return u;
}

// w^e for e mod 3.
inline EisensteinInt omega_pow(int e) {
  static const EisensteinInt w[3] = {{1, 0}, {0, 1}, {-1, -1}};
  int r = e % 3;
  if (r < 0) r += 3;
  return w[r];
}

inline bool is_unit(const EisensteinInt& x) { return norm(x) == 1; }

// primary <=> congruent to 1 mod 3, i.e. a = 1 (3) and b = 0 (3).
inline bool is_primary(const EisensteinInt& x) {
  i64 am = x.a % 3, bm = x.b % 3;
  if (am < 0) am += 3;
  if (bm < 0) bm += 3;
  return am == 1 && bm == 0;
}

inline std::complex<double> to_complex(const EisensteinInt& x) {
  static const double s3h = 0.86602540378443864676;  // sqrt(3)/2
  return {static_cast<double>(x.a) - 0.5 * x.b, s3h * x.b};
}

// unit u and primary p = u*z; requires gcd(N(z), 3) = 1.
struct PrimaryPair {
  EisensteinInt unit;
  EisensteinInt primary;
};
PrimaryPair primary_associate(const EisensteinInt& z);

// Rounded division: x = q*y + r with N(r) <= (3/4) N(y).
// Rounding is to the nearest integer with ties toward +infinity in each
// coordinate, which makes the quotient (hence every downstream reduction
// and gcd chain) deterministic.
struct DivMod {
  EisensteinInt q;
  EisensteinInt r;
};
DivMod divmod_rounded(const EisensteinInt& x, const EisensteinInt& y);

bool divides(const EisensteinInt& d, const EisensteinInt& x);
EisensteinInt exact_div(const EisensteinInt& x, const EisensteinInt& d);

// gcd normalized to a canonical associate: the primary associate when the
// gcd is coprime to 3, else lambda^k times the primary associate of the
// lambda-free part.  Throws BothZero on gcd(0, 0).
EisensteinInt gcd(EisensteinInt x, EisensteinInt y);

inline bool coprime(const EisensteinInt& x, const EisensteinInt& y) {
  return norm(gcd(x, y)) == 1;
}

// a^e mod m (e >= 0) by square-and-multiply over rounded reduction.
EisensteinInt modpow(const EisensteinInt& a, i64 e, const EisensteinInt& m);

/*
  Fundamental domain for Z[w]/(m): column-style Hermite form of the lattice
  spanned by m and m*w gives basis rows (f, 0) and (e, g) with f, g > 0 and
  f*g = N(m).  The representatives are (x, y), 0 <= x < f, 0 <= y < g, and
  reduction is two floor-divisions.
*/
struct ResidueBox {
  EisensteinInt m;
  i64 f = 1, g = 1, e = 0;

  i64 count() const { return f * g; }
};
ResidueBox residue_box(const EisensteinInt& m);
EisensteinInt reduce(const ResidueBox& box, const EisensteinInt& x);

// Canonical representative of x mod m (the ResidueBox element).
EisensteinInt mod_reduce(const EisensteinInt& x, const EisensteinInt& m);

}  // namespace eisen
