#pragma once
#include <cstdint>
#include <numeric>
#include <string>

#include "eisen/errors.hpp"

namespace eisen {

// Exact rational arithmetic on 64-bit numerator/denominator.  Used where a
// result must be reported exactly (test-function support endpoints, the
// non-vanishing proportion 2/13, exponent bookkeeping).  Overflow throws.
struct Fraction {
  std::int64_t num = 0;
  std::int64_t den = 1;

  Fraction() = default;
  Fraction(std::int64_t n) : num(n), den(1) {}
  Fraction(std::int64_t n, std::int64_t d) : num(n), den(d) { normalize(); }

  void normalize() {
    if (den == 0) throw InvalidRange("fraction with zero denominator");
    if (den < 0) {
      num = -num;
      den = -den;
    }
    std::int64_t g = std::gcd(num < 0 ? -num : num, den);
    if (g > 1) {
      num /= g;
      den /= g;
    }
  }

  static std::int64_t checked_mul(std::int64_t x, std::int64_t y) {
    __int128 p = static_cast<__int128>(x) * y;
    if (p > INT64_MAX || p < INT64_MIN) throw OverflowError("fraction overflow");
    return static_cast<std::int64_t>(p);
  }

  friend Fraction operator+(Fraction a, Fraction b) {
    return Fraction(checked_mul(a.num, b.den) + checked_mul(b.num, a.den),
                    checked_mul(a.den, b.den));
  }
  friend Fraction operator-(Fraction a, Fraction b) {
    return Fraction(checked_mul(a.num, b.den) - checked_mul(b.num, a.den),
                    checked_mul(a.den, b.den));
  }
  friend Fraction operator*(Fraction a, Fraction b) {
    return Fraction(checked_mul(a.num, b.num), checked_mul(a.den, b.den));
  }
  friend Fraction operator/(Fraction a, Fraction b) {
    if (b.num == 0) throw InvalidRange("division by zero fraction");
    return Fraction(checked_mul(a.num, b.den), checked_mul(a.den, b.num));
  }
  friend bool operator==(const Fraction& a, const Fraction& b) {
    return a.num == b.num && a.den == b.den;
  }
  friend bool operator<(const Fraction& a, const Fraction& b) {
    return static_cast<__int128>(a.num) * b.den <
           static_cast<__int128>(b.num) * a.den;
  }
  friend bool operator<=(const Fraction& a, const Fraction& b) {
    return a == b || a < b;
  }
  friend bool operator>(const Fraction& a, const Fraction& b) { return b < a; }
  friend bool operator>=(const Fraction& a, const Fraction& b) { return b <= a; }

  double to_double() const { return static_cast<double>(num) / den; }

  std::string str() const {
    if (den == 1) return std::to_string(num);
    return std::to_string(num) + "/" + std::to_string(den);
  }
};

}  // namespace eisen
