#pragma once
#include <complex>
#include <map>
#include <utility>
#include <vector>

#include "eisen/factor.hpp"

namespace eisen {

/*
  Value of a cubic character: 0 or a cube root of unity w^e.  Exponent
  arithmetic stays exact; conversion to complex happens only where a value
  enters a floating-point sum.
*/
struct CubicValue {
  bool zero = false;
  int e = 0;  // exponent of w, reduced mod 3; meaningful when !zero

  static CubicValue Zero() { return {true, 0}; }
  static CubicValue Root(int e) {
    int r = e % 3;
    if (r < 0) r += 3;
    return {false, r};
  }

  friend CubicValue operator*(const CubicValue& x, const CubicValue& y) {
    if (x.zero || y.zero) return Zero();
    return Root(x.e + y.e);
  }
  CubicValue conj() const { return zero ? Zero() : Root(-e); }
  CubicValue pow(int k) const { return zero ? Zero() : Root(e * (k % 3)); }

  friend bool operator==(const CubicValue& x, const CubicValue& y) {
    return x.zero == y.zero && (x.zero || x.e == y.e);
  }
  friend bool operator!=(const CubicValue& x, const CubicValue& y) {
    return !(x == y);
  }

  std::complex<double> to_complex() const {
    static const double s3h = 0.86602540378443864676;  // sqrt(3)/2
    if (zero) return {0.0, 0.0};
    if (e == 0) return {1.0, 0.0};
    return {-0.5, e == 1 ? s3h : -s3h};
  }
};

// chi_pi(a) = a^{(N(pi)-1)/3} mod pi for prime pi; Zero if pi | a.
CubicValue cubic_symbol_prime(const EisensteinInt& a, const EisensteinInt& pi);

// prod over pi | n of chi_pi(a)^{v_pi(n)}, by factoring the modulus.
// The symbol depends only on the ideal (n): any associate of a primary
// modulus gives the same value.  Throws ModulusNotCoprimeToThree.
CubicValue cubic_symbol_slow(const EisensteinInt& a, const EisensteinInt& n);

// Same value, no factorization: Jacobi-style flip-and-reduce loop using
// cubic reciprocity for primary pairs plus the two supplements (see .cpp).
CubicValue cubic_symbol_fast(const EisensteinInt& a, const EisensteinInt& n);

/*
  Decomposition data of the character chi_n for primary n coprime to 3:
  n = n1 n2^2 n3^3 (n1, n2 squarefree coprime), conductor n1 n2, primitive
  iff the cube part is trivial, Hecke iff N(n) = 1 mod 9 (then chi_n is
  trivial on units and defines a character of ideals).
*/
struct CharacterSpec {
  EisensteinInt modulus{1, 0};
  Factorization factorization;
  EisensteinInt conductor{1, 0};
  EisensteinInt n1{1, 0}, n2{1, 0}, n3{1, 0};
  bool is_primitive = true;
  bool is_hecke = true;
};

CharacterSpec classify(const EisensteinInt& n);

/*
  Ray class group mod 9: (Z[w]/9)^x modulo the image of the six units,
  built by brute force.  Classes are canonical representatives (lex-least
  among the unit translates inside the 9x9 residue box).  Character values
  are exact exponents of a fixed primitive root of unity of the group
  exponent.
*/
struct RayClassCharacter {
  int label = 0;
  int order = 1;
  int exponent_modulus = 1;  // group exponent e; values are exp(2 pi i k/e)
  std::map<std::pair<i64, i64>, int> table;  // class rep -> k

  // exact exponent k for x coprime to 3; throws NotCoprimeToThree
  int exponent(const EisensteinInt& x) const;
  std::complex<double> value(const EisensteinInt& x) const;
  bool is_principal() const { return order == 1; }
};

struct RayClassGroup {
  int h9 = 0;        // order of the quotient group
  int exponent = 1;  // group exponent
  std::vector<EisensteinInt> class_reps;
  std::vector<RayClassCharacter> characters;  // all h9 of them, label 0 first
};

const RayClassGroup& ray_class_mod9();

// Canonical class representative of x in (Z[w]/9)^x / units.
EisensteinInt ray_class_rep(const EisensteinInt& x);

}  // namespace eisen
