#pragma once
#include <utility>
#include <vector>

#include "eisen/eisenstein.hpp"

namespace eisen {

// Rational helpers shared by factorization and the prime sieve. ---------

// n = product p^e over the returned (p, e), p ascending.  n >= 1.
std::vector<std::pair<i64, int>> factor_rational(i64 n);

// Square root of a mod p (odd prime), smallest nonnegative representative;
// throws InvalidRange if a is a non-residue.
i64 sqrt_mod(i64 a, i64 p);

// x^e mod p.
i64 powmod_i64(i64 x, i64 e, i64 p);

// For a rational prime p = 1 mod 3: the primary prime above p that is
// lexicographically smallest among the conjugate pair (its conjugate's
// primary associate is the other prime above p).
EisensteinInt split_prime_above(i64 p);

// Eisenstein factorization. ---------------------------------------------

struct PrimePower {
  EisensteinInt prime;  // primary
  int exp;
};

/*
  n = unit * (1-w)^lambda_exp * prod prime^exp, primes primary and sorted by
  ascending (norm, a, b).  Unique because primary representatives pin down
  the associate of every prime.
*/
struct Factorization {
  EisensteinInt unit{1, 0};
  int lambda_exp = 0;
  std::vector<PrimePower> factors;
};

Factorization factor(const EisensteinInt& n);
EisensteinInt recompose(const Factorization& f);

// Moebius function of the ideal (n); requires gcd(n, 3) = 1.
int moebius(const Factorization& f);
int moebius(const EisensteinInt& n);

// log N(pi) if n is unit * pi^k, else 0; requires gcd(n, 3) = 1.
double von_mangoldt(const Factorization& f);
double von_mangoldt(const EisensteinInt& n);

bool is_squarefree(const EisensteinInt& n);

/*
  Cube-pattern split of the lambda-free part: n = unit * lambda^e *
  n1 * n2^2 * n3^3 with n1, n2 squarefree and coprime.  r3_star collects,
  once each, the primes whose exponent is a positive multiple of 3 (those
  invisible to every cubic character of modulus n yet dividing n).
*/
struct SquarefreeSplit {
  EisensteinInt unit{1, 0};
  int lambda_exp = 0;
  EisensteinInt n1{1, 0};
  EisensteinInt n2{1, 0};
  EisensteinInt n3{1, 0};
  EisensteinInt r3_star{1, 0};
};

SquarefreeSplit squarefree_split(const EisensteinInt& n);

}  // namespace eisen
