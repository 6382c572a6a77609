#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "eisen/factor.hpp"

using namespace eisen;

TEST_CASE("rational helpers") {
  auto f = factor_rational(360);
  REQUIRE(f.size() == 3);
  CHECK(f[0] == std::pair<i64, int>{2, 3});
  CHECK(f[1] == std::pair<i64, int>{3, 2});
  CHECK(f[2] == std::pair<i64, int>{5, 1});
  CHECK(factor_rational(1).empty());

  for (i64 p : {7, 13, 31, 61, 97, 103}) {
    i64 s = sqrt_mod(p - 3, p);
    CHECK((s * s) % p == (p - 3) % p);
  }
  CHECK_THROWS_AS(sqrt_mod(3, 7), InvalidRange);  // 3 is not a QR mod 7

  // 3^20 = 3486784401 = 3486 * 1000003 + 773943
  CHECK(powmod_i64(3, 20, 1000003) == 773943);
}

TEST_CASE("split primes are primary with the right norm") {
  for (i64 p = 7; p < 3000; ++p) {
    bool prime = true;
    for (i64 d = 2; d * d <= p; ++d)
      if (p % d == 0) prime = false;
    if (!prime || p % 3 != 1) continue;
    EisensteinInt pi = split_prime_above(p);
    CHECK(norm(pi) == p);
    CHECK(is_primary(pi));
    EisensteinInt pib = primary_associate(conj(pi)).primary;
    CHECK(norm(pib) == p);
    CHECK(pi < pib);
    CHECK(pi != pib);
  }
  CHECK_THROWS_AS(split_prime_above(11), InvalidRange);
}

TEST_CASE("factor recompose round-trip") {
  std::mt19937_64 rng(246810);
  std::uniform_int_distribution<i64> d(-3000, 3000);
  int nontrivial = 0;
  for (int i = 0; i < 2000; ++i) {
    EisensteinInt n{d(rng), d(rng)};
    if (norm(n) == 0) continue;
    Factorization f = factor(n);
    CHECK(recompose(f) == n);
    CHECK(is_unit(f.unit));
    for (const auto& pp : f.factors) {
      CHECK(is_primary(pp.prime));
      CHECK(pp.exp >= 1);
    }
    for (size_t k = 1; k < f.factors.size(); ++k) {
      i64 n0 = norm(f.factors[k - 1].prime), n1 = norm(f.factors[k].prime);
      CHECK((n0 < n1 || (n0 == n1 && f.factors[k - 1].prime < f.factors[k].prime)));
    }
    if (f.factors.size() >= 2) ++nontrivial;
  }
  CHECK(nontrivial > 500);
}

TEST_CASE("specific factorizations") {
  // 3 = -w^2 * lambda^2
  Factorization f3 = factor(EisensteinInt{3, 0});
  CHECK(f3.lambda_exp == 2);
  CHECK(f3.factors.empty());
  CHECK(f3.unit == neg(omega_pow(2)));

  // unit input
  Factorization fu = factor(EisensteinInt{0, -1});
  CHECK(fu.lambda_exp == 0);
  CHECK(fu.factors.empty());
  CHECK(fu.unit == EisensteinInt{0, -1});

  // a split prime squared
  EisensteinInt pi = split_prime_above(7);
  Factorization f49 = factor(mul(pi, pi));
  REQUIRE(f49.factors.size() == 1);
  CHECK(f49.factors[0].prime == pi);
  CHECK(f49.factors[0].exp == 2);
  CHECK(f49.unit == EIS_ONE);

  // inert prime: norm 4
  Factorization f2 = factor(EisensteinInt{2, 0});
  REQUIRE(f2.factors.size() == 1);
  CHECK(f2.factors[0].prime == EisensteinInt{-2, 0});
  CHECK(f2.factors[0].exp == 1);
  CHECK(f2.unit == EisensteinInt{-1, 0});

  CHECK_THROWS_AS(factor(EIS_ZERO), ZeroInput);
}

TEST_CASE("moebius and von Mangoldt") {
  EisensteinInt p7 = split_prime_above(7);
  EisensteinInt p13 = split_prime_above(13);
  CHECK(moebius(EIS_ONE) == 1);
  CHECK(moebius(p7) == -1);
  CHECK(moebius(mul(p7, p13)) == 1);
  CHECK(moebius(mul(p7, p7)) == 0);
  CHECK(moebius(EisensteinInt{-2, 0}) == -1);
  CHECK_THROWS_AS(moebius(EisensteinInt{3, 0}), NotCoprimeToThree);

  CHECK(von_mangoldt(p7) == doctest::Approx(std::log(7.0)).epsilon(1e-15));
  CHECK(von_mangoldt(mul(p7, p7)) ==
        doctest::Approx(std::log(7.0)).epsilon(1e-15));
  CHECK(von_mangoldt(mul(p7, p13)) == 0.0);
  CHECK(von_mangoldt(EIS_ONE) == 0.0);
  // associates of a prime power still count
  CHECK(von_mangoldt(neg(p7)) == doctest::Approx(std::log(7.0)));
  CHECK_THROWS_AS(von_mangoldt(EisensteinInt{0, 3}), NotCoprimeToThree);
}

TEST_CASE("squarefree detection brute force") {
  // Sum over d^2 | n of mu(d) is the squarefree indicator; compare against
  // factor() on every primary n of small norm.
  for (i64 a = -60; a <= 60; ++a)
    for (i64 b = -60; b <= 60; ++b) {
      EisensteinInt n{a, b};
      if (norm(n) == 0 || norm(n) > 1200 || !is_primary(n)) continue;
      if (norm(n) % 3 == 0) continue;
      int ind = 0;
      for (i64 c = -40; c <= 40; ++c)
        for (i64 d = -40; d <= 40; ++d) {
          EisensteinInt dd{c, d};
          if (norm(dd) == 0 || norm(dd) % 3 == 0 || !is_primary(dd)) continue;
          if (norm(dd) * norm(dd) > norm(n)) continue;
          if (divides(mul(dd, dd), n)) ind += moebius(dd);
        }
      CHECK(ind == (is_squarefree(n) ? 1 : 0));
    }
}

TEST_CASE("cube-pattern split") {
  EisensteinInt p7 = split_prime_above(7);
  EisensteinInt p13 = split_prime_above(13);
  EisensteinInt q2{-2, 0};

  // n = p7 * p13^2 * q2^3
  EisensteinInt n = mul(p7, mul(mul(p13, p13), mul(q2, mul(q2, q2))));
  SquarefreeSplit s = squarefree_split(n);
  CHECK(s.lambda_exp == 0);
  CHECK(s.n1 == p7);
  CHECK(s.n2 == p13);
  CHECK(s.n3 == q2);
  CHECK(s.r3_star == q2);
  CHECK(mul(s.unit,
            mul(s.n1, mul(mul(s.n2, s.n2), mul(s.n3, mul(s.n3, s.n3))))) == n);

  // exponent 4 = 1 + 3: contributes to n1 and n3 but not r3_star
  EisensteinInt m = mul(mul(p7, p7), mul(p7, p7));
  SquarefreeSplit t = squarefree_split(m);
  CHECK(t.n1 == p7);
  CHECK(t.n2 == EIS_ONE);
  CHECK(t.n3 == p7);
  CHECK(t.r3_star == EIS_ONE);

  // exponent 6: pure cube part, lands in r3_star
  EisensteinInt c6 = mul(m, mul(p7, p7));
  SquarefreeSplit u = squarefree_split(c6);
  CHECK(u.n1 == EIS_ONE);
  CHECK(u.n2 == EIS_ONE);
  CHECK(u.n3 == mul(p7, p7));
  CHECK(u.r3_star == p7);
}
