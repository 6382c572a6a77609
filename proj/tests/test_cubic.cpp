#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <complex>
#include <random>
#include <set>

#include "eisen/cubic.hpp"
#include "eisen/sieve.hpp"

using namespace eisen;

namespace {
EisensteinInt rand_eis(std::mt19937_64& rng, i64 lo, i64 hi) {
  std::uniform_int_distribution<i64> d(lo, hi);
  return {d(rng), d(rng)};
}
}  // namespace

TEST_CASE("CubicValue algebra") {
  CHECK(CubicValue::Root(1) * CubicValue::Root(2) == CubicValue::Root(0));
  CHECK(CubicValue::Root(2) * CubicValue::Root(2) == CubicValue::Root(1));
  CHECK((CubicValue::Zero() * CubicValue::Root(1)).zero);
  CHECK(CubicValue::Root(1).conj() == CubicValue::Root(2));
  CHECK(CubicValue::Root(-4) == CubicValue::Root(2));
  CHECK(CubicValue::Root(1).pow(3) == CubicValue::Root(0));
  auto w = CubicValue::Root(1).to_complex();
  CHECK(std::abs(w - std::complex<double>(-0.5, 0.86602540378443864676)) <
        1e-15);
}

TEST_CASE("prime symbol: defining congruence at norm 7") {
  EisensteinInt pi = split_prime_above(7);
  // chi_pi(2) is the root of unity congruent to 2^2 = 4 mod pi
  CubicValue v = cubic_symbol_prime(EisensteinInt{2, 0}, pi);
  CHECK(!v.zero);
  CHECK(mod_reduce(omega_pow(v.e), pi) ==
        mod_reduce(EisensteinInt{4, 0}, pi));
  // pi | a -> Zero
  CHECK(cubic_symbol_prime(mul(pi, EisensteinInt{5, 2}), pi).zero);
}

TEST_CASE("slow symbol basics") {
  std::mt19937_64 rng(8812);
  for (int i = 0; i < 1000; ++i) {
    EisensteinInt n = rand_eis(rng, -200, 200);
    if (norm(n) == 0 || norm(n) % 3 == 0) continue;
    n = primary_associate(n).primary;
    // chi_n(1) = 1
    CHECK(cubic_symbol_slow(EIS_ONE, n) == CubicValue::Root(0));
    // chi_n(w) = w^{(N(n)-1)/3}
    CHECK(cubic_symbol_slow(omega_pow(1), n) ==
          CubicValue::Root(static_cast<int>(((norm(n) - 1) / 3) % 3)));
    // chi_n(-1) = 1 (cube)
    CHECK(cubic_symbol_slow(EisensteinInt{-1, 0}, n) == CubicValue::Root(0));
  }
  CHECK_THROWS_AS(cubic_symbol_slow(EIS_ONE, EisensteinInt{-5, 2}),
                  ModulusNotCoprimeToThree);
  CHECK_THROWS_AS(cubic_symbol_fast(EIS_ONE, EisensteinInt{-5, 2}),
                  ModulusNotCoprimeToThree);
}

TEST_CASE("complete multiplicativity of the slow symbol") {
  std::mt19937_64 rng(515);
  for (int i = 0; i < 500; ++i) {
    EisensteinInt n = rand_eis(rng, -60, 60);
    if (norm(n) == 0 || norm(n) % 3 == 0) continue;
    n = primary_associate(n).primary;
    EisensteinInt a = rand_eis(rng, -300, 300);
    EisensteinInt b = rand_eis(rng, -300, 300);
    CHECK(cubic_symbol_slow(mul(a, b), n) ==
          cubic_symbol_slow(a, n) * cubic_symbol_slow(b, n));
  }
}

TEST_CASE("fast symbol agrees with slow symbol") {
  std::mt19937_64 rng(20240301);
  int checked = 0;
  for (int i = 0; i < 20000; ++i) {
    EisensteinInt n = rand_eis(rng, -300, 300);
    if (norm(n) == 0 || norm(n) % 3 == 0) continue;
    EisensteinInt a = rand_eis(rng, -100000, 100000);
    CHECK(cubic_symbol_fast(a, n) == cubic_symbol_slow(a, n));
    ++checked;
  }
  CHECK(checked > 12000);
}

TEST_CASE("reciprocity for primary primes of norm <= 300") {
  auto table = sieve_primes(300);
  for (const auto& p : table.primes)
    for (const auto& q : table.primes) {
      if (p == q) continue;
      CHECK(cubic_symbol_fast(p, q) == cubic_symbol_fast(q, p));
    }
}

TEST_CASE("Hecke condition: chi_n(w) trivial iff N(n) = 1 mod 9") {
  for (i64 a = -120; a <= 120; ++a)
    for (i64 b = -120; b <= 120; ++b) {
      EisensteinInt n{a, b};
      i64 nn = norm(n);
      if (nn == 0 || nn > 10000 || nn % 3 == 0 || !is_primary(n)) continue;
      bool trivial =
          cubic_symbol_slow(omega_pow(1), n) == CubicValue::Root(0);
      CHECK(trivial == (nn % 9 == 1));
    }
}

TEST_CASE("classify") {
  EisensteinInt p7 = split_prime_above(7);
  EisensteinInt p13 = split_prime_above(13);

  CharacterSpec s1 = classify(mul(p7, p13));
  CHECK(s1.conductor == mul(p7, p13));
  CHECK(s1.is_primitive);
  CHECK(s1.n1 == mul(p7, p13));
  CHECK(s1.n2 == EIS_ONE);

  CharacterSpec s2 = classify(mul(p7, mul(p7, p7)));
  CHECK(norm(s2.conductor) == 1);
  CHECK(!s2.is_primitive);
  CHECK(s2.n3 == p7);

  CharacterSpec s3 = classify(mul(p7, mul(p13, p13)));
  CHECK(s3.conductor == mul(p7, p13));
  CHECK(s3.is_primitive);
  CHECK(s3.n1 == p7);
  CHECK(s3.n2 == p13);

  // Hecke flag
  CHECK(classify(EisensteinInt{1, 9}).is_hecke);  // N = 73 = 1 mod 9
  CHECK(classify(p7).is_hecke == (7 % 9 == 1));
}

TEST_CASE("ray class group mod 9") {
  // |(Z[w]/9)^x| = 54 by direct count
  int count = 0;
  for (i64 a = 0; a < 9; ++a)
    for (i64 b = 0; b < 9; ++b)
      if (norm(EisensteinInt{a, b}) % 3 != 0) ++count;
  CHECK(count == 54);

  // number of distinct unit residues mod 9
  std::set<std::pair<i64, i64>> ur;
  for (const auto& u : units()) {
    EisensteinInt r = mod_reduce(u, EisensteinInt{9, 0});
    ur.insert({r.a, r.b});
  }

  const RayClassGroup& g = ray_class_mod9();
  CHECK(g.h9 == count / static_cast<int>(ur.size()));
  CHECK(static_cast<int>(g.characters.size()) == g.h9);
  CHECK(static_cast<int>(g.class_reps.size()) == g.h9);

  // principal character first
  CHECK(g.characters[0].is_principal());
  for (const auto& rep : g.class_reps)
    CHECK(g.characters[0].exponent(rep) == 0);

  // trivial on units, multiplicative, orthogonal
  std::mt19937_64 rng(99);
  for (const auto& chi : g.characters) {
    for (const auto& u : units()) CHECK(chi.exponent(u) == 0);
    for (int i = 0; i < 200; ++i) {
      EisensteinInt x = rand_eis(rng, -50, 50);
      EisensteinInt y = rand_eis(rng, -50, 50);
      if (norm(x) % 3 == 0 || norm(y) % 3 == 0 || norm(x) == 0 ||
          norm(y) == 0)
        continue;
      int ex = chi.exponent(x), ey = chi.exponent(y);
      CHECK(chi.exponent(mul(x, y)) ==
            (ex + ey) % chi.exponent_modulus);
    }
    std::complex<double> s = 0.0;
    for (const auto& rep : g.class_reps) s += chi.value(rep);
    if (chi.is_principal())
      CHECK(std::abs(s - std::complex<double>(g.h9, 0)) < 1e-12);
    else
      CHECK(std::abs(s) < 1e-12);
  }

  // characters are pairwise distinct
  for (int i = 0; i < g.h9; ++i)
    for (int j = i + 1; j < g.h9; ++j) {
      bool same = true;
      for (const auto& rep : g.class_reps)
        if (g.characters[i].exponent(rep) != g.characters[j].exponent(rep))
          same = false;
      CHECK(!same);
    }
}

TEST_CASE("fast symbol detects shared factors") {
  EisensteinInt p7 = split_prime_above(7);
  EisensteinInt n = mul(p7, split_prime_above(13));
  CHECK(cubic_symbol_fast(mul(p7, EisensteinInt{4, 1}), n).zero);
  CHECK(cubic_symbol_slow(mul(p7, EisensteinInt{4, 1}), n).zero);
  CHECK(!cubic_symbol_fast(EisensteinInt{2, 0}, n).zero);
}
