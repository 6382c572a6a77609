#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <set>

#include "eisen/factor.hpp"
#include "eisen/sieve.hpp"

using namespace eisen;

namespace {

// Independent primality for primary z: either N(z) is a rational prime, or
// z is the primary associate of an inert rational prime.
bool brute_is_prime(const EisensteinInt& z) {
  i64 n = norm(z);
  if (n < 2) return false;
  bool nprime = true;
  for (i64 d = 2; d * d <= n; ++d)
    if (n % d == 0) {
      nprime = false;
      break;
    }
  if (nprime && n != 3) return true;
  i64 q = static_cast<i64>(std::sqrt(static_cast<double>(n)) + 0.5);
  if (q * q != n || q % 3 != 2) return false;
  bool qprime = true;
  for (i64 d = 2; d * d <= q; ++d)
    if (q % d == 0) qprime = false;
  return qprime && z == EisensteinInt{-q, 0};
}

// Squarefree via the Moebius detector, independent of factor()'s exponents.
bool brute_squarefree(const EisensteinInt& n) {
  int ind = 0;
  i64 nn = norm(n);
  for (i64 c = -40; c <= 40; ++c)
    for (i64 d = -40; d <= 40; ++d) {
      EisensteinInt dd{c, d};
      i64 nd = norm(dd);
      if (nd == 0 || nd % 3 == 0 || !is_primary(dd)) continue;
      if (nd * nd > nn) continue;
      if (divides(mul(dd, dd), n)) ind += moebius(dd);
    }
  return ind == 1;
}

}  // namespace

TEST_CASE("small tables match the spec'd examples") {
  CHECK_THROWS_AS(sieve_primes(1), BoundTooSmall);

  PrimeTable t2 = sieve_primes(2);
  CHECK(t2.primes.empty());

  PrimeTable t6 = sieve_primes(6);
  REQUIRE(t6.primes.size() == 1);
  CHECK(t6.primes[0] == EisensteinInt{-2, 0});
  CHECK(t6.norms[0] == 4);

  PrimeTable t7 = sieve_primes(7);
  REQUIRE(t7.primes.size() == 3);
  CHECK(t7.norms[0] == 4);
  CHECK(t7.norms[1] == 7);
  CHECK(t7.norms[2] == 7);
  CHECK(t7.primes[1] == EisensteinInt{-2, -3});
  CHECK(t7.primes[2] == EisensteinInt{1, 3});
  auto rng = t7.norm_index.at(7);
  CHECK(rng.first == 1);
  CHECK(rng.second == 3);
}

TEST_CASE("table is complete and correctly classified up to 1e5") {
  const i64 B = 100000;
  PrimeTable t = sieve_primes(B);

  // every entry is a primary prime, sorted, none ramified
  for (std::size_t i = 0; i < t.primes.size(); ++i) {
    CHECK(is_primary(t.primes[i]));
    CHECK(norm(t.primes[i]) == t.norms[i]);
    CHECK(t.norms[i] % 3 != 0);
    if (i) {
      CHECK((t.norms[i - 1] < t.norms[i] ||
             (t.norms[i - 1] == t.norms[i] && t.primes[i - 1] < t.primes[i])));
    }
  }

  // direct scan of the lattice
  std::set<std::pair<i64, i64>> scan;
  i64 A = static_cast<i64>(2.0 * std::sqrt(B / 3.0)) + 2;
  for (i64 a = -A; a <= A; ++a)
    for (i64 b = -A; b <= A; ++b) {
      EisensteinInt z{a, b};
      i64 n = norm(z);
      if (n < 2 || n > B || !is_primary(z)) continue;
      if (brute_is_prime(z)) scan.insert({a, b});
    }
  CHECK(scan.size() == t.primes.size());
  for (const auto& p : t.primes) CHECK(scan.count({p.a, p.b}) == 1);

  // split primes come in conjugate non-associate pairs
  for (const auto& [n, rng] : t.norm_index) {
    std::size_t cnt = rng.second - rng.first;
    i64 q = static_cast<i64>(std::sqrt(static_cast<double>(n)) + 0.5);
    if (q * q == n && q % 3 == 2)
      CHECK(cnt == 1);
    else
      CHECK(cnt == 2);
  }
}

TEST_CASE("default table grows monotonically") {
  auto t1 = default_table(100);
  CHECK(t1->bound >= 100);
  auto t2 = default_table(1000);
  CHECK(t2->bound >= 1000);
  auto t3 = default_table(50);
  CHECK(t3->bound >= t2->bound);  // never shrinks
}

TEST_CASE("cache round-trip and corruption detection") {
  PrimeTable t = sieve_primes(5000);
  const char* path = "prime_cache_test.bin";
  save_prime_cache(t, path);
  PrimeTable u = load_prime_cache(path);
  CHECK(u.bound == t.bound);
  REQUIRE(u.primes.size() == t.primes.size());
  for (std::size_t i = 0; i < u.primes.size(); ++i) {
    CHECK(u.primes[i] == t.primes[i]);
    CHECK(u.norms[i] == t.norms[i]);
  }
  CHECK(u.norm_index == t.norm_index);

  // flip a byte in the magic
  std::FILE* f = std::fopen(path, "r+b");
  REQUIRE(f);
  std::fputc('X', f);
  std::fclose(f);
  CHECK_THROWS_AS(load_prime_cache(path), InvalidRange);
  std::remove(path);
  CHECK_THROWS_AS(load_prime_cache("no_such_file.bin"), InvalidRange);
}

TEST_CASE("primary enumeration") {
  auto p1 = enumerate_primary(1);
  REQUIRE(p1.size() == 1);
  CHECK(p1[0] == EIS_ONE);

  auto p4 = enumerate_primary(4);
  REQUIRE(p4.size() == 2);
  CHECK(p4[0] == EIS_ONE);
  CHECK(p4[1] == EisensteinInt{-2, 0});

  // ascending norms, all primary, complete vs direct scan
  auto p = enumerate_primary(2000);
  std::size_t count = 0;
  for (i64 a = -60; a <= 60; ++a)
    for (i64 b = -60; b <= 60; ++b) {
      EisensteinInt z{a, b};
      if (norm(z) >= 1 && norm(z) <= 2000 && is_primary(z)) ++count;
    }
  CHECK(p.size() == count);
  for (std::size_t i = 1; i < p.size(); ++i)
    CHECK(norm(p[i - 1]) <= norm(p[i]));
  for (const auto& z : p) CHECK(is_primary(z));
}

TEST_CASE("thin family: defining predicate and double enumeration") {
  const i64 X = 10000;
  auto fam = enumerate_thin_family(X);
  std::set<std::pair<i64, i64>> got;
  for (const auto& n : fam) {
    CHECK(is_primary(n));
    CHECK(((n.a - 1) % 9 == 0 && n.b % 9 == 0));
    CHECK(n != EIS_ONE);
    CHECK(norm(n) <= X);
    CHECK(is_squarefree(n));
    got.insert({n.a, n.b});
  }
  CHECK(got.size() == fam.size());

  // independent scan with the Moebius-detector squarefree test
  std::size_t count = 0;
  i64 A = static_cast<i64>(2.0 * std::sqrt(X / 3.0)) + 2;
  for (i64 a = -A; a <= A; ++a)
    for (i64 b = -A; b <= A; ++b) {
      EisensteinInt z{a, b};
      i64 n = norm(z);
      if (n < 1 || n > X || z == EIS_ONE) continue;
      if (((a - 1) % 9 + 9) % 9 != 0 || ((b % 9) + 9) % 9 != 0) continue;
      if (!brute_squarefree(z)) continue;
      ++count;
      CHECK(got.count({a, b}) == 1);
    }
  CHECK(count == fam.size());
  CHECK(count > 10);
}

TEST_CASE("full family: predicate, brute scan, b = 1 slice") {
  const i64 X = 1000;
  auto fam = enumerate_full_family(X);
  static const EisensteinInt nine{9, 0};
  std::set<std::pair<std::pair<i64, i64>, std::pair<i64, i64>>> got;
  for (const auto& [a, b] : fam) {
    CHECK(is_primary(a));
    CHECK(is_primary(b));
    CHECK(is_squarefree(a));
    CHECK(is_squarefree(b));
    CHECK(norm(gcd(a, b)) == 1);
    CHECK(norm(mul(a, b)) <= X);
    CHECK(mod_reduce(mul(a, mul(b, b)), nine) == EIS_ONE);
    CHECK(mul(a, mul(b, b)) != EIS_ONE);
    got.insert({{a.a, a.b}, {b.a, b.b}});
  }
  CHECK(got.size() == fam.size());

  // brute scan over pairs
  std::size_t count = 0;
  i64 A = static_cast<i64>(2.0 * std::sqrt(X / 3.0)) + 2;
  for (i64 a1 = -A; a1 <= A; ++a1)
    for (i64 b1 = -A; b1 <= A; ++b1) {
      EisensteinInt a{a1, b1};
      if (norm(a) < 1 || norm(a) > X || !is_primary(a)) continue;
      if (!brute_squarefree(a)) continue;
      for (i64 a2 = -A; a2 <= A; ++a2)
        for (i64 b2 = -A; b2 <= A; ++b2) {
          EisensteinInt b{a2, b2};
          if (norm(b) < 1 || !is_primary(b)) continue;
          if (norm(mul(a, b)) > X) continue;
          if (!brute_squarefree(b)) continue;
          if (norm(gcd(a, b)) != 1) continue;
          EisensteinInt ab2 = mul(a, mul(b, b));
          if (ab2 == EIS_ONE) continue;
          if (mod_reduce(ab2, nine) != EIS_ONE) continue;
          ++count;
          CHECK(got.count({{a1, b1}, {a2, b2}}) == 1);
        }
    }
  CHECK(count == fam.size());

  // the b = 1 slice is exactly the thin family
  std::set<std::pair<i64, i64>> slice, thin;
  for (const auto& [a, b] : fam)
    if (b == EIS_ONE) slice.insert({a.a, a.b});
  for (const auto& n : enumerate_thin_family(X)) thin.insert({n.a, n.b});
  CHECK(slice == thin);
}
