#pragma once
#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "eisen/eisenstein.hpp"

namespace eisen {

/*
  All primary primes of norm <= bound, ascending by (norm, a, b).  Split
  rational primes p = 1 mod 3 contribute a conjugate pair of norm p; inert
  q = 2 mod 3 contribute one prime of norm q^2; the ramified prime 1 - w is
  excluded throughout (it is handled separately wherever it matters).
*/
struct PrimeTable {
  i64 bound = 0;
  std::vector<EisensteinInt> primes;
  std::vector<i64> norms;  // norms[i] = N(primes[i])
  // norm -> [lo, hi) index range in `primes`
  std::map<i64, std::pair<std::size_t, std::size_t>> norm_index;
};

// Sieve rational primes, classify by p mod 3, lift to primary generators.
// Throws BoundTooSmall for B < 2.
PrimeTable sieve_primes(i64 B);

// Shared table grown on demand; snapshot semantics (the returned table
// never mutates, growth swaps in a fresh one).
std::shared_ptr<const PrimeTable> default_table(i64 B);

// Binary cache: fixed 8-byte magic + version, then little-endian 64-bit
// (norm, a, b) triples.  load throws InvalidRange on a malformed file.
void save_prime_cache(const PrimeTable& t, const std::string& path);
PrimeTable load_prime_cache(const std::string& path);

// Every primary n with 1 <= N(n) <= X, ascending (norm, a, b).
std::vector<EisensteinInt> enumerate_primary(i64 X);

// Square-free primary n != 1 with n = 1 mod 9 and N(n) <= X.
std::vector<EisensteinInt> enumerate_thin_family(i64 X);

// Square-free coprime primary pairs (a, b) with a b^2 = 1 mod 9,
// a b^2 != 1, and conductor norm N(ab) <= X.
std::vector<std::pair<EisensteinInt, EisensteinInt>> enumerate_full_family(
    i64 X);

}  // namespace eisen
