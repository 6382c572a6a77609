#include "eisen/sieve.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <mutex>

#include "eisen/factor.hpp"

namespace eisen {
namespace {

std::vector<i64> rational_primes(i64 limit) {
  std::vector<i64> out;
  if (limit < 2) return out;
  std::vector<bool> comp(limit + 1, false);
  for (i64 i = 2; i <= limit; ++i) {
    if (comp[i]) continue;
    out.push_back(i);
    for (i64 j = i * i; j <= limit; j += i) comp[j] = true;
  }
  return out;
}

void finalize(PrimeTable& t) {
  std::vector<std::size_t> idx(t.primes.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  std::sort(idx.begin(), idx.end(), [&](std::size_t x, std::size_t y) {
    return t.norms[x] != t.norms[y] ? t.norms[x] < t.norms[y]
                                    : t.primes[x] < t.primes[y];
  });
  std::vector<EisensteinInt> p(idx.size());
  std::vector<i64> n(idx.size());
  for (std::size_t i = 0; i < idx.size(); ++i) {
    p[i] = t.primes[idx[i]];
    n[i] = t.norms[idx[i]];
  }
  t.primes = std::move(p);
  t.norms = std::move(n);
  t.norm_index.clear();
  std::size_t lo = 0;
  while (lo < t.norms.size()) {
    std::size_t hi = lo;
    while (hi < t.norms.size() && t.norms[hi] == t.norms[lo]) ++hi;
    t.norm_index[t.norms[lo]] = {lo, hi};
    lo = hi;
  }
}

}  // namespace

PrimeTable sieve_primes(i64 B) {
  if (B < 2) throw BoundTooSmall("sieve_primes: B < 2");
  PrimeTable t;
  t.bound = B;
  for (i64 p : rational_primes(B)) {
    if (p == 3) continue;  // ramified: (1 - w) is excluded
    if (p % 3 == 1) {
      EisensteinInt pi = split_prime_above(p);
      EisensteinInt pib = primary_associate(conj(pi)).primary;
      t.primes.push_back(pi);
      t.norms.push_back(p);
      t.primes.push_back(pib);
      t.norms.push_back(p);
    } else if (p * p <= B) {
      t.primes.push_back(EisensteinInt{-p, 0});
      t.norms.push_back(p * p);
    }
  }
  finalize(t);
  return t;
}

std::shared_ptr<const PrimeTable> default_table(i64 B) {
  static std::mutex mu;
  static std::shared_ptr<const PrimeTable> shared;
  std::lock_guard<std::mutex> lk(mu);
  if (!shared || shared->bound < B) {
    i64 want = std::max<i64>(B, shared ? 2 * shared->bound : 0);
    shared = std::make_shared<const PrimeTable>(sieve_primes(want));
  }
  return shared;
}

namespace {
constexpr char kCacheMagic[8] = {'E', 'Z', 'W', 'P', 'R', 'M', '0', '1'};

void put_i64(std::FILE* f, i64 v) {
  unsigned char buf[8];
  for (int i = 0; i < 8; ++i) buf[i] = static_cast<unsigned char>(v >> (8 * i));
  if (std::fwrite(buf, 1, 8, f) != 8) throw InvalidRange("cache write failed");
}

i64 get_i64(std::FILE* f) {
  unsigned char buf[8];
  if (std::fread(buf, 1, 8, f) != 8) throw InvalidRange("cache truncated");
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(buf[i]) << (8 * i);
  return static_cast<i64>(v);
}
}  // namespace

void save_prime_cache(const PrimeTable& t, const std::string& path) {
  std::FILE* f = std::fopen(path.c_str(), "wb");
  if (!f) throw InvalidRange("cache: cannot open for write: " + path);
  try {
    if (std::fwrite(kCacheMagic, 1, 8, f) != 8)
      throw InvalidRange("cache write failed");
    put_i64(f, t.bound);
    put_i64(f, static_cast<i64>(t.primes.size()));
    for (std::size_t i = 0; i < t.primes.size(); ++i) {
      put_i64(f, t.norms[i]);
      put_i64(f, t.primes[i].a);
      put_i64(f, t.primes[i].b);
    }
  } catch (...) {
    std::fclose(f);
    throw;
  }
  std::fclose(f);
}

PrimeTable load_prime_cache(const std::string& path) {
  std::FILE* f = std::fopen(path.c_str(), "rb");
  if (!f) throw InvalidRange("cache: cannot open: " + path);
  PrimeTable t;
  try {
    char magic[8];
    if (std::fread(magic, 1, 8, f) != 8 ||
        std::memcmp(magic, kCacheMagic, 8) != 0)
      throw InvalidRange("cache: bad magic/version");
    t.bound = get_i64(f);
    i64 count = get_i64(f);
    if (t.bound < 2 || count < 0 || count > (i64(1) << 32))
      throw InvalidRange("cache: implausible header");
    t.primes.reserve(count);
    t.norms.reserve(count);
    for (i64 i = 0; i < count; ++i) {
      i64 n = get_i64(f);
      i64 a = get_i64(f);
      i64 b = get_i64(f);
      EisensteinInt z{a, b};
      if (norm(z) != n) throw InvalidRange("cache: norm mismatch");
      t.primes.push_back(z);
      t.norms.push_back(n);
    }
  } catch (...) {
    std::fclose(f);
    throw;
  }
  std::fclose(f);
  finalize(t);
  return t;
}

namespace {

// Visit lattice points a + bw with N <= X, optionally restricted to a
// fixed residue pattern mod `step` (step 1 = everything).
template <typename F>
void scan_region(i64 X, i64 step, i64 a0, i64 b0, F&& visit) {
  double r = 2.0 * std::sqrt(static_cast<double>(X) / 3.0) + 2.0;
  i64 A = static_cast<i64>(r);
  i64 astart = -A + ((a0 - (-A)) % step + step) % step;
  for (i64 a = astart; a <= A; a += step) {
    i64 bstart = -A + ((b0 - (-A)) % step + step) % step;
    for (i64 b = bstart; b <= A; b += step) {
      i64 n = a * a - a * b + b * b;
      if (n >= 1 && n <= X) visit(EisensteinInt{a, b}, n);
    }
  }
}

struct NormLess {
  bool operator()(const EisensteinInt& x, const EisensteinInt& y) const {
    i64 nx = norm(x), ny = norm(y);
    return nx != ny ? nx < ny : x < y;
  }
};

}  // namespace

std::vector<EisensteinInt> enumerate_primary(i64 X) {
  if (X < 1) throw InvalidRange("enumerate_primary: X < 1");
  std::vector<EisensteinInt> out;
  scan_region(X, 3, 1, 0, [&](EisensteinInt z, i64) { out.push_back(z); });
  std::sort(out.begin(), out.end(), NormLess{});
  return out;
}

std::vector<EisensteinInt> enumerate_thin_family(i64 X) {
  if (X < 1) throw InvalidRange("enumerate_thin_family: X < 1");
  std::vector<EisensteinInt> out;
  scan_region(X, 9, 1, 0, [&](EisensteinInt z, i64) {
    if (z == EIS_ONE) return;
    if (is_squarefree(z)) out.push_back(z);
  });
  std::sort(out.begin(), out.end(), NormLess{});
  return out;
}

std::vector<std::pair<EisensteinInt, EisensteinInt>> enumerate_full_family(
    i64 X) {
  if (X < 1) throw InvalidRange("enumerate_full_family: X < 1");
  static const EisensteinInt nine{9, 0};
  std::vector<std::pair<EisensteinInt, EisensteinInt>> out;
  std::vector<EisensteinInt> as;
  scan_region(X, 3, 1, 0, [&](EisensteinInt z, i64) {
    if (is_squarefree(z)) as.push_back(z);
  });
  for (const EisensteinInt& a : as) {
    i64 cap = X / norm(a);
    if (cap < 1) continue;
    scan_region(cap, 3, 1, 0, [&](EisensteinInt b, i64) {
      if (!is_squarefree(b)) return;
      if (!coprime(a, b)) return;
      EisensteinInt ab2 = mod_reduce(mul(a, mul(b, b)), nine);
      if (ab2 != EIS_ONE) return;
      if (mul(a, mul(b, b)) == EIS_ONE) return;
      out.push_back({a, b});
    });
  }
  std::sort(out.begin(), out.end(),
            [](const auto& x, const auto& y) {
              i64 nx = norm(mul(x.first, x.second));
              i64 ny = norm(mul(y.first, y.second));
              if (nx != ny) return nx < ny;
              if (x.first != y.first) return x.first < y.first;
              return x.second < y.second;
            });
  return out;
}

}  // namespace eisen
