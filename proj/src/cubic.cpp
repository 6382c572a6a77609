#include "eisen/cubic.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace eisen {
namespace {

// omega exponent of a unit: u = +-w^j -> j  (chi(-1) = 1 since -1 is a cube)
int unit_omega_exponent(const EisensteinInt& u) {
  if (u.a != 0 && u.b == 0) return 0;   // +-1
  if (u.a == 0) return 1;               // +-w
  return 2;                             // +-w^2
}

// chi_n(w) = w^{(N(n)-1)/3}
int omega_supplement(i64 nn) { return static_cast<int>(((nn - 1) / 3) % 3); }

/*
  chi_n(1 - w) for primary n = a + bw.  The reciprocity law in use covers
  only arguments = +-1 mod 3, so the ramified prime needs its own rule.
  Derived empirically against the factoring evaluator over every primary
  modulus of norm <= 2*10^4 and frozen here: the exponent depends on
  a mod 9 alone (a = 1, 4, 7 mod 9 -> 0, 1, 2), independent of b.
*/
int lambda_supplement(const EisensteinInt& n) {
  i64 am = n.a % 9;
  if (am < 0) am += 9;
  return static_cast<int>(((am - 1) / 3) % 3);
}

}  // namespace

CubicValue cubic_symbol_prime(const EisensteinInt& a, const EisensteinInt& pi) {
  i64 np = norm(pi);
  if (np % 3 == 0) throw ModulusNotCoprimeToThree("cubic_symbol_prime");
  EisensteinInt s = modpow(a, (np - 1) / 3, pi);
  if (s == mod_reduce(EIS_ZERO, pi)) return CubicValue::Zero();
  for (int e = 0; e < 3; ++e)
    if (s == mod_reduce(omega_pow(e), pi)) return CubicValue::Root(e);
  throw InvalidRange("cubic_symbol_prime: value not a root of unity");
}

CubicValue cubic_symbol_slow(const EisensteinInt& a, const EisensteinInt& n) {
  i64 nn = norm(n);
  if (nn == 0) throw ZeroModulus("cubic_symbol_slow");
  if (nn % 3 == 0) throw ModulusNotCoprimeToThree("cubic_symbol_slow");
  CubicValue out = CubicValue::Root(0);
  for (const auto& pp : factor(n).factors) {
    CubicValue v = cubic_symbol_prime(a, pp.prime);
    out = out * v.pow(pp.exp);
    if (out.zero) return out;
  }
  return out;
}

CubicValue cubic_symbol_fast(const EisensteinInt& a0, const EisensteinInt& n0) {
  i64 nn = norm(n0);
  if (nn == 0) throw ZeroModulus("cubic_symbol_fast");
  if (nn % 3 == 0) throw ModulusNotCoprimeToThree("cubic_symbol_fast");
  EisensteinInt n = primary_associate(n0).primary;
  EisensteinInt a = divmod_rounded(a0, n).r;
  int e = 0;
  // Invariant: answer = w^e * chi_n(a), n primary, N(a) <= (3/4) N(n).
  while (true) {
    if (norm(a) == 0)
      return norm(n) == 1 ? CubicValue::Root(e) : CubicValue::Zero();
    int k = 0;
    while (norm(a) % 3 == 0) {
      a = exact_div(a, EIS_LAMBDA);
      ++k;
    }
    auto [u, ap] = primary_associate(a);
    // a = lambda^k u^{-1} ap, so the unit's contribution enters inverted.
    e += k * lambda_supplement(n) -
         unit_omega_exponent(u) * omega_supplement(norm(n));
    if (norm(ap) == 1) return CubicValue::Root(e);
    // reciprocity for primary arguments: chi_n(ap) = chi_ap(n)
    a = divmod_rounded(n, ap).r;
    n = ap;
  }
}

CharacterSpec classify(const EisensteinInt& n) {
  i64 nn = norm(n);
  if (nn == 0) throw ZeroModulus("classify");
  if (nn % 3 == 0) throw ModulusNotCoprimeToThree("classify");
  CharacterSpec spec;
  spec.modulus = n;
  spec.factorization = factor(n);
  SquarefreeSplit s = squarefree_split(n);
  spec.n1 = s.n1;
  spec.n2 = s.n2;
  spec.n3 = s.n3;
  spec.conductor = mul(s.n1, s.n2);
  spec.is_primitive = norm(s.n3) == 1;
  spec.is_hecke = nn % 9 == 1;
  return spec;
}

namespace {

const EisensteinInt NINE{9, 0};

RayClassGroup build_ray_class_mod9() {
  // All 54 residues coprime to 3 in the 9x9 box.
  std::vector<EisensteinInt> residues;
  for (i64 a = 0; a < 9; ++a)
    for (i64 b = 0; b < 9; ++b) {
      EisensteinInt z{a, b};
      if (norm(z) % 3 != 0) residues.push_back(z);
    }

  auto rep = [&](const EisensteinInt& x) {
    EisensteinInt best{0, 0};
    bool first = true;
    for (const auto& u : units()) {
      EisensteinInt c = mod_reduce(mul(u, x), NINE);
      if (first || c < best) {
        best = c;
        first = false;
      }
    }
    return best;
  };

  RayClassGroup g;
  for (const auto& z : residues) {
    EisensteinInt r = rep(z);
    if (std::find(g.class_reps.begin(), g.class_reps.end(), r) ==
        g.class_reps.end())
      g.class_reps.push_back(r);
  }
  std::sort(g.class_reps.begin(), g.class_reps.end());
  g.h9 = static_cast<int>(g.class_reps.size());

  auto index_of = [&](const EisensteinInt& x) {
    EisensteinInt r = rep(x);
    for (int i = 0; i < g.h9; ++i)
      if (g.class_reps[i] == r) return i;
    throw InvalidRange("ray class: representative not found");
  };

  // multiplication table and element orders on the quotient
  std::vector<std::vector<int>> mt(g.h9, std::vector<int>(g.h9));
  for (int i = 0; i < g.h9; ++i)
    for (int j = 0; j < g.h9; ++j)
      mt[i][j] = index_of(mul(g.class_reps[i], g.class_reps[j]));
  int id = index_of(EIS_ONE);
  auto order_of = [&](int i) {
    int x = i, k = 1;
    while (x != id) {
      x = mt[x][i];
      ++k;
    }
    return k;
  };
  std::vector<int> orders(g.h9);
  int ex = 1;
  for (int i = 0; i < g.h9; ++i) {
    orders[i] = order_of(i);
    ex = std::lcm(ex, orders[i]);
  }
  g.exponent = ex;

  // Discrete-log coordinates relative to a generating set.  The quotient
  // is a small abelian group: either cyclic (one generator of order h9) or
  // a product of two cyclic factors of order `ex` with h9 = ex^2.
  std::vector<std::vector<int>> coords(g.h9);
  std::vector<int> gen_orders;
  int g1 = -1;
  for (int i = 0; i < g.h9; ++i)
    if (orders[i] == ex) {
      g1 = i;
      break;
    }
  if (ex == g.h9) {
    gen_orders = {ex};
    int x = id;
    for (int k = 0; k < ex; ++k) {
      coords[x] = {k};
      x = mt[x][g1];
    }
  } else if (static_cast<i64>(ex) * ex == g.h9) {
    std::vector<int> cyc(ex);
    std::vector<bool> in_cyc(g.h9, false);
    int x = id;
    for (int k = 0; k < ex; ++k) {
      cyc[k] = x;
      in_cyc[x] = true;
      x = mt[x][g1];
    }
    int g2 = -1;
    for (int i = 0; i < g.h9; ++i)
      if (!in_cyc[i] && orders[i] == ex) {
        g2 = i;
        break;
      }
    if (g2 < 0) throw InvalidRange("ray class: no second generator");
    gen_orders = {ex, ex};
    int y = id;
    for (int k2 = 0; k2 < ex; ++k2) {
      int xy = y;
      for (int k1 = 0; k1 < ex; ++k1) {
        if (!coords[xy].empty() && !(k1 == 0 && k2 == 0))
          throw InvalidRange("ray class: generators not independent");
        coords[xy] = {k1, k2};
        xy = mt[xy][g1];
      }
      y = mt[y][g2];
    }
  } else {
    throw UnsupportedRange("ray class: unexpected group shape");
  }

  // characters: one per tuple of exponents on the generators
  int nchars = 1;
  for (int o : gen_orders) nchars *= o;
  for (int t = 0; t < nchars; ++t) {
    RayClassCharacter chi;
    chi.label = t;
    chi.exponent_modulus = ex;
    int tt = t;
    std::vector<int> cexp;
    for (int o : gen_orders) {
      cexp.push_back(tt % o);
      tt /= o;
    }
    int ord = 1;
    for (std::size_t j = 0; j < gen_orders.size(); ++j)
      if (cexp[j]) ord = std::lcm(ord, gen_orders[j] / std::gcd(gen_orders[j], cexp[j]));
    chi.order = ord;
    for (int i = 0; i < g.h9; ++i) {
      long k = 0;
      for (std::size_t j = 0; j < gen_orders.size(); ++j)
        k += static_cast<long>(cexp[j]) * coords[i][j] * (ex / gen_orders[j]);
      chi.table[{g.class_reps[i].a, g.class_reps[i].b}] =
          static_cast<int>(k % ex);
    }
    g.characters.push_back(chi);
  }
  // principal character first, then by label
  std::stable_sort(g.characters.begin(), g.characters.end(),
                   [](const RayClassCharacter& x, const RayClassCharacter& y) {
                     return (x.order == 1) > (y.order == 1);
                   });
  for (int i = 0; i < nchars; ++i) g.characters[i].label = i;
  return g;
}

}  // namespace

const RayClassGroup& ray_class_mod9() {
  static const RayClassGroup g = build_ray_class_mod9();
  return g;
}

EisensteinInt ray_class_rep(const EisensteinInt& x) {
  if (norm(x) % 3 == 0) throw NotCoprimeToThree("ray_class_rep");
  EisensteinInt best{0, 0};
  bool first = true;
  for (const auto& u : units()) {
    EisensteinInt c = mod_reduce(mul(u, x), NINE);
    if (first || c < best) {
      best = c;
      first = false;
    }
  }
  return best;
}

int RayClassCharacter::exponent(const EisensteinInt& x) const {
  EisensteinInt r = ray_class_rep(x);
  auto it = table.find({r.a, r.b});
  if (it == table.end()) throw InvalidRange("ray class character: bad class");
  return it->second;
}

std::complex<double> RayClassCharacter::value(const EisensteinInt& x) const {
  int k = exponent(x);
  double t = 2.0 * 3.14159265358979323846 * k / exponent_modulus;
  return {std::cos(t), std::sin(t)};
}

}  // namespace eisen
