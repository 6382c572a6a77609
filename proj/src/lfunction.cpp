#include "eisen/lfunction.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "eisen/sieve.hpp"
#include "eisen/summation.hpp"

namespace eisen {
namespace {

using cd = std::complex<double>;

constexpr double kPi = 3.14159265358979323846;

/*
  Height at which the incomplete-gamma arguments start rotating off the
  positive real axis.  With plain real weights the AFE terms stay O(1) while
  Lambda(1/2 + it) ~ e^{-pi t / 2}, so doubles lose the answer entirely once
  t is around 12.  Rotating the argument to arg w = pi/2 - kTilt/|t| shrinks
  every term to e^{kTilt} of the answer's size instead, which costs only
  ~4-5 digits at any height.
*/
constexpr double kTilt = 10.0;
// Terms decay like exp(-(m/Q) cos alpha) with cos alpha >= ~kTilt/|t|, so
// keeping m/Q up to max(|t|, kTilt) (kTilt + 40)/kTilt leaves a tail below
// e^-40 of the largest weight.
constexpr double kTailLog = 40.0;

i64 terms_needed(double q, double t) {
  double m =
      q * std::max(std::abs(t), kTilt) * ((kTilt + kTailLog) / kTilt);
  return static_cast<i64>(std::ceil(m)) + 1;
}

double tilt_angle(double t) {
  if (std::abs(t) <= kTilt) return 0.0;
  return (t > 0 ? 1.0 : -1.0) * (kPi / 2 - kTilt / std::abs(t));
}

}  // namespace

// ---------------------------------------------------------------------------
// Special functions.

std::complex<double> log_gamma(std::complex<double> z) {
  // Lanczos, g = 7, 9 terms; relative error ~1e-14 on Re z >= 1/2.
  static const double kC[9] = {
      0.99999999999980993,     676.5203681218851,     -1259.1392167224028,
      771.32342877765313,      -176.61502916214059,   12.507343278686905,
      -0.13857109526572012,    9.9843695780195716e-6, 1.5056327351493116e-7};
  if (z.real() < 0.5) {
    // Gamma(z) Gamma(1 - z) = pi / sin(pi z)
    return std::log(kPi / std::sin(kPi * z)) - log_gamma(1.0 - z);
  }
  cd zm = z - 1.0;
  cd x = kC[0];
  for (int i = 1; i < 9; ++i) x += kC[i] / (zm + static_cast<double>(i));
  cd t = zm + 7.5;
  return 0.918938533204672742 /* log(2 pi)/2 */ +
         (zm + 0.5) * std::log(t) - t + std::log(x);
}

std::complex<double> digamma(std::complex<double> z) {
  if (z.real() < 0.5) {
    // psi(z) = psi(1 - z) - pi cot(pi z)
    return digamma(1.0 - z) - kPi / std::tan(kPi * z);
  }
  cd acc(0.0, 0.0);
  while (std::abs(z) < 12.0) {
    acc -= 1.0 / z;
    z += 1.0;
  }
  // psi(z) = log z - 1/(2z) - sum_n B_{2n} / (2n z^{2n})
  static const double kB[6] = {1.0 / 12,  -1.0 / 120,       1.0 / 252,
                               -1.0 / 240, 1.0 / 132, -691.0 / 32760};
  cd inv = 1.0 / z;
  cd inv2 = inv * inv;
  cd s = std::log(z) - 0.5 * inv;
  cd p = inv2;
  for (int i = 0; i < 6; ++i) {
    s -= kB[i] * p;
    p *= inv2;
  }
  return acc + s;
}

std::complex<double> upper_gamma(std::complex<double> s,
                                 std::complex<double> w) {
  double aw = std::abs(w);
  if (aw == 0.0) return std::exp(log_gamma(s));
  /*
    Branch by Re w, not |w|: the series route ends in Gamma(s) - gamma(s, w),
    a subtraction that loses a factor e^{Re w}, while the Lentz fraction is
    clean there but drifts once |w| sits deep inside |s| with little real
    part.  The two regimes overlap comfortably around Re w = 4; the |w| cap
    keeps the series from being fed arguments whose terms first grow.
  */
  if (w.real() < 4.0 && aw < 1.2 * std::abs(s) + 8.0) {
    // Gamma(s, w) = Gamma(s) - w^s e^{-w} sum_{k>=0} w^k / (s (s+1)...(s+k))
    cd term = 1.0 / s;
    cd sum = term;
    for (int k = 1; k <= 4000; ++k) {
      term *= w / (s + static_cast<double>(k));
      sum += term;
      if (std::abs(term) <= 1e-17 * std::abs(sum)) {
        return std::exp(log_gamma(s)) - std::exp(s * std::log(w) - w) * sum;
      }
    }
    throw InsufficientTruncation("upper_gamma: power series stalled");
  }
  // Legendre continued fraction by the modified Lentz scheme.
  const double kTiny = 1e-290;
  cd b = w + 1.0 - s;
  cd c(1.0 / kTiny, 0.0);
  cd d = std::abs(b) < kTiny ? cd(1.0 / kTiny, 0.0) : 1.0 / b;
  cd h = d;
  for (int i = 1; i <= 6000; ++i) {
    cd an = -static_cast<double>(i) * (static_cast<double>(i) - s);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < kTiny) d = kTiny;
    c = b + an / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    cd del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < 1e-16)
      return std::exp(s * std::log(w) - w) * h;
  }
  throw InsufficientTruncation("upper_gamma: continued fraction stalled");
}

// ---------------------------------------------------------------------------
// Coefficients.

LData coefficients(const CharacterSpec& chi, i64 M) {
  if (!chi.is_primitive)
    throw NotPrimitive("coefficients: character is imprimitive");
  if (!chi.is_hecke)
    throw NotHecke("coefficients: N(modulus) != 1 mod 9, not trivial on units");
  if (norm(chi.modulus) > 2000)
    throw InvalidRange("coefficients: modulus norm above supported cap 2000");
  if (M < 1 || M > 2000000) throw InvalidRange("coefficients: bad M");

  LData ld;
  ld.chi = chi;
  ld.M = M;
  ld.conductor_norm = norm(chi.conductor);
  ld.q = std::sqrt(3.0 * static_cast<double>(ld.conductor_norm)) / (2.0 * kPi);
  RootNumber w = root_number(chi);
  ld.root_number = w.value;
  ld.epsilon = w.value / std::sqrt(static_cast<double>(ld.conductor_norm));

  // Value of the primitive character at a prime ideal (g).  chi factors as
  // chi_{n1} chi_{n2}^2 pointwise, and that product is defined modulo the
  // conductor n1 n2, so primes dividing the modulus but not the conductor
  // get their honest nonzero value.
  auto char_at = [&chi](const EisensteinInt& g) {
    CubicValue v = cubic_symbol_fast(g, chi.n1);
    if (norm(chi.n2) > 1) v = v * cubic_symbol_fast(g, chi.n2).pow(2);
    return v.to_complex();
  };

  // Prime ideals of norm <= M: the ramified (lambda) of norm 3, then every
  // primary prime (split primes give two table entries, inert give norm q^2).
  std::vector<std::pair<i64, cd>> ideals;
  if (M >= 3) ideals.push_back({3, char_at(EIS_LAMBDA)});
  auto table = default_table(std::max<i64>(M, 4));
  for (std::size_t i = 0; i < table->primes.size(); ++i) {
    if (table->norms[i] > M) break;
    ideals.push_back({table->norms[i], char_at(table->primes[i])});
  }

  std::vector<cd> res(static_cast<std::size_t>(M) + 1, cd(0.0, 0.0));
  res[1] = cd(1.0, 0.0);
  for (const auto& [p, chv] : ideals) {
    if (chv == cd(0.0, 0.0)) continue;
    std::vector<cd> next = res;  // convolve with 1 + chv T_p + chv^2 T_p^2 ...
    i64 pk = p;
    cd ck = chv;
    while (true) {
      for (i64 m = 1; m * pk <= M; ++m)
        if (res[m] != cd(0.0, 0.0)) next[m * pk] += res[m] * ck;
      if (pk > M / p) break;
      pk *= p;
      ck *= chv;
    }
    res = std::move(next);
  }
  ld.a = std::move(res);
  return ld;
}

// ---------------------------------------------------------------------------
// Completed L-function.

std::complex<double> lambda_eval(const LData& ld, std::complex<double> s,
                                 double* err_estimate) {
  if (ld.M < 1 || ld.a.size() != static_cast<std::size_t>(ld.M) + 1)
    throw InvalidRange("lambda_eval: malformed LData");
  double sig = s.real(), t = s.imag();
  if (sig < -6.0 || sig > 7.0 || std::abs(t) > 35.0)
    throw InvalidRange("lambda_eval: s outside supported window");
  i64 need = terms_needed(ld.q, t);
  if (ld.M < need)
    throw InsufficientTruncation("lambda_eval: need M >= " +
                                 std::to_string(need) + ", have " +
                                 std::to_string(ld.M));

  /*
    Smoothed AFE: for any |delta| = 1 with Re delta > 0,

        Lambda(s) = sum_m a_m (Q/m)^s Gamma(s, (m/Q) delta)
                  + eps sum_m conj(a_m) (Q/m)^{1-s} Gamma(1-s, (m/Q)/delta),

    exactly (rotate the Mellin contour of Q^s Gamma(s) m^{-s}).
  */
  double alpha = tilt_angle(t);
  cd delta(std::cos(alpha), std::sin(alpha));
  cd deltabar = std::conj(delta);
  cd oms = 1.0 - s;
  double logq = std::log(ld.q);

  ComplexSum s1, s2;
  double abs_acc = 0.0, last1 = 0.0, last2 = 0.0;
  for (i64 m = 1; m <= need; ++m) {
    cd am = ld.a[static_cast<std::size_t>(m)];
    if (am == cd(0.0, 0.0)) continue;
    double lg = logq - std::log(static_cast<double>(m));
    double x = static_cast<double>(m) / ld.q;
    cd u1 = am * std::exp(s * lg) * upper_gamma(s, x * delta);
    cd u2 = std::conj(am) * std::exp(oms * lg) * upper_gamma(oms, x * deltabar);
    s1.add(u1);
    s2.add(u2);
    last1 = std::abs(u1);
    last2 = std::abs(u2);
    abs_acc += std::abs(u1) + std::abs(u2);
  }
  cd total = s1.value() + ld.epsilon * s2.value();
  if (err_estimate != nullptr) {
    // geometric-tail heuristic plus accumulated rounding
    double cosa = std::max(std::cos(alpha), 0.02);
    *err_estimate = (last1 + last2) * (ld.q / cosa + 1.0) * 4.0 +
                    1e-16 * abs_acc;
  }
  return total;
}

std::complex<double> l_eval(const LData& ld, std::complex<double> s) {
  return lambda_eval(ld, s) *
         std::exp(-(s * std::log(ld.q)) - log_gamma(s));
}

double fe_residual(const LData& ld, const LData& ld_conj,
                   std::complex<double> s) {
  if (ld_conj.conductor_norm != ld.conductor_norm)
    throw InvalidRange("fe_residual: conjugate data has a different conductor");
  cd lhs = lambda_eval(ld, s);
  cd rhs = ld.epsilon * lambda_eval(ld_conj, 1.0 - s);
  return std::abs(lhs - rhs);
}

// ---------------------------------------------------------------------------
// Zeros.

namespace {

// Complex secant iteration on F(tc) = Lambda(1/2 + i tc) from a real start.
// Genuine simple zeros pull the iterate back to (numerically) real tc.
bool secant_root(const LData& ld, cd t0, cd t1, cd* out) {
  auto F = [&ld](cd tc) {
    return lambda_eval(ld, cd(0.5, 0.0) + cd(0.0, 1.0) * tc);
  };
  cd f0 = F(t0), f1 = F(t1);
  for (int it = 0; it < 80; ++it) {
    cd den = f1 - f0;
    if (std::abs(den) == 0.0) return false;
    cd t2 = t1 - f1 * (t1 - t0) / den;
    if (!std::isfinite(t2.real()) || !std::isfinite(t2.imag())) return false;
    if (std::abs(t2 - t1) > 3.0) return false;  // shot out of the basin
    if (std::abs(t2 - t1) < 1e-12 * std::max(1.0, std::abs(t2))) {
      *out = t2;
      return true;
    }
    t0 = t1;
    f0 = f1;
    t1 = t2;
    f1 = F(t2);
  }
  return false;
}

// Zero count of Lambda inside the rectangle [sig_lo, sig_hi] x [t_lo, t_hi]
// by the argument principle.  Steps adapt so each increment of arg Lambda
// stays below pi/2; a contour point pinned near a zero, or a non-integral
// total, reports degenerate instead of a count.
int winding_count(const LData& ld, double sig_lo, double sig_hi, double t_lo,
                  double t_hi, bool* degenerate) {
  *degenerate = false;
  const cd corners[5] = {cd(sig_hi, t_lo), cd(sig_hi, t_hi), cd(sig_lo, t_hi),
                         cd(sig_lo, t_lo), cd(sig_hi, t_lo)};
  double total = 0.0;
  cd v_prev = lambda_eval(ld, corners[0]);
  for (int e = 0; e < 4; ++e) {
    cd a = corners[e], b = corners[e + 1];
    double len = std::abs(b - a);
    double step = 1.0 / std::max(2, static_cast<int>(std::ceil(len / 0.05)));
    double pos = 0.0;
    while (pos < 1.0 - 1e-12) {
      double npos = std::min(1.0, pos + step);
      while (true) {
        cd v = lambda_eval(ld, a + (b - a) * npos);
        double dphi = (std::abs(v) == 0.0) ? kPi : std::arg(v / v_prev);
        if (std::abs(dphi) < kPi / 2) {
          total += dphi;
          v_prev = v;
          pos = npos;
          break;
        }
        if (npos - pos < 1e-7) {  // zero essentially on the contour
          *degenerate = true;
          return 0;
        }
        npos = pos + (npos - pos) / 2;
      }
    }
  }
  double wind = total / (2 * kPi);
  long n = std::lround(wind);
  if (std::abs(wind - static_cast<double>(n)) > 0.1) {
    *degenerate = true;
    return 0;
  }
  return static_cast<int>(n);
}

// winding_count with the rectangle jittered until no zero pins the contour.
int certified_count(const LData& ld, double t_lo, double t_hi) {
  double half = 0.45;
  for (int attempt = 0; attempt < 5; ++attempt) {
    bool degenerate = false;
    int n = winding_count(ld, 0.5 - half, 0.5 + half, t_lo, t_hi, &degenerate);
    if (!degenerate) return n;
    half += 0.013;
    t_lo -= 3.1e-4;
    t_hi += 2.7e-4;
  }
  throw CountMismatch("find_zeros: contour pinned by a zero after 5 jitters");
}

}  // namespace

ZeroList find_zeros(const LData& ld, double T, double delta) {
  if (!(T > 0.0) || T > 30.0)
    throw InvalidRange("find_zeros: T outside (0, 30]");
  if (!(delta > 0.0) || delta > 0.1)
    throw InvalidRange("find_zeros: delta outside (0, 0.1]");
  const double kPad = 0.1, kScanPad = 0.25;
  (void)lambda_eval(ld, cd(0.5, T + kScanPad));  // validates M up front

  double h = 0.05;
  for (int attempt = 0;; ++attempt) {
    // |Lambda| along the critical line, a little beyond both endpoints so
    // the certification rectangle never outruns the scan.
    int nsteps = static_cast<int>(std::ceil((T + 2 * kScanPad) / h));
    std::vector<double> ts(nsteps + 1), av(nsteps + 1);
    double vmax = 0.0;
    for (int i = 0; i <= nsteps; ++i) {
      ts[i] = -kScanPad + (T + 2 * kScanPad) * i / nsteps;
      av[i] = std::abs(lambda_eval(ld, cd(0.5, ts[i])));
      vmax = std::max(vmax, av[i]);
    }

    // refine every local minimum; keep the ones that are actually zeros
    std::vector<double> roots;
    for (int i = 1; i + 1 <= nsteps; ++i) {
      if (!(av[i] <= av[i - 1] && av[i] <= av[i + 1])) continue;
      cd root;
      if (!secant_root(ld, cd(ts[i], 0.0), cd(ts[i] + h / 3, 0.0), &root))
        continue;
      if (root.real() < -kScanPad || root.real() > T + kScanPad) continue;
      cd val = lambda_eval(ld, cd(0.5, 0.0) + cd(0.0, 1.0) * root);
      if (std::abs(val) > 1e-9 * vmax) continue;  // inter-zero dip
      if (std::abs(root.imag()) > 1e-5)
        throw CountMismatch("find_zeros: zero off the critical line near t = " +
                            std::to_string(root.real()));
      roots.push_back(root.real());
    }
    std::sort(roots.begin(), roots.end());

    // cluster rediscoveries of one zero; a cluster of several refinements
    // gets its true multiplicity from a tight local winding count
    std::vector<CriticalZero> found;
    std::vector<int> cluster_size;
    for (double g : roots) {
      if (!found.empty() && g - found.back().gamma < 1e-6) {
        ++cluster_size.back();
      } else {
        found.push_back({g, 1});
        cluster_size.push_back(1);
      }
    }
    for (std::size_t i = 0; i < found.size(); ++i) {
      if (cluster_size[i] > 1)
        found[i].multiplicity =
            certified_count(ld, found[i].gamma - 1e-3, found[i].gamma + 1e-3);
    }

    int inside = 0;
    for (const auto& z : found)
      if (z.gamma > -kPad && z.gamma < T + kPad) inside += z.multiplicity;
    int certified = certified_count(ld, -kPad, T + kPad);
    if (certified == inside) {
      ZeroList zl;
      zl.chi = ld.chi;
      zl.T = T;
      for (const auto& z : found)
        if (z.gamma >= -1e-12 && z.gamma <= T + 1e-12)
          zl.zeros.push_back({std::max(z.gamma, 0.0), z.multiplicity});
      return zl;
    }
    if (attempt >= 2)
      throw CountMismatch("find_zeros: winding count " +
                          std::to_string(certified) + " vs " +
                          std::to_string(inside) + " located zeros");
    h /= 2;  // scan again, finer
  }
}

// ---------------------------------------------------------------------------
// Persistence.

void save_zero_list(const std::string& path, const ZeroList& zl) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw InvalidRange("save_zero_list: cannot open " + path);
  out << "# eisen zero-list v1\n";
  out << "n_a,n_b,norm,gamma,multiplicity\n";
  char buf[40];
  for (const auto& z : zl.zeros) {
    std::snprintf(buf, sizeof buf, "%.17g", z.gamma);
    out << zl.chi.modulus.a << ',' << zl.chi.modulus.b << ','
        << norm(zl.chi.modulus) << ',' << buf << ',' << z.multiplicity
        << '\n';
  }
}

ZeroList load_zero_list(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidRange("load_zero_list: cannot open " + path);
  ZeroList zl;
  std::string line;
  bool saw_header = false, have_mod = false;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    if (!saw_header) {
      if (line != "n_a,n_b,norm,gamma,multiplicity")
        throw InvalidRange("load_zero_list: unrecognized header");
      saw_header = true;
      continue;
    }
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream ss(line);
    i64 na = 0, nb = 0, nn = 0;
    double g = 0.0;
    int mult = 0;
    if (!(ss >> na >> nb >> nn >> g >> mult))
      throw InvalidRange("load_zero_list: malformed row");
    EisensteinInt mod{na, nb};
    if (norm(mod) != nn) throw InvalidRange("load_zero_list: norm mismatch");
    if (!have_mod) {
      zl.chi = classify(mod);
      have_mod = true;
    } else if (!(mod == zl.chi.modulus)) {
      throw InvalidRange("load_zero_list: mixed moduli in one file");
    }
    zl.zeros.push_back({g, mult});
    zl.T = std::max(zl.T, g);
  }
  if (!saw_header) throw InvalidRange("load_zero_list: missing header");
  return zl;
}

}  // namespace eisen
