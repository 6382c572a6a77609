#pragma once
#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <thread>
#include <vector>

namespace eisen {

// Neumaier's improvement of Kahan summation: tracks a running compensation
// that also survives the case |term| > |sum|.
struct NeumaierSum {
  double s = 0.0;
  double c = 0.0;

  void add(double x) {
    double t = s + x;
    if (std::fabs(s) >= std::fabs(x))
      c += (s - t) + x;
    else
      c += (x - t) + s;
    s = t;
  }
  double value() const { return s + c; }
};

struct ComplexSum {
  NeumaierSum re, im;

  void add(std::complex<double> z) {
    re.add(z.real());
    im.add(z.imag());
  }
  void add(double x, double y) {
    re.add(x);
    im.add(y);
  }
  std::complex<double> value() const { return {re.value(), im.value()}; }
};

// Deterministic parallel reduction: the index range is cut into fixed-size
// blocks (independent of the worker count), each block is summed with
// compensation by whichever worker picks it up, and the per-block results are
// combined in block order.  Changing the worker count therefore cannot change
// the result by even one ULP.
inline std::complex<double> block_sum(
    std::size_t n, std::size_t block,
    const std::function<std::complex<double>(std::size_t, std::size_t)>& piece,
    unsigned workers = 1) {
  if (block == 0) block = 1;
  std::size_t nblocks = (n + block - 1) / block;
  std::vector<std::complex<double>> parts(nblocks);
  auto run = [&](unsigned id) {
    for (std::size_t b = id; b < nblocks; b += workers) {
      std::size_t lo = b * block;
      std::size_t hi = std::min(n, lo + block);
      parts[b] = piece(lo, hi);
    }
  };
  if (workers <= 1) {
    run(0);
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(run, w);
    for (auto& t : pool) t.join();
  }
  ComplexSum total;
  for (const auto& p : parts) total.add(p);
  return total.value();
}

}  // namespace eisen
