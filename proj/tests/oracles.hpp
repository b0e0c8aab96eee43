// Test-side oracles, deliberately independent of the library's numerics:
// plain adaptive Simpson instead of Gauss-Kronrod, dense halving instead of
// the production bracketing. Used to compute expected values, never to
// implement them.
#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <vector>

namespace oracle {

using Fn = std::function<double(double)>;

inline double simpson(const Fn& f, double a, double b) {
  const double c = 0.5 * (a + b);
  return (b - a) / 6.0 * (f(a) + 4.0 * f(c) + f(b));
}

inline double adaptive_simpson_rec(const Fn& f, double a, double b,
                                   double whole, double tol, int depth) {
  const double c = 0.5 * (a + b);
  const double left = simpson(f, a, c);
  const double right = simpson(f, c, b);
  if (depth <= 0 || std::abs(left + right - whole) < 15.0 * tol)
    return left + right + (left + right - whole) / 15.0;
  return adaptive_simpson_rec(f, a, c, left, tol / 2.0, depth - 1) +
         adaptive_simpson_rec(f, c, b, right, tol / 2.0, depth - 1);
}

inline double integral(const Fn& f, double a, double b, double tol = 1e-11) {
  if (a == b) return 0.0;
  return adaptive_simpson_rec(f, a, b, simpson(f, a, b), tol, 48);
}

// Luxemburg norm by dense halving on the monotone constraint map.
inline double luxemburg(const Fn& m, const std::vector<double>& x) {
  double max_abs = 0.0, sum_abs = 0.0;
  for (double v : x) {
    max_abs = std::max(max_abs, std::abs(v));
    sum_abs += std::abs(v);
  }
  if (max_abs == 0.0) return 0.0;
  auto phi = [&](double t) {
    double s = 0.0;
    for (double v : x)
      if (v != 0.0) s += m(std::abs(v) / t);
    return s;
  };
  double lo = max_abs * 1e-9, hi = sum_abs;
  while (phi(hi) > 1.0) hi *= 2.0;
  while (phi(lo) < 1.0) lo *= 0.5;
  for (int i = 0; i < 500; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (phi(mid) > 1.0)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

// E max of n iid draws via int_0^inf (1 - (1 - S(x))^n) dx. hi must be large
// enough that n*S(hi) is negligible (or S has bounded support within hi).
inline double expected_max_iid(const Fn& survival, int n, double hi) {
  auto f = [&](double x) {
    // stable 1 - (1-S)^n
    const double ls = std::log1p(-survival(x));
    return -std::expm1(static_cast<double>(n) * ls);
  };
  return integral(f, 0.0, hi, 1e-12);
}

// Deterministic xorshift-based generator for test families; independent of
// the library's SplitMix construction.
class TestRng {
 public:
  explicit TestRng(std::uint64_t seed) : s_(seed ? seed : 0x9e3779b9ULL) {}
  double uniform() {
    s_ ^= s_ << 13;
    s_ ^= s_ >> 7;
    s_ ^= s_ << 17;
    return static_cast<double>(s_ >> 11) * 0x1.0p-53;
  }
  double range(double lo, double hi) { return lo + (hi - lo) * uniform(); }

 private:
  std::uint64_t s_;
};

}  // namespace oracle
