#include "numerics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace orlz {

namespace {

// Gauss-Kronrod 7/15 nodes and weights on [-1, 1].
constexpr double kXgk[8] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000};

constexpr double kWgk[8] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714};

constexpr double kWg[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327};

struct Interval {
  double lo, hi, value, err;
};

// One G7/K15 pass over [lo, hi]; err is |K15 - G7| with the usual damping.
Interval gk15(const Fn& f, double lo, double hi) {
  const double c = 0.5 * (lo + hi);
  const double h = 0.5 * (hi - lo);
  const double fc = f(c);
  double result_g = fc * kWg[3];
  double result_k = fc * kWgk[7];
  double result_abs = std::abs(fc) * kWgk[7];
  for (int j = 0; j < 7; ++j) {
    const double x = h * kXgk[j];
    const double f1 = f(c - x);
    const double f2 = f(c + x);
    result_k += kWgk[j] * (f1 + f2);
    result_abs += kWgk[j] * (std::abs(f1) + std::abs(f2));
    if (j % 2 == 1) result_g += kWg[j / 2] * (f1 + f2);
  }
  const double value = result_k * h;
  double err = std::abs((result_k - result_g) * h);
  const double scale = result_abs * h;
  if (scale > 0.0 && err > 0.0)
    err = std::min(err, scale * std::pow(200.0 * err / scale, 1.5));
  return {lo, hi, value, err};
}

}  // namespace

QuadResult integrate(const Fn& f, double a, double b, double rel_tol,
                     double abs_tol, int max_intervals) {
  QuadResult res;
  if (a == b) {
    res.converged = true;
    return res;
  }
  double sign = 1.0;
  if (b < a) {
    std::swap(a, b);
    sign = -1.0;
  }
  std::vector<Interval> segs;
  segs.push_back(gk15(f, a, b));
  res.evals = 15;
  while (true) {
    double total = 0.0, err = 0.0;
    for (const auto& s : segs) {
      total += s.value;
      err += s.err;
    }
    const double tol = std::max(abs_tol, rel_tol * std::abs(total));
    if (err <= tol) {
      res.value = sign * total;
      res.error = err;
      res.converged = true;
      return res;
    }
    if (static_cast<int>(segs.size()) >= max_intervals) {
      res.value = sign * total;
      res.error = err;
      res.converged = false;
      return res;
    }
    // Split the worst segment; ties broken by position for determinism.
    size_t worst = 0;
    for (size_t i = 1; i < segs.size(); ++i) {
      if (segs[i].err > segs[worst].err ||
          (segs[i].err == segs[worst].err && segs[i].lo < segs[worst].lo))
        worst = i;
    }
    const Interval seg = segs[worst];
    const double mid = 0.5 * (seg.lo + seg.hi);
    if (mid <= seg.lo || mid >= seg.hi) {
      // Interval at floating-point resolution; accept what we have.
      double total2 = 0.0, err2 = 0.0;
      for (const auto& s : segs) {
        total2 += s.value;
        err2 += s.err;
      }
      res.value = sign * total2;
      res.error = err2;
      res.converged = err2 <= std::max(abs_tol, 10 * rel_tol * std::abs(total2));
      return res;
    }
    segs[worst] = gk15(f, seg.lo, mid);
    segs.push_back(gk15(f, mid, seg.hi));
    res.evals += 30;
  }
}

QuadResult integrate_log(const Fn& f, double a, double b, double rel_tol,
                         double abs_tol) {
  if (!(a > 0.0) || !(b > a))
    throw std::invalid_argument("integrate_log: requires 0 < a < b");
  auto g = [&f](double y) {
    const double t = std::exp(y);
    return f(t) * t;
  };
  return integrate(g, std::log(a), std::log(b), rel_tol, abs_tol);
}

double invert_increasing(const Fn& f, double y, double lo, double hi,
                         double xtol) {
  if (!(hi > lo)) throw std::invalid_argument("invert_increasing: bad bracket");
  // Expand until f(lo) <= y <= f(hi).
  int guard = 0;
  while (f(hi) < y) {
    lo = hi;
    hi *= 2.0;
    if (++guard > 2000 || !std::isfinite(hi))
      throw std::domain_error("invert_increasing: target never reached");
  }
  guard = 0;
  while (f(lo) > y) {
    hi = lo;
    lo *= 0.5;
    if (++guard > 2000 || lo == 0.0) {
      if (f(0.0) > y)
        throw std::domain_error("invert_increasing: target below range");
      lo = 0.0;
      break;
    }
  }
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (f(mid) < y)
      lo = mid;
    else
      hi = mid;
    if (xtol > 0.0 && hi - lo <= xtol) break;
  }
  return 0.5 * (lo + hi);
}

double infimum_below(const Fn& f, double level, double lo, double hi) {
  if (f(lo) <= level) return lo;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (f(mid) <= level)
      hi = mid;
    else
      lo = mid;
  }
  return hi;
}

double maximize_concave(const Fn& f, double lo, double hi, double xtol) {
  const double inv_phi = 0.5 * (std::sqrt(5.0) - 1.0);
  double a = lo, b = hi;
  double x1 = b - inv_phi * (b - a);
  double x2 = a + inv_phi * (b - a);
  double f1 = f(x1), f2 = f(x2);
  for (int it = 0; it < 300 && b - a > xtol * std::max(1.0, std::abs(b)); ++it) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + inv_phi * (b - a);
      f2 = f(x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - inv_phi * (b - a);
      f1 = f(x1);
    }
    if (x1 >= x2) break;
  }
  return 0.5 * (a + b);
}

LimitEstimate limit_at_zero(const Fn& g, double t0, double ratio,
                            int max_steps, double tol) {
  LimitEstimate est;
  double t = t0;
  double prev = g(t);
  double prev_diff = 0.0;
  bool have_diff = false;
  int stable = 0;
  for (int k = 1; k < max_steps; ++k) {
    t *= ratio;
    if (t < 1e-280) break;
    const double cur = g(t);
    if (!std::isfinite(cur)) break;
    const double diff = cur - prev;
    const double scale = std::max({1.0, std::abs(cur), std::abs(prev)});
    if (std::abs(diff) <= tol * scale) {
      if (++stable >= 3) {
        est.value = cur;
        est.converged = true;
        return est;
      }
    } else {
      stable = 0;
      if (have_diff && std::abs(prev_diff) > 0.0) {
        const double rho = diff / prev_diff;
        // Geometrically decaying differences with a negligible remaining
        // tail: accept the extrapolated limit early.
        if (rho > 0.0 && rho < 0.9 &&
            std::abs(diff) * rho / (1.0 - rho) <= tol * scale) {
          est.value = cur + diff * rho / (1.0 - rho);
          est.converged = true;
          return est;
        }
      }
    }
    prev_diff = diff;
    have_diff = true;
    prev = cur;
  }
  est.value = prev;
  est.converged = false;
  return est;
}

double fd_derivative(const Fn& f, double x, int order, double h) {
  switch (order) {
    case 1:
      return (f(x + h) - f(x - h)) / (2.0 * h);
    case 2:
      return (f(x + h) - 2.0 * f(x) + f(x - h)) / (h * h);
    case 3:
      return (f(x + 2 * h) - 2.0 * f(x + h) + 2.0 * f(x - h) - f(x - 2 * h)) /
             (2.0 * h * h * h);
    default:
      throw std::invalid_argument("fd_derivative: order must be 1..3");
  }
}

std::vector<double> log_grid(double lo, double hi, int n) {
  if (!(lo > 0.0) || !(hi > lo) || n < 2)
    throw std::invalid_argument("log_grid: need 0 < lo < hi and n >= 2");
  std::vector<double> g(n);
  const double llo = std::log(lo), lhi = std::log(hi);
  for (int i = 0; i < n; ++i)
    g[i] = std::exp(llo + (lhi - llo) * i / (n - 1));
  g.front() = lo;
  g.back() = hi;
  return g;
}

}  // namespace orlz
