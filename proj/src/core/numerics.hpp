#pragma once

#include <functional>
#include <limits>
#include <vector>

namespace orlz {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

using Fn = std::function<double(double)>;

struct QuadResult {
  double value = 0.0;
  double error = 0.0;  // absolute error estimate
  int evals = 0;
  bool converged = false;
};

// Adaptive Gauss-Kronrod 7/15 on a finite interval [a, b]. Repeatedly splits
// the interval with the largest error estimate until the total estimate meets
// max(abs_tol, rel_tol * |value|) or the interval budget runs out.
QuadResult integrate(const Fn& f, double a, double b, double rel_tol = 1e-10,
                     double abs_tol = 1e-14, int max_intervals = 4000);

// Same integral computed in log space via t = exp(y). Requires 0 < a < b.
// Power-law integrands become smooth exponentials under this substitution,
// so it converges fast even when f blows up or vanishes steeply near a.
QuadResult integrate_log(const Fn& f, double a, double b,
                         double rel_tol = 1e-10, double abs_tol = 1e-14);

// Solve f(x) = y for increasing f. The bracket [lo, hi] is expanded
// geometrically until it straddles y, then bisected to floating-point
// resolution (the iteration stops once the midpoint collapses onto an
// endpoint, so xtol is a cap, not a promise).
double invert_increasing(const Fn& f, double y, double lo, double hi,
                         double xtol = 0.0);

// inf{x in [lo, hi] : f(x) <= level} for nonincreasing f with
// f(lo) > level >= f(hi). Bisects to floating-point resolution.
double infimum_below(const Fn& f, double level, double lo, double hi);

// Argmax of a concave function on [lo, hi] by golden-section search.
double maximize_concave(const Fn& f, double lo, double hi, double xtol = 1e-13);

struct LimitEstimate {
  double value = 0.0;
  bool converged = false;
};

// Estimate lim_{t->0+} g(t) by evaluating along t0 * ratio^k and
// extrapolating geometrically decaying differences (Aitken-style).
LimitEstimate limit_at_zero(const Fn& g, double t0, double ratio = 0.25,
                            int max_steps = 400, double tol = 1e-12);

// Central finite difference of given order (1..3) with step h.
double fd_derivative(const Fn& f, double x, int order, double h);

// n log-spaced points covering [lo, hi], endpoints included. lo > 0.
std::vector<double> log_grid(double lo, double hi, int n);

}  // namespace orlz
