#pragma once

#include <span>
#include <string>
#include <vector>

#include "orlicz_function.hpp"

namespace orlz {

// Evaluation grid for condition checks. Zeros mean auto: hi = M^{-1}(1),
// lo = hi * 1e-4, log-spaced.
struct GridSpec {
  double lo = 0.0;
  double hi = 0.0;
  int points = 512;
};

struct ConditionReport {
  std::string condition;
  double q = 0.0;
  double grid_lo = 0.0, grid_hi = 0.0;
  int grid_points = 0;
  bool pass = false;
  double best_c_const = kInf;  // integral condition: sup C(s)
  double c = 0.0;              // pointwise condition: scaling factor
  double gamma = kInf;         // pointwise condition: contraction constant
  double argmax = 0.0;         // grid point where the ratio binds
  std::string diagnostic;
};

// Luxemburg norm inf{t > 0 : sum M(|x_i|/t) <= 1}. Zero vector gives 0;
// non-finite entries are rejected.
double luxemburg_norm(const OrliczFunction& M, std::span<const double> x);

// Solve int_0^{t1} x M''(x) dx = 1 and extend M linearly beyond t1. The
// default keeps M's values on [0, t1]; strict mode rescales values by
// 1/M(t1) so the kink lands exactly at M^{-1}(1) (that trades away the
// normalization identity whenever M(t1) != 1).
OrliczFunction normalize_by_linearization(const OrliczFunction& M,
                                          bool strict = false);

// int_0^s M(t) t^{-q-1} dt: a power-fit head below s*1e-10, log-space
// quadrature above, split at the kink. Throws std::domain_error when the
// integral diverges.
double growth_integral(const OrliczFunction& M, double q, double s);

// sup over the grid of s^q/M(s) * int_0^s M(t) t^{-q-1} dt. Fails with a
// diagnostic when the inner integral diverges (M(t)/t^q not vanishing at 0).
ConditionReport check_integral_condition(const OrliczFunction& M, double q,
                                         GridSpec grid = {});

// Search c in (0,1) for gamma(c) = sup_s M(cs)/(c^q M(s)) < 1. A miss on the
// candidate grid is reported as a failure, not proved impossible.
ConditionReport check_pointwise_condition(const OrliczFunction& M, double q,
                                          GridSpec grid = {});

struct LimitsReport {
  LimitEstimate m_ratio;   // M(t)/t^q
  LimitEstimate d1_ratio;  // M'(t)/t^{q-1}
  LimitEstimate d2_ratio;  // M''(t)/t^{q-2}
};

LimitsReport check_limits(const OrliczFunction& M, double q);

// Legendre conjugate M*(s) = sup_{t>=0} (st - M(t)). Returns +inf beyond the
// terminal slope of a linear-tail function.
double conjugate_value(const OrliczFunction& M, double s);

// Conjugate packaged as a function: exact evaluator plus a table snapshot
// over the finite part of its domain.
OrliczFunction conjugate(const OrliczFunction& M);

struct EquivalenceResult {
  bool found = false;
  double a = kInf;
  double b = 1.0;
};

// Smallest grid-certified a (over a fixed b candidate set) with
// a^{-1} M(t/b) <= N(t) <= a M(bt) on the grid.
EquivalenceResult equivalence_constants(const OrliczFunction& M,
                                        const OrliczFunction& N,
                                        const std::vector<double>& grid);

bool check_equivalence(const OrliczFunction& M, const OrliczFunction& N,
                       double a, double b, const std::vector<double>& grid,
                       double rel_slack = 1e-12);

}  // namespace orlz
