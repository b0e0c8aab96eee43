#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "numerics.hpp"

namespace orlz {

struct PowerTerm {
  double coef = 0.0;
  double exp = 1.0;
};

// One piece of a piecewise-defined convex function on [lo, hi).
//
//   Power:  sum_i coef_i * t^exp_i
//   Affine: a + b*t
//   Table:  monotone cubic through (s_i, m_i); below the first node a power
//           law fitted to the first two nodes, beyond the last a linear
//           continuation of the endpoint slope.
struct Branch {
  enum class Kind { Power, Affine, Table };

  Kind kind = Kind::Power;
  double lo = 0.0;
  double hi = kInf;
  std::vector<PowerTerm> terms;
  double a = 0.0, b = 0.0;
  std::vector<double> s, m;
  std::vector<double> slope;  // pchip node slopes, filled by finalize()

  double eval(double t) const;
  double deriv(double t, int order) const;
  void finalize();  // precompute table slopes; validates node arrays
};

struct OrliczFlags {
  bool normalized = false;
  bool linear_tail = false;
  std::string smoothness;
};

// Optional exact evaluators carried by quadrature-backed functions. When
// present they take precedence over branch evaluation, so tabulated
// functions lose no accuracy in-memory; the table is what serializes.
struct ExactOps {
  std::function<double(double)> m;
  std::function<double(double)> d1, d2, d3;
};

class OrliczFunction {
 public:
  OrliczFunction() = default;

  static OrliczFunction from_branches(std::vector<Branch> branches,
                                      std::optional<double> kink,
                                      OrliczFlags flags,
                                      std::optional<ExactOps> exact = {});

  // t^r on [0, inf), r >= 1.
  static OrliczFunction power(double exponent);

  // Snapshot of exact evaluators onto a log grid over [grid_lo, grid_hi].
  // If the kink falls inside the range the table is split there so the
  // interpolant never smooths across it.
  static OrliczFunction from_callable(ExactOps ops, double grid_lo,
                                      double grid_hi, int grid_points,
                                      std::optional<double> kink,
                                      OrliczFlags flags);

  double operator()(double s) const;

  // One-sided derivatives, order 1..3. deriv() is the right derivative;
  // deriv_left() matters only at kinks and is always branch-based.
  double deriv(double s, int order) const;
  double deriv_left(double s, int order) const;

  const std::vector<Branch>& branches() const { return branches_; }
  std::optional<double> kink() const { return kink_; }
  const OrliczFlags& flags() const { return flags_; }
  bool has_exact() const { return exact_ != nullptr; }

  // Jump of M' at the kink; the mass of the dM' atom there.
  double kink_slope_jump() const;

  // M^{-1}(y), y > 0, by monotone bisection.
  double inverse(double y) const;

  // int_0^inf x dM'(x) = lim_{T->inf} T M'(T) - M(T), kink atoms included.
  // Exact once the tail is affine; +inf when the limit diverges.
  double normalization_integral() const;

  // M(0)=0, positivity, monotonicity and midpoint convexity on a grid.
  // Throws std::domain_error naming the first violation.
  void validate_on_grid(const std::vector<double>& grid,
                        double tol = 1e-9) const;

 private:
  const Branch& branch_at(double t) const;
  const Branch& branch_left_of(double t) const;

  std::vector<Branch> branches_;
  std::optional<double> kink_;
  OrliczFlags flags_;
  std::shared_ptr<const ExactOps> exact_;
};

}  // namespace orlz
