#include "orlicz_function.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace orlz {

namespace {

double pow_term(double coef, double e, double t) {
  if (t == 0.0) {
    if (e > 0.0) return 0.0;
    if (e == 0.0) return coef;
    return coef > 0 ? kInf : -kInf;
  }
  return coef * std::pow(t, e);
}

// Falling factorial e(e-1)...(e-k+1).
double falling(double e, int k) {
  double f = 1.0;
  for (int i = 0; i < k; ++i) f *= (e - i);
  return f;
}

}  // namespace

void Branch::finalize() {
  if (kind != Kind::Table) return;
  const size_t n = s.size();
  if (n < 2 || m.size() != n)
    throw std::invalid_argument("table branch: need >= 2 nodes, equal sizes");
  for (size_t i = 1; i < n; ++i)
    if (!(s[i] > s[i - 1]))
      throw std::invalid_argument("table branch: nodes must increase");
  // Fritsch-Carlson monotone cubic slopes.
  std::vector<double> h(n - 1), del(n - 1);
  for (size_t i = 0; i + 1 < n; ++i) {
    h[i] = s[i + 1] - s[i];
    del[i] = (m[i + 1] - m[i]) / h[i];
  }
  slope.assign(n, 0.0);
  if (n == 2) {
    slope[0] = slope[1] = del[0];
    return;
  }
  for (size_t i = 1; i + 1 < n; ++i) {
    if (del[i - 1] * del[i] <= 0.0) {
      slope[i] = 0.0;
    } else {
      const double w1 = 2.0 * h[i] + h[i - 1];
      const double w2 = h[i] + 2.0 * h[i - 1];
      slope[i] = (w1 + w2) / (w1 / del[i - 1] + w2 / del[i]);
    }
  }
  auto end_slope = [](double h0, double h1, double d0, double d1) {
    double d = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
    if (d * d0 <= 0.0) return 0.0;
    if (d0 * d1 <= 0.0 && std::abs(d) > 3.0 * std::abs(d0)) return 3.0 * d0;
    return d;
  };
  slope[0] = end_slope(h[0], h[1], del[0], del[1]);
  slope[n - 1] = end_slope(h[n - 2], h[n - 3], del[n - 2], del[n - 3]);
}

double Branch::eval(double t) const {
  switch (kind) {
    case Kind::Power: {
      double v = 0.0;
      for (const auto& term : terms) v += pow_term(term.coef, term.exp, t);
      return v;
    }
    case Kind::Affine:
      return a + b * t;
    case Kind::Table: {
      const size_t n = s.size();
      if (t <= s.front()) {
        if (t == s.front()) return m.front();
        // Power-law extrapolation from the first two nodes.
        if (m[0] > 0.0 && m[1] > m[0]) {
          const double alpha = std::log(m[1] / m[0]) / std::log(s[1] / s[0]);
          return m[0] * std::pow(t / s[0], std::max(1.0, alpha));
        }
        return m[0] * (t / s[0]);
      }
      if (t >= s.back()) return m.back() + slope.back() * (t - s.back());
      const size_t i =
          static_cast<size_t>(std::upper_bound(s.begin(), s.end(), t) -
                              s.begin()) - 1;
      const double h = s[i + 1] - s[i];
      const double x = (t - s[i]) / h;
      const double h00 = (1 + 2 * x) * (1 - x) * (1 - x);
      const double h10 = x * (1 - x) * (1 - x);
      const double h01 = x * x * (3 - 2 * x);
      const double h11 = x * x * (x - 1);
      return h00 * m[i] + h10 * h * slope[i] + h01 * m[i + 1] +
             h11 * h * slope[i + 1];
    }
  }
  return 0.0;
}

double Branch::deriv(double t, int order) const {
  if (order < 1 || order > 3)
    throw std::invalid_argument("Branch::deriv: order must be 1..3");
  switch (kind) {
    case Kind::Power: {
      double v = 0.0;
      for (const auto& term : terms)
        v += pow_term(term.coef * falling(term.exp, order),
                      term.exp - order, t);
      return v;
    }
    case Kind::Affine:
      return order == 1 ? b : 0.0;
    case Kind::Table: {
      const size_t n = s.size();
      if (t < s.front()) {
        if (m[0] > 0.0 && m[1] > m[0]) {
          const double alpha = std::max(
              1.0, std::log(m[1] / m[0]) / std::log(s[1] / s[0]));
          return m[0] * falling(alpha, order) *
                 std::pow(t / s[0], alpha - order) / std::pow(s[0], order);
        }
        return order == 1 ? m[0] / s[0] : 0.0;
      }
      if (t >= s.back()) return order == 1 ? slope.back() : 0.0;
      size_t i = static_cast<size_t>(
          std::upper_bound(s.begin(), s.end(), t) - s.begin());
      if (i > 0) --i;
      if (i + 1 >= n) i = n - 2;
      const double h = s[i + 1] - s[i];
      const double x = (t - s[i]) / h;
      const double dm = m[i + 1] - m[i];
      // Cubic Hermite coefficients in x.
      const double c2 = 3 * dm / (h * h) - (2 * slope[i] + slope[i + 1]) / h;
      const double c3 =
          -2 * dm / (h * h * h) + (slope[i] + slope[i + 1]) / (h * h);
      switch (order) {
        case 1:
          return slope[i] + 2 * c2 * h * x + 3 * c3 * h * h * x * x;
        case 2:
          return 2 * c2 + 6 * c3 * h * x;
        default:
          return 6 * c3;
      }
    }
  }
  return 0.0;
}

OrliczFunction OrliczFunction::from_branches(std::vector<Branch> branches,
                                             std::optional<double> kink,
                                             OrliczFlags flags,
                                             std::optional<ExactOps> exact) {
  if (branches.empty())
    throw std::invalid_argument("OrliczFunction: no branches");
  std::sort(branches.begin(), branches.end(),
            [](const Branch& x, const Branch& y) { return x.lo < y.lo; });
  if (branches.front().lo != 0.0)
    throw std::invalid_argument("OrliczFunction: first branch must start at 0");
  for (size_t i = 0; i + 1 < branches.size(); ++i)
    if (branches[i].hi != branches[i + 1].lo)
      throw std::invalid_argument("OrliczFunction: branch domains must abut");
  for (auto& b : branches) b.finalize();
  OrliczFunction f;
  f.branches_ = std::move(branches);
  f.kink_ = kink;
  f.flags_ = std::move(flags);
  if (exact && exact->m)
    f.exact_ = std::make_shared<const ExactOps>(std::move(*exact));
  return f;
}

OrliczFunction OrliczFunction::power(double exponent) {
  if (!(exponent >= 1.0))
    throw std::invalid_argument("power Orlicz function needs exponent >= 1");
  Branch b;
  b.kind = Branch::Kind::Power;
  b.terms = {{1.0, exponent}};
  OrliczFlags flags;
  flags.smoothness = "smooth";
  return from_branches({b}, std::nullopt, flags);
}

OrliczFunction OrliczFunction::from_callable(ExactOps ops, double grid_lo,
                                             double grid_hi, int grid_points,
                                             std::optional<double> kink,
                                             OrliczFlags flags) {
  if (!ops.m) throw std::invalid_argument("from_callable: evaluator required");
  if (!(grid_lo > 0.0) || !(grid_hi > grid_lo) || grid_points < 8)
    throw std::invalid_argument("from_callable: bad grid");
  std::vector<Branch> branches;
  auto make_table = [&ops](double lo, double hi, int n, double dom_lo,
                           double dom_hi) {
    Branch b;
    b.kind = Branch::Kind::Table;
    b.lo = dom_lo;
    b.hi = dom_hi;
    b.s = log_grid(lo, hi, n);
    b.m.reserve(b.s.size());
    for (double x : b.s) b.m.push_back(ops.m(x));
    return b;
  };
  if (kink && *kink > grid_lo * 1.0001 && *kink < grid_hi * 0.9999) {
    branches.push_back(
        make_table(grid_lo, *kink, grid_points / 2, 0.0, *kink));
    branches.push_back(
        make_table(*kink, grid_hi, grid_points / 2, *kink, kInf));
  } else {
    branches.push_back(make_table(grid_lo, grid_hi, grid_points, 0.0, kInf));
  }
  return from_branches(std::move(branches), kink, std::move(flags),
                       std::move(ops));
}

const Branch& OrliczFunction::branch_at(double t) const {
  for (const auto& b : branches_)
    if (t >= b.lo && t < b.hi) return b;
  return branches_.back();
}

const Branch& OrliczFunction::branch_left_of(double t) const {
  for (auto it = branches_.rbegin(); it != branches_.rend(); ++it)
    if (t > it->lo) return *it;
  return branches_.front();
}

double OrliczFunction::operator()(double s) const {
  if (!(s >= 0.0)) throw std::invalid_argument("OrliczFunction: s < 0");
  if (s == 0.0) return 0.0;
  if (exact_) return exact_->m(s);
  return branch_at(s).eval(s);
}

double OrliczFunction::deriv(double s, int order) const {
  if (!(s >= 0.0)) throw std::invalid_argument("OrliczFunction: s < 0");
  if (exact_) {
    const auto& d = order == 1 ? exact_->d1 : order == 2 ? exact_->d2
                                                         : exact_->d3;
    if (d) return d(s);
  }
  return branch_at(s).deriv(s, order);
}

double OrliczFunction::deriv_left(double s, int order) const {
  if (!(s > 0.0)) throw std::invalid_argument("deriv_left: s <= 0");
  return branch_left_of(s).deriv(s, order);
}

double OrliczFunction::kink_slope_jump() const {
  if (!kink_) return 0.0;
  return deriv(*kink_, 1) - deriv_left(*kink_, 1);
}

double OrliczFunction::inverse(double y) const {
  if (!(y > 0.0)) throw std::invalid_argument("inverse: y must be > 0");
  const double t0 = kink_ ? *kink_ : 1.0;
  return invert_increasing([this](double t) { return (*this)(t); }, y,
                           t0 * 0.5, t0);
}

double OrliczFunction::normalization_integral() const {
  double T = kink_ ? *kink_ : 1.0;
  double prev = kInf;
  for (int k = 0; k < 40; ++k) {
    const double g = T * deriv(T, 1) - (*this)(T);
    if (std::isfinite(prev) && std::isfinite(g) &&
        std::abs(g - prev) <= 1e-11 * std::max(1.0, std::abs(g)))
      return g;
    prev = g;
    T *= 4.0;
    if (T > 1e14) break;
  }
  return (!std::isfinite(prev) || prev > 1e12) ? kInf : prev;
}

void OrliczFunction::validate_on_grid(const std::vector<double>& grid,
                                      double tol) const {
  if ((*this)(0.0) != 0.0) throw std::domain_error("M(0) != 0");
  double prev_t = 0.0, prev_v = 0.0;
  double prev_slope = -kInf;
  for (double t : grid) {
    if (!(t > prev_t)) throw std::invalid_argument("validate: grid not sorted");
    const double v = (*this)(t);
    if (!(v >= 0.0)) {
      std::ostringstream os;
      os << "M(" << t << ") = " << v << " negative";
      throw std::domain_error(os.str());
    }
    const double scale = std::max(1.0, std::abs(v));
    if (v < prev_v - tol * scale) {
      std::ostringstream os;
      os << "M not nondecreasing near t = " << t;
      throw std::domain_error(os.str());
    }
    const double sl = (v - prev_v) / (t - prev_t);
    if (sl < prev_slope - tol * std::max(1.0, std::abs(sl))) {
      std::ostringstream os;
      os << "M not convex near t = " << t;
      throw std::domain_error(os.str());
    }
    prev_slope = sl;
    prev_t = t;
    prev_v = v;
  }
  if (!(prev_v > 0.0))
    throw std::domain_error("M vanishes at the top of the grid");
}

}  // namespace orlz
