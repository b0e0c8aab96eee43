#include "orlicz_ops.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace orlz {

namespace {

std::vector<double> condition_grid(const OrliczFunction& M, GridSpec& g) {
  if (!(g.hi > 0.0)) g.hi = M.inverse(1.0);
  if (!(g.lo > 0.0)) g.lo = g.hi * 1e-4;
  if (g.points < 8) g.points = 512;
  return log_grid(g.lo, g.hi, g.points);
}

// [0, t_cut] head of the growth integral from a two-point power fit; the
// local exponent also decides divergence.
double head_integral(const OrliczFunction& M, double q, double t_cut) {
  const double m_cut = M(t_cut);
  const double m_half = M(0.5 * t_cut);
  if (!(m_cut > 0.0) || !(m_half > 0.0)) return 0.0;
  const double alpha = std::log2(m_cut / m_half);
  if (alpha <= q + 1e-6) {
    std::ostringstream os;
    os << "growth integral diverges: local exponent of M at 0 is " << alpha
       << " <= q = " << q;
    throw std::domain_error(os.str());
  }
  return m_cut * std::pow(t_cut, -q) / (alpha - q);
}

}  // namespace

double growth_integral(const OrliczFunction& M, double q, double s) {
  if (!(s > 0.0)) return 0.0;
  const double t_cut = s * 1e-10;
  double total = head_integral(M, q, t_cut);
  auto f = [&](double t) { return M(t) * std::pow(t, -q - 1.0); };
  const double kink = M.kink().value_or(-1.0);
  double prev = t_cut;
  if (kink > prev && kink < s) {
    total += integrate_log(f, prev, kink, 1e-10, 1e-300).value;
    prev = kink;
  }
  total += integrate_log(f, prev, s, 1e-10, 1e-300).value;
  return total;
}

double luxemburg_norm(const OrliczFunction& M, std::span<const double> x) {
  double sum_abs = 0.0, max_abs = 0.0;
  for (double v : x) {
    if (!std::isfinite(v))
      throw std::invalid_argument("luxemburg_norm: non-finite entry");
    const double a = std::abs(v);
    sum_abs += a;
    max_abs = std::max(max_abs, a);
  }
  if (max_abs == 0.0) return 0.0;
  const double m_inv1 = M.inverse(1.0);
  auto phi = [&](double t) {
    double s = 0.0;
    for (double v : x) {
      const double a = std::abs(v);
      if (a > 0.0) s += M(a / t);
    }
    return s;
  };
  // M(u) <= u/m_inv1 * M(m_inv1) for u <= m_inv1 (convexity through 0), so
  // phi(sum_abs/m_inv1) <= 1 <= phi(max_abs/m_inv1): an exact bracket.
  const double lo = max_abs / m_inv1;
  const double hi = sum_abs / m_inv1;
  if (hi <= lo || phi(lo) <= 1.0) return lo;
  return infimum_below(phi, 1.0, lo, hi);
}

OrliczFunction normalize_by_linearization(const OrliczFunction& M,
                                          bool strict) {
  auto weight = [&M](double T) {
    return integrate([&M](double x) { return x * M.deriv(x, 2); }, 0.0, T,
                     1e-11, 1e-14)
        .value;
  };
  double t1;
  try {
    t1 = invert_increasing(weight, 1.0, 0.5, 1.0);
  } catch (const std::domain_error&) {
    throw std::domain_error("not normalizable by linearization");
  }
  const double v1 = M(t1);
  const double slope = M.deriv_left(t1, 1);
  const double scale = strict ? 1.0 / v1 : 1.0;

  std::vector<Branch> branches;
  for (const auto& b : M.branches()) {
    if (b.lo >= t1) break;
    Branch nb = b;
    nb.hi = std::min(nb.hi, t1);
    if (scale != 1.0) {
      for (auto& term : nb.terms) term.coef *= scale;
      nb.a *= scale;
      nb.b *= scale;
      for (auto& mv : nb.m) mv *= scale;
    }
    branches.push_back(std::move(nb));
  }
  Branch tail;
  tail.kind = Branch::Kind::Affine;
  tail.lo = t1;
  tail.hi = kInf;
  tail.b = scale * slope;
  tail.a = scale * (v1 - slope * t1);
  branches.push_back(tail);

  OrliczFlags flags = M.flags();
  flags.linear_tail = true;
  flags.normalized = std::abs(scale - 1.0) < 1e-12;
  if (flags.smoothness.empty()) flags.smoothness = "piecewise_smooth";
  return OrliczFunction::from_branches(std::move(branches), t1, flags);
}

ConditionReport check_integral_condition(const OrliczFunction& M, double q,
                                         GridSpec grid) {
  if (!(q > 1.0))
    throw std::invalid_argument("check_integral_condition: q must be > 1");
  ConditionReport rep;
  rep.condition = "integral";
  rep.q = q;
  const auto pts = condition_grid(M, grid);
  rep.grid_lo = grid.lo;
  rep.grid_hi = grid.hi;
  rep.grid_points = grid.points;

  // Head piece [0, t_cut] from a local power fit; the fit also decides
  // whether the integral converges at all.
  const double t_cut = grid.lo * 1e-10;
  double head = 0.0;
  try {
    head = head_integral(M, q, t_cut);
  } catch (const std::domain_error& e) {
    rep.diagnostic = e.what();
    rep.pass = false;
    rep.best_c_const = kInf;
    return rep;
  }

  auto integrand = [&](double t) { return M(t) * std::pow(t, -q - 1.0); };
  const double kink = M.kink().value_or(-1.0);
  double inner = head;
  double prev = t_cut;
  double best = -kInf, arg = pts.front();
  for (double s : pts) {
    if (kink > prev && kink < s) {
      inner += integrate_log(integrand, prev, kink, 1e-10, 1e-300).value;
      prev = kink;
    }
    inner += integrate_log(integrand, prev, s, 1e-10, 1e-300).value;
    prev = s;
    const double cs = inner * std::pow(s, q) / M(s);
    if (cs > best) {
      best = cs;
      arg = s;
    }
  }
  rep.best_c_const = best;
  rep.argmax = arg;
  rep.pass = std::isfinite(best);
  return rep;
}

ConditionReport check_pointwise_condition(const OrliczFunction& M, double q,
                                          GridSpec grid) {
  if (!(q > 1.0))
    throw std::invalid_argument("check_pointwise_condition: q must be > 1");
  ConditionReport rep;
  rep.condition = "pointwise";
  rep.q = q;
  const auto pts = condition_grid(M, grid);
  rep.grid_lo = grid.lo;
  rep.grid_hi = grid.hi;
  rep.grid_points = grid.points;

  const auto candidates = log_grid(0.005, 0.98, 48);
  double best_gamma = kInf, best_c = 0.0, best_arg = 0.0;
  for (double c : candidates) {
    double gamma = -kInf, arg = 0.0;
    const double cq = std::pow(c, q);
    for (double s : pts) {
      const double r = M(c * s) / (cq * M(s));
      if (r > gamma) {
        gamma = r;
        arg = s;
      }
    }
    if (gamma < best_gamma) {
      best_gamma = gamma;
      best_c = c;
      best_arg = arg;
    }
  }
  rep.c = best_c;
  rep.gamma = best_gamma;
  rep.argmax = best_arg;
  rep.pass = best_gamma < 1.0;
  if (!rep.pass)
    rep.diagnostic = "no c with gamma(c) < 1 found on the candidate grid";
  return rep;
}

LimitsReport check_limits(const OrliczFunction& M, double q) {
  const double t0 = 0.25 * M.kink().value_or(M.inverse(1.0));
  LimitsReport rep;
  rep.m_ratio = limit_at_zero(
      [&](double t) { return M(t) / std::pow(t, q); }, t0);
  rep.d1_ratio = limit_at_zero(
      [&](double t) { return M.deriv(t, 1) / std::pow(t, q - 1.0); }, t0);
  rep.d2_ratio = limit_at_zero(
      [&](double t) { return M.deriv(t, 2) / std::pow(t, q - 2.0); }, t0);
  return rep;
}

double conjugate_value(const OrliczFunction& M, double s) {
  if (!(s >= 0.0)) throw std::invalid_argument("conjugate_value: s < 0");
  if (s == 0.0) return 0.0;
  auto g = [&](double t) { return s * t - M(t); };
  double hi;
  if (M.flags().linear_tail && M.kink()) {
    const double tail_slope = M.deriv(*M.kink(), 1);
    if (s > tail_slope) return kInf;
    // st - M(t) is constant past the kink, so the sup lives on [0, kink].
    hi = *M.kink();
  } else {
    hi = 1.0;
    int guard = 0;
    while (M.deriv(hi, 1) < s) {
      hi *= 2.0;
      if (++guard > 80 || !std::isfinite(hi)) return kInf;
    }
  }
  const double t_star = maximize_concave(g, 0.0, hi);
  return std::max(0.0, g(t_star));
}

OrliczFunction conjugate(const OrliczFunction& M) {
  double s_hi;
  if (M.flags().linear_tail && M.kink()) {
    s_hi = M.deriv(*M.kink(), 1);
  } else {
    s_hi = M.deriv(100.0 * M.inverse(1.0), 1);
  }
  ExactOps ops;
  ops.m = [M](double s) { return conjugate_value(M, s); };
  OrliczFlags flags;
  flags.smoothness = "numeric";
  return OrliczFunction::from_callable(std::move(ops), s_hi * 1e-6,
                                       s_hi * (1.0 - 1e-9), 256, std::nullopt,
                                       flags);
}

EquivalenceResult equivalence_constants(const OrliczFunction& M,
                                        const OrliczFunction& N,
                                        const std::vector<double>& grid) {
  EquivalenceResult res;
  for (double b : log_grid(1e-3, 1e3, 121)) {
    double a_needed = 1.0;
    bool ok = true;
    for (double t : grid) {
      const double n_t = N(t);
      const double m_bt = M(b * t);
      const double m_tb = M(t / b);
      if (!(n_t > 0.0) || !(m_bt > 0.0)) {
        ok = false;
        break;
      }
      a_needed = std::max({a_needed, n_t / m_bt, m_tb / n_t});
      if (!std::isfinite(a_needed)) {
        ok = false;
        break;
      }
    }
    if (ok && a_needed < res.a) {
      res.a = a_needed;
      res.b = b;
      res.found = true;
    }
  }
  return res;
}

bool check_equivalence(const OrliczFunction& M, const OrliczFunction& N,
                       double a, double b, const std::vector<double>& grid,
                       double rel_slack) {
  for (double t : grid) {
    const double n_t = N(t);
    if (M(t / b) / a > n_t * (1.0 + rel_slack)) return false;
    if (n_t > a * M(b * t) * (1.0 + rel_slack)) return false;
  }
  return true;
}

}  // namespace orlz
