#include "correspondence.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "orlicz_ops.hpp"

namespace orlz {

namespace {

// Structural geometry every forward map shares: nothing contributes below
// 1/sup|X| and the map is an exact power-sum past 1/inf|X|.
struct MapFrame {
  double s_zero = 0.0;
  double s_affine = kInf;
};

MapFrame frame_for(const Distribution& d) {
  MapFrame fr;
  if (d.support_hi() < kInf) fr.s_zero = 1.0 / d.support_hi();
  if (d.support_lo() > 0.0) fr.s_affine = 1.0 / d.support_lo();
  return fr;
}

// Assemble zero branch + table snapshot + exact tail branch around the
// closures, with the exact evaluators attached.
OrliczFunction assemble_map(const ExactOps& ops, const MapFrame& fr,
                            std::vector<PowerTerm> tail_terms,
                            int grid_points, OrliczFlags flags) {
  const double m_inv1 =
      invert_increasing(ops.m, 1.0, std::max(fr.s_zero, 1e-6),
                        std::max(2.0 * fr.s_zero, 1.0));

  // Numeric normalization probe: T M'(T) - M(T) along growing T.
  {
    Fn d1 = ops.d1 ? ops.d1 : Fn([&ops](double s) {
      return fd_derivative(ops.m, s, 1, s * 1e-7);
    });
    double T = std::max({m_inv1, fr.s_zero * 2.0, 1e-6});
    if (fr.s_affine < kInf) T = std::max(T, fr.s_affine);
    double g = kInf, prev = -kInf;
    for (int it = 0; it < 30; ++it) {
      g = T * d1(T) - ops.m(T);
      if (std::isfinite(prev) &&
          std::abs(g - prev) <= 1e-9 * std::max(1.0, std::abs(g)))
        break;
      prev = g;
      T *= 4.0;
      if (T > 1e13) break;
    }
    flags.normalized = std::isfinite(g) && std::abs(g - 1.0) <= 1e-6;
  }

  std::vector<Branch> branches;
  if (fr.s_zero > 0.0) {
    Branch z;
    z.kind = Branch::Kind::Affine;
    z.lo = 0.0;
    z.hi = fr.s_zero;
    branches.push_back(z);
  }
  if (fr.s_affine > fr.s_zero) {
    Branch tb;
    tb.kind = Branch::Kind::Table;
    tb.lo = fr.s_zero;
    tb.hi = fr.s_affine;
    double node_lo = std::max(fr.s_zero * (1.0 + 1e-9), m_inv1 * 1e-4);
    double node_hi = std::min(fr.s_affine, m_inv1 * 8.0);
    if (node_hi <= node_lo * 1.0001) node_hi = node_lo * 2.0;
    tb.s = log_grid(node_lo, node_hi, grid_points);
    tb.m.reserve(tb.s.size());
    for (double x : tb.s) tb.m.push_back(ops.m(x));
    branches.push_back(std::move(tb));
  }
  std::optional<double> kink;
  if (fr.s_affine < kInf) {
    Branch tail;
    tail.kind = Branch::Kind::Power;
    tail.lo = fr.s_affine;
    tail.hi = kInf;
    tail.terms = std::move(tail_terms);
    branches.push_back(std::move(tail));
    kink = fr.s_affine;
  } else if (fr.s_zero > 0.0) {
    kink = fr.s_zero;
  }
  auto f = OrliczFunction::from_branches(std::move(branches), kink,
                                         std::move(flags), ops);
  f.validate_on_grid(log_grid(m_inv1 * 1e-3, m_inv1 * 4.0, 129), 1e-7);
  return f;
}

}  // namespace

OrliczFunction orlicz_from_max(const Distribution& d, int grid_points) {
  const double ex = d.moment(1.0, 0.0, kInf);  // throws if not integrable
  const MapFrame fr = frame_for(d);
  ExactOps ops;
  ops.m = [d, fr](double s) {
    if (s <= fr.s_zero || s <= 0.0) return 0.0;
    const double u = 1.0 / s;
    return s * d.moment(1.0, u, kInf) - d.survival(u);
  };
  ops.d1 = [d](double s) {
    return s <= 0.0 ? 0.0 : d.moment(1.0, 1.0 / s, kInf);
  };
  ops.d2 = [d](double s) {
    return s <= 0.0 ? 0.0 : d.density(1.0 / s) / (s * s * s);
  };
  ops.d3 = [ops](double s) { return fd_derivative(ops.d2, s, 1, s * 1e-6); };
  OrliczFlags flags;
  flags.smoothness = "numeric";
  flags.linear_tail = fr.s_affine < kInf;
  std::vector<PowerTerm> tail{{ex, 1.0}, {-1.0, 0.0}};
  auto f = assemble_map(ops, fr, std::move(tail), grid_points, flags);
  return f;
}

OrliczFunction orlicz_from_p_norm(const Distribution& d, double p,
                                  int grid_points) {
  if (!(p > 1.0) || p == kInf)
    throw std::invalid_argument("orlicz_from_p_norm: need finite p > 1");
  const double ex = d.moment(1.0, 0.0, kInf);
  const MapFrame fr = frame_for(d);
  ExactOps ops;
  ops.m = [d, p, fr](double s) {
    if (s <= 0.0) return 0.0;
    const double u = 1.0 / s;
    const double j = d.scaled_pow_moment(s, p, 0.0, u);
    return j / (p - 1.0) + p / (p - 1.0) * s * d.moment(1.0, u, kInf) -
           d.survival(u);
  };
  ops.d1 = [d, p](double s) {
    if (s <= 0.0) return 0.0;
    const double u = 1.0 / s;
    const double j = d.scaled_pow_moment(s, p, 0.0, u);
    return p / (p - 1.0) * (j / s + d.moment(1.0, u, kInf));
  };
  ops.d2 = [d, p](double s) {
    if (s <= 0.0) return 0.0;
    return p * d.scaled_pow_moment(s, p, 0.0, 1.0 / s) / (s * s);
  };
  ops.d3 = [d, p](double s) {
    if (s <= 0.0) return 0.0;
    const double j = d.scaled_pow_moment(s, p, 0.0, 1.0 / s);
    return p * (p - 2.0) * j / (s * s * s) -
           p * d.density(1.0 / s) / (s * s * s * s);
  };
  OrliczFlags flags;
  flags.smoothness = "numeric";
  flags.linear_tail = fr.s_affine < kInf;
  std::vector<PowerTerm> tail{{p / (p - 1.0) * ex, 1.0}, {-1.0, 0.0}};
  return assemble_map(ops, fr, std::move(tail), grid_points, flags);
}

double p_norm_double_integral(const Distribution& d, double p, double s) {
  if (!(p > 1.0) || p == kInf)
    throw std::invalid_argument("p_norm_double_integral: need finite p > 1");
  if (!(s > 0.0)) return 0.0;
  auto h = [&d, p](double t) {
    if (t <= 0.0) return 0.0;
    const double u = 1.0 / t;
    return d.scaled_pow_moment(t, p, 0.0, u) / t + d.moment(1.0, u, kInf);
  };
  // The defining integrand must be nondecreasing; a violation means the
  // quadrature pieces disagree badly.
  double prev = -kInf, scale = 0.0;
  for (int k = 1; k <= 64; ++k) {
    const double v = h(s * k / 64.0);
    scale = std::max(scale, std::abs(v));
    if (v < prev - 1e-9 * std::max(1.0, scale))
      throw std::domain_error(
          "p_norm_double_integral: inner integrand not increasing");
    prev = v;
  }
  std::vector<double> cuts{0.0};
  const MapFrame fr = frame_for(d);
  for (double c : {fr.s_zero, fr.s_affine})
    if (c > 0.0 && c < s) cuts.push_back(c);
  cuts.push_back(s);
  std::sort(cuts.begin(), cuts.end());
  double total = 0.0;
  for (size_t i = 0; i + 1 < cuts.size(); ++i)
    total += integrate(h, cuts[i], cuts[i + 1], 1e-10, 1e-14).value;
  return p / (p - 1.0) * total;
}

OrliczFunction orlicz_from_q_power(const Distribution& d, double p, double q,
                                   int grid_points) {
  if (!(q > 1.0) || !(q < p))
    throw std::invalid_argument("orlicz_from_q_power: need 1 < q < p");
  const auto cert = certify_q_integrability(d, q);
  if (!cert.integrable)
    throw std::domain_error("orlicz_from_q_power: X^q not integrable: " +
                            cert.diagnostic);
  const double exq = cert.value;
  const MapFrame fr = frame_for(d);
  ExactOps ops;
  ops.m = [d, p, q, fr](double s) {
    if (s <= 0.0) return 0.0;
    const double u = 1.0 / s;
    const double j = d.scaled_pow_moment(s, p, 0.0, u);
    return q / (p - q) * j +
           p / (p - q) * std::pow(s, q) * d.moment(q, u, kInf) -
           d.survival(u);
  };
  OrliczFlags flags;
  flags.smoothness = "numeric";
  std::vector<PowerTerm> tail{{p / (p - q) * exq, q}, {-1.0, 0.0}};
  return assemble_map(ops, fr, std::move(tail), grid_points, flags);
}

OrliczFunction closed_form_qpower(const OrliczFunction& M, double q,
                                  double* bound_coef) {
  if (!(q > 1.0))
    throw std::invalid_argument("closed_form_qpower: q must be > 1");
  if (bound_coef) {
    const auto rep = check_integral_condition(M, q);
    if (!rep.pass)
      throw std::domain_error("closed_form_qpower: integral condition fails: " +
                              rep.diagnostic);
    *bound_coef = q * (1.0 + rep.best_c_const * (q - 1.0));
  }
  ExactOps ops;
  ops.m = [M, q](double s) {
    if (s <= 0.0) return 0.0;
    return q * M(s) +
           q * (q - 1.0) * std::pow(s, q) * growth_integral(M, q, s);
  };
  OrliczFlags flags;
  flags.smoothness = "numeric";
  const double t1 = M.kink() ? *M.kink() : M.inverse(1.0);
  return OrliczFunction::from_callable(std::move(ops), t1 * 1e-4, t1 * 8.0,
                                       512, M.kink(), flags);
}

DeviationReport roundtrip_max_deviation(const OrliczFunction& M, double p,
                                        int points) {
  const Distribution x = Distribution::from_orlicz(M, p);
  const OrliczFunction back =
      p == kInf ? orlicz_from_max(x) : orlicz_from_p_norm(x, p);
  const double t1 = M.kink() ? *M.kink() : M.inverse(1.0);
  DeviationReport rep;
  rep.grid_lo = t1 * 1e-4;
  rep.grid_hi = t1;
  rep.points = points;
  for (double s : log_grid(rep.grid_lo, rep.grid_hi, points)) {
    const double ref = M(s);
    const double dev = std::abs(back(s) - ref) / std::max(ref, 1e-300);
    if (dev > rep.max_rel_dev) {
      rep.max_rel_dev = dev;
      rep.argmax = s;
    }
  }
  return rep;
}

ReconstructionReport density_from_MXp(const Distribution& d, double p,
                                      int points) {
  if (!d.atoms().empty())
    throw std::domain_error(
        "density_from_MXp: distribution has atoms; a continuous density is "
        "required");
  if (!(p > 1.0) || p == kInf)
    throw std::invalid_argument("density_from_MXp: need finite p > 1");
  if (!d.has_density())
    throw std::invalid_argument("density_from_MXp: no density available");
  const double hi = d.support_hi() < kInf ? d.support_hi() * (1.0 - 1e-6)
                                          : d.quantile(0.995);
  const double lo = d.support_lo() > 0.0 ? d.support_lo() * (1.0 + 1e-6)
                                         : hi * 1e-3;
  ReconstructionReport rep;
  rep.grid_lo = lo;
  rep.grid_hi = hi;
  rep.points = points;
  for (double x : log_grid(lo, hi, points)) {
    const double ip = d.moment(p, 0.0, x);
    const double s = 1.0 / x;
    const double m2 = p * std::pow(s, p - 2.0) * ip;
    const double m3 =
        p * (p - 2.0) * std::pow(s, p - 3.0) * ip -
        p * std::pow(x, 4.0) * d.density(x);
    const double f_rec =
        (1.0 - 2.0 / p) * m2 / (x * x * x) - (1.0 / p) * m3 / (x * x * x * x);
    const double f_true = d.density(x);
    const double err = std::abs(f_rec - f_true) / std::max(f_true, 1e-300);
    if (err > rep.max_rel_err) {
      rep.max_rel_err = err;
      rep.argmax = x;
    }
  }
  return rep;
}

OrliczFunction orlicz_from_general_N(const Distribution& d,
                                     const OrliczFunction& N,
                                     int grid_points) {
  if (!N.flags().linear_tail || !N.kink())
    throw std::domain_error("orlicz_from_general_N: N must be linear-tail");
  if (!(std::abs(N.normalization_integral() - 1.0) <= 1e-6))
    throw std::domain_error("orlicz_from_general_N: N is not normalized");
  const double ex = d.moment(1.0, 0.0, kInf);  // integrability gate
  const double t1n = *N.kink();
  const double slope = N.deriv(t1n, 1);
  const double c0 = N(t1n) - slope * t1n;

  ExactOps ops;
  ops.m = [d, N, t1n, slope, c0](double s) {
    if (s <= 0.0) return 0.0;
    const double x_split = t1n / s;
    const double head =
        d.expect([&N, s](double x) { return N(s * x); }, 0.0, x_split);
    return head + c0 * d.survival(x_split) +
           slope * s * d.moment(1.0, x_split, kInf);
  };
  ops.d1 = [d, N, t1n, slope](double s) {
    if (s <= 0.0) return 0.0;
    const double x_split = t1n / s;
    const double head = d.expect(
        [&N, s](double x) { return x * N.deriv(s * x, 1); }, 0.0, x_split);
    return head + slope * d.moment(1.0, x_split, kInf);
  };
  ops.d2 = [d, N, t1n](double s) {
    if (s <= 0.0) return 0.0;
    return d.expect([&N, s](double x) { return x * x * N.deriv(s * x, 2); },
                    0.0, t1n / s);
  };

  MapFrame fr;  // E N(sX) is positive for every s > 0: no zero branch
  if (d.support_lo() > 0.0) fr.s_affine = t1n / d.support_lo();
  OrliczFlags flags;
  flags.smoothness = "numeric";
  flags.normalized = true;
  flags.linear_tail = fr.s_affine < kInf;
  std::vector<PowerTerm> tail{{slope * ex, 1.0}, {c0, 0.0}};
  auto f = assemble_map(ops, fr, std::move(tail), grid_points, flags);
  const double ni = f.normalization_integral();
  if (!(std::abs(ni - 1.0) <= 1e-5))
    throw std::domain_error(
        "orlicz_from_general_N: output failed the normalization check");
  return f;
}

}  // namespace orlz
