#pragma once

#include <string>

#include "distribution.hpp"
#include "orlicz_function.hpp"

namespace orlz {

// Orlicz function matching E max |a_i X_i|:
//   M_X(s) = s * int_{[1/s,inf)} x dP - P(|X| >= 1/s).
// The result carries exact evaluators; the table snapshot is what
// serializes. Requires an integrable X.
OrliczFunction orlicz_from_max(const Distribution& d, int grid_points = 512);

// Orlicz function matching E ||(a_i X_i)||_p for finite p > 1:
//   M_{X,p}(s) = s^p/(p-1) int_{[0,1/s)} x^p dP
//              + p/(p-1) s int_{[1/s,inf)} x dP - P(|X| >= 1/s).
OrliczFunction orlicz_from_p_norm(const Distribution& d, double p,
                                  int grid_points = 512);

// Direct quadrature of the defining double integral for M_{X,p}; the
// independent cross-check of orlicz_from_p_norm. The inner integrand is
// verified to be nondecreasing in t along the way.
double p_norm_double_integral(const Distribution& d, double p, double s);

// s -> M_{|X|^q, p/q}(s^q) for 1 < q < p:
//   q/(p-q) s^p int_{[0,1/s)} x^p dP + p/(p-q) s^q int_{[1/s,inf)} x^q dP
//   - P(|X| >= 1/s).
// X^q integrability is certified first.
OrliczFunction orlicz_from_q_power(const Distribution& d, double p, double q,
                                   int grid_points = 512);

// The same function by the closed identity
//   q M(s) + q(q-1) s^q int_0^s M(y) y^{-q-1} dy,
// valid when M passes the integral growth condition. bound_coef (optional)
// receives q(1 + C(q-1)) with C the measured condition constant; the result
// is bounded by bound_coef * M(s).
OrliczFunction closed_form_qpower(const OrliczFunction& M, double q,
                                  double* bound_coef = nullptr);

struct DeviationReport {
  double grid_lo = 0.0, grid_hi = 0.0;
  int points = 0;
  double max_rel_dev = 0.0;
  double argmax = 0.0;
};

// Rebuild M from its own induced distribution and report the sup-relative
// deviation on a log grid over (0, t1]; p = kInf runs the max variant.
DeviationReport roundtrip_max_deviation(const OrliczFunction& M, double p,
                                        int points = 256);

// Pointwise density reconstruction through the derivative formulas of
// M_{X,p}; refuses distributions with atoms.
struct ReconstructionReport {
  double grid_lo = 0.0, grid_hi = 0.0;
  int points = 0;
  double max_rel_err = 0.0;
  double argmax = 0.0;
};

ReconstructionReport density_from_MXp(const Distribution& d, double p,
                                      int points = 128);

// M(s) = int_0^inf N(sx) dP(x) for a normalized linear-tail N; the result is
// normalized and matches E ||(a_i X_i)||_N up to absolute constants.
OrliczFunction orlicz_from_general_N(const Distribution& d,
                                     const OrliczFunction& N,
                                     int grid_points = 512);

}  // namespace orlz
