#pragma once

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "orlicz_function.hpp"
#include "rng.hpp"

namespace orlz {

struct Atom {
  double x = 0.0;
  double mass = 0.0;
};

// Nonnegative random variable represented canonically by its survival
// function S(x) = P(|X| >= x) (left-continuous), with an optional density on
// smooth regions, explicit atoms at the jumps of S, and exact power-tail
// terms S(x) = sum_j coef_j x^{-rho_j} for x >= tail_from. Immutable.
class Distribution {
 public:
  Distribution() = default;

  static Distribution pareto(double q);
  static Distribution uniform(double lo = 0.0, double hi = 1.0);
  static Distribution constant(double value);
  // Piecewise-linear survival through (x_i, s_i); s_0 = 1, nonincreasing.
  // A positive terminal value becomes an atom at the last knot.
  static Distribution custom_table(std::vector<double> xs,
                                   std::vector<double> ss);

  // X with survival (and density) induced by a normalized linear-tail M and
  // p in (1, inf]; pass p = kInf for the max variant of the formula. The
  // density formula is checked for nonnegativity on a grid.
  static Distribution from_orlicz(const OrliczFunction& M, double p);

  // X with P(X >= t) = int_{[0,1/t]} s dM'(s), kink atoms of dM' included.
  static Distribution from_orlicz_max(const OrliczFunction& M);

  double survival(double x) const;
  bool has_density() const;
  double density(double x) const;
  const std::vector<Atom>& atoms() const;
  double support_lo() const;
  double support_hi() const;

  // Smallest power-tail exponent; +inf for bounded support.
  double tail_exponent() const;

  // inf{x : S(x) <= 1 - u}, closed form when available.
  double quantile(double u) const;

  double sample_one(SubstreamRng& rng) const;
  // Inverse-transform samples from the stream (seed, 0); deterministic.
  void sample(std::uint64_t seed, std::span<double> out) const;

  // int_{[a,b)} x^r dP: quadrature over the density, atom sums, and exact
  // closed forms on the power tail. Throws when the integral diverges.
  double moment(double r, double a, double b) const;
  double mean() const { return moment(1.0, 0.0, kInf); }

  // int_{[a,b)} (s*x)^p dP with b finite; overflow-safe when s*b <= 1 even
  // for large p, exact on the power tail.
  double scaled_pow_moment(double s, double p, double a, double b) const;

  // int_{[a,b)} g dP for finite b: piecewise quadrature plus atom sums.
  double expect(const Fn& g, double a, double b) const;

  // Construction metadata (set for from_orlicz / from_orlicz_max).
  const std::string& kind() const;
  double param_p() const;  // kInf for the max variant
  double param_q() const;
  double param_value() const;  // constant value; uniform uses support_lo/hi
  const std::optional<OrliczFunction>& source_orlicz() const;
  const std::vector<double>& table_x() const;
  const std::vector<double>& table_s() const;

  struct Impl;  // internal representation; defined in distribution.cpp

 private:
  std::shared_ptr<const Impl> impl_;
};

// Lemma-style closed form for int_a^b x^r f(x) dx when X was built from an
// Orlicz function with parameter p; splits at kink images and keeps the
// derivative sides straight. Valid on the absolutely continuous part.
double moment_integral(const Distribution& d, double a, double b, double r);

struct QIntegrability {
  bool integrable = false;
  double value = 0.0;  // certified estimate when integrable
  std::string diagnostic;
};

// Cauchy-criterion certification of int x^q dP over doubling truncations.
QIntegrability certify_q_integrability(const Distribution& d, double q);

}  // namespace orlz
