#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <vector>

#include "doctest.h"
#include "embedding.hpp"
#include "oracles.hpp"
#include "orlicz_ops.hpp"
#include "rng.hpp"

using namespace orlz;

namespace {

OrliczFunction m17() {
  return normalize_by_linearization(OrliczFunction::power(1.7));
}

McConfig cfg(std::uint64_t seed, std::int64_t reps = 20000) {
  McConfig c;
  c.seed = seed;
  c.replicates = reps;
  return c;
}

}  // namespace

TEST_CASE("psi on degenerate matrices") {
  Matrix zero(3, 3);
  auto e = psi_l1_norm(zero, m17(), 1.5, cfg(1, 2000));
  CHECK(e.estimate == 0.0);
  CHECK(e.dispersion == 0.0);

  // n = 1: E|a r xi X| = |a| E xi E X by independence
  Matrix one(1, 1);
  one.at(0, 0) = -1.4;
  auto m = m17();
  auto e1 = psi_l1_norm(one, m, 1.5, cfg(2, 400000));
  const double exi = Distribution::pareto(1.5).mean();
  const double ex = Distribution::from_orlicz(m, 2.0).mean();
  CHECK(std::abs(e1.estimate - 1.4 * exi * ex) <= 4.0 * e1.dispersion);
}

TEST_CASE("2-concavity is enforced") {
  // t^{2.5} has M''' > 0: not 2-concave
  auto bad = normalize_by_linearization(OrliczFunction::power(2.5));
  Matrix a(2, 2);
  a.at(0, 0) = 1.0;
  CHECK_THROWS_AS(psi_l1_norm(a, bad, 1.5, cfg(3, 100)), std::domain_error);
}

TEST_CASE("sign flips leave the estimate unchanged up to dispersion") {
  const int n = 4;
  Matrix a = random_normal_matrix(n, 10, 0);
  Matrix flipped = a;
  flipped.at(0, 1) = -flipped.at(0, 1);
  flipped.at(2, 3) = -flipped.at(2, 3);
  auto m = m17();
  auto ea = psi_l1_norm(a, m, 1.5, cfg(4, 40000));
  auto eb = psi_l1_norm(flipped, m, 1.5, cfg(4, 40000));
  CHECK(std::abs(ea.estimate - eb.estimate) <=
        4.0 * (ea.dispersion + eb.dispersion));
}

TEST_CASE("khintchine sandwich per conditioned replicate") {
  // For fixed coefficients c, E_r |sum c_ij r_ij| lies in
  // [||c||_2/sqrt(2), ||c||_2].
  const int n = 5;
  Matrix c = random_normal_matrix(n, 77, 1);
  double l2 = 0.0;
  for (double v : c.a) l2 += v * v;
  l2 = std::sqrt(l2);

  SubstreamRng rng(123, 0);
  const int reps = 200000;
  double acc = 0.0;
  for (int r = 0; r < reps; ++r) {
    double s = 0.0;
    for (double v : c.a) s += v * rng.rademacher();
    acc += std::abs(s);
  }
  const double est = acc / reps;
  const double slack = 1e-2 * l2;
  CHECK(est >= l2 / std::sqrt(2.0) - slack);
  CHECK(est <= l2 + slack);
}

TEST_CASE("nested norm basics") {
  auto m = m17();
  Matrix a(2, 3);
  a.at(0, 0) = 1.0;
  a.at(0, 1) = 2.0;
  a.at(0, 2) = 0.0;
  a.at(1, 0) = 0.0;
  a.at(1, 1) = 0.0;
  a.at(1, 2) = 3.0;
  std::vector<double> r0{1.0, 2.0, 0.0}, r1{0.0, 0.0, 3.0};
  const double n0 = luxemburg_norm(m, {r0.data(), r0.size()});
  const double n1 = luxemburg_norm(m, {r1.data(), r1.size()});
  const double q = 1.5;
  CHECK(nested_norm(a, m, q) ==
        doctest::Approx(std::pow(std::pow(n0, q) + std::pow(n1, q), 1.0 / q))
            .epsilon(1e-12));
}

TEST_CASE("distortion sweep invariances") {
  auto m = m17();
  const double q = 1.5;

  SUBCASE("scaling leaves every ratio unchanged") {
    Matrix a = random_normal_matrix(3, 5, 2);
    Matrix a2 = a;
    for (auto& v : a2.a) v *= 7.25;
    auto e1 = psi_l1_norm(a, m, q, cfg(6, 20000));
    auto e2 = psi_l1_norm(a2, m, q, cfg(6, 20000));
    // identical streams, exactly homogeneous values
    CHECK(e2.estimate == doctest::Approx(7.25 * e1.estimate).epsilon(1e-12));
    CHECK(nested_norm(a2, m, q) ==
          doctest::Approx(7.25 * nested_norm(a, m, q)).epsilon(1e-12));
  }

  SUBCASE("row permutation leaves paired-seed ratios unchanged") {
    Matrix a = random_normal_matrix(3, 6, 3);
    Matrix p(3, 3);
    // swap rows 0 and 2
    for (int j = 0; j < 3; ++j) {
      p.at(0, j) = a.at(2, j);
      p.at(1, j) = a.at(1, j);
      p.at(2, j) = a.at(0, j);
    }
    CHECK(nested_norm(p, m, q) ==
          doctest::Approx(nested_norm(a, m, q)).epsilon(1e-12));
    auto ea = psi_l1_norm(a, m, q, cfg(7, 40000));
    auto ep = psi_l1_norm(p, m, q, cfg(7, 40000));
    CHECK(std::abs(ea.estimate - ep.estimate) <=
          4.0 * (ea.dispersion + ep.dispersion));
  }

  SUBCASE("single-entry matrices are exchangeable") {
    Matrix e00(3, 3), e12(3, 3);
    e00.at(0, 0) = 1.0;
    e12.at(1, 2) = 1.0;
    auto a = psi_l1_norm(e00, m, q, cfg(8, 40000));
    auto b = psi_l1_norm(e12, m, q, cfg(8, 40000));
    CHECK(nested_norm(e00, m, q) ==
          doctest::Approx(nested_norm(e12, m, q)).epsilon(1e-12));
    CHECK(std::abs(a.estimate - b.estimate) <=
          4.0 * (a.dispersion + b.dispersion));
  }

  SUBCASE("small sweep is sane and deterministic") {
    auto rep = distortion_sweep(m, q, {2, 4}, 5, cfg(9, 4000));
    REQUIRE(rep.per_n.size() == 2);
    for (const auto& row : rep.per_n) {
      CHECK(row.matrices == 5);
      CHECK(row.min_ratio > 0.0);
      CHECK(row.min_ratio <= row.max_ratio);
    }
    CHECK(rep.cross_n_stability >= 1.0);
    auto rep2 = distortion_sweep(m, q, {2, 4}, 5, cfg(9, 4000));
    CHECK(rep2.cross_n_stability == rep.cross_n_stability);
  }
}
