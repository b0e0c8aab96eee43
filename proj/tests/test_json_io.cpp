#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "correspondence.hpp"
#include "doctest.h"
#include "json_io.hpp"
#include "oracles.hpp"
#include "orlicz_ops.hpp"

using namespace orlz;

TEST_CASE("closed-form functions round-trip exactly") {
  oracle::TestRng rng(404);
  for (int i = 0; i < 10; ++i) {
    const double r = rng.range(1.3, 2.6);
    auto m = normalize_by_linearization(OrliczFunction::power(r));
    auto back = orlicz_from_json(orlicz_to_json(m));
    CHECK(back.kink() == m.kink());
    CHECK(back.flags().normalized == m.flags().normalized);
    CHECK(back.flags().linear_tail);
    for (double t : log_grid(1e-6, 10.0, 101)) CHECK(back(t) == m(t));
    for (double t : {0.3, 1.1, 2.9}) {
      CHECK(back.deriv(t, 1) == m.deriv(t, 1));
      CHECK(back.deriv(t, 2) == m.deriv(t, 2));
    }
  }
}

TEST_CASE("table-backed functions survive serialization approximately") {
  auto m = orlicz_from_p_norm(Distribution::pareto(1.5), 2.0);
  CHECK(m.has_exact());
  auto back = orlicz_from_json(orlicz_to_json(m));
  CHECK_FALSE(back.has_exact());
  const double hi = m.inverse(1.0);
  for (double s : log_grid(hi * 1e-3, hi * 3.0, 101))
    CHECK(back(s) == doctest::Approx(m(s)).epsilon(1e-5));
  // the affine tail branch is exact
  const double s_tail = *m.kink() * 3.0;
  CHECK(back(s_tail) == doctest::Approx(m(s_tail)).epsilon(1e-12));
}

TEST_CASE("distribution specs round-trip") {
  auto pq = dist_from_json(dist_to_json(Distribution::pareto(1.5)));
  CHECK(pq.kind() == "pareto_q");
  CHECK(pq.survival(2.0) == Distribution::pareto(1.5).survival(2.0));

  auto u = dist_from_json(dist_to_json(Distribution::uniform(0.25, 2.0)));
  CHECK(u.support_lo() == 0.25);
  CHECK(u.support_hi() == 2.0);

  auto c = dist_from_json(dist_to_json(Distribution::constant(3.0)));
  CHECK(c.atoms()[0].x == 3.0);

  auto t = dist_from_json(
      dist_to_json(Distribution::custom_table({0, 1, 2}, {1.0, 0.4, 0.0})));
  CHECK(t.survival(0.5) == doctest::Approx(0.7));

  auto m = normalize_by_linearization(OrliczFunction::power(1.7));
  auto dm = Distribution::from_orlicz(m, 2.0);
  auto dm2 = dist_from_json(dist_to_json(dm));
  CHECK(dm2.kind() == "from_orlicz");
  CHECK(dm2.param_p() == 2.0);
  for (double x : log_grid(dm.support_lo(), dm.support_lo() * 50, 33))
    CHECK(dm2.survival(x) == doctest::Approx(dm.survival(x)).epsilon(1e-12));

  auto dmax = dist_from_json(dist_to_json(Distribution::from_orlicz_max(m)));
  CHECK(dmax.kind() == "from_orlicz_max");
  CHECK(dmax.param_p() == kInf);

  // p = inf marker round-trips as a string
  auto dinf = Distribution::from_orlicz(m, kInf);
  auto j = dist_to_json(dinf);
  CHECK(j.at("kind") == "from_orlicz_max");
}

TEST_CASE("json errors are invalid_argument") {
  CHECK_THROWS_AS(orlicz_from_json(nlohmann::json::object()),
                  std::invalid_argument);
  CHECK_THROWS_AS(dist_from_json(nlohmann::json{{"kind", "mystery"}}),
                  std::invalid_argument);
}

TEST_CASE("format_double round-trips and stays short") {
  oracle::TestRng rng(8);
  for (int i = 0; i < 200; ++i) {
    const double v = std::exp(rng.range(-30, 30)) * (rng.uniform() - 0.5);
    const std::string s = format_double(v);
    CHECK(std::strtod(s.c_str(), nullptr) == v);
  }
  CHECK(format_double(0.25) == "0.25");
  CHECK(format_double(1.0) == "1");
  CHECK(format_double(kInf) == "inf");
}

TEST_CASE("csv document shape") {
  const auto doc = csv_document({"n", "value"}, {{1.0, 0.5}, {2.0, 0.25}});
  CHECK(doc == "n,value\n1,0.5\n2,0.25\n");
}
