#include <sstream>

#include "doctest.h"
#include "ovals/io.hpp"
#include "ovals/numerics.hpp"

using namespace ovals;

namespace {
const double sqrt_pi = std::sqrt(kPi);
}

TEST_CASE("dimension and grid invariants") {
  CHECK_THROWS_AS(Dimension(1), UsageError);
  Dimension n(3);
  CHECK(n.cylinder_radius() == doctest::Approx(2.0));
  CHECK(n.sphere_radius() == doctest::Approx(std::sqrt(6.0)));

  Grid g = default_grid();
  CHECK(g.h == doctest::Approx(0.01));
  CHECK(g.node(g.center()) == 0.0);
  CHECK(g.node(0) == -g.node(g.count - 1));
  CHECK_THROWS_AS(Grid(1.0, 10), UsageError);
  CHECK_THROWS_AS(Grid(-1.0, 11), UsageError);
}

TEST_CASE("weighted inner product against Gaussian moments") {
  Grid g = default_grid();
  auto one = sample(g, [](double) { return 1.0; });
  auto p2 = sample(g, [](double y) { return y * y - 2; });
  CHECK(weighted_inner(one, one, g) == doctest::Approx(2 * sqrt_pi).epsilon(1e-10));
  CHECK(std::abs(weighted_inner(one, p2, g)) < 1e-10);
  CHECK(weighted_inner(p2, p2, g) == doctest::Approx(16 * sqrt_pi).epsilon(1e-10));
  CHECK(weighted_inner(one, p2, g) == weighted_inner(p2, one, g));

  Grid other(10.0, 101);
  auto short_f = sample(other, [](double) { return 1.0; });
  CHECK_THROWS_AS(weighted_inner(short_f, one, g), UsageError);
}

TEST_CASE("simpson converges at high order") {
  auto err = [](int count) {
    Grid g(3.0, count);
    auto f = sample(g, [](double y) { return std::cos(y); });
    return std::abs(simpson(f, g.h) - 2 * std::sin(3.0));
  };
  CHECK(err(41) / err(81) >= 3.5);
  CHECK(err(81) / err(161) >= 3.5);
}

TEST_CASE("finite differences") {
  Grid g(2.0, 41);
  auto sq = sample(g, [](double y) { return y * y; });
  auto d = diff(sq, g, 1);
  for (int i = 1; i + 1 < g.count; ++i) CHECK(d[i] == doctest::Approx(2 * g.node(i)).epsilon(1e-12));

  auto cst = sample(g, [](double) { return 3.0; });
  for (int order = 1; order <= 3; ++order)
    for (double v : diff(cst, g, order)) CHECK(std::abs(v) < 1e-8);

  auto err = [](int count) {
    Grid gg(2.0, count);
    auto s = sample(gg, [](double y) { return std::sin(y); });
    auto ds = diff(s, gg, 1);
    double e = 0;
    for (int i = 0; i < gg.count; ++i) e = std::max(e, std::abs(ds[i] - std::cos(gg.node(i))));
    return e;
  };
  const double ratio = err(41) / err(81);
  CHECK(ratio > 3.5);
  CHECK(ratio < 4.5);

  // even input gives an exactly odd derivative
  auto ev = sample(g, [](double y) { return std::cos(y) + y * y; });
  auto od = diff(ev, g, 1);
  for (int i = 0; i < g.count; ++i) CHECK(od[i] == -od[g.count - 1 - i]);

  auto cube = sample(g, [](double y) { return y * y * y; });
  auto d3 = diff(cube, g, 3);
  for (int i = 2; i + 2 < g.count; ++i) CHECK(d3[i] == doctest::Approx(6.0).epsilon(1e-8));

  Grid tiny(1.0, 3);
  CHECK_THROWS_AS(diff(sample(tiny, [](double y) { return y; }), tiny, 2), UsageError);
  CHECK_THROWS_AS(diff(sq, g, 4), UsageError);
}

TEST_CASE("concavity report") {
  Dimension n(2);
  Grid g(1.9, 381);
  RadialProfile sphere{g, sample(g, [](double y) { return std::sqrt(4.0 - y * y); }), n, true, true};
  CHECK(concavity_report(sphere).is_concave);

  RadialProfile cyl{g, sample(g, [](double) { return std::sqrt(2.0); }), n, true, true};
  auto rc = concavity_report(cyl);
  CHECK(rc.is_concave);
  CHECK(std::abs(rc.max_second_difference) < 1e-8);

  Grid g1(1.0, 101);
  RadialProfile para{g1, sample(g1, [](double y) { return y * y; }), n, true, false};
  CHECK_FALSE(concavity_report(para).is_concave);
}

TEST_CASE("fornberg weights reproduce classical stencils") {
  const double x[] = {-1, 0, 1};
  auto w2 = fd_weights(0.0, x, 2);
  CHECK(w2[0] == doctest::Approx(1.0));
  CHECK(w2[1] == doctest::Approx(-2.0));
  CHECK(w2[2] == doctest::Approx(1.0));
  auto w1 = fd_weights(0.0, x, 1);
  CHECK(w1[0] == doctest::Approx(-0.5));
  CHECK(w1[2] == doctest::Approx(0.5));
}

TEST_CASE("interpolants") {
  std::vector<double> x{0, 1, 2, 3, 4}, f{0, 1, 8, 27, 64};
  CHECK(lagrange4(x, f, 2.5) == doctest::Approx(15.625));
  std::vector<double> df{0, 3, 12, 27, 48};
  CHECK(hermite_eval(x, f, df, 1.5) == doctest::Approx(3.375));

  MonotoneCubic mc({0, 1, 2, 3}, {0, 1, 1, 2});
  for (double t = 0; t <= 3; t += 0.05) CHECK(mc.prime(t) >= -1e-14);
  CHECK(mc(-1) == doctest::Approx(0.0));
  CHECK(bracket(x, 10.0) == 3);
}

TEST_CASE("arc curve invariants") {
  ArcCurve c;
  c.n = Dimension(2);
  const int m = 101;
  for (int i = 0; i < m; ++i) {
    const double t = kPi * i / (m - 1);
    c.y.push_back(2 * std::cos(t));
    c.r.push_back(i == 0 || i == m - 1 ? 0.0 : 2 * std::sin(t));
  }
  CHECK_NOTHROW(c.validate());
  CHECK(c.length() == doctest::Approx(2 * kPi).epsilon(1e-3));
  c.fill_theta();
  CHECK(c.theta.front() == doctest::Approx(kPi / 2).epsilon(0.05));
  CHECK(c.theta.back() == doctest::Approx(1.5 * kPi).epsilon(0.05));
  c.r[50] = -1;
  CHECK_THROWS_AS(c.validate(), InvalidState);
}

TEST_CASE("csv and json round trips") {
  Grid g(1.0, 5);
  auto f = sample(g, [](double y) { return y * y; });
  std::ostringstream os;
  write_samples_csv(os, g, f);
  std::istringstream is(os.str());
  auto t = read_csv(is);
  CHECK(t.header == std::vector<std::string>{"y", "value"});
  CHECK(t.get("value")[4] == doctest::Approx(1.0));
  CHECK(grid_from_json(grid_to_json(g)) == g);
  CHECK_THROWS_AS(t.get("nope"), UsageError);
}
