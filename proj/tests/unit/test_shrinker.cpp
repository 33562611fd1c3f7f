#include "doctest.h"
#include "ovals/shrinker.hpp"

using namespace ovals;

namespace {

const Dimension n2(2);

double tip_vs_bowl(const BowlProfile& B, double a) {
  auto T = solve_tip_cap(a, 10.0, n2);
  double e = 0;
  for (std::size_t k = 0; k < T.rho.size(); ++k) e = std::max(e, std::abs(T.psi[k] - B.psi[k]));
  return e;
}

double max_abs_residual(const ShrinkerLeaf& L, double lo) {
  double e = 0;
  for (std::size_t i = 0; i < L.y.size(); ++i)
    if (L.y[i] >= lo && L.y[i] <= L.y_Ma) e = std::max(e, std::abs(L.residual[i]));
  return e;
}

}  // namespace

TEST_CASE("shrinker residual oracles") {
  for (int nn : {2, 3, 5}) {
    Dimension n(nn);
    const double c = n.cylinder_radius();
    CHECK(std::abs(shrinker_residual(0.7, c, 0.0, 0.0, n)) < 1e-15);
    // sphere of radius sqrt(2n): u = sqrt(2n - y^2)
    for (double y : {0.0, 0.5, 1.0, 1.5}) {
      const double R2 = 2.0 * nn, u = std::sqrt(R2 - y * y);
      const double uy = -y / u, uyy = -R2 / (u * u * u);
      CHECK(std::abs(shrinker_residual(y, u, uy, uyy, n)) < 1e-13);
    }
  }
}

TEST_CASE("trumpet seed correction kills the 1/y term") {
  const double b = 0.5;
  for (int nn : {2, 4}) {
    Dimension n(nn);
    auto res = [&](double y, double c) {
      return shrinker_residual(y, b * y + c / y, b - c / (y * y), 2 * c / (y * y * y), n);
    };
    const double c = (nn - 1) / b;
    // residual with the right constant decays like y^-3, with c = 0 only like 1/y
    const double r1 = res(100, c) * 1e6, r2 = res(200, c) * 8e6;
    CHECK(r2 == doctest::Approx(r1).epsilon(0.05));
    CHECK(std::abs(res(200, 0.0) * 200 - res(100, 0.0) * 100) < 1e-2 * std::abs(res(100, 0.0) * 100));
  }
}

TEST_CASE("bowl profile") {
  auto B = solve_bowl(n2, 40.0);
  CHECK(B.psi[0] == 0.0);
  CHECK(B.dpsi[0] == 0.0);
  CHECK(B.ddpsi[0] == doctest::Approx(0.25).epsilon(1e-12));
  // second derivative at the origin from the integrated samples
  const double fd = 2 * B.psi[100] / (B.rho[100] * B.rho[100]);
  CHECK(fd == doctest::Approx(0.25).epsilon(1e-4));
  for (std::size_t k = 1; k < B.rho.size(); k += 97) {
    CHECK(B.dpsi[k] > 0);
    CHECK(B.ddpsi[k] > 0);
  }
  std::vector<double> x, f;
  for (double r = 15; r <= 40; r += 0.5) {
    x.push_back(r);
    f.push_back(B.slope(r) - (r / 2 - 2 / r));
  }
  CHECK(loglog_slope(x, f) == doctest::Approx(-3.0).epsilon(0.4 / 3));

  Dimension n3(3);
  auto B3 = solve_bowl(n3, 20.0);
  CHECK(B3.ddpsi[0] == doctest::Approx(1.0 / 6));
  CHECK_THROWS_AS(solve_bowl(n2, 5.0), UsageError);
  CHECK_THROWS_AS(solve_bowl(n2, 20.0, 0.1), UsageError);
}

TEST_CASE("tip cap converges to the bowl like a^-2") {
  auto B = solve_bowl(n2, 10.0);
  const double e20 = tip_vs_bowl(B, 20), e40 = tip_vs_bowl(B, 40), e80 = tip_vs_bowl(B, 80);
  CHECK(e40 / e20 >= 0.2);
  CHECK(e40 / e20 <= 0.35);
  CHECK(e80 / e40 >= 0.2);
  CHECK(e80 / e40 <= 0.35);

  auto T = solve_tip_cap(40, 10, n2);
  CHECK(T.psi[0] == 0.0);
  CHECK(2 * T.psi[50] / (T.rho[50] * T.rho[50]) == doctest::Approx(0.25).epsilon(1e-3));
  for (std::size_t k = 1; k < T.rho.size(); ++k) CHECK(T.psi[k] > T.psi[k - 1]);
  CHECK_THROWS_AS(solve_tip_cap(5, 10, n2), UsageError);
  CHECK_THROWS_AS(solve_tip_cap(20, 5, n2), UsageError);
}

TEST_CASE("cap leaf properties") {
  auto L = shoot_leaf(40, n2, 0.0);
  CHECK_FALSE(L.terminated_early);
  CHECK(L.y_star <= 0.0);
  CHECK(L.y.back() < 40.0);
  int violations = 0;
  for (std::size_t i = 0; i < L.y.size(); ++i) {
    const double y = L.y[i];
    if (L.u[i] * L.u[i] < 2 * (1 - y * y / 1600)) ++violations;
  }
  CHECK(violations == 0);
  // concave: slope decreasing in y
  for (std::size_t i = 1; i < L.y.size(); ++i) CHECK(L.uy[i] <= L.uy[i - 1] + 1e-9);

  auto W = w_diagnostic(L);
  CHECK(W.clipped);
  CHECK(W.clip_lo == doctest::Approx(std::sqrt(2.0)).epsilon(0.05));
  CHECK(W.tip_limit == doctest::Approx(4.0).epsilon(2.5e-4));
  for (double w : W.w) CHECK(w > 2.0);
  CHECK(W.ode_residual < 1e-2);

  CHECK(L.u_at(10.0) == doctest::Approx(L.u[std::size_t(std::lower_bound(L.y.begin(), L.y.end(), 10.0) - L.y.begin())]).epsilon(1e-4));
}

TEST_CASE("tip limit of w in higher dimension") {
  Dimension n3(3);
  auto L = shoot_leaf(30, n3, 5.0);
  CHECK(w_diagnostic(L).tip_limit == doctest::Approx(3.0).epsilon(1e-3));
}

TEST_CASE("leaf residual is second order in the step") {
  ShrinkerOptions o1, o2;
  o2.h = 5e-4;
  o2.store_every = 20;
  auto L1 = shoot_leaf(20, n2, 2.0, o1);
  auto L2 = shoot_leaf(20, n2, 2.0, o2);
  const double r1 = max_abs_residual(L1, 2.0), r2 = max_abs_residual(L2, 2.0);
  CHECK(r1 < 1e-6);
  CHECK(r1 / r2 > 3.5);
  CHECK(r1 / r2 < 4.5);
}

TEST_CASE("small caps stop early") {
  // a below the cylinder radius scale: the leaf loops before reaching the axis
  auto L = shoot_leaf(1.0, n2, 0.0);
  CHECK(L.y.size() > 3);
  CHECK(L.y_star < 1.0);
}

TEST_CASE("trumpets") {
  for (double b : {0.1, 0.5, 1.0}) {
    CAPTURE(b);
    const double Y = trumpet_seed_height(b, n2);
    auto T = solve_trumpet(b, n2, 0.0, Y);
    CHECK(T.y.front() == 0.0);
    for (std::size_t i = 1; i < T.y.size(); ++i) CHECK(T.uy[i] >= T.uy[i - 1] - 1e-9);
    // u - by ~ 1/(b y)
    const double g1 = T.u_at(Y / 4) - b * Y / 4, g2 = T.u_at(Y / 2) - b * Y / 2;
    CHECK(g2 < g1);
    CHECK(g2 * (Y / 2) == doctest::Approx(1.0 / b).epsilon(0.02));
    auto W = w_diagnostic(T);
    for (std::size_t i = 0; i < W.y.size(); ++i)
      if (W.y[i] >= 2 * std::sqrt(2.0)) {
        // w - 2 ~ y^-4 far out sits at the seed/rounding floor
        CHECK(W.w[i] > 2.0 - 1e-7);
        CHECK((W.w[i] - 2) * W.y[i] * W.y[i] <= 16.0);
      }
    CHECK(std::isnan(W.tip_limit));
  }
  CHECK_THROWS_AS(solve_trumpet(2.0, n2, 0.0, 200), UsageError);
  CHECK_THROWS_AS(solve_trumpet(0.5, n2, 0.0, 50), UsageError);
}

TEST_CASE("expansion fits") {
  std::vector<ShrinkerLeaf> leaves;
  for (double a : {20.0, 40.0, 80.0}) leaves.push_back(shoot_leaf(a, n2, 0.0));
  auto fits = expansion_sweep(leaves, 0.0, 5.0);
  for (std::size_t i = 0; i + 1 < fits.size(); ++i) {
    const double s0 = fits[i].inner_sup_residual * std::pow(leaves[i].parameter, 2);
    const double s1 = fits[i + 1].inner_sup_residual * std::pow(leaves[i + 1].parameter, 2);
    CHECK(s1 <= 0.5 * s0);
    CHECK(fits[i + 1].outer_sup_residual < fits[i].outer_sup_residual);
  }
  CHECK(fits.back().coefficient == doctest::Approx(1.0).epsilon(0.01));
  CHECK(fits.back().decay_exponent < -3.0);

  // exact cylinder: the expansion is exact at y^2 = 2
  ShrinkerLeaf cyl;
  cyl.parameter = 20;
  cyl.n = n2;
  cyl.y = {std::sqrt(2.0)};
  cyl.u = {std::sqrt(2.0)};
  cyl.uy = {0.0};
  auto F = fit_expansions(cyl, 1.0, 2.0);
  CHECK(F.inner_sup_residual < 1e-15);
  CHECK_THROWS_AS(fit_expansions(cyl, 0.0, 6.0), UsageError);
}
