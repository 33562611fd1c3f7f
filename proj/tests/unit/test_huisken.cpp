#include <random>

#include "doctest.h"
#include "ovals/huisken.hpp"

using namespace ovals;

namespace {

RadialProfile constant_profile(Dimension n, double u, const Grid& g) {
  return {g, Samples(std::size_t(g.count), u), n, true, true};
}

// parabolic-region shape, cut off where it would cross zero
RadialProfile parabola(double tau, const Grid& g) {
  Dimension n(2);
  const double c = n.cylinder_radius();
  auto u = sample(g, [&](double y) { return std::max(0.0, c * (1 - (y * y - 2) / (4 * std::abs(tau)))); });
  return {g, u, n, true, true};
}

}  // namespace

TEST_CASE("cylinder value in closed form") {
  const Grid g = default_grid();
  for (int nn : {2, 3, 4}) {
    Dimension n(nn);
    const auto H = huisken_graph(constant_profile(n, n.cylinder_radius(), g));
    CHECK(H.value == doctest::Approx(cylinder_huisken(n)).epsilon(1e-10));
  }
  CHECK(cylinder_huisken(Dimension(2)) == doctest::Approx(std::sqrt(2 / std::exp(1.0)) * 2 * std::sqrt(kPi)));
  CHECK(cylinder_huisken(Dimension(2)) == doctest::Approx(3.0407).epsilon(1e-4));
}

TEST_CASE("radial factor peaks at the cylinder radius") {
  for (int nn : {2, 3}) {
    Dimension n(nn);
    const double c = n.cylinder_radius(), top = huisken_radial_factor(n, c);
    for (double du : {-0.5, -1e-3, 1e-3, 0.5, 2.0}) CHECK(huisken_radial_factor(n, c + du) < top);
  }
}

TEST_CASE("windows add up and are validated") {
  const Grid g = default_grid();
  auto p = parabola(-200.0, g);
  const double a = huisken_graph(p, {0, 4}).value, b = huisken_graph(p, {4, 8}).value;
  CHECK(a + b == doctest::Approx(huisken_graph(p, {0, 8}).value).epsilon(1e-14));
  CHECK_THROWS_AS(huisken_graph(p, {0, 25}), UsageError);
  CHECK_THROWS_AS(huisken_graph(p, {3, 2}), UsageError);
  CHECK_THROWS_AS(huisken_graph(parabola(-10, g), {0, 10}), DomainError);
}

TEST_CASE("monotonicity along a rescaled run") {
  Dimension n(2);
  auto run = [&](double dt) {
    std::vector<FlowDiagnostics> D;
    FlowState S{0.0, sphere_curve(n, 1.7, 400), true};
    D.push_back(diagnostics(S));
    evolve(S, FlowKind::Rescaled, 0.3, dt, {}, [&](const FlowState& s) { D.push_back(diagnostics(s)); });
    return monotonicity_series(D);
  };
  double prev = 1e9;
  for (double dt : {4e-3, 2e-3}) {
    const auto M = run(dt);
    double worst = 0;
    for (const auto& s : M) {
      CHECK(s.dHdtau <= 1e-6);
      if (s.tau > 0.05) worst = std::max(worst, std::abs(s.gap) / s.dissipation);
    }
    CHECK(worst < 0.05);
    CHECK(worst < prev);
    prev = worst;
  }
  // stationary shrinker: nothing dissipates
  FlowState S{0.0, sphere_curve(n, n.sphere_radius(), 400), true};
  CHECK(diagnostics(S).dissipation < 1e-8);
}

TEST_CASE("inner-outer report") {
  const Grid g = default_grid();
  Dimension n(2);
  const auto zero = inner_outer_check(constant_profile(n, n.cylinder_radius(), g), 4, cylinder_huisken(n));
  CHECK(zero.rhs == 0.0);
  CHECK(zero.ratio_grad == 0.0);
  CHECK(zero.ratio_mass == 0.0);
  CHECK(zero.closeness_holds);

  CHECK_THROWS_AS(inner_outer_check(parabola(-40, g), 4, 1.01 * cylinder_huisken(n)), HypothesisError);
  CHECK_THROWS_AS(inner_outer_check(parabola(-40, g), 15, 1.0), UsageError);

  // grid refinement moves the ratios by less than 5%
  const auto A = inner_outer_check(parabola(-400, g), 6, 3.0);
  const auto B = inner_outer_check(parabola(-400, Grid(20, 8001)), 6, 3.0);
  CHECK(A.ratio_grad > 0);
  CHECK(B.ratio_grad == doctest::Approx(A.ratio_grad).epsilon(0.05));
  CHECK(B.ratio_mass == doctest::Approx(A.ratio_mass).epsilon(0.05));
  CHECK(A.lhs_grad >= 0);
  CHECK(A.lhs_mass >= 0);
}

TEST_CASE("weighted Poincare inequality") {
  auto zero = weighted_poincare_check([](double) { return 0.0; }, [](double) { return 0.0; }, 3.0);
  CHECK(zero.slack == 0.0);

  const auto one = weighted_poincare_check([](double) { return 1.0; }, [](double) { return 0.0; }, 2.0);
  const double erf1 = std::sqrt(kPi) * std::erf(1.0);
  CHECK(one.lhs == doctest::Approx(0.25 * erf1).epsilon(1e-12));
  CHECK(one.rhs == doctest::Approx(0.5 * std::exp(-1.0) + (2 * erf1 - 4 * std::exp(-1.0)) / 16).epsilon(1e-12));
  CHECK(one.lhs == doctest::Approx(0.37341).epsilon(1e-5));
  CHECK(one.rhs == doctest::Approx(0.27868).epsilon(1e-4));

  // equality case: f_y = y f / 4
  const auto eq = weighted_poincare_check([](double y) { return std::exp(y * y / 8); },
                                          [](double y) { return y / 4 * std::exp(y * y / 8); }, 3.0);
  CHECK(std::abs(eq.slack) < 1e-12);

  std::mt19937 rng(11);
  std::uniform_real_distribution<double> U(-1, 1), Ell(0.1, 8.0);
  double worst = 1e9;
  for (int k = 0; k < 1000; ++k) {
    double c[6];
    for (double& v : c) v = U(rng);
    auto f = [&](double y) { return ((((c[5] * y + c[4]) * y + c[3]) * y + c[2]) * y + c[1]) * y + c[0]; };
    auto fy = [&](double y) { return (((5 * c[5] * y + 4 * c[4]) * y + 3 * c[3]) * y + 2 * c[2]) * y + c[1]; };
    worst = std::min(worst, weighted_poincare_check(f, fy, Ell(rng)).slack);
  }
  CHECK(worst >= -1e-8);

  // sampled form agrees with the exact form
  Samples s(2001);
  for (int i = 0; i < 2001; ++i) s[i] = std::cos(3.0 * i / 2000);
  const auto S = weighted_poincare_check(s, 3.0);
  const auto E = weighted_poincare_check([](double y) { return std::cos(y); },
                                         [](double y) { return -std::sin(y); }, 3.0);
  CHECK(S.slack == doctest::Approx(E.slack).epsilon(1e-8));
}
