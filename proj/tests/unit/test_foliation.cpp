#include "doctest.h"
#include "ovals/foliation.hpp"

using namespace ovals;

namespace {

const Dimension n2(2);
const double c2 = 2.0;

// coarse atlas shared by the cheap checks
const Foliation& atlas() {
  static const Foliation F = [] {
    AtlasSpec s;
    s.a_max = 80;
    s.b_min = 0.01;
    s.ratio = 1.1;
    return build_foliation(n2, default_a_grid(s), default_b_grid(s), s.y0);
  }();
  return F;
}

Foliation caps_only(double ratio, double a_max) {
  AtlasSpec s;
  s.ratio = ratio;
  s.a_max = a_max;
  return build_foliation(n2, default_a_grid(s), {}, s.y0);
}

}  // namespace

TEST_CASE("geometric grid") {
  auto g = geometric_grid(5, 200, 1.05);
  CHECK(g.front() == 5.0);
  CHECK(g.back() == 200.0);
  for (std::size_t i = 1; i + 1 < g.size(); ++i) CHECK(g[i] / g[i - 1] == doctest::Approx(1.05));
  CHECK(g[g.size() - 1] / g[g.size() - 2] <= 1.05 + 1e-12);
  AtlasSpec s;
  CHECK(default_b_grid(s).front() > s.b_min);
  CHECK(default_b_grid(s).back() == s.b0);
  CHECK_THROWS_AS(geometric_grid(1, 2, 1.0), UsageError);
}

TEST_CASE("atlas builds without crossings") {
  const auto& F = atlas();
  CHECK(F.caps.size() == default_a_grid({5, 80, 1e-3, 1, 1.1}).size());
  CHECK(F.cylinder_radius == doctest::Approx(std::sqrt(2.0)));
  // caps nest at a common height
  for (std::size_t k = 1; k < F.caps.size(); ++k)
    if (F.caps[k - 1].parameter > 6.0)
      CHECK(leaf_point(F.caps[k], 6.0).r > leaf_point(F.caps[k - 1], 6.0).r);

  // too low an entry height: caps cross the cylinder near y = sqrt(2)
  CHECK_THROWS_AS(build_foliation(n2, {5.0, 6.0}, {}, 1.0), FoliationViolation);
  CHECK_THROWS_AS(build_foliation(n2, {6.0, 5.0}, {}, 5.0), UsageError);
  CHECK_THROWS_AS(build_foliation(n2, {4.0}, {}, 5.0), UsageError);
  CHECK_THROWS_AS(build_foliation(n2, {6.0}, {0.5, 2.0}, 5.0), UsageError);
}

TEST_CASE("leaf lookup") {
  const auto& F = atlas();
  const double c = F.cylinder_radius;

  auto cyl = leaf_through(F, 10.0, c);
  CHECK(cyl.kind == LeafKind::Cylinder);
  CHECK(cyl.phi == 0.0);
  CHECK(std::isinf(cyl.parameter));

  for (std::size_t k : {std::size_t(5), std::size_t(12), std::size_t(20)}) {
    const auto& L = F.caps[k];
    for (double y : {6.0, 9.0}) {
      if (L.parameter <= y) continue;
      const auto P = leaf_point(L, y);
      const auto hit = leaf_through(F, y, P.r);
      CHECK(hit.kind == LeafKind::Cap);
      CHECK(hit.parameter == doctest::Approx(L.parameter).epsilon(1e-6));
      CHECK(hit.phi == doctest::Approx(P.phi).epsilon(1e-6));
      CHECK(hit.nu_y * hit.nu_y + hit.nu_r * hit.nu_r == doctest::Approx(1.0));
    }
  }
  const auto& T = F.trumpets[20];
  const auto P = leaf_point(T, 12.0);
  const auto hit = leaf_through(F, 12.0, P.r);
  CHECK(hit.kind == LeafKind::Trumpet);
  CHECK(hit.parameter == doctest::Approx(T.parameter).epsilon(1e-6));
  CHECK(hit.phi > 0.0);

  // inside the cylinder the angle stays in (-pi/2, 0]
  for (double y : {6.0, 15.0, 30.0})
    for (double r : {0.1, 0.5, 1.0, 1.3}) {
      const double phi = leaf_through(F, y, r).phi;
      CHECK(phi > -kPi / 2 - 1e-12);
      CHECK(phi <= 0.0);
    }

  CHECK_THROWS_AS(leaf_through(F, 4.0, 1.0), DomainError);
  CHECK_THROWS_AS(leaf_through(F, 10.0, 0.0), DomainError);
  CHECK_THROWS_AS(leaf_through(F, 10.0, 11.0), DomainError);
  CHECK_THROWS_AS(leaf_through(F, 10.0, c - 1e-9), DomainError);
  CHECK_THROWS_AS(leaf_through(F, 10.0, c + 1e-9), DomainError);
}

TEST_CASE("tan phi law near the cylinder") {
  const auto& F = atlas();
  const double K = 20.0;
  int used = 0;
  for (double y : {6.0, 8.0, 10.0, 15.0, 20.0})
    for (double r = 1.30; r <= 1.50; r += 0.005) {
      const double d = std::abs(r * r - c2);
      if (d < 0.01 || d > 0.1) continue;
      double w;
      try {
        w = tan_phi_w(F, y, r);
      } catch (const DomainError&) {
        continue;
      }
      ++used;
      CHECK(w >= 2.0 - 1e-3);
      CHECK(w <= 2.0 + K / (y * y) + 1e-3);
    }
  CHECK(used > 30);
}

TEST_CASE("calibration divergence converges and the sphere control does not") {
  const auto F1 = caps_only(1.05, 120);
  const auto F2 = caps_only(std::sqrt(1.05), 120);
  Region R1, R2;
  R2.h = R1.h / 2;
  const auto D1 = calibration_divergence(F1, R1);
  const auto D2 = calibration_divergence(F2, R2);
  CHECK(D1.points > 1000);
  CHECK(D1.max_div / D2.max_div >= 3.0);

  auto sphere = [](double y, double r) { return std::atan(-y / r); };
  const auto S1 = field_divergence(sphere, n2, R1);
  const auto S2 = field_divergence(sphere, n2, R2);
  CHECK(S1.max_div / S2.max_div < 1.5);
  CHECK(S2.max_div > 30 * D2.max_div);
  CHECK(S2.max_scaled_div > 1.0);

  // the cylinder itself: nu = (0, 1) is exactly divergence free at r^2 = 2(n-1)
  Region cyl{6, 10, std::sqrt(2.0), std::sqrt(2.0), 0.1};
  const auto C = field_divergence([](double, double) { return 0.0; }, n2, cyl);
  CHECK(C.max_scaled_div < 1e-3);

  Region axis = R1;
  axis.r_lo = 0.05;
  CHECK_THROWS_AS(calibration_divergence(F1, axis), DomainError);
}

TEST_CASE("normal variation") {
  const auto& F = atlas();
  for (double a : {10.0, 20.0, 40.0}) {
    CAPTURE(a);
    const auto V1 = normal_variation(F, a, 2e-3 * a);
    const auto V2 = normal_variation(F, a, 1e-3 * a);
    CHECK(V1.v_tip == doctest::Approx(1.0).epsilon(0.02));
    CHECK(V1.v_min > 0.0);
    CHECK(V2.v_min > 0.0);
    CHECK(V1.y.back() >= F.y0);
    // first order in da; the O(da^2) term has the opposite sign, so the observed rate approaches 1 from below
    const double rate = std::log2(V1.jacobi_residual / V2.jacobi_residual);
    CHECK(rate >= 0.95);
    CHECK(V2.jacobi_residual < 1e-2);
  }
  CHECK_THROWS_AS(normal_variation(F, 20.0, 0.5), UsageError);
  CHECK_THROWS_AS(normal_variation(F, 100.0, 0.1), UsageError);
}

TEST_CASE("supersolution surrogate on large caps") {
  const auto& F = atlas();
  for (const auto& L : F.caps) {
    if (L.parameter < 2 * F.y0) continue;
    CAPTURE(L.parameter);
    CHECK(supersolution_margin(L, F.y0) <= 0.0);
  }
  CHECK(std::isnan(supersolution_margin(F.caps.front(), F.y0)));

  Dimension n3(3);
  const double y0 = 5 * std::sqrt(2.0);
  CHECK(supersolution_margin(shoot_leaf(40, n3, y0 - 1), y0) <= 0.0);
}

TEST_CASE("squeeze near the cylinder") {
  const auto Q = squeeze_report(atlas(), 0.1);
  CHECK(Q.samples > 1000);
  CHECK(Q.min_w >= 2.0 - 1e-6);
  CHECK(Q.max_excess <= 20.0);
}
