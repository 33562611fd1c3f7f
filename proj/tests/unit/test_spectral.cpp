#include <random>

#include "doctest.h"
#include "ovals/spectral.hpp"

using namespace ovals;

namespace {
const double sqrt_pi = std::sqrt(kPi);

Samples sampled(const Polynomial& p, const Grid& g) {
  return sample(g, [&](double y) { return p(y); });
}
}  // namespace

TEST_CASE("hermite recurrence") {
  CHECK(hermite(0).c == std::vector<double>{1.0});
  CHECK(hermite(1).c == std::vector<double>{-2.0, 0.0, 1.0});
  CHECK(hermite(2).c == std::vector<double>{12.0, 0.0, -12.0, 0.0, 1.0});
  for (int m = 0; m <= 6; ++m) {
    const auto p = hermite(m);
    CHECK(p.c.back() == 1.0);
    // eigen-relation holds exactly in coefficient arithmetic
    const auto r = apply_L(p) - (1.0 - m) * p;
    for (double v : r.c) CHECK(v == 0.0);
  }
  CHECK_THROWS_AS(hermite(-1), UsageError);
}

TEST_CASE("gaussian moments and norms") {
  const auto p2 = hermite(1);
  CHECK(exact_inner(hermite(0), hermite(0)) == doctest::Approx(2 * sqrt_pi));
  CHECK(exact_inner(p2, p2) == doctest::Approx(16 * sqrt_pi).epsilon(1e-14));
  CHECK(exact_inner(p2, p2 * p2) / exact_inner(p2, p2) == doctest::Approx(8.0).epsilon(1e-14));

  const Grid g = default_grid();
  const auto s2 = sampled(p2, g);
  CHECK(std::abs(weighted_inner(s2, s2, g) - 16 * sqrt_pi) < 1e-6);
  const auto sq = sampled(p2 * p2, g);
  CHECK(std::abs(weighted_inner(s2, sq, g) / weighted_inner(s2, s2, g) - 8.0) < 1e-6);

  const auto B = make_basis(7);
  for (int i = 0; i < 7; ++i)
    for (int j = 0; j < i; ++j) {
      const auto a = sampled(B.psi[i], g), b = sampled(B.psi[j], g);
      CHECK(std::abs(weighted_inner(a, b, g)) <= 1e-8 * std::sqrt(B.norms2[i] * B.norms2[j]));
    }
}

TEST_CASE("quadratic form identity") {
  const Grid g = default_grid();
  const Polynomial f{{0.3, 0.0, -0.7, 0.0, 0.05}};
  const auto Lf = sampled(apply_L(f), g), fs = sampled(f, g), fp = sampled(f.derivative(), g);
  Samples integrand(fs.size());
  for (std::size_t i = 0; i < fs.size(); ++i) integrand[i] = (fp[i] * fp[i] - fs[i] * fs[i]) * gaussian_weight(g.node(int(i)));
  CHECK(weighted_inner(fs, Lf, g) == doctest::Approx(-simpson(integrand, g.h)).epsilon(1e-10));
}

TEST_CASE("parseval on even polynomials") {
  const auto B = make_basis(7);
  const Grid g = default_grid();
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> U(-1, 1);
  for (int trial = 0; trial < 5; ++trial) {
    Polynomial p;
    p.c.assign(13, 0.0);
    for (int k = 0; k <= 12; k += 2) p.c[k] = U(rng);
    Polynomial rec{{0.0}};
    for (int m = 0; m < 7; ++m) rec = rec + (exact_inner(p, B.psi[m]) / B.norms2[m]) * B.psi[m];
    // hermite coefficients reach 1e8, so compare in the weighted norm
    const auto diffp = rec - p;
    CHECK(exact_inner(diffp, diffp) < 1e-20 * exact_inner(p, p));
  }
}

TEST_CASE("cutoff bump") {
  CHECK(cutoff_bump(0.5) == 1.0);
  CHECK(cutoff_bump(-1.0) == 1.0);
  CHECK(cutoff_bump(2.0) == 0.0);
  CHECK(cutoff_bump(1.5) == doctest::Approx(0.5));
  double prev = 1.0;
  for (double s = 1.0; s <= 2.0; s += 0.01) {
    CHECK(cutoff_bump(s) <= prev + 1e-15);
    prev = cutoff_bump(s);
  }
  // analytic derivatives against centered differences
  for (double s : {-1.7, -1.2, 1.1, 1.4, 1.9}) {
    const double e = 1e-5;
    CHECK(cutoff_bump_prime(s) == doctest::Approx((cutoff_bump(s + e) - cutoff_bump(s - e)) / (2 * e)).epsilon(1e-6));
    CHECK(cutoff_bump_second(s) ==
          doctest::Approx((cutoff_bump_prime(s + e) - cutoff_bump_prime(s - e)) / (2 * e)).epsilon(1e-5));
  }
}

TEST_CASE("truncation") {
  const Grid g = default_grid();
  const double dbar = 27.0;  // ell = 3
  auto inside = sample(g, [](double y) { return std::abs(y) < 2.9 ? std::cos(y) : 0.0; });
  auto t = truncate(inside, g, dbar);
  CHECK(t.cutoff.ell == doctest::Approx(3.0));
  CHECK(t.vbar == inside);
  auto ones = sample(g, [](double) { return 1.0; });
  CHECK(truncate(ones, g, dbar).vbar == t.cutoff.phi);
  auto big = sample(g, [](double y) { return 1.0 + y * y; });
  auto tb = truncate(big, g, dbar);
  Samples restricted = big;
  for (int i = 0; i < g.count; ++i)
    if (std::abs(g.node(i)) > 6.0) restricted[i] = 0.0;
  CHECK(weighted_norm(tb.vbar, g) <= weighted_norm(restricted, g));
  CHECK_THROWS_AS(truncate(ones, g, 2000.0), UsageError);
  auto holes = ones;
  holes[g.center()] = std::nan("");
  CHECK_THROWS_AS(truncate(holes, g, dbar), UsageError);
}

TEST_CASE("projection") {
  const Grid g = default_grid();
  const auto B = make_basis(4);
  const auto s = project(sampled(B.psi[1], g), g, B);
  CHECK(s.Vplus < 1e-10);
  CHECK(s.Vzero * s.Vzero == doctest::Approx(16 * sqrt_pi).epsilon(1e-8));
  CHECK(s.Vminus < 1e-4);
  CHECK(s.alpha == doctest::Approx(1.0));

  const auto m = project(sampled(B.psi[0] + B.psi[2], g), g, B);
  CHECK(m.Vplus == doctest::Approx(std::sqrt(B.norms2[0])).epsilon(1e-8));
  CHECK(m.Vzero < 1e-8);
  CHECK(m.Vminus == doctest::Approx(std::sqrt(B.norms2[2])).epsilon(1e-8));

  for (double c : {-0.3, 2.5}) CHECK(project(sampled(c * B.psi[1], g), g, B).alpha == doctest::Approx(c));

  // Pythagoras on a generic bump
  auto f = sample(g, [](double y) { return std::exp(-y * y) * (1 + y); });
  const auto q = project(f, g, B);
  CHECK(q.Vplus * q.Vplus + q.Vzero * q.Vzero + q.Vminus * q.Vminus ==
        doctest::Approx(q.norm * q.norm).epsilon(1e-10));
}

TEST_CASE("error terms") {
  const Grid g = default_grid();
  Dimension n(2);
  Samples zero(std::size_t(g.count), 0.0);
  auto t0 = truncate(zero, g, 27.0);
  const auto E0 = error_terms(zero, t0, g, n, 27.0, 0.1);
  CHECK(E0.total == 0.0);
  CHECK(E0.E1 == 0.0);

  auto v = sample(g, [](double y) { return -0.01 * (y * y - 2); });
  auto t = truncate(v, g, 27.0);
  const auto E = error_terms(v, t, g, n, 27.0, 0.5);
  for (int i = 0; i < g.count; ++i) {
    const double y = std::abs(g.node(i));
    if (y < 3.0 - 1e-9 || y > 6.0 + 1e-9) {
      CHECK(E.e2[i] == 0.0);
      CHECK(E.e3[i] == 0.0);
    }
  }
  CHECK(E.total <= E.E1 + E.E2 + E.E3 + 1e-15);
  CHECK(E.E2 > 0);
}

TEST_CASE("mode classification") {
  const double n2 = std::sqrt(16 * sqrt_pi);
  std::vector<ModeSample> plus, zero;
  for (double tau = -20; tau <= -8; tau += 0.5) {
    plus.push_back({tau, {std::exp(tau), std::exp(1.5 * tau), std::exp(1.5 * tau), 0, 0}});
    zero.push_back({tau, {1 / (tau * tau), n2 / std::abs(4 * tau), 1 / (tau * tau), 0, 0}});
  }
  CHECK(classify_modes(plus).dominant == Dominant::Plus);
  const auto z = classify_modes(zero);
  CHECK(z.dominant == Dominant::Zero);
  CHECK(z.zero_power == doctest::Approx(-1.0));
  std::vector<ModeSample> shortw(zero.begin(), zero.begin() + 5);
  CHECK(classify_modes(shortw).dominant == Dominant::Undetermined);
}

TEST_CASE("alpha tracking") {
  std::vector<double> tau, a, b;
  for (double t = -50; t <= -25; t += 0.25) {
    tau.push_back(t);
    a.push_back(-1 / (4 * t));
  }
  const auto A = track_alpha(tau, a);
  CHECK(A.slope_check == doctest::Approx(4.0).epsilon(1e-3));
  CHECK(A.alpha_fit == doctest::Approx(1.0).epsilon(1e-12));

  // perturbed law approaches 1 as |tau| grows
  double prev = 1e9;
  for (double T : {50.0, 200.0, 800.0}) {
    std::vector<double> tt, aa;
    for (double t = -2 * T; t <= -T; t += T / 50) {
      tt.push_back(t);
      aa.push_back(-1 / (4 * t) + 1 / (t * t));
    }
    const double err = std::abs(track_alpha(tt, aa).alpha_fit - 1.0);
    CHECK(err < prev);
    prev = err;
  }
  std::vector<double> bad = a;
  bad[10] = -bad[10];
  CHECK_THROWS_AS(track_alpha(tau, bad), RegimeError);
  CHECK_THROWS_AS(track_alpha({-1.0}, {0.1}), UsageError);
}
