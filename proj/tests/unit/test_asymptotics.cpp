#include "doctest.h"
#include "ovals/asymptotics.hpp"

using namespace ovals;

namespace {

// Closed symmetric curve made of a speed-V bowl cap reaching rho = 2 V R and its mirror image.
FlowState bowl_cap_state(const BowlProfile& bowl, double V, double R, int nodes) {
  std::vector<double> qy, qr;
  const int K = 40000;
  const double depth = bowl.value(2 * V * R) / (2 * V);
  for (int k = 0; k <= K; ++k) {
    const double r = R * std::pow(double(k) / K, 1.5);
    qy.push_back(depth - bowl.value(2 * V * r) / (2 * V));
    qr.push_back(r);
  }
  std::vector<double> fy = qy, fr = qr;
  for (int k = K - 1; k >= 0; --k) {
    fy.push_back(-qy[k]);
    fr.push_back(qr[k]);
  }
  std::vector<double> s(fy.size(), 0.0);
  for (std::size_t k = 1; k < s.size(); ++k) s[k] = s[k - 1] + std::hypot(fy[k] - fy[k - 1], fr[k] - fr[k - 1]);
  ArcCurve C;
  C.n = bowl.n;
  for (int i = 0; i < nodes; ++i) {
    const double sq = s.back() * i / (nodes - 1);
    C.y.push_back(lagrange4(s, fy, sq));
    C.r.push_back(i == 0 || i == nodes - 1 ? 0.0 : lagrange4(s, fr, sq));
  }
  C.fill_theta();
  return {0.0, C, true};
}

}  // namespace

TEST_CASE("ansatz at tau0 = -50") {
  AnsatzSpec spec;
  const auto S = build_ansatz(spec);
  const auto D = diagnostics(S);
  const double T = 50, c = std::sqrt(2.0);
  const std::size_t m = S.curve.size();

  for (std::size_t i = 0; i < m; ++i) {
    CHECK(S.curve.y[i] == doctest::Approx(-S.curve.y[m - 1 - i]).epsilon(1e-12));
    CHECK(S.curve.r[i] == doctest::Approx(S.curve.r[m - 1 - i]).epsilon(1e-12));
  }
  CHECK(D.min_kappa > 0);
  CHECK(D.Rmax <= 1.0);
  CHECK(D.min_Py >= 0);
  CHECK(D.min_Qy >= 0);
  CHECK(D.argmax_at_tip);

  const auto P = graph_profile(S, default_grid());
  CHECK(P.u[std::size_t(P.grid.center())] == doctest::Approx(c * (1 + 1 / (2 * T))).epsilon(1e-6));
  CHECK(D.dbar == doctest::Approx(std::sqrt(2 * T)).epsilon(0.02));
  CHECK(D.Htip == doctest::Approx(std::sqrt(T / 2)).epsilon(0.05));
}

TEST_CASE("ansatz formulas and geometry") {
  Dimension n(2);
  CHECK(parabolic_profile(n, 0.0, -50) == doctest::Approx(std::sqrt(2.0) * 1.01));
  CHECK(parabolic_profile(n, std::sqrt(2.0), -50) == doctest::Approx(std::sqrt(2.0)));
  CHECK(intermediate_profile(n, 0.0) == doctest::Approx(std::sqrt(2.0)));
  CHECK(intermediate_profile(n, std::sqrt(2.0)) == 0.0);
  CHECK(intermediate_profile(Dimension(3), 1.0) == doctest::Approx(std::sqrt(2.0)));

  AnsatzSpec spec;
  spec.auto_tip = false;
  const auto g = ansatz_geometry(spec);
  CHECK(g.lambda == doctest::Approx(5.0));
  CHECK(g.dbar == doctest::Approx(10.0));
  CHECK(g.parabolic_hi == doctest::Approx(1.5 * std::pow(50.0, 0.4)));
  CHECK(g.tip_lo < g.tip_hi);

  const auto r = resolve_tip(AnsatzSpec{});
  CHECK_FALSE(r.auto_tip);
  CHECK(r.tip_drop <= 0.02);
  CHECK(diagnostics(build_ansatz(r)).argmax_at_tip);
}

TEST_CASE("ansatz errors") {
  AnsatzSpec bad;
  bad.tau0 = -20;
  CHECK_THROWS_AS(build_ansatz(bad), UsageError);
  bad = {};
  bad.parabolic_blend_hi = 0.4;
  CHECK_THROWS_AS(build_ansatz(bad), UsageError);

  // a tip placed 5% low cannot be glued concavely
  AnsatzSpec low;
  low.auto_tip = false;
  low.tip_drop = 0.05;
  CHECK_THROWS_AS(build_ansatz(low), AnsatzError);
  // a narrow parabolic blend bends the profile the wrong way
  AnsatzSpec narrow;
  narrow.parabolic_blend_lo = 0.5;
  narrow.parabolic_blend_hi = 0.55;
  CHECK_THROWS_AS(build_ansatz(narrow), AnsatzError);
}

TEST_CASE("capped cutoff exponent") {
  CHECK(capped_exponent(100.0, 2.0 / 3.0, 0.45) == doctest::Approx(2.0 / 3.0));
  CHECK(capped_exponent(10.0, 2.0 / 3.0, 0.45) == doctest::Approx(std::log10(4.5)));
  CHECK(std::pow(7.0, capped_exponent(7.0, 2.0 / 3.0, 0.45)) <= 0.45 * 7.0 + 1e-12);
  CHECK_THROWS_AS(capped_exponent(1.0, 0.5, 0.45), RegimeError);
}

TEST_CASE("recentering undoes a dilation to first order") {
  const Grid g = default_grid();
  auto A = build_ansatz(AnsatzSpec{});
  auto B = A;
  const double s0 = 1.002;
  for (auto& y : B.curve.y) y *= s0;
  for (auto& r : B.curve.r) r *= s0;
  const double t0 = A.time;
  const auto ra = recenter(A, g, 2.0 / 3.0);
  const auto rb = recenter(B, g, 2.0 / 3.0);
  CHECK(rb.sigma * s0 == doctest::Approx(ra.sigma).epsilon(2e-4));
  CHECK(A.time == doctest::Approx(t0 + 2 * std::log(ra.sigma)));
  CHECK(std::abs(ra.a0_target) < 1e-3);
}

TEST_CASE("tip comparison against an exact bowl cap") {
  Dimension n(2);
  const auto bowl = solve_bowl(n, 14.0, 5e-4);
  const double V = 2.0, R = 3.0;
  int k1 = 0, k2 = 0;
  const double e1 = tip_error(bowl_cap_state(bowl, V, R, 1000), bowl, 10.0, &k1);
  const double e2 = tip_error(bowl_cap_state(bowl, V, R, 2000), bowl, 10.0, &k2);
  CHECK(k2 > k1);
  CHECK(e1 < 1e-2);
  CHECK(e2 < e1 / 3);

  CHECK_THROWS_AS(tip_error(bowl_cap_state(bowl, V, R, 120), bowl, 10.0), ResolutionError);
  CHECK_THROWS_AS(tip_error(bowl_cap_state(bowl, V, R, 1000), bowl, 20.0), UsageError);
}

TEST_CASE("short ansatz run and region reports") {
  AnsatzSpec spec;
  RunOptions opt;
  opt.tau1 = -48.0;
  const auto run = run_ansatz(spec, opt);
  REQUIRE(run.records.size() == 9);
  CHECK(run.states.size() == run.records.size());
  CHECK(run.segments.size() == 8);
  CHECK(run.steps >= 200);
  for (std::size_t k = 1; k < run.records.size(); ++k) CHECK(run.records[k].tau > run.records[k - 1].tau);
  CHECK(run.records.back().tau == doctest::Approx(-48.0).epsilon(1e-3));
  CHECK(-4 * run.records.front().tau * run.records.front().alpha == doctest::Approx(1.0).epsilon(0.05));

  const auto P = verify_parabolic(run);
  CHECK(P.error.front() < 1e-3);
  CHECK(P.sup_error < 0.2);

  const auto I = verify_intermediate(run);
  CHECK(I.sup_error < 0.1);
  REQUIRE(!I.traces.empty());
  const auto& tr = I.traces.front();
  for (std::size_t j = 0; j < tr.tau.size(); ++j) {
    const double z = tr.z1 * std::sqrt(std::abs(tr.tau1 / tr.tau[j])) * std::exp(0.5 * (tr.tau[j] - tr.tau1));
    CHECK(tr.z[j] == doctest::Approx(z).epsilon(1e-9));
  }
  CHECK(tr.bookkeeping < 1e-8);
  CHECK(I.K1 > 0);

  const auto G = verify_global(run, -50, -48);
  CHECK(G.hmax_below_dbar);
  CHECK(G.dbar_growth_ok);
  CHECK(G.area_c <= G.area_C);

  CHECK_THROWS_AS(run_ansatz(spec, RunOptions{.tau1 = -60.0}), UsageError);
}

TEST_CASE("growth ratio") {
  RegionReport r;
  r.tau = {-50, -49, -48, -47};
  r.error = {0.0, 0.1, 0.15, 0.12};
  CHECK(growth_ratio(r, -49, -47) == doctest::Approx(1.5));
  CHECK(std::isinf(growth_ratio(r, -50, -47)));
  CHECK_THROWS_AS(growth_ratio(r, -40, -30), UsageError);
  CHECK(to_string(RegionKind::Intermediate) == "intermediate");
}
