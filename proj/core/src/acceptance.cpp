#include "ovals/acceptance.hpp"

#include <algorithm>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <limits>
#include <memory>
#include <optional>
#include <random>

#include "ovals/foliation.hpp"
#include "ovals/huisken.hpp"

namespace ovals {

namespace {

using nlohmann::json;

const Dimension n2(2);
constexpr double kInf = std::numeric_limits<double>::infinity();

std::string fmt(const char* f, ...) {
  char buf[512];
  va_list ap;
  va_start(ap, f);
  std::vsnprintf(buf, sizeof buf, f, ap);
  va_end(ap);
  return buf;
}

double window_sup(const RegionReport& r, double lo, double hi) {
  double s = 0.0;
  for (std::size_t i = 0; i < r.tau.size(); ++i)
    if (r.tau[i] >= lo - 1e-9 && r.tau[i] <= hi + 1e-9) s = std::max(s, r.error[i]);
  return s;
}

double radius_error(const ArcCurve& C, double R) {
  double e = 0;
  for (std::size_t i = 0; i < C.size(); ++i) e = std::max(e, std::abs(std::hypot(C.y[i], C.r[i]) - R));
  return e;
}

struct Context {
  const AcceptanceConfig& cfg;
  std::optional<AnsatzRun> run_, fine_;
  std::optional<Foliation> atlas_;

  const AnsatzRun& run() {
    if (!run_) run_ = run_ansatz(cfg.spec, cfg.run);
    return *run_;
  }
  const AnsatzRun& fine() {
    if (!fine_) {
      AnsatzSpec s = cfg.spec;
      s.nodes *= 2;
      RunOptions o = cfg.run;
      o.keep_states = false;
      fine_ = run_ansatz(s, o);
    }
    return *fine_;
  }
  const Foliation& atlas() {
    if (!atlas_) {
      AtlasSpec s;
      atlas_ = build_foliation(n2, default_a_grid(s), default_b_grid(s), s.y0);
    }
    return *atlas_;
  }
};

void bowl_expansion(Context&, CriterionResult& r) {
  const auto B = solve_bowl(n2, 40.0);
  std::vector<double> x, f;
  for (double rho = 15; rho <= 40 + 1e-9; rho += 0.5) {
    x.push_back(rho);
    f.push_back(B.slope(rho) - (rho / 2 - 2 / rho));
  }
  const double slope = loglog_slope(x, f);
  // Richardson on 2 psi / rho^2 = psi''(0) + O(rho^2)
  auto q = [&](double rho) { return 2 * B.value(rho) / (rho * rho); };
  const double pp0 = (4 * q(0.05) - q(0.1)) / 3;
  r.pass = std::abs(slope + 3) <= 0.4 && std::abs(pp0 - 0.25) <= 1e-6;
  r.summary = fmt("residual slope %.3f (-3 +- 0.4), psi''(0) %.8f (0.25 +- 1e-6)", slope, pp0);
  r.values = {{"slope", slope}, {"psi_pp0", pp0}, {"C0", B.C0}};
}

void shrinker_inner(Context&, CriterionResult& r) {
  std::vector<double> s;
  for (double a : {20.0, 40.0, 80.0}) {
    const auto L = shoot_leaf(a, n2, 0.0);
    double e = 0;
    for (std::size_t i = 0; i < L.y.size(); ++i)
      if (L.y[i] >= 0 && L.y[i] <= 5) e = std::max(e, std::abs(L.u[i] - std::sqrt(2.0) * (1 - (L.y[i] * L.y[i] - 2) / (2 * a * a))));
    s.push_back(e * a * a);
  }
  r.pass = s[1] <= 0.5 * s[0] && s[2] <= 0.5 * s[1];
  r.summary = fmt("sup|u - expansion| a^2 = %.4g, %.4g, %.4g (factors %.2f, %.2f; need >= 2)", s[0], s[1], s[2],
                  s[0] / s[1], s[1] / s[2]);
  r.values = {{"scaled_sup", s}};
}

void shrinker_bounds(Context&, CriterionResult& r) {
  int violations = 0;
  double min_w = kInf, tip_dev = 0, worst_upper = -kInf;
  for (double a : {20.0, 40.0, 80.0}) {
    const auto L = shoot_leaf(a, n2, 0.0);
    for (std::size_t i = 0; i < L.y.size(); ++i)
      if (L.u[i] * L.u[i] < 2 * (1 - L.y[i] * L.y[i] / (a * a))) ++violations;
    const auto W = w_diagnostic(L);
    for (std::size_t i = 0; i < W.y.size(); ++i) {
      min_w = std::min(min_w, W.w[i]);
      const double y = W.y[i];
      if (y >= 5 && y <= L.y_Ma) worst_upper = std::max(worst_upper, W.w[i] - (2 + 20 / (a * a - y * y) + 20 / (y * y)));
    }
    tip_dev = std::max(tip_dev, std::abs(W.tip_limit - 4));
  }
  r.pass = violations == 0 && min_w > 2 && tip_dev <= 1e-3 && worst_upper <= 0;
  r.summary = fmt("lower-bound violations %d, min w %.5f, |w_tip - 4| %.2e, max(w - upper) %.3g", violations, min_w,
                  tip_dev, worst_upper);
  r.values = {{"violations", violations}, {"min_w", min_w}, {"tip_deviation", tip_dev}, {"upper_margin", worst_upper}};
}

void trumpets(Context&, CriterionResult& r) {
  bool convex = true, decays = true;
  double worst = -kInf;
  json per;
  for (double b : {0.1, 0.5, 1.0}) {
    const double Y = trumpet_seed_height(b, n2);
    const auto T = solve_trumpet(b, n2, 0.0, Y);
    for (std::size_t i = 1; i < T.y.size(); ++i) convex = convex && T.uy[i] >= T.uy[i - 1] - 1e-9;
    const double g1 = T.u_at(Y / 4) - b * Y / 4, g2 = T.u_at(Y / 2) - b * Y / 2;
    const double law = g2 * b * Y / 2;  // u - b y ~ 1/(b y)
    decays = decays && g2 < g1 && std::abs(law - 1) < 0.1;
    const auto W = w_diagnostic(T);
    double m = -kInf;
    for (std::size_t i = 0; i < W.y.size(); ++i)
      if (W.y[i] >= 2 * std::sqrt(2.0)) m = std::max(m, (W.w[i] - 2) * W.y[i] * W.y[i]);
    worst = std::max(worst, m);
    per.push_back({{"b", b}, {"gap_quarter", g1}, {"gap_half", g2}, {"max_w_excess_y2", m}});
  }
  r.pass = convex && decays && worst <= 16 + 1e-6;
  r.summary = fmt("convex %s, u - by -> 0 %s, max (w-2) y^2 on y >= 2 sqrt2: %.4f (<= 16)", convex ? "yes" : "no",
                  decays ? "yes" : "no", worst);
  r.values = {{"trumpets", per}, {"max_w_excess_y2", worst}};
}

Foliation caps_only(double ratio) {
  AtlasSpec s;
  s.ratio = ratio;
  s.a_max = 120;
  return build_foliation(n2, default_a_grid(s), {}, s.y0);
}

void foliation(Context& ctx, CriterionResult& r) {
  bool built = true;
  std::string why;
  try {
    ctx.atlas();
  } catch (const FoliationViolation& e) {
    built = false;
    why = e.what();
  }
  Region R1, R2;
  R2.h = R1.h / 2;
  const auto D1 = calibration_divergence(caps_only(1.05), R1);
  const auto D2 = calibration_divergence(caps_only(std::sqrt(1.05)), R2);
  const double factor = D1.max_div / D2.max_div;
  double vmin = kInf, tip_dev = 0;
  if (built)
    for (double a : {10.0, 20.0, 40.0}) {
      const auto V = normal_variation(ctx.atlas(), a, 1e-3 * a);
      vmin = std::min(vmin, V.v_min);
      tip_dev = std::max(tip_dev, std::abs(V.v_tip - 1));
    }
  r.pass = built && factor >= 3 && vmin > 0 && tip_dev <= 0.02;
  r.summary = built ? fmt("atlas %zu caps + %zu trumpets, no crossings; max|div| %.3g -> %.3g (x%.2f, need >= 3); "
                          "min V %.4f, |V(tip) - 1| %.2e",
                          ctx.atlas().caps.size(), ctx.atlas().trumpets.size(), D1.max_div, D2.max_div, factor, vmin,
                          tip_dev)
                    : "leaves cross: " + why;
  r.values = {{"crossings", built ? 0 : 1}, {"div_coarse", D1.max_div}, {"div_fine", D2.max_div},
              {"div_factor", factor}, {"v_min", vmin}, {"v_tip_deviation", tip_dev}};
}

void tan_phi(Context& ctx, CriterionResult& r) {
  int used = 0, bad = 0;
  double lo = kInf, margin = -kInf;
  for (double y = 10; y <= 50 + 1e-9; y += 2.5)
    for (double x = 1.36; x <= 1.46 + 1e-9; x += 0.001) {
      const double d = std::abs(x * x - 2);
      if (d > 0.1 || d < 0.01) continue;
      double w;
      try {
        w = tan_phi_w(ctx.atlas(), y, x);
      } catch (const DomainError&) {
        continue;
      }
      ++used;
      lo = std::min(lo, w - 2);
      margin = std::max(margin, w - 2 - 40 / (y * y));
      if (w < 2 - 1e-2 || w > 2 + 40 / (y * y)) ++bad;
    }
  r.pass = used >= 30 && bad == 0;
  r.summary = fmt("%d points (0.01 <= |r^2-2| <= 0.1, y in [10, 50]), outside [2-1e-2, 2+40/y^2]: %d; min w-2 %.3g, "
                  "max w-2-40/y^2 %.3g",
                  used, bad, lo, margin);
  r.values = {{"points", used}, {"outside", bad}, {"min_w_minus_2", lo}, {"upper_margin", margin}};
}

void spectral_identities(Context&, CriterionResult& r) {
  const Grid g = default_grid();
  const auto B = make_basis(7);
  std::vector<Samples> s;
  for (const auto& p : B.psi) s.push_back(sample(g, [&](double y) { return p(y); }));
  double orth = 0;
  for (int i = 0; i < 7; ++i)
    for (int j = 0; j < i; ++j)
      orth = std::max(orth, std::abs(weighted_inner(s[i], s[j], g)) / std::sqrt(B.norms2[i] * B.norms2[j]));
  const double n2sq = weighted_inner(s[1], s[1], g);
  const auto sq = sample(g, [&](double y) { return B.psi[1](y) * B.psi[1](y); });
  const double ratio = weighted_inner(s[1], sq, g) / n2sq;
  const double target = 16 * std::sqrt(kPi);
  r.pass = orth <= 1e-8 && std::abs(n2sq - target) <= 1e-6 && std::abs(ratio - 8) <= 1e-6;
  r.summary = fmt("max relative <psi_i, psi_j> %.2e, ||psi_2||^2 - 16 sqrt(pi) %.2e, <psi_2, psi_2^2>/||psi_2||^2 - 8 %.2e",
                  orth, n2sq - target, ratio - 8);
  r.values = {{"orthogonality", orth}, {"norm2", n2sq}, {"ratio", ratio}};
}

void flow_exactness(Context&, CriterionResult& r) {
  const double R = n2.sphere_radius(), c = n2.cylinder_radius();
  FlowState S{0.0, sphere_curve(n2, R, 4000), true};
  S = evolve(S, FlowKind::Rescaled, 1.0, 1e-2);
  const double sphere = radius_error(S.curve, R);
  FlowState Z{0.0, cylinder_segment(n2, c, 8, 4000), false};
  Z = evolve(Z, FlowKind::Rescaled, 1.0, 1e-2);
  double cyl = 0;
  for (double x : Z.curve.r) cyl = std::max(cyl, std::abs(x - c));
  const double R0 = 2.0, T = 0.5;
  FlowState U{0.0, sphere_curve(n2, R0, 1000), true};
  U = evolve(U, FlowKind::Unrescaled, T, 5e-4);
  const double Rt = std::sqrt(R0 * R0 - 2 * n2.n * T), rel = radius_error(U.curve, Rt) / Rt;
  r.pass = sphere <= 1e-4 && cyl <= 1e-4 && rel <= 1e-4;
  r.summary = fmt("sphere drift %.2e, cylinder drift %.2e over dtau = 1 (4000 nodes); unrescaled sphere rel. error %.2e",
                  sphere, cyl, rel);
  r.values = {{"sphere_drift", sphere}, {"cylinder_drift", cyl}, {"unrescaled_rel", rel}};
}

void monotonicity(Context& ctx, CriterionResult& r) {
  const auto& run = ctx.run();
  double dH = -kInf, Rmax = 0, Py = kInf, Qy = kInf;
  std::size_t off = 0, steps = 0;
  for (const auto& seg : run.segments) {
    for (const auto& m : monotonicity_series(seg)) dH = std::max(dH, m.dHdtau);
    for (const auto& d : seg) {
      ++steps;
      Rmax = std::max(Rmax, d.Rmax);
      Py = std::min(Py, d.min_Py);
      Qy = std::min(Qy, d.min_Qy);
      if (!d.argmax_at_tip) ++off;
    }
  }
  r.pass = dH <= 1e-6 && Rmax <= 1 + 1e-2 && Py >= -1e-2 && Qy >= -1e-2 && off == 0;
  r.summary = fmt("%zu steps: max dH/dtau %.2e, R_max %.4f, min P_y %.3g, min Q_y %.3g, argmax off the tip %zu", steps,
                  dH, Rmax, Py, Qy, off);
  r.values = {{"steps", steps}, {"max_dHdtau", dH}, {"R_max", Rmax}, {"min_Py", Py}, {"min_Qy", Qy}, {"off_tip", off}};
}

void alpha_law_check(Context& ctx, CriterionResult& r) {
  const auto& run = ctx.run();
  const double lo = run.records.front().tau, hi = run.records.back().tau;
  const auto C = classify_modes(mode_series(run, lo, hi));
  const auto A = alpha_law(run, lo, hi);
  std::vector<double> t, a3;
  for (const auto& R : run.records) {
    t.push_back(R.tau);
    a3.push_back(R.alpha_third);
  }
  double third = std::numeric_limits<double>::quiet_NaN();
  try {
    third = track_alpha(t, a3).alpha_fit;
  } catch (const std::exception&) {
  }
  const bool zero = C.dominant == Dominant::Zero;
  r.pass = zero && A.slope_check >= 3.5 && A.slope_check <= 4.5 && A.alpha_fit >= 0.85 && A.alpha_fit <= 1.15;
  r.summary = fmt("dominant %s, median alpha'/alpha^2 %.3f ([3.5, 4.5]), median -4 tau alpha %.3f ([0.85, 1.15]); "
                  "cutoff dbar^(1/3) gives %.3f",
                  zero ? "zero" : (C.dominant == Dominant::Plus ? "plus" : "undetermined"), A.slope_check, A.alpha_fit,
                  third);
  r.values = {{"dominant_zero", zero}, {"slope_check", A.slope_check}, {"alpha_fit", A.alpha_fit},
              {"alpha_fit_third", third}, {"ratio_zero", C.ratio_zero}};
}

void global_laws(Context& ctx, CriterionResult& r) {
  const auto& run = ctx.run();
  const double t0 = run.records.front().tau, t1 = run.records.back().tau;
  const auto W = verify_global(run, t0, ctx.cfg.ratio_hi);
  const auto G = verify_global(run, t0, t1);
  auto range = [](const std::vector<double>& v) {
    return std::make_pair(*std::min_element(v.begin(), v.end()), *std::max_element(v.begin(), v.end()));
  };
  const auto [dlo, dhi] = range(W.dbar_ratio);
  const auto [hlo, hhi] = range(W.hmax_ratio);
  // same ratio once the glued tip has relaxed
  std::vector<double> settled;
  for (std::size_t i = 0; i < W.tau.size(); ++i)
    if (W.tau[i] >= t0 + 1 - 1e-9) settled.push_back(W.hmax_ratio[i]);
  const auto [slo, shi] = range(settled);
  bool below = true;
  for (const auto& seg : run.segments)
    for (const auto& d : seg) below = below && d.Hmax <= d.dbar;
  double c2 = G.area_c, C2 = G.area_C;
  if (ctx.cfg.node_doubling) {
    const auto F = verify_global(ctx.fine(), t0, t1);
    c2 = F.area_c;
    C2 = F.area_C;
  }
  const bool stable = std::abs(c2 / G.area_c - 1) <= 0.1 && std::abs(C2 / G.area_C - 1) <= 0.1;
  const bool dbar_ok = dlo >= 0.9 && dhi <= 1.1, h_ok = hlo >= 0.6 && hhi <= 0.8;
  r.pass = dbar_ok && h_ok && below && G.dbar_growth_ok && stable;
  r.summary = fmt("on [%.0f, %.0f]: dbar/sqrt(2|tau|) in [%.3f, %.3f] %s, H_max/sqrt|tau| in [%.3f, %.3f] %s ([%.3f, %.3f] from tau0 + 1); "
                  "H_max <= dbar %s, |dbar'| <= dbar/2 + 1e-3 %s; area/dbar in [%.3f, %.3f] vs [%.3f, %.3f] at 2x nodes",
                  t0, ctx.cfg.ratio_hi, dlo, dhi, dbar_ok ? "ok" : "FAIL", hlo, hhi, h_ok ? "ok" : "FAIL", slo, shi,
                  below ? "ok" : "FAIL", G.dbar_growth_ok ? "ok" : "FAIL", G.area_c, G.area_C, c2, C2);
  r.values = {{"dbar_ratio", {dlo, dhi}}, {"hmax_ratio", {hlo, hhi}}, {"hmax_ratio_settled", {slo, shi}}, {"hmax_below_dbar", below},
              {"dbar_growth_ok", G.dbar_growth_ok}, {"area_c", G.area_c}, {"area_C", G.area_C},
              {"area_c_fine", c2}, {"area_C_fine", C2}, {"dbar_ratio_end", G.dbar_ratio.back()}};
}

void inner_outer(Context& ctx, CriterionResult& r) {
  const Grid g = ctx.cfg.run.grid;
  double glo = kInf, ghi = 0, clo = kInf, chi = 0;
  int profiles = 0;
  json rows;
  for (double tau : {-50.0, -40.0, -30.0}) {
    AnsatzSpec s = ctx.cfg.spec;
    s.tau0 = tau;
    const auto S = build_ansatz(s);
    double Ct = 0;
    try {
      for (double L : {4.0, 6.0, 8.0}) {
        const auto io = inner_outer_check(S, g, L);
        glo = std::min(glo, io.ratio_grad);
        ghi = std::max(ghi, io.ratio_grad);
        Ct = std::max(Ct, io.ratio_mass * L * L);
        rows.push_back({{"tau", tau}, {"L", L}, {"ratio_grad", io.ratio_grad}, {"ratio_mass", io.ratio_mass}});
      }
    } catch (const HypothesisError&) {
      continue;
    }
    ++profiles;
    clo = std::min(clo, Ct);
    chi = std::max(chi, Ct);
  }
  r.pass = profiles > 0 && ghi <= 2 * glo && chi <= 2 * clo;
  r.summary = fmt("%d profiles with H <= H(cylinder); ratio_grad in [%.3f, %.3f] (spread %.2f), "
                  "max_L ratio_mass L^2 per tau in [%.3f, %.3f] (spread %.2f)",
                  profiles, glo, ghi, ghi / glo, clo, chi, chi / clo);
  r.values = {{"profiles", profiles}, {"grad_constant", ghi}, {"mass_constant", chi}, {"samples", rows}};
}

void poincare(Context& ctx, CriterionResult& r) {
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> U(-1, 1), Ell(0.1, 8.0);
  double poly = kInf;
  for (int k = 0; k < 1000; ++k) {
    double c[6];
    for (double& v : c) v = U(rng);
    auto f = [&](double y) { return ((((c[5] * y + c[4]) * y + c[3]) * y + c[2]) * y + c[1]) * y + c[0]; };
    auto fy = [&](double y) { return (((5 * c[5] * y + 4 * c[4]) * y + 3 * c[3]) * y + 2 * c[2]) * y + c[1]; };
    poly = std::min(poly, weighted_poincare_check(f, fy, Ell(rng)).slack);
  }
  const auto& run = ctx.run();
  const Grid& g = ctx.cfg.run.grid;
  const double c = run.spec.n.cylinder_radius();
  double prof = kInf;
  for (const auto& S : run.states) {
    const auto P = graph_profile(S, g);
    int m = static_cast<int>(0.9 * S.curve.y.front() / g.h);
    if (m % 2) --m;
    Samples f(std::size_t(m) + 1);
    for (int i = 0; i <= m; ++i) f[i] = P.u[std::size_t(g.center() + i)] - c;
    prof = std::min(prof, weighted_poincare_check(f, m * g.h).slack);
  }
  r.pass = poly >= -1e-8 && prof >= -1e-8;
  r.summary = fmt("min slack %.3g over 1000 random quintics, %.3g over %zu run profiles (v = u - c on [0, 0.9 dbar])",
                  poly, prof, run.states.size());
  r.values = {{"min_slack_polynomials", poly}, {"min_slack_profiles", prof}};
}

void regions(Context& ctx, CriterionResult& r) {
  const auto& run = ctx.run();
  const double t0 = run.records.front().tau, t1 = t0 + ctx.cfg.region_span, ref = t0 + 1;
  const double rn = std::sqrt(run.spec.n.n - 1.0);
  const auto P = verify_parabolic(run);
  const auto I = verify_intermediate(run);
  const double ps = window_sup(P, t0, t1), is = window_sup(I, t0, t1);
  const double pg = growth_ratio(P, ref, t1), ig = growth_ratio(I, ref, t1);
  double ts = kInf, tg = kInf;
  std::string tip_note;
  try {
    const auto B = solve_bowl(run.spec.n, 12.0);
    const auto T = verify_tip(run, B);
    ts = window_sup(T, t0, t1);
    tg = growth_ratio(T, ref, t1);
  } catch (const ResolutionError& e) {
    tip_note = e.what();
  }
  double viol = 0, book = 0;
  for (const auto& tr : I.traces) {
    viol = std::max(viol, tr.max_violation);
    book = std::max(book, tr.bookkeeping);
  }
  const bool p_ok = ps <= 0.2 && pg <= 2, i_ok = is <= 0.1 * rn && ig <= 2, t_ok = ts <= 0.05 && tg <= 2;
  r.pass = p_ok && i_ok && t_ok;
  r.summary = fmt("over [%.0f, %.0f]: parabolic %.4f (<= 0.2, growth %.2f) %s; intermediate %.4f (<= %.3f, growth %.2f) "
                  "%s; tip %.4g (<= 0.05, growth %.2f) %s",
                  t0, t1, ps, pg, p_ok ? "ok" : "FAIL", is, 0.1 * rn, ig, i_ok ? "ok" : "FAIL", ts, tg,
                  t_ok ? "ok" : "FAIL");
  if (!tip_note.empty()) r.summary += " (" + tip_note + ")";
  std::size_t nv = 0;
  for (std::size_t k = 0; k < I.barrier_margin.size(); ++k)
    if (I.barrier_margin[k] < -1e-6 && I.tau[k] <= t1 + 1e-9) ++nv;
  r.values = {{"parabolic_sup", ps},         {"parabolic_growth", pg},   {"intermediate_sup", is},
              {"intermediate_growth", ig},   {"tip_sup", ts},            {"tip_growth", tg},
              {"characteristic_violation", viol}, {"characteristic_bookkeeping", book},
              {"K", I.K},                    {"K1", I.K1},               {"barrier_violations_in_window", nv},
              {"barrier_violations", I.barrier_violations}};
}

struct Entry {
  const char* title;
  void (*fn)(Context&, CriterionResult&);
};

const Entry kTable[kCriteria] = {
    {"bowl expansion", bowl_expansion},
    {"shrinker inner expansion", shrinker_inner},
    {"shrinker bounds", shrinker_bounds},
    {"trumpets", trumpets},
    {"foliation", foliation},
    {"tan phi law", tan_phi},
    {"spectral identities", spectral_identities},
    {"flow exactness", flow_exactness},
    {"monotonicity suite", monotonicity},
    {"alpha law", alpha_law_check},
    {"global laws", global_laws},
    {"inner-outer", inner_outer},
    {"weighted Poincare", poincare},
    {"regions", regions},
};

}  // namespace

std::vector<CriterionResult> run_acceptance(const AcceptanceConfig& cfg, const std::vector<int>& ids,
                                            const std::function<void(const CriterionResult&)>& report) {
  std::vector<int> which = ids;
  if (which.empty())
    for (int i = 1; i <= kCriteria; ++i) which.push_back(i);
  Context ctx{cfg, {}, {}, {}};
  std::vector<CriterionResult> out;
  for (int id : which) {
    if (id < 1 || id > kCriteria) throw UsageError("unknown criterion " + std::to_string(id));
    CriterionResult r;
    r.id = id;
    r.title = kTable[id - 1].title;
    try {
      kTable[id - 1].fn(ctx, r);
    } catch (const std::exception& e) {
      r.pass = false;
      r.summary = std::string("error: ") + e.what();
    }
    if (report) report(r);
    out.push_back(std::move(r));
  }
  return out;
}

std::string format_line(const CriterionResult& r) {
  return fmt("%s [%2d] %s: ", r.pass ? "PASS" : "FAIL", r.id, r.title.c_str()) + r.summary;
}

}  // namespace ovals
