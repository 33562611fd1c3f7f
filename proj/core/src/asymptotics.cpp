#include "ovals/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>

namespace ovals {

namespace {

// 1 for x <= 0, 0 for x >= 1
double step_down(double x) { return cutoff_bump(1.0 + x); }

// Upper half of a symmetric curve as y ascending samples, tips included.
struct UpperGraph {
  std::vector<double> y, r;
  double tip = 0.0;

  explicit UpperGraph(const ArcCurve& C) {
    const std::size_t m = C.size();
    for (std::size_t i = 0; i < m; ++i) {
      y.push_back(C.y[m - 1 - i]);
      r.push_back(C.r[m - 1 - i]);
    }
    tip = y.back();
  }
  double operator()(double yq) const {
    if (yq <= y.front() || yq >= y.back()) return 0.0;
    return lagrange4(y, r, yq);
  }
};

double bisect(const std::function<double(double)>& f, double lo, double hi, int iters = 80) {
  double flo = f(lo);
  for (int k = 0; k < iters; ++k) {
    const double mid = 0.5 * (lo + hi), fm = f(mid);
    if ((fm > 0) == (flo > 0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace

void validate(const AnsatzSpec& s) {
  if (s.n.n < 2) throw UsageError("ansatz: n must be >= 2");
  if (!(s.tau0 <= -25.0)) throw UsageError("ansatz: tau0 must be <= -25");
  if (s.nodes < 200) throw UsageError("ansatz: need at least 200 nodes");
  if (!(s.parabolic_blend_lo > 0 && s.parabolic_blend_hi > s.parabolic_blend_lo))
    throw UsageError("ansatz: parabolic blend zone must satisfy 0 < lo < hi");
  if (!(s.tip_core > 0)) throw UsageError("ansatz: tip_core must be positive");
  if (!(s.tip_drop >= 0 && s.tip_drop < 0.5)) throw UsageError("ansatz: tip_drop must lie in [0, 0.5)");
  if (!(s.intermediate_gap_exponent > 0)) throw UsageError("ansatz: gap exponent must be positive");
}

double parabolic_profile(Dimension n, double y, double tau) {
  return n.cylinder_radius() * (1.0 - (y * y - 2.0) / (4.0 * std::abs(tau)));
}

double intermediate_profile(Dimension n, double z) {
  return std::sqrt(n.n - 1.0) * std::sqrt(std::max(0.0, 2.0 - z * z));
}

AnsatzGeometry ansatz_geometry(const AnsatzSpec& s) {
  validate(s);
  const double T = std::abs(s.tau0), c = s.n.cylinder_radius();
  AnsatzGeometry g;
  g.lambda = std::sqrt(0.5 * T);
  g.dbar = 2 * g.lambda * (1 - s.tip_drop);
  const double Yp = std::pow(T, s.parabolic_exponent);
  g.parabolic_lo = s.parabolic_blend_lo * Yp;
  g.parabolic_hi = s.parabolic_blend_hi * Yp;
  const double zm = std::sqrt(2.0) - std::pow(T, -s.intermediate_gap_exponent);
  g.tip_lo = s.tip_core / (2 * g.lambda);
  g.tip_hi = c * std::sqrt(std::max(0.0, 1 - 0.5 * zm * zm));
  if (g.parabolic_hi >= 0.95 * 2 * g.lambda) throw AnsatzError("ansatz: parabolic blend reaches the tip");
  if (!(g.tip_hi > 1.5 * g.tip_lo)) throw AnsatzError("ansatz: tip blend zone is empty, lower tip_core");
  return g;
}

namespace {

FlowState glue(const AnsatzSpec& spec) {
  const auto g = ansatz_geometry(spec);
  const Dimension n = spec.n;
  const double c = n.cylinder_radius(), D = 2 * g.lambda, lam = g.lambda;

  auto body = [&](double y) {
    const double ui = c * std::sqrt(std::max(0.0, 1 - y * y / (D * D)));
    const double chi = step_down((y - g.parabolic_lo) / (g.parabolic_hi - g.parabolic_lo));
    return chi * parabolic_profile(n, y, spec.tau0) + (1 - chi) * ui;
  };
  const double u0 = body(0.0);
  auto body_y = [&](double r) { return bisect([&](double y) { return body(y) - r; }, 0.0, D); };

  const BowlProfile bowl = solve_bowl(n, std::max(10.0, 2 * lam * g.tip_hi + 2.0));
  const double lr = std::log(g.tip_hi / g.tip_lo);
  auto cap_y = [&](double r) {
    const double yt = g.dbar - bowl.value(2 * lam * r) / (2 * lam);
    if (r <= g.tip_lo) return yt;
    const double chi = step_down(std::log(r / g.tip_lo) / lr);
    return chi * yt + (1 - chi) * body_y(r);
  };

  // quarter curve from the tip to the equator, dense
  const int K = 20000;
  std::vector<double> qy, qr;
  for (int k = 0; k <= K; ++k) {
    const double r = g.tip_hi * std::pow(double(k) / K, 1.5);
    qy.push_back(cap_y(r));
    qr.push_back(r);
  }
  const double y_sw = qy.back();
  for (int j = 1; j <= K; ++j) {
    const double y = y_sw * (1.0 - double(j) / K);
    qy.push_back(y);
    qr.push_back(body(y));
  }
  qr.back() = u0;
  qy.back() = 0.0;

  for (std::size_t k = 1; k + 1 < qy.size(); ++k) {
    const double ay = qy[k] - qy[k - 1], ar = qr[k] - qr[k - 1];
    const double by = qy[k + 1] - qy[k], br = qr[k + 1] - qr[k];
    const double cross = ay * br - ar * by;
    if (cross < -1e-9 * std::hypot(ay, ar) * std::hypot(by, br))
      throw AnsatzError("ansatz: glued profile is not concave near y = " + std::to_string(qy[k]) +
                        ", widen the blending zones");
  }

  std::vector<double> fy, fr;
  for (std::size_t k = 0; k < qy.size(); ++k) {
    fy.push_back(qy[k]);
    fr.push_back(qr[k]);
  }
  for (std::size_t k = qy.size() - 1; k-- > 0;) {
    fy.push_back(-qy[k]);
    fr.push_back(qr[k]);
  }
  std::vector<double> s(fy.size(), 0.0);
  for (std::size_t k = 1; k < s.size(); ++k) s[k] = s[k - 1] + std::hypot(fy[k] - fy[k - 1], fr[k] - fr[k - 1]);

  ArcCurve C;
  C.n = n;
  const int m = spec.nodes;
  for (int i = 0; i < m; ++i) {
    const double sq = s.back() * i / (m - 1);
    C.y.push_back(lagrange4(s, fy, sq));
    C.r.push_back(i == 0 || i == m - 1 ? 0.0 : lagrange4(s, fr, sq));
  }
  C.y.front() = g.dbar;
  C.y.back() = -g.dbar;
  C.fill_theta();
  FlowState S{spec.tau0, std::move(C), true};
  symmetrize(S.curve);
  S.curve.fill_theta();
  S.curve.validate();
  return S;
}

}  // namespace

AnsatzSpec resolve_tip(const AnsatzSpec& spec) {
  validate(spec);
  AnsatzSpec s = spec;
  s.auto_tip = false;
  if (!spec.auto_tip) return s;
  std::optional<AnsatzSpec> fallback;
  for (int k = 0; k <= 12; ++k)
    for (double core : {3.0, 4.0, 2.0}) {
      s.tip_drop = 0.0025 * k;
      s.tip_core = core;
      try {
        const auto S = glue(s);
        if (diagnostics(S).argmax_at_tip) return s;
        if (!fallback) fallback = s;
      } catch (const AnsatzError&) {
      }
    }
  if (fallback) return *fallback;
  throw AnsatzError("ansatz: no concave glue for tip_drop <= 0.03, widen the blending zones");
}

FlowState build_ansatz(const AnsatzSpec& spec) { return glue(resolve_tip(spec)); }

double capped_exponent(double dbar, double exponent, double reach) {
  if (!(dbar > 1)) throw RegimeError("cutoff: dbar <= 1");
  return std::min(exponent, std::log(reach * dbar) / std::log(dbar));
}

Recentering recenter(FlowState& state, const Grid& grid, double exponent, double reach) {
  const auto P = graph_profile(state, grid);
  const double d = state.curve.y.front();
  const auto t = truncate(deviation(P), grid, d, capped_exponent(d, exponent, reach));
  const Samples one(t.vbar.size(), 1.0);
  Samples q(t.vbar.size());
  for (std::size_t i = 0; i < q.size(); ++i) q[i] = t.vbar[i] * t.vbar[i] / (2 * (1 + t.vbar[i]));
  const double n1 = weighted_inner(one, one, grid);
  Recentering r;
  r.a0 = weighted_inner(t.vbar, one, grid) / n1;
  r.a0_target = weighted_inner(q, one, grid) / n1;
  r.sigma = 1.0 + (r.a0_target - r.a0);
  if (!(r.sigma > 0.5 && r.sigma < 2.0)) throw RegimeError("recenter: correction out of range");
  for (auto& y : state.curve.y) y *= r.sigma;
  for (auto& x : state.curve.r) x *= r.sigma;
  state.time += 2 * std::log(r.sigma);
  return r;
}

AnsatzRun run_ansatz(const AnsatzSpec& spec, const RunOptions& opt) {
  if (!(opt.tau1 > spec.tau0)) throw UsageError("run_ansatz: tau1 must exceed tau0");
  if (!(opt.dt > 0 && opt.record_every > 0)) throw UsageError("run_ansatz: dt and record_every must be positive");
  AnsatzRun run;
  run.spec = resolve_tip(spec);
  run.options = opt;
  const auto basis = make_basis(opt.modes);

  FlowState S = build_ansatz(run.spec);
  double log_sigma = 0.0;
  auto record = [&](const FlowState& s) {
    RunRecord R;
    R.tau = s.time;
    R.diag = diagnostics(s);
    const auto v = deviation(graph_profile(s, opt.grid));
    const double p = capped_exponent(R.diag.dbar, opt.cutoff_exponent, opt.cutoff_reach);
    R.split = project(truncate(v, opt.grid, R.diag.dbar, p).vbar, opt.grid, basis);
    R.alpha = -R.split.alpha;
    R.alpha_third = -project(truncate(v, opt.grid, R.diag.dbar, 1.0 / 3.0).vbar, opt.grid, basis).alpha;
    R.log_sigma = log_sigma;
    run.records.push_back(R);
    if (opt.keep_states) run.states.push_back(s);
  };

  run.segments.emplace_back();
  run.segments.back().push_back(diagnostics(S));
  record(S);
  double next = spec.tau0 + opt.record_every, last_recenter = spec.tau0;
  while (S.time < opt.tau1 - 1e-9) {
    const double target = std::min(next, opt.tau1);
    S = evolve(S, FlowKind::Rescaled, target, opt.dt, {}, [&](const FlowState& s) {
      run.segments.back().push_back(diagnostics(s));
      ++run.steps;
    });
    next += opt.record_every;
    if (opt.recenter_every > 0 && S.time - last_recenter >= opt.recenter_every - 0.5 * opt.record_every && S.time < opt.tau1 - 1e-9) {
      const auto r = recenter(S, opt.grid, opt.cutoff_exponent, opt.cutoff_reach);
      log_sigma += std::log(r.sigma);
      last_recenter = S.time;
      run.segments.emplace_back();
      run.segments.back().push_back(diagnostics(S));
    }
    record(S);
  }
  return run;
}

std::vector<ModeSample> mode_series(const AnsatzRun& run, double lo, double hi) {
  std::vector<ModeSample> out;
  for (const auto& R : run.records)
    if (R.tau >= lo - 1e-9 && R.tau <= hi + 1e-9) out.push_back({R.tau, R.split});
  return out;
}

AlphaTrack alpha_law(const AnsatzRun& run, double lo, double hi) {
  std::vector<double> t, a;
  for (const auto& R : run.records)
    if (R.tau >= lo - 1e-9 && R.tau <= hi + 1e-9) {
      t.push_back(R.tau);
      a.push_back(R.alpha);
    }
  return track_alpha(t, a);
}

std::string to_string(RegionKind k) {
  switch (k) {
    case RegionKind::Parabolic: return "parabolic";
    case RegionKind::Intermediate: return "intermediate";
    case RegionKind::Tip: return "tip";
    case RegionKind::Global: return "global";
  }
  return "?";
}

double growth_ratio(const RegionReport& rep, double tau_ref, double tau_end) {
  double ref = std::numeric_limits<double>::quiet_NaN(), worst = 0.0;
  for (std::size_t i = 0; i < rep.tau.size(); ++i) {
    if (rep.tau[i] < tau_ref - 1e-9 || rep.tau[i] > tau_end + 1e-9) continue;
    if (std::isnan(ref)) ref = rep.error[i];
    worst = std::max(worst, rep.error[i]);
  }
  if (std::isnan(ref)) throw UsageError("growth_ratio: no samples in the window");
  return ref > 0 ? worst / ref : (worst > 0 ? std::numeric_limits<double>::infinity() : 1.0);
}

ParabolicReport verify_parabolic(const AnsatzRun& run, double M) {
  ParabolicReport rep;
  rep.region = RegionKind::Parabolic;
  rep.M = M;
  const Dimension n = run.spec.n;
  for (std::size_t k = 0; k < run.states.size(); ++k) {
    const auto& S = run.states[k];
    const UpperGraph G(S.curve);
    double e = 0.0;
    for (double y = -M; y <= M + 1e-12; y += 0.01) e = std::max(e, std::abs(G(y) - parabolic_profile(n, y, S.time)));
    e *= std::abs(S.time);
    rep.tau.push_back(S.time);
    rep.error.push_back(e);
    rep.alpha_ratio.push_back(4 * std::abs(S.time) * run.records[k].alpha);
    rep.sup_error = std::max(rep.sup_error, e);
  }
  return rep;
}

IntermediateReport verify_intermediate(const AnsatzRun& run, double L, double M) {
  IntermediateReport rep;
  rep.region = RegionKind::Intermediate;
  rep.L = L;
  rep.M = M;
  const Dimension n = run.spec.n;
  const double c2 = 2.0 * (n.n - 1);
  std::vector<UpperGraph> graphs;
  for (const auto& S : run.states) graphs.emplace_back(S.curve);

  for (std::size_t k = 0; k < run.states.size(); ++k) {
    const double T = std::abs(run.states[k].time), sT = std::sqrt(T);
    double e = 0.0;
    for (int i = 0; i <= 240; ++i) {
      const double z = rep.z_lo + (rep.z_hi - rep.z_lo) * i / 240;
      e = std::max(e, std::abs(graphs[k](z * sT) - intermediate_profile(n, z)));
    }
    rep.tau.push_back(run.states[k].time);
    rep.error.push_back(e);
    rep.sup_error = std::max(rep.sup_error, e);
  }

  // upper barrier along characteristics dz/dtau = (z/2)(1 - 1/tau), launched at y = L
  for (std::size_t k = 0; k + 1 < run.states.size(); ++k) {
    CharacteristicTrace tr;
    tr.tau1 = run.states[k].time;
    tr.z1 = L / std::sqrt(std::abs(tr.tau1));
    const double u1 = graphs[k](L), v1 = u1 * u1 - c2;
    double z = tr.z1, tau = tr.tau1;
    for (std::size_t j = k + 1; j < run.states.size(); ++j) {
      const double tj = run.states[j].time;
      const int sub = 20;
      const double h = (tj - tau) / sub;
      auto f = [](double t, double zz) { return 0.5 * zz * (1 - 1 / t); };
      for (int q = 0; q < sub; ++q) {
        const double k1 = f(tau, z), k2 = f(tau + h / 2, z + h / 2 * k1), k3 = f(tau + h / 2, z + h / 2 * k2),
                     k4 = f(tau + h, z + h * k3);
        z += h / 6 * (k1 + 2 * k2 + 2 * k3 + k4);
        tau += h;
      }
      if (z > rep.z_hi) break;
      const double u = graphs[j](z * std::sqrt(std::abs(tj)));
      const double vb = u * u - c2, w = std::exp(tj - tr.tau1) * v1;
      tr.tau.push_back(tj);
      tr.z.push_back(z);
      tr.vbar.push_back(vb);
      tr.w.push_back(w);
      tr.bookkeeping = std::max(tr.bookkeeping, std::abs(tj - tr.tau1 - std::log(z * z * std::abs(tj) / (L * L))));
      tr.max_violation = std::max(tr.max_violation, vb - w);
    }
    if (!tr.tau.empty()) rep.traces.push_back(std::move(tr));
  }

  // lower barrier u >= u_a on [M, dbar] with a = sqrt(|tau| / (2 K1)), K1 fitted at the first state
  if (!run.states.empty()) {
    const double c = n.cylinder_radius();
    for (std::size_t k = 0; k < run.states.size(); ++k)
      rep.K = std::max(rep.K, std::abs(run.states[k].time) * (1 - graphs[k](M) / c));

    auto margin = [&](const UpperGraph& G, double a) {
      const auto leaf = shoot_leaf(a, n, 0.9 * M);
      const double top = std::min(a, G.tip) - 1e-6;
      double m = std::numeric_limits<double>::infinity();
      for (double y = M; y <= top; y += 0.01) m = std::min(m, G(y) - leaf_point(leaf, y).r);
      return m;
    };
    // u_a(M) decreases in a for small caps, then increases; only the increasing branch is nested
    const auto& G0 = graphs.front();
    double best = std::numeric_limits<double>::infinity();
    for (double a = M + 0.5; a < G0.tip; a += 0.25) {
      const double r = leaf_point(shoot_leaf(a, n, 0.9 * M), M).r;
      if (r > best) break;
      best = r;
      rep.a_branch = a;
    }
    double lo = rep.a_branch, hi = G0.tip;
    if (margin(G0, lo) < 0) throw RegimeError("lower barrier: no nested cap fits under the first state");
    for (int it = 0; it < 40; ++it) {
      const double mid = 0.5 * (lo + hi);
      (margin(G0, mid) >= 0 ? lo : hi) = mid;
    }
    rep.K1 = std::abs(run.states.front().time) / (2 * lo * lo);
    for (std::size_t k = 0; k < run.states.size(); ++k) {
      const double m = margin(graphs[k], std::sqrt(std::abs(run.states[k].time) / (2 * rep.K1)));
      rep.barrier_margin.push_back(m);
      if (m < -1e-6) ++rep.barrier_violations;
    }
  }
  return rep;
}

double tip_error(const FlowState& S, const BowlProfile& bowl, double rho_max, int* nodes) {
  if (bowl.rho_max() < rho_max) throw UsageError("tip_error: bowl profile shorter than the window");
  const auto D = diagnostics(S);
  const double scale = 2 * D.Htip, d = S.curve.y.front();
  double e = 0.0;
  int count = 0;
  for (std::size_t i = 0; i < S.curve.size(); ++i) {
    const double rho = scale * S.curve.r[i];
    if (rho > rho_max || S.curve.y[i] < 0) break;
    e = std::max(e, std::abs(scale * (d - S.curve.y[i]) - bowl.value(rho)));
    ++count;
  }
  if (nodes) *nodes = count;
  if (count < 50)
    throw ResolutionError("tip under-resolved: " + std::to_string(count) + " nodes within rho <= " +
                          std::to_string(rho_max));
  return e;
}

TipReport verify_tip(const AnsatzRun& run, const BowlProfile& bowl, double rho_max) {
  TipReport rep;
  rep.region = RegionKind::Tip;
  rep.rho_max = rho_max;
  for (std::size_t k = 0; k < run.states.size(); ++k) {
    int cnt = 0;
    const double e = tip_error(run.states[k], bowl, rho_max, &cnt);
    rep.tau.push_back(run.states[k].time);
    rep.error.push_back(e);
    rep.lambda.push_back(run.records[k].diag.Htip);
    rep.window_nodes.push_back(cnt);
    rep.sup_error = std::max(rep.sup_error, e);
  }
  return rep;
}

GlobalReport verify_global(const AnsatzRun& run, double lo, double hi) {
  GlobalReport rep;
  rep.region = RegionKind::Global;
  std::vector<const RunRecord*> R;
  for (const auto& r : run.records)
    if (r.tau >= lo - 1e-9 && r.tau <= hi + 1e-9) R.push_back(&r);
  rep.area_c = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < R.size(); ++i) {
    const auto& D = R[i]->diag;
    const double T = std::abs(R[i]->tau);
    rep.tau.push_back(R[i]->tau);
    rep.dbar_ratio.push_back(D.dbar / std::sqrt(2 * T));
    rep.hmax_ratio.push_back(D.Hmax / std::sqrt(T));
    rep.area_ratio.push_back(D.area / D.dbar);
    rep.error.push_back(std::abs(rep.dbar_ratio.back() - 1));
    rep.sup_error = std::max(rep.sup_error, rep.error.back());
    rep.hmax_below_dbar = rep.hmax_below_dbar && D.Hmax <= D.dbar;
    rep.area_c = std::min(rep.area_c, rep.area_ratio.back());
    rep.area_C = std::max(rep.area_C, rep.area_ratio.back());
    double dp = 0.0;
    if (R.size() >= 3) {
      const std::size_t j = std::clamp<std::size_t>(i, 1, R.size() - 2) - 1;
      const double x[3] = {R[j]->tau, R[j + 1]->tau, R[j + 2]->tau};
      const auto w = fd_weights(R[i]->tau, x, 1);
      dp = w[0] * R[j]->diag.dbar + w[1] * R[j + 1]->diag.dbar + w[2] * R[j + 2]->diag.dbar;
    }
    rep.dbar_prime.push_back(dp);
    rep.dbar_growth_ok = rep.dbar_growth_ok && std::abs(dp) <= 0.5 * D.dbar + 1e-3;
  }
  return rep;
}

}  // namespace ovals
