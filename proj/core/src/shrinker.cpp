#include "ovals/shrinker.hpp"

#include "far_field.hpp"

#include <algorithm>
#include <array>
#include <boost/numeric/odeint/stepper/runge_kutta4.hpp>
#include <limits>
#include <string>

namespace ovals {

namespace odeint = boost::numeric::odeint;

namespace {

using State2 = std::array<double, 2>;
using State3 = std::array<double, 3>;

bool finite(const auto& x) {
  for (double v : x)
    if (!std::isfinite(v)) return false;
  return true;
}

// chi' for the tip chart; eps = 0 gives the bowl.
double tip_rhs(double rho, double psi, double chi, int n, double eps) {
  return (1.0 + chi * chi) * (0.5 - (n - 1) * chi / rho + eps * (rho * chi - psi));
}

struct TipRaw {
  std::vector<double> rho, psi, chi;
};

// Integrates the tip chart on rho_k = k*h up to K = round(M/h) with the Taylor seed at k = 10.
TipRaw integrate_tip(Dimension n, double eps, double M, double h) {
  const std::size_t K = static_cast<std::size_t>(std::llround(M / h));
  const std::size_t k0 = 10;
  if (K <= k0 + 2) throw UsageError("tip chart extent too small for the step");
  const TipSeed seed = tip_seed(n, eps);
  TipRaw out;
  out.rho.resize(K + 1);
  out.psi.resize(K + 1);
  out.chi.resize(K + 1);
  for (std::size_t k = 0; k <= k0; ++k) {
    const double r = k * h, r2 = r * r;
    out.rho[k] = r;
    out.psi[k] = seed.p2 * r2 + seed.p4 * r2 * r2;
    out.chi[k] = 2 * seed.p2 * r + 4 * seed.p4 * r2 * r;
  }
  const int nn = n.n;
  auto sys = [nn, eps](const State2& x, State2& dx, double r) {
    dx[0] = x[1];
    dx[1] = tip_rhs(r, x[0], x[1], nn, eps);
  };
  odeint::runge_kutta4<State2> rk;
  State2 x{out.psi[k0], out.chi[k0]};
  for (std::size_t k = k0; k < K; ++k) {
    rk.do_step(sys, x, k * h, h);
    if (!finite(x))
      throw IntegrationFailure("tip chart: non-finite state at rho = " + std::to_string((k + 1) * h));
    out.rho[k + 1] = (k + 1) * h;
    out.psi[k + 1] = x[0];
    out.chi[k + 1] = x[1];
  }
  return out;
}

double theta_rhs(double y, double r, double th, int n) {
  return ((n - 1) / r - 0.5 * r) * std::cos(th) + 0.5 * y * std::sin(th);
}

double uyy_rhs(double y, double u, double p, int n) {
  return (1.0 + p * p) * (0.5 * y * p - 0.5 * u + (n - 1) / u);
}

void reverse_samples(ShrinkerLeaf& L) {
  std::reverse(L.y.begin(), L.y.end());
  std::reverse(L.u.begin(), L.u.end());
  std::reverse(L.uy.begin(), L.uy.end());
  std::reverse(L.w.begin(), L.w.end());
  std::reverse(L.residual.begin(), L.residual.end());
}

void push_sample(ShrinkerLeaf& L, double y, double u, double uy, double res) {
  // keep y strictly monotone (descending during assembly)
  if (!L.y.empty() && !(y < L.y.back())) return;
  L.y.push_back(y);
  L.u.push_back(u);
  L.uy.push_back(uy);
  L.w.push_back(w_value(y, u, uy, L.n));
  L.residual.push_back(res);
}

double hermite_at(const std::vector<double>& x, const std::vector<double>& f,
                  const std::vector<double>& df, double xq) {
  if (x.size() < 2) throw UsageError("too few samples for interpolation");
  return hermite_eval(x, f, df, xq);
}

}  // namespace

TipSeed tip_seed(Dimension n, double eps) {
  const double p2 = 1.0 / (4.0 * n.n);
  const double p4 = (8 * p2 * p2 * p2 + eps * p2) / (4.0 * (n.n + 2));
  return {p2, p4};
}

double BowlProfile::value(double r) const { return hermite_at(rho, psi, dpsi, r); }
double BowlProfile::slope(double r) const { return hermite_at(rho, dpsi, ddpsi, r); }

BowlProfile solve_bowl(Dimension n, double rho_max, double h) {
  if (!(rho_max >= 10.0)) throw UsageError("solve_bowl: rho_max must be >= 10");
  if (!(h > 0.0 && h <= 1e-2)) throw UsageError("solve_bowl: step must lie in (0, 1e-2]");
  auto raw = integrate_tip(n, 0.0, rho_max, h);
  BowlProfile B;
  B.n = n;
  B.h = h;
  B.rho = std::move(raw.rho);
  B.psi = std::move(raw.psi);
  B.dpsi = std::move(raw.chi);
  B.ddpsi.resize(B.rho.size());
  const TipSeed s = tip_seed(n, 0.0);
  for (std::size_t k = 0; k < B.rho.size(); ++k) {
    const double r = B.rho[k];
    B.ddpsi[k] = (k == 0) ? 2 * s.p2 : tip_rhs(r, B.psi[k], B.dpsi[k], n.n, 0.0);
  }
  double acc = 0.0;
  int cnt = 0;
  const double lo = 0.5 * B.rho_max();
  for (std::size_t k = 0; k < B.rho.size(); ++k) {
    const double r = B.rho[k];
    if (r < lo) continue;
    acc += B.psi[k] - r * r / (4.0 * (n.n - 1)) + 2.0 * std::log(r);
    ++cnt;
  }
  B.C0 = acc / cnt;
  return B;
}

double TipCap::value(double r) const { return hermite_at(rho, psi, dpsi, r); }

double TipCap::slope(double r) const {
  const std::size_t i = bracket(rho, r);
  // chi' from the ODE at the two bracketing nodes (rho = 0 uses the seed)
  auto d2 = [&](std::size_t k) {
    return k == 0 ? 2 * tip_seed(n, eps).p2 : tip_rhs(rho[k], psi[k], dpsi[k], n.n, eps);
  };
  const std::vector<double> x{rho[i], rho[i + 1]}, f{dpsi[i], dpsi[i + 1]}, df{d2(i), d2(i + 1)};
  return hermite_eval(x, f, df, r);
}

TipCap solve_tip_cap(double a, double M, Dimension n, double h) {
  if (!(a >= 10.0)) throw UsageError("solve_tip_cap: a must be >= 10");
  if (!(M >= 10.0)) throw UsageError("solve_tip_cap: M must be >= 10");
  const double eps = 1.0 / (2 * a * a);
  auto raw = integrate_tip(n, eps, M, h);
  TipCap T;
  T.a = a;
  T.eps = eps;
  T.n = n;
  T.h = h;
  T.M = raw.rho.back();
  T.rho = std::move(raw.rho);
  T.psi = std::move(raw.psi);
  T.dpsi = std::move(raw.chi);
  return T;
}

double shrinker_residual(double y, double u, double uy, double uyy, Dimension n) {
  return uyy / (1 + uy * uy) - 0.5 * y * uy + 0.5 * u - (n.n - 1) / u;
}

double w_value(double y, double u, double uy, Dimension n) {
  return 2 * y * u * uy / (u * u - 2.0 * (n.n - 1));
}

double w_ode_rhs(double y, double u, double uy, double w, Dimension n) {
  return w - (0.5 + (n.n - 1) / (u * u)) * w * w + 0.5 * y * y * (1 + uy * uy) * (w - 2);
}

double ShrinkerLeaf::u_at(double yq) const { return hermite_at(y, u, uy, yq); }
double ShrinkerLeaf::uy_at(double yq) const {
  const std::size_t i = bracket(y, yq);
  const std::vector<double> x{y[i], y[i + 1]}, f{uy[i], uy[i + 1]},
      df{uyy_rhs(y[i], u[i], uy[i], n.n), uyy_rhs(y[i + 1], u[i + 1], uy[i + 1], n.n)};
  return hermite_eval(x, f, df, yq);
}

LeafPoint leaf_point(const ShrinkerLeaf& L, double yq) {
  const bool is_cap = L.kind == ShrinkerLeaf::Kind::Cap;
  const double top = is_cap ? L.parameter : L.y_hi();
  if (!(yq >= L.y_lo() && yq <= top)) throw DomainError("leaf_point: y outside the leaf");
  LeafPoint P;
  if (is_cap && L.cap && yq >= L.y_Ma) {
    const TipCap& T = *L.cap;
    const double target = T.a * (T.a - yq);
    std::size_t i = bracket(T.psi, target);
    double rho = T.rho[i];
    for (int it = 0; it < 30; ++it) {  // Newton on the Hermite segment
      const double g = T.value(rho) - target, d = T.slope(rho);
      if (d <= 0.0) break;
      const double step = g / d;
      rho = std::clamp(rho - step, T.rho[i], T.rho[i + 1]);
      if (std::abs(step) < 1e-15 * (1 + rho)) break;
    }
    if (rho <= 0.0 || T.slope(rho) <= 0.0) {
      P.r = 0.0;
      P.phi = -kPi / 2;
      P.uy = -std::numeric_limits<double>::infinity();
      return P;
    }
    const double chi = T.slope(rho);
    P.r = rho / T.a;
    P.uy = -1.0 / chi;
    P.phi = -kPi / 2 + std::atan(chi);
    return P;
  }
  P.r = L.u_at(yq);
  P.uy = L.uy_at(yq);
  P.phi = std::atan(P.uy);
  return P;
}

ShrinkerLeaf shoot_leaf(double a, Dimension n, double y_min, const ShrinkerOptions& opt) {
  if (!(a > 0.0)) throw UsageError("shoot_leaf: a must be positive");
  if (!(y_min >= 0.0)) throw UsageError("shoot_leaf: y_min must be >= 0");
  const double h = opt.h;
  const int every = std::max(1, opt.store_every);
  const double c = n.cylinder_radius();
  const double M = std::min(opt.M, 0.5 * a * c);
  const double eps = 1.0 / (2 * a * a);

  TipCap T;
  {
    auto raw = integrate_tip(n, eps, M, h);
    T.a = a;
    T.eps = eps;
    T.n = n;
    T.h = h;
    T.M = raw.rho.back();
    T.rho = std::move(raw.rho);
    T.psi = std::move(raw.psi);
    T.dpsi = std::move(raw.chi);
  }

  ShrinkerLeaf L;
  L.kind = ShrinkerLeaf::Kind::Cap;
  L.parameter = a;
  L.n = n;
  L.step = h;
  L.y_Ma = T.y_M();
  L.curve.n = n;

  const std::size_t K = T.rho.size() - 1;
  L.curve.y.push_back(a);
  L.curve.r.push_back(0.0);
  L.curve.theta.push_back(kPi / 2);
  for (std::size_t k = every; k < K; k += every) {
    const double y = T.y_of(k), u = T.u_of(k), chi = T.dpsi[k];
    // in the tip chart the residual is the one of the psi equation
    const double fd = (T.dpsi[k + 1] - T.dpsi[k - 1]) / (2 * h);
    const double res = fd - tip_rhs(T.rho[k], T.psi[k], chi, n.n, eps);
    push_sample(L, y, u, -1.0 / chi, res);
    L.curve.y.push_back(y);
    L.curve.r.push_back(u);
    L.curve.theta.push_back(kPi / 2 + std::atan(chi));
  }

  // arclength system from the end of the tip chart
  const int nn = n.n;
  auto sys = [nn](const State3& x, State3& dx, double) {
    dx[0] = std::cos(x[2]);
    dx[1] = std::sin(x[2]);
    dx[2] = theta_rhs(x[0], x[1], x[2], nn);
  };
  L.arc_begin = L.curve.y.size();
  L.arc_ds = every * h;
  odeint::runge_kutta4<State3> rk;
  State3 prev{}, cur{T.y_M(), T.rho[K] / a, kPi / 2 + std::atan(T.dpsi[K])};
  State3 next = cur;
  rk.do_step(sys, next, 0.0, h);
  const std::size_t max_steps = static_cast<std::size_t>(10.0 * (a + 20.0) / h);
  double y_lowest = cur[0];
  bool stopped = false;
  for (std::size_t k = 1; k < max_steps && !stopped; ++k) {
    prev = cur;
    cur = next;
    next = cur;
    rk.do_step(sys, next, k * h, h);
    if (!finite(next)) throw IntegrationFailure("shoot_leaf: non-finite state");
    y_lowest = std::min(y_lowest, cur[0]);
    const double ct = std::cos(cur[2]);
    if (ct >= 0.0) {  // curve turns back: no longer a graph over y
      L.terminated_early = cur[0] > y_min;
      break;
    }
    if (cur[1] < 1e-3 * c) {
      L.terminated_early = cur[0] > y_min;
      break;
    }
    if (k % every == 0) {
      const double fd = (next[2] - prev[2]) / (2 * h);
      const double res = (fd - theta_rhs(cur[0], cur[1], cur[2], nn)) / ct;
      push_sample(L, cur[0], cur[1], std::tan(cur[2]), res);
      L.curve.y.push_back(cur[0]);
      L.curve.r.push_back(cur[1]);
      L.curve.theta.push_back(cur[2]);
    }
    if (cur[0] < y_min) stopped = true;
  }
  L.y_star = y_lowest;
  L.cap = std::move(T);
  reverse_samples(L);
  return L;
}

double trumpet_seed_height(double b, Dimension n) {
  return std::max(100.0, 100.0 * n.cylinder_radius() / b);
}

ShrinkerLeaf solve_trumpet(double b, Dimension n, double y_lo, double Y, const ShrinkerOptions& opt) {
  if (!(b > 0.0 && b <= opt.b0)) throw UsageError("solve_trumpet: b must lie in (0, b0]");
  if (!(Y >= 100.0)) throw UsageError("solve_trumpet: Y must be >= 100");
  if (!(y_lo >= 0.0 && y_lo < Y)) throw UsageError("solve_trumpet: bad y span");
  const int nn = n.n;

  ShrinkerLeaf L;
  L.kind = ShrinkerLeaf::Kind::Trumpet;
  L.parameter = b;
  L.n = n;
  L.curve.n = n;
  L.curve.pinned_ends = true;
  auto store = [&](double y, double u, double p, double res) {
    push_sample(L, y, u, p, res);
    L.curve.y.push_back(y);
    L.curve.r.push_back(u);
    L.curve.theta.push_back(std::atan2(-p, -1.0) + 2 * kPi);
  };
  auto spacing = [](double y) { return 0.01 * std::max(1.0, y / 20.0); };

  // Far out the inward march is stiff (decay rate ~ y/2): Rosenbrock down to Y1,
  // fixed-step RK4 below, where the residual is taken at the step spacing.
  const double Y1 = std::min(Y, std::max(y_lo + 1.0, 200.0));
  State2 x0{b * Y + (nn - 1) / (b * Y), b - (nn - 1) / (b * Y * Y)};
  if (Y1 < Y) {
    std::vector<double> fy;
    for (double yq = Y; yq > Y1; yq -= spacing(yq)) fy.push_back(yq);
    detail::FarField far;
    try {
      far = detail::trumpet_far_field(nn, b, Y, Y1, fy);
    } catch (const std::runtime_error& e) {
      throw IntegrationFailure(std::string("solve_trumpet: ") + e.what());
    }
    x0 = {far.u_end, far.p_end};
    // residual from three-point differences of u_y on the stored samples
    for (std::size_t i = 0; i < fy.size(); ++i) {
      double res = 0.0;
      if (i > 0 && i + 1 < fy.size()) {
        const std::array<double, 3> yy{fy[i - 1], fy[i], fy[i + 1]};
        const auto wt = fd_weights(fy[i], yy, 1);
        const double pyy = wt[0] * far.p[i - 1] + wt[1] * far.p[i] + wt[2] * far.p[i + 1];
        res = shrinker_residual(fy[i], far.u[i], far.p[i], pyy, n);
      }
      store(fy[i], far.u[i], far.p[i], res);
    }
  }

  const std::size_t K = static_cast<std::size_t>(std::ceil((Y1 - y_lo) / opt.h));
  const double h = (Y1 - y_lo) / K;
  L.step = h;
  auto sys = [nn](const State2& x, State2& dx, double s) {
    dx[0] = -x[1];
    dx[1] = -uyy_rhs(-s, x[0], x[1], nn);
  };
  odeint::runge_kutta4<State2> rk;
  State2 cur = x0, prev = cur, next = cur;
  rk.do_step(sys, next, -Y1, h);
  double next_store = Y1;
  for (std::size_t k = 1; k < K; ++k) {
    prev = cur;
    cur = next;
    next = cur;
    const double y = Y1 - k * h;
    rk.do_step(sys, next, -y, h);
    if (!finite(next) || !(next[0] > 0.0))
      throw IntegrationFailure("solve_trumpet: non-finite state at y = " + std::to_string(y));
    if (y <= next_store) {
      const double fd = (prev[1] - next[1]) / (2 * h);
      store(y, cur[0], cur[1], shrinker_residual(y, cur[0], cur[1], fd, n));
      next_store = y - spacing(y);
    }
  }
  // endpoint without a centered residual
  store(y_lo, next[0], next[1], 0.0);
  L.y_star = y_lo;
  reverse_samples(L);
  return L;
}

WDiagnostic w_diagnostic(const ShrinkerLeaf& L, double margin) {
  WDiagnostic D;
  const double c2 = 2.0 * (L.n.n - 1);
  const std::size_t m = L.y.size();
  if (m < 3) throw UsageError("w_diagnostic: leaf has too few samples");

  // clip below the last crossing of the cylinder radius
  double lo = L.y.front();
  for (std::size_t i = 0; i + 1 < m; ++i) {
    const double s0 = L.u[i] * L.u[i] - c2, s1 = L.u[i + 1] * L.u[i + 1] - c2;
    if (s0 == 0.0 || (s0 < 0) != (s1 < 0)) {
      lo = L.y[i + 1];
      D.clipped = true;
    }
  }
  D.clip_lo = lo;
  D.clip_hi = L.y.back();

  std::vector<double> uu, pp;
  for (std::size_t i = 0; i < m; ++i) {
    if (L.y[i] < lo || L.y[i] <= 0.0) continue;
    if (std::abs(L.u[i] * L.u[i] - c2) < margin) continue;
    D.y.push_back(L.y[i]);
    D.w.push_back(L.w[i]);
    uu.push_back(L.u[i]);
    pp.push_back(L.uy[i]);
  }
  double worst = 0.0;
  for (std::size_t i = 1; i + 1 < D.y.size(); ++i) {
    const std::array<double, 3> x{D.y[i - 1], D.y[i], D.y[i + 1]};
    const auto wt = fd_weights(D.y[i], x, 1);
    const double wy = wt[0] * D.w[i - 1] + wt[1] * D.w[i] + wt[2] * D.w[i + 1];
    const double r = D.y[i] * wy - w_ode_rhs(D.y[i], uu[i], pp[i], D.w[i], L.n);
    worst = std::max(worst, std::abs(r));
  }
  D.ode_residual = worst;

  D.tip_limit = std::numeric_limits<double>::quiet_NaN();
  if (L.kind == ShrinkerLeaf::Kind::Cap && L.cap) {
    const TipCap& T = *L.cap;
    auto w_at = [&](double rho) {
      const double y = T.a - T.value(rho) / T.a, u = rho / T.a, uy = -1.0 / T.slope(rho);
      return w_value(y, u, uy, L.n);
    };
    // w is even in rho: Richardson in rho^2
    auto r1 = [&](double rho) { return (4 * w_at(rho / 2) - w_at(rho)) / 3; };
    const double rho = std::min(0.4, 0.5 * T.M);
    D.tip_limit = (16 * r1(rho / 2) - r1(rho)) / 15;
  }
  return D;
}

ExpansionFit fit_expansions(const ShrinkerLeaf& L, double lo, double hi) {
  if (L.kind != ShrinkerLeaf::Kind::Cap) throw UsageError("fit_expansions: cap leaf required");
  if (!(lo >= 0.0 && hi <= 5.0 && lo < hi)) throw UsageError("fit_expansions: window must lie in [0,5]");
  const double a = L.parameter, c = L.n.cylinder_radius();
  ExpansionFit F;
  F.window_lo = lo;
  F.window_hi = hi;
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < L.y.size(); ++i) {
    const double y = L.y[i], u = L.u[i];
    if (y >= lo && y <= hi) {
      const double q = (y * y - 2) / (2 * a * a);
      F.inner_sup_residual = std::max(F.inner_sup_residual, std::abs(u - c * (1 - q)));
      // least squares for u - c = -kappa c q
      num += (c - u) * c * q;
      den += c * q * c * q;
    }
    if (y >= 0.0 && y <= a) {
      const double outer = c * std::sqrt(std::max(0.0, 1 - y * y / (a * a)));
      F.outer_sup_residual = std::max(F.outer_sup_residual, std::abs(u - outer));
    }
  }
  F.coefficient = den > 0 ? num / den : 0.0;
  return F;
}

std::vector<ExpansionFit> expansion_sweep(const std::vector<ShrinkerLeaf>& leaves, double lo,
                                          double hi) {
  std::vector<ExpansionFit> out;
  for (const auto& L : leaves) out.push_back(fit_expansions(L, lo, hi));
  for (std::size_t i = 0; i < out.size() && out.size() > 1; ++i) {
    const std::size_t j = (i == 0) ? 1 : i;
    const std::size_t k = j - 1;
    out[i].decay_exponent = std::log(out[j].inner_sup_residual / out[k].inner_sup_residual) /
                            std::log(leaves[j].parameter / leaves[k].parameter);
  }
  return out;
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& f) {
  if (x.size() != f.size() || x.size() < 2) throw UsageError("loglog_slope: bad sizes");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double m = static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double lx = std::log(x[i]), ly = std::log(std::abs(f[i]));
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (m * sxy - sx * sy) / (m * sxx - sx * sx);
}

}  // namespace ovals
