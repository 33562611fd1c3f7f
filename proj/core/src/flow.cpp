#include "ovals/flow.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace ovals {

namespace {

struct Field {
  std::vector<double> y, r;
  explicit Field(std::size_t m = 0) : y(m, 0.0), r(m, 0.0) {}
};

// Tridiagonal operator, one per coordinate.
struct Tri {
  std::vector<double> lo, di, up;
  explicit Tri(std::size_t m = 0) : lo(m, 0.0), di(m, 0.0), up(m, 0.0) {}
  void apply(const std::vector<double>& x, std::vector<double>& out) const {
    const std::size_t m = x.size();
    for (std::size_t i = 0; i < m; ++i) {
      double v = di[i] * x[i];
      if (i > 0) v += lo[i] * x[i - 1];
      if (i + 1 < m) v += up[i] * x[i + 1];
      out[i] = v;
    }
  }
  // solves (I - c T) x = b in place
  void solve_shifted(double c, std::vector<double>& b) const {
    const std::size_t m = b.size();
    std::vector<double> cp(m), dp(m);
    double beta = 1.0 - c * di[0];
    cp[0] = -c * up[0] / beta;
    dp[0] = b[0] / beta;
    for (std::size_t i = 1; i < m; ++i) {
      const double a = -c * lo[i];
      beta = (1.0 - c * di[i]) - a * cp[i - 1];
      cp[i] = -c * up[i] / beta;
      dp[i] = (b[i] - a * dp[i - 1]) / beta;
    }
    b[m - 1] = dp[m - 1];
    for (std::size_t i = m - 1; i-- > 0;) b[i] = dp[i] - cp[i] * b[i + 1];
  }
};

void velocity(const ArcCurve& C, bool rescaled, Field& F) {
  const std::size_t m = C.size();
  const int n = C.n.n;
  const auto& y = C.y;
  const auto& r = C.r;
  for (std::size_t i = 1; i + 1 < m; ++i) {
    const double py = 0.5 * (y[i + 1] - y[i - 1]), pr = 0.5 * (r[i + 1] - r[i - 1]);
    const double g = py * py + pr * pr, len = std::sqrt(g);
    const double Ty = py / len, Tr = pr / len, Ny = Tr, Nr = -Ty;
    const double rot = (n - 1) * Ty / r[i];
    double vy = (y[i + 1] - 2 * y[i] + y[i - 1]) / g + rot * Ny;
    double vr = (r[i + 1] - 2 * r[i] + r[i - 1]) / g + rot * Nr;
    if (rescaled) {
      const double XN = y[i] * Ny + r[i] * Nr;
      vy += 0.5 * XN * Ny;
      vr += 0.5 * XN * Nr;
    }
    F.y[i] = vy;
    F.r[i] = vr;
  }
  F.y[0] = F.r[0] = F.y[m - 1] = F.r[m - 1] = 0.0;
  if (C.pinned_ends) return;
  // umbilic tips: y_ss + (n-1) y_s r_s / r -> n y_ss, with y even in s
  const double g0 = (y[1] - y[0]) * (y[1] - y[0]) + r[1] * r[1];
  const double g1 = (y[m - 2] - y[m - 1]) * (y[m - 2] - y[m - 1]) + r[m - 2] * r[m - 2];
  F.y[0] = 2.0 * n * (y[1] - y[0]) / g0 + (rescaled ? 0.5 * y[0] : 0.0);
  F.y[m - 1] = 2.0 * n * (y[m - 2] - y[m - 1]) / g1 + (rescaled ? 0.5 * y[m - 1] : 0.0);
}

// Stiff part of the velocity, coefficients frozen at C.
void stiff_operator(const ArcCurve& C, Tri& Ly, Tri& Lr) {
  const std::size_t m = C.size();
  const int n = C.n.n;
  const auto& y = C.y;
  const auto& r = C.r;
  Ly = Tri(m);
  Lr = Tri(m);
  for (std::size_t i = 1; i + 1 < m; ++i) {
    const double py = 0.5 * (y[i + 1] - y[i - 1]), pr = 0.5 * (r[i + 1] - r[i - 1]);
    const double g = py * py + pr * pr, len = std::sqrt(g);
    const double c1 = (n - 1) * (pr / len) / (r[i] * len);
    Ly.lo[i] = 1.0 / g - 0.5 * c1;
    Ly.di[i] = -2.0 / g;
    Ly.up[i] = 1.0 / g + 0.5 * c1;
    Lr.lo[i] = 1.0 / g;
    Lr.di[i] = -2.0 / g;
    Lr.up[i] = 1.0 / g;
  }
  if (C.pinned_ends) return;
  const double g0 = (y[1] - y[0]) * (y[1] - y[0]) + r[1] * r[1];
  const double g1 = (y[m - 2] - y[m - 1]) * (y[m - 2] - y[m - 1]) + r[m - 2] * r[m - 2];
  Ly.di[0] = -2.0 * n / g0;
  Ly.up[0] = 2.0 * n / g0;
  Ly.lo[m - 1] = 2.0 * n / g1;
  Ly.di[m - 1] = -2.0 * n / g1;
}

void check_state(const ArcCurve& C) {
  const std::size_t m = C.size();
  for (std::size_t i = 0; i < m; ++i)
    if (!std::isfinite(C.y[i]) || !std::isfinite(C.r[i])) throw StepRejected("non-finite node");
  for (std::size_t i = 1; i + 1 < m; ++i) {
    if (!(C.r[i] > 0.0)) throw StepRejected("interior node reached the axis");
    const double dot = (C.y[i + 1] - C.y[i]) * (C.y[i] - C.y[i - 1]) +
                       (C.r[i + 1] - C.r[i]) * (C.r[i] - C.r[i - 1]);
    if (!(dot > 0.0)) throw StepRejected("nodes folded");
  }
}

void fill_theta_centered(ArcCurve& C) {
  const std::size_t m = C.size();
  C.theta.assign(m, 0.0);
  for (std::size_t i = 1; i + 1 < m; ++i)
    C.theta[i] = std::atan2(C.r[i + 1] - C.r[i - 1], C.y[i + 1] - C.y[i - 1]);
  for (std::size_t i = 1; i + 1 < m; ++i)
    if (C.theta[i] < 0.0) C.theta[i] += 2 * kPi;
  if (C.pinned_ends) {
    C.theta[0] = std::atan2(C.r[1] - C.r[0], C.y[1] - C.y[0]);
    C.theta[m - 1] = std::atan2(C.r[m - 1] - C.r[m - 2], C.y[m - 1] - C.y[m - 2]);
    for (auto* t : {&C.theta[0], &C.theta[m - 1]})
      if (*t < 0.0) *t += 2 * kPi;
  } else {
    C.theta[0] = 0.5 * kPi;
    C.theta[m - 1] = 1.5 * kPi;
  }
}

void finish(FlowState& S, const FlowOptions& opt) {
  auto& C = S.curve;
  if (!C.pinned_ends) C.r.front() = C.r.back() = 0.0;
  check_state(C);
  if (opt.redistribute) redistribute(C);
  if (S.symmetric) symmetrize(C);
  fill_theta_centered(C);
}

FlowState step(const FlowState& S0, double dt, bool rescaled, const FlowOptions& opt) {
  if (!(dt > 0)) throw UsageError("flow step: dt must be positive");
  const ArcCurve& C0 = S0.curve;
  const std::size_t m = C0.size();
  if (m < 5) throw UsageError("flow step: curve needs >= 5 nodes");
  FlowState S = S0;
  S.time += dt;

  if (opt.stepper == Stepper::ExplicitRK2) {
    Field F0(m), F1(m);
    velocity(C0, rescaled, F0);
    ArcCurve C1 = C0;
    for (std::size_t i = 0; i < m; ++i) {
      C1.y[i] += dt * F0.y[i];
      C1.r[i] += dt * F0.r[i];
    }
    check_state(C1);
    velocity(C1, rescaled, F1);
    for (std::size_t i = 0; i < m; ++i) {
      S.curve.y[i] = C0.y[i] + 0.5 * dt * (F0.y[i] + F1.y[i]);
      S.curve.r[i] = C0.r[i] + 0.5 * dt * (F0.r[i] + F1.r[i]);
    }
    finish(S, opt);
    return S;
  }

  // ARS(2,2,2): L frozen at the start, the remainder F - L U explicit
  const double g = 1.0 - 1.0 / std::sqrt(2.0), d = 1.0 - 1.0 / (2.0 * g);
  Tri Ly, Lr;
  stiff_operator(C0, Ly, Lr);
  auto explicit_part = [&](const ArcCurve& C, Field& E, Field& LU) {
    velocity(C, rescaled, E);
    Ly.apply(C.y, LU.y);
    Lr.apply(C.r, LU.r);
    for (std::size_t i = 0; i < m; ++i) {
      E.y[i] -= LU.y[i];
      E.r[i] -= LU.r[i];
    }
  };
  Field E0(m), L0(m), E1(m), L1(m);
  explicit_part(C0, E0, L0);

  ArcCurve C1 = C0;
  for (std::size_t i = 0; i < m; ++i) {
    C1.y[i] = C0.y[i] + g * dt * E0.y[i];
    C1.r[i] = C0.r[i] + g * dt * E0.r[i];
  }
  Ly.solve_shifted(g * dt, C1.y);
  Lr.solve_shifted(g * dt, C1.r);
  check_state(C1);
  explicit_part(C1, E1, L1);

  ArcCurve& C2 = S.curve;
  for (std::size_t i = 0; i < m; ++i) {
    C2.y[i] = C0.y[i] + dt * (d * E0.y[i] + (1 - d) * E1.y[i]) + (1 - g) * dt * L1.y[i];
    C2.r[i] = C0.r[i] + dt * (d * E0.r[i] + (1 - d) * E1.r[i]) + (1 - g) * dt * L1.r[i];
  }
  Ly.solve_shifted(g * dt, C2.y);
  Lr.solve_shifted(g * dt, C2.r);
  finish(S, opt);
  return S;
}

double trapezoid_curve(const ArcCurve& C, const std::vector<double>& f) {
  double s = 0.0;
  for (std::size_t i = 1; i < C.size(); ++i)
    s += 0.5 * (f[i] + f[i - 1]) * std::hypot(C.y[i] - C.y[i - 1], C.r[i] - C.r[i - 1]);
  return s;
}

}  // namespace

CurveGeometry curve_geometry(const ArcCurve& C) {
  const std::size_t m = C.size();
  if (m < 5) throw UsageError("curve_geometry: curve needs >= 5 nodes");
  const int n = C.n.n;
  CurveGeometry G;
  ArcCurve tmp = C;
  fill_theta_centered(tmp);
  G.theta = tmp.theta;
  G.kappa.assign(m, 0.0);
  G.lambda1.assign(m, 0.0);
  G.H.assign(m, 0.0);
  G.ds = C.length() / double(m - 1);
  for (std::size_t i = 1; i + 1 < m; ++i) {
    if (!(C.r[i] > 0.0)) throw InvalidState("curve has r <= 0 at an interior sample");
    const double yp = 0.5 * (C.y[i + 1] - C.y[i - 1]), rp = 0.5 * (C.r[i + 1] - C.r[i - 1]);
    const double ypp = C.y[i + 1] - 2 * C.y[i] + C.y[i - 1], rpp = C.r[i + 1] - 2 * C.r[i] + C.r[i - 1];
    const double g = yp * yp + rp * rp;
    G.kappa[i] = (yp * rpp - rp * ypp) / (g * std::sqrt(g));
    G.lambda1[i] = -(yp / std::sqrt(g)) / C.r[i];
    G.H[i] = G.kappa[i] + (n - 1) * G.lambda1[i];
  }
  if (C.pinned_ends) {
    for (std::size_t e : {std::size_t(0), m - 1}) {
      const std::size_t k = e == 0 ? 1 : m - 2;
      G.kappa[e] = G.kappa[k];
      G.lambda1[e] = G.lambda1[k];
      G.H[e] = G.H[k];
    }
    return G;
  }
  // osculating circle through the tip and its neighbour
  auto tip = [&](std::size_t e, std::size_t k) {
    const double dy = std::abs(C.y[k] - C.y[e]);
    const double kap = 2 * dy / (dy * dy + C.r[k] * C.r[k]);
    G.kappa[e] = G.lambda1[e] = kap;
    G.H[e] = n * kap;
  };
  tip(0, 1);
  tip(m - 1, m - 2);
  return G;
}

std::vector<double> mean_curvature(const ArcCurve& C) { return curve_geometry(C).H; }

double explicit_step_bound(const ArcCurve& C, double cfl) {
  const auto G = curve_geometry(C);
  const double hmax = *std::max_element(G.H.begin(), G.H.end());
  return cfl * G.ds * G.ds / std::max(1.0, hmax * hmax);
}

FlowState step_rescaled(const FlowState& s, double dtau, const FlowOptions& opt) {
  return step(s, dtau, true, opt);
}

FlowState step_unrescaled(const FlowState& s, double dt, const FlowOptions& opt) {
  return step(s, dt, false, opt);
}

FlowState evolve(FlowState S, FlowKind kind, double until, double dt, const FlowOptions& opt,
                 const std::function<void(const FlowState&)>& observe) {
  if (!(dt > 0)) throw UsageError("evolve: dt must be positive");
  const bool rescaled = kind == FlowKind::Rescaled;
  while (S.time < until - 1e-12 * std::max(1.0, std::abs(until))) {
    double h = std::min(dt, until - S.time);
    if (opt.stepper == Stepper::ExplicitRK2) h = std::min(h, explicit_step_bound(S.curve, opt.cfl));
    for (;;) {
      try {
        S = step(S, h, rescaled, opt);
        break;
      } catch (const StepRejected&) {
        h *= 0.5;
        if (h < 1e-8 * dt) throw;
      }
    }
    if (observe) observe(S);
  }
  return S;
}

void redistribute(ArcCurve& C) {
  const std::size_t m = C.size();
  const auto s = C.arclength();
  const double L = s.back();
  const std::size_t g = C.pinned_ends ? 0 : 2;
  std::vector<double> xs, ys, rs;
  xs.reserve(m + 2 * g);
  ys.reserve(m + 2 * g);
  rs.reserve(m + 2 * g);
  // reflected ghosts: y even, r odd about each axis end
  for (std::size_t k = g; k >= 1; --k) {
    xs.push_back(-s[k]);
    ys.push_back(C.y[k]);
    rs.push_back(-C.r[k]);
  }
  for (std::size_t i = 0; i < m; ++i) {
    xs.push_back(s[i]);
    ys.push_back(C.y[i]);
    rs.push_back(C.r[i]);
  }
  for (std::size_t k = 1; k <= g; ++k) {
    xs.push_back(2 * L - s[m - 1 - k]);
    ys.push_back(C.y[m - 1 - k]);
    rs.push_back(-C.r[m - 1 - k]);
  }
  std::vector<double> ny(m), nr(m);
  for (std::size_t j = 0; j < m; ++j) {
    const double sq = L * double(j) / double(m - 1);
    ny[j] = lagrange4(xs, ys, sq);
    nr[j] = lagrange4(xs, rs, sq);
  }
  ny.front() = C.y.front();
  ny.back() = C.y.back();
  nr.front() = C.r.front();
  nr.back() = C.r.back();
  C.y = std::move(ny);
  C.r = std::move(nr);
}

void symmetrize(ArcCurve& C) {
  const std::size_t m = C.size();
  for (std::size_t i = 0; i < (m + 1) / 2; ++i) {
    const std::size_t j = m - 1 - i;
    const double y = 0.5 * (C.y[i] - C.y[j]), r = 0.5 * (C.r[i] + C.r[j]);
    C.y[i] = y;
    C.y[j] = -y;
    C.r[i] = C.r[j] = r;
  }
}

ArcCurve sphere_curve(Dimension n, double R, int nodes) {
  if (nodes < 5 || !(R > 0)) throw UsageError("sphere_curve: need R > 0 and >= 5 nodes");
  ArcCurve C;
  C.n = n;
  for (int i = 0; i < nodes; ++i) {
    const double a = kPi * i / (nodes - 1);
    C.y.push_back(R * std::cos(a));
    C.r.push_back(i == 0 || i == nodes - 1 ? 0.0 : R * std::sin(a));
  }
  fill_theta_centered(C);
  return C;
}

ArcCurve cylinder_segment(Dimension n, double R, double half_length, int nodes) {
  if (nodes < 5 || !(R > 0) || !(half_length > 0)) throw UsageError("cylinder_segment: bad arguments");
  ArcCurve C;
  C.n = n;
  C.pinned_ends = true;
  for (int i = 0; i < nodes; ++i) {
    C.y.push_back(half_length * (1.0 - 2.0 * i / (nodes - 1)));
    C.r.push_back(R);
  }
  fill_theta_centered(C);
  return C;
}

FlowState to_rescaled(const FlowState& S) {
  if (!(S.time < 0)) throw UsageError("to_rescaled: unrescaled time must be negative");
  FlowState out = S;
  const double k = 1.0 / std::sqrt(-S.time);
  for (auto& v : out.curve.y) v *= k;
  for (auto& v : out.curve.r) v *= k;
  out.time = -std::log(-S.time);
  return out;
}

FlowState to_unrescaled(const FlowState& S) {
  FlowState out = S;
  const double k = std::exp(-0.5 * S.time);
  for (auto& v : out.curve.y) v *= k;
  for (auto& v : out.curve.r) v *= k;
  out.time = -std::exp(-S.time);
  return out;
}

GraphSamples graph_samples(const ArcCurve& C) {
  const auto G = curve_geometry(C);
  GraphSamples out;
  const std::size_t m = C.size();
  for (std::size_t k = m - 1; k-- > 1;) {
    const double ct = std::cos(G.theta[k]);
    out.y.push_back(C.y[k]);
    out.u.push_back(C.r[k]);
    out.uy.push_back(std::tan(G.theta[k]));
    out.uyy.push_back(G.kappa[k] / (ct * ct * ct));
  }
  return out;
}

RadialProfile graph_profile(const FlowState& S, const Grid& grid) {
  const auto& C = S.curve;
  const std::size_t m = C.size();
  std::vector<double> y(m), r(m);
  for (std::size_t i = 0; i < m; ++i) {
    y[i] = C.y[m - 1 - i];
    r[i] = C.r[m - 1 - i];
  }
  for (std::size_t i = 1; i < m; ++i)
    if (!(y[i] > y[i - 1])) throw InvalidState("graph_profile: curve is not a graph over y");
  RadialProfile P;
  P.grid = grid;
  P.n = C.n;
  P.symmetric = S.symmetric;
  P.convex = true;
  P.u = sample(grid, [&](double yq) {
    if (yq <= y.front() || yq >= y.back()) return 0.0;
    return lagrange4(y, r, yq);
  });
  return P;
}

FlowDiagnostics diagnostics(const FlowState& S) {
  const auto& C = S.curve;
  const std::size_t m = C.size();
  const int n = C.n.n;
  const auto G = curve_geometry(C);
  FlowDiagnostics D;
  D.time = S.time;
  D.dbar = C.y.front();
  const auto it = std::max_element(G.H.begin(), G.H.end());
  D.Hmax = *it;
  D.argmax = std::size_t(it - G.H.begin());
  D.Htip = G.H.front();
  D.argmax_at_tip = !C.pinned_ends && (D.argmax == 0 || D.argmax == m - 1);
  D.min_kappa = *std::min_element(G.kappa.begin(), G.kappa.end());

  std::vector<double> a(m), hu(m), di(m);
  for (std::size_t i = 0; i < m; ++i) {
    const double w = std::pow(C.r[i], n - 1);
    const double e = std::exp(-0.25 * (C.y[i] * C.y[i] + C.r[i] * C.r[i]));
    const double XN = C.y[i] * std::sin(G.theta[i]) - C.r[i] * std::cos(G.theta[i]);
    const double defect = G.H[i] - 0.5 * XN;
    a[i] = w;
    hu[i] = w * e;
    di[i] = defect * defect * w * e;
  }
  D.area = trapezoid_curve(C, a);
  D.huisken = trapezoid_curve(C, hu);
  D.dissipation = trapezoid_curve(C, di);

  const double inf = std::numeric_limits<double>::infinity();
  D.Rmax = -inf;
  D.min_Py = D.min_Qy = D.min_lambda1_y = inf;
  const double ymax = 0.9 * std::abs(D.dbar);
  for (std::size_t i = 1; i + 1 < m; ++i) {
    const double y = C.y[i];
    if (std::abs(y) > ymax) continue;
    const double u = C.r[i], ct = std::cos(G.theta[i]);
    const double p = std::tan(G.theta[i]), uyy = G.kappa[i] / (ct * ct * ct), q = 1 + p * p;
    D.Rmax = std::max(D.Rmax, G.kappa[i] / G.lambda1[i]);
    if (y < 0) continue;
    const double Py = -uyy / u + p * p / (u * u);
    const double Qy = 2 * p / (q * q) * uyy / (u * u) - 2 * (p * p / q) * p / (u * u * u);
    const double l1y = -p * (u * q + u * u * uyy) / std::pow(u * u * q, 1.5);
    D.min_Py = std::min(D.min_Py, Py);
    D.min_Qy = std::min(D.min_Qy, Qy);
    D.min_lambda1_y = std::min(D.min_lambda1_y, l1y);
  }
  return D;
}

}  // namespace ovals
