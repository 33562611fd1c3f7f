#include "ovals/huisken.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <string>

namespace ovals {

namespace {

double trapezoid(const Samples& f, int i0, int i1, double h) {
  if (i1 <= i0) return 0.0;
  double s = 0.5 * (f[i0] + f[i1]);
  for (int i = i0 + 1; i < i1; ++i) s += f[i];
  return s * h;
}

int snap(const Grid& g, double y) { return g.center() + static_cast<int>(std::lround(y / g.h)); }

}  // namespace

double cylinder_huisken(Dimension n) {
  const double k = 0.5 * (n.n - 1);
  return std::pow(2.0 * (n.n - 1) / std::exp(1.0), k) * 2.0 * std::sqrt(kPi);
}

double huisken_radial_factor(Dimension n, double u) { return std::pow(u, n.n - 1) * std::exp(-0.25 * u * u); }

HuiskenValue huisken_graph(const RadialProfile& p, Window w) {
  const Grid& g = p.grid;
  if (std::isinf(w.hi)) w.hi = g.half_length;
  if (w.lo < 0 || w.hi <= w.lo || w.hi > g.half_length + 1e-9 * g.h)
    throw UsageError("huisken window [" + std::to_string(w.lo) + ", " + std::to_string(w.hi) +
                     "] outside the grid");
  const int a = snap(g, w.lo), b = snap(g, w.hi);
  const int ma = snap(g, -w.lo), mb = snap(g, -w.hi);

  const Samples uy = diff(p.u, g, 1);
  Samples f(p.u.size(), 0.0);
  auto fill = [&](int i0, int i1) {
    for (int i = i0; i <= i1; ++i) {
      if (!(p.u[i] > 0)) throw DomainError("huisken_graph: u <= 0 at y = " + std::to_string(g.node(i)));
      f[i] = huisken_radial_factor(p.n, p.u[i]) * std::sqrt(1 + uy[i] * uy[i]) * gaussian_weight(g.node(i));
    }
  };
  fill(a, b);
  fill(mb, ma);
  return {trapezoid(f, a, b, g.h) + trapezoid(f, mb, ma, g.h), w};
}

std::vector<MonotonicitySample> monotonicity_series(const std::vector<FlowDiagnostics>& run) {
  std::vector<MonotonicitySample> out;
  const std::size_t m = run.size();
  if (m < 2) return out;
  for (std::size_t i = 0; i < m; ++i) {
    MonotonicitySample s;
    s.tau = run[i].time;
    s.H = run[i].huisken;
    s.dissipation = run[i].dissipation;
    if (m == 2) {
      s.dHdtau = (run[1].huisken - run[0].huisken) / (run[1].time - run[0].time);
    } else {
      const std::size_t j = std::clamp<std::size_t>(i, 1, m - 2) - 1;
      const double x[3] = {run[j].time, run[j + 1].time, run[j + 2].time};
      const auto w = fd_weights(s.tau, x, 1);
      s.dHdtau = w[0] * run[j].huisken + w[1] * run[j + 1].huisken + w[2] * run[j + 2].huisken;
    }
    s.gap = s.dHdtau + s.dissipation;
    out.push_back(s);
  }
  return out;
}

InnerOuterReport inner_outer_check(const RadialProfile& p, double L, double huisken_total,
                                   const InnerOuterOptions& opt) {
  const Grid& g = p.grid;
  if (!(L > 0) || 2 * L > g.half_length) throw UsageError("inner_outer_check: need 0 < 2L <= half_length");
  InnerOuterReport r;
  r.L = L;
  r.huisken = huisken_total;
  r.huisken_cylinder = cylinder_huisken(p.n);
  if (huisken_total > r.huisken_cylinder)
    throw HypothesisError("inner_outer_check: H(Gamma) = " + std::to_string(huisken_total) +
                          " exceeds the cylinder value " + std::to_string(r.huisken_cylinder));

  const double c = p.n.cylinder_radius();
  const int c0 = g.center();
  const int i4 = std::min(snap(g, 4 * L), g.count - 1);
  for (int i = c0; i <= i4; ++i) r.delta = std::max(r.delta, std::abs(p.u[i] - c));
  if (snap(g, 4 * L) > g.count - 1) r.delta = std::max(r.delta, c);  // unseen part counts as past the tip
  r.closeness_holds = r.delta < opt.delta0 && L >= opt.L0;

  // last node with a positive neighbour on the right, so central differences stay on the graph
  int end = c0;
  while (end + 2 < g.count && p.u[end + 2] > 0) ++end;
  r.support_end = g.node(end);

  const Samples uy = diff(p.u, g, 1);
  Samples grad(p.u.size(), 0.0), mass(p.u.size(), 0.0);
  for (int i = c0; i <= end; ++i) {
    const double e = gaussian_weight(g.node(i));
    grad[i] = uy[i] * uy[i] * e;
    mass[i] = (p.u[i] - c) * (p.u[i] - c) * e;
  }
  const int iL = std::min(snap(g, L), end), i2L = std::min(snap(g, 2 * L), end);
  r.lhs_grad = trapezoid(grad, c0, i2L, g.h);
  r.lhs_mass = trapezoid(mass, iL, i2L, g.h);
  r.rhs = trapezoid(mass, c0, iL, g.h);
  if (r.rhs > 0) {
    r.ratio_grad = r.lhs_grad / r.rhs;
    r.ratio_mass = r.lhs_mass / r.rhs;
  }
  return r;
}

InnerOuterReport inner_outer_check(const FlowState& state, const Grid& grid, double L,
                                   const InnerOuterOptions& opt) {
  return inner_outer_check(graph_profile(state, grid), L, diagnostics(state).huisken, opt);
}

PoincareResult weighted_poincare_check(const Samples& f, double ell) {
  const int m = static_cast<int>(f.size());
  if (m < 5 || m % 2 == 0 || !(ell > 0)) throw UsageError("weighted_poincare_check: need an odd count >= 5");
  const double h = ell / (m - 1);
  Samples a(f.size()), b(f.size()), c(f.size());
  std::vector<double> x(5);
  for (int i = 0; i < m; ++i) {
    const int j = std::clamp(i - 2, 0, m - 5);
    for (int k = 0; k < 5; ++k) x[k] = (j + k) * h;
    const auto w = fd_weights(i * h, x, 1);
    double fy = 0;
    for (int k = 0; k < 5; ++k) fy += w[k] * f[j + k];
    const double y = i * h, e = gaussian_weight(y);
    a[i] = fy * fy * e;
    b[i] = f[i] * f[i] * e;
    c[i] = y * y * f[i] * f[i] * e;
  }
  PoincareResult r;
  r.lhs = simpson(a, h) + 0.25 * simpson(b, h);
  r.rhs = 0.25 * ell * gaussian_weight(ell) * f.back() * f.back() + simpson(c, h) / 16;
  r.slack = r.lhs - r.rhs;
  return r;
}

PoincareResult weighted_poincare_check(const std::function<double(double)>& f,
                                       const std::function<double(double)>& fy, double ell) {
  using boost::math::quadrature::gauss_kronrod;
  auto q = [&](auto g) { return gauss_kronrod<double, 31>::integrate(g, 0.0, ell, 15, 1e-14); };
  PoincareResult r;
  const double grad = q([&](double y) { return fy(y) * fy(y) * gaussian_weight(y); });
  const double mass = q([&](double y) { return f(y) * f(y) * gaussian_weight(y); });
  const double moment = q([&](double y) { return y * y * f(y) * f(y) * gaussian_weight(y); });
  const double fl = f(ell);
  r.lhs = grad + 0.25 * mass;
  r.rhs = 0.25 * ell * gaussian_weight(ell) * fl * fl + moment / 16;
  r.slack = r.lhs - r.rhs;
  return r;
}

}  // namespace ovals
