#include "ovals/foliation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace ovals {

namespace {

double uyy_ode(double y, double u, double p, int n) {
  return (1.0 + p * p) * (0.5 * y * p - 0.5 * u + (n - 1) / u);
}

std::string pair_msg(const char* what, double p, double q) {
  return std::string(what) + " between leaves " + std::to_string(p) + " and " + std::to_string(q);
}

// Leaf lower in the family must stay strictly below the next one on [y0, top].
void check_pair(const ShrinkerLeaf& lo, const ShrinkerLeaf& hi, double y0, double top) {
  for (std::size_t i = 0; i < lo.y.size(); ++i) {
    const double y = lo.y[i];
    if (y < y0 || y > top) continue;
    const double gap = leaf_point(hi, y).r - lo.u[i];
    if (!(gap > 0.0))
      throw FoliationViolation(pair_msg("leaves cross", lo.parameter, hi.parameter), lo.parameter,
                               hi.parameter);
  }
}

struct Node {
  double r, param, phi;
};

LeafHit interpolate(std::vector<Node> nodes, double r, LeafKind kind) {
  std::sort(nodes.begin(), nodes.end(), [](const Node& a, const Node& b) { return a.r < b.r; });
  std::vector<double> x, p, f;
  for (const auto& nd : nodes) {
    if (!x.empty() && !(nd.r > x.back())) continue;
    x.push_back(nd.r);
    p.push_back(nd.param);
    f.push_back(nd.phi);
  }
  LeafHit hit;
  hit.kind = kind;
  if (x.size() == 1) {
    hit.parameter = p[0];
    hit.phi = f[0];
  } else {
    hit.parameter = MonotoneCubic(x, p)(r);
    hit.phi = MonotoneCubic(x, f)(r);
  }
  hit.nu_y = -std::sin(hit.phi);
  hit.nu_r = std::cos(hit.phi);
  return hit;
}

}  // namespace

std::vector<double> geometric_grid(double lo, double hi, double ratio) {
  if (!(lo > 0 && hi >= lo && ratio > 1)) throw UsageError("geometric_grid: bad arguments");
  std::vector<double> g;
  for (double v = lo; v < hi * (1 - 1e-9); v *= ratio) g.push_back(v);
  g.push_back(hi);
  return g;
}

std::vector<double> default_a_grid(const AtlasSpec& s) {
  return geometric_grid(s.y0, s.a_max, s.ratio);
}

std::vector<double> default_b_grid(const AtlasSpec& s) {
  return geometric_grid(s.b_min * s.ratio, s.b0, s.ratio);
}

Foliation build_foliation(Dimension n, const std::vector<double>& a_grid,
                          const std::vector<double>& b_grid, double y0, const ShrinkerOptions& opt) {
  if (a_grid.empty() || !std::is_sorted(a_grid.begin(), a_grid.end()) ||
      std::adjacent_find(a_grid.begin(), a_grid.end()) != a_grid.end())
    throw UsageError("build_foliation: a_grid must be strictly increasing");
  if (a_grid.front() < y0) throw UsageError("build_foliation: a_grid must start at or above y0");
  if (!std::is_sorted(b_grid.begin(), b_grid.end()) ||
      std::adjacent_find(b_grid.begin(), b_grid.end()) != b_grid.end())
    throw UsageError("build_foliation: b_grid must be strictly increasing");
  if (!b_grid.empty() && (b_grid.front() <= 0 || b_grid.back() > opt.b0))
    throw UsageError("build_foliation: b_grid must lie in (0, b0]");

  Foliation F;
  F.n = n;
  F.y0 = y0;
  F.b0 = opt.b0;
  F.cylinder_radius = n.cylinder_radius();
  const double c = F.cylinder_radius;
  const double y_floor = std::max(0.0, y0 - 1.0);

  for (double a : a_grid) {
    F.caps.push_back(shoot_leaf(a, n, y_floor, opt));
    const auto& L = F.caps.back();
    if (L.y_lo() > y0 && a > y0)
      throw FoliationViolation(pair_msg("cap stops above y0", a, a), a, a);
  }
  for (double b : b_grid) F.trumpets.push_back(solve_trumpet(b, n, y_floor, trumpet_seed_height(b, n), opt));

  for (std::size_t k = 0; k + 1 < F.caps.size(); ++k)
    check_pair(F.caps[k], F.caps[k + 1], y0, F.caps[k].parameter);
  for (const auto& L : F.caps)
    for (std::size_t i = 0; i < L.y.size(); ++i)
      if (L.y[i] >= y0 && !(L.u[i] < c))
        throw FoliationViolation(pair_msg("cap reaches the cylinder", L.parameter, INFINITY),
                                 L.parameter, INFINITY);
  for (std::size_t k = 0; k + 1 < F.trumpets.size(); ++k) {
    const double top = std::min(F.trumpets[k].y_hi(), F.trumpets[k + 1].y_hi());
    check_pair(F.trumpets[k], F.trumpets[k + 1], y0, top);
  }
  if (!F.trumpets.empty()) {
    const auto& L = F.trumpets.front();
    for (std::size_t i = 0; i < L.y.size(); ++i)
      if (L.y[i] >= y0 && !(L.u[i] > c))
        throw FoliationViolation(pair_msg("trumpet reaches the cylinder", 0.0, L.parameter), 0.0,
                                 L.parameter);
  }
  return F;
}

LeafHit leaf_through(const Foliation& F, double y, double r) {
  if (!(y >= F.y0)) throw DomainError("leaf_through: y below y0");
  if (!(r > 0.0) || !(r < F.b0 * y)) throw DomainError("leaf_through: r outside (0, b0 y)");
  const double c = F.cylinder_radius;
  if (r == c) {
    LeafHit hit;
    hit.parameter = std::numeric_limits<double>::infinity();
    return hit;
  }

  if (r < c) {
    const auto& caps = F.caps;
    const std::size_t m = caps.size();
    auto value = [&](std::size_t k) { return caps[k].parameter <= y ? 0.0 : leaf_point(caps[k], y).r; };
    // first cap with u_a(y) >= r
    std::size_t lo = 0, hi = m;
    while (lo < hi) {
      const std::size_t mid = (lo + hi) / 2;
      if (value(mid) >= r) hi = mid; else lo = mid + 1;
    }
    const std::size_t k = lo;
    if (k == m) throw DomainError("leaf_through: point between the outermost cap and the cylinder");
    if (k == 0 && value(0) > r) throw DomainError("leaf_through: point below the innermost cap");
    std::vector<Node> nodes;
    const std::size_t j0 = k >= 2 ? k - 2 : 0, j1 = std::min(m - 1, k + 1);
    for (std::size_t j = j0; j <= j1; ++j) {
      if (caps[j].parameter <= y) continue;
      const auto P = leaf_point(caps[j], y);
      nodes.push_back({P.r, caps[j].parameter, P.phi});
    }
    if (k >= 1 && caps[k - 1].parameter <= y) nodes.push_back({0.0, y, -kPi / 2});  // leaf with tip at y
    return interpolate(std::move(nodes), r, LeafKind::Cap);
  }

  const auto& tr = F.trumpets;
  const std::size_t m = tr.size();
  if (m == 0) throw DomainError("leaf_through: atlas has no trumpets");
  auto value = [&](std::size_t k) {
    if (y > tr[k].y_hi()) throw DomainError("leaf_through: y beyond the trumpet seeds");
    return leaf_point(tr[k], y).r;
  };
  std::size_t lo = 0, hi = m;
  while (lo < hi) {
    const std::size_t mid = (lo + hi) / 2;
    if (value(mid) >= r) hi = mid; else lo = mid + 1;
  }
  const std::size_t k = lo;
  if (k == m) throw DomainError("leaf_through: point beyond the outermost trumpet");
  if (k == 0 && value(0) > r) throw DomainError("leaf_through: point between the cylinder and the innermost trumpet");
  std::vector<Node> nodes;
  const std::size_t j0 = k >= 2 ? k - 2 : 0, j1 = std::min(m - 1, k + 1);
  for (std::size_t j = j0; j <= j1; ++j) {
    const auto P = leaf_point(tr[j], y);
    nodes.push_back({P.r, tr[j].parameter, P.phi});
  }
  return interpolate(std::move(nodes), r, LeafKind::Trumpet);
}

double tan_phi_w(const Foliation& F, double y, double r) {
  const double phi = leaf_through(F, y, r).phi;
  return 2 * r * y * std::tan(phi) / (r * r - F.cylinder_radius * F.cylinder_radius);
}

DivergenceReport field_divergence(const std::function<double(double, double)>& phi, Dimension n,
                                  const Region& R, double skip_radius) {
  if (!(R.h > 0) || R.y_hi < R.y_lo || R.r_hi < R.r_lo) throw UsageError("field_divergence: bad region");
  if (R.r_lo - R.h <= 0.0) throw DomainError("field_divergence: region touches the axis");
  const double c = n.cylinder_radius();
  const int nn = n.n;
  auto Fy = [&](double y, double r) { return -std::exp(-(y * y + r * r) / 4) * std::sin(phi(y, r)); };
  auto Fr = [&](double y, double r) {
    return std::pow(r, nn - 1) * std::exp(-(y * y + r * r) / 4) * std::cos(phi(y, r));
  };
  auto Gr = [&](double y, double r) { return std::pow(r, nn - 1) * std::cos(phi(y, r)); };
  DivergenceReport rep;
  const int ny = static_cast<int>(std::floor((R.y_hi - R.y_lo) / R.h + 1e-9));
  const int nr = static_cast<int>(std::floor((R.r_hi - R.r_lo) / R.h + 1e-9));
  for (int i = 0; i <= ny; ++i) {
    const double y = R.y_lo + i * R.h;
    for (int j = 0; j <= nr; ++j) {
      const double r = R.r_lo + j * R.h;
      if (skip_radius > 0 && std::abs(r - c) <= skip_radius * (1 + 1e-9)) {
        ++rep.skipped;
        continue;
      }
      try {
        const double d = (Fy(y + R.h, r) - Fy(y - R.h, r)) / (2 * R.h) +
                         (Fr(y, r + R.h) - Fr(y, r - R.h)) / (2 * R.h * std::pow(r, nn - 1));
        const double p0 = phi(y, r);
        rep.samples.push_back({y, r, p0, d});
        rep.max_div = std::max(rep.max_div, std::abs(d));
        // e^{Phi} div(e^{-Phi} nu) = div nu - X.nu/2, with only nu differenced
        const double dnu = (std::sin(phi(y - R.h, r)) - std::sin(phi(y + R.h, r))) / (2 * R.h) +
                           (Gr(y, r + R.h) - Gr(y, r - R.h)) / (2 * R.h * std::pow(r, nn - 1));
        const double defect = dnu - 0.5 * (-y * std::sin(p0) + r * std::cos(p0));
        rep.max_scaled_div = std::max(rep.max_scaled_div, std::abs(defect));
        ++rep.points;
      } catch (const DomainError&) {
        ++rep.skipped;
      }
    }
  }
  return rep;
}

DivergenceReport calibration_divergence(const Foliation& F, const Region& R) {
  if (R.r_lo - R.h <= 0.0) throw DomainError("calibration_divergence: region touches the axis");
  auto phi = [&F](double y, double r) { return leaf_through(F, y, r).phi; };
  return field_divergence(phi, F.n, R, R.h);
}

namespace {

struct Seg {
  double y0, r0, y1, r1, my0, mr0, my1, mr1;
  void at(double t, double& y, double& r) const {
    const double t2 = t * t, t3 = t2 * t;
    const double h00 = 2 * t3 - 3 * t2 + 1, h10 = t3 - 2 * t2 + t, h01 = -2 * t3 + 3 * t2, h11 = t3 - t2;
    y = h00 * y0 + h10 * my0 + h01 * y1 + h11 * my1;
    r = h00 * r0 + h10 * mr0 + h01 * r1 + h11 * mr1;
  }
};

Seg segment(const ArcCurve& C, std::size_t j) {
  const double d = std::hypot(C.y[j + 1] - C.y[j], C.r[j + 1] - C.r[j]);
  return {C.y[j],
          C.r[j],
          C.y[j + 1],
          C.r[j + 1],
          d * std::cos(C.theta[j]),
          d * std::sin(C.theta[j]),
          d * std::cos(C.theta[j + 1]),
          d * std::sin(C.theta[j + 1])};
}

// Signed distance from P along nu to the first crossing of C at or after segment `hint`.
// Consecutive queries move monotonically along C, so the scan resumes from the last hit.
double normal_gap(const ArcCurve& C, double py, double pr, double ny, double nr, std::size_t& hint) {
  auto side = [&](double y, double r) { return (y - py) * nr - (r - pr) * ny; };
  if (pr == 0.0 && C.r[hint] == 0.0) return (C.y[hint] - py) * ny;  // along the axis, tip to tip
  for (std::size_t j = hint; j + 1 < C.size(); ++j) {
    const double s0 = side(C.y[j], C.r[j]), s1 = side(C.y[j + 1], C.r[j + 1]);
    if (s0 == 0.0) {
      hint = j;
      return (C.y[j] - py) * ny + (C.r[j] - pr) * nr;
    }
    if (s0 * s1 > 0) continue;
    const Seg S = segment(C, j);
    double a = 0, b = 1;
    const bool neg0 = s0 < 0;
    for (int it = 0; it < 60; ++it) {
      const double t = 0.5 * (a + b);
      double y, r;
      S.at(t, y, r);
      if ((side(y, r) < 0) == neg0) a = t; else b = t;
    }
    double y, r;
    S.at(0.5 * (a + b), y, r);
    hint = j;
    return (y - py) * ny + (r - pr) * nr;
  }
  throw FoliationViolation("normal line misses the neighbouring leaf", 0, 0);
}

}  // namespace

NormalVariation normal_variation(const Foliation& F, double a, double da, const ShrinkerOptions& opt) {
  if (F.caps.empty()) throw UsageError("normal_variation: atlas has no caps");
  if (!(da > 0 && da <= 1e-2 * a)) throw UsageError("normal_variation: need 0 < da <= a/100");
  if (a < F.caps.front().parameter || a + da > F.caps.back().parameter)
    throw UsageError("normal_variation: a outside the atlas range");
  const int nn = F.n.n;
  const double y_floor = std::max(0.0, F.y0 - 1.0);
  const ShrinkerLeaf L0 = shoot_leaf(a, F.n, y_floor, opt);
  const ShrinkerLeaf L1 = shoot_leaf(a + da, F.n, y_floor, opt);
  const ArcCurve& C0 = L0.curve;

  NormalVariation out;
  out.a = a;
  out.da = da;
  std::size_t hint = 0;
  std::vector<double> Vall(C0.size(), std::numeric_limits<double>::quiet_NaN());
  for (std::size_t k = 0; k < C0.size(); ++k) {
    if (C0.y[k] < F.y0) break;
    const double th = C0.theta[k];
    const double ny = std::sin(th), nr = -std::cos(th);
    double gap;
    try {
      gap = normal_gap(L1.curve, C0.y[k], C0.r[k], ny, nr, hint);
    } catch (const FoliationViolation&) {
      throw FoliationViolation(pair_msg(("normal line at y = " + std::to_string(C0.y[k]) + " misses").c_str(), a, a + da), a, a + da);
    }
    Vall[k] = gap / da;
    out.y.push_back(C0.y[k]);
    out.V.push_back(Vall[k]);
  }
  if (out.V.empty()) throw UsageError("normal_variation: leaf has no samples above y0");
  out.v_tip = out.V.front();
  out.v_min = *std::min_element(out.V.begin(), out.V.end());

  const double ds = L0.arc_ds;
  double worst = 0.0;
  for (std::size_t k = L0.arc_begin + 2; k + 2 < C0.size(); ++k) {
    if (std::isnan(Vall[k + 2])) break;
    const double y = C0.y[k], r = C0.r[k], th = C0.theta[k];
    const double ct = std::cos(th), st = std::sin(th);
    const double kappa = ((nn - 1) / r - 0.5 * r) * ct + 0.5 * y * st;
    const double A2 = kappa * kappa + (nn - 1) * ct * ct / (r * r);
    const double* v = &Vall[k];
    const double Vs = (-v[2] + 8 * v[1] - 8 * v[-1] + v[-2]) / (12 * ds);
    const double Vss = (-v[2] + 16 * v[1] - 30 * v[0] + 16 * v[-1] - v[-2]) / (12 * ds * ds);
    const double res = Vss + (nn - 1) * (st / r) * Vs - 0.5 * (y * ct + r * st) * Vs + (A2 + 0.5) * Vall[k];
    worst = std::max(worst, std::abs(res));
  }
  out.jacobi_residual = worst;
  return out;
}

double supersolution_margin(const ShrinkerLeaf& L, double y0) {
  const int n = L.n.n;
  double worst = std::numeric_limits<double>::quiet_NaN();
  for (std::size_t i = 0; i < L.y.size(); ++i) {
    const double y = L.y[i], u = L.u[i], p = L.uy[i];
    if (y < y0 || y > L.y_Ma) continue;
    const double q = 1 + p * p, uyy = uyy_ode(y, u, p, n);
    const double A2 = uyy * uyy / (q * q * q) + (n - 1) / (u * u * q);
    const double m = (n + 1) / 4.0 + A2 - (y * y + u * u) / 16.0;
    if (!(m <= worst)) worst = m;
  }
  return worst;
}

SqueezeReport squeeze_report(const Foliation& F, double delta0) {
  SqueezeReport rep;
  rep.min_w = std::numeric_limits<double>::infinity();
  rep.max_excess = -std::numeric_limits<double>::infinity();
  const double c2 = F.cylinder_radius * F.cylinder_radius;
  auto scan = [&](const ShrinkerLeaf& L) {
    for (std::size_t i = 0; i < L.y.size(); ++i) {
      const double y = L.y[i];
      if (y < F.y0 || std::abs(L.u[i] * L.u[i] - c2) > delta0) continue;
      rep.min_w = std::min(rep.min_w, L.w[i]);
      rep.max_excess = std::max(rep.max_excess, (L.w[i] - 2) * y * y);
      ++rep.samples;
    }
  };
  for (const auto& L : F.caps) scan(L);
  for (const auto& L : F.trumpets) scan(L);
  return rep;
}

}  // namespace ovals
