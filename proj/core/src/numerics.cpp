#include "ovals/numerics.hpp"

#include <algorithm>
#include <limits>
#include <math.h>  // boost 1.74 pchip calls unqualified isnan
#include <boost/math/interpolators/pchip.hpp>
#include <string>

namespace ovals {

Dimension::Dimension(int value) : n(value) {
  if (value < 2) throw UsageError("dimension n must be >= 2, got " + std::to_string(value));
}

Grid::Grid(double half, int cnt) : half_length(half), count(cnt) {
  if (!(half > 0.0)) throw UsageError("grid half_length must be positive");
  if (cnt < 3 || cnt % 2 == 0) throw UsageError("grid count must be odd and >= 3");
  h = 2.0 * half / (cnt - 1);
}

Samples Grid::nodes() const {
  return sample(*this, [](double y) { return y; });
}

Grid default_grid() { return Grid(20.0, 4001); }

double simpson(std::span<const double> f, double h) {
  const std::size_t m = f.size();
  if (m < 3 || m % 2 == 0) throw UsageError("simpson needs an odd number (>= 3) of samples");
  double odd = 0.0, even = 0.0;
  for (std::size_t i = 1; i + 1 < m; i += 2) odd += f[i];
  for (std::size_t i = 2; i + 1 < m; i += 2) even += f[i];
  return h / 3.0 * (f.front() + f.back() + 4.0 * odd + 2.0 * even);
}

double weighted_inner(const Samples& f, const Samples& g, const Grid& grid) {
  const auto m = static_cast<std::size_t>(grid.count);
  if (f.size() != m || g.size() != m)
    throw UsageError("weighted_inner: samples do not match the grid");
  Samples prod(m);
  for (std::size_t i = 0; i < m; ++i) {
    const double y = grid.node(static_cast<int>(i));
    prod[i] = f[i] * g[i] * gaussian_weight(y);
  }
  return simpson(prod, grid.h);
}

double weighted_norm(const Samples& f, const Grid& grid) {
  return std::sqrt(std::max(0.0, weighted_inner(f, f, grid)));
}

std::vector<double> fd_weights(double x0, std::span<const double> x, int order) {
  // Fornberg (1988), only the top row for the requested order is kept.
  const int m = static_cast<int>(x.size());
  std::vector<std::vector<double>> c(m, std::vector<double>(order + 1, 0.0));
  double c1 = 1.0, c4 = x[0] - x0;
  c[0][0] = 1.0;
  for (int i = 1; i < m; ++i) {
    const int mn = std::min(i, order);
    double c2 = 1.0;
    const double c5 = c4;
    c4 = x[i] - x0;
    for (int j = 0; j < i; ++j) {
      const double c3 = x[i] - x[j];
      c2 *= c3;
      if (j == i - 1) {
        for (int k = mn; k >= 1; --k)
          c[i][k] = c1 * (k * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
        c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
      }
      for (int k = mn; k >= 1; --k) c[j][k] = (c4 * c[j][k] - k * c[j][k - 1]) / c3;
      c[j][0] = c4 * c[j][0] / c3;
    }
    c1 = c2;
  }
  std::vector<double> w(m);
  for (int i = 0; i < m; ++i) w[i] = c[i][order];
  return w;
}

namespace {

// Weights on integer offsets (in units of h) for the given derivative order.
std::vector<double> stencil(std::span<const int> offsets, int order) {
  std::vector<double> x(offsets.begin(), offsets.end());
  return fd_weights(0.0, x, order);
}

}  // namespace

Samples diff(const Samples& f, const Grid& grid, int order) {
  if (order < 1 || order > 3) throw UsageError("diff: order must be 1, 2 or 3");
  const int m = static_cast<int>(f.size());
  if (m != grid.count) throw UsageError("diff: samples do not match the grid");
  if (m < order + 2) throw UsageError("diff: too few nodes for the requested order");

  // central stencil half-width and one-sided width (second order accurate)
  const int half = (order + 1) / 2;
  const int one_sided = order + 2;
  std::vector<int> central;
  for (int k = -half; k <= half; ++k) central.push_back(k);
  const auto wc = stencil(central, order);
  const double scale = std::pow(grid.h, -order);

  Samples out(m, 0.0);
  for (int i = 0; i < m; ++i) {
    if (i - half >= 0 && i + half < m) {
      double acc = 0.0;
      for (int k = 0; k < static_cast<int>(central.size()); ++k) acc += wc[k] * f[i + central[k]];
      out[i] = acc * scale;
      continue;
    }
    // one-sided block anchored at the nearer boundary
    std::vector<int> offs;
    const int start = (i - half < 0) ? 0 : m - one_sided;
    for (int k = 0; k < one_sided; ++k) offs.push_back(start + k - i);
    const auto w = stencil(offs, order);
    double acc = 0.0;
    for (int k = 0; k < one_sided; ++k) acc += w[k] * f[i + offs[k]];
    out[i] = acc * scale;
  }
  return out;
}

ConcavityReport concavity_report(const RadialProfile& p) {
  const auto& u = p.u;
  if (u.size() < 3) throw UsageError("concavity_report needs >= 3 nodes");
  ConcavityReport rep;
  double umax = 0.0;
  for (double v : u) umax = std::max(umax, std::abs(v));
  rep.tolerance = 10.0 * p.grid.h * p.grid.h * umax;
  double worst = -std::numeric_limits<double>::infinity();
  const double ih2 = 1.0 / (p.grid.h * p.grid.h);
  for (std::size_t i = 1; i + 1 < u.size(); ++i)
    worst = std::max(worst, (u[i + 1] - 2.0 * u[i] + u[i - 1]) * ih2);
  rep.max_second_difference = worst;
  rep.is_concave = worst <= rep.tolerance;
  return rep;
}

std::vector<double> ArcCurve::arclength() const {
  std::vector<double> s(size(), 0.0);
  for (std::size_t i = 1; i < size(); ++i)
    s[i] = s[i - 1] + std::hypot(y[i] - y[i - 1], r[i] - r[i - 1]);
  return s;
}

double ArcCurve::length() const {
  const auto s = arclength();
  return s.empty() ? 0.0 : s.back();
}

void ArcCurve::fill_theta() {
  const std::size_t m = size();
  theta.assign(m, 0.0);
  if (m < 2) return;
  for (std::size_t i = 0; i < m; ++i) {
    const std::size_t a = (i == 0) ? 0 : i - 1;
    const std::size_t b = (i + 1 == m) ? m - 1 : i + 1;
    theta[i] = std::atan2(r[b] - r[a], y[b] - y[a]);
  }
  // unwrap so theta increases continuously along a convex curve
  for (std::size_t i = 1; i < m; ++i) {
    while (theta[i] - theta[i - 1] > kPi) theta[i] -= 2 * kPi;
    while (theta[i] - theta[i - 1] < -kPi) theta[i] += 2 * kPi;
  }
  if (!pinned_ends && theta.front() < 0.0)
    for (auto& t : theta) t += 2 * kPi;
}

void ArcCurve::validate() const {
  const std::size_t m = size();
  if (m < 5 || r.size() != m) throw InvalidState("curve needs >= 5 samples");
  if (!pinned_ends && (std::abs(r.front()) > 1e-12 || std::abs(r.back()) > 1e-12))
    throw InvalidState("curve endpoints must lie on the axis");
  for (std::size_t i = 1; i + 1 < m; ++i)
    if (!(r[i] > 0.0)) throw InvalidState("curve has r <= 0 at an interior sample");
  for (std::size_t i = 1; i < m; ++i)
    if (!(std::hypot(y[i] - y[i - 1], r[i] - r[i - 1]) > 0.0))
      throw InvalidState("curve arclength is not strictly monotone");
}

struct MonotoneCubic::Impl {
  boost::math::interpolators::pchip<std::vector<double>> spline;
};

MonotoneCubic::MonotoneCubic(std::vector<double> x, std::vector<double> f) {
  if (x.size() != f.size() || x.size() < 2) throw UsageError("MonotoneCubic: bad sizes");
  lo_ = x.front();
  hi_ = x.back();
  if (x.size() < 4) {
    // boost pchip needs 4 points; pad linearly
    while (x.size() < 4) {
      const std::size_t k = x.size();
      x.push_back(2 * x[k - 1] - x[k - 2]);
      f.push_back(2 * f[k - 1] - f[k - 2]);
    }
  }
  impl_ = std::make_shared<const Impl>(
      Impl{boost::math::interpolators::pchip<std::vector<double>>(std::move(x), std::move(f))});
}

double MonotoneCubic::operator()(double x) const {
  return impl_->spline(std::clamp(x, lo_, hi_));
}

double MonotoneCubic::prime(double x) const { return impl_->spline.prime(std::clamp(x, lo_, hi_)); }

std::size_t bracket(std::span<const double> x, double xq) {
  const std::size_t m = x.size();
  if (m < 2) return 0;
  auto it = std::upper_bound(x.begin(), x.end(), xq);
  std::size_t i = (it == x.begin()) ? 0 : static_cast<std::size_t>(it - x.begin()) - 1;
  return std::min(i, m - 2);
}

double hermite_eval(std::span<const double> x, std::span<const double> f,
                    std::span<const double> df, double xq) {
  const std::size_t i = bracket(x, xq);
  const double h = x[i + 1] - x[i];
  const double t = (xq - x[i]) / h;
  const double t2 = t * t, t3 = t2 * t;
  const double h00 = 2 * t3 - 3 * t2 + 1, h10 = t3 - 2 * t2 + t;
  const double h01 = -2 * t3 + 3 * t2, h11 = t3 - t2;
  return h00 * f[i] + h10 * h * df[i] + h01 * f[i + 1] + h11 * h * df[i + 1];
}

double lagrange4(std::span<const double> x, std::span<const double> f, double xq) {
  const std::size_t m = x.size();
  if (m < 4) throw UsageError("lagrange4 needs >= 4 nodes");
  std::size_t i = bracket(x, xq);
  std::size_t s = (i == 0) ? 0 : i - 1;
  if (s + 4 > m) s = m - 4;
  double acc = 0.0;
  for (std::size_t a = s; a < s + 4; ++a) {
    double l = 1.0;
    for (std::size_t b = s; b < s + 4; ++b)
      if (b != a) l *= (xq - x[b]) / (x[a] - x[b]);
    acc += l * f[a];
  }
  return acc;
}

}  // namespace ovals
