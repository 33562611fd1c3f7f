#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "ovals/errors.hpp"

namespace ovals {

using Samples = std::vector<double>;

inline constexpr double kPi = 3.14159265358979323846;

// Surface dimension of M_t in R^{n+1}.
struct Dimension {
  int n = 2;

  Dimension() = default;
  explicit Dimension(int value);

  double cylinder_radius() const { return std::sqrt(2.0 * (n - 1)); }
  double sphere_radius() const { return std::sqrt(2.0 * n); }
};

// Uniform symmetric grid on [-half_length, half_length]; count is odd so y=0 is a node.
struct Grid {
  double half_length = 20.0;
  int count = 4001;
  double h = 0.01;

  Grid() = default;
  Grid(double half_length, int count);

  double node(int i) const { return (i - count / 2) * h; }  // exactly odd about the center
  Samples nodes() const;
  int center() const { return count / 2; }

  bool operator==(const Grid& o) const {
    return half_length == o.half_length && count == o.count;
  }
};

Grid default_grid();

template <class F>
Samples sample(const Grid& g, F&& f) {
  Samples out(static_cast<std::size_t>(g.count));
  for (int i = 0; i < g.count; ++i) out[i] = f(g.node(i));
  return out;
}

inline double gaussian_weight(double y) { return std::exp(-0.25 * y * y); }

// Composite Simpson on a uniform grid with an odd number of nodes.
double simpson(std::span<const double> f, double h);

// Composite Simpson of f * g * e^{-y^2/4}.
double weighted_inner(const Samples& f, const Samples& g, const Grid& grid);
double weighted_norm(const Samples& f, const Grid& grid);

// Central differences inside, second-order one-sided at the ends.
Samples diff(const Samples& f, const Grid& grid, int order);

// Fornberg finite-difference weights for derivative `order` at x0 using nodes x.
std::vector<double> fd_weights(double x0, std::span<const double> x, int order);

struct RadialProfile {
  Grid grid;
  Samples u;
  Dimension n;
  bool symmetric = false;
  bool convex = false;
};

struct ConcavityReport {
  double max_second_difference = 0.0;
  bool is_concave = true;
  double tolerance = 0.0;
};

// tol = 10 h^2 max|u|
ConcavityReport concavity_report(const RadialProfile& profile);

// Generating curve (y(s), r(s), theta(s)) of an O(1)xO(n) surface.
// Orientation: starts at the tip with larger y and runs over r > 0 to the other tip,
// so theta goes from pi/2 to 3pi/2 on a closed convex curve (y_s = cos theta, r_s = sin theta).
struct ArcCurve {
  std::vector<double> y, r, theta;
  Dimension n;
  bool pinned_ends = false;  // open segment with fixed endpoints (cylinder tests)

  std::size_t size() const { return y.size(); }
  std::vector<double> arclength() const;  // chord-length cumulative, starts at 0
  double length() const;
  void fill_theta();                       // theta from the node polygon
  void validate() const;                   // throws InvalidState
};

// Monotone cubic (Fritsch-Carlson via boost pchip) on strictly increasing x.
class MonotoneCubic {
 public:
  MonotoneCubic() = default;
  MonotoneCubic(std::vector<double> x, std::vector<double> f);
  double operator()(double x) const;
  double prime(double x) const;
  double xmin() const { return lo_; }
  double xmax() const { return hi_; }

 private:
  struct Impl;
  std::shared_ptr<const Impl> impl_;
  double lo_ = 0.0, hi_ = 0.0;
};

// Cubic Hermite interpolation from values and slopes at strictly increasing nodes.
double hermite_eval(std::span<const double> x, std::span<const double> f,
                    std::span<const double> df, double xq);

// Four-point Lagrange interpolation on nonuniform nodes around xq (x increasing).
double lagrange4(std::span<const double> x, std::span<const double> f, double xq);

// Index i with x[i] <= xq < x[i+1], clamped to [0, size-2]; x increasing.
std::size_t bracket(std::span<const double> x, double xq);

}  // namespace ovals
