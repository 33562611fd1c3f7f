#pragma once

#include <functional>
#include <limits>
#include <vector>

#include "ovals/flow.hpp"
#include "ovals/numerics.hpp"

namespace ovals {

// Reduced Huisken functional of an infinite cylinder of radius sqrt(2(n-1)).
double cylinder_huisken(Dimension n);

// Window a < |y| < b; both halves of the line are counted.
struct Window {
  double lo = 0.0;
  double hi = std::numeric_limits<double>::infinity();
};

struct HuiskenValue {
  double value = 0.0;
  Window window;
};

// Trapezoid on the grid nodes inside the window (window ends are snapped to nodes),
// so values over adjacent windows add up exactly.
HuiskenValue huisken_graph(const RadialProfile& profile, Window window = {});

// u^{n-1} e^{-u^2/4}, the u-dependent factor of the integrand.
double huisken_radial_factor(Dimension n, double u);

struct MonotonicitySample {
  double tau = 0.0;
  double H = 0.0;
  double dHdtau = 0.0;       // finite difference over the recorded series
  double dissipation = 0.0;  // integral of (H - X.N/2)^2 against the Gaussian
  double gap = 0.0;          // dHdtau + dissipation
};

std::vector<MonotonicitySample> monotonicity_series(const std::vector<FlowDiagnostics>& run);

struct InnerOuterOptions {
  double delta0 = 0.05;
  double L0 = 4.0;
};

struct InnerOuterReport {
  double L = 0.0;
  double delta = 0.0;        // sup over |y| <= 4L of |u - sqrt(2(n-1))|, u = 0 past the tip
  bool closeness_holds = false;
  double huisken = 0.0, huisken_cylinder = 0.0;
  double lhs_grad = 0.0;     // int_0^{2L} v_y^2 e^{-y^2/4}
  double lhs_mass = 0.0;     // int_L^{2L} v^2 e^{-y^2/4}
  double rhs = 0.0;          // int_0^L v^2 e^{-y^2/4}
  double ratio_grad = 0.0, ratio_mass = 0.0;
  double support_end = 0.0;  // integrals stop at the last node before the tip
};

// v = u - sqrt(2(n-1)) on 0 <= y < tip. `huisken_total` is the functional of the whole surface.
// Throws HypothesisError if huisken_total exceeds the cylinder value.
InnerOuterReport inner_outer_check(const RadialProfile& profile, double L, double huisken_total,
                                   const InnerOuterOptions& opt = {});
InnerOuterReport inner_outer_check(const FlowState& state, const Grid& grid, double L,
                                   const InnerOuterOptions& opt = {});

struct PoincareResult {
  double lhs = 0.0, rhs = 0.0, slack = 0.0;
};

// lhs = int f_y^2 e + 1/4 int f^2 e, rhs = 1/4 l e^{-l^2/4} f(l)^2 + 1/16 int y^2 f^2 e on [0, l].
// Sampled form: f on uniform nodes y_i = i l / (size - 1), size odd.
PoincareResult weighted_poincare_check(const Samples& f, double ell);
// Exact form by adaptive Gauss-Kronrod.
PoincareResult weighted_poincare_check(const std::function<double(double)>& f,
                                       const std::function<double(double)>& fy, double ell);

}  // namespace ovals
