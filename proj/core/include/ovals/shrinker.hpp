#pragma once

#include <optional>
#include <vector>

#include "ovals/numerics.hpp"

namespace ovals {

// Solution of the speed-1/2 translator ODE psi''/(1+psi'^2) + (n-1)psi'/rho = 1/2,
// psi(0)=psi'(0)=0.  Sampled on rho_k = k*h.
struct BowlProfile {
  Dimension n;
  double h = 1e-3;
  std::vector<double> rho, psi, dpsi, ddpsi;
  double C0 = 0.0;  // additive constant of rho^2/(4(n-1)) - 2 log rho + C0

  double value(double r) const;
  double slope(double r) const;
  double rho_max() const { return rho.back(); }
};

BowlProfile solve_bowl(Dimension n, double rho_max, double h = 1e-3);

// Tip chart psi(rho, a): same ODE with the eps (rho psi' - psi) term, eps = 1/(2a^2).
struct TipCap {
  double a = 0.0;
  double eps = 0.0;
  double M = 0.0;
  Dimension n;
  double h = 1e-3;
  std::vector<double> rho, psi, dpsi;

  double y_of(std::size_t k) const { return a - psi[k] / a; }
  double u_of(std::size_t k) const { return rho[k] / a; }
  double y_M() const { return a - psi.back() / a; }
  double value(double r) const;
  double slope(double r) const;
};

TipCap solve_tip_cap(double a, double M, Dimension n, double h = 1e-3);

// Taylor seed psi = p2 rho^2 + p4 rho^4 at the axis.
struct TipSeed {
  double p2, p4;
};
TipSeed tip_seed(Dimension n, double eps);

struct ShrinkerOptions {
  double M = 30.0;          // cap extent in rho (clipped to a*sqrt(2(n-1))/2 for small a)
  double h = 1e-3;          // RK4 step (arclength / rho)
  int store_every = 10;     // keep every k-th integration sample
  double b0 = 1.0;          // largest admissible trumpet slope
};

// Stationary leaf of the shrinker foliation: cap Sigma_a or trumpet ~Sigma_b.
// Graph samples are sorted by increasing y.
struct ShrinkerLeaf {
  enum class Kind { Cap, Trumpet };
  Kind kind = Kind::Cap;
  double parameter = 0.0;  // a for caps, b for trumpets
  Dimension n;
  std::vector<double> y, u, uy, w, residual;
  ArcCurve curve;          // caps: from the tip along the leaf; trumpets: from Y inward
  std::optional<TipCap> cap;
  double y_star = 0.0;     // smallest y reached
  double y_Ma = 0.0;       // caps: end of the tip chart
  bool terminated_early = false;
  double step = 1e-3;
  std::size_t arc_begin = 0;  // caps: first curve sample of the arclength part (spacing arc_ds)
  double arc_ds = 0.0;

  double u_at(double yq) const;   // cubic Hermite in y (u_yy for the slope from the ODE)
  double uy_at(double yq) const;
  double y_lo() const { return y.front(); }
  double y_hi() const { return y.back(); }
};

struct LeafPoint {
  double r = 0.0;
  double uy = 0.0;
  double phi = 0.0;  // atan(u_y); -pi/2 at a cap tip
};

// Leaf at height y: graph chart below y_Ma, tip chart above.  Throws DomainError off the leaf.
LeafPoint leaf_point(const ShrinkerLeaf& leaf, double y);

ShrinkerLeaf shoot_leaf(double a, Dimension n, double y_min, const ShrinkerOptions& opt = {});
ShrinkerLeaf solve_trumpet(double b, Dimension n, double y_lo, double Y,
                           const ShrinkerOptions& opt = {});

// Default seed height for a trumpet of slope b: deep enough that bY >> cylinder radius.
double trumpet_seed_height(double b, Dimension n);

// Residual of u''/(1+u'^2) - (y/2)u' + u/2 - (n-1)/u.
double shrinker_residual(double y, double u, double uy, double uyy, Dimension n);

double w_value(double y, double u, double uy, Dimension n);
double w_ode_rhs(double y, double u, double uy, double w, Dimension n);

struct WDiagnostic {
  std::vector<double> y, w;
  double ode_residual = 0.0;
  double tip_limit = 0.0;       // caps only (NaN for trumpets)
  double clip_lo = 0.0, clip_hi = 0.0;
  bool clipped = false;
};

// `window_margin`: samples with |u^2 - 2(n-1)| below this are dropped from the window.
WDiagnostic w_diagnostic(const ShrinkerLeaf& leaf, double window_margin = 0.05);

struct ExpansionFit {
  double window_lo = 0.0, window_hi = 0.0;
  double coefficient = 0.0;     // kappa in sqrt(2(n-1))(1 - kappa (y^2-2)/(2a^2))
  double inner_sup_residual = 0.0;
  double outer_sup_residual = 0.0;
  double decay_exponent = 0.0;  // filled by expansion_sweep
};

ExpansionFit fit_expansions(const ShrinkerLeaf& leaf, double window_lo, double window_hi);

// Fits for several caps; decay exponents from consecutive a-doublings of inner residual.
std::vector<ExpansionFit> expansion_sweep(const std::vector<ShrinkerLeaf>& leaves,
                                          double window_lo, double window_hi);

// Least-squares slope of log|f| against log x.
double loglog_slope(const std::vector<double>& x, const std::vector<double>& f);

}  // namespace ovals
