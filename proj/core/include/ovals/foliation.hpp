#pragma once

#include <functional>
#include <vector>

#include "ovals/shrinker.hpp"

namespace ovals {

// Caps Sigma_a inside the cylinder and trumpets ~Sigma_b outside, both sorted by parameter.
struct Foliation {
  Dimension n;
  double y0 = 5.0;
  double b0 = 1.0;
  double cylinder_radius = 0.0;
  std::vector<ShrinkerLeaf> caps;
  std::vector<ShrinkerLeaf> trumpets;
};

// lo * ratio^k for k = 0, 1, ... while below hi, then hi itself.
std::vector<double> geometric_grid(double lo, double hi, double ratio);

struct AtlasSpec {
  double y0 = 5.0;
  double a_max = 200.0;
  double b_min = 1e-3;  // open end: the grid starts one ratio above
  double b0 = 1.0;
  double ratio = 1.05;
};
std::vector<double> default_a_grid(const AtlasSpec& spec);
std::vector<double> default_b_grid(const AtlasSpec& spec);

// Solves every leaf and verifies pairwise disjointness for y >= y0 (throws FoliationViolation).
Foliation build_foliation(Dimension n, const std::vector<double>& a_grid,
                          const std::vector<double>& b_grid, double y0,
                          const ShrinkerOptions& opt = {});

enum class LeafKind { Cap, Trumpet, Cylinder };

struct LeafHit {
  LeafKind kind = LeafKind::Cylinder;
  double parameter = 0.0;  // a, b, or +inf for the cylinder
  double phi = 0.0;
  double nu_y = 0.0, nu_r = 1.0;  // (-sin phi, cos phi)
};

// Leaf through (y, r) by bracketing the sorted family at fixed y and monotone cubic
// interpolation in r.  Points outside the atlas coverage raise DomainError.
LeafHit leaf_through(const Foliation& fol, double y, double r);

// w read off the normal field: 2 r y tan(phi) / (r^2 - 2(n-1)).
double tan_phi_w(const Foliation& fol, double y, double r);

struct Region {
  double y_lo = 6.0, y_hi = 30.0;
  double r_lo = 0.3, r_hi = 1.3;
  double h = 0.1;
};

struct DivergenceSample {
  double y, r, phi, div;
};

struct DivergenceReport {
  double max_div = 0.0;
  double max_scaled_div = 0.0;  // max |div nu - X.nu/2| = e^{Phi}|div|, free of the Gaussian scale
  std::size_t points = 0;
  std::size_t skipped = 0;  // within a cell of the cylinder or off the atlas
  std::vector<DivergenceSample> samples;
};

// Axisymmetric divergence d_y(e^{-Phi} nu_y) + r^{1-n} d_r(r^{n-1} e^{-Phi} nu_r), Phi = |X|^2/4,
// by centered differences with the region spacing.
DivergenceReport calibration_divergence(const Foliation& fol, const Region& region);

// Same stencil for an arbitrary angle field phi(y, r) (negative controls).
DivergenceReport field_divergence(const std::function<double(double, double)>& phi, Dimension n,
                                  const Region& region, double skip_radius = -1.0);

struct NormalVariation {
  double a = 0.0, da = 0.0;
  std::vector<double> y, V;  // along Sigma_a from the tip down to y0
  double v_tip = 0.0;
  double v_min = 0.0;
  double jacobi_residual = 0.0;
};

// V = normal gap between Sigma_a and Sigma_{a+da} over da, and the residual of
// V_ss + (n-1)(r_s/r)V_s - (X.T/2)V_s + (|A|^2 + 1/2)V on the arclength part of Sigma_a.
NormalVariation normal_variation(const Foliation& fol, double a, double da,
                                 const ShrinkerOptions& opt = {});

// max of (n+1)/4 + |A|^2 - |X|^2/16 along a cap on [y0, y_Ma]; NaN when that range is empty
double supersolution_margin(const ShrinkerLeaf& cap, double y0);

struct SqueezeReport {
  double min_w = 0.0;
  double max_excess = 0.0;  // sup (w - 2) y^2
  std::size_t samples = 0;
};

// Leaf samples with y >= y0 and |r^2 - 2(n-1)| <= delta0.
SqueezeReport squeeze_report(const Foliation& fol, double delta0);

}  // namespace ovals
