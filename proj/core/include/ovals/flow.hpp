#pragma once

#include <functional>
#include <vector>

#include "ovals/numerics.hpp"

namespace ovals {

// Generating curve at time tau (rescaled runs) or t (unrescaled runs).
struct FlowState {
  double time = 0.0;
  ArcCurve curve;
  bool symmetric = false;  // O(1) reflection y -> -y enforced after each step
};

enum class Stepper { Imex, ExplicitRK2 };

struct FlowOptions {
  Stepper stepper = Stepper::Imex;
  double cfl = 0.2;  // explicit stepper: dt <= cfl h^2 / max(1, H_max^2)
  bool redistribute = true;
};

// Pointwise geometry of a closed (or pinned) generating curve.
struct CurveGeometry {
  std::vector<double> theta;    // tangent angle, pi/2 at the first tip
  std::vector<double> kappa;    // curve curvature theta_s (lambda_n)
  std::vector<double> lambda1;  // rotational curvature -cos(theta)/r, kappa at the tips
  std::vector<double> H;        // kappa + (n-1) lambda1, n kappa at the tips
  double ds = 0.0;              // mean node spacing
};

CurveGeometry curve_geometry(const ArcCurve& curve);

// H per node; throws InvalidState if an interior node has r <= 0.
std::vector<double> mean_curvature(const ArcCurve& curve);

// Largest explicit step allowed by the CFL rule.
double explicit_step_bound(const ArcCurve& curve, double cfl = 0.2);

// One step of rescaled flow (normal speed H - X.N/2, outward N) or plain MCF (speed H).
// Throws StepRejected if nodes fold or leave r > 0; the caller halves the step.
FlowState step_rescaled(const FlowState& state, double dtau, const FlowOptions& opt = {});
FlowState step_unrescaled(const FlowState& state, double dt, const FlowOptions& opt = {});

enum class FlowKind { Rescaled, Unrescaled };

// Advance to time `until` with steps of at most dt, halving on rejection.
// `observe` runs after every accepted step.
FlowState evolve(FlowState state, FlowKind kind, double until, double dt, const FlowOptions& opt = {},
                 const std::function<void(const FlowState&)>& observe = {});

// Uniform arclength nodes (4-point Lagrange with reflected ghosts at axis ends).
void redistribute(ArcCurve& curve);
// Average the curve with its mirror image y -> -y (node i pairs with node m-1-i).
void symmetrize(ArcCurve& curve);

// Sphere of radius R centered at the origin, closed to the axis at both ends.
ArcCurve sphere_curve(Dimension n, double R, int nodes);
// Cylinder segment r = R on [-half_length, half_length] with pinned ends.
ArcCurve cylinder_segment(Dimension n, double R, double half_length, int nodes);

// Blow-up change of variables X_bar = X / sqrt(-t), tau = -log(-t).
FlowState to_rescaled(const FlowState& unrescaled);
FlowState to_unrescaled(const FlowState& rescaled);

// Upper half of the curve as a graph r = u(y), y ascending, away from the tips.
struct GraphSamples {
  std::vector<double> y, u, uy, uyy;
};
GraphSamples graph_samples(const ArcCurve& curve);

// u on a uniform grid by Lagrange interpolation in y; zero beyond the tips.
RadialProfile graph_profile(const FlowState& state, const Grid& grid);

struct FlowDiagnostics {
  double time = 0.0;
  double dbar = 0.0;          // tip coordinate (first node)
  double Hmax = 0.0;
  double Htip = 0.0;
  std::size_t argmax = 0;      // node index of max H
  bool argmax_at_tip = false;  // max attained at one of the two axis nodes
  double area = 0.0;           // reduced area: integral of r^{n-1} ds
  double Rmax = 0.0;           // sup lambda_n / lambda_1 on |y| <= 0.9 dbar
  double min_Py = 0.0, min_Qy = 0.0, min_lambda1_y = 0.0;  // on 0 <= y <= 0.9 dbar
  double min_kappa = 0.0;      // convexity of the generating curve
  double huisken = 0.0;        // integral of r^{n-1} e^{-|X|^2/4} ds
  double dissipation = 0.0;    // integral of (H - X.N/2)^2 r^{n-1} e^{-|X|^2/4} ds
};

FlowDiagnostics diagnostics(const FlowState& state);

}  // namespace ovals
