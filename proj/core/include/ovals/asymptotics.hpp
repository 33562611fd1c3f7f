#pragma once

#include <string>
#include <vector>

#include "ovals/flow.hpp"
#include "ovals/shrinker.hpp"
#include "ovals/spectral.hpp"

namespace ovals {

// Initial data glued from the parabolic, intermediate and tip charts at tau0.
struct AnsatzSpec {
  Dimension n{2};
  double tau0 = -50.0;
  int nodes = 4000;
  double parabolic_exponent = 0.4;         // parabolic chart on |y| <= |tau0|^0.4
  double parabolic_blend_lo = 0.5;         // parabolic -> intermediate on [lo, hi] * |tau0|^0.4
  double parabolic_blend_hi = 1.5;
  double intermediate_gap_exponent = 0.3;  // intermediate chart up to z = sqrt 2 - |tau0|^-0.3
  double tip_core = 3.0;                   // pure bowl for rho = 2 lambda r <= tip_core
  double tip_drop = 0.0;                   // bowl tip at (1 - tip_drop) sqrt(2|tau0|)
  bool auto_tip = true;                    // choose tip_core and tip_drop with resolve_tip
};

void validate(const AnsatzSpec& spec);

// Parabolic and intermediate formulas in rescaled variables.
double parabolic_profile(Dimension n, double y, double tau);
double intermediate_profile(Dimension n, double z);  // sqrt(n-1) sqrt(2 - z^2)

// Symmetric convex generating curve; throws AnsatzError if the glued profile is not concave.
FlowState build_ansatz(const AnsatzSpec& spec);

// Smallest tip_drop in [0, 0.03] (then tip_core in 3, 4, 2) whose glue is concave with H maximal at
// the tip; falls back to the first concave glue. Returns the spec with auto_tip cleared.
AnsatzSpec resolve_tip(const AnsatzSpec& spec);

// Tip scale lambda = sqrt(|tau0|/2) and the glue radii, for reports.
struct AnsatzGeometry {
  double lambda = 0.0, dbar = 0.0;
  double parabolic_lo = 0.0, parabolic_hi = 0.0;  // y
  double tip_lo = 0.0, tip_hi = 0.0;              // r
};
AnsatzGeometry ansatz_geometry(const AnsatzSpec& spec);

// Rescaling X -> sigma X with tau -> tau + 2 log sigma moves the blow-up time. sigma is chosen
// so the constant-mode coefficient of v_bar matches its quasi-static value <v_bar^2/(2(1+v_bar)), 1>.
struct Recentering {
  double a0 = 0.0, a0_target = 0.0, sigma = 1.0;
};
Recentering recenter(FlowState& state, const Grid& grid, double cutoff_exponent, double cutoff_reach = 0.45);

// Exponent p' <= p with dbar^{p'} <= reach * dbar.
double capped_exponent(double dbar, double exponent, double reach);

struct RunOptions {
  double tau1 = -25.0;
  double dt = 1e-2;
  double record_every = 0.25;
  double recenter_every = 0.25;  // 0 disables
  double cutoff_exponent = 2.0 / 3.0;
  double cutoff_reach = 0.45;  // ell <= reach * dbar keeps the cutoff support off the tip
  Grid grid = default_grid();
  int modes = 7;
  bool keep_states = true;
};

struct RunRecord {
  double tau = 0.0;
  FlowDiagnostics diag;
  SpectralSplit split;
  double alpha = 0.0;        // minus the psi_2 coefficient of v_bar (so alpha ~ -1/(4 tau) > 0)
  double alpha_third = 0.0;  // same with the cutoff exponent 1/3
  double log_sigma = 0.0;    // accumulated recentering
};

struct AnsatzRun {
  AnsatzSpec spec;
  RunOptions options;
  std::vector<std::vector<FlowDiagnostics>> segments;  // per-step diagnostics between recenterings
  std::vector<RunRecord> records;
  std::vector<FlowState> states;  // one per record when keep_states
  std::size_t steps = 0;
};

AnsatzRun run_ansatz(const AnsatzSpec& spec, const RunOptions& opt = {});

// Per-run summaries.
std::vector<ModeSample> mode_series(const AnsatzRun& run, double tau_lo, double tau_hi);
AlphaTrack alpha_law(const AnsatzRun& run, double tau_lo, double tau_hi);

enum class RegionKind { Parabolic, Intermediate, Tip, Global };
std::string to_string(RegionKind kind);

struct RegionReport {
  RegionKind region = RegionKind::Parabolic;
  double sup_error = 0.0;
  std::vector<double> tau, error;  // per recorded state
};

// Largest error over [tau_ref, tau_end] divided by the error at tau_ref.
double growth_ratio(const RegionReport& report, double tau_ref, double tau_end);

struct ParabolicReport : RegionReport {
  double M = 2.0;
  std::vector<double> alpha_ratio;  // 4 |tau| alpha
};
// error = |tau| sup_{|y|<=M} |u - parabolic_profile|.
ParabolicReport verify_parabolic(const AnsatzRun& run, double M = 2.0);

struct CharacteristicTrace {
  double tau1 = 0.0, z1 = 0.0;
  std::vector<double> tau, z, vbar, w;
  double bookkeeping = 0.0;     // max |tau - tau1 - log(z^2 |tau| / L^2)| with z from RK4
  double max_violation = 0.0;   // max (vbar - w), positive means the barrier fails
};

struct IntermediateReport : RegionReport {
  double z_lo = 0.2, z_hi = 1.2;
  std::vector<CharacteristicTrace> traces;
  double L = 2.0;
  double M = 2.0;               // lower barrier checked on M <= y <= dbar
  double K = 0.0;               // smallest K with u(M, tau) >= c (1 - K/|tau|) over the run
  double K1 = 0.0;              // from the largest cap under u at the first state
  double a_branch = 0.0;        // caps below this bulge past the cylinder at y = M and are skipped
  std::vector<double> barrier_margin;  // min (u - u_{a(tau)}) per state
  int barrier_violations = 0;
};
IntermediateReport verify_intermediate(const AnsatzRun& run, double L = 2.0, double M = 2.0);

struct TipReport : RegionReport {
  double rho_max = 10.0;
  std::vector<double> lambda;      // H_bar at the tip
  std::vector<int> window_nodes;
};
// Tip rescaled by 2 H_tip so it is compared with the speed-1/2 profile Psi.
TipReport verify_tip(const AnsatzRun& run, const BowlProfile& bowl, double rho_max = 10.0);
// Single-state form (throws ResolutionError when fewer than 50 nodes fall in the window).
double tip_error(const FlowState& state, const BowlProfile& bowl, double rho_max, int* nodes = nullptr);

struct GlobalReport : RegionReport {
  std::vector<double> dbar_ratio, hmax_ratio, area_ratio, dbar_prime;
  bool hmax_below_dbar = true;
  bool dbar_growth_ok = true;
  double area_c = 0.0, area_C = 0.0;  // min / max of area / dbar
};
// error = |d_bar / sqrt(2|tau|) - 1|; the other relations are recorded alongside.
GlobalReport verify_global(const AnsatzRun& run, double tau_lo, double tau_hi);

}  // namespace ovals
