#pragma once

#include <vector>

#include "ovals/numerics.hpp"

namespace ovals {

// Dense polynomial, coefficients in ascending powers.
struct Polynomial {
  std::vector<double> c;

  double operator()(double y) const;
  Polynomial derivative() const;
  int degree() const { return static_cast<int>(c.size()) - 1; }
};

Polynomial operator+(const Polynomial& a, const Polynomial& b);
Polynomial operator-(const Polynomial& a, const Polynomial& b);
Polynomial operator*(const Polynomial& a, const Polynomial& b);
Polynomial operator*(double s, const Polynomial& a);

// psi_{2m} with leading term y^{2m}, built by c_{k-1} = -2k(2k-1)/(m-k+1) c_k.
Polynomial hermite(int m);

// L[p] = p'' - (y/2) p' + p in coefficient arithmetic.
Polynomial apply_L(const Polynomial& p);

// Exact integral of p q e^{-y^2/4} over R from the Gaussian moments 2 sqrt(pi) (2k)!/k!.
double exact_inner(const Polynomial& p, const Polynomial& q);

struct HermiteBasis {
  int n_modes = 0;  // psi_0, psi_2, ..., psi_{2(n_modes-1)}
  std::vector<Polynomial> psi;
  std::vector<double> eigenvalues;  // 1 - m
  std::vector<double> norms2;       // exact ||psi_{2m}||^2
};

HermiteBasis make_basis(int n_modes);

// phi_bar(s) = f(2-|s|) / (f(2-|s|) + f(|s|-1)), f(t) = exp(-1/t) for t > 0.
double cutoff_bump(double s);
double cutoff_bump_prime(double s);
double cutoff_bump_second(double s);

struct CutoffProfile {
  double ell = 0.0;
  Samples phi;
};

CutoffProfile make_cutoff(const Grid& grid, double ell);

// v_bar = phi(y / ell) v with ell = dbar^exponent; v is read only where phi > 0.
struct Truncation {
  Samples vbar;
  CutoffProfile cutoff;
};
Truncation truncate(const Samples& v, const Grid& grid, double dbar, double exponent = 1.0 / 3.0);

// v = u / sqrt(2(n-1)) - 1 on the grid, zero where u vanishes (beyond the tips).
Samples deviation(const RadialProfile& profile);

struct SpectralSplit {
  double Vplus = 0.0, Vzero = 0.0, Vminus = 0.0;
  double alpha = 0.0;  // <v_bar, psi_2> / ||psi_2||^2
  double norm = 0.0;   // ||v_bar||
};

SpectralSplit project(const Samples& vbar, const Grid& grid, const HermiteBasis& basis);

struct ErrorTerms {
  double E1 = 0.0, E2 = 0.0, E3 = 0.0, total = 0.0;  // weighted L2 norms
  Samples e1, e2, e3;
};

// dbar_prime from the caller (centered difference over recorded steps).
ErrorTerms error_terms(const Samples& v, const Truncation& t, const Grid& grid, Dimension n,
                       double dbar, double dbar_prime, double exponent = 1.0 / 3.0);

enum class Dominant { Plus, Zero, Undetermined };

struct ModeSample {
  double tau = 0.0;
  SpectralSplit split;
};

struct ModeClassification {
  Dominant dominant = Dominant::Undetermined;
  double plus_rate = 0.0;    // slope of log V+ against tau
  double zero_power = 0.0;   // slope of log V0 against log|tau|
  double ratio_plus = 0.0;   // median (V0 + V-) / V+
  double ratio_zero = 0.0;   // median (V+ + V-) / V0
};

ModeClassification classify_modes(const std::vector<ModeSample>& series);

struct AlphaTrack {
  double slope_check = 0.0;  // median alpha' / alpha^2
  double alpha_fit = 0.0;    // median -4 tau alpha
};

// Throws RegimeError if alpha vanishes or changes sign, UsageError if fewer than 3 samples.
AlphaTrack track_alpha(const std::vector<double>& tau, const std::vector<double>& alpha);

}  // namespace ovals
