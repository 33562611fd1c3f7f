#include "ovals/spectral.hpp"

#include <algorithm>
#include <cmath>

namespace ovals {

namespace {

double median(std::vector<double> v) {
  if (v.empty()) return std::nan("");
  const std::size_t k = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + k, v.end());
  if (v.size() % 2) return v[k];
  const double hi = v[k];
  return 0.5 * (hi + *std::max_element(v.begin(), v.begin() + k));
}

// slope of the least-squares line through (x, f)
double ls_slope(const std::vector<double>& x, const std::vector<double>& f) {
  const double n = double(x.size());
  double sx = 0, sf = 0, sxx = 0, sxf = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sf += f[i];
    sxx += x[i] * x[i];
    sxf += x[i] * f[i];
  }
  return (n * sxf - sx * sf) / (n * sxx - sx * sx);
}

double f_exp(double t) { return t > 0 ? std::exp(-1.0 / t) : 0.0; }
double f_exp1(double t) { return t > 0 ? f_exp(t) / (t * t) : 0.0; }
double f_exp2(double t) { return t > 0 ? f_exp(t) * (1.0 / (t * t * t * t) - 2.0 / (t * t * t)) : 0.0; }

}  // namespace

double Polynomial::operator()(double y) const {
  double v = 0.0;
  for (std::size_t k = c.size(); k-- > 0;) v = v * y + c[k];
  return v;
}

Polynomial Polynomial::derivative() const {
  Polynomial d;
  for (std::size_t k = 1; k < c.size(); ++k) d.c.push_back(double(k) * c[k]);
  if (d.c.empty()) d.c.push_back(0.0);
  return d;
}

Polynomial operator+(const Polynomial& a, const Polynomial& b) {
  Polynomial s;
  s.c.assign(std::max(a.c.size(), b.c.size()), 0.0);
  for (std::size_t k = 0; k < a.c.size(); ++k) s.c[k] += a.c[k];
  for (std::size_t k = 0; k < b.c.size(); ++k) s.c[k] += b.c[k];
  return s;
}

Polynomial operator*(double s, const Polynomial& a) {
  Polynomial p = a;
  for (auto& v : p.c) v *= s;
  return p;
}

Polynomial operator-(const Polynomial& a, const Polynomial& b) { return a + (-1.0) * b; }

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  Polynomial p;
  p.c.assign(a.c.size() + b.c.size() - 1, 0.0);
  for (std::size_t i = 0; i < a.c.size(); ++i)
    for (std::size_t j = 0; j < b.c.size(); ++j) p.c[i + j] += a.c[i] * b.c[j];
  return p;
}

Polynomial hermite(int m) {
  if (m < 0) throw UsageError("hermite: m must be >= 0");
  Polynomial p;
  p.c.assign(std::size_t(2 * m + 1), 0.0);
  double ck = 1.0;
  p.c[2 * m] = ck;
  for (int k = m; k >= 1; --k) {
    ck = -(2.0 * k * (2.0 * k - 1.0) / (m - k + 1.0)) * ck;
    p.c[std::size_t(2 * (k - 1))] = ck;
  }
  return p;
}

Polynomial apply_L(const Polynomial& p) {
  const Polynomial d1 = p.derivative();
  Polynomial yd1;
  yd1.c.assign(d1.c.size() + 1, 0.0);
  for (std::size_t k = 0; k < d1.c.size(); ++k) yd1.c[k + 1] = 0.5 * d1.c[k];
  return d1.derivative() - yd1 + p;
}

double exact_inner(const Polynomial& p, const Polynomial& q) {
  const Polynomial pq = p * q;
  double s = 0.0, moment = 2.0 * std::sqrt(kPi);  // k = 0
  for (std::size_t k = 0; 2 * k < pq.c.size(); ++k) {
    if (k > 0) moment *= 2.0 * (2.0 * k - 1.0);  // (2k)!/k! from (2k-2)!/(k-1)!
    s += pq.c[2 * k] * moment;
  }
  return s;
}

HermiteBasis make_basis(int n_modes) {
  if (n_modes < 2) throw UsageError("make_basis: need at least psi_0 and psi_2");
  HermiteBasis B;
  B.n_modes = n_modes;
  for (int m = 0; m < n_modes; ++m) {
    B.psi.push_back(hermite(m));
    B.eigenvalues.push_back(1.0 - m);
    B.norms2.push_back(exact_inner(B.psi.back(), B.psi.back()));
  }
  return B;
}

double cutoff_bump(double s) {
  s = std::abs(s);
  if (s <= 1.0) return 1.0;
  if (s >= 2.0) return 0.0;
  const double A = f_exp(2.0 - s), Bv = f_exp(s - 1.0);
  return A / (A + Bv);
}

double cutoff_bump_prime(double s) {
  const double sg = s < 0 ? -1.0 : 1.0;
  s = std::abs(s);
  if (s <= 1.0 || s >= 2.0) return 0.0;
  const double A = f_exp(2.0 - s), Bv = f_exp(s - 1.0);
  const double A1 = -f_exp1(2.0 - s), B1 = f_exp1(s - 1.0);
  return sg * (A1 * Bv - A * B1) / ((A + Bv) * (A + Bv));
}

double cutoff_bump_second(double s) {
  s = std::abs(s);
  if (s <= 1.0 || s >= 2.0) return 0.0;
  const double A = f_exp(2.0 - s), Bv = f_exp(s - 1.0);
  const double A1 = -f_exp1(2.0 - s), B1 = f_exp1(s - 1.0);
  const double A2 = f_exp2(2.0 - s), B2 = f_exp2(s - 1.0);
  const double N = A1 * Bv - A * B1, D = (A + Bv) * (A + Bv);
  const double N1 = A2 * Bv - A * B2, D1 = 2.0 * (A + Bv) * (A1 + B1);
  return (N1 * D - N * D1) / (D * D);
}

CutoffProfile make_cutoff(const Grid& grid, double ell) {
  if (!(ell > 0)) throw UsageError("make_cutoff: ell must be positive");
  CutoffProfile c;
  c.ell = ell;
  c.phi = sample(grid, [ell](double y) { return cutoff_bump(y / ell); });
  return c;
}

Truncation truncate(const Samples& v, const Grid& grid, double dbar, double exponent) {
  if (v.size() != std::size_t(grid.count)) throw UsageError("truncate: samples do not match the grid");
  if (!(dbar > 0)) throw UsageError("truncate: dbar must be positive");
  const double ell = std::pow(dbar, exponent);
  if (ell > 0.5 * grid.half_length) throw UsageError("truncate: ell exceeds half the domain");
  Truncation t;
  t.cutoff = make_cutoff(grid, ell);
  t.vbar.assign(v.size(), 0.0);
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (t.cutoff.phi[i] == 0.0) continue;
    if (!std::isfinite(v[i])) throw UsageError("truncate: v undefined inside the cutoff support");
    t.vbar[i] = t.cutoff.phi[i] * v[i];
  }
  return t;
}

Samples deviation(const RadialProfile& P) {
  const double c = P.n.cylinder_radius();
  Samples v(P.u.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = P.u[i] > 0 ? P.u[i] / c - 1.0 : std::nan("");
  return v;
}

SpectralSplit project(const Samples& vbar, const Grid& grid, const HermiteBasis& B) {
  const auto p0 = sample(grid, [&](double y) { return B.psi[0](y); });
  const auto p2 = sample(grid, [&](double y) { return B.psi[1](y); });
  const double n0 = weighted_inner(p0, p0, grid), n2 = weighted_inner(p2, p2, grid);
  const double a0 = weighted_inner(vbar, p0, grid), a2 = weighted_inner(vbar, p2, grid);
  SpectralSplit s;
  const double total = weighted_inner(vbar, vbar, grid);
  s.norm = std::sqrt(total);
  s.Vplus = std::abs(a0) / std::sqrt(n0);
  s.Vzero = std::abs(a2) / std::sqrt(n2);
  s.alpha = a2 / n2;
  const double rest = total - s.Vplus * s.Vplus - s.Vzero * s.Vzero;
  if (rest < -1e-9 * total - 1e-14) throw QuadratureFailure("project: negative V- radicand");
  s.Vminus = std::sqrt(std::max(0.0, rest));
  return s;
}

ErrorTerms error_terms(const Samples& v, const Truncation& t, const Grid& grid, Dimension n,
                       double dbar, double dbar_prime, double exponent) {
  const std::size_t m = v.size();
  if (m != std::size_t(grid.count) || t.vbar.size() != m) throw UsageError("error_terms: size mismatch");
  // v outside the support is irrelevant; zero it so differences stay finite
  Samples vz(m, 0.0);
  const double ell = t.cutoff.ell;
  for (std::size_t i = 0; i < m; ++i)
    if (std::abs(grid.node(int(i))) <= 2 * ell + 3 * grid.h && std::isfinite(v[i])) vz[i] = v[i];
  const auto vy = diff(vz, grid, 1), vyy = diff(vz, grid, 2);
  const double k = 2.0 * (n.n - 1);
  const double drift = 0.5 - exponent * dbar_prime / dbar;
  ErrorTerms E;
  E.e1.assign(m, 0.0);
  E.e2.assign(m, 0.0);
  E.e3.assign(m, 0.0);
  Samples tot(m, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    const double phi = t.cutoff.phi[i];
    if (phi == 0.0) continue;
    const double y = grid.node(int(i)), s = y / ell;
    const double py = cutoff_bump_prime(s) / ell, pyy = cutoff_bump_second(s) / (ell * ell);
    E.e1[i] = -vz[i] * t.vbar[i] / (2 * (1 + vz[i])) - phi * k * vy[i] * vy[i] * vyy[i] / (1 + k * vy[i] * vy[i]);
    E.e2[i] = (-pyy + drift * y * py) * vz[i];
    E.e3[i] = -2 * py * vy[i];
    tot[i] = E.e1[i] + E.e2[i] + E.e3[i];
  }
  E.E1 = weighted_norm(E.e1, grid);
  E.E2 = weighted_norm(E.e2, grid);
  E.E3 = weighted_norm(E.e3, grid);
  E.total = weighted_norm(tot, grid);
  return E;
}

ModeClassification classify_modes(const std::vector<ModeSample>& S) {
  ModeClassification out;
  if (S.size() < 3 || S.back().tau - S.front().tau < 10.0) return out;
  std::vector<double> tau, lp, l0, ltau, rp, rz;
  for (const auto& s : S) {
    const auto& q = s.split;
    if (!(q.Vplus > 0) || !(q.Vzero > 0) || !(s.tau < 0)) continue;
    tau.push_back(s.tau);
    lp.push_back(std::log(q.Vplus));
    l0.push_back(std::log(q.Vzero));
    ltau.push_back(std::log(-s.tau));
    rp.push_back((q.Vzero + q.Vminus) / q.Vplus);
    rz.push_back((q.Vplus + q.Vminus) / q.Vzero);
  }
  if (tau.size() < 3) return out;
  out.plus_rate = ls_slope(tau, lp);
  out.zero_power = ls_slope(ltau, l0);
  out.ratio_plus = median(rp);
  out.ratio_zero = median(rz);
  // exponential growth e^{tau} of V+ versus algebraic |tau|^{-1} decay of V0
  if (out.ratio_plus < 1.0 && out.plus_rate > 0.5)
    out.dominant = Dominant::Plus;
  else if (out.ratio_zero < 1.0 && out.zero_power < 0.0 && out.zero_power > -2.0)
    out.dominant = Dominant::Zero;
  return out;
}

AlphaTrack track_alpha(const std::vector<double>& tau, const std::vector<double>& alpha) {
  if (tau.size() != alpha.size() || tau.size() < 3) throw UsageError("track_alpha: need >= 3 samples");
  for (std::size_t i = 0; i < alpha.size(); ++i)
    if (!(alpha[i] * alpha[0] > 0)) throw RegimeError("track_alpha: alpha vanishes or changes sign");
  std::vector<double> slope, fit;
  for (std::size_t i = 0; i < tau.size(); ++i) fit.push_back(-4.0 * tau[i] * alpha[i]);
  for (std::size_t i = 1; i + 1 < tau.size(); ++i) {
    const double x[3] = {tau[i - 1], tau[i], tau[i + 1]};
    const auto w = fd_weights(tau[i], x, 1);
    const double da = w[0] * alpha[i - 1] + w[1] * alpha[i] + w[2] * alpha[i + 1];
    slope.push_back(da / (alpha[i] * alpha[i]));
  }
  return {median(slope), median(fit)};
}

}  // namespace ovals
