#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <map>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "ovals/acceptance.hpp"
#include "ovals/foliation.hpp"
#include "ovals/huisken.hpp"
#include "ovals/io.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace ovals;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct Globals {
  int n = 2;
  std::string out = ".";
  std::string config;
  // filled from --config, overridden by explicit flags
  json cfg = json::object();
};

fs::path out_path(const Globals& g, const std::string& name) {
  fs::create_directories(g.out);
  return fs::path(g.out) / name;
}

void write_json(const fs::path& p, const json& j) {
  std::ofstream(p) << j.dump(2) << '\n';
  std::cout << "wrote " << p.string() << '\n';
}

void write_table(const fs::path& p, const CsvTable& t) {
  write_csv_file(p.string(), t);
  std::cout << "wrote " << p.string() << " (" << t.rows.size() << " rows)\n";
}

template <class T>
T cfg_or(const Globals& g, const char* key, T fallback) {
  return g.cfg.contains(key) ? g.cfg.at(key).get<T>() : fallback;
}

Grid cfg_grid(const Globals& g) {
  if (g.cfg.contains("grids")) return grid_from_json(g.cfg.at("grids"));
  if (g.cfg.contains("grid")) return grid_from_json(g.cfg.at("grid"));
  return default_grid();
}

// Minimal SVG line plot; each series is drawn with its own color.
struct Series {
  std::string label;
  std::vector<double> x, y;
};

void write_svg(const fs::path& p, const std::vector<Series>& all, const std::string& title, bool equal_axes) {
  double x0 = 1e300, x1 = -1e300, y0 = 1e300, y1 = -1e300;
  for (const auto& s : all)
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
      x0 = std::min(x0, s.x[i]);
      x1 = std::max(x1, s.x[i]);
      y0 = std::min(y0, s.y[i]);
      y1 = std::max(y1, s.y[i]);
    }
  if (!(x1 > x0)) x1 = x0 + 1;
  if (!(y1 > y0)) y1 = y0 + 1;
  const double W = 720, H = equal_axes ? std::clamp(720 * (y1 - y0) / (x1 - x0), 120.0, 720.0) : 420, pad = 40;
  auto X = [&](double x) { return pad + (x - x0) / (x1 - x0) * (W - 2 * pad); };
  auto Y = [&](double y) { return H - pad - (y - y0) / (y1 - y0) * (H - 2 * pad); };
  static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};
  std::ofstream os(p);
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<text x=\"" << pad << "\" y=\"20\" font-size=\"13\">" << title << "</text>\n";
  os << "<text x=\"" << pad << "\" y=\"" << H - 10 << "\" font-size=\"11\">x in [" << x0 << ", " << x1
     << "], y in [" << y0 << ", " << y1 << "]</text>\n";
  for (std::size_t k = 0; k < all.size(); ++k) {
    os << "<polyline fill=\"none\" stroke-width=\"1\" stroke=\"" << colors[k % 6] << "\" points=\"";
    for (std::size_t i = 0; i < all[k].x.size(); ++i)
      if (std::isfinite(all[k].y[i])) os << X(all[k].x[i]) << ',' << Y(all[k].y[i]) << ' ';
    os << "\"><title>" << all[k].label << "</title></polyline>\n";
  }
  os << "</svg>\n";
  std::cout << "wrote " << p.string() << '\n';
}

// ---- bowl

void cmd_bowl(const Globals& g, double rho_max, double h) {
  const Dimension n(g.n);
  const auto B = solve_bowl(n, rho_max, h);
  CsvTable t{{"rho", "psi", "dpsi", "ddpsi"}, {}};
  for (std::size_t i = 0; i < B.rho.size(); i += 10) t.rows.push_back({B.rho[i], B.psi[i], B.dpsi[i], B.ddpsi[i]});
  write_table(out_path(g, "bowl.csv"), t);

  std::vector<double> x, f;
  const double c = 1.0 / (2.0 * (n.n - 1));
  for (double rho = 0.375 * rho_max; rho <= rho_max + 1e-9; rho += 0.5) {
    x.push_back(rho);
    f.push_back(B.slope(rho) - (c * rho - 2 / rho));
  }
  auto q = [&](double rho) { return 2 * B.value(rho) / (rho * rho); };
  write_json(out_path(g, "bowl.json"), {{"n", n.n},
                                        {"rho_max", rho_max},
                                        {"C0", B.C0},
                                        {"psi_pp0", (4 * q(0.05) - q(0.1)) / 3},
                                        {"residual_loglog_slope", loglog_slope(x, f)}});
}

// ---- shrinker

CsvTable leaf_table(const ShrinkerLeaf& L) {
  CsvTable t{{"y", "u", "u_y", "w", "residual"}, {}};
  for (std::size_t i = 0; i < L.y.size(); ++i) t.rows.push_back({L.y[i], L.u[i], L.uy[i], L.w[i], L.residual[i]});
  return t;
}

double sup_abs(const std::vector<double>& v) {
  double s = 0;
  for (double x : v) s = std::max(s, std::abs(x));
  return s;
}

void cmd_cap(const Globals& g, double a, double y_min) {
  const auto L = shoot_leaf(a, Dimension(g.n), y_min);
  write_table(out_path(g, "cap.csv"), leaf_table(L));
  const auto W = w_diagnostic(L);
  write_json(out_path(g, "cap.json"), {{"n", g.n},
                                       {"a", a},
                                       {"y_star", L.y_star},
                                       {"y_Ma", L.y_Ma},
                                       {"tip_limit", W.tip_limit},
                                       {"w_window", {W.clip_lo, W.clip_hi}},
                                       {"terminated_early", L.terminated_early},
                                       {"sup_residual", sup_abs(L.residual)}});
}

void cmd_trumpet(const Globals& g, double b, double Y) {
  const Dimension n(g.n);
  if (Y <= 0) Y = trumpet_seed_height(b, n);
  const auto L = solve_trumpet(b, n, 0.0, Y);
  write_table(out_path(g, "trumpet.csv"), leaf_table(L));
  const auto W = w_diagnostic(L);
  double excess = 0;
  for (std::size_t i = 0; i < W.y.size(); ++i)
    if (W.y[i] >= 2 * std::sqrt(2.0)) excess = std::max(excess, (W.w[i] - 2) * W.y[i] * W.y[i]);
  write_json(out_path(g, "trumpet.json"), {{"n", g.n},
                                           {"b", b},
                                           {"Y", Y},
                                           {"u_at_0", L.u.front()},
                                           {"max_w_excess_y2", excess},
                                           {"sup_residual", sup_abs(L.residual)}});
}

// ---- foliate

void cmd_foliate(const Globals& g, AtlasSpec spec, Region region) {
  const Dimension n(g.n);
  const auto a = default_a_grid(spec), b = default_b_grid(spec);
  const auto F = build_foliation(n, a, b, spec.y0);
  const auto D = calibration_divergence(F, region);
  CsvTable t{{"y", "r", "phi", "div"}, {}};
  for (const auto& s : D.samples) t.rows.push_back({s.y, s.r, s.phi, s.div});
  write_table(out_path(g, "field.csv"), t);
  json caps = json::array(), trumpets = json::array();
  for (const auto& L : F.caps) caps.push_back({{"a", L.parameter}, {"y_star", L.y_star}, {"y_Ma", L.y_Ma}});
  for (const auto& L : F.trumpets) trumpets.push_back({{"b", L.parameter}, {"y_hi", L.y_hi()}});
  write_json(out_path(g, "atlas.json"), {{"n", n.n},
                                         {"y0", spec.y0},
                                         {"a_max", spec.a_max},
                                         {"b_min", spec.b_min},
                                         {"b0", spec.b0},
                                         {"ratio", spec.ratio},
                                         {"crossings", 0},
                                         {"max_div", D.max_div},
                                         {"max_scaled_div", D.max_scaled_div},
                                         {"points", D.points},
                                         {"skipped", D.skipped},
                                         {"caps", caps},
                                         {"trumpets", trumpets}});
}

// ---- evolve

fs::path profiles_path(const fs::path& run_csv) {
  return run_csv.parent_path() / (run_csv.stem().string() + "_profiles.csv");
}

void cmd_evolve(const Globals& g, AnsatzSpec spec, RunOptions opt, int snapshots) {
  spec.n = Dimension(g.n);
  const auto run = run_ansatz(spec, opt);
  const auto csv = out_path(g, "run.csv");

  CsvTable t{{"tau", "dbar", "Hmax", "Htip", "area", "Rmax", "huisken", "alpha"}, {}};
  for (const auto& r : run.records) {
    const auto& d = r.diag;
    t.rows.push_back({r.tau, d.dbar, d.Hmax, d.Htip, d.area, d.Rmax, d.huisken, r.alpha});
  }
  write_table(csv, t);

  CsvTable p{{"tau", "y", "r"}, {}};
  for (const auto& S : run.states)
    for (std::size_t i = 0; i < S.curve.size(); ++i) p.rows.push_back({S.time, S.curve.y[i], S.curve.r[i]});
  write_table(profiles_path(csv), p);

  write_json(out_path(g, "run.json"), {{"n", spec.n.n},
                                       {"tau0", run.spec.tau0},
                                       {"tau1", opt.tau1},
                                       {"nodes", run.spec.nodes},
                                       {"dt", opt.dt},
                                       {"tip_drop", run.spec.tip_drop},
                                       {"tip_core", run.spec.tip_core},
                                       {"steps", run.steps},
                                       {"records", run.records.size()},
                                       {"log_sigma", run.records.back().log_sigma},
                                       {"grid", grid_to_json(opt.grid)}});

  if (snapshots > 0 && !run.states.empty()) {
    std::vector<Series> s;
    const std::size_t m = run.states.size();
    for (int k = 0; k < snapshots; ++k) {
      const auto& S = run.states[std::min(m - 1, k * (m - 1) / std::max(1, snapshots - 1))];
      std::ostringstream lab;
      lab << "tau = " << S.time;
      s.push_back({lab.str(), S.curve.y, S.curve.r});
    }
    write_svg(out_path(g, "profiles.svg"), s, "generating curves (y, r)", true);
  }
}

// ---- profiles written by evolve

std::vector<FlowState> load_profiles(const std::string& run_csv, Dimension n) {
  const auto p = profiles_path(run_csv);
  if (!fs::exists(p)) throw UsageError("missing " + p.string() + " (written by evolve next to run.csv)");
  const auto t = read_csv_file(p.string());
  const auto tau = t.get("tau"), y = t.get("y"), r = t.get("r");
  std::vector<FlowState> out;
  for (std::size_t i = 0; i < tau.size(); ++i) {
    if (out.empty() || tau[i] != out.back().time) {
      out.push_back({tau[i], {}, true});
      out.back().curve.n = n;
    }
    out.back().curve.y.push_back(y[i]);
    out.back().curve.r.push_back(r[i]);
  }
  for (auto& S : out) S.curve.fill_theta();
  return out;
}

std::vector<double> centered_rate(const std::vector<double>& t, const std::vector<double>& f) {
  std::vector<double> d(f.size(), kNaN);
  if (f.size() < 2) return d;
  for (std::size_t i = 0; i < f.size(); ++i) {
    const std::size_t a = i == 0 ? 0 : i - 1, b = i + 1 == f.size() ? i : i + 1;
    d[i] = (f[b] - f[a]) / (t[b] - t[a]);
  }
  return d;
}

void cmd_spectral(const Globals& g, const std::string& from, double exponent, int modes, bool svg) {
  const Dimension n(g.n);
  const Grid grid = cfg_grid(g);
  const auto states = load_profiles(from, n);
  const auto basis = make_basis(modes);
  std::vector<double> tau, dbar;
  for (const auto& S : states) {
    tau.push_back(S.time);
    dbar.push_back(diagnostics(S).dbar);
  }
  const auto dprime = centered_rate(tau, dbar);

  CsvTable t{{"tau", "Vplus", "Vzero", "Vminus", "alpha", "E1", "E2", "E3"}, {}};
  std::vector<ModeSample> series;
  std::vector<double> alpha;
  for (std::size_t k = 0; k < states.size(); ++k) {
    const double p = capped_exponent(dbar[k], exponent, 0.45);
    const auto v = deviation(graph_profile(states[k], grid));
    const auto tr = truncate(v, grid, dbar[k], p);
    const auto sp = project(tr.vbar, grid, basis);
    const auto E = error_terms(v, tr, grid, n, dbar[k], dprime[k], p);
    series.push_back({tau[k], sp});
    alpha.push_back(-sp.alpha);
    t.rows.push_back({tau[k], sp.Vplus, sp.Vzero, sp.Vminus, -sp.alpha, E.E1, E.E2, E.E3});
  }
  write_table(out_path(g, "spectral.csv"), t);

  json summary = {{"n", n.n}, {"cutoff_exponent", exponent}, {"modes", modes}, {"samples", states.size()}};
  try {
    const auto C = classify_modes(series);
    summary["dominant"] = C.dominant == Dominant::Zero ? "zero" : C.dominant == Dominant::Plus ? "plus" : "undetermined";
    summary["ratio_zero"] = C.ratio_zero;
    summary["zero_power"] = C.zero_power;
    const auto A = track_alpha(tau, alpha);
    summary["alpha_slope_check"] = A.slope_check;
    summary["alpha_fit"] = A.alpha_fit;
  } catch (const std::exception& e) {
    summary["classification_error"] = e.what();
  }
  write_json(out_path(g, "spectral.json"), summary);
  if (svg) {
    std::vector<double> target;
    for (double x : tau) target.push_back(-1 / (4 * x));
    write_svg(out_path(g, "alpha.svg"), {{"alpha", tau, alpha}, {"-1/(4 tau)", tau, target}}, "alpha(tau)", false);
  }
}

void cmd_huisken(const Globals& g, const std::string& from, std::string inner_outer) {
  const Dimension n(g.n);
  const Grid grid = cfg_grid(g);
  if (inner_outer.rfind("L=", 0) == 0) inner_outer = inner_outer.substr(2);
  const double L = std::stod(inner_outer);
  const auto states = load_profiles(from, n);
  std::vector<double> tau, H;
  for (const auto& S : states) {
    tau.push_back(S.time);
    H.push_back(diagnostics(S).huisken);
  }
  const auto dH = centered_rate(tau, H);
  CsvTable t{{"tau", "H", "dHdtau", "ratio_grad", "ratio_mass"}, {}};
  int skipped = 0;
  double grad = 0, mass = 0;
  for (std::size_t k = 0; k < states.size(); ++k) {
    double rg = kNaN, rm = kNaN;
    try {
      const auto io = inner_outer_check(states[k], grid, L);
      rg = io.ratio_grad;
      rm = io.ratio_mass;
      grad = std::max(grad, rg);
      mass = std::max(mass, rm);
    } catch (const HypothesisError&) {
      ++skipped;
    }
    t.rows.push_back({tau[k], H[k], dH[k], rg, rm});
  }
  write_table(out_path(g, "huisken.csv"), t);
  double max_rate = -1e300;
  for (double x : dH) max_rate = std::max(max_rate, x);
  write_json(out_path(g, "huisken.json"), {{"n", n.n},
                                           {"L", L},
                                           {"cylinder", cylinder_huisken(n)},
                                           {"max_dHdtau", max_rate},
                                           {"max_ratio_grad", grad},
                                           {"max_ratio_mass", mass},
                                           {"above_cylinder", skipped}});
}

int cmd_verify(const Globals& g, AcceptanceConfig cfg, const std::vector<int>& ids) {
  int failed = 0;
  const auto res = run_acceptance(cfg, ids, [&](const CriterionResult& r) {
    std::cout << format_line(r) << std::endl;
    failed += r.pass ? 0 : 1;
  });
  json j = json::array();
  for (const auto& r : res)
    j.push_back({{"id", r.id}, {"title", r.title}, {"pass", r.pass}, {"summary", r.summary}, {"values", r.values}});
  write_json(out_path(g, "verify.json"), {{"passed", res.size() - failed}, {"total", res.size()}, {"criteria", j}});
  return failed == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ancient ovals: shrinker foliation, rescaled flow and asymptotic checks"};
  app.require_subcommand(1);
  Globals g;
  app.add_option("--n", g.n, "surface dimension")->check(CLI::Range(2, 12));
  app.add_option("--out", g.out, "output directory");
  app.add_option("--config", g.config, "JSON {n, tau0, tau1, nodes, dt, steps, grids}")->check(CLI::ExistingFile);

  auto* bowl = app.add_subcommand("bowl", "speed-1/2 bowl profile Psi");
  double rho_max = 40, bowl_h = 1e-3;
  bowl->add_option("--rho-max", rho_max);
  bowl->add_option("--step", bowl_h, "RK4 step in rho");

  auto* shr = app.add_subcommand("shrinker", "shrinker caps and trumpets");
  shr->require_subcommand(1);
  auto* cap = shr->add_subcommand("cap", "cap Sigma_a");
  double a = 40, y_min = 0, b = 0.5, Y = 0;
  cap->add_option("--a", a)->check(CLI::PositiveNumber);
  cap->add_option("--y-min", y_min);
  auto* tru = shr->add_subcommand("trumpet", "trumpet ~Sigma_b");
  tru->add_option("--b", b)->check(CLI::PositiveNumber);
  tru->add_option("--Y", Y, "seed height (default: automatic)");

  auto* fol = app.add_subcommand("foliate", "cap/trumpet atlas and calibration field");
  AtlasSpec atlas;
  Region region;
  fol->add_option("--y0", atlas.y0);
  fol->add_option("--a-max", atlas.a_max);
  fol->add_option("--b-min", atlas.b_min);
  fol->add_option("--ratio", atlas.ratio);
  fol->add_option("--spacing", region.h, "field sample spacing");

  auto* evo = app.add_subcommand("evolve", "rescaled flow from the oval ansatz");
  AnsatzSpec spec;
  RunOptions run;
  std::string ansatz = "oval";
  int snapshots = 0;
  evo->add_option("--tau0", spec.tau0);
  evo->add_option("--tau1", run.tau1);
  evo->add_option("--nodes", spec.nodes);
  evo->add_option("--dt", run.dt);
  evo->add_option("--record-every", run.record_every);
  evo->add_option("--ansatz", ansatz)->check(CLI::IsMember({"oval"}));
  evo->add_option("--svg", snapshots, "number of profile snapshots in profiles.svg");

  auto* spe = app.add_subcommand("spectral", "mode split and error terms of recorded profiles");
  std::string from;
  double exponent = 2.0 / 3.0;
  int modes = 7;
  bool alpha_svg = false;
  spe->add_option("--from", from, "run.csv written by evolve")->required()->check(CLI::ExistingFile);
  spe->add_option("--cutoff-exponent", exponent);
  spe->add_option("--modes", modes);
  spe->add_flag("--svg", alpha_svg, "plot alpha(tau)");

  auto* hui = app.add_subcommand("huisken", "Huisken functional and inner-outer ratios of recorded profiles");
  std::string io = "L=5";
  hui->add_option("--from", from, "run.csv written by evolve")->required()->check(CLI::ExistingFile);
  hui->add_option("--inner-outer", io, "L=<value>");

  auto* ver = app.add_subcommand("verify", "acceptance criteria");
  std::vector<int> ids;
  AcceptanceConfig acc;
  ver->add_option("ids", ids)->check(CLI::Range(1, kCriteria));
  ver->add_option("--tau0", acc.spec.tau0);
  ver->add_option("--tau1", acc.run.tau1);
  ver->add_option("--nodes", acc.spec.nodes);
  ver->add_flag("!--no-doubling", acc.node_doubling, "skip the 2x node run");

  CLI11_PARSE(app, argc, argv);

  try {
    if (!g.config.empty()) {
      std::ifstream is(g.config);
      g.cfg = json::parse(is);
      if (app.count("--n") == 0) g.n = cfg_or(g, "n", g.n);
      for (auto* sub : {evo, ver}) {
        auto& s = sub == evo ? spec : acc.spec;
        auto& r = sub == evo ? run : acc.run;
        if (sub->count("--tau0") == 0) s.tau0 = cfg_or(g, "tau0", s.tau0);
        if (sub->count("--tau1") == 0) r.tau1 = cfg_or(g, "tau1", r.tau1);
        if (sub->count("--nodes") == 0) s.nodes = cfg_or(g, "nodes", s.nodes);
        r.dt = cfg_or(g, "dt", r.dt);
        // steps: number of steps per unit tau
        if (g.cfg.contains("steps")) r.dt = 1.0 / g.cfg.at("steps").get<double>();
        r.grid = cfg_grid(g);
      }
    }

    if (*bowl) cmd_bowl(g, rho_max, bowl_h);
    if (*cap) cmd_cap(g, a, y_min);
    if (*tru) cmd_trumpet(g, b, Y);
    if (*fol) cmd_foliate(g, atlas, region);
    if (*evo) cmd_evolve(g, spec, run, snapshots);
    if (*spe) cmd_spectral(g, from, exponent, modes, alpha_svg);
    if (*hui) cmd_huisken(g, from, io);
    if (*ver) {
      acc.spec.n = Dimension(g.n);
      return cmd_verify(g, acc, ids);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
