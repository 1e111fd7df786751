#include "apx/experiments.hpp"

#include "apx/asympt.hpp"
#include "apx/floquet.hpp"
#include "apx/greens.hpp"
#include "apx/lineops.hpp"
#include "apx/modecouple.hpp"
#include "apx/numkit.hpp"
#include "apx/patstab.hpp"
#include "apx/phaseplane.hpp"
#include "apx/singular.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <limits>
#include <mutex>
#include <stdexcept>
#include <thread>

namespace apx {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

int as_int(const Params& p, const char* key) {
  const double v = p.at(key);
  if (v != std::floor(v) || std::abs(v) > 1e9)
    throw std::invalid_argument(std::string("parameter '") + key + "' must be an integer");
  return static_cast<int>(v);
}

std::uint64_t as_seed(const Params& p) {
  const double v = p.at("seed");
  if (v < 0 || v != std::floor(v)) throw std::invalid_argument("seed must be a non-negative integer");
  return static_cast<std::uint64_t>(v);
}

void require(bool ok, const char* msg) {
  if (!ok) throw std::invalid_argument(msg);
}

std::vector<double> linspace(double a, double b, int n) {
  std::vector<double> v(n);
  for (int i = 0; i < n; ++i) v[i] = n == 1 ? a : a + (b - a) * i / (n - 1);
  return v;
}

// t, u_asym, u_numeric from a sampled trajectory
Table compare_table(const OdeSystem& sys, const Vec& y0, double t_end, double dt, const RealFn& asym) {
  require(t_end > 0 && dt > 0, "t_end and dt must be positive");
  const Trajectory tr = integrate_sampled(sys, 0.0, t_end, y0, dt, 1e-11);
  Table t{"", {"t", "u_asym", "u_numeric"}, {}};
  for (std::size_t i = 0; i < tr.t.size(); ++i) t.rows.push_back({tr.t[i], asym(tr.t[i]), tr.y[i](0)});
  return t;
}

double max_gap(const Table& t) {
  double g = 0.0;
  for (const auto& r : t.rows) g = std::max(g, std::abs(std::get<double>(r[1]) - std::get<double>(r[2])));
  return g;
}

Table spectrum_table(const SpectrumSeries& s) {
  Table t{"", {"t", "k", "amplitude"}, {}};
  for (std::size_t r = 0; r < s.t.size(); ++r)
    for (Eigen::Index j = 0; j < s.k.size(); ++j) t.rows.push_back({s.t[r], s.k(j), s.amp[r](j)});
  return t;
}

struct MiSummary {
  double k_hat, slope, t_linear;
  bool unreliable;
};

MiSummary summarize_mi(const SpectrumSeries& s, bool exclude_zero) {
  double sat = 0.0;
  for (const Vec& a : s.amp) sat = std::max(sat, exclude_zero ? a.tail(a.size() - 1).maxCoeff() : a.maxCoeff());
  const double t1 = linear_stage_end(s, 0.1 * sat, exclude_zero);
  if (t1 <= s.t.front()) return {kNaN, kNaN, t1, true};
  const DominantK d = measure_dominant_k(s, s.t.front(), t1, exclude_zero, sat);
  return {d.k_hat, d.bin >= 0 ? d.slopes(d.bin) : kNaN, t1, d.unreliable};
}

SimConfig mi_config(PdeModel model, const Params& p) {
  SimConfig c;
  c.model = model;
  c.mu = p.at("mu");
  c.L = p.at("L");
  c.n = as_int(p, "n");
  c.t_end = p.at("t_end");
  c.dt = p.at("dt");
  c.record_dt = p.at("record_dt");
  c.seed = as_seed(p);
  c.ic.noise = p.at("noise");
  c.ic.broadband = p.at("broadband") != 0.0;
  return c;
}

// ------------------------------------------------------------ experiments

ExperimentOutput run_blayer_double(const Params& p, const RunContext&) {
  const double eps = p.at("eps");
  require(eps > 0, "eps must be positive");
  const BvpSolution ref = bl_double_oracle(eps, as_int(p, "n"));
  Table t{"", {"x", "oracle", "uniform"}, {}};
  double gap = 0.0;
  for (Eigen::Index i = 0; i < ref.x.size(); ++i) {
    const double u = bl_double_uniform(eps, ref.x(i));
    gap = std::max(gap, std::abs(u - ref.u(i)));
    t.rows.push_back({ref.x(i), ref.u(i), u});
  }
  return {{t}, {{"max_gap_measured", gap}, {"max_gap_limit", 0.05}}};
}

ExperimentOutput run_blayer_exact(const Params& p, const RunContext&) {
  const double eps = p.at("eps");
  require(eps > 0, "eps must be positive");
  const int n = as_int(p, "points");
  require(n >= 2, "points must be at least 2");
  Table t{"", {"x", "exact", "uniform"}, {}};
  double gap = 0.0;
  for (double x : linspace(0.0, 1.0, n)) {
    const BlValues v = bl_example1(eps, x);
    gap = std::max(gap, std::abs(v.exact - v.uniform));
    t.rows.push_back({x, v.exact, v.uniform});
  }
  return {{t}, {{"max_gap_measured", gap}, {"eps", eps}}};
}

ExperimentOutput run_duffing_pl(const Params& p, const RunContext&) {
  const double A = p.at("A"), eps = p.at("eps");
  const PLExpansion pl = duffing_pl(A, eps);
  const Vec y0 = (Vec(2) << 0.0, A * (1 + eps * pl.omega[1])).finished();
  const Table t = compare_table(duffing_system(eps), y0, p.at("t_end"), p.at("dt"), pl);
  const double period = measured_period(duffing_system(eps), y0, 0.0, 200.0);
  return {{t},
          {{"period_theory", 2 * M_PI / (1 + eps * pl.omega[1])},
           {"period_measured", period},
           {"max_gap", max_gap(t)}}};
}

ExperimentOutput run_duffing_response(const Params& p, const RunContext&) {
  const int n = as_int(p, "points");
  require(n >= 1, "points must be positive");
  const auto grid = linspace(p.at("omega_min"), p.at("omega_max"), n);
  const auto pts = duffing_response(p.at("kappa"), p.at("gamma"), p.at("delta"), grid);
  Table t{"", {"omega", "A1", "A2", "A3"}, {}};
  int multi = 0;
  for (const ResponsePoint& r : pts) {
    std::vector<Cell> row{r.omega};
    for (int i = 0; i < 3; ++i) row.push_back(i < static_cast<int>(r.amplitudes.size()) ? r.amplitudes[i] : kNaN);
    multi += r.amplitudes.size() == 3;
    t.rows.push_back(row);
  }
  return {{t}, {{"points_with_three_branches", static_cast<double>(multi)}}};
}

HillVariant variant_of(const Params& p) {
  const int v = as_int(p, "variant");
  require(v >= 0 && v <= 3, "variant must be 0 (down), 1 (inverted), 2 (nonlinear down) or 3 (nonlinear inverted)");
  return static_cast<HillVariant>(v);
}

ForcingShape shape_of(const Params& p) {
  const int s = as_int(p, "square");
  require(s == 0 || s == 1, "square must be 0 or 1");
  return s ? ForcingShape::Square : ForcingShape::Sine;
}

ExperimentOutput run_floquet_chart(const Params& p, const RunContext& ctx) {
  const int n = as_int(p, "points");
  require(n >= 2, "points must be at least 2");
  const double lo = p.at("omega_min"), hi = p.at("omega_max");
  require(lo > 0 && hi > lo, "need 0 < omega_min < omega_max");
  const auto grid = linspace(lo, hi, n);
  const HillVariant var = variant_of(p);
  const ForcingShape shape = shape_of(p);
  // chunks of the grid run in parallel; boundaries are refined per chunk pair
  std::vector<StabilityChart> parts(n);
  parallel_for(n, ctx.jobs, [&](int i) {
    parts[i] = stability_chart(var, shape, p.at("delta"), p.at("eps"), {grid[i]});
  });
  StabilityChart chart;
  for (const auto& c : parts) chart.rows.push_back(c.rows.front());
  std::vector<double> bnd(n - 1, kNaN);
  parallel_for(n - 1, ctx.jobs, [&](int i) {
    if (chart.rows[i].stable == chart.rows[i + 1].stable) return;
    const auto c = stability_chart(var, shape, p.at("delta"), p.at("eps"), {grid[i], grid[i + 1]});
    bnd[i] = c.boundaries.front();
  });
  Table t{"", {"omega", "gamma", "stable"}, {}};
  for (const ChartRow& r : chart.rows) t.rows.push_back({r.omega, r.gamma, static_cast<long long>(r.stable)});
  Table b{"boundaries", {"omega"}, {}};
  for (double x : bnd)
    if (!std::isnan(x)) b.rows.push_back({x});
  const auto thr = stabilization_threshold(chart);
  return {{t, b},
          {{"threshold_measured", thr ? *thr : kNaN},
           {"boundaries", static_cast<double>(b.rows.size())},
           {"gamma_at_omega_max", chart.rows.back().gamma}}};
}

ExperimentOutput run_floquet_gamma(const Params& p, const RunContext&) {
  const HillProblem prob{variant_of(p), shape_of(p), p.at("delta"), p.at("eps"), p.at("omega")};
  const FloquetResult f = discriminant(prob, 1e-12);
  const FundamentalPair fp = fundamental_pair(prob, 1e-12);
  double theory = kNaN;
  if (prob.variant == HillVariant::LinearInverted && prob.shape == ForcingShape::Square &&
      prob.delta + prob.eps > 0)
    theory = mathieu_piecewise_gamma(prob.delta, prob.eps, prob.omega);
  else if (prob.variant == HillVariant::LinearDown && prob.eps == 0.0 && prob.delta > 0)
    theory = 2 * std::cos(2 * M_PI * std::sqrt(prob.delta) / prob.omega);
  Table t{"", {"omega", "gamma", "mult1_re", "mult1_im", "mult2_re", "mult2_im", "stable"}, {}};
  t.rows.push_back({prob.omega, f.gamma, f.multipliers[0].real(), f.multipliers[0].imag(), f.multipliers[1].real(),
                    f.multipliers[1].imag(), static_cast<long long>(f.stable)});
  return {{t}, {{"gamma_theory", theory}, {"gamma_measured", f.gamma}, {"wronskian", fp.wronskian()}}};
}

ExperimentOutput run_floquet_poincare(const Params& p, const RunContext&) {
  const DuffingForcing f{p.at("delta"), p.at("kappa"), p.at("gamma"), p.at("omega")};
  const int n = as_int(p, "strobes");
  const int kmax = as_int(p, "max_period");
  require(n >= 4 * kmax, "strobes must be at least 4 max_period");
  const auto pts = poincare_map(f, n, as_int(p, "transient"), Eigen::Vector2d(p.at("x0"), p.at("v0")));
  Table t{"", {"n", "x", "v"}, {}};
  for (int i = 0; i < n; ++i) t.rows.push_back({static_cast<long long>(i), pts[i](0), pts[i](1)});
  const auto k = detect_cycle(pts, kmax, p.at("cycle_tol"));
  return {{t}, {{"cycle_period_measured", k ? static_cast<double>(*k) : 0.0}, {"max_period", double(kmax)}}};
}

ExperimentOutput run_fk_mi(const Params& p, const RunContext&) {
  SimConfig c = mi_config(PdeModel::FisherKolmogorov, p);
  const SimResult r = simulate(c);
  const MiSummary m = summarize_mi(r.spectrum, false);
  int near = 0;
  const double root = std::sqrt(std::max(c.mu, 0.0));
  for (Eigen::Index j = 0; j < r.final_state.values.size(); ++j)
    near += std::abs(std::abs(r.final_state.values(j).real()) - root) <= 0.01;
  return {{spectrum_table(r.spectrum)},
          {{"k_max_theory", kmax_band({PdeModel::FisherKolmogorov, c.mu, 0.0, 1.0}).k_max},
           {"k_hat", m.k_hat},
           {"slope", m.slope},
           {"fraction_near_branches", static_cast<double>(near) / c.n}}};
}

ExperimentOutput greens_common(const GreensFunction& G, const RealFn& f, const RealFn& exact, int points) {
  require(points >= 2, "points must be at least 2");
  Table surf{"", {"x", "xi", "G"}, {}};
  const auto xs = linspace(G.x0, G.x1, points);
  for (double xi : xs)
    for (double x : xs) surf.rows.push_back({x, xi, G(x, xi)});
  const RealFn u = apply_green(G, f);
  Table sol{"solution", {"x", "u_green", "u_exact"}, {}};
  double gap = 0.0;
  for (double x : linspace(G.x0, G.x1, 201)) {
    const double e = exact ? exact(x) : kNaN;
    if (exact) gap = std::max(gap, std::abs(u(x) - e));
    sol.rows.push_back({x, u(x), e});
  }
  double jump = 0.0;
  for (double xi : linspace(G.x0 + 0.05 * (G.x1 - G.x0), G.x1 - 0.05 * (G.x1 - G.x0), 17)) {
    const GreenCheck c = check_green(G, xi);
    jump = std::max({jump, c.continuity_gap, std::abs(c.jump_measured - c.jump_expected)});
  }
  return {{surf, sol}, {{"max_solution_gap", exact ? gap : kNaN}, {"max_jump_error", jump}}};
}

ExperimentOutput run_greens_cos(const Params& p, const RunContext&) {
  const double k = p.at("k"), l = p.at("l");
  const GreensFunction G = green_example(GreenExample::Cos, {l, k});
  // f = 1 gives u = 1/k^2
  return greens_common(G, [](double) { return 1.0; }, [k](double) { return 1.0 / (k * k); }, as_int(p, "points"));
}

ExperimentOutput run_greens_ex1(const Params& p, const RunContext&) {
  const double l = p.at("l");
  const GreensFunction G = green_example(GreenExample::Ex1, {l, 1.0});
  return greens_common(G, [](double x) { return x; },
                       [l](double x) { return (x * x / 2 - l * l / 2) * x - x * x * x / 3; }, as_int(p, "points"));
}

ExperimentOutput run_greens_modified(const Params& p, const RunContext&) {
  const double l = p.at("l");
  const ModifiedGreen mg = modified_green(l);
  const int points = as_int(p, "points");
  require(points >= 2, "points must be at least 2");
  Table surf{"", {"x", "xi", "G"}, {}};
  const auto xs = linspace(0.0, l, points);
  for (double xi : xs)
    for (double x : xs) surf.rows.push_back({x, xi, mg.G(x, xi)});
  const double w = M_PI / l;
  const RealFn u = mg.solve([w](double x) { return std::cos(w * x); });
  Table sol{"solution", {"x", "u_green", "u_exact"}, {}};
  double gap = 0.0;
  for (double x : linspace(0.0, l, 201)) {
    const double e = -std::cos(w * x) / (w * w);
    gap = std::max(gap, std::abs(u(x) - e));
    sol.rows.push_back({x, u(x), e});
  }
  return {{surf, sol}, {{"max_solution_gap", gap}, {"limit", 1e-6}}};
}

ExperimentOutput run_greens_radial(const Params& p, const RunContext&) {
  const double l = p.at("l");
  const GreensFunction G = green_example(GreenExample::Radial, {l, 1.0});
  // (r u')' = r, u(l) = 0: u = (r^2 - l^2) / 4
  return greens_common(G, [](double r) { return r; }, [l](double r) { return (r * r - l * l) / 4; },
                       as_int(p, "points"));
}

ExperimentOutput run_greens_sl2(const Params& p, const RunContext&) {
  const GreensFunction G = green_example(GreenExample::Sl2);
  const double r2 = std::sqrt(2.0);
  return greens_common(G, [](double x) { return -x; },
                       [r2](double x) { return std::sin(r2 * x) / (std::sin(r2) + r2 * std::cos(r2)) - x / 2; },
                       as_int(p, "points"));
}

ExperimentOutput run_ks_mi(const Params& p, const RunContext&) {
  const SimConfig c = mi_config(PdeModel::KuramotoSivashinsky, p);
  const SimResult r = simulate(c);  // DivergedError for mu < 0
  const MiSummary m = summarize_mi(r.spectrum, true);
  const Dispersion d{PdeModel::KuramotoSivashinsky, c.mu, 0.0, 1.0};
  return {{spectrum_table(r.spectrum)},
          {{"k_max_theory", kmax_band(d).k_max},
           {"k_hat", m.k_hat},
           {"slope", m.slope},
           {"slope_theory", growth_rate(d, m.k_hat)},
           {"dk", 2 * M_PI / c.L},
           {"linear_stage_end", m.t_linear}}};
}

ExperimentOutput run_lpm_spectrum(const Params& p, const RunContext&) {
  const double H = p.at("halfwidth");
  const int n = as_int(p, "n");
  Table t{"", {"operator", "index", "eigenvalue"}, {}};
  std::vector<Metric> m;
  for (auto [op, name] : {std::pair{LinOp::Lminus, "L-"}, std::pair{LinOp::Lplus, "L+"}}) {
    const LpmSpectrum s = lpm_spectrum(op, H, n);
    for (std::size_t i = 0; i < s.discrete.size(); ++i)
      t.rows.push_back({std::string(name), static_cast<long long>(i), s.discrete[i]});
    t.rows.push_back({std::string(name), -1LL, s.continuum_edge});
    m.push_back({std::string(name) + "_discrete_count", static_cast<double>(s.discrete.size())});
    m.push_back({std::string(name) + "_continuum_edge", s.continuum_edge});
  }
  return {{t}, m};
}

ExperimentOutput run_modecouple(const Params& p, const RunContext&) {
  const WellModes wm = well_modes(p.at("halfwidth"), as_int(p, "n"));
  require(wm.modes.size() >= 3, "well supports fewer than three bound modes");
  SwitchConfig cfg;
  cfg.eps = p.at("eps");
  cfg.omega = p.at("omega");
  cfg.t_on = p.at("t_on");
  cfg.t_off = p.at("t_off");
  cfg.t_end = p.at("t_end");
  cfg.dt = p.at("dt");
  cfg.record_dt = p.at("record_dt");
  const SwitchSeries s = resonant_switch_experiment(wm, cfg);
  Table t{"", {"t"}, {}};
  for (std::size_t b = 0; b < wm.modes.size(); ++b) t.header.push_back("E" + std::to_string(b + 1));
  t.header.push_back("leakage");
  double best = 0.0;
  for (std::size_t i = 0; i < s.t.size(); ++i) {
    std::vector<Cell> row{s.t[i]};
    for (Eigen::Index b = 0; b < s.energy[i].size(); ++b) row.push_back(s.energy[i](b));
    row.push_back(s.leakage[i]);
    best = std::max(best, s.energy[i](2));
    t.rows.push_back(row);
  }
  Table modes{"eigenvalues", {"n", "lambda"}, {}};
  for (std::size_t b = 0; b < wm.lambdas.size(); ++b)
    modes.rows.push_back({static_cast<long long>(b + 1), wm.lambdas[b]});
  return {{t, modes},
          {{"omega", s.omega},
           {"transfer_to_mode3_measured", best},
           {"transfer_limit", 0.8},
           {"bound_modes", static_cast<double>(wm.lambdas.size())}}};
}

ExperimentOutput run_ms_damped(const Params& p, const RunContext&) {
  const double a = p.at("alpha"), eps = p.at("eps");
  const Table t = compare_table(damped_system(eps), (Vec(2) << a, 0.0).finished(), p.at("t_end"), p.at("dt"),
                                [a, eps](double s) { return ms_damped_eval(a, eps, s); });
  return {{t}, {{"max_gap", max_gap(t)}, {"eps", eps}}};
}

ExperimentOutput run_nls_mi(const Params& p, const RunContext&) {
  SimConfig c = mi_config(PdeModel::Nls, p);
  c.ic.kind = IcKind::CwPlusNoise;
  c.ic.level = p.at("A");
  const SimResult r = simulate(c);
  const MiSummary m = summarize_mi(r.spectrum, true);
  const Dispersion d{PdeModel::Nls, c.mu, 0.0, c.ic.level};
  return {{spectrum_table(r.spectrum)},
          {{"k_max_theory", kmax_band(d).k_max},
           {"k_hat", m.k_hat},
           {"slope", m.slope},
           {"slope_theory", growth_rate(d, m.k_hat)},
           {"dk", 2 * M_PI / c.L}}};
}

ExperimentOutput run_phaseplane(const Params& p, const RunContext&) {
  const std::vector<ModelCatalogEntry> models = {
      pendulum(p.at("gamma"), p.at("omega"), 1), lotka_volterra(p.at("a"), p.at("c"), p.at("alpha")),
      hopf_exemplar(p.at("mu")), lorenz(p.at("sigma"), p.at("r"), p.at("b"))};
  Table t{"", {"model", "x", "y", "z", "l1_re", "l1_im", "l2_re", "l2_im", "l3_re", "l3_im", "kind", "stability"}, {}};
  int count = 0;
  for (const ModelCatalogEntry& m : models) {
    const EquilibriaResult r = find_equilibria(m.system, m.known_equilibria);
    for (const Equilibrium& e : r.points) {
      std::vector<Cell> row{m.name};
      for (int i = 0; i < 3; ++i) row.push_back(i < e.point.size() ? e.point(i) : kNaN);
      for (int i = 0; i < 3; ++i) {
        row.push_back(i < e.eigenvalues.size() ? e.eigenvalues(i).real() : kNaN);
        row.push_back(i < e.eigenvalues.size() ? e.eigenvalues(i).imag() : kNaN);
      }
      row.push_back(to_string(e.kind));
      row.push_back(to_string(e.stability));
      t.rows.push_back(row);
      ++count;
    }
  }
  return {{t}, {{"equilibria", static_cast<double>(count)}}};
}

ExperimentOutput run_rayleigh(const Params& p, const RunContext&) {
  const double eps = p.at("eps");
  const OdeSystem sys = rayleigh_system(eps);
  const Trajectory tr = integrate_sampled(sys, 0.0, p.at("t_end"), (Vec(2) << 0.0, 1.0).finished(), p.at("dt"),
                                          1e-10);
  Table t{"", {"t", "u", "v"}, {}};
  for (std::size_t i = 0; i < tr.t.size(); ++i) t.rows.push_back({tr.t[i], tr.y[i](0), tr.y[i](1)});
  return {{t}, {{"period_measured", rayleigh_period(eps)}, {"period_relaxation_limit", rayleigh_relaxation_period()}}};
}

ExperimentOutput run_soliton_decay(const Params& p, const RunContext&) {
  SimConfig c;
  c.model = PdeModel::Nls;
  c.eps = p.at("eps");
  c.gamma = p.at("gamma");
  c.L = p.at("L");
  c.n = as_int(p, "n");
  c.t_end = p.at("t_end");
  c.dt = p.at("dt");
  c.record_dt = p.at("record_dt");
  c.ic.kind = IcKind::Soliton;
  c.ic.soliton.eta = p.at("eta");
  const SimResult r = simulate(c);
  Table t{"", {"t", "peak", "mass"}, {}};
  double st = 0, sy = 0, stt = 0, sty = 0;
  for (std::size_t i = 0; i < r.peak.size(); ++i) {
    const double s = r.spectrum.t[i], y = std::log(r.peak[i]);
    st += s;
    sy += y;
    stt += s * s;
    sty += s * y;
    t.rows.push_back({s, r.peak[i], r.mass[i]});
  }
  const double m = static_cast<double>(r.peak.size());
  const double rate = (m * sty - st * sy) / (m * stt - st * st);
  return {{t}, {{"rate_theory", -2 * c.gamma * c.eps}, {"rate_measured", rate}}};
}

ExperimentOutput run_sturm(const Params& p, const RunContext&) {
  const int n = as_int(p, "terms");
  require(n >= 1, "terms must be positive");
  const double mu = p.at("mu");
  const EigenSet es = sl_eigen(SlProblem::RobinExample, n);
  const ExpansionSolution sol = expansion_solve(es, [](double x) { return x; }, mu, n);
  const Vec grid = robin_grid_eigenvalues(as_int(p, "grid"), std::min(n, 5));
  Table t{"", {"n", "lambda", "lambda_grid", "norm_constant", "b", "c"}, {}};
  for (int i = 0; i < n; ++i)
    t.rows.push_back({static_cast<long long>(i + 1), es.lambdas[i], i < grid.size() ? grid(i) : kNaN,
                      es.norm_constants[i], sol.b[i], sol.c[i]});
  // -u'' - mu u = x is u'' + mu u = -x; Green's function closed form for mu > 0
  const double r = std::sqrt(std::max(mu, 0.0));
  Table s{"solve", {"x", "u_series", "u_green"}, {}};
  double gap = 0.0;
  for (double x : linspace(0.0, 1.0, 201)) {
    const double g = mu > 0 ? 2 * std::sin(r * x) / (mu * (std::sin(r) + r * std::cos(r))) - x / mu : kNaN;
    if (mu > 0) gap = std::max(gap, std::abs(sol(x) - g));
    s.rows.push_back({x, sol(x), g});
  }
  return {{t, s}, {{"expansion_gap_measured", mu > 0 ? gap : kNaN}, {"expansion_gap_limit", 1e-4}}};
}

ExperimentOutput run_vdp_ms(const Params& p, const RunContext&) {
  const double a = p.at("alpha"), eps = p.at("eps");
  const Table t = compare_table(vdp_system(eps), (Vec(2) << a, 0.0).finished(), p.at("t_end"), p.at("dt"),
                                [a, eps](double s) { return vdp_ms_eval(a, eps, s); });
  return {{t}, {{"max_gap", max_gap(t)}, {"final_amplitude_theory", vdp_ms_amplitude(a, eps, p.at("t_end"))}}};
}

ExperimentOutput run_vdp_pl(const Params& p, const RunContext&) {
  const double eps = p.at("eps");
  const Vec y0 = (Vec(2) << 2.0, 0.0).finished();
  const Table t = compare_table(vdp_system(eps), y0, p.at("t_end"), p.at("dt"),
                                [eps](double s) { return vdp_pl_eval(eps, s); });
  const Vec y1 = integrate_final(vdp_system(eps), 0.0, 200.0, (Vec(2) << 0.5, 0.0).finished(), 1e-11);
  const Trajectory tr = integrate_sampled(vdp_system(eps), 200.0, 230.0, y1, 1e-3, 1e-11);
  double amp = 0.0;
  for (const Vec& y : tr.y) amp = std::max(amp, std::abs(y(0)));
  return {{t},
          {{"amplitude_theory", 2.0},
           {"amplitude_measured", amp},
           {"period_theory", 2 * M_PI / vdp_pl_frequency(eps)},
           {"period_measured", measured_period(vdp_system(eps), (Vec(2) << 0.5, 0.0).finished(), 200.0, 400.0)}}};
}

ExperimentOutput run_wkb_eigen(const Params& p, const RunContext& ctx) {
  const int n = as_int(p, "modes");
  require(n >= 1, "modes must be positive");
  const RealFn q = [](double x) { return std::pow(x + M_PI, 4); };
  const Vec grid = wkb_grid_eigenvalues(q, as_int(p, "grid"), n);
  require(grid.size() == n, "grid too coarse for the requested modes");
  std::vector<double> e(n);
  parallel_for(n, ctx.jobs, [&](int i) { e[i] = wkb_eigen(q, i + 1).energy; });
  Table t{"", {"n", "E_wkb", "E_grid", "rel_err"}, {}};
  for (int i = 0; i < n; ++i)
    t.rows.push_back({static_cast<long long>(i + 1), e[i], grid(i), std::abs(e[i] - grid(i)) / grid(i)});
  return {{t},
          {{"E_last_theory", e[n - 1]},
           {"E_last_grid", grid(n - 1)},
           {"rel_err_last", std::abs(e[n - 1] - grid(n - 1)) / grid(n - 1)}}};
}

Params mi_defaults(double mu, double L, int n, double t_end, double dt, double record_dt, double noise) {
  return {{"mu", mu},       {"L", L},         {"n", n},         {"t_end", t_end},       {"dt", dt},
          {"record_dt", record_dt}, {"seed", 12345}, {"noise", noise}, {"broadband", 0}};
}

std::vector<ExperimentDef> build_registry() {
  std::vector<ExperimentDef> r = {
      {"blayer-double", "double boundary layer: uniform approximation vs clustered-grid oracle",
       {{"eps", 0.01}, {"n", 2000}}, run_blayer_double},
      {"blayer-exact", "single boundary layer: exact vs uniform composite", {{"eps", 0.05}, {"points", 401}},
       run_blayer_exact},
      {"duffing-pl", "Poincare-Lindstedt Duffing solution vs RK", {{"A", 1}, {"eps", 0.1}, {"t_end", 50}, {"dt", 0.05}},
       run_duffing_pl},
      {"duffing-response", "forced Duffing response branches",
       {{"kappa", 1}, {"gamma", 0.1}, {"delta", 0.05}, {"omega_min", -1}, {"omega_max", 1}, {"points", 201}},
       run_duffing_response},
      {"floquet-chart", "Floquet discriminant over a forcing-frequency sweep",
       {{"variant", 1}, {"square", 0}, {"delta", 0.1}, {"eps", 0.5}, {"omega_min", 1}, {"omega_max", 100}, {"points", 199}},
       run_floquet_chart},
      {"floquet-gamma", "Floquet discriminant and multipliers at one frequency",
       {{"variant", 1}, {"square", 1}, {"delta", 0.1}, {"eps", 0.5}, {"omega", 2}}, run_floquet_gamma},
      {"floquet-poincare", "strobed forced Duffing map and cycle detection",
       {{"delta", 0.1}, {"kappa", 0.25}, {"gamma", 1.5}, {"omega", 1}, {"strobes", 500}, {"transient", 100},
        {"max_period", 8}, {"cycle_tol", 1e-3}, {"x0", 0.1}, {"v0", 0}},
       run_floquet_poincare},
      {"fk-mi", "Fisher-Kolmogorov relaxation from noise", mi_defaults(1.0, 20 * M_PI, 512, 40, 1e-2, 0.5, 1e-3),
       run_fk_mi},
      {"greens-cos", "Green's function of u'' + k^2 u with Neumann ends", {{"k", 1}, {"l", 1}, {"points", 41}},
       run_greens_cos},
      {"greens-ex1", "Green's function of u'' with u(0) = u'(l) = 0", {{"l", 1}, {"points", 41}}, run_greens_ex1},
      {"greens-modified", "modified Green's function for the Neumann Laplacian", {{"l", 1}, {"points", 41}},
       run_greens_modified},
      {"greens-radial", "Green's function of (r u')' bounded at the origin", {{"l", 1}, {"points", 41}},
       run_greens_radial},
      {"greens-sl2", "Green's function of u'' + 2u with a Robin end", {{"points", 41}}, run_greens_sl2},
      {"ks-mi", "Kuramoto-Sivashinsky instability growth", mi_defaults(0.4, 16 * M_PI, 256, 60, 1e-2, 0.1, 1e-3),
       run_ks_mi},
      {"lpm-spectrum", "point spectra of the soliton linearization", {{"halfwidth", 20}, {"n", 4000}},
       run_lpm_spectrum},
      {"modecouple", "resonant mode switching in the square-well waveguide",
       {{"halfwidth", 40}, {"n", 4096}, {"eps", 0.2}, {"omega", 0}, {"t_on", 0}, {"t_off", 1000}, {"t_end", 1000},
        {"dt", 0.02}, {"record_dt", 1}},
       run_modecouple},
      {"ms-damped", "multiple-scales damped oscillator vs RK", {{"alpha", 1}, {"eps", 0.05}, {"t_end", 40}, {"dt", 0.05}},
       run_ms_damped},
      {"nls-mi", "NLS modulational instability of a carrier", [] {
         Params p = mi_defaults(1.0, 16 * M_PI, 512, 30, 1e-3, 0.1, 1e-7);
         p["A"] = 1.0;
         p["broadband"] = 1.0;
         return p;
       }(),
       run_nls_mi},
      {"phaseplane", "equilibria and their types for the model catalog",
       {{"gamma", 0.5}, {"omega", 1}, {"a", 1}, {"c", 1}, {"alpha", 1}, {"mu", 0.5}, {"sigma", 10}, {"r", 28},
        {"b", 8.0 / 3.0}},
       run_phaseplane},
      {"rayleigh", "Rayleigh relaxation oscillation", {{"eps", 0.1}, {"t_end", 20}, {"dt", 0.01}}, run_rayleigh},
      {"soliton-decay", "damped NLS soliton amplitude decay",
       {{"gamma", 1}, {"eps", 0.05}, {"eta", 1}, {"L", 16 * M_PI}, {"n", 1024}, {"t_end", 10}, {"dt", 1e-3},
        {"record_dt", 0.1}},
       run_soliton_decay},
      {"sturm", "Robin Sturm-Liouville eigenvalues and expansion solution", {{"terms", 200}, {"mu", 2}, {"grid", 2000}},
       run_sturm},
      {"vdp-ms", "multiple-scales Van der Pol transient vs RK", {{"alpha", 0.5}, {"eps", 0.05}, {"t_end", 100}, {"dt", 0.05}},
       run_vdp_ms},
      {"vdp-pl", "Poincare-Lindstedt Van der Pol limit cycle vs RK", {{"eps", 0.1}, {"t_end", 50}, {"dt", 0.05}},
       run_vdp_pl},
      {"wkb-eigen", "WKB eigenvalues for Q = (x + pi)^4 vs grid", {{"modes", 20}, {"grid", 8000}}, run_wkb_eigen},
  };
  std::sort(r.begin(), r.end(), [](const ExperimentDef& a, const ExperimentDef& b) { return a.name < b.name; });
  return r;
}

}  // namespace

const std::vector<ExperimentDef>& list_experiments() {
  static const std::vector<ExperimentDef> registry = build_registry();
  return registry;
}

const ExperimentDef& find_experiment(const std::string& name) {
  for (const ExperimentDef& d : list_experiments())
    if (d.name == name) return d;
  throw std::invalid_argument("unknown experiment '" + name + "'");
}

Params resolve_params(const ExperimentDef& def, const Params& overrides) {
  Params p = def.defaults;
  for (const auto& [k, v] : overrides) {
    if (!p.count(k)) throw std::invalid_argument("unknown parameter '" + k + "' for experiment " + def.name);
    if (!std::isfinite(v)) throw std::invalid_argument("parameter '" + k + "' must be finite");
    p[k] = v;
  }
  return p;
}

ExperimentOutput run_experiment(const ExperimentSpec& spec, const RunContext& ctx) {
  const ExperimentDef& def = find_experiment(spec.name);
  return def.run(resolve_params(def, spec.params), ctx);
}

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_csv(std::ostream& os, const Table& t) {
  for (std::size_t i = 0; i < t.header.size(); ++i) os << (i ? "," : "") << t.header[i];
  os << '\n';
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) os << ',';
      if (const double* d = std::get_if<double>(&row[i])) os << format_number(*d);
      else if (const long long* n = std::get_if<long long>(&row[i])) os << *n;
      else os << std::get<std::string>(row[i]);
    }
    os << '\n';
  }
}

void parallel_for(int n, int jobs, const std::function<void(int)>& fn) {
  if (n <= 0) return;
  jobs = std::max(1, std::min(jobs, n));
  if (jobs == 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr err;
  std::mutex err_mu;
  std::vector<std::thread> pool;
  for (int w = 0; w < jobs; ++w)
    pool.emplace_back([&] {
      for (int i = next++; i < n; i = next++) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(err_mu);
          if (!err) err = std::current_exception();
        }
      }
    });
  for (auto& th : pool) th.join();
  if (err) std::rethrow_exception(err);
}

}  // namespace apx
