#include "apx/modecouple.hpp"

#include <cmath>
#include <stdexcept>

namespace apx {

double well_profile(double x) { return std::abs(x) < 5.0 ? -1.0 : 0.0; }

WellModes well_modes(double halfwidth, int n) {
  if (halfwidth < 20 || n < 2000) throw std::invalid_argument("well_modes needs halfwidth >= 20, n >= 2000");
  WellModes wm;
  wm.halfwidth = halfwidth;
  wm.n = n;
  const double h = wm.h();
  wm.x.resize(n);
  wm.n0.resize(n);
  for (int j = 0; j < n; ++j) {
    wm.x(j) = -halfwidth + j * h;
    wm.n0(j) = well_profile(wm.x(j));
  }
  const int m = n - 1;  // unknowns at j = 1..n-1
  Vec d(m), e = Vec::Constant(m - 1, -0.5 / (h * h));
  for (int i = 0; i < m; ++i) d(i) = 1.0 / (h * h) + wm.n0(i + 1);
  const Vec vals = eig_sym_tridiag(d, e).values;
  std::vector<double> bound;
  for (Eigen::Index i = 0; i < vals.size() && vals(i) < 0.0; ++i) bound.push_back(vals(i));
  if (bound.empty()) return wm;
  const Mat vecs = tridiag_eigvecs(d, e, Eigen::Map<const Vec>(bound.data(), bound.size()));
  for (std::size_t b = 0; b < bound.size(); ++b) {
    Vec v = Vec::Zero(n);
    v.segment(1, m) = vecs.col(b);
    v /= std::sqrt(v.squaredNorm() * h);
    // even modes positive at the centre, odd modes positive just right of it
    const int mid = n / 2;
    const double probe = b % 2 == 0 ? v(mid) : v(mid + n / 32);
    if (probe < 0) v = -v;
    wm.lambdas.push_back(bound[b]);
    wm.modes.push_back(v);
  }
  return wm;
}

TwoLevelState rabi_solution(cplx U0, double c, double delta, double t) {
  const double om = std::sqrt(c * c + 0.25 * delta * delta);
  if (om == 0.0) return {U0, 0.0};
  const cplx I(0.0, 1.0);
  return {U0 * (std::cos(om * t) - I * delta / (2 * om) * std::sin(om * t)),
          U0 * (I * c / om) * std::sin(om * t)};
}

TwoLevelState linear_flow_expm(const TwoLevelState& s0, double c, double delta, double t) {
  // x' = i M x with M symmetric
  Eigen::Matrix2d M;
  M << -0.5 * delta, c, c, 0.5 * delta;
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(M);
  const Eigen::Matrix2cd V = es.eigenvectors().cast<cplx>();
  Eigen::Vector2cd phase;
  for (int i = 0; i < 2; ++i) phase(i) = std::exp(cplx(0.0, es.eigenvalues()(i) * t));
  const Eigen::Vector2cd x0(s0.u, s0.v);
  const Eigen::Vector2cd x = V * phase.asDiagonal() * V.transpose() * x0;
  return {x(0), x(1)};
}

OdeSystem two_level_system(double eps, const Coupling& k) {
  OdeSystem s;
  s.dim = 4;
  s.params = Vec::Zero(0);
  s.rhs = [eps, k](double, const Vec& y, const Vec&) {
    const cplx u(y(0), y(1)), v(y(2), y(3));
    const double pu = std::norm(u), pv = std::norm(v);
    const cplx I(0.0, 1.0);
    // i u' = -c v + Delta/2 u - eps (...) u
    const cplx du = I * (k.c * v - 0.5 * k.delta * u + eps * (k.cjj * pu + k.cjk * pv) * u);
    const cplx dv = I * (k.c * u + 0.5 * k.delta * v + eps * (k.ckj * pu + k.ckk * pv) * v);
    Vec d(4);
    d << du.real(), du.imag(), dv.real(), dv.imag();
    return d;
  };
  return s;
}

TwoLevelState two_level_flow(const TwoLevelState& s0, double eps, const Coupling& k, double t,
                             double tol) {
  Vec y0(4);
  y0 << s0.u.real(), s0.u.imag(), s0.v.real(), s0.v.imag();
  if (t == 0.0) return s0;
  const Vec y = integrate_final(two_level_system(eps, k), 0.0, t, y0, tol);
  return {cplx(y(0), y(1)), cplx(y(2), y(3))};
}

SwitchSeries resonant_switch_experiment(const WellModes& wm, const SwitchConfig& cfg) {
  const int nb = static_cast<int>(wm.modes.size());
  if (cfg.from < 1 || cfg.to < 1 || cfg.from > nb || cfg.to > nb)
    throw std::invalid_argument("mode index outside the bound-state range");
  if (cfg.eps > 0.3) throw std::invalid_argument("resonant switching requires eps <= 0.3");
  if (!(cfg.dt > 0) || !(cfg.t_end > 0)) throw std::invalid_argument("dt and t_end must be positive");
  const int n = wm.n;
  const double h = wm.h(), L = 2 * wm.halfwidth;
  SwitchSeries out;
  out.omega = cfg.omega != 0.0 ? cfg.omega : wm.lambdas[cfg.to - 1] - wm.lambdas[cfg.from - 1];
  const double om = out.omega, eps = cfg.eps;

  // exact time integral of the window-clipped modulation 1 + eps cos(om s)
  auto modulation = [&](double a, double b) {
    double s = b - a;
    const double lo = std::max(a, cfg.t_on), hi = std::min(b, cfg.t_off);
    if (hi > lo && eps != 0.0) s += om != 0.0 ? eps * (std::sin(om * hi) - std::sin(om * lo)) / om
                                               : eps * (hi - lo);
    return s;
  };

  const FftPlan<double> plan(n);
  const Vec k = fft_wavenumbers(n, L);
  const double dt = cfg.dt;
  CVec disp(n);
  for (int j = 0; j < n; ++j) disp(j) = std::exp(cplx(0.0, -0.5 * k(j) * k(j) * dt));

  CVec u = wm.modes[cfg.from - 1].cast<cplx>();
  auto record = [&](double t) {
    Vec e(nb);
    double total = u.squaredNorm() * h, s = 0.0;
    for (int b = 0; b < nb; ++b) {
      const cplx p = wm.modes[b].cast<cplx>().dot(u) * h;
      e(b) = std::norm(p);
      s += e(b);
    }
    out.t.push_back(t);
    out.energy.push_back(e);
    out.leakage.push_back(total - s);
  };
  record(0.0);
  const long steps = std::lround(cfg.t_end / dt);
  const long rec_every = std::max(1L, std::lround(cfg.record_dt / dt));
  auto potential = [&](double a, double b) {
    const double w = modulation(a, b);
    for (int j = 0; j < n; ++j)
      if (wm.n0(j) != 0.0) u(j) *= std::exp(cplx(0.0, -wm.n0(j) * w));
  };
  for (long s = 0; s < steps; ++s) {
    const double t = s * dt;
    potential(t, t + 0.5 * dt);
    plan.forward(u);
    u.array() *= disp.array();
    plan.inverse(u);
    potential(t + 0.5 * dt, t + dt);
    if ((s + 1) % rec_every == 0) {
      if (!u.allFinite()) throw DivergedError("switching run produced non-finite values", t + dt);
      record((s + 1) * dt);
    }
  }
  return out;
}

}  // namespace apx
