#include "apx/patstab.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace apx {

double growth_rate(const Dispersion& d, double k) {
  const double k2 = k * k;
  switch (d.model) {
    case PdeModel::FisherKolmogorov:
      return d.mu - k2 - 3 * d.u0 * d.u0;
    case PdeModel::KuramotoSivashinsky:
      return k2 - d.mu * k2 * k2;
    case PdeModel::Nls:
      return std::sqrt(std::max(0.0, d.mu * k2 * d.A * d.A - 0.25 * k2 * k2));
  }
  return 0.0;
}

Band kmax_band(const Dispersion& d) {
  Band b;
  switch (d.model) {
    case PdeModel::FisherKolmogorov: {
      const double top = d.mu - 3 * d.u0 * d.u0;
      if (top <= 0) return b;
      return {true, 0.0, 0.0, std::sqrt(top)};
    }
    case PdeModel::KuramotoSivashinsky:
      if (d.mu <= 0) return {true, std::numeric_limits<double>::infinity(), 0.0,
                             std::numeric_limits<double>::infinity()};
      return {true, 1.0 / std::sqrt(2 * d.mu), 0.0, 1.0 / std::sqrt(d.mu)};
    case PdeModel::Nls:
      if (d.mu <= 0 || d.A == 0) return b;
      return {true, std::abs(d.A) * std::sqrt(2 * d.mu), 0.0, 2 * std::abs(d.A) * std::sqrt(d.mu)};
  }
  return b;
}

InstabilityType classify_instability(double k0, double omega0) {
  const bool periodic = std::abs(k0) > 1e-10, oscillatory = std::abs(omega0) > 1e-10;
  if (periodic) return oscillatory ? InstabilityType::TypeIIo : InstabilityType::TypeIs;
  return oscillatory ? InstabilityType::TypeIIIo : InstabilityType::TypeIIIs;
}

const char* to_string(InstabilityType t) {
  switch (t) {
    case InstabilityType::TypeIs: return "I_s";
    case InstabilityType::TypeIIo: return "II_o";
    case InstabilityType::TypeIIIo: return "III_o";
    case InstabilityType::TypeIIIs: return "III_s";
  }
  return "?";
}

cplx soliton_value(const SolitonParams& p, double x) {
  const double s = x - p.x0;
  return p.eta / std::cosh(p.eta * s) * std::exp(cplx(0.0, p.xi * s + p.phi0));
}

Vec domain_nodes(double L, int n) {
  Vec x(n);
  for (int j = 0; j < n; ++j) x(j) = -0.5 * L + L * j / n;
  return x;
}

namespace {

Dispersion dispersion_of(const SimConfig& cfg) {
  Dispersion d;
  d.model = cfg.model;
  d.mu = cfg.mu;
  d.A = cfg.ic.level;
  d.u0 = cfg.model == PdeModel::FisherKolmogorov ? cfg.ic.level : 0.0;
  return d;
}

bool real_model(PdeModel m) { return m != PdeModel::Nls; }

struct Spectral {
  FftPlan<double> plan;
  Vec k;
  int n;

  Spectral(int n_, double L) : plan(n_), k(fft_wavenumbers(n_, L)), n(n_) {}

  CVec forward(const CVec& u) const {
    CVec v = u;
    plan.forward(v);
    return v;
  }
  CVec inverse(const CVec& v) const {
    CVec u = v;
    plan.inverse(u);
    return u;
  }
};

void record(SimResult& out, const Spectral& sp, const CVec& u, const CVec& uh, double t, double L,
            bool keep) {
  const int n = sp.n, half = n / 2;
  Vec a(half + 1);
  a(0) = std::abs(uh(0)) / n;
  for (int j = 1; j <= half; ++j) {
    const double p = std::norm(uh(j)) + std::norm(uh((n - j) % n));
    a(j) = std::sqrt(0.5 * p) / n;
  }
  if (half > 0) a(half) = std::abs(uh(half)) / n;
  out.spectrum.t.push_back(t);
  out.spectrum.amp.push_back(a);
  out.peak.push_back(u.cwiseAbs().maxCoeff());
  out.mass.push_back(u.cwiseAbs2().sum() * L / n);
  if (keep) out.fields.push_back({L, n, u, t});
}

void check_finite(const CVec& v, double t) {
  if (!v.allFinite()) throw DivergedError("field blew up (non-finite values)", t);
}

}  // namespace

CVec initial_field(const SimConfig& cfg) {
  const int n = cfg.n;
  const Vec x = domain_nodes(cfg.L, n);
  CVec u(n);
  if (cfg.ic.kind == IcKind::Soliton) {
    for (int j = 0; j < n; ++j) u(j) = soliton_value(cfg.ic.soliton, x(j));
    return u;
  }
  const Band band = kmax_band(dispersion_of(cfg));
  const Vec k = fft_wavenumbers(n, cfg.L);
  std::mt19937_64 rng(cfg.seed);
  std::uniform_real_distribution<double> phase(0.0, 2 * M_PI);
  CVec uh = CVec::Zero(n);
  auto seeded = [&](double kk) {
    if (cfg.ic.broadband) return true;
    if (!band.unstable) return false;
    const double a = std::abs(kk);
    if (a == 0.0) return cfg.model == PdeModel::FisherKolmogorov;
    return a > band.k_lo && a < band.k_hi;
  };
  const bool real = real_model(cfg.model);
  for (int j = 0; j < n; ++j) {
    const double th = phase(rng);
    if (!seeded(k(j))) continue;
    if (real && j > n / 2) continue;
    cplx c = cfg.ic.noise * std::exp(cplx(0.0, th));
    if (real && (j == 0 || j == n / 2)) c = cplx(cfg.ic.noise * std::cos(th), 0.0);
    uh(j) = c * static_cast<double>(n);
    if (real && j > 0 && j < n / 2) uh(n - j) = std::conj(uh(j));
  }
  Spectral sp(n, cfg.L);
  u = sp.inverse(uh);
  u.array() += cfg.ic.level;
  if (real) u = u.real().cast<cplx>();
  return u;
}

SimResult simulate(const SimConfig& cfg) {
  if (cfg.n < 2 || (cfg.n & (cfg.n - 1)) != 0) throw SizeError("grid size must be a power of two");
  if (!(cfg.t_end > 0) || !(cfg.dt > 0) || !(cfg.L > 0))
    throw std::invalid_argument("simulate requires positive t_end, dt and L");
  const int n = cfg.n;
  const Spectral sp(n, cfg.L);
  const Vec& k = sp.k;
  const double dt = cfg.dt;
  const int steps = static_cast<int>(std::llround(cfg.t_end / dt));
  const int rec_every = std::max(1, static_cast<int>(std::llround(cfg.record_dt / dt)));

  SimResult out;
  out.spectrum.k.resize(n / 2 + 1);
  for (int j = 0; j <= n / 2; ++j) out.spectrum.k(j) = 2 * M_PI * j / cfg.L;

  CVec u = initial_field(cfg);
  CVec uh = sp.forward(u);
  record(out, sp, u, uh, 0.0, cfg.L, cfg.keep_fields);

  // 2/3-rule mask for the quadratic and cubic terms of the real models
  Vec mask = Vec::Ones(n);
  if (real_model(cfg.model))
    for (int j = 0; j < n; ++j)
      if (std::abs(k(j)) > (2.0 / 3.0) * (M_PI * n / cfg.L)) mask(j) = 0.0;

  switch (cfg.model) {
    case PdeModel::Nls: {
      const double damp = cfg.eps * cfg.gamma;
      CVec disp(n);
      for (int j = 0; j < n; ++j) disp(j) = std::exp(cplx(0.0, -0.5 * k(j) * k(j) * dt));
      auto nonlinear = [damp](CVec& v, double tau) {
        const double decay = std::exp(-damp * tau);
        const double span = damp > 0 ? (1 - std::exp(-2 * damp * tau)) / (2 * damp) : tau;
        for (Eigen::Index j = 0; j < v.size(); ++j)
          v(j) *= decay * std::exp(cplx(0.0, std::norm(v(j)) * span));
      };
      for (int s = 1; s <= steps; ++s) {
        nonlinear(u, 0.5 * dt);
        uh = sp.forward(u);
        uh.array() *= disp.array();
        u = sp.inverse(uh);
        nonlinear(u, 0.5 * dt);
        if (s % rec_every == 0) {
          check_finite(u, s * dt);
          record(out, sp, u, sp.forward(u), s * dt, cfg.L, cfg.keep_fields);
        }
      }
      break;
    }
    case PdeModel::KuramotoSivashinsky: {
      CVec E(n), E2(n);
      for (int j = 0; j < n; ++j) {
        const double lin = k(j) * k(j) - cfg.mu * std::pow(k(j), 4);
        E(j) = std::exp(lin * dt);
        E2(j) = std::exp(0.5 * lin * dt);
      }
      auto N = [&](const CVec& vh) {
        CVec w = sp.inverse(vh);
        w = w.real().cwiseAbs2().cast<cplx>();
        CVec wh = sp.forward(w);
        for (int j = 0; j < n; ++j) wh(j) *= cplx(0.0, -0.5 * k(j)) * mask(j);
        return wh;
      };
      for (int s = 1; s <= steps; ++s) {
        const CVec k1 = N(uh);
        const CVec k2 = N(E2.cwiseProduct(uh + 0.5 * dt * k1));
        const CVec k3 = N(E2.cwiseProduct(uh) + 0.5 * dt * k2);
        const CVec k4 = N(E.cwiseProduct(uh) + dt * E2.cwiseProduct(k3));
        uh = E.cwiseProduct(uh) +
             dt / 6.0 * (E.cwiseProduct(k1) + 2.0 * E2.cwiseProduct(k2 + k3) + k4);
        if (s % 10 == 0 || s % rec_every == 0) check_finite(uh, s * dt);
        if (s % rec_every == 0) {
          u = sp.inverse(uh).real().cast<cplx>();
          record(out, sp, u, uh, s * dt, cfg.L, cfg.keep_fields);
        }
      }
      u = sp.inverse(uh).real().cast<cplx>();
      break;
    }
    case PdeModel::FisherKolmogorov: {
      CVec E(n);
      for (int j = 0; j < n; ++j) E(j) = std::exp((cfg.mu - k(j) * k(j)) * dt);
      auto N = [&](const CVec& vh) {
        const Vec w = sp.inverse(vh).real();
        CVec c = (-w.array().cube()).matrix().cast<cplx>();
        CVec ch = sp.forward(c);
        return CVec(ch.cwiseProduct(mask.cast<cplx>()));
      };
      for (int s = 1; s <= steps; ++s) {
        const CVec k1 = N(uh);
        const CVec pred = E.cwiseProduct(uh + dt * k1);
        const CVec k2 = N(pred);
        uh = E.cwiseProduct(uh) + 0.5 * dt * (E.cwiseProduct(k1) + k2);
        if (s % 10 == 0 || s % rec_every == 0) check_finite(uh, s * dt);
        if (s % rec_every == 0) {
          u = sp.inverse(uh).real().cast<cplx>();
          record(out, sp, u, uh, s * dt, cfg.L, cfg.keep_fields);
        }
      }
      u = sp.inverse(uh).real().cast<cplx>();
      break;
    }
  }
  check_finite(u, steps * dt);
  out.final_state = {cfg.L, n, u, steps * dt};
  return out;
}

DominantK measure_dominant_k(const SpectrumSeries& s, double t0, double t1, bool exclude_zero,
                             double saturation) {
  std::vector<std::size_t> idx;
  for (std::size_t r = 0; r < s.t.size(); ++r)
    if (s.t[r] >= t0 - 1e-12 && s.t[r] <= t1 + 1e-12) idx.push_back(r);
  if (idx.size() < 2) throw std::invalid_argument("measurement window holds fewer than two records");
  const Eigen::Index bins = s.k.size();
  DominantK out;
  out.slopes = Vec::Constant(bins, std::numeric_limits<double>::quiet_NaN());
  double best = -std::numeric_limits<double>::infinity();
  // bins at round-off level when the window opens never carried seeded energy
  const Vec& first = s.amp[idx.front()];
  const double floor = 1e-8 * (exclude_zero ? first.tail(bins - 1).maxCoeff() : first.maxCoeff());
  for (Eigen::Index j = exclude_zero ? 1 : 0; j < bins; ++j) {
    double st = 0, sy = 0, stt = 0, sty = 0;
    bool ok = first(j) > floor;
    for (std::size_t r : idx) {
      const double a = s.amp[r](j);
      if (!(a > 0)) {
        ok = false;
        break;
      }
      const double y = std::log(a), t = s.t[r];
      st += t;
      sy += y;
      stt += t * t;
      sty += t * y;
    }
    if (!ok) continue;
    const double m = static_cast<double>(idx.size());
    const double slope = (m * sty - st * sy) / (m * stt - st * st);
    out.slopes(j) = slope;
    if (slope > best) {
      best = slope;
      out.bin = static_cast<int>(j);
    }
  }
  if (out.bin >= 0) out.k_hat = s.k(out.bin);
  if (saturation < 0) {
    saturation = 0.0;
    for (const Vec& a : s.amp) saturation = std::max(saturation, a.tail(bins - 1).maxCoeff());
  }
  double window_max = 0.0;
  for (std::size_t r : idx) window_max = std::max(window_max, s.amp[r].tail(bins - 1).maxCoeff());
  out.unreliable = window_max > 0.1 * saturation;
  return out;
}

double linear_stage_end(const SpectrumSeries& s, double cap, bool exclude_zero) {
  double last = s.t.front();
  const Eigen::Index bins = s.k.size();
  for (std::size_t r = 0; r < s.t.size(); ++r) {
    const double m = exclude_zero ? s.amp[r].tail(bins - 1).maxCoeff() : s.amp[r].maxCoeff();
    if (m >= cap) break;
    last = s.t[r];
  }
  return last;
}

DecayFit soliton_decay_experiment(double gamma, double eps, double t_end, double L, int n, double dt) {
  SimConfig cfg;
  cfg.model = PdeModel::Nls;
  cfg.mu = 1.0;
  cfg.eps = eps;
  cfg.gamma = gamma;
  cfg.L = L;
  cfg.n = n;
  cfg.t_end = t_end;
  cfg.dt = dt;
  cfg.record_dt = 0.1;
  cfg.ic.kind = IcKind::Soliton;
  cfg.ic.soliton = SolitonParams{};
  const SimResult r = simulate(cfg);
  double st = 0, sy = 0, stt = 0, sty = 0;
  const double m = static_cast<double>(r.peak.size());
  for (std::size_t i = 0; i < r.peak.size(); ++i) {
    const double t = r.spectrum.t[i], y = std::log(r.peak[i]);
    st += t;
    sy += y;
    stt += t * t;
    sty += t * y;
  }
  DecayFit f;
  f.rate = (m * sty - st * sy) / (m * stt - st * st);
  f.ratio = r.peak.back() / r.peak.front();
  f.theory_rate = -2 * gamma * eps;
  return f;
}

SolitonRates soliton_slow_flow(const SolitonParams& p, const NlsForcing& F, double zeta_max,
                               int panels) {
  if (!(p.eta > 0)) throw std::invalid_argument("soliton amplitude must be positive");
  const double eta = p.eta;
  // F_hat(zeta) = exp(-i psi) F(u0 exp(i psi)) with u0 = eta sech(zeta), zeta = eta (x - x0)
  auto fhat = [&](double z) {
    const double sech = 1.0 / std::cosh(z), th = std::tanh(z);
    const double x = p.x0 + z / eta;
    const cplx rot = std::exp(cplx(0.0, p.xi * (x - p.x0) + p.phi0));
    const cplx u = eta * sech * rot;
    const cplx ux = (-eta * eta * sech * th + cplx(0.0, p.xi) * eta * sech) * rot;
    return F(u, ux) / rot;
  };
  auto proj = [&](const RealFn& w, bool imag) {
    return quad([&](double z) {
      const cplx f = fhat(z);
      return w(z) * (imag ? f.imag() : f.real());
    }, -zeta_max, zeta_max, panels);
  };
  auto sech = [](double z) { return 1.0 / std::cosh(z); };
  SolitonRates r;
  r.deta = proj(sech, true);
  r.dx0 = proj([&](double z) { return z * sech(z); }, true) / (eta * eta);
  r.dxi = eta * proj([&](double z) { return sech(z) * std::tanh(z); }, false);
  const double rhs4 = 0.5 * proj([&](double z) { return z * sech(z) * std::tanh(z); }, false);
  r.dphi0 = rhs4 - p.xi * r.dx0;
  return r;
}

namespace {

double lpm_potential(LinOp op, double x) {
  const double s = 1.0 / std::cosh(x);
  return (op == LinOp::Lplus ? 6.0 : 2.0) * s * s - 1.0;
}

}  // namespace

LpmSpectrum lpm_spectrum(LinOp op, double halfwidth, int n, double margin) {
  if (halfwidth < 15 || n < 1000) throw std::invalid_argument("lpm_spectrum needs halfwidth >= 15, n >= 1000");
  const double h = 2 * halfwidth / (n + 1);
  Vec d(n), e = Vec::Constant(n - 1, 1.0 / (h * h));
  for (int i = 0; i < n; ++i) d(i) = -2.0 / (h * h) + lpm_potential(op, -halfwidth + (i + 1) * h);
  const Vec vals = eig_sym_tridiag(d, e).values;
  LpmSpectrum out;
  out.continuum_edge = -std::numeric_limits<double>::infinity();
  for (Eigen::Index i = vals.size(); i-- > 0;) {
    if (vals(i) > -1.0 + margin) out.discrete.push_back(vals(i));
    else out.continuum_edge = std::max(out.continuum_edge, vals(i));
  }
  return out;
}

Vec apply_lpm(LinOp op, double halfwidth, int n, const RealFn& f) {
  const double h = 2 * halfwidth / (n + 1);
  Vec v(n + 2);
  for (int i = 0; i <= n + 1; ++i) v(i) = (i == 0 || i == n + 1) ? 0.0 : f(-halfwidth + i * h);
  Vec out(n);
  for (int i = 1; i <= n; ++i)
    out(i - 1) = (v(i - 1) - 2 * v(i) + v(i + 1)) / (h * h) + lpm_potential(op, -halfwidth + i * h) * v(i);
  return out;
}

double envelope_residual(double rho, const std::vector<double>& xi, double amplitude_scale) {
  if (!(rho > 0)) throw std::invalid_argument("envelope_residual requires rho > 0");
  const double a = std::sqrt(2 * rho), amp = amplitude_scale * a;
  double worst = 0.0;
  for (double z : xi) {
    const double s = 1.0 / std::cosh(a * z);
    const double u = amp * s;
    const double upp = amp * a * a * (s - 2 * s * s * s);
    worst = std::max(worst, std::abs(0.5 * upp + u * u * u - rho * u));
  }
  return worst;
}

OpoThreshold opo_threshold(double alpha, double delta1, double delta2, cplx pump_S) {
  OpoThreshold o;
  const cplx loss(alpha, delta2);
  o.critical = loss * cplx(1.0, delta1);
  o.magnitude = std::abs(o.critical);
  o.pump = pump_S / loss;
  o.trivial_stable = std::abs(pump_S) < o.magnitude;
  return o;
}

}  // namespace apx
