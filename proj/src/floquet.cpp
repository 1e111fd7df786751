#include "apx/floquet.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace apx {

namespace {

bool inverted(HillVariant v) {
  return v == HillVariant::LinearInverted || v == HillVariant::NonlinearInverted;
}

bool nonlinear(HillVariant v) {
  return v == HillVariant::NonlinearDown || v == HillVariant::NonlinearInverted;
}

}  // namespace

double HillProblem::period() const {
  if (!(omega > 0)) throw std::invalid_argument("forcing frequency must be positive");
  return 2 * M_PI / omega;
}

double HillProblem::p2(double t) const {
  const double T = period();
  double mod;
  if (shape == ForcingShape::Sine) {
    mod = std::sin(omega * t);
  } else {
    const double phase = t - T * std::floor(t / T);
    mod = phase < 0.5 * T ? 1.0 : -1.0;
  }
  const double p = delta + eps * mod;
  return inverted(variant) ? -p : p;
}

OdeSystem HillProblem::system() const {
  const HillProblem self = *this;
  const bool nl = nonlinear(variant);
  OdeSystem s;
  s.dim = 2;
  s.params = Vec::Zero(0);
  s.rhs = [self, nl](double t, const Vec& y, const Vec&) {
    Vec d(2);
    d << y(1), -self.p2(t) * (nl ? std::sin(y(0)) : y(0));
    return d;
  };
  return s;
}

FundamentalPair fundamental_pair(const HillProblem& prob, double tol) {
  const double T = prob.period();
  OdeSystem sys = prob.system();
  auto run = [&](Vec y) {
    if (prob.shape == ForcingShape::Square) {
      // each half is autonomous; pin the coefficient so the switch is exact
      for (int k = 0; k < 2; ++k) {
        const double c = prob.p2(k == 0 ? 0.25 * T : 0.75 * T);
        const bool nl = nonlinear(prob.variant);
        OdeSystem seg;
        seg.dim = 2;
        seg.params = Vec::Zero(0);
        seg.rhs = [c, nl](double, const Vec& z, const Vec&) {
          Vec d(2);
          d << z(1), -c * (nl ? std::sin(z(0)) : z(0));
          return d;
        };
        y = integrate_final(seg, k * 0.5 * T, (k + 1) * 0.5 * T, y, tol);
      }
      return y;
    }
    y = integrate_final(sys, 0.0, 0.5 * T, y, tol);
    return Vec(integrate_final(sys, 0.5 * T, T, y, tol));
  };
  const Vec a = run((Vec(2) << 1.0, 0.0).finished());
  const Vec b = run((Vec(2) << 0.0, 1.0).finished());
  return {a(0), a(1), b(0), b(1)};
}

FloquetResult discriminant(const HillProblem& prob, double tol) {
  const FundamentalPair fp = fundamental_pair(prob, tol);
  FloquetResult r;
  r.gamma = fp.x1 + fp.dx2;
  const double alpha = 0.5 * r.gamma;
  const cplx root = std::sqrt(cplx(alpha * alpha - 1.0));
  r.multipliers[0] = alpha + root;
  r.multipliers[1] = alpha - root;
  r.stable = std::abs(r.gamma) <= 2.0 + 1e-9;
  return r;
}

double square_wave_gamma(double s_first, double s_second, double h) {
  // x'' = s x over length h: [x, x'] -> [[C, S], [s S, C]] [x, x']
  auto transfer = [h](double s, double& C, double& S) {
    const double z = s * h * h;
    if (std::abs(z) < 1e-3) {
      C = 1 + z / 2 + z * z / 24 + z * z * z / 720;
      S = h * (1 + z / 6 + z * z / 120 + z * z * z / 5040);
    } else if (s > 0) {
      const double r = std::sqrt(s);
      C = std::cosh(r * h);
      S = std::sinh(r * h) / r;
    } else {
      const double r = std::sqrt(-s);
      C = std::cos(r * h);
      S = std::sin(r * h) / r;
    }
  };
  double C1, S1, C2, S2;
  transfer(s_first, C1, S1);
  transfer(s_second, C2, S2);
  return 2 * C1 * C2 + s_first * S1 * S2 + s_second * S2 * S1;
}

double mathieu_piecewise_gamma(double delta, double eps, double omega) {
  if (!(delta + eps > 0)) throw std::domain_error("piecewise discriminant requires delta + eps > 0");
  if (!(omega > 0)) throw std::invalid_argument("forcing frequency must be positive");
  const double h = M_PI / omega;
  return square_wave_gamma(delta + eps, delta - eps, h);
}

StabilityChart stability_chart(HillVariant variant, ForcingShape shape, double delta, double eps,
                               const std::vector<double>& omegas) {
  StabilityChart chart;
  auto gamma_at = [&](double w) {
    HillProblem p{variant, shape, delta, eps, w};
    return discriminant(p).gamma;
  };
  for (double w : omegas) {
    if (!std::isfinite(w) || !(w > 0)) throw std::invalid_argument("omega grid must be finite and positive");
    const double g = gamma_at(w);
    chart.rows.push_back({w, g, std::abs(g) <= 2.0 + 1e-9});
  }
  for (std::size_t i = 1; i < chart.rows.size(); ++i) {
    if (chart.rows[i].stable == chart.rows[i - 1].stable) continue;
    double a = chart.rows[i - 1].omega, b = chart.rows[i].omega;
    const bool sa = chart.rows[i - 1].stable;
    while (std::abs(b - a) > 1e-6) {
      const double m = 0.5 * (a + b);
      if ((std::abs(gamma_at(m)) <= 2.0 + 1e-9) == sa) a = m; else b = m;
    }
    chart.boundaries.push_back(0.5 * (a + b));
  }
  return chart;
}

std::optional<double> stabilization_threshold(const StabilityChart& chart) {
  if (chart.rows.empty() || !chart.rows.back().stable) return std::nullopt;
  std::size_t i = chart.rows.size();
  while (i > 0 && chart.rows[i - 1].stable) --i;
  return chart.rows[i].omega;
}

OdeSystem forced_duffing_system(const DuffingForcing& p) {
  OdeSystem s;
  s.dim = 2;
  s.params = Vec::Zero(0);
  s.rhs = [p](double t, const Vec& y, const Vec&) {
    Vec d(2);
    d << y(1), -p.delta * y(1) + y(0) - p.kappa * y(0) * y(0) * y(0) + p.gamma * std::cos(p.omega * t);
    return d;
  };
  return s;
}

std::vector<Eigen::Vector2d> poincare_map(const DuffingForcing& p, int n_points, int transient,
                                          const Eigen::Vector2d& x0, double tol) {
  if (n_points < 1) throw std::invalid_argument("poincare_map requires n_points >= 1");
  if (!(p.omega > 0)) throw std::invalid_argument("forcing frequency must be positive");
  const OdeSystem sys = forced_duffing_system(p);
  const double T = 2 * M_PI / p.omega;
  Vec y = x0;
  std::vector<Eigen::Vector2d> out;
  out.reserve(n_points);
  for (int k = 0; k < transient + n_points; ++k) {
    y = integrate_final(sys, k * T, (k + 1) * T, y, tol);
    if (k >= transient) out.emplace_back(y(0), y(1));
  }
  return out;
}

std::optional<int> detect_cycle(const std::vector<Eigen::Vector2d>& pts, int k_max, double tol) {
  if (k_max < 1) throw std::invalid_argument("detect_cycle requires k_max >= 1");
  if (static_cast<int>(pts.size()) < 4 * k_max)
    throw std::invalid_argument("detect_cycle needs at least 4 k_max points");
  const std::size_t start = pts.size() / 2;
  for (int k = 1; k <= k_max; ++k) {
    double worst = 0.0;
    for (std::size_t n = start; n + k < pts.size(); ++n)
      worst = std::max(worst, (pts[n + k] - pts[n]).norm());
    if (worst < tol) return k;
  }
  return std::nullopt;
}

}  // namespace apx
