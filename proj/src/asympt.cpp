#include "apx/asympt.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace apx {

double reg_ivp_u0(double A, double B, double t) {
  return 0.5 * (A + B) * std::exp(t) + 0.5 * (A - B) * std::exp(-t);
}

double reg_ivp_u1(double A, double B, double t) {
  return (A * A - 2 * A * B - 2 * B * B) / 6.0 * std::exp(t) +
         (A * A + 2 * A * B - 2 * B * B) / 6.0 * std::exp(-t) +
         (A + B) * (A + B) / 12.0 * std::exp(2 * t) + (A - B) * (A - B) / 12.0 * std::exp(-2 * t) -
         0.5 * (A * A - B * B);
}

double reg_ivp_eval(double A, double B, double eps, double t) {
  return reg_ivp_u0(A, B, t) + eps * reg_ivp_u1(A, B, t);
}

double reg_bvp_eval(double A, double B, double x) {
  const double e = std::exp(1.0), den = 1.0 - e * e;
  // the decaying coefficient carries e so that u(0) = A
  return (A - B * e) / den * std::exp(x) - (e * A - B) / den * std::exp(1.0 - x);
}

EigPerturbation eig_perturb(int n, double A, const std::vector<double>& a) {
  if (n < 1) throw std::invalid_argument("eig_perturb: mode index starts at 1");
  if (A == 0.0) throw std::invalid_argument("eig_perturb: A must be nonzero");
  EigPerturbation out;
  const auto coeff = [&](int m) { return m <= static_cast<int>(a.size()) ? a[m - 1] : 0.0; };
  out.lambda1 = coeff(n) / A;
  out.u1.assign(a.size(), 0.0);
  for (int m = 1; m <= static_cast<int>(a.size()); ++m) {
    if (m == n) continue;
    out.u1[m - 1] = coeff(m) / ((n * n - m * m) * M_PI * M_PI);
  }
  return out;
}

double pl_omega1(const RealFn& f, double A, int panels) {
  if (A == 0.0) throw std::invalid_argument("pl_omega1: A must be nonzero");
  const double s = quad([&](double tau) { return f(A * std::sin(tau)) * std::sin(tau); }, 0.0,
                        2 * M_PI, panels);
  return -s / (2 * M_PI * A);
}

double PLExpansion::operator()(double t) const {
  const double tau = (omega[0] + eps * omega[1]) * t;
  return u0(tau) + eps * u1(tau);
}

PLExpansion duffing_pl(double A, double eps) {
  PLExpansion pl;
  pl.A = A;
  pl.eps = eps;
  pl.omega[0] = 1.0;
  pl.omega[1] = 3.0 * A * A / 8.0;
  // solvability at second order with u1'(0) = 0 in tau
  pl.omega[2] = 3.0 * A * A * A * A / 256.0;
  const double c = A * A * A / 32.0;
  pl.u0 = [A](double tau) { return A * std::sin(tau); };
  pl.u1 = [c](double tau) { return 3 * c * std::sin(tau) - c * std::sin(3 * tau); };
  return pl;
}

double duffing_pl_eval(double A, double eps, double t) { return duffing_pl(A, eps)(t); }

double vdp_pl_frequency(double eps) { return 1.0 + 7.0 * eps * eps / 16.0; }

double vdp_pl_eval(double eps, double t) {
  const double tau = vdp_pl_frequency(eps) * t;
  return 2 * std::cos(tau) + eps * (0.75 * std::sin(tau) - 0.25 * std::sin(3 * tau));
}

double ms_damped_eval(double alpha, double eps, double t) {
  const double tau = eps * t;
  return alpha * std::exp(-tau) * std::cos(t + 0.5 * tau);
}

double ms_damped_exact(double alpha, double eps, double t) {
  const double w = std::sqrt(1 + eps - eps * eps);
  return alpha * std::exp(-eps * t) * (std::cos(w * t) + eps / w * std::sin(w * t));
}

double vdp_ms_amplitude(double alpha, double eps, double t) {
  if (!(alpha > 0)) throw std::invalid_argument("vdp_ms: alpha must be positive");
  const double rho = 4 * alpha * alpha / (alpha * alpha + (4 - alpha * alpha) * std::exp(-eps * t));
  return std::sqrt(rho);
}

double vdp_ms_eval(double alpha, double eps, double t) {
  return vdp_ms_amplitude(alpha, eps, t) * std::cos(t);
}

double secular_u1(double A, double t) { return -A * t * std::sin(t); }

std::vector<ResponsePoint> duffing_response(double kappa, double gamma, double delta,
                                            const std::vector<double>& grid) {
  std::vector<ResponsePoint> out;
  out.reserve(grid.size());
  for (double g : grid) {
    if (!std::isfinite(g)) throw std::invalid_argument("duffing_response: non-finite grid value");
    ResponsePoint p{g, {}};
    if (delta == 0.0) {
      // 3/4 kappa A^3 + (1 - omega^2) A - gamma = 0
      p.amplitudes = solve_cubic(0.75 * kappa, 0.0, 1.0 - g * g, -gamma);
    } else if (gamma == 0.0) {
      p.amplitudes = {0.0};
    } else {
      const double k = 0.75 * kappa;
      for (double y : solve_cubic(k * k, -2 * k * g, g * g + delta * delta, -gamma * gamma))
        if (y > 0) p.amplitudes.push_back(std::sqrt(y));
    }
    std::sort(p.amplitudes.begin(), p.amplitudes.end());
    out.push_back(std::move(p));
  }
  return out;
}

double damped_response_residual(double kappa, double gamma, double delta, double beta, double R) {
  const double y = R * R, d = beta - 0.75 * kappa * y;
  return y * (delta * delta + d * d) - gamma * gamma;
}

double damped_response_discriminant(double kappa, double gamma, double delta, double beta) {
  const double k = 0.75 * kappa;
  return cubic_discriminant(k * k, -2 * k * beta, beta * beta + delta * delta, -gamma * gamma);
}

namespace {

OdeSystem second_order(std::function<double(double, double, double)> accel, double eps) {
  OdeSystem s;
  s.dim = 2;
  s.params = Vec::Constant(1, eps);
  s.rhs = [accel](double, const Vec& y, const Vec& p) {
    Vec d(2);
    d << y(1), accel(y(0), y(1), p(0));
    return d;
  };
  return s;
}

}  // namespace

OdeSystem duffing_system(double eps) {
  return second_order([](double u, double, double e) { return -u - e * u * u * u; }, eps);
}

OdeSystem vdp_system(double eps) {
  return second_order([](double u, double v, double e) { return -e * (u * u - 1) * v - u; }, eps);
}

OdeSystem reg_system(double eps) {
  return second_order([](double u, double, double e) { return u + e * u * u; }, eps);
}

OdeSystem damped_system(double eps) {
  return second_order([](double u, double v, double e) { return -2 * e * v - (1 + e) * u; }, eps);
}

std::vector<double> upward_crossings(const Trajectory& tr, int component) {
  std::vector<double> out;
  for (std::size_t i = 1; i < tr.t.size(); ++i) {
    const double a = tr.y[i - 1](component), b = tr.y[i](component);
    if (a < 0 && b >= 0) out.push_back(tr.t[i - 1] + (tr.t[i] - tr.t[i - 1]) * (-a) / (b - a));
  }
  return out;
}

double measured_period(const OdeSystem& sys, const Vec& y0, double t_discard, double t_end,
                       double dt_sample, double tol) {
  const Vec start = t_discard > 0 ? integrate_final(sys, 0.0, t_discard, y0, tol) : y0;
  const Trajectory tr = integrate_sampled(sys, t_discard, t_end, start, dt_sample, tol);
  const std::vector<double> c = upward_crossings(tr);
  if (c.size() < 2) throw NumericalError("measured_period: fewer than two upward crossings");
  return (c.back() - c.front()) / static_cast<double>(c.size() - 1);
}

}  // namespace apx
