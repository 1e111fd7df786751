#pragma once

#include "apx/numkit.hpp"

#include <vector>

namespace apx {

// u'' - u = eps u^2, u(0) = A, u'(0) = B
double reg_ivp_u0(double A, double B, double t);
double reg_ivp_u1(double A, double B, double t);
double reg_ivp_eval(double A, double B, double eps, double t);

// leading order of u'' - u = eps u^2, u(0) = A, u(1) = B
double reg_bvp_eval(double A, double B, double x);

struct EigPerturbation {
  double lambda1;
  std::vector<double> u1;  // coefficient of sin(m pi x), index m-1; C = 0
};

// -(u'' + lambda u) perturbed by eps f(x) u with f = sum a_m sin(m pi x);
// a[m-1] holds a_m.
EigPerturbation eig_perturb(int n, double A, const std::vector<double>& a);

// First Poincare-Lindstedt frequency correction for u'' + u = eps f(u) with
// u0 = A sin(tau).
double pl_omega1(const RealFn& f, double A, int panels = 2048);

struct PLExpansion {
  double A;
  double eps;
  double omega[3];  // omega_0, omega_1, omega_2
  RealFn u0;        // of tau
  RealFn u1;

  double operator()(double t) const;
};

PLExpansion duffing_pl(double A, double eps);
double duffing_pl_eval(double A, double eps, double t);

double vdp_pl_eval(double eps, double t);
double vdp_pl_frequency(double eps);

// u'' + 2 eps u' + (1 + eps) u = 0, u(0) = alpha, u'(0) = 0
double ms_damped_eval(double alpha, double eps, double t);
double ms_damped_exact(double alpha, double eps, double t);

// transient Van der Pol amplitude from u(0) = alpha
double vdp_ms_amplitude(double alpha, double eps, double t);
double vdp_ms_eval(double alpha, double eps, double t);

// naive O(eps) term of u'' + (1+eps)^2 u = 0, u = A cos t + eps u1
double secular_u1(double A, double t);

struct ResponsePoint {
  double omega;  // beta in the damped branch
  std::vector<double> amplitudes;
};

// delta == 0: undamped, omega^2 = 1 + 3/4 kappa A^2 - gamma/A over an omega grid.
// delta > 0: damped, R^2 {delta^2 + (beta - 3/4 kappa R^2)^2} = gamma^2 over a beta grid.
std::vector<ResponsePoint> duffing_response(double kappa, double gamma, double delta,
                                            const std::vector<double>& grid);

double damped_response_residual(double kappa, double gamma, double delta, double beta, double R);

// Sign of the damped-response cubic discriminant in R^2 at beta.
double damped_response_discriminant(double kappa, double gamma, double delta, double beta);

// ODE catalog used by the oracles
OdeSystem duffing_system(double eps);           // u'' + u + eps u^3 = 0
OdeSystem vdp_system(double eps);               // u'' + eps (u^2 - 1) u' + u = 0
OdeSystem reg_system(double eps);               // u'' - u = eps u^2
OdeSystem damped_system(double eps);            // u'' + 2 eps u' + (1+eps) u = 0

// Upward zero crossings of the first component, linear interpolation between
// dense-output samples.
std::vector<double> upward_crossings(const Trajectory& tr, int component = 0);

double measured_period(const OdeSystem& sys, const Vec& y0, double t_discard, double t_end,
                       double dt_sample = 1e-3, double tol = 1e-11);

}  // namespace apx
