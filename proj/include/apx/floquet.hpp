#pragma once

#include "apx/numkit.hpp"

#include <optional>
#include <vector>

namespace apx {

enum class HillVariant { LinearDown, LinearInverted, NonlinearDown, NonlinearInverted };
enum class ForcingShape { Sine, Square };

// x'' + s p(t) g(x) = 0 with p = delta + eps sin(omega t) (or its square wave),
// s = +1 down, -1 inverted, g(x) = x or sin x.
struct HillProblem {
  HillVariant variant = HillVariant::LinearDown;
  ForcingShape shape = ForcingShape::Sine;
  double delta = 1.0;
  double eps = 0.0;
  double omega = 1.0;

  double period() const;
  double p2(double t) const;  // coefficient of g(x), sign included
  OdeSystem system() const;
};

struct FundamentalPair {
  double x1, dx1, x2, dx2;  // at t = T
  double wronskian() const { return x1 * dx2 - dx1 * x2; }
};

// Integrates over [0, T/2] and [T/2, T] separately so that square waves are
// resolved exactly at the switch.
FundamentalPair fundamental_pair(const HillProblem& prob, double tol = 1e-11);

struct FloquetResult {
  double gamma;
  cplx multipliers[2];
  bool stable;
};

FloquetResult discriminant(const HillProblem& prob, double tol = 1e-11);

// Inverted square wave: x'' - (delta + eps) x = 0 on the first half period,
// x'' - (delta - eps) x = 0 on the second.
double mathieu_piecewise_gamma(double delta, double eps, double omega);

// Trace of the two-step transfer matrix for x'' = s_k x on half periods of length h.
double square_wave_gamma(double s_first, double s_second, double h);

struct ChartRow {
  double omega;
  double gamma;
  bool stable;
};

struct StabilityChart {
  std::vector<ChartRow> rows;
  std::vector<double> boundaries;  // omega where |Gamma| = 2, bisection to 1e-6
};

StabilityChart stability_chart(HillVariant variant, ForcingShape shape, double delta, double eps,
                               const std::vector<double>& omegas);

// Smallest grid omega above which every grid point is stable.
std::optional<double> stabilization_threshold(const StabilityChart& chart);

struct DuffingForcing {
  double delta = 0.1;
  double kappa = 0.25;
  double gamma = 1.5;
  double omega = 1.0;
};

// x'' + delta x' - x + kappa x^3 = gamma cos(omega t)
OdeSystem forced_duffing_system(const DuffingForcing& p);

std::vector<Eigen::Vector2d> poincare_map(const DuffingForcing& p, int n_points, int transient = 100,
                                          const Eigen::Vector2d& x0 = Eigen::Vector2d(0.1, 0.0),
                                          double tol = 1e-10);

std::optional<int> detect_cycle(const std::vector<Eigen::Vector2d>& pts, int k_max, double tol);

}  // namespace apx
