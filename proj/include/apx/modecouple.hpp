#pragma once

#include "apx/numkit.hpp"

#include <vector>

namespace apx {

// Square well n0 = -1 on |x| < 5. Periodic nodes x_j = -H + j 2H/n; the
// eigenproblem pins x_0 = -H to zero so modes and PDE share one grid.
struct WellModes {
  double halfwidth;
  int n;
  Vec x;
  Vec n0;
  std::vector<double> lambdas;  // ascending, in (-1, 0)
  std::vector<Vec> modes;       // sum v^2 h = 1

  double h() const { return 2 * halfwidth / n; }
};

double well_profile(double x);

// Bound states of -1/2 d2/dx2 + n0.
WellModes well_modes(double halfwidth = 40.0, int n = 4096);

struct TwoLevelState {
  cplx u;
  cplx v;
};

// Linear flow from (U0, 0): i u' + c v - Delta/2 u = 0, i v' + c u + Delta/2 v = 0.
TwoLevelState rabi_solution(cplx U0, double c, double delta, double t);

// Matrix-exponential reference for the linear flow from any state.
TwoLevelState linear_flow_expm(const TwoLevelState& s0, double c, double delta, double t);

struct Coupling {
  double c = 1.0;
  double delta = 0.0;
  double cjj = 1.0, cjk = 1.0, ckj = 1.0, ckk = 1.0;
};

OdeSystem two_level_system(double eps, const Coupling& k);

TwoLevelState two_level_flow(const TwoLevelState& s0, double eps, const Coupling& k, double t,
                             double tol = 1e-12);

struct SwitchConfig {
  int from = 1;  // 1-based mode indices
  int to = 3;
  double eps = 0.2;
  double omega = 0.0;  // 0 selects lambda_to - lambda_from
  double t_on = 0.0;
  double t_off = 1000.0;
  double t_end = 1000.0;
  double dt = 0.02;
  double record_dt = 1.0;
};

struct SwitchSeries {
  double omega;
  std::vector<double> t;
  std::vector<Vec> energy;   // |<u, v_n>|^2 per bound mode
  std::vector<double> leakage;  // ||u||^2 - sum of projections
};

// Split-step run of i u_t + 1/2 u_xx - n0 (1 + eps cos(omega t)) u = 0 from v_from;
// the forcing is active on [t_on, t_off].
SwitchSeries resonant_switch_experiment(const WellModes& wm, const SwitchConfig& cfg);

}  // namespace apx
