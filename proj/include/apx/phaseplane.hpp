#pragma once

#include "apx/numkit.hpp"

#include <map>
#include <string>
#include <vector>

namespace apx {

enum class EqKind {
  NodalSink,
  NodalSource,
  Saddle,
  ProperNode,
  ImproperNode,
  SpiralStable,
  SpiralUnstable,
  Center,
  Degenerate
};

enum class Stability { Stable, Unstable, NeutrallyStable };

std::string to_string(EqKind k);
std::string to_string(Stability s);

struct Classification {
  EqKind kind;
  Stability stability;
  Eigen::Vector2cd eigenvalues;
  bool degenerate = false;
  // +1 counter-clockwise, -1 clockwise, 0 for real eigenvalues
  int rotation = 0;
};

struct Equilibrium {
  Vec point;
  Mat jacobian;
  Eigen::VectorXcd eigenvalues;
  EqKind kind;
  Stability stability;
};

struct EquilibriaResult {
  std::vector<Equilibrium> points;
  std::vector<std::string> diagnostics;
};

Mat jacobian(const OdeSystem& sys, const Vec& point, double t = 0.0);

Classification classify(const Eigen::Matrix2d& jac);

EquilibriaResult find_equilibria(const OdeSystem& sys, const std::vector<Vec>& seeds);

struct ModelCatalogEntry {
  std::string name;
  OdeSystem system;
  std::vector<Vec> known_equilibria;
  std::map<std::string, double> params;
};

// x'' + gamma x' + omega^2 sin x = 0 as (x, x'); equilibria at k*pi, |k| <= wells.
ModelCatalogEntry pendulum(double gamma, double omega, int wells = 1);
// x' = (a - alpha y) x, y' = (alpha x - c) y
ModelCatalogEntry lotka_volterra(double a, double c, double alpha);
ModelCatalogEntry hopf_exemplar(double mu);
ModelCatalogEntry lorenz(double sigma, double r, double b);
std::vector<ModelCatalogEntry> model_catalog();

Eigen::Vector2d lv_orbit(double a, double c, double alpha, double K, double phi, double t);

double hopf_radius(double mu, double r0, double t);

struct PitchforkCheck {
  double normal_form;  // A* of A' ~ bA - A^3
  double lorenz;       // (x+y)/(2 eps) at the Lorenz fixed point, r = 1 + eps^2
};

PitchforkCheck lorenz_pitchfork_check(double sigma, double b, double eps);

}  // namespace apx
