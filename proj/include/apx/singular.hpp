#pragma once

#include "apx/numkit.hpp"

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace apx {

// eps u'' + (1 + eps) u' + u = 0, u(0) = 0, u(1) = 1
struct BlValues {
  double exact;
  double uniform;
};

BlValues bl_example1(double eps, double x);

// pieces of the uniform solution, so that uniform = outer + inner - match
double bl_example1_outer(double x);
double bl_example1_inner(double eps, double x);
double bl_example1_match();

enum class LayerSide { Left, Right, Internal };

struct Rational {
  int num = 1;
  int den = 1;
  double value() const { return static_cast<double>(num) / den; }
};

struct LayerReport {
  LayerSide side;
  double location;        // layer position
  Rational width_exponent;  // width = eps^q
  std::string reason;
};

class UnsupportedCase : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Layer placement for eps u'' + b(x) u' + c(x) u = 0 on [x0, x1].
LayerReport layer_locate(const RealFn& b, double x0, double x1, int samples = 2001);

// eps u'' - x^2 u' - u = 0, u(0) = u(1) = 1
double bl_double_uniform(double eps, double x);

// Finite differences on a grid clustered at both ends.
struct BvpSolution {
  Vec x;
  Vec u;
};
BvpSolution bl_double_oracle(double eps, int n = 2000);

// Q with first and second derivatives.
struct QFunction {
  RealFn q;
  RealFn dq;
  RealFn d2q;
};

enum class WkbCatalog { Airy, ParabolicCyl, LogSquared, PowerQuartic };

QFunction catalog_q(WkbCatalog cat, double nu = 0.0);

// + branch; the - branch negates s0 and s2. With `oscillatory`, Q < 0 and s0, s2
// hold the coefficients of i computed from |Q|.
struct WkbTerms {
  RealFn s0, s1, s2, s3;
  bool oscillatory = false;

  RealFn branch_s0(int sign) const;
  RealFn branch_s2(int sign) const;
};

class TurningPointError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Generic terms use the quadrature phase integral anchored at `anchor`.
WkbTerms wkb_terms(const QFunction& Q, double anchor, bool oscillatory = false);
WkbTerms wkb_terms(WkbCatalog cat, double nu = 0.0);

// Eikonal residual |S0'^2 - Q| by central differences at the sample points.
double eikonal_residual(const WkbTerms& terms, const QFunction& Q, const std::vector<double>& xs);

struct WkbValidity {
  bool adjacent[3];   // |delta S_{n+1} / S_n| < 0.1, n = 0, 1, 2
  bool small[2];      // |delta^n S_{n+1}| < 0.1, n = 1, 2
  int truncation;     // highest order worth keeping
};

WkbValidity wkb_validity(const WkbTerms& terms, double delta, double xa, double xb);

struct WkbEigen {
  double energy;
  RealFn mode;  // normalized with weight Q on [0, pi]
};

WkbEigen wkb_eigen(const RealFn& q, int n);

// Dirichlet grid oracle for u'' + E Q u = 0 on [0, pi]; lowest `count` values.
Vec wkb_grid_eigenvalues(const RealFn& q, int n_grid, int count);

// u = v - v^3/3 on the slow manifold
double rayleigh_outer(double v0);
double rayleigh_inner_residual(double v0, double xi, double C);

// u' = v, eps v' = v - v^3/3 - u
OdeSystem rayleigh_system(double eps);

double rayleigh_period(double eps);

// Limit eps -> 0: time spent on the two slow branches.
double rayleigh_relaxation_period();

}  // namespace apx
