#pragma once

#include "apx/numkit.hpp"

#include <stdexcept>
#include <vector>

namespace apx {

// alpha u + beta u' = 0
struct RobinBc {
  double alpha = 1.0;
  double beta = 0.0;
};

// L = a(x) d2/dx2 + b(x) d/dx + c(x) on [x0, x1]
struct OperatorCoeffs {
  Poly a{1.0};
  Poly b{0.0};
  Poly c{0.0};
  double x0 = 0.0;
  double x1 = 1.0;
  RobinBc left;
  RobinBc right;

  void validate() const;
};

// Function with its first derivative.
struct Smooth {
  RealFn f;
  RealFn df;
};

OperatorCoeffs formal_adjoint(const OperatorCoeffs& op);

bool is_formally_self_adjoint(const OperatorCoeffs& op);

// J(u,v) = a v u' - (a v)' u + b u v
double conjunct(const OperatorCoeffs& op, const Smooth& u, const Smooth& v, double x);

struct FredholmResult {
  double inner_product;
  bool solvable;
};

FredholmResult fredholm_check(const RealFn& f, const RealFn& v, const RealFn& weight, double x0,
                              double x1);

enum class SlProblem { DirichletLaplace, RobinExample };

struct EigenSet {
  std::vector<double> lambdas;
  std::vector<double> norm_constants;
  std::vector<RealFn> eigfuncs;
  RealFn weight;
  double x0 = 0.0;
  double x1 = 1.0;
};

// -u'' = lambda u. DirichletLaplace on [0,l]; RobinExample on [0,1] with
// u(0) = 0, u(1) + u'(1) = 0.
EigenSet sl_eigen(SlProblem problem, int n_max, double l = 1.0);

// k-th positive root of s + tan s = 0, bracketed in ((k-1/2)pi, (k+1/2)pi).
double robin_root(int k);

// Finite-difference oracle for the Robin problem: lowest `count` eigenvalues.
Vec robin_grid_eigenvalues(int n_grid, int count);

class NoSolution : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ExpansionSolution {
  std::vector<double> b;  // <f, u_n>
  std::vector<double> c;  // b_n / (lambda_n - mu)
  std::vector<RealFn> modes;
  bool non_unique = false;

  double operator()(double x) const;
};

ExpansionSolution expansion_solve(const EigenSet& eigs, const RealFn& f, double mu,
                                  int n_terms = 100);

double inner(const RealFn& f, const RealFn& g, double x0, double x1, int n = 2048,
             const RealFn& weight = {});

}  // namespace apx
