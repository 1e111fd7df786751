#pragma once

#include "apx/lineops.hpp"
#include "apx/numkit.hpp"

#include <functional>
#include <stdexcept>
#include <string>

namespace apx {

enum class DeltaKind { Step, Algebraic, Gaussian, Sinc };

struct DeltaSequence {
  DeltaKind kind = DeltaKind::Step;
  double xi = 0.1;

  double operator()(double x) const;
};

// Integral of the sequence member over [a, b]; kinks of the step are honoured.
double impulse(const DeltaSequence& seq, double a, double b, int n = 200000);

// <f, delta_xi(x - x0)> over [a, b].
double sift(const RealFn& f, double x0, const DeltaSequence& seq, double a, double b,
            int n = 200000);

using Kernel = std::function<double(double, double)>;

struct GreensFunction {
  Kernel left_branch;   // x < xi
  Kernel right_branch;  // x > xi
  RealFn p;
  RealFn jump;          // [G_x] at x = xi
  Kernel left_dx;       // optional exact x-derivatives of the branches
  Kernel right_dx;
  double x0 = 0.0;
  double x1 = 1.0;

  double operator()(double x, double xi) const {
    return x < xi ? left_branch(x, xi) : right_branch(x, xi);
  }
};

enum class GreenSign { PlusLaplacian, SLMinusForm };

class ResonanceError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

// y1 meets the left condition, y2 the right one.
GreensFunction build_green_sl(const RealFn& p, const Smooth& y1, const Smooth& y2, GreenSign sign,
                              double x0, double x1);

struct GreenCheck {
  double continuity_gap;
  double jump_measured;
  double jump_expected;
};

GreenCheck check_green(const GreensFunction& G, double xi);

// u(x) = int G(x, xi) f(xi) dxi, split at x.
RealFn apply_green(const GreensFunction& G, const RealFn& f, int panels = 1024);

enum class GreenExample { Ex1, Cos, Radial, Sl2 };

struct GreenExampleParams {
  double l = 1.0;
  double k = 1.0;
};

GreensFunction green_example(GreenExample ex, const GreenExampleParams& prm = {});

class Unsolvable : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ModifiedGreen {
  GreensFunction G;
  RealFn constant_mode;  // normalized null-space function 1/sqrt(l)
  double l;

  // Zero-mean solution of u'' = f, u'(0) = u'(l) = 0.
  RealFn solve(const RealFn& f, int panels = 1024) const;
};

ModifiedGreen modified_green(double l);

}  // namespace apx
