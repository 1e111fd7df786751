#include "apx/greens.hpp"

#include <algorithm>
#include <cmath>

namespace apx {

double DeltaSequence::operator()(double x) const {
  switch (kind) {
    case DeltaKind::Step:
      return std::abs(x) <= xi ? 0.5 / xi : 0.0;
    case DeltaKind::Algebraic:
      return 1.0 / (M_PI * xi) / (1.0 + x * x / (xi * xi));
    case DeltaKind::Gaussian:
      return std::exp(-x * x / (xi * xi)) / (std::sqrt(M_PI) * xi);
    case DeltaKind::Sinc: {
      const double s = x / xi;
      if (std::abs(s) < 1e-6) return (1.0 - s * s / 3.0) / (M_PI * xi);
      const double sn = std::sin(s);
      return xi / M_PI * sn * sn / (x * x);
    }
  }
  return 0.0;
}

namespace {

int even_panels(double frac, int n) { return std::max(2, 2 * static_cast<int>(std::ceil(0.5 * frac * n))); }

double sift_impl(const RealFn& f, double x0, const DeltaSequence& seq, double a, double b, int n) {
  if (seq.kind == DeltaKind::Step) {
    const double lo = std::max(a, x0 - seq.xi), hi = std::min(b, x0 + seq.xi);
    if (hi <= lo) return 0.0;
    return quad([&](double x) { return f(x) * 0.5 / seq.xi; }, lo, hi, std::max(2, n / 100 * 2));
  }
  // panel count split so that the peak region is resolved as densely as the tails
  const double lo = std::max(a, x0 - 20 * seq.xi), hi = std::min(b, x0 + 20 * seq.xi);
  auto g = [&](double x) { return f(x) * seq(x - x0); };
  double s = 0.0;
  const double span = b - a;
  if (lo > a) s += quad(g, a, lo, even_panels((lo - a) / span, n));
  if (hi > lo) s += quad(g, lo, hi, even_panels(0.5, n));
  if (b > hi) s += quad(g, hi, b, even_panels((b - hi) / span, n));
  return s;
}

}  // namespace

double impulse(const DeltaSequence& seq, double a, double b, int n) {
  return sift_impl([](double) { return 1.0; }, 0.0, seq, a, b, n);
}

double sift(const RealFn& f, double x0, const DeltaSequence& seq, double a, double b, int n) {
  return sift_impl(f, x0, seq, a, b, n);
}

GreensFunction build_green_sl(const RealFn& p, const Smooth& y1, const Smooth& y2, GreenSign sign,
                              double x0, double x1) {
  for (int i = 1; i < 256; ++i) {
    const double x = x0 + (x1 - x0) * i / 256.0;
    const double w = p(x) * (y1.f(x) * y2.df(x) - y1.df(x) * y2.f(x));
    if (std::abs(w) < 1e-12)
      throw ResonanceError("vanishing Wronskian: a homogeneous solution meets both conditions");
  }
  const double s = sign == GreenSign::PlusLaplacian ? 1.0 : -1.0;
  auto pw = [p, y1, y2](double xi) { return p(xi) * (y1.f(xi) * y2.df(xi) - y1.df(xi) * y2.f(xi)); };
  GreensFunction G;
  G.x0 = x0;
  G.x1 = x1;
  G.p = p;
  G.left_branch = [=](double x, double xi) { return s * y1.f(x) * y2.f(xi) / pw(xi); };
  G.right_branch = [=](double x, double xi) { return s * y1.f(xi) * y2.f(x) / pw(xi); };
  G.left_dx = [=](double x, double xi) { return s * y1.df(x) * y2.f(xi) / pw(xi); };
  G.right_dx = [=](double x, double xi) { return s * y1.f(xi) * y2.df(x) / pw(xi); };
  G.jump = [=](double xi) { return s / p(xi); };
  return G;
}

GreenCheck check_green(const GreensFunction& G, double xi) {
  const double h = 1e-5 * std::max(1.0, G.x1 - G.x0);
  const double gl = G.left_branch(xi, xi), gr = G.right_branch(xi, xi);
  if (G.left_dx && G.right_dx)
    return {std::abs(gr - gl), G.right_dx(xi, xi) - G.left_dx(xi, xi), G.jump(xi)};
  const double dr = (-3 * gr + 4 * G.right_branch(xi + h, xi) - G.right_branch(xi + 2 * h, xi)) / (2 * h);
  const double dl = (3 * gl - 4 * G.left_branch(xi - h, xi) + G.left_branch(xi - 2 * h, xi)) / (2 * h);
  return {std::abs(gr - gl), dr - dl, G.jump(xi)};
}

RealFn apply_green(const GreensFunction& G, const RealFn& f, int panels) {
  return [G, f, panels](double x) {
    double s = 0.0;
    if (x > G.x0) s += quad([&](double xi) { return G.right_branch(x, xi) * f(xi); }, G.x0, x, panels);
    if (x < G.x1) s += quad([&](double xi) { return G.left_branch(x, xi) * f(xi); }, x, G.x1, panels);
    return s;
  };
}

GreensFunction green_example(GreenExample ex, const GreenExampleParams& prm) {
  const double l = prm.l, k = prm.k;
  auto one = [](double) { return 1.0; };
  switch (ex) {
    case GreenExample::Ex1:
      // u'' = f, u(0) = 0, u'(l) = 0
      return build_green_sl(one, {[](double x) { return x; }, one},
                            {one, [](double) { return 0.0; }}, GreenSign::PlusLaplacian, 0.0, l);
    case GreenExample::Cos:
      // u'' + k^2 u = f, u'(0) = u'(l) = 0
      return build_green_sl(one,
                            {[k](double x) { return std::cos(k * x); },
                             [k](double x) { return -k * std::sin(k * x); }},
                            {[k, l](double x) { return std::cos(k * (x - l)); },
                             [k, l](double x) { return -k * std::sin(k * (x - l)); }},
                            GreenSign::PlusLaplacian, 0.0, l);
    case GreenExample::Radial:
      // (r u')' = f, bounded at r = 0, u(l) = 0
      return build_green_sl([](double r) { return r; }, {one, [](double) { return 0.0; }},
                            {[l](double r) { return std::log(r / l); },
                             [](double r) { return 1.0 / r; }},
                            GreenSign::PlusLaplacian, 0.0, l);
    case GreenExample::Sl2: {
      // u'' + 2u = f, u(0) = 0, u(1) + u'(1) = 0
      const double r2 = std::sqrt(2.0);
      return build_green_sl(one,
                            {[r2](double x) { return std::sin(r2 * x); },
                             [r2](double x) { return r2 * std::cos(r2 * x); }},
                            {[r2](double x) {
                               return std::sin(r2 * (x - 1)) - r2 * std::cos(r2 * (x - 1));
                             },
                             [r2](double x) {
                               return r2 * std::cos(r2 * (x - 1)) + 2.0 * std::sin(r2 * (x - 1));
                             }},
                            GreenSign::PlusLaplacian, 0.0, 1.0);
    }
  }
  throw std::invalid_argument("unknown Green's function example");
}

ModifiedGreen modified_green(double l) {
  if (!(l > 0)) throw std::invalid_argument("modified_green requires l > 0");
  ModifiedGreen m;
  m.l = l;
  m.G.x0 = 0.0;
  m.G.x1 = l;
  m.G.p = [](double) { return 1.0; };
  m.G.jump = [](double) { return 1.0; };
  m.G.left_dx = [l](double x, double) { return -x / l; };
  m.G.right_dx = [l](double x, double) { return 1.0 - x / l; };
  // G'' = delta(x - xi) - 1/l with zero Neumann data and zero mean in x
  m.G.left_branch = [l](double x, double xi) { return xi - l / 3.0 - (x * x + xi * xi) / (2 * l); };
  m.G.right_branch = [l](double x, double xi) { return x - l / 3.0 - (x * x + xi * xi) / (2 * l); };
  const double c = 1.0 / std::sqrt(l);
  m.constant_mode = [c](double) { return c; };
  return m;
}

RealFn ModifiedGreen::solve(const RealFn& f, int panels) const {
  const double mean = quad(f, 0.0, l, 2048);
  if (std::abs(mean) > 1e-8)
    throw Unsolvable("forcing is not orthogonal to the constant null space: <f,1> = " +
                     std::to_string(mean));
  return apply_green(G, f, panels);
}

}  // namespace apx
