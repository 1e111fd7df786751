#include "apx/singular.hpp"

#include "apx/asympt.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace apx {

double bl_example1_outer(double x) { return std::exp(1.0 - x); }
double bl_example1_inner(double eps, double x) { return std::exp(1.0) * (1.0 - std::exp(-x / eps)); }
double bl_example1_match() { return std::exp(1.0); }

BlValues bl_example1(double eps, double x) {
  if (!(eps > 0 && eps < 1)) throw std::invalid_argument("bl_example1 requires 0 < eps < 1");
  if (x < 0 || x > 1) throw std::invalid_argument("bl_example1 requires 0 <= x <= 1");
  const double exact = (std::exp(-x) - std::exp(-x / eps)) / (std::exp(-1.0) - std::exp(-1.0 / eps));
  const double uniform = std::exp(1.0 - x) - std::exp(1.0 - x / eps);
  return {exact, uniform};
}

LayerReport layer_locate(const RealFn& b, double x0, double x1, int samples) {
  if (!(x1 > x0)) throw std::invalid_argument("layer_locate requires x1 > x0");
  // endpoint zeros are ignored; the interior sign pattern decides
  std::vector<double> xs, bs;
  for (int i = 1; i < samples - 1; ++i) {
    const double x = x0 + (x1 - x0) * i / (samples - 1.0);
    xs.push_back(x);
    bs.push_back(b(x));
  }
  std::vector<std::size_t> flips;
  std::vector<double> zeros;
  for (std::size_t i = 0; i < bs.size(); ++i) {
    if (bs[i] == 0.0) {
      zeros.push_back(xs[i]);
      if (i > 0 && i + 1 < bs.size() && bs[i - 1] * bs[i + 1] >= 0)
        throw UnsupportedCase("b has a zero without a sign change");
      continue;
    }
    if (i > 0 && bs[i - 1] != 0.0 && (bs[i - 1] > 0) != (bs[i] > 0)) flips.push_back(i);
  }
  for (std::size_t i : flips) zeros.push_back(find_root(b, xs[i - 1], xs[i]));
  if (zeros.empty()) {
    if (bs.front() > 0)
      return {LayerSide::Left, x0, {1, 1}, "b > 0: inner solutions decay away from the left end"};
    return {LayerSide::Right, x1, {1, 1}, "b < 0: inner solutions decay away from the right end"};
  }
  if (zeros.size() > 1) throw UnsupportedCase("b changes sign more than once");
  return {LayerSide::Internal, zeros.front(), {1, 2},
          "simple interior zero of b: diffusion balances x u' in a layer of width eps^(1/2)"};
}

double bl_double_uniform(double eps, double x) {
  return std::exp(-x / std::sqrt(eps)) + std::exp(-(1.0 - x) / eps);
}

BvpSolution bl_double_oracle(double eps, int n) {
  // x(s) = s - a sin(2 pi s) / (2 pi) clusters nodes at both ends
  const double a = 0.98;
  Vec x(n + 1);
  for (int i = 0; i <= n; ++i) {
    const double s = static_cast<double>(i) / n;
    x(i) = s - a * std::sin(2 * M_PI * s) / (2 * M_PI);
  }
  x(0) = 0.0;
  x(n) = 1.0;
  const int m = n - 1;
  Vec sub = Vec::Zero(m - 1), diag(m), sup = Vec::Zero(m - 1), rhs = Vec::Zero(m);
  for (int k = 0; k < m; ++k) {
    const int i = k + 1;
    const double hm = x(i) - x(i - 1), hp = x(i + 1) - x(i);
    const double drift = -x(i) * x(i);
    // second derivative and centred first derivative on a nonuniform stencil
    const double c_m = 2 * eps / (hm * (hm + hp)) - drift * hp / (hm * (hm + hp));
    const double c_p = 2 * eps / (hp * (hm + hp)) + drift * hm / (hp * (hm + hp));
    const double c_0 = -2 * eps / (hm * hp) + drift * (hp - hm) / (hm * hp) - 1.0;
    diag(k) = c_0;
    if (k > 0) sub(k - 1) = c_m; else rhs(k) -= c_m * 1.0;
    if (k < m - 1) sup(k) = c_p; else rhs(k) -= c_p * 1.0;
  }
  const Vec inner = solve_tridiag(sub, diag, sup, rhs);
  Vec u(n + 1);
  u(0) = 1.0;
  u(n) = 1.0;
  u.segment(1, m) = inner;
  return {x, u};
}

namespace {

struct GaussRule {
  std::array<double, 20> node, weight;
  GaussRule() {
    const int n = 20;
    for (int i = 0; i < n; ++i) {
      double z = std::cos(M_PI * (i + 0.75) / (n + 0.5)), dp = 0.0;
      for (int it = 0; it < 100; ++it) {
        double p0 = 1.0, p1 = z;
        for (int k = 2; k <= n; ++k) {
          const double p2 = ((2 * k - 1) * z * p1 - (k - 1) * p0) / k;
          p0 = p1;
          p1 = p2;
        }
        dp = n * (z * p1 - p0) / (z * z - 1);
        const double dz = p1 / dp;
        z -= dz;
        if (std::abs(dz) < 1e-16) break;
      }
      node[i] = z;
      weight[i] = 2.0 / ((1 - z * z) * dp * dp);
    }
  }
};

double gauss(const RealFn& f, double a, double b, int panels = 16) {
  static const GaussRule rule;
  double s = 0.0;
  const double h = (b - a) / panels;
  for (int p = 0; p < panels; ++p) {
    const double lo = a + p * h, mid = lo + 0.5 * h;
    for (int i = 0; i < 20; ++i) s += rule.weight[i] * f(mid + 0.5 * h * rule.node[i]);
  }
  return 0.5 * h * s;
}

double checked_q(const QFunction& Q, double x, bool oscillatory) {
  const double q = Q.q(x);
  if (oscillatory ? !(q < 0) : !(q > 0))
    throw TurningPointError("Q changes sign at x = " + std::to_string(x));
  return std::abs(q);
}

}  // namespace

QFunction catalog_q(WkbCatalog cat, double nu) {
  switch (cat) {
    case WkbCatalog::Airy:
      return {[](double x) { return x; }, [](double) { return 1.0; }, [](double) { return 0.0; }};
    case WkbCatalog::ParabolicCyl:
      return {[nu](double x) { return 0.25 * x * x - nu - 0.5; }, [](double x) { return 0.5 * x; },
              [](double) { return 0.5; }};
    case WkbCatalog::LogSquared:
      return {[](double x) {
                const double r = std::log(x) / x;
                return r * r;
              },
              [](double x) {
                const double l = std::log(x);
                return 2 * l * (1 - l) / (x * x * x);
              },
              [](double x) {
                const double l = std::log(x);
                return (2 - 10 * l + 6 * l * l) / (x * x * x * x);
              }};
    case WkbCatalog::PowerQuartic:
      return {[](double x) { return std::pow(x + M_PI, 4); },
              [](double x) { return 4 * std::pow(x + M_PI, 3); },
              [](double x) { return 12 * std::pow(x + M_PI, 2); }};
  }
  throw std::invalid_argument("unknown WKB catalog entry");
}

RealFn WkbTerms::branch_s0(int sign) const {
  const RealFn f = s0;
  return [f, sign](double x) { return sign * f(x); };
}

RealFn WkbTerms::branch_s2(int sign) const {
  const RealFn f = s2;
  return [f, sign](double x) { return sign * f(x); };
}

WkbTerms wkb_terms(const QFunction& Q, double anchor, bool oscillatory) {
  // for Q = -P < 0 the odd-index integrals pick up a factor i and S3 flips sign
  const double flip = oscillatory ? -1.0 : 1.0;
  auto P = [Q, oscillatory](double x) { return checked_q(Q, x, oscillatory); };
  auto dP = [Q, flip](double x) { return flip * Q.dq(x); };
  auto d2P = [Q, flip](double x) { return flip * Q.d2q(x); };
  auto s2_density = [P, dP, d2P](double x) {
    const double p = P(x), dp = dP(x);
    return d2P(x) / (8 * std::pow(p, 1.5)) - 5 * dp * dp / (32 * std::pow(p, 2.5));
  };
  WkbTerms t;
  t.oscillatory = oscillatory;
  t.s0 = [P, anchor](double x) {
    const int panels = std::max(4, static_cast<int>(std::ceil(std::abs(x - anchor))) * 2);
    return gauss([&](double s) { return std::sqrt(P(s)); }, anchor, x, std::min(panels, 4096));
  };
  t.s1 = [P](double x) { return -0.25 * std::log(P(x)); };
  t.s2 = [s2_density, anchor, flip](double x) {
    const int panels = std::max(4, static_cast<int>(std::ceil(std::abs(x - anchor))) * 2);
    return flip * gauss(s2_density, anchor, x, std::min(panels, 4096));
  };
  t.s3 = [P, dP, d2P, flip](double x) {
    const double p = P(x), dp = dP(x);
    return flip * (-d2P(x) / (16 * p * p) + 5 * dp * dp / (64 * p * p * p));
  };
  return t;
}

WkbTerms wkb_terms(WkbCatalog cat, double nu) {
  WkbTerms t;
  switch (cat) {
    case WkbCatalog::Airy:
      t.s0 = [](double x) { return 2.0 / 3.0 * std::pow(x, 1.5); };
      t.s1 = [](double x) { return -0.25 * std::log(x); };
      t.s2 = [](double x) { return 5.0 / 48.0 * std::pow(x, -1.5); };
      t.s3 = [](double x) { return 5.0 / (64.0 * x * x * x); };
      return t;
    case WkbCatalog::ParabolicCyl: {
      const double b = 4 * (nu + 0.5);
      const QFunction Q = catalog_q(cat, nu);
      const double anchor = std::sqrt(std::max(b, 0.0)) + 1.0;
      t = wkb_terms(Q, anchor);
      t.s0 = [b](double x) {
        const double r = std::sqrt(x * x - b);
        return 0.25 * (x * r - b * std::log(x + r));
      };
      return t;
    }
    case WkbCatalog::LogSquared:
      t.s0 = [](double x) {
        const double l = std::log(x);
        return 0.5 * l * l;
      };
      t.s1 = [](double x) { return 0.5 * std::log(x) - 0.5 * std::log(std::log(x)); };
      t.s2 = [](double x) {
        const double l = std::log(x);
        return 0.125 * std::log(l) + 3.0 / (16.0 * l * l);
      };
      t.s3 = [](double x) {
        const double l2 = std::pow(std::log(x), 2);
        return 3.0 / (16.0 * l2 * l2) - 1.0 / (16.0 * l2);
      };
      return t;
    case WkbCatalog::PowerQuartic:
      t.s0 = [](double x) { return std::pow(x + M_PI, 3) / 3.0; };
      t.s1 = [](double x) { return -std::log(x + M_PI); };
      t.s2 = [](double x) { return std::pow(x + M_PI, -3) / 3.0; };
      t.s3 = [](double x) { return 0.5 * std::pow(x + M_PI, -6); };
      return t;
  }
  throw std::invalid_argument("unknown WKB catalog entry");
}

double eikonal_residual(const WkbTerms& terms, const QFunction& Q, const std::vector<double>& xs) {
  double worst = 0.0;
  for (double x : xs) {
    const double h = 1e-3 * std::max(1.0, std::abs(x));
    const auto& s = terms.s0;
    const double d = (-s(x + 2 * h) + 8 * s(x + h) - 8 * s(x - h) + s(x - 2 * h)) / (12 * h);
    const double q = terms.oscillatory ? -Q.q(x) : Q.q(x);
    worst = std::max(worst, std::abs(d * d - q));
  }
  return worst;
}

WkbValidity wkb_validity(const WkbTerms& terms, double delta, double xa, double xb) {
  const RealFn s[4] = {terms.s0, terms.s1, terms.s2, terms.s3};
  WkbValidity out{};
  auto below = [](double num, double den) {
    if (num == 0.0) return true;
    return den != 0.0 && std::abs(num / den) < 0.1;
  };
  for (int n = 0; n < 3; ++n) {
    out.adjacent[n] = true;
    for (double x : {xa, xb}) out.adjacent[n] = out.adjacent[n] && below(delta * s[n + 1](x), s[n](x));
  }
  for (int n = 1; n <= 2; ++n) {
    out.small[n - 1] = true;
    for (double x : {xa, xb})
      out.small[n - 1] = out.small[n - 1] && std::abs(std::pow(delta, n) * s[n + 1](x)) < 0.1;
  }
  out.truncation = out.small[0] ? 1 : (out.small[1] ? 2 : 3);
  return out;
}

WkbEigen wkb_eigen(const RealFn& q, int n) {
  if (n < 1) throw std::invalid_argument("wkb_eigen requires n >= 1");
  for (int i = 0; i <= 256; ++i)
    if (!(q(M_PI * i / 256.0) > 0)) throw TurningPointError("wkb_eigen requires Q > 0 on [0, pi]");
  auto root_q = [q](double s) { return std::sqrt(q(s)); };
  const double total = gauss(root_q, 0.0, M_PI, 64);
  const double k = n * M_PI / total;  // sqrt(E)
  // int Q u^2 = A^2 n pi / (2 k)
  const double amp = std::sqrt(2 * k / (n * M_PI));
  WkbEigen out;
  out.energy = k * k;
  out.mode = [q, root_q, k, amp](double x) {
    const double phase = k * gauss(root_q, 0.0, x, 8);
    return amp * std::pow(q(x), -0.25) * std::sin(phase);
  };
  return out;
}

Vec wkb_grid_eigenvalues(const RealFn& q, int n_grid, int count) {
  // -u'' = E Q u symmetrized with Q^{-1/2}
  const int m = n_grid - 1;
  const double h = M_PI / n_grid;
  Vec rq(m), d(m), e(m - 1);
  for (int i = 0; i < m; ++i) rq(i) = 1.0 / std::sqrt(q((i + 1) * h));
  for (int i = 0; i < m; ++i) d(i) = 2.0 * rq(i) * rq(i) / (h * h);
  for (int i = 0; i + 1 < m; ++i) e(i) = -rq(i) * rq(i + 1) / (h * h);
  const Vec vals = eig_sym_tridiag(d, e).values;
  return vals.head(std::min<Eigen::Index>(count, vals.size()));
}

double rayleigh_outer(double v0) { return v0 - v0 * v0 * v0 / 3.0; }

double rayleigh_inner_residual(double v0, double xi, double C) {
  if (v0 == -2.0 || v0 == 1.0) throw std::invalid_argument("inner relation singular at v0 = -2, 1");
  const double lhs = -2.0 / 9.0 * std::log(std::abs(v0 + 2)) + 2.0 / 9.0 * std::log(std::abs(v0 - 1)) -
                     1.0 / (3.0 * (v0 - 1));
  return lhs + (xi + C) / 3.0;
}

OdeSystem rayleigh_system(double eps) {
  OdeSystem s;
  s.dim = 2;
  s.params = Vec::Constant(1, eps);
  s.rhs = [](double, const Vec& y, const Vec& p) {
    Vec d(2);
    d << y(1), (y(1) - y(1) * y(1) * y(1) / 3.0 - y(0)) / p(0);
    return d;
  };
  return s;
}

double rayleigh_period(double eps) {
  if (!(eps > 0 && eps <= 0.2)) throw std::invalid_argument("rayleigh_period requires 0 < eps <= 0.2");
  const OdeSystem sys = rayleigh_system(eps);
  Vec y0(2);
  y0 << 0.0, 1.0;
  const Vec settled = integrate_final(sys, 0.0, 20.0, y0, 1e-10);
  // upward crossings of u = 0 (v > 0 there since u' = v)
  const Trajectory tr = integrate_sampled(sys, 0.0, 30.0, settled, 1e-4, 1e-10);
  const std::vector<double> c = upward_crossings(tr, 0);
  if (c.size() < 2) throw NumericalError("rayleigh_period: no closed orbit detected");
  return (c.back() - c.front()) / static_cast<double>(c.size() - 1);
}

double rayleigh_relaxation_period() {
  // slow branch v in [1, 2]: dt = (v^2 - 1) / v dv; the other branch is its mirror
  return 2.0 * quad([](double v) { return (v * v - 1) / v; }, 1.0, 2.0, 4096);
}

}  // namespace apx
