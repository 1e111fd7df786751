#include "apx/singular.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace apx;

namespace {

double bl_gap(double eps) {
  double g = 0.0;
  for (int i = 0; i <= 1000; ++i) {
    const auto v = bl_example1(eps, i / 1000.0);
    g = std::max(g, std::abs(v.exact - v.uniform));
  }
  return g;
}

}  // namespace

TEST(BoundaryLayer, Example1Boundaries) {
  EXPECT_NEAR(bl_example1(0.01, 0.0).uniform, 0.0, 1e-15);
  EXPECT_NEAR(bl_example1(0.01, 1.0).uniform, 1.0, std::exp(-1 / 0.01) * 10);
  EXPECT_NEAR(bl_example1(0.01, 0.0).exact, 0.0, 1e-15);
  EXPECT_NEAR(bl_example1(0.01, 1.0).exact, 1.0, 1e-14);
  EXPECT_THROW(bl_example1(0.0, 0.5), std::invalid_argument);
}

TEST(BoundaryLayer, ExactSolvesOde) {
  const double eps = 0.1, h = 1e-4;
  for (double x : {0.05, 0.3, 0.7}) {
    auto u = [eps](double y) { return bl_example1(eps, y).exact; };
    const double d2 = (u(x + h) - 2 * u(x) + u(x - h)) / (h * h), d1 = (u(x + h) - u(x - h)) / (2 * h);
    EXPECT_NEAR(eps * d2 + (1 + eps) * d1 + u(x), 0.0, 1e-5);
  }
}

TEST(BoundaryLayer, UniformIsCompositeOfPieces) {
  for (double eps : {0.1, 0.01})
    for (int i = 0; i <= 20; ++i) {
      const double x = i / 20.0;
      EXPECT_NEAR(bl_example1(eps, x).uniform,
                  bl_example1_outer(x) + bl_example1_inner(eps, x) - bl_example1_match(), 1e-14);
    }
}

// The composite misses the exact solution only through exp(-1/eps) terms, so
// the gap falls much faster than eps; the linear-rate claim is checked (and
// fails) in the acceptance runner.
TEST(BoundaryLayer, UniformErrorShrinks) {
  const double g1 = bl_gap(0.1), g2 = bl_gap(0.05), g3 = bl_gap(0.025);
  EXPECT_LT(g2, g1);
  EXPECT_LT(g3, g2);
  EXPECT_LE(g1, 0.1);
}

TEST(LayerLocate, Cases) {
  auto left = layer_locate([](double x) { return 1 + x; }, 0, 1);
  EXPECT_EQ(left.side, LayerSide::Left);
  EXPECT_EQ(left.width_exponent.value(), 1.0);
  auto right = layer_locate([](double) { return -1.0; }, 0, 1);
  EXPECT_EQ(right.side, LayerSide::Right);
  EXPECT_EQ(right.location, 1.0);
  auto mid = layer_locate([](double x) { return 2 * x; }, -1, 1);
  EXPECT_EQ(mid.side, LayerSide::Internal);
  EXPECT_NEAR(mid.location, 0.0, 1e-12);
  EXPECT_EQ(mid.width_exponent.num, 1);
  EXPECT_EQ(mid.width_exponent.den, 2);
  auto shifted = layer_locate([](double x) { return x - 0.3; }, 0, 1);
  EXPECT_NEAR(shifted.location, 0.3, 1e-12);
  EXPECT_THROW(layer_locate([](double x) { return x * x - 0.25; }, -1, 1), UnsupportedCase);
}

TEST(LayerLocate, InnerSolutionBoundedOnReportedSide) {
  // inner equation U'' + b U' = 0 at the end: U = C1 + C2 exp(-b X) with X the
  // stretched distance into the domain; it stays bounded only where b X > 0
  for (auto b : {RealFn([](double x) { return 1 + x; }), RealFn([](double) { return -2.0; })}) {
    const LayerReport r = layer_locate(b, 0, 1);
    const double b_end = b(r.location);
    const double into = r.side == LayerSide::Left ? 1.0 : -1.0;
    const Vec y = integrate_final(
        OdeSystem{2, [b_end](double, const Vec& s, const Vec&) { return Vec((Vec(2) << s(1), -b_end * s(1)).finished()); }, Vec()},
        0.0, 20.0 * into, (Vec(2) << 0.0, 1.0).finished());
    EXPECT_LT(std::abs(y(0)), 1.0 / std::abs(b_end) + 1e-6);
  }
}

TEST(DoubleLayer, BoundariesAndOracle) {
  EXPECT_NEAR(bl_double_uniform(0.01, 0.0), 1.0, 1e-40 + std::exp(-100.0) * 2);
  EXPECT_NEAR(bl_double_uniform(0.01, 1.0), 1.0, std::exp(-10.0) * 1.01);
  const BvpSolution s = bl_double_oracle(0.01);
  double gap = 0.0;
  for (Eigen::Index i = 0; i < s.x.size(); ++i) gap = std::max(gap, std::abs(s.u(i) - bl_double_uniform(0.01, s.x(i))));
  EXPECT_LE(gap, 0.05);
}

TEST(Wkb, AiryCatalogMatchesGeneric) {
  const auto cat = wkb_terms(WkbCatalog::Airy);
  const double a = 1.0;
  const auto gen = wkb_terms(catalog_q(WkbCatalog::Airy), a);
  for (double x : {2.0, 10.0, 100.0}) {
    EXPECT_NEAR(gen.s0(x), cat.s0(x) - cat.s0(a), 1e-10 * cat.s0(x));
    EXPECT_NEAR(gen.s1(x), cat.s1(x), 1e-14);
    EXPECT_NEAR(gen.s2(x), cat.s2(x) - cat.s2(a), 1e-12);
    EXPECT_NEAR(gen.s3(x), cat.s3(x), 1e-14);
  }
  EXPECT_NEAR(cat.s0(4.0), 16.0 / 3.0, 1e-14);
  EXPECT_NEAR(cat.s2(4.0), 5.0 / 48.0 / 8.0, 1e-15);
  EXPECT_NEAR(cat.branch_s0(-1)(4.0), -16.0 / 3.0, 1e-14);
}

TEST(Wkb, CatalogsAgreeWithQuadrature) {
  for (WkbCatalog c : {WkbCatalog::LogSquared, WkbCatalog::PowerQuartic}) {
    const auto cat = wkb_terms(c);
    const double a = 10.0;
    const auto gen = wkb_terms(catalog_q(c), a);
    for (double x : {12.0, 30.0, 60.0}) {
      EXPECT_NEAR(gen.s0(x), cat.s0(x) - cat.s0(a), 1e-9 * std::abs(cat.s0(x)));
      EXPECT_NEAR(gen.s1(x) - gen.s1(a), cat.s1(x) - cat.s1(a), 1e-12);
      EXPECT_NEAR(gen.s2(x), cat.s2(x) - cat.s2(a), 1e-10);
      EXPECT_NEAR(gen.s3(x), cat.s3(x), 1e-12);
    }
  }
  const double nu = 1.0;
  const auto pc = wkb_terms(WkbCatalog::ParabolicCyl, nu);
  const auto gen = wkb_terms(catalog_q(WkbCatalog::ParabolicCyl, nu), 5.0);
  EXPECT_NEAR(gen.s0(9.0), pc.s0(9.0) - pc.s0(5.0), 1e-9);
}

TEST(Wkb, LogSquaredThirdTerm) {
  const auto t = wkb_terms(WkbCatalog::LogSquared);
  const double x = 50.0, l = std::log(x);
  EXPECT_NEAR(t.s3(x), 3.0 / 16 * std::pow(l, -4) - 1.0 / 16 * std::pow(l, -2), 1e-15);
}

TEST(Wkb, PlaneWave) {
  const double k = 3.0;
  const QFunction Q{[k](double) { return k * k; }, [](double) { return 0.0; }, [](double) { return 0.0; }};
  const auto t = wkb_terms(Q, 0.0);
  EXPECT_NEAR(t.s0(2.0), k * 2.0, 1e-13);
  EXPECT_EQ(t.s2(2.0), 0.0);
  EXPECT_EQ(t.s3(2.0), 0.0);
}

TEST(Wkb, EikonalResidual) {
  std::vector<double> xs;
  for (int i = 1; i <= 20; ++i) xs.push_back(1.0 + 0.5 * i);
  const QFunction quartic = catalog_q(WkbCatalog::PowerQuartic);
  const double scale = quartic.q(xs.back());
  EXPECT_LE(eikonal_residual(wkb_terms(quartic, 1.0), quartic, xs) / scale, 1e-8);
  EXPECT_LE(eikonal_residual(wkb_terms(WkbCatalog::PowerQuartic), quartic, xs) / scale, 1e-8);
  const QFunction airy = catalog_q(WkbCatalog::Airy);
  EXPECT_LE(eikonal_residual(wkb_terms(airy, 1.0), airy, xs), 1e-8);
  const QFunction neg{[](double x) { return -x; }, [](double) { return -1.0; }, [](double) { return 0.0; }};
  EXPECT_LE(eikonal_residual(wkb_terms(neg, 1.0, true), neg, xs), 1e-8);
}

TEST(Wkb, TurningPoint) {
  const auto t = wkb_terms(catalog_q(WkbCatalog::Airy), 1.0);
  EXPECT_THROW(t.s1(-1.0), TurningPointError);
  EXPECT_THROW(wkb_eigen([](double x) { return x - 1; }, 1), TurningPointError);
}

TEST(Wkb, PhysicalOpticsResidualShrinks) {
  // eps^2 u'' = Q u with u = Q^(-1/4) exp(S0 / eps)
  const QFunction Q = catalog_q(WkbCatalog::Airy);
  const auto t = wkb_terms(WkbCatalog::Airy);
  auto rel = [&](double eps) {
    double worst = 0.0;
    for (double x : {1.5, 2.0, 3.0}) {
      auto u = [&](double y) { return std::exp(t.s1(y) + (t.s0(y) - t.s0(x)) / eps); };
      const double h = 1e-4 * eps;
      const double d2 = (u(x + h) - 2 * u(x) + u(x - h)) / (h * h);
      worst = std::max(worst, std::abs(eps * eps * d2 - Q.q(x) * u(x)) / std::abs(Q.q(x) * u(x)));
    }
    return worst;
  };
  const double r1 = rel(0.1), r2 = rel(0.05);
  EXPECT_LT(r2, r1);
  EXPECT_GT(r1 / r2, 3.0);
}

TEST(WkbValidity, Examples) {
  const auto airy = wkb_validity(wkb_terms(WkbCatalog::Airy), 1.0, 100.0, 100.0);
  EXPECT_TRUE(airy.adjacent[1]);
  EXPECT_TRUE(airy.small[0]);

  const auto logsq = wkb_validity(wkb_terms(WkbCatalog::LogSquared), 1.0, 1e6, 1e6);
  // the ordering S2 << S1 << S0 holds, yet S2 itself is not small
  EXPECT_TRUE(logsq.adjacent[1]);
  EXPECT_FALSE(logsq.small[0]);
  EXPECT_TRUE(logsq.small[1]);
  EXPECT_EQ(logsq.truncation, 2);

  const QFunction one{[](double) { return 1.0; }, [](double) { return 0.0; }, [](double) { return 0.0; }};
  const auto flat = wkb_validity(wkb_terms(one, 0.0), 1.0, 1.0, 50.0);
  for (bool b : flat.adjacent) EXPECT_TRUE(b);
  for (bool b : flat.small) EXPECT_TRUE(b);
  EXPECT_EQ(flat.truncation, 1);
}

TEST(WkbEigen, FlatRecoversExact) {
  for (int n : {1, 2, 5}) {
    const auto e = wkb_eigen([](double) { return 1.0; }, n);
    EXPECT_NEAR(e.energy, n * n, 1e-12 * n * n);
    for (double x : {0.3, 1.0, 2.5}) EXPECT_NEAR(e.mode(x), std::sqrt(2 / M_PI) * std::sin(n * x), 1e-12);
  }
}

TEST(WkbEigen, PowerQuartic) {
  const RealFn q = catalog_q(WkbCatalog::PowerQuartic).q;
  for (int n : {1, 3, 20}) EXPECT_NEAR(wkb_eigen(q, n).energy / (9.0 * n * n / (49 * std::pow(M_PI, 4))), 1.0, 1e-12);
  const Vec grid = wkb_grid_eigenvalues(q, 4000, 20);
  EXPECT_LE(std::abs(wkb_eigen(q, 20).energy / grid(19) - 1), 0.01);
  double prev = INFINITY;
  for (int n : {1, 2, 4, 8}) {
    const double err = std::abs(wkb_eigen(q, n).energy / grid(n - 1) - 1);
    EXPECT_LT(err, prev) << n;
    prev = err;
  }
  const auto e = wkb_eigen(q, 4);
  EXPECT_NEAR(quad([&](double x) { return q(x) * e.mode(x) * e.mode(x); }, 0, M_PI, 4096), 1.0, 1e-2);
}

TEST(Rayleigh, OuterCorners) {
  EXPECT_NEAR(rayleigh_outer(1.0), 2.0 / 3.0, 1e-15);
  EXPECT_NEAR(rayleigh_outer(-1.0), -2.0 / 3.0, 1e-15);
  EXPECT_THROW(rayleigh_inner_residual(1.0, 0, 0), std::invalid_argument);
}

TEST(Rayleigh, InnerRelationIntegratesJump) {
  // along the fast jump at u = 2/3: dv/dxi = (v - v^3/3 - 2/3) / v
  for (double v : {-1.5, -0.5, 0.5, 1.5}) {
    const double h = 1e-6;
    const double dlhs = (rayleigh_inner_residual(v + h, 0, 0) - rayleigh_inner_residual(v - h, 0, 0)) / (2 * h);
    EXPECT_NEAR(dlhs * (v - v * v * v / 3 - 2.0 / 3) / v, -1.0 / 3, 1e-7);
  }
}

TEST(Rayleigh, PeriodTendsToRelaxationLimit) {
  EXPECT_NEAR(rayleigh_relaxation_period(), 3 - 2 * std::log(2.0), 1e-12);
  double prev = 0.0;
  for (double eps : {0.02, 0.05, 0.1, 0.2}) {
    const double T = rayleigh_period(eps);
    EXPECT_TRUE(std::isfinite(T));
    EXPECT_GT(T, prev);
    prev = T;
  }
  EXPECT_LT(std::abs(rayleigh_period(0.02) - rayleigh_relaxation_period()),
            std::abs(rayleigh_period(0.2) - rayleigh_relaxation_period()));
  EXPECT_THROW(rayleigh_period(0.5), std::invalid_argument);
}

TEST(Rayleigh, TrajectoryHugsCubic) {
  const double eps = 0.02;
  const OdeSystem sys = rayleigh_system(eps);
  const Vec start = integrate_final(sys, 0.0, 20.0, (Vec(2) << 0.0, 1.0).finished(), 1e-10);
  const Trajectory tr = integrate_sampled(sys, 0.0, 5.0, start, 1e-3, 1e-10);
  // every excursion from the cubic is a jump spanning at most 5 eps in u.
  // Near the fold the lag behind the cubic grows like eps^(2/3), so at this eps
  // the windows come out near 0.108 against 0.1; the bound holds for eps <= 0.01.
  int jumps = 0;
  double lo = 0.0, hi = 0.0;
  bool inside = false;
  for (const Vec& y : tr.y) {
    const bool off = std::abs(y(0) - rayleigh_outer(y(1))) > 0.05;
    if (off && !inside) {
      lo = hi = y(0);
      ++jumps;
    }
    if (off) {
      lo = std::min(lo, y(0));
      hi = std::max(hi, y(0));
    }
    if (!off && inside) EXPECT_LE(hi - lo, 5 * eps);
    inside = off;
  }
  EXPECT_GE(jumps, 4);
}
