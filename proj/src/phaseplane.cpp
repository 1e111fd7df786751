#include "apx/phaseplane.hpp"

#include <cmath>
#include <sstream>

namespace apx {

std::string to_string(EqKind k) {
  switch (k) {
    case EqKind::NodalSink: return "NodalSink";
    case EqKind::NodalSource: return "NodalSource";
    case EqKind::Saddle: return "Saddle";
    case EqKind::ProperNode: return "ProperNode";
    case EqKind::ImproperNode: return "ImproperNode";
    case EqKind::SpiralStable: return "SpiralStable";
    case EqKind::SpiralUnstable: return "SpiralUnstable";
    case EqKind::Center: return "Center";
    case EqKind::Degenerate: return "Degenerate";
  }
  return "?";
}

std::string to_string(Stability s) {
  switch (s) {
    case Stability::Stable: return "Stable";
    case Stability::Unstable: return "Unstable";
    case Stability::NeutrallyStable: return "NeutrallyStable";
  }
  return "?";
}

Mat jacobian(const OdeSystem& sys, const Vec& point, double t) {
  const Eigen::Index n = point.size();
  Mat J(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    const double h = 1e-6 * std::max(1.0, std::abs(point(j)));
    Vec xp = point, xm = point;
    xp(j) += h;
    xm(j) -= h;
    J.col(j) = (sys(t, xp) - sys(t, xm)) / (2 * h);
  }
  return J;
}

Classification classify(const Eigen::Matrix2d& J) {
  Classification c;
  const Eig2<double> e = eig2<double>(J);
  c.eigenvalues = e.values;
  const double scale = J.norm();
  if (scale == 0.0) {
    c.kind = EqKind::Degenerate;
    c.stability = Stability::NeutrallyStable;
    c.degenerate = true;
    return c;
  }
  const double thr = 1e-10 * scale;
  const double half_tr = 0.5 * J.trace();
  const double disc = half_tr * half_tr - J.determinant();
  const double dbl = 1e-8 * scale;

  auto by_sign = [](double re, EqKind neg, EqKind pos, Classification& out) {
    out.kind = re < 0 ? neg : pos;
    out.stability = re < 0 ? Stability::Stable : Stability::Unstable;
  };

  if (std::abs(disc) <= dbl * dbl) {
    const double lam = half_tr;
    if (std::abs(lam) < thr) {
      c.kind = EqKind::Degenerate;
      c.stability = Stability::NeutrallyStable;
      c.degenerate = true;
      return c;
    }
    const Eigen::Matrix2d shifted = J - lam * Eigen::Matrix2d::Identity();
    const Eigen::Vector2d sv = Eigen::JacobiSVD<Eigen::Matrix2d>(shifted).singularValues();
    const int rank = (sv.array() > 1e-8 * scale).count();
    by_sign(lam, rank == 0 ? EqKind::ProperNode : EqKind::ImproperNode,
            rank == 0 ? EqKind::ProperNode : EqKind::ImproperNode, c);
    return c;
  }

  if (disc < 0) {
    c.rotation = J(1, 0) > 0 ? 1 : -1;
    if (std::abs(half_tr) < thr) {
      c.kind = EqKind::Center;
      c.stability = Stability::NeutrallyStable;
    } else {
      by_sign(half_tr, EqKind::SpiralStable, EqKind::SpiralUnstable, c);
    }
    return c;
  }

  const double l1 = e.values(0).real(), l2 = e.values(1).real();
  if (std::abs(l1) < thr || std::abs(l2) < thr) {
    c.kind = EqKind::Degenerate;
    c.degenerate = true;
    c.stability = (l1 > thr) ? Stability::Unstable : Stability::NeutrallyStable;
    return c;
  }
  if (l1 > 0 && l2 < 0) {
    c.kind = EqKind::Saddle;
    c.stability = Stability::Unstable;
    return c;
  }
  by_sign(l1, EqKind::NodalSink, EqKind::NodalSource, c);
  return c;
}

namespace {

Equilibrium make_equilibrium(const OdeSystem& sys, const Vec& x) {
  Equilibrium eq;
  eq.point = x;
  eq.jacobian = jacobian(sys, x);
  if (x.size() == 2) {
    const Classification c = classify(eq.jacobian);
    eq.eigenvalues = c.eigenvalues;
    eq.kind = c.kind;
    eq.stability = c.stability;
    return eq;
  }
  Eigen::EigenSolver<Mat> es(eq.jacobian);
  eq.eigenvalues = es.eigenvalues();
  const double thr = 1e-10 * eq.jacobian.norm();
  bool any_pos = false, any_neg = false, any_zero = false, any_cplx = false;
  for (Eigen::Index i = 0; i < eq.eigenvalues.size(); ++i) {
    const double re = eq.eigenvalues(i).real();
    if (std::abs(eq.eigenvalues(i).imag()) > thr) any_cplx = true;
    if (re > thr) any_pos = true;
    else if (re < -thr) any_neg = true;
    else any_zero = true;
  }
  if (any_pos && any_neg) {
    eq.kind = EqKind::Saddle;
    eq.stability = Stability::Unstable;
  } else if (any_zero) {
    eq.kind = any_pos ? EqKind::Degenerate : (any_cplx ? EqKind::Center : EqKind::Degenerate);
    eq.stability = any_pos ? Stability::Unstable : Stability::NeutrallyStable;
  } else if (any_neg) {
    eq.kind = any_cplx ? EqKind::SpiralStable : EqKind::NodalSink;
    eq.stability = Stability::Stable;
  } else {
    eq.kind = any_cplx ? EqKind::SpiralUnstable : EqKind::NodalSource;
    eq.stability = Stability::Unstable;
  }
  return eq;
}

}  // namespace

EquilibriaResult find_equilibria(const OdeSystem& sys, const std::vector<Vec>& seeds) {
  EquilibriaResult out;
  for (std::size_t s = 0; s < seeds.size(); ++s) {
    Vec x = seeds[s];
    if (!x.allFinite()) {
      out.diagnostics.push_back("seed " + std::to_string(s) + " not finite");
      continue;
    }
    Vec F = sys(0.0, x);
    bool ok = F.norm() <= 1e-10;
    for (int it = 0; it < 100 && !ok; ++it) {
      const Mat J = jacobian(sys, x);
      const Vec dx = J.fullPivLu().solve(-F);
      double lam = 1.0;
      Vec xn = x + dx, Fn = sys(0.0, xn);
      while (!(Fn.norm() < F.norm()) && lam > 1e-6) {
        lam *= 0.5;
        xn = x + lam * dx;
        Fn = sys(0.0, xn);
      }
      x = xn;
      F = Fn;
      ok = F.norm() <= 1e-10;
    }
    if (!ok) {
      std::ostringstream msg;
      msg << "seed " << s << " did not converge (residual " << F.norm() << ")";
      out.diagnostics.push_back(msg.str());
      continue;
    }
    bool dup = false;
    for (const Equilibrium& e : out.points)
      if ((e.point - x).norm() <= 1e-8) dup = true;
    if (!dup) out.points.push_back(make_equilibrium(sys, x));
  }
  return out;
}

ModelCatalogEntry pendulum(double gamma, double omega, int wells) {
  ModelCatalogEntry m;
  m.name = "pendulum";
  m.params = {{"gamma", gamma}, {"omega", omega}};
  m.system.dim = 2;
  m.system.params = Vec(2);
  m.system.params << gamma, omega;
  m.system.rhs = [](double, const Vec& y, const Vec& p) {
    Vec d(2);
    d << y(1), -p(0) * y(1) - p(1) * p(1) * std::sin(y(0));
    return d;
  };
  for (int k = -wells; k <= wells; ++k) m.known_equilibria.push_back(Eigen::Vector2d(k * M_PI, 0.0));
  return m;
}

ModelCatalogEntry lotka_volterra(double a, double c, double alpha) {
  ModelCatalogEntry m;
  m.name = "lotka-volterra";
  m.params = {{"a", a}, {"c", c}, {"alpha", alpha}};
  m.system.dim = 2;
  m.system.params = Vec(3);
  m.system.params << a, c, alpha;
  m.system.rhs = [](double, const Vec& y, const Vec& p) {
    Vec d(2);
    d << (p(0) - p(2) * y(1)) * y(0), (p(2) * y(0) - p(1)) * y(1);
    return d;
  };
  m.known_equilibria = {Eigen::Vector2d(0, 0), Eigen::Vector2d(c / alpha, a / alpha)};
  return m;
}

ModelCatalogEntry hopf_exemplar(double mu) {
  ModelCatalogEntry m;
  m.name = "hopf";
  m.params = {{"mu", mu}};
  m.system.dim = 2;
  m.system.params = Vec::Constant(1, mu);
  m.system.rhs = [](double, const Vec& y, const Vec& p) {
    const double g = p(0) - y.squaredNorm();
    Vec d(2);
    d << -y(1) + g * y(0), y(0) + g * y(1);
    return d;
  };
  m.known_equilibria = {Eigen::Vector2d(0, 0)};
  return m;
}

ModelCatalogEntry lorenz(double sigma, double r, double b) {
  ModelCatalogEntry m;
  m.name = "lorenz";
  m.params = {{"sigma", sigma}, {"r", r}, {"b", b}};
  m.system.dim = 3;
  m.system.params = Vec(3);
  m.system.params << sigma, r, b;
  m.system.rhs = [](double, const Vec& y, const Vec& p) {
    Vec d(3);
    d << p(0) * (y(1) - y(0)), p(1) * y(0) - y(1) - y(0) * y(2), y(0) * y(1) - p(2) * y(2);
    return d;
  };
  m.known_equilibria = {Eigen::Vector3d(0, 0, 0)};
  if (r > 1) {
    const double s = std::sqrt(b * (r - 1));
    m.known_equilibria.push_back(Eigen::Vector3d(s, s, r - 1));
    m.known_equilibria.push_back(Eigen::Vector3d(-s, -s, r - 1));
  }
  return m;
}

std::vector<ModelCatalogEntry> model_catalog() {
  return {pendulum(0.0, 1.0), pendulum(0.1, 1.0), lotka_volterra(1, 1, 1), hopf_exemplar(0.5),
          lorenz(10.0, 1.01, 8.0 / 3.0)};
}

Eigen::Vector2d lv_orbit(double a, double c, double alpha, double K, double phi, double t) {
  const double w = std::sqrt(a * c);
  return {c / alpha + (c / alpha) * K * std::cos(w * t + phi),
          a / alpha + (a / alpha) * std::sqrt(c / a) * K * std::sin(w * t + phi)};
}

double hopf_radius(double mu, double r0, double t) {
  if (r0 < 0) throw std::invalid_argument("hopf_radius requires r0 >= 0");
  if (r0 == 0) return 0.0;
  const double r02 = r0 * r0;
  double r2;
  if (std::abs(mu) < 1e-14) r2 = r02 / (1.0 + 2.0 * r02 * t);
  else r2 = mu * r02 / (r02 + (mu - r02) * std::exp(-2.0 * mu * t));
  return std::sqrt(r2);
}

PitchforkCheck lorenz_pitchfork_check(double sigma, double b, double eps) {
  (void)sigma;  // enters only the relaxation rate sigma/(b(1+sigma)), not the equilibrium
  if (!(b > 0)) throw std::invalid_argument("lorenz_pitchfork_check requires b > 0");
  if (eps == 0) return {0.0, 0.0};
  const double r = 1.0 + eps * eps;
  const double x = std::sqrt(b * (r - 1.0));
  return {std::sqrt(b), (x + x) / (2.0 * eps)};
}

}  // namespace apx
