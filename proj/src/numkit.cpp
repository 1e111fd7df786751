#include "apx/numkit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace apx {

Grid::Grid(double x0_, double x1_, int n_) : x0(x0_), x1(x1_), n(n_) {
  if (!(x1 > x0)) throw std::invalid_argument("grid requires x1 > x0");
  if (n < 1) throw std::invalid_argument("grid requires n >= 1");
}

Vec Grid::nodes() const {
  Vec x(n + 1);
  for (int i = 0; i <= n; ++i) x(i) = node(i);
  return x;
}

Vec StepView::at(double t) const {
  const double h = t1 - t0;
  const double s = (t - t0) / h;
  const double s2 = s * s, s3 = s2 * s;
  const double h00 = 2 * s3 - 3 * s2 + 1, h10 = s3 - 2 * s2 + s;
  const double h01 = -2 * s3 + 3 * s2, h11 = s3 - s2;
  return h00 * y0 + h10 * h * f0 + h01 * y1 + h11 * h * f1;
}

namespace {

// Dormand-Prince tableau
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                 a64 = 49.0 / 176, a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                 b6 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                 e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

// Steps aim at a tenth of tol so that growing modes keep the global error near tol.
constexpr double kStepTarget = 0.1;

double scaled_max(const Vec& err, const Vec& y0, const Vec& y1, double tol) {
  tol *= kStepTarget;
  double m = 0.0;
  for (Eigen::Index i = 0; i < err.size(); ++i) {
    const double sk = tol * (1.0 + std::max(std::abs(y0(i)), std::abs(y1(i))));
    m = std::max(m, std::abs(err(i)) / sk);
  }
  return m;
}

void drive(const OdeSystem& sys, double t0, double t1, const Vec& y0, double tol,
           const StepObserver& observer, Vec& y_end) {
  if (t1 == t0) throw std::invalid_argument("integrate_ivp requires t1 != t0");
  if (!(tol > 0)) throw std::invalid_argument("integrate_ivp requires tol > 0");
  if (y0.size() != sys.dim) throw std::invalid_argument("initial state length != dim");

  const double dir = t1 > t0 ? 1.0 : -1.0;
  const double span = std::abs(t1 - t0);
  Vec y = y0;
  Vec f = sys(t0, y);
  if (f.size() != sys.dim) throw std::invalid_argument("rhs output length != dim");

  // starting step
  double h;
  {
    double d0 = 0, d1 = 0;
    for (Eigen::Index i = 0; i < y.size(); ++i) {
      const double sk = tol * (1.0 + std::abs(y(i)));
      d0 = std::max(d0, std::abs(y(i)) / sk);
      d1 = std::max(d1, std::abs(f(i)) / sk);
    }
    h = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
    h = std::min(h, span);
    const Vec y1 = y + dir * h * f;
    const Vec f1 = sys(t0 + dir * h, y1);
    double d2 = 0;
    for (Eigen::Index i = 0; i < y.size(); ++i) {
      const double sk = tol * (1.0 + std::abs(y(i)));
      d2 = std::max(d2, std::abs(f1(i) - f(i)) / sk / h);
    }
    const double h1 = std::max(d1, d2) <= 1e-15 ? std::max(1e-6, h * 1e-3)
                                                : std::pow(0.01 / std::max(d1, d2), 0.2);
    h = std::min({100 * h, h1, span});
  }

  double t = t0;
  double err_old = 1e-4;
  constexpr double beta = 0.04, expo1 = 0.2 - beta * 0.75;
  bool rejected_last = false;
  Vec k2, k3, k4, k5, k6, k7, y_new, err;

  while (dir * (t1 - t) > 0) {
    const double h_min = 16.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(t));
    if (h < h_min) throw DivergedError("step size underflow", t);
    bool last = false;
    if (h >= std::abs(t1 - t)) {
      h = std::abs(t1 - t);
      last = true;
    }
    const double hs = dir * h;
    k2 = sys(t + c2 * hs, y + hs * (a21 * f));
    k3 = sys(t + c3 * hs, y + hs * (a31 * f + a32 * k2));
    k4 = sys(t + c4 * hs, y + hs * (a41 * f + a42 * k2 + a43 * k3));
    k5 = sys(t + c5 * hs, y + hs * (a51 * f + a52 * k2 + a53 * k3 + a54 * k4));
    k6 = sys(t + hs, y + hs * (a61 * f + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
    y_new = y + hs * (b1 * f + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
    const double t_new = last ? t1 : t + hs;
    k7 = sys(t_new, y_new);
    err = hs * (e1 * f + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);

    double e = scaled_max(err, y, y_new, tol);
    if (!std::isfinite(e) || !y_new.allFinite()) {
      h *= 0.1;
      rejected_last = true;
      continue;
    }
    if (e <= 1.0) {
      if (observer) observer(StepView{t, t_new, y, y_new, f, k7});
      e = std::max(e, 1e-10);
      double fac = std::pow(e, -expo1) * std::pow(err_old, beta) * 0.9;
      fac = std::clamp(fac, 0.2, 10.0);
      if (rejected_last) fac = std::min(fac, 1.0);
      err_old = e;
      t = t_new;
      y.swap(y_new);
      f.swap(k7);
      h *= fac;
      rejected_last = false;
    } else {
      h *= std::max(0.2, 0.9 * std::pow(e, -expo1));
      rejected_last = true;
    }
  }
  y_end = y;
}

}  // namespace

Trajectory integrate_ivp(const OdeSystem& sys, double t0, double t1, const Vec& y0, double tol) {
  Trajectory tr;
  tr.t.push_back(t0);
  tr.y.push_back(y0);
  Vec y_end;
  drive(sys, t0, t1, y0, tol,
        [&](const StepView& s) {
          tr.t.push_back(s.t1);
          tr.y.push_back(s.y1);
        },
        y_end);
  tr.t.back() = t1;
  return tr;
}

Vec integrate_final(const OdeSystem& sys, double t0, double t1, const Vec& y0, double tol,
                    const StepObserver& observer) {
  Vec y_end;
  drive(sys, t0, t1, y0, tol, observer, y_end);
  return y_end;
}

Trajectory integrate_sampled(const OdeSystem& sys, double t0, double t1, const Vec& y0,
                             double dt_out, double tol) {
  if (!(dt_out > 0)) throw std::invalid_argument("dt_out must be positive");
  const double dir = t1 > t0 ? 1.0 : -1.0;
  const long n_out = static_cast<long>(std::floor(std::abs(t1 - t0) / dt_out + 1e-9));
  Trajectory tr;
  tr.t.reserve(n_out + 2);
  tr.y.reserve(n_out + 2);
  tr.t.push_back(t0);
  tr.y.push_back(y0);
  long next = 1;
  Vec y_end;
  drive(sys, t0, t1, y0, tol,
        [&](const StepView& s) {
          while (next <= n_out) {
            const double tk = t0 + dir * next * dt_out;
            if (dir * (tk - s.t1) > 0) break;
            tr.t.push_back(tk);
            tr.y.push_back(s.at(tk));
            ++next;
          }
        },
        y_end);
  if (std::abs(tr.t.back() - t1) > 1e-12 * std::max(1.0, std::abs(t1))) {
    tr.t.push_back(t1);
    tr.y.push_back(y_end);
  }
  return tr;
}

double find_root(const RealFn& f, double a, double b, double tol) {
  if (a > b) std::swap(a, b);
  double fa = f(a), fb = f(b);
  if (fa == 0) return a;
  if (fb == 0) return b;
  if ((fa > 0) == (fb > 0) || !std::isfinite(fa) || !std::isfinite(fb))
    throw BracketError("no sign change on [" + std::to_string(a) + ", " + std::to_string(b) + "]");

  while (b - a > 1e-6) {
    const double m = 0.5 * (a + b);
    const double fm = f(m);
    if (fm == 0) return m;
    if ((fm > 0) == (fa > 0)) {
      a = m;
      fa = fm;
    } else {
      b = m;
    }
  }

  double x = 0.5 * (a + b);
  for (int it = 0; it < 100; ++it) {
    const double fx = f(x);
    if (fx == 0) return x;
    if ((fx > 0) == (fa > 0)) {
      a = x;
      fa = fx;
    } else {
      b = x;
    }
    const double d = (f(x + 1e-7) - f(x - 1e-7)) / 2e-7;
    double xn = x - fx / d;
    if (!std::isfinite(xn) || xn <= a || xn >= b) xn = 0.5 * (a + b);
    if (std::abs(xn - x) <= tol || b - a <= tol) return xn;
    x = xn;
  }
  while (b - a > tol) {
    const double m = 0.5 * (a + b);
    const double fm = f(m);
    if ((fm > 0) == (fa > 0)) {
      a = m;
      fa = fm;
    } else {
      b = m;
    }
  }
  return 0.5 * (a + b);
}

double quad(const RealFn& f, double a, double b, int n) {
  if (n < 2 || n % 2 != 0) throw std::invalid_argument("quad requires even n >= 2");
  const double h = (b - a) / n;
  double odd = 0, even = 0;
  for (int i = 1; i < n; ++i) {
    const double v = f(a + i * h);
    (i % 2 ? odd : even) += v;
  }
  return h / 3.0 * (f(a) + f(b) + 4.0 * odd + 2.0 * even);
}

double cubic_discriminant(double a, double b, double c, double d) {
  return 18 * a * b * c * d - 4 * b * b * b * d + b * b * c * c - 4 * a * c * c * c -
         27 * a * a * d * d;
}

std::vector<double> solve_cubic(double a3, double a2, double a1, double a0) {
  std::vector<double> roots;
  const double scale = std::max({std::abs(a3), std::abs(a2), std::abs(a1), std::abs(a0)});
  if (scale == 0) return roots;
  if (std::abs(a3) <= 1e-14 * scale) {
    if (std::abs(a2) <= 1e-14 * scale) {
      if (a1 != 0) roots.push_back(-a0 / a1);
      return roots;
    }
    const double disc = a1 * a1 - 4 * a2 * a0;
    if (disc < 0) return roots;
    const double q = -0.5 * (a1 + std::copysign(std::sqrt(disc), a1));
    if (q != 0) roots.push_back(a0 / q);
    roots.push_back(q / a2);
    std::sort(roots.begin(), roots.end());
    return roots;
  }
  const double b = a2 / a3, c = a1 / a3, d = a0 / a3;
  const double p = c - b * b / 3.0;
  const double q = 2.0 * b * b * b / 27.0 - b * c / 3.0 + d;
  using C = std::complex<double>;
  const C s = std::sqrt(C(q * q / 4.0 + p * p * p / 27.0));
  C w1 = -q / 2.0 + s, w2 = -q / 2.0 - s;
  C w = std::abs(w1) >= std::abs(w2) ? w1 : w2;
  C cands[3];
  if (std::abs(w) == 0) {
    cands[0] = cands[1] = cands[2] = C(0);
  } else {
    const C u = std::pow(w, 1.0 / 3.0);
    const C omega(-0.5, std::sqrt(3.0) / 2.0);
    C uk = u;
    for (int k = 0; k < 3; ++k) {
      cands[k] = uk - p / (3.0 * uk);
      uk *= omega;
    }
  }
  auto poly = [&](double x) { return ((x + b) * x + c) * x + d; };
  auto dpoly = [&](double x) { return (3 * x + 2 * b) * x + c; };
  for (const C& r : cands) {
    if (std::abs(r.imag()) >= 1e-10 * std::max(1.0, std::abs(r))) continue;
    double x = r.real() - b / 3.0;
    for (int it = 0; it < 4; ++it) {
      const double dp = dpoly(x);
      if (dp == 0) break;
      const double xn = x - poly(x) / dp;
      if (!std::isfinite(xn)) break;
      if (std::abs(poly(xn)) > std::abs(poly(x))) break;
      x = xn;
    }
    roots.push_back(x);
  }
  std::sort(roots.begin(), roots.end());
  roots.erase(std::unique(roots.begin(), roots.end(),
                          [](double x, double y) {
                            return std::abs(x - y) <= 1e-9 * std::max(1.0, std::abs(x));
                          }),
              roots.end());
  return roots;
}

TridiagEigen eig_sym_tridiag(const Vec& diag, const Vec& off, bool want_vectors) {
  const Eigen::Index n = diag.size();
  if (off.size() != std::max<Eigen::Index>(n - 1, 0))
    throw std::invalid_argument("off-diagonal length must be n-1");
  Vec d = diag;
  Vec e = Vec::Zero(n);
  if (n > 1) e.head(n - 1) = off;
  Mat z;
  if (want_vectors) z = Mat::Identity(n, n);
  const double eps = std::numeric_limits<double>::epsilon();

  for (Eigen::Index l = 0; l < n; ++l) {
    int iter = 0;
    Eigen::Index m;
    do {
      for (m = l; m < n - 1; ++m) {
        const double dd = std::abs(d(m)) + std::abs(d(m + 1));
        if (std::abs(e(m)) <= eps * dd) break;
      }
      if (m != l) {
        if (iter++ == 60) throw NumericalError("tridiagonal QL did not converge");
        double g = (d(l + 1) - d(l)) / (2.0 * e(l));
        double r = std::hypot(g, 1.0);
        g = d(m) - d(l) + e(l) / (g + std::copysign(r, g));
        double s = 1.0, c = 1.0, p = 0.0;
        Eigen::Index i;
        bool underflow = false;
        for (i = m - 1; i >= l; --i) {
          double f = s * e(i);
          const double b = c * e(i);
          r = std::hypot(f, g);
          e(i + 1) = r;
          if (r == 0.0) {
            d(i + 1) -= p;
            e(m) = 0.0;
            underflow = true;
            break;
          }
          s = f / r;
          c = g / r;
          g = d(i + 1) - p;
          r = (d(i) - g) * s + 2.0 * c * b;
          p = s * r;
          d(i + 1) = g + p;
          g = c * r - b;
          if (want_vectors) {
            for (Eigen::Index k = 0; k < n; ++k) {
              f = z(k, i + 1);
              z(k, i + 1) = s * z(k, i) + c * f;
              z(k, i) = c * z(k, i) - s * f;
            }
          }
        }
        if (underflow) continue;
        d(l) -= p;
        e(l) = g;
        e(m) = 0.0;
      }
    } while (m != l);
  }

  std::vector<Eigen::Index> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) { return d(a) < d(b); });
  TridiagEigen out;
  out.values.resize(n);
  if (want_vectors) out.vectors.resize(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    out.values(k) = d(order[k]);
    if (want_vectors) out.vectors.col(k) = z.col(order[k]);
  }
  return out;
}

Vec solve_tridiag(const Vec& sub, const Vec& diag, const Vec& sup, const Vec& rhs) {
  // Gaussian elimination with partial pivoting (LAPACK gtsv layout).
  const Eigen::Index n = diag.size();
  if (n == 0) return Vec();
  if (sub.size() != n - 1 || sup.size() != n - 1 || rhs.size() != n)
    throw std::invalid_argument("tridiagonal band sizes inconsistent");
  Vec dl = sub, d = diag, du = sup, b = rhs;
  Vec fill = Vec::Zero(std::max<Eigen::Index>(n - 2, 0));
  const double tiny = std::numeric_limits<double>::min() * 1e10;
  for (Eigen::Index i = 0; i + 1 < n; ++i) {
    if (std::abs(d(i)) >= std::abs(dl(i))) {
      if (d(i) == 0) d(i) = tiny;
      const double fact = dl(i) / d(i);
      d(i + 1) -= fact * du(i);
      b(i + 1) -= fact * b(i);
    } else {
      const double fact = d(i) / dl(i);
      d(i) = dl(i);
      const double temp = d(i + 1);
      d(i + 1) = du(i) - fact * temp;
      if (i + 2 < n) {
        fill(i) = du(i + 1);
        du(i + 1) = -fact * fill(i);
      }
      du(i) = temp;
      const double tb = b(i);
      b(i) = b(i + 1);
      b(i + 1) = tb - fact * b(i + 1);
    }
  }
  if (d(n - 1) == 0) d(n - 1) = tiny;
  b(n - 1) /= d(n - 1);
  if (n > 1) b(n - 2) = (b(n - 2) - du(n - 2) * b(n - 1)) / d(n - 2);
  for (Eigen::Index i = n - 3; i >= 0; --i)
    b(i) = (b(i) - du(i) * b(i + 1) - fill(i) * b(i + 2)) / d(i);
  return b;
}

Mat tridiag_eigvecs(const Vec& diag, const Vec& off, const Vec& lambdas) {
  const Eigen::Index n = diag.size();
  const double norm = diag.cwiseAbs().maxCoeff() + 2.0 * (n > 1 ? off.cwiseAbs().maxCoeff() : 0.0);
  Mat out(n, lambdas.size());
  for (Eigen::Index k = 0; k < lambdas.size(); ++k) {
    const double shift = lambdas(k) + 1e-13 * std::max(norm, 1.0);
    const Vec dk = diag.array() - shift;
    Vec v = Vec::Ones(n);
    for (Eigen::Index i = 0; i < n; ++i) v(i) += 0.01 * std::sin(1.0 + 0.7 * i);
    v.normalize();
    for (int it = 0; it < 4; ++it) {
      v = solve_tridiag(off, dk, off, v);
      v.normalize();
    }
    // fix sign: largest component positive
    Eigen::Index imax;
    v.cwiseAbs().maxCoeff(&imax);
    if (v(imax) < 0) v = -v;
    out.col(k) = v;
  }
  return out;
}

Vec fft_wavenumbers(int n, double L) {
  Vec k(n);
  const double dk = 2.0 * M_PI / L;
  for (int j = 0; j < n; ++j) k(j) = dk * (j < n / 2 ? j : j - n);
  return k;
}

}  // namespace apx
