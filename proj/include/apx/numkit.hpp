#pragma once

#include <Eigen/Dense>

#include <complex>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace apx {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
using CVec = Eigen::VectorXcd;
using cplx = std::complex<double>;
using RealFn = std::function<double(double)>;

// Raised when a computation breaks down numerically (maps to CLI exit 3).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DivergedError : public NumericalError {
 public:
  DivergedError(const std::string& what, double last_time)
      : NumericalError(what), last_time(last_time) {}
  double last_time;
};

class BracketError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class SizeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// ---------------------------------------------------------------- polynomials

template <typename Scalar>
struct Polynomial {
  using Coeffs = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  Coeffs coeffs;  // ascending degree

  Polynomial() : coeffs(Coeffs::Zero(1)) {}
  explicit Polynomial(const Coeffs& c) : coeffs(c) { normalize(); }
  Polynomial(std::initializer_list<Scalar> c) : coeffs(c.size()) {
    Eigen::Index i = 0;
    for (Scalar v : c) coeffs(i++) = v;
    normalize();
  }

  int degree() const { return static_cast<int>(coeffs.size()) - 1; }

  void normalize() {
    Eigen::Index n = coeffs.size();
    while (n > 1 && coeffs(n - 1) == Scalar(0)) --n;
    if (n == 0) {
      coeffs = Coeffs::Zero(1);
      return;
    }
    coeffs.conservativeResize(n);
  }

  Scalar operator()(Scalar x) const {
    Scalar acc(0);
    for (Eigen::Index i = coeffs.size(); i-- > 0;) acc = acc * x + coeffs(i);
    return acc;
  }
};

using Poly = Polynomial<double>;

template <typename Scalar>
Scalar poly_eval(const Polynomial<Scalar>& p, Scalar x) {
  return p(x);
}

template <typename Scalar>
Polynomial<Scalar> poly_diff(const Polynomial<Scalar>& p) {
  const Eigen::Index n = p.coeffs.size();
  if (n <= 1) return Polynomial<Scalar>();
  typename Polynomial<Scalar>::Coeffs d(n - 1);
  for (Eigen::Index i = 1; i < n; ++i) d(i - 1) = Scalar(i) * p.coeffs(i);
  return Polynomial<Scalar>(d);
}

template <typename Scalar>
Polynomial<Scalar> operator+(const Polynomial<Scalar>& a, const Polynomial<Scalar>& b) {
  const Eigen::Index n = std::max(a.coeffs.size(), b.coeffs.size());
  typename Polynomial<Scalar>::Coeffs c = Polynomial<Scalar>::Coeffs::Zero(n);
  c.head(a.coeffs.size()) += a.coeffs;
  c.head(b.coeffs.size()) += b.coeffs;
  return Polynomial<Scalar>(c);
}

template <typename Scalar>
Polynomial<Scalar> operator*(Scalar s, const Polynomial<Scalar>& p) {
  return Polynomial<Scalar>(typename Polynomial<Scalar>::Coeffs(s * p.coeffs));
}

template <typename Scalar>
Polynomial<Scalar> operator-(const Polynomial<Scalar>& a, const Polynomial<Scalar>& b) {
  return a + Scalar(-1) * b;
}

// Coefficientwise comparison after normalization.
template <typename Scalar>
bool poly_near(const Polynomial<Scalar>& a, const Polynomial<Scalar>& b, Scalar tol) {
  const Polynomial<Scalar> d = a - b;
  return d.coeffs.cwiseAbs().maxCoeff() <= tol;
}

// ---------------------------------------------------------------- grid

struct Grid {
  double x0 = 0.0;
  double x1 = 1.0;
  int n = 1;  // intervals; n+1 nodes

  Grid(double x0, double x1, int n);
  double h() const { return (x1 - x0) / n; }
  double node(int i) const { return i == n ? x1 : x0 + i * h(); }
  Vec nodes() const;
};

// ---------------------------------------------------------------- ODEs

struct OdeSystem {
  int dim = 1;
  std::function<Vec(double, const Vec&, const Vec&)> rhs;
  Vec params;

  Vec operator()(double t, const Vec& y) const { return rhs(t, y, params); }
};

struct Trajectory {
  std::vector<double> t;
  std::vector<Vec> y;
};

// Accepted step [t0,t1] with cubic Hermite dense output.
struct StepView {
  double t0, t1;
  const Vec& y0;
  const Vec& y1;
  const Vec& f0;
  const Vec& f1;
  Vec at(double t) const;
};

using StepObserver = std::function<void(const StepView&)>;

// Dormand-Prince 5(4) with PI step control. Absolute and relative tolerances
// both equal to tol.
Trajectory integrate_ivp(const OdeSystem& sys, double t0, double t1, const Vec& y0,
                         double tol = 1e-9);

// Same integrator, only the end state is kept; observer sees every accepted step.
Vec integrate_final(const OdeSystem& sys, double t0, double t1, const Vec& y0,
                    double tol = 1e-9, const StepObserver& observer = {});

// Samples the solution on a uniform output grid through dense output.
Trajectory integrate_sampled(const OdeSystem& sys, double t0, double t1, const Vec& y0,
                             double dt_out, double tol = 1e-9);

// ---------------------------------------------------------------- scalar tools

double find_root(const RealFn& f, double a, double b, double tol = 1e-12);

double quad(const RealFn& f, double a, double b, int n = 2048);

// Real roots of a3 x^3 + a2 x^2 + a1 x + a0, ascending. Cardano, complex roots
// dropped when |Im| < 1e-10 fails; survivors are Newton polished.
std::vector<double> solve_cubic(double a3, double a2, double a1, double a0);

// Discriminant of the cubic; positive means three distinct real roots.
double cubic_discriminant(double a3, double a2, double a1, double a0);

// ---------------------------------------------------------------- eigen

template <typename Scalar>
struct Eig2 {
  Eigen::Matrix<std::complex<Scalar>, 2, 1> values;
  Eigen::Matrix<std::complex<Scalar>, 2, 2> vectors;  // columns
};

template <typename Scalar>
Eig2<Scalar> eig2(const Eigen::Matrix<Scalar, 2, 2>& m) {
  using C = std::complex<Scalar>;
  const Scalar a = m(0, 0), b = m(0, 1), c = m(1, 0), d = m(1, 1);
  const Scalar half_tr = (a + d) / Scalar(2);
  const Scalar half_diff = (a - d) / Scalar(2);
  const C root = std::sqrt(C(half_diff * half_diff + b * c));
  C l1 = C(half_tr) + root, l2 = C(half_tr) - root;
  auto before = [](const C& x, const C& y) {
    if (x.real() != y.real()) return x.real() > y.real();
    return x.imag() > y.imag();
  };
  if (before(l2, l1)) std::swap(l1, l2);

  Eig2<Scalar> out;
  out.values << l1, l2;
  const Scalar scale = m.cwiseAbs().maxCoeff();
  for (int k = 0; k < 2; ++k) {
    const C lam = out.values(k);
    Eigen::Matrix<C, 2, 1> v1(C(b), lam - C(a));
    Eigen::Matrix<C, 2, 1> v2(lam - C(d), C(c));
    Eigen::Matrix<C, 2, 1> v = v1.norm() >= v2.norm() ? v1 : v2;
    if (v.norm() <= Scalar(1e-14) * std::max(scale, Scalar(1))) {
      v = Eigen::Matrix<C, 2, 1>::Zero();
      v(k) = C(1);
    }
    out.vectors.col(k) = v / v.norm();
  }
  return out;
}

struct TridiagEigen {
  Vec values;   // ascending
  Mat vectors;  // columns, empty unless requested
};

// Implicit-shift QL on a symmetric tridiagonal matrix.
TridiagEigen eig_sym_tridiag(const Vec& diag, const Vec& off, bool want_vectors = false);

// Eigenvectors for selected eigenvalues by inverse iteration (O(n) each).
Mat tridiag_eigvecs(const Vec& diag, const Vec& off, const Vec& lambdas);

// Thomas algorithm for sub/diag/super bands.
Vec solve_tridiag(const Vec& sub, const Vec& diag, const Vec& sup, const Vec& rhs);

// ---------------------------------------------------------------- FFT

// Radix-2 plan. Immutable after construction, so one plan can be shared.
template <typename Scalar>
class FftPlan {
 public:
  using C = std::complex<Scalar>;
  using CVector = Eigen::Matrix<C, Eigen::Dynamic, 1>;

  explicit FftPlan(Eigen::Index n) : n_(n) {
    if (n < 1 || (n & (n - 1)) != 0) throw SizeError("fft length must be a power of two");
    rev_.resize(n);
    int bits = 0;
    while ((Eigen::Index(1) << bits) < n) ++bits;
    for (Eigen::Index i = 0; i < n; ++i) {
      Eigen::Index r = 0;
      for (int b = 0; b < bits; ++b)
        if (i & (Eigen::Index(1) << b)) r |= Eigen::Index(1) << (bits - 1 - b);
      rev_[i] = r;
    }
    tw_.resize(std::max<Eigen::Index>(n / 2, 1));
    const long double two_pi = 6.283185307179586476925286766559L;
    for (Eigen::Index k = 0; k < n / 2; ++k) {
      const long double ang = -two_pi * static_cast<long double>(k) / static_cast<long double>(n);
      tw_[k] = C(static_cast<Scalar>(std::cos(ang)), static_cast<Scalar>(std::sin(ang)));
    }
  }

  Eigen::Index size() const { return n_; }

  void forward(CVector& v) const { run(v, false); }

  void inverse(CVector& v) const {
    run(v, true);
    v /= Scalar(n_);
  }

 private:
  void run(CVector& v, bool inv) const {
    if (v.size() != n_) throw SizeError("fft plan length mismatch");
    for (Eigen::Index i = 0; i < n_; ++i)
      if (i < rev_[i]) std::swap(v(i), v(rev_[i]));
    for (Eigen::Index len = 2; len <= n_; len <<= 1) {
      const Eigen::Index half = len / 2, stride = n_ / len;
      for (Eigen::Index s = 0; s < n_; s += len) {
        for (Eigen::Index j = 0; j < half; ++j) {
          C w = tw_[j * stride];
          if (inv) w = std::conj(w);
          const C odd = w * v(s + j + half);
          v(s + j + half) = v(s + j) - odd;
          v(s + j) += odd;
        }
      }
    }
  }

  Eigen::Index n_;
  std::vector<Eigen::Index> rev_;
  std::vector<C> tw_;
};

template <typename Scalar>
Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, 1> fft(
    const Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, 1>& v) {
  Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, 1> out = v;
  FftPlan<Scalar>(v.size()).forward(out);
  return out;
}

template <typename Scalar>
Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, 1> ifft(
    const Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, 1>& v) {
  Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, 1> out = v;
  FftPlan<Scalar>(v.size()).inverse(out);
  return out;
}

// Angular wavenumbers in FFT order for a periodic domain of length L.
Vec fft_wavenumbers(int n, double L);

}  // namespace apx
