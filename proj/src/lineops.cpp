#include "apx/lineops.hpp"

#include <cmath>
#include <string>

namespace apx {

void OperatorCoeffs::validate() const {
  if (!(x1 > x0)) throw std::invalid_argument("operator domain requires x1 > x0");
  for (int i = 0; i <= 1024; ++i) {
    const double x = x0 + (x1 - x0) * i / 1024.0;
    if (a(x) == 0.0) throw std::invalid_argument("leading coefficient vanishes on the domain");
  }
  if ((left.alpha == 0 && left.beta == 0) || (right.alpha == 0 && right.beta == 0))
    throw std::invalid_argument("boundary condition (alpha, beta) = (0, 0)");
}

OperatorCoeffs formal_adjoint(const OperatorCoeffs& op) {
  OperatorCoeffs adj = op;
  const Poly da = poly_diff(op.a);
  adj.a = op.a;
  adj.b = 2.0 * da - op.b;
  adj.c = poly_diff(da) - poly_diff(op.b) + op.c;
  return adj;
}

bool is_formally_self_adjoint(const OperatorCoeffs& op) {
  const OperatorCoeffs adj = formal_adjoint(op);
  return poly_near(adj.b, op.b, 1e-12) && poly_near(adj.c, op.c, 1e-12);
}

double conjunct(const OperatorCoeffs& op, const Smooth& u, const Smooth& v, double x) {
  const double a = op.a(x), da = poly_diff(op.a)(x), b = op.b(x);
  const double uv = u.f(x), vv = v.f(x);
  return a * vv * u.df(x) - (da * vv + a * v.df(x)) * uv + b * uv * vv;
}

double inner(const RealFn& f, const RealFn& g, double x0, double x1, int n, const RealFn& weight) {
  if (weight) return quad([&](double x) { return f(x) * g(x) * weight(x); }, x0, x1, n);
  return quad([&](double x) { return f(x) * g(x); }, x0, x1, n);
}

FredholmResult fredholm_check(const RealFn& f, const RealFn& v, const RealFn& weight, double x0,
                              double x1) {
  const double nv = std::sqrt(inner(v, v, x0, x1, 2048, weight));
  if (std::abs(nv - 1.0) > 1e-8)
    throw std::invalid_argument("null-space function must be normalized");
  const double ip = inner(f, v, x0, x1, 2048, weight);
  return {ip, std::abs(ip) < 1e-8};
}

double robin_root(int k) {
  if (k < 1) throw std::invalid_argument("robin_root index starts at 1");
  const double lo = (k - 0.5) * M_PI + 1e-6, hi = (k + 0.5) * M_PI - 1e-6;
  auto f = [](double s) { return s + std::tan(s); };
  const double step = M_PI / 16;
  double a = lo, fa = f(a);
  while (a < hi) {
    const double b = std::min(a + step, hi);
    const double fb = f(b);
    if ((fa > 0) != (fb > 0)) return find_root(f, a, b, 1e-13);
    a = b;
    fa = fb;
  }
  throw BracketError("no root of s + tan s in (" + std::to_string(lo) + ", " + std::to_string(hi) +
                     ")");
}

EigenSet sl_eigen(SlProblem problem, int n_max, double l) {
  if (n_max < 1) throw std::invalid_argument("sl_eigen requires n_max >= 1");
  EigenSet es;
  es.weight = [](double) { return 1.0; };
  if (problem == SlProblem::DirichletLaplace) {
    if (!(l > 0)) throw std::invalid_argument("domain length must be positive");
    es.x1 = l;
    const double amp = std::sqrt(2.0 / l);
    for (int n = 1; n <= n_max; ++n) {
      const double k = n * M_PI / l;
      es.lambdas.push_back(k * k);
      es.norm_constants.push_back(amp);
      es.eigfuncs.push_back([amp, k](double x) { return amp * std::sin(k * x); });
    }
    return es;
  }
  es.x1 = 1.0;
  for (int n = 1; n <= n_max; ++n) {
    const double s = robin_root(n);
    const double cs = std::cos(s);
    const double amp = std::sqrt(2.0) / std::sqrt(1.0 + cs * cs);
    es.lambdas.push_back(s * s);
    es.norm_constants.push_back(amp);
    es.eigfuncs.push_back([amp, s](double x) { return amp * std::sin(s * x); });
  }
  return es;
}

Vec robin_grid_eigenvalues(int n_grid, int count) {
  // unknowns u_1..u_N at x_i = i h; ghost node from u'(1) = -u(1); last
  // unknown rescaled by sqrt(2) to symmetrize.
  const int N = n_grid;
  const double h = 1.0 / N;
  const double ih2 = 1.0 / (h * h);
  Vec d = Vec::Constant(N, 2.0 * ih2);
  Vec e = Vec::Constant(N - 1, -ih2);
  d(N - 1) = (2.0 + 2.0 * h) * ih2;
  e(N - 2) = -std::sqrt(2.0) * ih2;
  const Vec vals = eig_sym_tridiag(d, e).values;
  return vals.head(std::min<Eigen::Index>(count, vals.size()));
}

double ExpansionSolution::operator()(double x) const {
  double s = 0.0;
  for (std::size_t n = 0; n < c.size(); ++n)
    if (c[n] != 0.0) s += c[n] * modes[n](x);
  return s;
}

ExpansionSolution expansion_solve(const EigenSet& eigs, const RealFn& f, double mu, int n_terms) {
  if (n_terms > static_cast<int>(eigs.lambdas.size()))
    throw std::invalid_argument("n_terms exceeds the eigenvalues available");
  ExpansionSolution sol;
  sol.modes.assign(eigs.eigfuncs.begin(), eigs.eigfuncs.begin() + n_terms);
  for (int n = 0; n < n_terms; ++n) {
    const double bn = inner(f, eigs.eigfuncs[n], eigs.x0, eigs.x1, 2048);
    const double gap = eigs.lambdas[n] - mu;
    sol.b.push_back(bn);
    if (std::abs(gap) <= 1e-10) {
      if (std::abs(bn) > 1e-8)
        throw NoSolution("mu coincides with lambda_" + std::to_string(n + 1) +
                         " and the forcing has a component along that mode");
      sol.non_unique = true;
      sol.c.push_back(0.0);
      continue;
    }
    sol.c.push_back(bn / gap);
  }
  return sol;
}

}  // namespace apx
