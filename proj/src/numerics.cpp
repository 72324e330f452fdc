#include "mcs/numerics.hpp"

#include <cmath>

namespace mcs {

namespace {

void check_strict_dominance(const Mat& m) {
  const long n = m.rows();
  if (n != m.cols()) throw NumericsError("solve_dd: matrix is not square");
  for (long i = 0; i < n; ++i) {
    double off = 0.0;
    for (long j = 0; j < n; ++j)
      if (j != i) off += std::abs(m(i, j));
    if (!(std::abs(m(i, i)) > off))
      throw NumericsError("system outside Assumption 1 regime: row " + std::to_string(i) +
                          " |diag| = " + std::to_string(std::abs(m(i, i))) +
                          " <= off-diagonal sum " + std::to_string(off));
  }
}

void check_residual(const Mat& m, const Vec& x, const Vec& rhs, double tol, bool transposed) {
  const double resid = transposed ? (m.transpose() * x - rhs).cwiseAbs().maxCoeff()
                                  : (m * x - rhs).cwiseAbs().maxCoeff();
  const double bound = tol * (1.0 + rhs.cwiseAbs().maxCoeff());
  if (!(resid <= bound))
    throw NumericsError("solve_dd residual " + std::to_string(resid) + " exceeds bound " +
                        std::to_string(bound));
}

}  // namespace

DdSolver::DdSolver(Mat m, double tol) : m_(std::move(m)), tol_(tol) {
  check_strict_dominance(m_);
  lu_.compute(m_);
}

Vec DdSolver::solve(const Vec& rhs) const {
  check_dim("rhs", m_.rows(), rhs.size());
  Vec x = lu_.solve(rhs);
  check_residual(m_, x, rhs, tol_, false);
  return x;
}

Vec DdSolver::solve_transpose(const Vec& rhs) const {
  check_dim("rhs", m_.rows(), rhs.size());
  Vec x = lu_.transpose().solve(rhs);
  check_residual(m_, x, rhs, tol_, true);
  return x;
}

Vec solve_dd(const LinearSystem& sys, double tol) {
  check_dim("rhs", sys.m.rows(), sys.rhs.size());
  return DdSolver(sys.m, tol).solve(sys.rhs);
}

ScalarMax maximize_scalar(const std::function<double(double)>& f, double lo, double hi,
                          double tol) {
  if (!(lo < hi)) throw NumericsError("maximize_scalar: need lo < hi");
  static const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;

  auto eval = [&](double r) {
    double v = f(r);
    if (!std::isfinite(v))
      throw NumericsError("maximize_scalar: f(" + std::to_string(r) + ") is not finite");
    return v;
  };

  double a = lo, b = hi;
  double x1 = b - invphi * (b - a);
  double x2 = a + invphi * (b - a);
  double f1 = eval(x1), f2 = eval(x2);
  while (b - a > tol) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + invphi * (b - a);
      f2 = eval(x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - invphi * (b - a);
      f1 = eval(x1);
    }
  }
  double arg = 0.5 * (a + b);
  return {arg, eval(arg)};
}

Vec fd_gradient(const std::function<double(const Vec&)>& f, const Vec& x0, double h) {
  if (!(h > 0.0)) throw NumericsError("fd_gradient: need h > 0");
  Vec g(x0.size());
  Vec x = x0;
  for (long i = 0; i < x0.size(); ++i) {
    x(i) = x0(i) + h;
    double fp = f(x);
    x(i) = x0(i) - h;
    double fm = f(x);
    x(i) = x0(i);
    if (!std::isfinite(fp) || !std::isfinite(fm))
      throw NumericsError("fd_gradient: f not finite near component " + std::to_string(i));
    g(i) = (fp - fm) / (2.0 * h);
  }
  return g;
}

}  // namespace mcs
