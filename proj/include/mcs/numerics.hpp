// Dense linear-algebra and scalar-optimization kernel shared by the solvers
// and the test oracles. Systems here come from best-response maps, so they
// are strictly diagonally dominant by rows; the solver checks and enforces a
// residual bound on every call.
#pragma once

#include <functional>
#include <utility>

#include "mcs/common.hpp"

namespace mcs {

struct LinearSystem {
  Mat m;
  Vec rhs;
};

// Immutable LU factorization of a strictly row-diagonally-dominant matrix.
// solve()/solve_transpose() realize K v and K' v without ever forming K.
class DdSolver {
 public:
  explicit DdSolver(Mat m, double tol = 1e-10);

  Vec solve(const Vec& rhs) const;            // m x = rhs
  Vec solve_transpose(const Vec& rhs) const;  // m' x = rhs
  const Mat& matrix() const { return m_; }
  long n() const { return m_.rows(); }
  double tol() const { return tol_; }

 private:
  Mat m_;
  double tol_;
  Eigen::PartialPivLU<Mat> lu_;
};

// One-shot convenience wrapper around DdSolver.
Vec solve_dd(const LinearSystem& sys, double tol = 1e-10);

struct ScalarMax {
  double arg;
  double value;
};

// Golden-section search for a unimodal f on [lo, hi]. On a flat f any
// interior point may come back.
ScalarMax maximize_scalar(const std::function<double(double)>& f, double lo, double hi,
                          double tol = 1e-8);

// Central differences: component i is (f(x0 + h e_i) - f(x0 - h e_i)) / (2h).
Vec fd_gradient(const std::function<double(const Vec&)>& f, const Vec& x0, double h);

}  // namespace mcs
