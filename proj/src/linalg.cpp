#include "hetreg/linalg.hpp"

#include <cmath>
#include <string>

#include "hetreg/errors.hpp"

namespace hetreg {

namespace {

constexpr double kPivotFloorScale = 1e-12;
constexpr double kSignificantComponent = 1e-12;

// Fixed stream for the power-iteration start vector; a seeded Gaussian start
// is deterministic and has no exact orthogonality to any fixed eigenvector.
constexpr std::uint64_t kEigenStartSeed = 0x8f1bbcdc5c4dd124ULL;

void check_square_symmetric(const Mat& a, const char* who) {
  if (a.rows() != a.cols()) {
    throw invalid_argument_error(std::string(who) + ": matrix must be square");
  }
  if (!is_symmetric(a)) {
    throw invalid_argument_error(std::string(who) + ": matrix must be symmetric");
  }
}

// Lower Cholesky factor in place; throws on a pivot at or below the floor.
Mat cholesky_factor(const Mat& a, double pivot_floor) {
  const Index d = a.rows();
  Mat l = Mat::Zero(d, d);
  for (Index j = 0; j < d; ++j) {
    double pivot = a(j, j) - l.row(j).head(j).squaredNorm();
    if (!(pivot > pivot_floor)) {
      throw singular_design_error(
          "solve_spd: non-positive-definite design, pivot " +
              std::to_string(pivot) + " at column " + std::to_string(j) +
              " (floor " + std::to_string(pivot_floor) + ")",
          pivot);
    }
    const double ljj = std::sqrt(pivot);
    l(j, j) = ljj;
    for (Index i = j + 1; i < d; ++i) {
      l(i, j) = (a(i, j) - l.row(i).head(j).dot(l.row(j).head(j))) / ljj;
    }
  }
  return l;
}

Vec cholesky_solve(const Mat& l, const Vec& b) {
  Vec y = l.triangularView<Eigen::Lower>().solve(b);
  return l.transpose().triangularView<Eigen::Upper>().solve(y);
}

}  // namespace

bool is_symmetric(const Mat& a) {
  if (a.rows() != a.cols()) return false;
  for (Index i = 0; i < a.rows(); ++i) {
    for (Index j = i + 1; j < a.cols(); ++j) {
      if (a(i, j) != a(j, i)) return false;
    }
  }
  return true;
}

Vec solve_spd(const Mat& a, const Vec& b, double rtol) {
  check_square_symmetric(a, "solve_spd");
  if (a.rows() != b.size()) {
    throw invalid_argument_error("solve_spd: dimension mismatch between A and b");
  }
  const Index d = a.rows();
  const double pivot_floor = kPivotFloorScale * a.trace() / static_cast<double>(d);
  const Mat l = cholesky_factor(a, pivot_floor);

  Vec x = cholesky_solve(l, b);
  const double target = rtol * b.norm();
  // A couple of refinement sweeps buy back the digits Cholesky loses on the
  // worse-conditioned systems.
  for (int sweep = 0; sweep < 3; ++sweep) {
    Vec r = b - a * x;
    if (r.norm() <= 0.25 * target) break;
    x += cholesky_solve(l, r);
  }
  return x;
}

std::pair<double, Vec> top_eigenpair(const Mat& a, double tol, long max_iter) {
  check_square_symmetric(a, "top_eigenpair");
  if (!(tol > 0)) {
    throw invalid_argument_error("top_eigenpair: tol must be positive");
  }
  const Index d = a.rows();
  if (max_iter <= 0) {
    max_iter = static_cast<long>(10.0 * static_cast<double>(d) *
                                 std::log(static_cast<double>(d))) +
               1000;
  }

  RngStream start = make_stream(kEigenStartSeed, static_cast<std::uint64_t>(d));
  Vec v = std_normal(start, d);
  v /= v.norm();

  auto canonicalize = [](Vec& u) {
    for (Index i = 0; i < u.size(); ++i) {
      if (std::abs(u[i]) >= kSignificantComponent) {
        if (u[i] < 0) u = -u;
        return;
      }
    }
  };

  double lambda = 0.0;
  double residual = 0.0;
  for (long it = 0; it < max_iter; ++it) {
    Vec z = a * v;
    lambda = v.dot(z);
    residual = (z - lambda * v).norm();
    if (residual <= tol * std::abs(lambda) || (lambda == 0.0 && residual == 0.0)) {
      canonicalize(v);
      return {lambda, v};
    }
    const double zn = z.norm();
    if (zn == 0.0) {
      // v is exactly in the null space; for PSD input the top eigenvalue is 0.
      canonicalize(v);
      return {0.0, v};
    }
    v = z / zn;
  }
  throw convergence_error(
      "top_eigenpair: no convergence after " + std::to_string(max_iter) +
          " iterations, last residual " + std::to_string(residual),
      residual);
}

}  // namespace hetreg
