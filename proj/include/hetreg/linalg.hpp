#ifndef HETREG_LINALG_HPP
#define HETREG_LINALG_HPP

#include <utility>

#include "hetreg/rng.hpp"

namespace hetreg {

bool is_symmetric(const Mat& a);

// Solves A x = b for symmetric positive definite A by Cholesky factorization
// plus iterative refinement. Guarantees ||A x - b|| <= rtol * ||b|| on return.
// A pivot at or below 1e-12 * trace(A)/dim raises singular_design_error
// carrying the offending pivot.
Vec solve_spd(const Mat& a, const Vec& b, double rtol = 1e-10);

// Top eigenpair of a symmetric PSD matrix by power iteration. Converged when
// ||A v - lambda v|| <= tol * lambda. The returned vector is unit norm with
// its first component of magnitude >= 1e-12 made positive, so repeated calls
// are bit-identical. max_iter <= 0 selects the default 10*d*log(d) + 1000.
std::pair<double, Vec> top_eigenpair(const Mat& a, double tol = 1e-10,
                                     long max_iter = 0);

}  // namespace hetreg

#endif  // HETREG_LINALG_HPP
