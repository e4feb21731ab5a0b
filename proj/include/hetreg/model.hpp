#ifndef HETREG_MODEL_HPP
#define HETREG_MODEL_HPP

#include <vector>

#include "hetreg/rng.hpp"

namespace hetreg {

// Ground truth of a synthetic instance: responses follow
//   y = <w_star, x> + eps * <f_star, x>,  x ~ N(0, I), eps ~ N(0, 1).
// The multiplicative flag marks the special case f_star == w_star, i.e.
// y = <w_star, x> * (1 + eps).
struct ProblemInstance {
  Index d = 0;
  Vec w_star;
  Vec f_star;
  bool multiplicative = false;
};

ProblemInstance make_instance(Vec w_star, Vec f_star);
ProblemInstance make_multiplicative_instance(Vec w_star);

struct Dataset {
  Mat X;  // n x d, row i is x_i
  Vec y;  // length n

  Index n() const { return X.rows(); }
  Index d() const { return X.cols(); }
};

// Contiguous front-to-back split layout: `parts` slices of floor(n/parts)
// rows each; trailing remainder rows are unused.
struct PartitionPlan {
  std::vector<Index> part_sizes;
  std::vector<Index> offsets;
};

PartitionPlan make_partition_plan(Index n, Index parts);

std::vector<Dataset> partition(const Dataset& ds, Index parts);

Dataset sample_dataset(const ProblemInstance& inst, Index n, RngStream& stream);

// Squared Euclidean distance ||w_hat - w_star||^2.
double err_w(const Vec& w_hat, const Vec& w_star);

// Sign-ambiguous squared distance min(||f_hat - f_star||^2, ||f_hat + f_star||^2);
// the noise model is identifiable only up to sign.
double err_f(const Vec& f_hat, const Vec& f_star);

}  // namespace hetreg

#endif  // HETREG_MODEL_HPP
