#ifndef HETREG_SCHEDULES_HPP
#define HETREG_SCHEDULES_HPP

#include "hetreg/rng.hpp"

namespace hetreg {

// Knobs of the alternating estimator. K/K_p <= 0 request the sample-size
// defaults K = ceil(log2 n), K_p = ceil(ln(n/K)). The polylog pair realizes
// the otherwise-unspecified polylog(nd/delta) factor of the regularizer and
// truncation schedules as polylog_const * ln(n d / delta)^polylog_power.
struct SymbLearnConfig {
  int K = 0;
  int K_p = 0;
  double c_step = 0.08;
  double polylog_const = 1.0;
  double polylog_power = 1.0;
  double delta = 0.1;
};

int default_outer_steps(Index n);                 // ceil(log2 n)
int default_pr_steps(Index n, int outer_steps);   // ceil(ln(n / K))

// Resolves K and K_p defaults against a concrete sample size and validates
// delta in (0, 1/2).
SymbLearnConfig resolve_config(SymbLearnConfig cfg, Index n);

// Geometric exponent sequence S_k = sum_{j=0..k} 2^-j = 2 - 2^-k.
double schedule_s(int k);

// polylog_const * ln(n d / delta)^polylog_power; n is the total sample count.
double polylog_factor(Index n, Index d, const SymbLearnConfig& cfg);

// Regularizer schedule
//   lambda_k = f_norm^2 * (max(k/m, k d^2/m^2) + (d/m)^{S_k}) * polylog.
// m is the per-stage partition size, n the total sample count feeding the
// polylog argument. k = 0 is meaningful: the schedule collapses to
// f_norm^2 * (d/m) * polylog, the warm-up regularizer of the multiplicative
// variant.
double schedule_lambda(int k, Index m, Index d, double f_norm, Index n,
                       const SymbLearnConfig& cfg);

// Truncation schedule mu_k = f_norm * sqrt(max(...) + (d/m)^{S_k}) * polylog.
double schedule_mu(int k, Index m, Index d, double f_norm, Index n,
                   const SymbLearnConfig& cfg);

}  // namespace hetreg

#endif  // HETREG_SCHEDULES_HPP
