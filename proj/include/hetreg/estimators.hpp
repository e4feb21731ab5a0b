#ifndef HETREG_ESTIMATORS_HPP
#define HETREG_ESTIMATORS_HPP

#include <optional>
#include <string>
#include <vector>

#include "hetreg/model.hpp"
#include "hetreg/schedules.hpp"

namespace hetreg {

struct IterationDiag {
  int step_index = 0;
  std::optional<double> err_w_true;
  std::optional<double> err_f_true;
  std::string note;
};

// Estimator output: regressor, optional noise-model estimate, per-stage
// diagnostics. Error fields of the trace are filled only when the caller
// supplies ground truth.
struct EstimateReport {
  Vec w_hat;
  std::optional<Vec> f_hat;
  std::vector<IterationDiag> trace;
};

struct WlsParams {
  double lambda = 0.0;
};

struct PhaseRetrievalParams {
  double mu_bar = 0.0;
  double alpha0 = 0.0;
  double alpha1 = 0.0;
  int steps = 0;
};

// Ordinary least squares: w solves (sum x x^T) w = sum x y.
EstimateReport ols(const Dataset& ds);

// Residual-weighted second moment S = (1/n) sum (y - <w,x>)^2 x x^T.
Mat residual_second_moment(const Dataset& ds, const Vec& w_hat);

// Eigen-stage of the spectral noise-model estimator: f = sqrt(||S||/3) * u
// with u the top eigenvector of S. Exposed separately so the moment matrix
// can be fed directly. A zero moment matrix yields f = 0 with a trace note.
EstimateReport spectral_from_moment(const Mat& s, Vec w_hat);

EstimateReport spectral(const Dataset& ds, const Vec& w_hat);

// Weighted least squares with weights 1 / (<f,x>^2 + lambda + floor); the
// floor 1e-12 * (||f||^2 + lambda + 1e-12) keeps weights bounded when both
// <f,x> and lambda vanish.
EstimateReport wls(const Dataset& ds, const Vec& f_hat, const WlsParams& params);

// Truncated pseudogradient of the weighted quartic loss at f_cur:
//   g = (1/m) sum 1(|<f_hat,x>| >= mu_bar)
//         <f_hat,x> x (<f_cur,x>^2 - (y - <w_hat,x>)^2) / <f_hat,x>^4.
// Samples below the truncation level contribute nothing and their
// denominators are never formed.
Vec pseudogradient(const Dataset& batch, const Vec& f_cur, const Vec& f_hat,
                   const Vec& w_hat, double mu_bar);

// Pseudogradient descent on fresh batches with the fixed matrix step
// D = alpha0 P + alpha1 (I - P), P the projector onto f_hat. Starts at
// f_hat; requires mu_bar < ||f_hat|| and at least one sample per step.
EstimateReport phase_retrieval(const Dataset& ds, const Vec& w_hat,
                               const Vec& f_hat,
                               const PhaseRetrievalParams& params,
                               const ProblemInstance* truth = nullptr);

// Alternating estimator: OLS, spectral initialization, then K-1 rounds of
// WLS / phase-retrieval refinement on disjoint partitions (or on the full
// data each stage when epoch_mode is set).
EstimateReport symblearn(const Dataset& ds, const SymbLearnConfig& cfg,
                         bool epoch_mode = false,
                         const ProblemInstance* truth = nullptr);

// Refinement loop of symblearn starting from given (w, f) estimates; stage k
// consumes parts[2k] for WLS and parts[2k+1] for phase retrieval,
// k = 1..K-1. parts.size() must be 2K. cfg must be resolved.
EstimateReport symblearn_refine(const std::vector<Dataset>& parts, Vec w0,
                                Vec f0, const SymbLearnConfig& cfg,
                                Index n_total,
                                const ProblemInstance* truth = nullptr);

// Multiplicative-noise variant: OLS on the first of K+1 partitions, then K
// WLS refinements, each reusing the previous iterate as the noise model.
// An empty lambda_schedule selects the defaults
//   lambda_{k+1} = ||w_k||^2 (max(k/m, k d^2/m^2) + (d/m)^{S_k}) * polylog,
// k = 0..K-1; otherwise lambda_schedule must supply K values.
EstimateReport symblearn_mult(const Dataset& ds, int K,
                              const std::vector<double>& lambda_schedule = {},
                              const SymbLearnConfig& cfg = SymbLearnConfig{},
                              const ProblemInstance* truth = nullptr);

}  // namespace hetreg

#endif  // HETREG_ESTIMATORS_HPP
