#ifndef HETREG_HARNESS_HPP
#define HETREG_HARNESS_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hetreg/estimators.hpp"
#include "hetreg/model.hpp"

namespace hetreg {

// Monte-Carlo grid description. Every (n, d) pair must satisfy n >= 4 d.
// timing=false zeroes the runtime column so reruns and worker counts produce
// byte-identical CSVs.
struct ExperimentSpec {
  std::string name;
  std::vector<Index> n_values;
  std::vector<Index> d_values;
  int trials = 1;
  std::vector<std::string> estimators;
  double f_norm = 1.0;
  double w_norm = 1.0;
  std::uint64_t master_seed = 0;
  SymbLearnConfig symblearn_cfg;
  bool epoch_mode = false;
  bool timing = true;
};

void validate_spec(const ExperimentSpec& spec);

// Flat key-value file, one `key = value` per line, '#' comments, sequences
// comma-separated. Nested config keys are spelled symblearn_cfg.<field>.
ExperimentSpec parse_experiment_spec(const std::string& path);

struct TrialRecord {
  std::string estimator;
  Index n = 0;
  Index d = 0;
  int trial = 0;
  std::uint64_t seed = 0;
  double err_w = 0.0;
  std::optional<double> err_f;
  double n_err_w = 0.0;
  double runtime_ms = 0.0;
  bool failed = false;
  std::string fail_reason;
};

struct TrialSlice {
  std::string estimator;
  Index n = 0;
  Index d = 0;
  int trial = 0;
  SymbLearnConfig cfg;
  bool epoch_mode = false;
  bool timing = true;
};

// Deterministic 64-bit stream index for the slice; independent of execution
// order and of which other estimators share the spec.
std::uint64_t slice_stream_index(const std::string& estimator, Index n, Index d,
                                 int trial);

// Ground truth for cell (n, d, trial): independent uniform directions scaled
// to the requested norms, shared across estimators. multiplicative forces
// f_star = w_star.
ProblemInstance cell_instance(std::uint64_t master_seed, Index n, Index d,
                              int trial, double w_norm, double f_norm,
                              bool multiplicative);

// OLS -> spectral -> single WLS with lambda = schedule_lambda(1, m, ...);
// stages run on thirds of the data, or on the full data when epoch is set.
EstimateReport wls_spectral_fit(const Dataset& ds, const SymbLearnConfig& cfg,
                                bool epoch_mode,
                                const ProblemInstance* truth = nullptr);

// Samples one dataset from inst, runs the named estimator, scores against the
// truth. Estimator failures come back as failed records, never as throws.
TrialRecord run_trial(const TrialSlice& slice, const ProblemInstance& inst,
                      RngStream stream);

// One record per (estimator, n, d, trial), computed on `workers` threads
// (0 = all hardware threads) and sorted by that key.
std::vector<TrialRecord> run_grid(const ExperimentSpec& spec, int workers = 0);

struct RateFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
};

// Least-squares line through (log axis value, log mean err_w); vary is "n" or
// "d". Requires >= 3 distinct axis values.
RateFit fit_rate(const std::vector<TrialRecord>& records, const std::string& vary);

// Results CSV with the exact header
// estimator,n,d,trial,seed,err_w,err_f,n_err_w,runtime_ms.
void write_csv(const std::vector<TrialRecord>& records, const std::string& path);

}  // namespace hetreg

#endif  // HETREG_HARNESS_HPP
