#include "hetreg/schedules.hpp"

#include <cmath>
#include <string>

#include "hetreg/errors.hpp"

namespace hetreg {

namespace {

void check_schedule_args(int k, Index m, Index d) {
  if (k < 0) throw invalid_argument_error("schedule: k must be >= 0");
  if (m < 1) throw invalid_argument_error("schedule: m must be >= 1");
  if (d < 1) throw invalid_argument_error("schedule: d must be >= 1");
}

// Shared core max(k/m, k d^2/m^2) + (d/m)^{S_k}.
double schedule_core(int k, Index m, Index d) {
  const double kk = static_cast<double>(k);
  const double mm = static_cast<double>(m);
  const double dd = static_cast<double>(d);
  const double linear = std::max(kk / mm, kk * dd * dd / (mm * mm));
  return linear + std::pow(dd / mm, schedule_s(k));
}

}  // namespace

int default_outer_steps(Index n) {
  return static_cast<int>(std::ceil(std::log2(static_cast<double>(n))));
}

int default_pr_steps(Index n, int outer_steps) {
  const double ratio = static_cast<double>(n) / static_cast<double>(outer_steps);
  return std::max(1, static_cast<int>(std::ceil(std::log(ratio))));
}

SymbLearnConfig resolve_config(SymbLearnConfig cfg, Index n) {
  if (n < 2) throw invalid_argument_error("resolve_config: n must be >= 2");
  if (cfg.K <= 0) cfg.K = default_outer_steps(n);
  if (cfg.K_p <= 0) cfg.K_p = default_pr_steps(n, cfg.K);
  if (!(cfg.delta > 0.0 && cfg.delta < 0.5)) {
    throw invalid_argument_error("resolve_config: delta must lie in (0, 1/2)");
  }
  if (!(cfg.c_step > 0.0) || !(cfg.polylog_const > 0.0) || cfg.polylog_power < 0.0) {
    throw invalid_argument_error("resolve_config: nonpositive schedule constant");
  }
  return cfg;
}

double schedule_s(int k) {
  if (k < 0) throw invalid_argument_error("schedule_s: k must be >= 0");
  return 2.0 - std::pow(2.0, -static_cast<double>(k));
}

double polylog_factor(Index n, Index d, const SymbLearnConfig& cfg) {
  if (cfg.polylog_power == 0.0) return cfg.polylog_const;
  const double arg =
      std::log(static_cast<double>(n) * static_cast<double>(d) / cfg.delta);
  return cfg.polylog_const * std::pow(arg, cfg.polylog_power);
}

double schedule_lambda(int k, Index m, Index d, double f_norm, Index n,
                       const SymbLearnConfig& cfg) {
  check_schedule_args(k, m, d);
  return f_norm * f_norm * schedule_core(k, m, d) * polylog_factor(n, d, cfg);
}

double schedule_mu(int k, Index m, Index d, double f_norm, Index n,
                   const SymbLearnConfig& cfg) {
  check_schedule_args(k, m, d);
  return f_norm * std::sqrt(schedule_core(k, m, d)) * polylog_factor(n, d, cfg);
}

}  // namespace hetreg
