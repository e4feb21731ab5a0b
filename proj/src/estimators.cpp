#include "hetreg/estimators.hpp"

#include <cmath>
#include <string>
#include <utility>

#include "hetreg/errors.hpp"
#include "hetreg/linalg.hpp"

namespace hetreg {

namespace {

constexpr double kWlsFloorScale = 1e-12;

void check_estimator_input(const Dataset& ds, const char* who) {
  if (ds.n() < 1 || ds.d() < 1) {
    throw invalid_argument_error(std::string(who) + ": empty dataset");
  }
}

// Normal equations sum w_i x x^T and sum w_i x y accumulated symmetrically.
EstimateReport weighted_normal_solve(const Dataset& ds, const Vec& weights,
                                     const char* who) {
  const Index n = ds.n();
  const Index d = ds.d();
  if (n < d) {
    throw singular_design_error(
        std::string(who) + ": " + std::to_string(n) + " samples in " +
            std::to_string(d) + " dimensions cannot form an SPD design",
        0.0);
  }
  Mat h = Mat::Zero(d, d);
  Vec rhs = Vec::Zero(d);
  for (Index i = 0; i < n; ++i) {
    h.selfadjointView<Eigen::Lower>().rankUpdate(ds.X.row(i).transpose(),
                                                 weights[i]);
    rhs += (weights[i] * ds.y[i]) * ds.X.row(i).transpose();
  }
  h = h.selfadjointView<Eigen::Lower>();
  EstimateReport report;
  report.w_hat = solve_spd(h, rhs);
  return report;
}

void record_diag(EstimateReport& report, int step, const std::string& note,
                 const ProblemInstance* truth, const Vec* w, const Vec* f) {
  IterationDiag diag;
  diag.step_index = step;
  diag.note = note;
  if (truth != nullptr) {
    if (w != nullptr) diag.err_w_true = err_w(*w, truth->w_star);
    if (f != nullptr) diag.err_f_true = err_f(*f, truth->f_star);
  }
  report.trace.push_back(std::move(diag));
}

// Rethrows a stage failure with the stage named, preserving the category.
[[noreturn]] void rethrow_with_stage(const error& e, const std::string& stage) {
  throw error(e.code(), stage + ": " + e.what());
}

}  // namespace

EstimateReport ols(const Dataset& ds) {
  check_estimator_input(ds, "ols");
  return weighted_normal_solve(ds, Vec::Ones(ds.n()), "ols");
}

Mat residual_second_moment(const Dataset& ds, const Vec& w_hat) {
  check_estimator_input(ds, "spectral");
  if (w_hat.size() != ds.d()) {
    throw invalid_argument_error("spectral: w_hat length does not match data");
  }
  const Index n = ds.n();
  const Index d = ds.d();
  Mat s = Mat::Zero(d, d);
  for (Index i = 0; i < n; ++i) {
    const double r = ds.y[i] - ds.X.row(i).dot(w_hat);
    s.selfadjointView<Eigen::Lower>().rankUpdate(
        ds.X.row(i).transpose(), r * r / static_cast<double>(n));
  }
  s = s.selfadjointView<Eigen::Lower>();
  return s;
}

EstimateReport spectral_from_moment(const Mat& s, Vec w_hat) {
  EstimateReport report;
  report.w_hat = std::move(w_hat);
  if (s.isZero(0.0)) {
    // All residuals were zero; the noise model is indistinguishable from 0.
    report.f_hat = Vec::Zero(s.rows());
    record_diag(report, 0, "spectral: zero residual moment, f_hat set to 0",
                nullptr, nullptr, nullptr);
    return report;
  }
  const auto [lambda, u] = top_eigenpair(s);
  const double radius = std::sqrt(lambda / 3.0);
  report.f_hat = radius * u;
  return report;
}

EstimateReport spectral(const Dataset& ds, const Vec& w_hat) {
  return spectral_from_moment(residual_second_moment(ds, w_hat), w_hat);
}

EstimateReport wls(const Dataset& ds, const Vec& f_hat, const WlsParams& params) {
  check_estimator_input(ds, "wls");
  if (f_hat.size() != ds.d()) {
    throw invalid_argument_error("wls: f_hat length does not match data");
  }
  if (!(params.lambda >= 0.0)) {
    throw invalid_argument_error("wls: lambda must be >= 0");
  }
  const double floor =
      kWlsFloorScale * (f_hat.squaredNorm() + params.lambda + kWlsFloorScale);
  const Index n = ds.n();
  Vec weights(n);
  for (Index i = 0; i < n; ++i) {
    const double proj = ds.X.row(i).dot(f_hat);
    weights[i] = 1.0 / (proj * proj + params.lambda + floor);
  }
  return weighted_normal_solve(ds, weights, "wls");
}

Vec pseudogradient(const Dataset& batch, const Vec& f_cur, const Vec& f_hat,
                   const Vec& w_hat, double mu_bar) {
  check_estimator_input(batch, "pseudogradient");
  const Index d = batch.d();
  if (f_cur.size() != d || f_hat.size() != d || w_hat.size() != d) {
    throw invalid_argument_error("pseudogradient: vector length mismatch");
  }
  if (!(mu_bar > 0.0)) {
    throw invalid_argument_error("pseudogradient: mu_bar must be positive");
  }
  const Index m = batch.n();
  Vec g = Vec::Zero(d);
  for (Index i = 0; i < m; ++i) {
    const double proj_f_hat = batch.X.row(i).dot(f_hat);
    if (std::abs(proj_f_hat) < mu_bar) continue;
    const double proj_f = batch.X.row(i).dot(f_cur);
    const double resid = batch.y[i] - batch.X.row(i).dot(w_hat);
    const double scale = (proj_f * proj_f - resid * resid) /
                         (proj_f_hat * proj_f_hat * proj_f_hat);
    g += scale * batch.X.row(i).transpose();
  }
  return g / static_cast<double>(m);
}

EstimateReport phase_retrieval(const Dataset& ds, const Vec& w_hat,
                               const Vec& f_hat,
                               const PhaseRetrievalParams& params,
                               const ProblemInstance* truth) {
  check_estimator_input(ds, "phase_retrieval");
  if (params.steps < 1) {
    throw invalid_argument_error("phase_retrieval: steps must be >= 1");
  }
  if (!(params.mu_bar > 0.0) || !(params.alpha0 > 0.0) || !(params.alpha1 > 0.0)) {
    throw invalid_argument_error(
        "phase_retrieval: mu_bar and step sizes must be positive");
  }
  const double f_norm_sq = f_hat.squaredNorm();
  if (!(params.mu_bar < std::sqrt(f_norm_sq))) {
    throw invalid_argument_error(
        "phase_retrieval: mu_bar = " + std::to_string(params.mu_bar) +
        " must be below ||f_hat|| = " + std::to_string(std::sqrt(f_norm_sq)));
  }
  if (ds.n() < params.steps) {
    throw insufficient_samples_error(
        "phase_retrieval: need at least one sample per step");
  }

  const std::vector<Dataset> batches = partition(ds, params.steps);
  EstimateReport report;
  report.w_hat = w_hat;
  Vec f = f_hat;
  record_diag(report, 0, "phase-retrieval init", truth, nullptr, &f);
  for (int t = 0; t < params.steps; ++t) {
    const Vec g = pseudogradient(batches[static_cast<std::size_t>(t)], f, f_hat,
                                 w_hat, params.mu_bar);
    // D g = alpha1 g + (alpha0 - alpha1) f_hat <f_hat, g> / ||f_hat||^2
    const Vec step = params.alpha1 * g + (params.alpha0 - params.alpha1) *
                                             (f_hat.dot(g) / f_norm_sq) * f_hat;
    f -= step;
    record_diag(report, t + 1, "phase-retrieval step", truth, nullptr, &f);
  }
  report.f_hat = std::move(f);
  return report;
}

namespace {

EstimateReport refine_impl(const std::vector<const Dataset*>& parts, Vec w0,
                           Vec f0, const SymbLearnConfig& cfg, Index n_total,
                           const ProblemInstance* truth) {
  if (parts.size() != 2 * static_cast<std::size_t>(cfg.K)) {
    throw invalid_argument_error("symblearn_refine: expected 2K partitions");
  }
  const Index d = parts.front()->d();
  const Index m = parts.front()->n();

  EstimateReport report;
  Vec w = std::move(w0);
  Vec f = std::move(f0);
  record_diag(report, 0, "init", truth, &w, &f);

  for (int k = 1; k < cfg.K; ++k) {
    const double f_norm = f.norm();
    const double lambda = schedule_lambda(k, m, d, f_norm, n_total, cfg);
    try {
      w = wls(*parts[static_cast<std::size_t>(2 * k)], f, WlsParams{lambda}).w_hat;
    } catch (const error& e) {
      rethrow_with_stage(e, "symblearn wls stage k=" + std::to_string(k));
    }

    if (f_norm == 0.0) {
      // degenerate spectral output (all residuals zero); no direction to refine
      record_diag(report, k, "refine (phase retrieval skipped: f = 0)", truth,
                  &w, &f);
      continue;
    }
    const double mu = schedule_mu(k, m, d, f_norm, n_total, cfg);
    PhaseRetrievalParams pr;
    pr.mu_bar = mu;
    pr.alpha0 = cfg.c_step * f_norm * f_norm;
    pr.alpha1 = cfg.c_step * mu * f_norm;
    pr.steps = cfg.K_p;
    try {
      f = *phase_retrieval(*parts[static_cast<std::size_t>(2 * k + 1)], w, f, pr)
               .f_hat;
    } catch (const error& e) {
      rethrow_with_stage(e, "symblearn phase-retrieval stage k=" + std::to_string(k));
    }
    record_diag(report, k, "refine", truth, &w, &f);
  }

  report.w_hat = std::move(w);
  report.f_hat = std::move(f);
  return report;
}

}  // namespace

EstimateReport symblearn_refine(const std::vector<Dataset>& parts, Vec w0,
                                Vec f0, const SymbLearnConfig& cfg,
                                Index n_total, const ProblemInstance* truth) {
  std::vector<const Dataset*> views;
  views.reserve(parts.size());
  for (const Dataset& part : parts) views.push_back(&part);
  return refine_impl(views, std::move(w0), std::move(f0), cfg, n_total, truth);
}

EstimateReport symblearn(const Dataset& ds, const SymbLearnConfig& cfg_in,
                         bool epoch_mode, const ProblemInstance* truth) {
  check_estimator_input(ds, "symblearn");
  const SymbLearnConfig cfg = resolve_config(cfg_in, ds.n());
  const Index d = ds.d();
  const Index m = epoch_mode ? ds.n() : ds.n() / (2 * cfg.K);
  if (m < d + 5) {
    throw insufficient_samples_error(
        "symblearn: partition size " + std::to_string(m) +
        " below d + 5 = " + std::to_string(d + 5) + " (n = " +
        std::to_string(ds.n()) + ", K = " + std::to_string(cfg.K) + ")");
  }

  std::vector<Dataset> slices;
  std::vector<const Dataset*> parts(static_cast<std::size_t>(2 * cfg.K), &ds);
  if (!epoch_mode) {
    slices = partition(ds, 2 * cfg.K);
    for (std::size_t p = 0; p < slices.size(); ++p) parts[p] = &slices[p];
  }

  EstimateReport report;
  Vec w;
  try {
    w = ols(*parts[0]).w_hat;
  } catch (const error& e) {
    rethrow_with_stage(e, "symblearn ols stage");
  }
  record_diag(report, 0, "ols", truth, &w, nullptr);

  EstimateReport spec;
  try {
    spec = spectral(*parts[1], w);
  } catch (const error& e) {
    rethrow_with_stage(e, "symblearn spectral stage");
  }
  Vec f = *spec.f_hat;
  record_diag(report, 0, "spectral", truth, nullptr, &f);

  EstimateReport refined =
      refine_impl(parts, std::move(w), std::move(f), cfg, ds.n(), truth);
  for (auto& diag : refined.trace) {
    if (diag.note == "init") continue;  // already covered by ols/spectral rows
    report.trace.push_back(std::move(diag));
  }
  report.w_hat = std::move(refined.w_hat);
  report.f_hat = std::move(refined.f_hat);
  return report;
}

EstimateReport symblearn_mult(const Dataset& ds, int K,
                              const std::vector<double>& lambda_schedule,
                              const SymbLearnConfig& cfg_in,
                              const ProblemInstance* truth) {
  check_estimator_input(ds, "symblearn_mult");
  if (K < 1) {
    throw invalid_argument_error("symblearn_mult: K must be >= 1");
  }
  SymbLearnConfig cfg = cfg_in;
  cfg.K = K;
  cfg = resolve_config(cfg, ds.n());
  if (!lambda_schedule.empty() &&
      lambda_schedule.size() != static_cast<std::size_t>(K)) {
    throw invalid_argument_error(
        "symblearn_mult: lambda_schedule must supply K values");
  }
  const Index d = ds.d();
  const Index m = ds.n() / (K + 1);
  if (m < d + 5) {
    throw insufficient_samples_error(
        "symblearn_mult: partition size " + std::to_string(m) +
        " below d + 5 = " + std::to_string(d + 5));
  }

  const std::vector<Dataset> parts = partition(ds, K + 1);
  EstimateReport report;
  Vec w;
  try {
    w = ols(parts[0]).w_hat;
  } catch (const error& e) {
    rethrow_with_stage(e, "symblearn_mult ols stage");
  }
  record_diag(report, 0, "ols", truth, &w, nullptr);

  for (int k = 1; k <= K; ++k) {
    const double lambda =
        lambda_schedule.empty()
            ? schedule_lambda(k - 1, m, d, w.norm(), ds.n(), cfg)
            : lambda_schedule[static_cast<std::size_t>(k - 1)];
    try {
      w = wls(parts[static_cast<std::size_t>(k)], w, WlsParams{lambda}).w_hat;
    } catch (const error& e) {
      rethrow_with_stage(e, "symblearn_mult wls stage k=" + std::to_string(k));
    }
    record_diag(report, k, "wls", truth, &w, nullptr);
  }
  report.w_hat = std::move(w);
  return report;
}

}  // namespace hetreg
