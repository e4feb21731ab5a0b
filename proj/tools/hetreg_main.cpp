// Command-line front end: dataset generation, single fits, benchmark grids.

#include <cstdio>
#include <exception>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "hetreg/csv.hpp"
#include "hetreg/errors.hpp"
#include "hetreg/harness.hpp"

namespace {

using nlohmann::json;

constexpr int kExitArgument = 2;
constexpr int kExitData = 3;
constexpr int kExitNumerical = 4;

json vec_to_json(const hetreg::Vec& v) {
  json arr = json::array();
  for (hetreg::Index i = 0; i < v.size(); ++i) arr.push_back(v[i]);
  return arr;
}

hetreg::Vec vec_from_json(const json& arr) {
  hetreg::Vec v(static_cast<hetreg::Index>(arr.size()));
  for (std::size_t i = 0; i < arr.size(); ++i) {
    v[static_cast<hetreg::Index>(i)] = arr[i].get<double>();
  }
  return v;
}

struct GenOptions {
  long d = 0;
  long n = 0;
  double f_norm = 1.0;
  double w_norm = 1.0;
  std::uint64_t seed = 0;
  std::string out;
  std::string truth_out;
  bool multiplicative = false;
};

int run_gen(const GenOptions& opt) {
  const hetreg::ProblemInstance inst = hetreg::cell_instance(
      opt.seed, opt.n, opt.d, 0, opt.w_norm, opt.f_norm, opt.multiplicative);
  hetreg::RngStream stream = hetreg::make_stream(
      opt.seed, hetreg::slice_stream_index("gen", opt.n, opt.d, 0));
  const hetreg::Dataset ds = hetreg::sample_dataset(inst, opt.n, stream);
  hetreg::write_dataset(ds, opt.out);
  if (!opt.truth_out.empty()) {
    json truth;
    truth["w_star"] = vec_to_json(inst.w_star);
    truth["f_star"] = vec_to_json(inst.f_star);
    truth["multiplicative"] = inst.multiplicative;
    std::ofstream out(opt.truth_out);
    if (!out) throw hetreg::io_error("cannot open '" + opt.truth_out + "'");
    out << truth.dump(2) << "\n";
  }
  std::cout << "wrote " << ds.n() << " samples in " << ds.d()
            << " dimensions to " << opt.out << "\n";
  return 0;
}

struct FitOptions {
  std::string estimator;
  std::string data;
  std::string out;
  std::string truth;
  bool epoch_mode = false;
  hetreg::SymbLearnConfig cfg;
};

json trace_to_json(const std::vector<hetreg::IterationDiag>& trace) {
  json arr = json::array();
  for (const auto& diag : trace) {
    json row;
    row["step"] = diag.step_index;
    row["err_w"] = diag.err_w_true ? json(*diag.err_w_true) : json(nullptr);
    row["err_f"] = diag.err_f_true ? json(*diag.err_f_true) : json(nullptr);
    row["note"] = diag.note;
    arr.push_back(std::move(row));
  }
  return arr;
}

int run_fit(const FitOptions& opt) {
  const hetreg::Dataset ds = hetreg::read_dataset(opt.data);

  hetreg::ProblemInstance truth;
  const hetreg::ProblemInstance* truth_ptr = nullptr;
  if (!opt.truth.empty()) {
    std::ifstream in(opt.truth);
    if (!in) throw hetreg::io_error("cannot open truth file '" + opt.truth + "'");
    json j;
    in >> j;
    truth = hetreg::make_instance(vec_from_json(j.at("w_star")),
                                  vec_from_json(j.at("f_star")));
    truth.multiplicative = j.value("multiplicative", false);
    truth_ptr = &truth;
  }

  hetreg::EstimateReport report;
  const hetreg::SymbLearnConfig cfg = hetreg::resolve_config(opt.cfg, ds.n());
  if (opt.estimator == "ols") {
    report = hetreg::ols(ds);
  } else if (opt.estimator == "wls_spectral") {
    report = hetreg::wls_spectral_fit(ds, cfg, opt.epoch_mode, truth_ptr);
  } else if (opt.estimator == "symblearn") {
    report = hetreg::symblearn(ds, cfg, opt.epoch_mode, truth_ptr);
  } else if (opt.estimator == "symblearn_mult") {
    report = hetreg::symblearn_mult(ds, cfg.K, {}, cfg, truth_ptr);
  } else {
    throw hetreg::invalid_argument_error("unknown estimator '" + opt.estimator +
                                         "'");
  }

  json out;
  out["w_hat"] = vec_to_json(report.w_hat);
  out["f_hat"] = report.f_hat ? vec_to_json(*report.f_hat) : json(nullptr);
  out["trace"] = trace_to_json(report.trace);
  json config;
  config["estimator"] = opt.estimator;
  config["n"] = ds.n();
  config["d"] = ds.d();
  config["epoch_mode"] = opt.epoch_mode;
  config["K"] = cfg.K;
  config["K_p"] = cfg.K_p;
  config["c_step"] = cfg.c_step;
  config["polylog_const"] = cfg.polylog_const;
  config["polylog_power"] = cfg.polylog_power;
  config["delta"] = cfg.delta;
  if (truth_ptr != nullptr) {
    config["err_w"] = hetreg::err_w(report.w_hat, truth.w_star);
    if (report.f_hat) {
      config["err_f"] = hetreg::err_f(*report.f_hat, truth.f_star);
    }
  }
  out["config"] = std::move(config);

  std::ofstream os(opt.out);
  if (!os) throw hetreg::io_error("cannot open '" + opt.out + "' for writing");
  os << out.dump(2) << "\n";
  std::cout << "wrote fit report to " << opt.out << "\n";
  return 0;
}

struct BenchOptions {
  std::string spec_path;
  std::string out;
  int workers = 0;
};

int run_bench(const BenchOptions& opt) {
  const hetreg::ExperimentSpec spec = hetreg::parse_experiment_spec(opt.spec_path);
  const std::vector<hetreg::TrialRecord> records =
      hetreg::run_grid(spec, opt.workers);
  hetreg::write_csv(records, opt.out);
  std::size_t failed = 0;
  for (const auto& rec : records) {
    if (rec.failed) {
      ++failed;
      std::cerr << "trial failed: " << rec.estimator << " n=" << rec.n
                << " d=" << rec.d << " trial=" << rec.trial << ": "
                << rec.fail_reason << "\n";
    }
  }
  std::cout << "wrote " << records.size() << " records (" << failed
            << " failed) to " << opt.out << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"heteroscedastic linear regression estimators and benchmarks"};
  app.require_subcommand(1);

  GenOptions gen;
  CLI::App* gen_cmd = app.add_subcommand("gen", "generate a synthetic dataset");
  gen_cmd->add_option("--d", gen.d, "covariate dimension")->required();
  gen_cmd->add_option("--n", gen.n, "sample count")->required();
  gen_cmd->add_option("--f-norm", gen.f_norm, "norm of the noise model");
  gen_cmd->add_option("--w-norm", gen.w_norm, "norm of the regressor");
  gen_cmd->add_option("--seed", gen.seed, "master seed");
  gen_cmd->add_option("--out", gen.out, "output dataset CSV")->required();
  gen_cmd->add_option("--truth-out", gen.truth_out,
                      "optional JSON file for the ground-truth vectors");
  gen_cmd->add_flag("--multiplicative", gen.multiplicative,
                    "set f* = w* (multiplicative noise)");

  FitOptions fit;
  CLI::App* fit_cmd = app.add_subcommand("fit", "fit one estimator to a dataset");
  fit_cmd
      ->add_option("--estimator", fit.estimator,
                   "ols|wls_spectral|symblearn|symblearn_mult")
      ->required();
  fit_cmd->add_option("--data", fit.data, "input dataset CSV")->required();
  fit_cmd->add_option("--out", fit.out, "output JSON report")->required();
  fit_cmd->add_option("--truth", fit.truth, "optional ground-truth JSON");
  fit_cmd->add_flag("--epoch", fit.epoch_mode,
                    "reuse the full dataset for every stage");
  fit_cmd->add_option("--K", fit.cfg.K, "outer steps (0 = ceil(log2 n))");
  fit_cmd->add_option("--K-p", fit.cfg.K_p,
                      "phase-retrieval steps (0 = ceil(ln(n/K)))");
  fit_cmd->add_option("--c-step", fit.cfg.c_step, "step-size constant");
  fit_cmd->add_option("--polylog-const", fit.cfg.polylog_const,
                      "schedule polylog constant");
  fit_cmd->add_option("--polylog-power", fit.cfg.polylog_power,
                      "schedule polylog power");
  fit_cmd->add_option("--delta", fit.cfg.delta, "confidence parameter");

  BenchOptions bench;
  CLI::App* bench_cmd =
      app.add_subcommand("bench", "run a Monte-Carlo benchmark grid");
  bench_cmd->add_option("--spec", bench.spec_path, "experiment spec file")
      ->required();
  bench_cmd->add_option("--out", bench.out, "output records CSV")->required();
  bench_cmd->add_option("--workers", bench.workers,
                        "worker threads (0 = hardware)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitArgument;
  }

  try {
    if (gen_cmd->parsed()) return run_gen(gen);
    if (fit_cmd->parsed()) return run_fit(fit);
    if (bench_cmd->parsed()) return run_bench(bench);
  } catch (const hetreg::error& e) {
    std::cerr << "error: " << e.what() << "\n";
    switch (e.code()) {
      case hetreg::errc::invalid_argument:
        return kExitArgument;
      case hetreg::errc::parse:
      case hetreg::errc::io:
      case hetreg::errc::insufficient_samples:
        return kExitData;
      default:
        return kExitNumerical;  // singular design, convergence
    }
  } catch (const json::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
