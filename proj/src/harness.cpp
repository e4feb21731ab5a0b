#include "hetreg/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>
#include <thread>
#include <tuple>

#include "hetreg/csv.hpp"
#include "hetreg/errors.hpp"

namespace hetreg {

namespace {

constexpr std::uint64_t kTruthTag = 0x7bd5c66db1b90F6bULL;

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::uint64_t hash_combine(std::uint64_t h, std::uint64_t v) {
  return mix64(h ^ (v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2)));
}

const std::vector<std::string> kEstimators = {"ols", "wls_spectral", "symblearn",
                                              "symblearn_mult"};

bool known_estimator(const std::string& name) {
  return std::find(kEstimators.begin(), kEstimators.end(), name) !=
         kEstimators.end();
}

Vec random_direction(RngStream& stream, Index d, double norm) {
  Vec v = std_normal(stream, d);
  return (norm / v.norm()) * v;
}

}  // namespace

std::uint64_t slice_stream_index(const std::string& estimator, Index n, Index d,
                                 int trial) {
  std::uint64_t h = fnv1a(estimator);
  h = hash_combine(h, static_cast<std::uint64_t>(n));
  h = hash_combine(h, static_cast<std::uint64_t>(d));
  h = hash_combine(h, static_cast<std::uint64_t>(trial));
  return h;
}

ProblemInstance cell_instance(std::uint64_t master_seed, Index n, Index d,
                              int trial, double w_norm, double f_norm,
                              bool multiplicative) {
  std::uint64_t h = kTruthTag;
  h = hash_combine(h, static_cast<std::uint64_t>(n));
  h = hash_combine(h, static_cast<std::uint64_t>(d));
  h = hash_combine(h, static_cast<std::uint64_t>(trial));
  RngStream stream = make_stream(master_seed, h);
  Vec w = random_direction(stream, d, w_norm);
  if (multiplicative) {
    return make_multiplicative_instance(std::move(w));
  }
  Vec f = random_direction(stream, d, f_norm);
  return make_instance(std::move(w), std::move(f));
}

EstimateReport wls_spectral_fit(const Dataset& ds, const SymbLearnConfig& cfg_in,
                                bool epoch_mode, const ProblemInstance* truth) {
  const SymbLearnConfig cfg = resolve_config(cfg_in, ds.n());
  std::vector<Dataset> slices;
  const Dataset* stage[3] = {&ds, &ds, &ds};
  Index m = ds.n();
  if (!epoch_mode) {
    slices = partition(ds, 3);
    for (int p = 0; p < 3; ++p) stage[p] = &slices[static_cast<std::size_t>(p)];
    m = slices[0].n();
  }

  EstimateReport report;
  const Vec w0 = ols(*stage[0]).w_hat;
  const EstimateReport spec = spectral(*stage[1], w0);
  const Vec& f_s = *spec.f_hat;
  const double lambda = schedule_lambda(1, m, ds.d(), f_s.norm(), ds.n(), cfg);
  report.w_hat = wls(*stage[2], f_s, WlsParams{lambda}).w_hat;
  report.f_hat = f_s;
  if (truth != nullptr) {
    IterationDiag diag;
    diag.step_index = 0;
    diag.note = "wls_spectral";
    diag.err_w_true = err_w(report.w_hat, truth->w_star);
    diag.err_f_true = err_f(f_s, truth->f_star);
    report.trace.push_back(std::move(diag));
  }
  return report;
}

TrialRecord run_trial(const TrialSlice& slice, const ProblemInstance& inst,
                      RngStream stream) {
  TrialRecord rec;
  rec.estimator = slice.estimator;
  rec.n = slice.n;
  rec.d = slice.d;
  rec.trial = slice.trial;
  rec.seed = stream.stream_index;

  const auto start = std::chrono::steady_clock::now();
  try {
    const Dataset ds = sample_dataset(inst, slice.n, stream);
    EstimateReport report;
    if (slice.estimator == "ols") {
      report = ols(ds);
    } else if (slice.estimator == "wls_spectral") {
      report = wls_spectral_fit(ds, slice.cfg, slice.epoch_mode);
    } else if (slice.estimator == "symblearn") {
      report = symblearn(ds, slice.cfg, slice.epoch_mode);
    } else if (slice.estimator == "symblearn_mult") {
      const SymbLearnConfig cfg = resolve_config(slice.cfg, ds.n());
      report = symblearn_mult(ds, cfg.K, {}, cfg);
    } else {
      throw invalid_argument_error("unknown estimator '" + slice.estimator + "'");
    }
    rec.err_w = err_w(report.w_hat, inst.w_star);
    rec.n_err_w = static_cast<double>(slice.n) * rec.err_w;
    if (report.f_hat.has_value()) {
      rec.err_f = err_f(*report.f_hat, inst.f_star);
    }
  } catch (const error& e) {
    rec.failed = true;
    rec.fail_reason = e.what();
    rec.err_w = 0.0;
    rec.n_err_w = 0.0;
    rec.err_f.reset();
  }
  const auto stop = std::chrono::steady_clock::now();
  if (slice.timing) {
    rec.runtime_ms =
        std::chrono::duration<double, std::milli>(stop - start).count();
  }
  return rec;
}

void validate_spec(const ExperimentSpec& spec) {
  if (spec.n_values.empty() || spec.d_values.empty()) {
    throw invalid_argument_error("spec: n_values and d_values must be nonempty");
  }
  if (spec.trials < 1) {
    throw invalid_argument_error("spec: trials must be >= 1");
  }
  if (spec.estimators.empty()) {
    throw invalid_argument_error("spec: estimators must be nonempty");
  }
  for (const std::string& est : spec.estimators) {
    if (!known_estimator(est)) {
      throw invalid_argument_error("spec: unknown estimator '" + est + "'");
    }
  }
  if (!(spec.f_norm > 0.0) || !(spec.w_norm > 0.0)) {
    throw invalid_argument_error("spec: f_norm and w_norm must be positive");
  }
  for (Index n : spec.n_values) {
    for (Index d : spec.d_values) {
      if (n < 4 * d) {
        throw invalid_argument_error(
            "spec: n = " + std::to_string(n) + " below 4*d = " +
            std::to_string(4 * d));
      }
    }
  }
}

std::vector<TrialRecord> run_grid(const ExperimentSpec& spec, int workers) {
  validate_spec(spec);

  std::vector<TrialSlice> tasks;
  for (const std::string& est : spec.estimators) {
    for (Index n : spec.n_values) {
      for (Index d : spec.d_values) {
        for (int t = 0; t < spec.trials; ++t) {
          TrialSlice slice;
          slice.estimator = est;
          slice.n = n;
          slice.d = d;
          slice.trial = t;
          slice.cfg = spec.symblearn_cfg;
          slice.epoch_mode = spec.epoch_mode;
          slice.timing = spec.timing;
          tasks.push_back(std::move(slice));
        }
      }
    }
  }

  std::vector<TrialRecord> records(tasks.size());
  std::atomic<std::size_t> cursor{0};
  auto worker = [&]() {
    for (;;) {
      const std::size_t i = cursor.fetch_add(1);
      if (i >= tasks.size()) return;
      const TrialSlice& slice = tasks[i];
      const ProblemInstance inst = cell_instance(
          spec.master_seed, slice.n, slice.d, slice.trial, spec.w_norm,
          spec.f_norm, slice.estimator == "symblearn_mult");
      RngStream stream = make_stream(
          spec.master_seed,
          slice_stream_index(slice.estimator, slice.n, slice.d, slice.trial));
      records[i] = run_trial(slice, inst, stream);
    }
  };

  int pool = workers > 0 ? workers
                         : static_cast<int>(std::thread::hardware_concurrency());
  if (pool < 1) pool = 1;
  pool = std::min<int>(pool, static_cast<int>(tasks.size()));
  std::vector<std::thread> threads;
  threads.reserve(static_cast<std::size_t>(pool));
  for (int i = 0; i < pool; ++i) threads.emplace_back(worker);
  for (auto& th : threads) th.join();

  std::sort(records.begin(), records.end(),
            [](const TrialRecord& a, const TrialRecord& b) {
              return std::tie(a.estimator, a.n, a.d, a.trial) <
                     std::tie(b.estimator, b.n, b.d, b.trial);
            });
  return records;
}

RateFit fit_rate(const std::vector<TrialRecord>& records, const std::string& vary) {
  if (vary != "n" && vary != "d") {
    throw invalid_argument_error("fit_rate: vary must be 'n' or 'd'");
  }
  std::map<Index, std::pair<double, long>> groups;  // value -> (sum err, count)
  for (const TrialRecord& rec : records) {
    if (rec.failed) continue;
    const Index key = (vary == "n") ? rec.n : rec.d;
    auto& g = groups[key];
    g.first += rec.err_w;
    g.second += 1;
  }
  if (groups.size() < 3) {
    throw invalid_argument_error(
        "fit_rate: need at least 3 distinct values on the varied axis");
  }

  std::vector<double> xs, ys;
  for (const auto& [value, sums] : groups) {
    xs.push_back(std::log(static_cast<double>(value)));
    ys.push_back(std::log(sums.first / static_cast<double>(sums.second)));
  }
  const double np = static_cast<double>(xs.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sx += xs[i];
    sy += ys[i];
    sxx += xs[i] * xs[i];
    sxy += xs[i] * ys[i];
  }
  RateFit fit;
  fit.slope = (np * sxy - sx * sy) / (np * sxx - sx * sx);
  fit.intercept = (sy - fit.slope * sx) / np;
  double ss_res = 0, ss_tot = 0;
  const double mean_y = sy / np;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double pred = fit.intercept + fit.slope * xs[i];
    ss_res += (ys[i] - pred) * (ys[i] - pred);
    ss_tot += (ys[i] - mean_y) * (ys[i] - mean_y);
  }
  fit.r_squared = ss_tot == 0.0 ? 1.0 : 1.0 - ss_res / ss_tot;
  fit.r_squared = std::clamp(fit.r_squared, 0.0, 1.0);
  return fit;
}

void write_csv(const std::vector<TrialRecord>& records, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw io_error("cannot open '" + path + "' for writing");
  out << "estimator,n,d,trial,seed,err_w,err_f,n_err_w,runtime_ms\n";
  for (const TrialRecord& rec : records) {
    out << rec.estimator << "," << rec.n << "," << rec.d << "," << rec.trial
        << "," << rec.seed << ",";
    if (!rec.failed) {
      out << format_double(rec.err_w) << ",";
      out << (rec.err_f ? format_double(*rec.err_f) : std::string()) << ",";
      out << format_double(rec.n_err_w) << ",";
    } else {
      out << ",,,";
    }
    out << format_double(rec.runtime_ms) << "\n";
  }
  if (!out) throw io_error("write failure on '" + path + "'");
}

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream is(s);
  while (std::getline(is, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

long parse_long(const std::string& v, long line_no) {
  char* end = nullptr;
  const long x = std::strtol(v.c_str(), &end, 10);
  if (end == v.c_str() || *end != '\0') {
    throw parse_error("malformed integer '" + v + "'", line_no);
  }
  return x;
}

double parse_float(const std::string& v, long line_no) {
  char* end = nullptr;
  const double x = std::strtod(v.c_str(), &end);
  if (end == v.c_str() || *end != '\0') {
    throw parse_error("malformed float '" + v + "'", line_no);
  }
  return x;
}

bool parse_bool(const std::string& v, long line_no) {
  if (v == "true" || v == "1" || v == "on") return true;
  if (v == "false" || v == "0" || v == "off") return false;
  throw parse_error("malformed boolean '" + v + "'", line_no);
}

}  // namespace

ExperimentSpec parse_experiment_spec(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw io_error("cannot open spec file '" + path + "'");
  ExperimentSpec spec;
  std::string line;
  long line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw parse_error("expected 'key = value'", line_no);
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));

    if (key == "name") {
      spec.name = value;
    } else if (key == "n_values") {
      spec.n_values.clear();
      for (const std::string& v : split_list(value)) {
        spec.n_values.push_back(parse_long(v, line_no));
      }
    } else if (key == "d_values") {
      spec.d_values.clear();
      for (const std::string& v : split_list(value)) {
        spec.d_values.push_back(parse_long(v, line_no));
      }
    } else if (key == "trials") {
      spec.trials = static_cast<int>(parse_long(value, line_no));
    } else if (key == "estimators") {
      spec.estimators = split_list(value);
    } else if (key == "f_norm") {
      spec.f_norm = parse_float(value, line_no);
    } else if (key == "w_norm") {
      spec.w_norm = parse_float(value, line_no);
    } else if (key == "master_seed") {
      char* end = nullptr;
      spec.master_seed = std::strtoull(value.c_str(), &end, 10);
      if (end == value.c_str() || *end != '\0') {
        throw parse_error("malformed seed '" + value + "'", line_no);
      }
    } else if (key == "epoch_mode") {
      spec.epoch_mode = parse_bool(value, line_no);
    } else if (key == "timing") {
      spec.timing = parse_bool(value, line_no);
    } else if (key == "symblearn_cfg.K") {
      spec.symblearn_cfg.K = static_cast<int>(parse_long(value, line_no));
    } else if (key == "symblearn_cfg.K_p") {
      spec.symblearn_cfg.K_p = static_cast<int>(parse_long(value, line_no));
    } else if (key == "symblearn_cfg.c_step") {
      spec.symblearn_cfg.c_step = parse_float(value, line_no);
    } else if (key == "symblearn_cfg.polylog_const") {
      spec.symblearn_cfg.polylog_const = parse_float(value, line_no);
    } else if (key == "symblearn_cfg.polylog_power") {
      spec.symblearn_cfg.polylog_power = parse_float(value, line_no);
    } else if (key == "symblearn_cfg.delta") {
      spec.symblearn_cfg.delta = parse_float(value, line_no);
    } else {
      throw parse_error("unknown key '" + key + "'", line_no);
    }
  }
  return spec;
}

}  // namespace hetreg
