#include "hetreg/model.hpp"

#include <string>

#include "hetreg/errors.hpp"

namespace hetreg {

ProblemInstance make_instance(Vec w_star, Vec f_star) {
  if (w_star.size() < 1 || w_star.size() != f_star.size()) {
    throw invalid_argument_error(
        "make_instance: w_star and f_star must share a positive length");
  }
  if (!w_star.allFinite() || !f_star.allFinite()) {
    throw invalid_argument_error("make_instance: parameters must be finite");
  }
  ProblemInstance inst;
  inst.d = w_star.size();
  inst.w_star = std::move(w_star);
  inst.f_star = std::move(f_star);
  inst.multiplicative = false;
  return inst;
}

ProblemInstance make_multiplicative_instance(Vec w_star) {
  ProblemInstance inst = make_instance(w_star, w_star);
  inst.multiplicative = true;
  return inst;
}

PartitionPlan make_partition_plan(Index n, Index parts) {
  if (parts < 1) {
    throw invalid_argument_error("partition: parts must be >= 1");
  }
  if (n < parts) {
    throw insufficient_samples_error(
        "partition: " + std::to_string(n) + " samples cannot fill " +
        std::to_string(parts) + " parts");
  }
  const Index size = n / parts;
  PartitionPlan plan;
  plan.part_sizes.assign(static_cast<std::size_t>(parts), size);
  plan.offsets.resize(static_cast<std::size_t>(parts));
  for (Index p = 0; p < parts; ++p) {
    plan.offsets[static_cast<std::size_t>(p)] = p * size;
  }
  return plan;
}

std::vector<Dataset> partition(const Dataset& ds, Index parts) {
  const PartitionPlan plan = make_partition_plan(ds.n(), parts);
  std::vector<Dataset> out;
  out.reserve(plan.part_sizes.size());
  for (std::size_t p = 0; p < plan.part_sizes.size(); ++p) {
    const Index off = plan.offsets[p];
    const Index len = plan.part_sizes[p];
    out.push_back(Dataset{ds.X.middleRows(off, len), ds.y.segment(off, len)});
  }
  return out;
}

Dataset sample_dataset(const ProblemInstance& inst, Index n, RngStream& stream) {
  if (n < 1) {
    throw invalid_argument_error("sample_dataset: n must be >= 1");
  }
  const Index d = inst.d;
  Dataset ds;
  ds.X.resize(n, d);
  ds.y.resize(n);
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < d; ++j) {
      ds.X(i, j) = next_normal(stream);
    }
    const double eps = next_normal(stream);
    ds.y[i] = ds.X.row(i).dot(inst.w_star) + eps * ds.X.row(i).dot(inst.f_star);
  }
  return ds;
}

double err_w(const Vec& w_hat, const Vec& w_star) {
  if (w_hat.size() != w_star.size()) {
    throw invalid_argument_error("err_w: length mismatch");
  }
  return (w_hat - w_star).squaredNorm();
}

double err_f(const Vec& f_hat, const Vec& f_star) {
  if (f_hat.size() != f_star.size()) {
    throw invalid_argument_error("err_f: length mismatch");
  }
  const double minus = (f_hat - f_star).squaredNorm();
  const double plus = (f_hat + f_star).squaredNorm();
  return minus < plus ? minus : plus;
}

}  // namespace hetreg
