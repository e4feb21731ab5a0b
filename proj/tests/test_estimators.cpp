#include <cmath>

#include <doctest.h>

#include "hetreg/errors.hpp"
#include "hetreg/estimators.hpp"
#include "hetreg/linalg.hpp"
#include "oracles.hpp"

using namespace hetreg;

namespace {

Dataset dataset_from(const ProblemInstance& inst, Index n, std::uint64_t seed,
                     std::uint64_t stream = 0) {
  RngStream s = make_stream(seed, stream);
  return sample_dataset(inst, n, s);
}

ProblemInstance random_instance(Index d, std::uint64_t seed, double w_norm = 1.0,
                                double f_norm = 1.0) {
  RngStream s = make_stream(seed, 1000);
  Vec w = std_normal(s, d);
  w *= w_norm / w.norm();
  Vec f = std_normal(s, d);
  f *= f_norm / f.norm();
  return make_instance(std::move(w), std::move(f));
}

}  // namespace

TEST_CASE("ols on the identity design returns the responses") {
  const Index d = 4;
  Dataset ds;
  ds.X = Mat::Identity(d, d);
  ds.y.resize(d);
  ds.y << 2.0, -1.0, 0.5, 3.25;
  const EstimateReport rep = ols(ds);
  for (Index i = 0; i < d; ++i) CHECK(rep.w_hat[i] == ds.y[i]);
  CHECK_FALSE(rep.f_hat.has_value());
}

TEST_CASE("ols interpolates noiseless data") {
  const Index d = 12;
  const ProblemInstance inst =
      make_instance(random_instance(d, 21).w_star, Vec::Zero(d));
  const Dataset ds = dataset_from(inst, d + 10, 22);
  const EstimateReport rep = ols(ds);
  CHECK(err_w(rep.w_hat, inst.w_star) <=
        1e-16 * inst.w_star.squaredNorm() * static_cast<double>(d));
}

TEST_CASE("ols recovers the regressor with n = d + 5 and no noise") {
  const Index d = 9;
  const ProblemInstance inst =
      make_instance(random_instance(d, 23).w_star, Vec::Zero(d));
  const Dataset ds = dataset_from(inst, d + 5, 24);
  CHECK(err_w(ols(ds).w_hat, inst.w_star) <= 1e-16);
}

TEST_CASE("ols matches the elimination oracle on a small seeded problem") {
  const ProblemInstance inst = random_instance(2, 31);
  const Dataset ds = dataset_from(inst, 5, 32);
  const EstimateReport rep = ols(ds);
  // independent route: normal equations assembled densely, solved by
  // partial-pivot elimination
  Mat h = Mat::Zero(2, 2);
  Vec rhs = Vec::Zero(2);
  for (Index i = 0; i < ds.n(); ++i) {
    h += ds.X.row(i).transpose() * ds.X.row(i);
    rhs += ds.y[i] * ds.X.row(i).transpose();
  }
  const Vec ref = oracles::solve_dense(h, rhs);
  CHECK((rep.w_hat - ref).norm() < 1e-10);
}

TEST_CASE("ols raises singular-design when underdetermined") {
  const ProblemInstance inst = random_instance(6, 41);
  const Dataset ds = dataset_from(inst, 4, 42);
  CHECK_THROWS_AS(ols(ds), singular_design_error);
}

TEST_CASE("spectral in one dimension is the positive scaled root") {
  Dataset ds;
  ds.X.resize(4, 1);
  ds.X << 1.0, -2.0, 0.5, 1.5;
  ds.y.resize(4);
  ds.y << 0.3, 1.1, -0.2, 0.7;
  const Vec w0 = Vec::Zero(1);
  const EstimateReport rep = spectral(ds, w0);
  double s_scalar = 0.0;
  for (Index i = 0; i < 4; ++i) {
    s_scalar += ds.y[i] * ds.y[i] * ds.X(i, 0) * ds.X(i, 0) / 4.0;
  }
  REQUIRE(rep.f_hat.has_value());
  CHECK((*rep.f_hat)[0] == doctest::Approx(std::sqrt(s_scalar / 3.0)).epsilon(1e-12));
  CHECK((*rep.f_hat)[0] > 0.0);
}

TEST_CASE("spectral eigen-stage recovers the planted noise direction") {
  // feed the exact population moment 3||f||^2 e e^T + ||f||^2 (I - e e^T)
  const Index d = 6;
  const ProblemInstance inst = random_instance(d, 51, 1.0, 1.7);
  const Vec& f = inst.f_star;
  const Vec e = f / f.norm();
  Mat sigma = 3.0 * f.squaredNorm() * (e * e.transpose()) +
              f.squaredNorm() * (Mat::Identity(d, d) - e * e.transpose());
  for (Index i = 0; i < d; ++i) {
    for (Index j = 0; j < i; ++j) sigma(j, i) = sigma(i, j);
  }
  const EstimateReport rep = spectral_from_moment(sigma, Vec::Zero(d));
  REQUIRE(rep.f_hat.has_value());
  CHECK(std::sqrt(err_f(*rep.f_hat, f)) < 1e-8);
}

TEST_CASE("spectral error shrinks with the sample size") {
  const Index d = 5;
  const ProblemInstance inst = random_instance(d, 61);
  const Dataset big = dataset_from(inst, 100000, 62);
  const Dataset small = dataset_from(inst, 1000, 62, 1);
  const double err_big = err_f(*spectral(big, inst.w_star).f_hat, inst.f_star);
  const double err_small = err_f(*spectral(small, inst.w_star).f_hat, inst.f_star);
  CHECK(err_big < err_small);
}

TEST_CASE("spectral norm identity holds") {
  const Index d = 7;
  const ProblemInstance inst = random_instance(d, 71);
  const Dataset ds = dataset_from(inst, 2000, 72);
  const EstimateReport rep = spectral(ds, inst.w_star);
  const Mat s = residual_second_moment(ds, inst.w_star);
  const auto [lambda, u] = top_eigenpair(s);
  CHECK(rep.f_hat->squaredNorm() ==
        doctest::Approx(lambda / 3.0).epsilon(1e-12));
}

TEST_CASE("spectral flags an all-zero residual moment") {
  const Index d = 3;
  const ProblemInstance inst = random_instance(d, 81);
  Dataset ds = dataset_from(inst, 50, 82);
  for (Index i = 0; i < ds.n(); ++i) ds.y[i] = ds.X.row(i).dot(inst.w_star);
  const EstimateReport rep = spectral(ds, inst.w_star);
  REQUIRE(rep.f_hat.has_value());
  CHECK(rep.f_hat->norm() == 0.0);
  REQUIRE_FALSE(rep.trace.empty());
  CHECK(rep.trace.front().note.find("zero residual") != std::string::npos);
}

TEST_CASE("wls with constant weights reduces to ols") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const Index d = 3 + static_cast<Index>(seed % 3);
    const ProblemInstance inst = random_instance(d, 90 + seed);
    const Dataset ds = dataset_from(inst, 8 * d, 91 + seed);
    const Vec via_ols = ols(ds).w_hat;
    const Vec via_wls = wls(ds, Vec::Zero(d), WlsParams{1.0}).w_hat;
    for (Index j = 0; j < d; ++j) {
      CHECK(via_wls[j] == doctest::Approx(via_ols[j]).epsilon(1e-12));
    }
  }
}

TEST_CASE("wls is bit-invariant under negating the noise model") {
  const Index d = 4;
  const ProblemInstance inst = random_instance(d, 101);
  const Dataset ds = dataset_from(inst, 60, 102);
  RngStream s = make_stream(103, 0);
  const Vec f = std_normal(s, d);
  const Vec a = wls(ds, f, WlsParams{0.3}).w_hat;
  const Vec b = wls(ds, -f, WlsParams{0.3}).w_hat;
  for (Index j = 0; j < d; ++j) CHECK(a[j] == b[j]);
}

TEST_CASE("wls matches the weighted elimination oracle") {
  const Index d = 3;
  const ProblemInstance inst = random_instance(d, 111);
  const Dataset ds = dataset_from(inst, 40, 112);
  RngStream s = make_stream(113, 0);
  Vec f = std_normal(s, d);
  f *= 0.9 / f.norm();
  const double lambda = 0.1;
  const Vec got = wls(ds, f, WlsParams{lambda}).w_hat;
  const Vec ref = oracles::wls_minimizer(ds, f, lambda);
  CHECK((got - ref).norm() < 1e-10);
}

TEST_CASE("wls oracle agreement across random small instances") {
  for (std::uint64_t rep = 0; rep < 20; ++rep) {
    const Index d = 2 + static_cast<Index>(rep % 4);  // up to 5
    const ProblemInstance inst = random_instance(d, 200 + rep);
    const Dataset ds = dataset_from(inst, 30 + 5 * d, 300 + rep);
    RngStream s = make_stream(400 + rep, 0);
    Vec f = std_normal(s, d);
    const double lambda = 0.05 + 0.1 * static_cast<double>(rep % 3);
    const Vec got = wls(ds, f, WlsParams{lambda}).w_hat;
    const Vec ref = oracles::wls_minimizer(ds, f, lambda);
    CHECK((got - ref).norm() < 1e-10);
  }
}

TEST_CASE("wls rejects a negative regularizer") {
  const ProblemInstance inst = random_instance(3, 121);
  const Dataset ds = dataset_from(inst, 30, 122);
  CHECK_THROWS_AS(wls(ds, Vec::Ones(3), WlsParams{-1.0}), invalid_argument_error);
}

TEST_CASE("estimators are deterministic functions of their inputs") {
  const Index d = 4;
  const ProblemInstance inst = random_instance(d, 131);
  const Dataset ds = dataset_from(inst, 80, 132);
  const Vec w1 = ols(ds).w_hat;
  const Vec w2 = ols(ds).w_hat;
  for (Index j = 0; j < d; ++j) CHECK(w1[j] == w2[j]);
  const EstimateReport s1 = spectral(ds, w1);
  const EstimateReport s2 = spectral(ds, w1);
  for (Index j = 0; j < d; ++j) CHECK((*s1.f_hat)[j] == (*s2.f_hat)[j]);
}
