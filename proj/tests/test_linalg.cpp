#include <cmath>

#include <doctest.h>

#include "hetreg/errors.hpp"
#include "hetreg/linalg.hpp"
#include "oracles.hpp"

using namespace hetreg;

namespace {

// Random SPD matrix B B^T + ridge I with controlled conditioning.
Mat random_spd(RngStream& s, Index d, double ridge = 0.1) {
  Mat b(d, d);
  for (Index i = 0; i < d; ++i) {
    for (Index j = 0; j < d; ++j) b(i, j) = next_normal(s);
  }
  Mat a = b * b.transpose() + ridge * Mat::Identity(d, d);
  // exact symmetric storage
  for (Index i = 0; i < d; ++i) {
    for (Index j = 0; j < i; ++j) a(j, i) = a(i, j);
  }
  return a;
}

}  // namespace

TEST_CASE("solve_spd identity") {
  Mat a = Mat::Identity(3, 3);
  Vec b(3);
  b << 1, 2, 3;
  const Vec x = solve_spd(a, b);
  CHECK(x[0] == doctest::Approx(1.0));
  CHECK(x[1] == doctest::Approx(2.0));
  CHECK(x[2] == doctest::Approx(3.0));
}

TEST_CASE("solve_spd diagonal") {
  Mat a = Mat::Zero(2, 2);
  a(0, 0) = 2;
  a(1, 1) = 4;
  Vec b(2);
  b << 2, 4;
  const Vec x = solve_spd(a, b);
  CHECK(x[0] == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(x[1] == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("solve_spd matches elimination oracle on a random 6x6 system") {
  RngStream s = make_stream(101, 0);
  const Mat a = random_spd(s, 6);
  const Vec b = std_normal(s, 6);
  const Vec x = solve_spd(a, b);
  const Vec ref = oracles::solve_dense(a, b);
  CHECK((x - ref).norm() < 1e-10);
}

TEST_CASE("solve_spd residual bound over random systems") {
  RngStream s = make_stream(555, 0);
  for (int rep = 0; rep < 100; ++rep) {
    const Index d = 2 + static_cast<Index>(next_u64(s) % 49);  // up to 50
    const Mat a = random_spd(s, d, 0.05);
    const Vec b = std_normal(s, d);
    const Vec x = solve_spd(a, b);
    CHECK((a * x - b).norm() <= 1e-10 * b.norm());
  }
}

TEST_CASE("solve_spd reports the offending pivot") {
  Mat a = Mat::Zero(2, 2);
  a(0, 0) = 1.0;
  a(1, 1) = 0.0;  // second pivot collapses
  Vec b(2);
  b << 1, 1;
  CHECK_THROWS_AS(solve_spd(a, b), singular_design_error);
  try {
    solve_spd(a, b);
  } catch (const singular_design_error& e) {
    CHECK(e.pivot() <= 1e-12);
  }
}

TEST_CASE("solve_spd validates shapes") {
  Mat a = Mat::Identity(3, 3);
  Vec b(2);
  b << 1, 2;
  CHECK_THROWS_AS(solve_spd(a, b), invalid_argument_error);
  Mat bad(2, 3);
  bad.setZero();
  CHECK_THROWS_AS(solve_spd(bad, b), invalid_argument_error);
}

TEST_CASE("top_eigenpair on diag(3, 1)") {
  Mat a = Mat::Zero(2, 2);
  a(0, 0) = 3;
  a(1, 1) = 1;
  const auto [lambda, v] = top_eigenpair(a);
  CHECK(lambda == doctest::Approx(3.0).epsilon(1e-10));
  CHECK(std::abs(v[0]) == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(v[0] > 0);  // canonical sign
  CHECK(std::abs(v[1]) < 1e-7);
}

TEST_CASE("top_eigenpair on the identity accepts any unit vector") {
  const auto [lambda, v] = top_eigenpair(Mat::Identity(2, 2));
  CHECK(lambda == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(v.norm() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("top_eigenpair matches the Jacobi oracle on gapped PSD matrices") {
  RngStream s = make_stream(303, 0);
  for (int rep = 0; rep < 20; ++rep) {
    Mat a = random_spd(s, 5, 0.2);
    // widen the spectral gap with a planted dominant direction
    Vec u = std_normal(s, 5);
    u /= u.norm();
    a += (3.0 * a.trace()) * (u * u.transpose());
    for (Index i = 0; i < 5; ++i) {
      for (Index j = 0; j < i; ++j) a(j, i) = a(i, j);
    }
    const auto [lambda, v] = top_eigenpair(a, 1e-12);
    const auto [lref, vref] = oracles::top_eigenpair_jacobi(a);
    CHECK(lambda == doctest::Approx(lref).epsilon(1e-8));
    CHECK(std::abs(v.dot(vref)) >= 1.0 - 1e-8);
  }
}

TEST_CASE("top_eigenpair Rayleigh quotient and maximality") {
  RngStream s = make_stream(404, 0);
  const Mat a = random_spd(s, 8, 0.3);
  const double tol = 1e-10;
  const auto [lambda, v] = top_eigenpair(a, tol);
  CHECK(std::abs(v.dot(a * v) - lambda) <= tol * lambda + 1e-14);
  for (int rep = 0; rep < 100; ++rep) {
    Vec u = std_normal(s, 8);
    u /= u.norm();
    CHECK(lambda + 1e-9 * lambda >= u.dot(a * u));
  }
}

TEST_CASE("top_eigenpair is bit-deterministic") {
  RngStream s = make_stream(505, 0);
  const Mat a = random_spd(s, 7, 0.1);
  const auto [l1, v1] = top_eigenpair(a);
  const auto [l2, v2] = top_eigenpair(a);
  CHECK(l1 == l2);
  for (Index i = 0; i < 7; ++i) CHECK(v1[i] == v2[i]);
}

TEST_CASE("top_eigenpair reports non-convergence on a gap-free spectrum") {
  Mat a = Mat::Zero(2, 2);
  a(0, 0) = 1.0;
  a(1, 1) = 1.0 - 1e-9;
  CHECK_THROWS_AS(top_eigenpair(a, 1e-13, 40), convergence_error);
  try {
    top_eigenpair(a, 1e-13, 40);
  } catch (const convergence_error& e) {
    CHECK(e.residual() > 0.0);
  }
}

TEST_CASE("zero matrix has zero top eigenvalue") {
  const auto [lambda, v] = top_eigenpair(Mat::Zero(4, 4));
  CHECK(lambda == 0.0);
  CHECK(v.norm() == doctest::Approx(1.0).epsilon(1e-12));
}
