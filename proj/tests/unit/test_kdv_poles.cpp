#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "singap/error.hpp"
#include "singap/kdv_poles.hpp"

using namespace singap;
using namespace singap::kdv;

namespace {
const cplx eta = std::polar(1.0, 2.0 * std::numbers::pi / 3.0);
}

TEST_CASE("pole velocities") {
  CHECK(pole_ode_rhs({cplx(0.3, 0.1)})[0] == cplx(0.0));
  // self-similar substitution with the n=2 coefficients: x' = (a/3) t^(-2/3)
  const double t = 0.37;
  std::vector<cplx> a{1.0, eta, eta * eta}, x(3);
  for (int j = 0; j < 3; ++j) x[j] = a[j] * std::cbrt(t);
  const auto v = pole_ode_rhs(x);
  for (int j = 0; j < 3; ++j) CHECK(std::abs(v[j] - a[j] / 3.0 * std::pow(t, -2.0 / 3.0)) < 1e-12);
  auto y = x;
  for (auto& z : y) z += cplx(2.5, -1.0);
  const auto w = pole_ode_rhs(y);
  for (int j = 0; j < 3; ++j) CHECK(std::abs(w[j] - v[j]) < 1e-12);
  try {
    pole_ode_rhs({1.0, 1.0 + 1e-9, 2.0});
    FAIL("expected collision");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::Collision);
  }
}

TEST_CASE("triangular index") {
  CHECK(triangular_index(1) == 1);
  CHECK(triangular_index(6) == 3);
  CHECK(triangular_index(36) == 8);
  CHECK(triangular_index(7) == 0);
  CHECK_THROWS_AS(solve_similarity_system(7), Error);
}

TEST_CASE("n = 1 and n = 2") {
  const auto c1 = solve_similarity_system(1);
  REQUIRE(c1.a.size() == 1);
  CHECK(c1.a[0] == cplx(0.0));
  CHECK(c1.zero_orbit);
  CHECK(c1.real_orbit_count == 1);

  const auto c2 = solve_similarity_system(3);
  REQUIRE(c2.orbits.size() == 1);
  // with the chosen time sign the scale is exactly one: a^3 = 1
  CHECK(std::abs(c2.orbits[0].cube - 1.0) < 1e-12);
  CHECK(c2.real_orbit_count == 1);
  CHECK_FALSE(c2.zero_orbit);
}

TEST_CASE("n = 3 closed forms") {
  const auto c = solve_similarity_system(6);
  REQUIRE(c.orbits.size() == 2);
  const double w = (-7.0 + std::sqrt(45.0)) / 2.0;
  const double a3 = 1.0 + 9.0 * w * (w + 2.0) / ((w - 1.0) * (w - 1.0));
  const double wi = 1.0 / w;
  const double b3 = 1.0 + 9.0 * wi * (wi + 2.0) / ((wi - 1.0) * (wi - 1.0));
  const cplx A = c.orbits[0].cube, B = c.orbits[1].cube;
  CHECK(std::abs(A / B - w) < 1e-8 * std::abs(w));
  CHECK(std::abs(A - a3) < 1e-8 * std::abs(a3));
  CHECK(std::abs(B - b3) < 1e-8 * std::abs(b3));
  CHECK(c.real_orbit_count == 2);
}

TEST_CASE("orbit structure for n <= 6") {
  for (int n = 1; n <= 6; ++n) {
    const int N = n * (n + 1) / 2;
    const auto c = solve_similarity_system(N);
    CAPTURE(n);
    CHECK(c.a.size() == static_cast<std::size_t>(N));
    CHECK(z3_invariance_defect(c.a) < 1e-8);
    CHECK(c.zero_orbit == (N % 3 == 1));
    cplx sum = 0.0;
    for (const cplx& v : c.a) sum += v;
    CHECK(std::abs(sum) < 1e-10 * N);
    CHECK(c.real_orbit_count == (n + 1) / 2);
    CHECK(c.residual < 1e-10);
    for (const auto& o : c.orbits) CHECK(o.members.size() == (o.zero ? 1u : 3u));
  }
}

TEST_CASE("thread count does not change the answer") {
  SimilarityOptions one, many;
  one.threads = 1;
  many.threads = 4;
  const auto x = solve_similarity_system(15, one), y = solve_similarity_system(15, many);
  REQUIRE(x.a.size() == y.a.size());
  for (std::size_t j = 0; j < x.a.size(); ++j) CHECK(x.a[j] == y.a[j]);
}

TEST_CASE("classification rejects broken sets") {
  SimilarityCoefficients c;
  c.a = {1.0, eta, 2.0};
  CHECK_THROWS_AS(classify_orbits(c), Error);
  c.a = {1.0, eta, eta * eta, 1.0 + 1e-9, eta * (1.0 + 1e-9), eta * eta * (1.0 + 1e-9)};
  try {
    classify_orbits(c);
    FAIL("expected ambiguity");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::OrbitAmbiguity);
  }
}

TEST_CASE("ODE cross-check of the self-similar law") {
  const auto c = solve_similarity_system(3);
  const auto r = ode_similarity_crosscheck(c.a, 1e-4, 1e-3);
  CHECK(r.max_deviation < 1e-6);
  CHECK(r.trajectory.back().t == doctest::Approx(1e-3));

  const auto c3 = solve_similarity_system(6);
  CHECK(ode_similarity_crosscheck(c3.a, 1e-4, 1e-1).max_deviation < 1e-6);

  const auto one = ode_similarity_crosscheck({0.0}, 1e-4, 1e-2);
  CHECK(one.max_deviation == 0.0);

  std::mt19937_64 rng(11);
  std::normal_distribution<double> g;
  std::vector<cplx> p(3);
  for (auto& v : p) v = 1e-3 * cplx(g(rng), g(rng));
  const auto pert = ode_similarity_crosscheck(c.a, 1e-4, 1e-1, p);
  CHECK(pert.initial_deviation > 1e-3);
  CHECK(pert.final_deviation > 2.0 * pert.initial_deviation);
}
