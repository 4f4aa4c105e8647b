#include <doctest.h>

#include <boost/math/special_functions/ellint_1.hpp>
#include <cmath>
#include <numbers>
#include <random>

#include "singap/elliptic.hpp"
#include "singap/error.hpp"

using namespace singap;

namespace {

// Truncated lattice sums over the square |m|,|n| <= M, Richardson-extrapolated
// in M (the symmetric truncation error is O(1/M^2)).
struct SumOracle {
  cplx w1, w2;

  template <class F>
  cplx square_sum(int M, F term) const {
    cplx s = 0.0;
    for (int m = -M; m <= M; ++m)
      for (int n = -M; n <= M; ++n) {
        if (m == 0 && n == 0) continue;
        s += term(2.0 * double(m) * w1 + 2.0 * double(n) * w2);
      }
    return s;
  }
  template <class F>
  cplx extrapolated(F term, int M = 120) const {
    const cplx a = square_sum(M, term), b = square_sum(2 * M, term);
    return (4.0 * b - a) / 3.0;
  }
  cplx wp(cplx z) const {
    return 1.0 / (z * z) +
           extrapolated([&](cplx W) { return 1.0 / ((z - W) * (z - W)) - 1.0 / (W * W); });
  }
  cplx zeta(cplx z) const {
    return 1.0 / z + extrapolated([&](cplx W) { return 1.0 / (z - W) + 1.0 / W + z / (W * W); });
  }
  cplx g2() const { return 60.0 * extrapolated([](cplx W) { return std::pow(W, -4); }); }
  cplx g3() const { return 140.0 * square_sum(200, [](cplx W) { return std::pow(W, -6); }); }
};

double rel(cplx a, cplx b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

}  // namespace

TEST_CASE("wp, zeta and invariants agree with lattice sums") {
  const std::vector<std::pair<cplx, cplx>> bases{
      {cplx(1.3110287771460599, 0), cplx(0, 1.3110287771460599)},
      {cplx(1.0, 0.0), cplx(0.3, 0.8)},
      {cplx(0.9, -0.45), cplx(0.9, 0.45)},
  };
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-0.6, 0.6);
  for (auto [w1, w2] : bases) {
    Lattice L(w1, w2);
    SumOracle O{w1, w2};
    CHECK(rel(L.g2(), O.g2()) < 1e-7);
    CHECK(rel(L.g3(), O.g3()) < 1e-8);
    for (int k = 0; k < 3; ++k) {
      const cplx z = u(rng) * w1 + u(rng) * w2 + 0.05;
      CHECK(rel(L.wp(z), O.wp(z)) < 1e-7);
      CHECK(rel(L.zeta(z), O.zeta(z)) < 1e-7);
    }
  }
}

TEST_CASE("differential equation, parity and derivatives") {
  Lattice L(cplx(1.0, 0.0), cplx(0.3, 0.8));
  for (cplx z : {cplx(0.3, 0.2), cplx(-0.7, 0.41), cplx(2.1, -1.3)}) {
    const cplx p = L.wp(z), dp = L.wp_prime(z);
    CHECK(std::abs(dp * dp - (4.0 * p * p * p - L.g2() * p - L.g3())) < 1e-10 * std::abs(dp * dp));
    CHECK(rel(L.wp(-z), p) < 1e-13);
    CHECK(rel(L.zeta(-z), -L.zeta(z)) < 1e-13);
    CHECK(rel(L.sigma(-z), -L.sigma(z)) < 1e-13);
    const double h = 1e-4;
    const cplx dz = (L.zeta(z - 2 * h) - 8.0 * L.zeta(z - h) + 8.0 * L.zeta(z + h) - L.zeta(z + 2 * h)) / (12 * h);
    CHECK(rel(dz, -p) < 1e-9);
    const cplx dwp = (L.wp(z - 2 * h) - 8.0 * L.wp(z - h) + 8.0 * L.wp(z + h) - L.wp(z + 2 * h)) / (12 * h);
    CHECK(rel(dwp, dp) < 1e-8);
    const cplx ds = (L.sigma(z - 2 * h) - 8.0 * L.sigma(z - h) + 8.0 * L.sigma(z + h) - L.sigma(z + 2 * h)) / (12 * h);
    CHECK(rel(ds / L.sigma(z), L.zeta(z)) < 1e-9);
  }
}

TEST_CASE("laurent behaviour at the origin") {
  Lattice L(cplx(1.0, 0.0), cplx(0.3, 0.8));
  const cplx z(1e-3, 5e-4);
  CHECK(std::abs(z * z * L.wp(z) - 1.0) < 1e-11);
  CHECK(std::abs(z * L.zeta(z) - 1.0) < 1e-11);
  CHECK(std::abs(L.sigma(z) / z - 1.0) < 1e-11);
  CHECK_THROWS_AS(L.wp(cplx(0.0)), Error);
  try {
    L.wp(2.0 * L.omega1() + 1e-12);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::PoleProximity);
  }
}

TEST_CASE("half periods, quasi-periodicity and Legendre relation") {
  Lattice L(cplx(1.0, 0.0), cplx(0.3, 0.8));
  const cplx w1 = L.omega1(), w2 = L.omega2();
  CHECK(std::abs(L.wp_prime(w1)) < 1e-10);
  CHECK(std::abs(L.wp_prime(w2)) < 1e-10);
  CHECK(std::abs(L.wp_prime(w1 + w2)) < 1e-10);
  CHECK(std::abs(L.e1() + L.e2() + L.e3()) < 1e-12);
  CHECK(std::abs(L.eta1() * w2 - L.eta2() * w1 - cplx(0, std::numbers::pi / 2)) < 1e-12);
  const cplx z(0.37, 0.11);
  CHECK(rel(L.wp(z + 2.0 * w1 - 4.0 * w2), L.wp(z)) < 1e-12);
  CHECK(rel(L.zeta(z + 2.0 * w2), L.zeta(z) + 2.0 * L.eta2()) < 1e-12);
  CHECK(rel(L.sigma(z + 2.0 * w1), -std::exp(2.0 * L.eta1() * (z + w1)) * L.sigma(z)) < 1e-11);
  CHECK(rel(L.sigma(z + 2.0 * w2), -std::exp(2.0 * L.eta2() * (z + w2)) * L.sigma(z)) < 1e-11);
  const cplx W = 2.0 * w1 + 2.0 * w2;
  const cplx eW = L.eta1() + L.eta2();
  CHECK(rel(L.sigma(z + W), -std::exp(2.0 * eW * (z + w1 + w2)) * L.sigma(z)) < 1e-11);
}

TEST_CASE("homogeneity under lattice scaling") {
  const cplx lam(0.7, 0.4);
  Lattice A(cplx(1.0, 0.0), cplx(0.3, 0.8)), B(lam * 1.0, lam * cplx(0.3, 0.8));
  const cplx z(0.2, 0.3);
  CHECK(rel(B.wp(lam * z), A.wp(z) / (lam * lam)) < 1e-12);
  CHECK(rel(B.zeta(lam * z), A.zeta(z) / lam) < 1e-12);
  CHECK(rel(B.g2(), A.g2() * std::pow(lam, -4)) < 1e-12);
}

TEST_CASE("rectangular dictionary: periods from complete elliptic integrals") {
  for (auto [u0, u1, u2] : {std::tuple{-1.0, 0.0, 1.0}, std::tuple{-2.0, 0.5, 3.0}, std::tuple{0.0, 0.1, 5.0}}) {
    const auto sl = lattice_from_branch_points(u0, u1, u2);
    const double s = (u0 + u1 + u2) / 3.0;
    CHECK(sl.shift == doctest::Approx(s));
    const double e1 = s - u0, e2 = s - u1, e3 = s - u2;
    const double k = std::sqrt((e2 - e3) / (e1 - e3)), kp = std::sqrt((e1 - e2) / (e1 - e3));
    const double w1 = boost::math::ellint_1(k) / std::sqrt(e1 - e3);
    const double w2 = boost::math::ellint_1(kp) / std::sqrt(e1 - e3);
    CHECK(std::abs(sl.lattice.omega1() - cplx(w1, 0)) < 1e-12 * w1);
    CHECK(std::abs(sl.lattice.omega2() - cplx(0, w2)) < 1e-12 * w2);
    CHECK(sl.lattice.real_period() == doctest::Approx(2 * w1).epsilon(1e-12));
    CHECK(sl.lattice.is_rectangular());
    const auto b = branch_points_of(sl);
    CHECK(std::abs(b[0] - u0) < 1e-10);
    CHECK(std::abs(b[1] - u1) < 1e-10);
    CHECK(std::abs(b[2] - u2) < 1e-10);
  }
  CHECK_THROWS_AS(lattice_from_branch_points(0.0, -1.0, 1.0), Error);
}

TEST_CASE("rhombic dictionary for a complex-conjugate pair") {
  std::array<cplx, 3> u{cplx(-1, 1), cplx(-1, -1), cplx(2, 0)};
  const auto sl = lattice_from_branch_points(u);
  const auto& L = sl.lattice;
  CHECK(std::abs(std::abs(L.omega1()) - std::abs(L.omega2())) < 1e-12);
  CHECK(std::abs((L.omega1() + L.omega2()).imag()) < 1e-12);
  CHECK(L.real_period() == doctest::Approx(2.0 * (L.omega1() + L.omega2()).real()));
  const auto b = branch_points_of(sl);
  CHECK(std::abs(b[0] - cplx(-1, -1)) < 1e-10);
  CHECK(std::abs(b[1] - cplx(-1, 1)) < 1e-10);
  CHECK(std::abs(b[2] - cplx(2, 0)) < 1e-10);
  // real on the real axis
  CHECK(std::abs(L.wp(0.37).imag()) < 1e-12);
}

TEST_CASE("inverse of wp") {
  Lattice L(cplx(1.0, 0.0), cplx(0.3, 0.8));
  const cplx a(0.4, 0.25);
  const cplx b = wp_inverse(L.wp(a), L, cplx(0.35, 0.2));
  CHECK(rel(L.wp(b), L.wp(a)) < 1e-12);
}

TEST_CASE("agm of real arguments") {
  CHECK(agm(1.0, std::sqrt(2.0)).real() == doctest::Approx(1.19814023473559220744).epsilon(1e-15));
}
