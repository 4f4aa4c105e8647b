#include <doctest.h>

#include <random>
#include <vector>

#include "singap/simd.hpp"

using namespace singap::simd;

namespace {
std::vector<cplx> random_points(std::size_t n, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  std::vector<cplx> v(n);
  for (auto& z : v) z = cplx(g(rng), g(rng));
  return v;
}

double rel_err(cplx a, cplx b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }
}  // namespace

TEST_CASE("pair inverse powers: avx2 matches scalar") {
  if (!cpu_has_avx2()) return;
  for (std::size_t n : {1u, 2u, 3u, 4u, 5u, 9u, 28u, 37u}) {
    auto x = random_points(n, 7 + n);
    for (int k : {2, 3}) {
      std::vector<cplx> s(n), v(n);
      scalar::pair_inverse_power(x.data(), n, k, s.data());
      avx2::pair_inverse_power(x.data(), n, k, v.data());
      for (std::size_t j = 0; j < n; ++j) CHECK(rel_err(v[j], s[j]) < 1e-12);
    }
  }
}

TEST_CASE("pair inverse powers: two points") {
  std::vector<cplx> x{cplx(0, 0), cplx(2, 0)};
  std::vector<cplx> out(2);
  pair_inverse_power(x.data(), 2, 2, out.data());
  CHECK(std::abs(out[0] - 0.25) < 1e-15);
  CHECK(std::abs(out[1] - 0.25) < 1e-15);
  pair_inverse_power(x.data(), 2, 3, out.data());
  CHECK(std::abs(out[0] + 0.125) < 1e-15);
  CHECK(std::abs(out[1] - 0.125) < 1e-15);
}

TEST_CASE("bilinear dot: avx2 matches scalar") {
  if (!cpu_has_avx2()) return;
  for (std::size_t n : {0u, 1u, 2u, 7u, 64u, 1001u}) {
    auto a = random_points(n, 1 + n), b = random_points(n, 100 + n);
    CHECK(rel_err(avx2::bilinear_dot(a.data(), b.data(), n),
                  scalar::bilinear_dot(a.data(), b.data(), n)) < 1e-12);
  }
}

TEST_CASE("dispatch honours overrides") {
  set_isa(Isa::Scalar);
  CHECK(active_isa() == Isa::Scalar);
  set_isa(Isa::Avx2);
  CHECK(active_isa() == (cpu_has_avx2() ? Isa::Avx2 : Isa::Scalar));
}
