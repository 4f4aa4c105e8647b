#pragma once

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <numbers>

namespace singap {

template <class F>
auto chebyshev_weighted_integral(F&& f, double a, double b) {
  const double m = 0.5 * (a + b), h = 0.5 * (b - a);
  auto g = [&](double t) { return f(m + h * std::sin(t)); };
  constexpr double half_pi = std::numbers::pi / 2;
  return boost::math::quadrature::gauss_kronrod<double, 31>::integrate(g, -half_pi, half_pi, 15, 1e-14);
}

}  // namespace singap
