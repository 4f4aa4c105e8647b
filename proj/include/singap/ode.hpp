#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <vector>

#include "singap/error.hpp"

namespace singap {

struct Dp45Options {
  double rtol = 1e-12;
  double atol = 1e-14;
  double initial_step = 0.0;  // 0 picks |s1-s0|/100
  double min_step_rel = 1e-14;
  std::size_t max_steps = 2'000'000;
};

struct Dp45Stats {
  std::size_t accepted = 0;
  std::size_t rejected = 0;
};

/// Adaptive Dormand-Prince 5(4) integration of y' = f(s, y) for a complex
/// state over the real parameter interval [s0, s1] (either direction).
/// f has signature void(double s, const std::complex<double>* y,
/// std::complex<double>* dy). observer(s, y) is called after every accepted
/// step, including the initial point.
template <class F, class Obs>
Dp45Stats dp45_integrate(F&& f, double s0, double s1, std::vector<std::complex<double>>& y,
                         const Dp45Options& opt, Obs&& observer) {
  using C = std::complex<double>;
  static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
  static constexpr double a21 = 1.0 / 5;
  static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                          a54 = -212.0 / 729;
  static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                          a64 = 49.0 / 176, a65 = -5103.0 / 18656;
  static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                          b6 = 11.0 / 84;
  static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                          e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

  const std::size_t n = y.size();
  Dp45Stats stats;
  observer(s0, y);
  const double span = s1 - s0;
  if (span == 0.0) return stats;
  const double dir = span > 0 ? 1.0 : -1.0;
  double h = opt.initial_step > 0 ? opt.initial_step : std::abs(span) / 100.0;
  const double hmin = opt.min_step_rel * std::max(std::abs(span), std::abs(s0));

  std::vector<C> k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n), tmp(n), ynew(n);
  double s = s0;
  f(s, y.data(), k1.data());
  while (dir * (s1 - s) > 0) {
    if (stats.accepted + stats.rejected > opt.max_steps) {
      throw Error(ErrorCode::StepSizeUnderflow, "step budget exhausted");
    }
    bool last = false;
    if (h >= std::abs(s1 - s)) {
      h = std::abs(s1 - s);
      last = true;
    }
    const double hs = dir * h;
    for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + hs * a21 * k1[i];
    f(s + c2 * hs, tmp.data(), k2.data());
    for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + hs * (a31 * k1[i] + a32 * k2[i]);
    f(s + c3 * hs, tmp.data(), k3.data());
    for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + hs * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
    f(s + c4 * hs, tmp.data(), k4.data());
    for (std::size_t i = 0; i < n; ++i)
      tmp[i] = y[i] + hs * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
    f(s + c5 * hs, tmp.data(), k5.data());
    for (std::size_t i = 0; i < n; ++i)
      tmp[i] = y[i] + hs * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
    f(s + hs, tmp.data(), k6.data());
    for (std::size_t i = 0; i < n; ++i)
      ynew[i] = y[i] + hs * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] + b6 * k6[i]);
    f(s + hs, ynew.data(), k7.data());

    double err = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const C e = hs * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
      const double sc = opt.atol + opt.rtol * std::max(std::abs(y[i]), std::abs(ynew[i]));
      err = std::max(err, std::abs(e) / sc);
    }
    if (!std::isfinite(err)) err = 1e10;
    if (err <= 1.0) {
      s = last ? s1 : s + hs;
      y.swap(ynew);
      k1.swap(k7);
      ++stats.accepted;
      observer(s, y);
      if (last) break;
    } else {
      ++stats.rejected;
    }
    const double fac = err == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(err, -0.2), 0.2, 5.0);
    h *= err <= 1.0 ? fac : std::min(fac, 1.0);
    if (h < hmin) throw Error(ErrorCode::StepSizeUnderflow, "adaptive step below minimum");
  }
  return stats;
}

template <class F>
Dp45Stats dp45_integrate(F&& f, double s0, double s1, std::vector<std::complex<double>>& y,
                         const Dp45Options& opt = {}) {
  return dp45_integrate(std::forward<F>(f), s0, s1, y, opt, [](double, const auto&) {});
}

}  // namespace singap
