#include "singap/kdv_poles.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <atomic>
#include <cmath>
#include <numbers>
#include <random>
#include <thread>

#include "singap/error.hpp"
#include "singap/ode.hpp"
#include "singap/simd.hpp"

namespace singap::kdv {

namespace {

const cplx kEta = std::polar(1.0, 2.0 * std::numbers::pi / 3.0);

double config_scale(const std::vector<cplx>& x) {
  double s = 0.0;
  for (const cplx& v : x) s = std::max(s, std::abs(v));
  return s;
}

double min_separation(const std::vector<cplx>& x) {
  double d = INFINITY;
  for (std::size_t i = 0; i < x.size(); ++i)
    for (std::size_t j = 0; j < i; ++j) d = std::min(d, std::abs(x[i] - x[j]));
  return d;
}

// Full coefficient set from orbit representatives: a[l*M + m] = eta^l b[m],
// followed by the zero orbit when present.
std::vector<cplx> expand(const std::vector<cplx>& b, bool zero) {
  const std::size_t M = b.size();
  std::vector<cplx> a(3 * M + (zero ? 1 : 0), 0.0);
  cplx e = 1.0;
  for (int l = 0; l < 3; ++l, e *= kEta)
    for (std::size_t m = 0; m < M; ++m) a[l * M + m] = e * b[m];
  return a;
}

struct NewtonOutcome {
  bool ok = false;
  std::vector<cplx> b;
};

// Residual on the representatives; the other equations follow by symmetry.
double residual(const std::vector<cplx>& b, bool zero, std::vector<cplx>& F) {
  const auto a = expand(b, zero);
  std::vector<cplx> s2(a.size());
  simd::pair_inverse_power(a.data(), a.size(), 2, s2.data());
  double r = 0.0;
  F.resize(b.size());
  for (std::size_t m = 0; m < b.size(); ++m) {
    F[m] = b[m] / 3.0 - s2[m];
    r = std::max(r, std::abs(F[m]));
  }
  return r;
}

NewtonOutcome newton(std::vector<cplx> b, bool zero, double tol) {
  const std::size_t M = b.size();
  NewtonOutcome out;
  std::vector<cplx> F, Ft;
  double r = residual(b, zero, F);
  if (!std::isfinite(r)) return out;
  int polish = 0;
  for (int it = 0; it < 120; ++it) {
    const double scale = std::max(1.0, config_scale(b));
    if (r < tol * scale) {
      if (++polish > 2) break;
    }
    const auto a = expand(b, zero);
    std::vector<cplx> s3(a.size());
    simd::pair_inverse_power(a.data(), a.size(), 3, s3.data());
    Eigen::MatrixXcd J(M, M);
    for (std::size_t m = 0; m < M; ++m) {
      for (std::size_t k = 0; k < M; ++k) {
        if (k == m) continue;
        cplx s = 0.0, e = 1.0;
        for (int l = 0; l < 3; ++l, e *= kEta) s += -2.0 * e / std::pow(b[m] - e * b[k], 3);
        J(m, k) = s;
      }
      cplx d = 1.0 / 3.0 + 2.0 * s3[m];
      cplx e = kEta;
      for (int l = 1; l < 3; ++l, e *= kEta) d += -2.0 * e / std::pow(b[m] * (1.0 - e), 3);
      J(m, m) = d;
    }
    Eigen::VectorXcd rhs(M);
    for (std::size_t m = 0; m < M; ++m) rhs[m] = -F[m];
    Eigen::PartialPivLU<Eigen::MatrixXcd> lu(J);
    const Eigen::VectorXcd step = lu.solve(rhs);
    if (!step.allFinite()) return out;
    double lam = 1.0;
    std::vector<cplx> trial(M);
    double rt = INFINITY;
    while (lam > 1e-4) {
      for (std::size_t m = 0; m < M; ++m) trial[m] = b[m] + lam * step[m];
      rt = residual(trial, zero, Ft);
      if (std::isfinite(rt) && (rt < r || polish > 0)) break;
      lam *= 0.5;
    }
    if (!std::isfinite(rt) || lam <= 1e-4) return out;
    b = trial;
    F = Ft;
    r = rt;
    if (config_scale(b) > 1e6) return out;
  }
  const double scale = std::max(1.0, config_scale(b));
  if (!(r < tol * scale)) return out;
  const auto a = expand(b, zero);
  if (min_separation(a) < 1e-6 * config_scale(a)) return out;
  out.ok = true;
  out.b = std::move(b);
  return out;
}

std::vector<cplx> sorted_cubes(const std::vector<cplx>& b) {
  std::vector<cplx> c(b.size());
  for (std::size_t i = 0; i < b.size(); ++i) c[i] = std::pow(b[i], 3);
  std::sort(c.begin(), c.end(), [](cplx x, cplx y) {
    return x.real() != y.real() ? x.real() < y.real() : x.imag() < y.imag();
  });
  return c;
}

bool same_cubes(const std::vector<cplx>& x, const std::vector<cplx>& y, double tol) {
  // greedy matching tolerant of ordering ties
  std::vector<bool> used(y.size(), false);
  for (const cplx& v : x) {
    bool hit = false;
    for (std::size_t j = 0; j < y.size(); ++j)
      if (!used[j] && std::abs(v - y[j]) <= tol) {
        used[j] = hit = true;
        break;
      }
    if (!hit) return false;
  }
  return true;
}

double locus_defect(const std::vector<cplx>& a) {
  std::vector<cplx> s3(a.size());
  simd::pair_inverse_power(a.data(), a.size(), 3, s3.data());
  double r = 0.0;
  for (const cplx& v : s3) r = std::max(r, std::abs(v));
  return r;
}

double similarity_defect(const std::vector<cplx>& a) {
  std::vector<cplx> s2(a.size());
  simd::pair_inverse_power(a.data(), a.size(), 2, s2.data());
  double r = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) r = std::max(r, std::abs(a[j] / 3.0 - s2[j]));
  return r;
}

}  // namespace

std::vector<cplx> pole_ode_rhs(const std::vector<cplx>& x, double collision_rel) {
  const double scale = std::max(config_scale(x), 1e-300);
  if (x.size() > 1 && min_separation(x) < collision_rel * scale) {
    throw Error(ErrorCode::Collision, "poles collided");
  }
  std::vector<cplx> v(x.size());
  simd::pair_inverse_power(x.data(), x.size(), 2, v.data());
  return v;
}

int triangular_index(int N) {
  if (N < 1) return 0;
  const int n = static_cast<int>(std::lround((std::sqrt(8.0 * N + 1.0) - 1.0) / 2.0));
  return n * (n + 1) / 2 == N ? n : 0;
}

double z3_invariance_defect(const std::vector<cplx>& a) {
  const double scale = std::max(config_scale(a), 1e-300);
  double worst = 0.0;
  for (const cplx& v : a) {
    double best = INFINITY;
    for (const cplx& w : a) best = std::min(best, std::abs(kEta * v - w));
    worst = std::max(worst, best);
  }
  return worst / scale;
}

void classify_orbits(SimilarityCoefficients& c) {
  const auto& a = c.a;
  const double scale = std::max(config_scale(a), 1e-300);
  const double tol = 1e-8 * scale;
  if (z3_invariance_defect(a) > 1e-8) {
    throw Error(ErrorCode::NonPhysicalSolution, "coefficient set is not invariant under a -> eta a");
  }
  c.orbits.clear();
  std::vector<bool> used(a.size(), false);
  for (std::size_t j = 0; j < a.size(); ++j) {
    if (used[j]) continue;
    Orbit o;
    if (std::abs(a[j]) <= tol) {
      o.zero = o.real = true;
      o.cube = 0.0;
      o.members = {static_cast<int>(j)};
      used[j] = true;
      c.orbits.push_back(o);
      continue;
    }
    o.members = {static_cast<int>(j)};
    used[j] = true;
    cplx target = a[j];
    for (int l = 1; l < 3; ++l) {
      target *= kEta;
      std::size_t best = a.size();
      double bd = INFINITY;
      for (std::size_t k = 0; k < a.size(); ++k) {
        if (used[k]) continue;
        const double d = std::abs(a[k] - target);
        if (d < bd) {
          bd = d;
          best = k;
        }
      }
      if (best == a.size() || bd > tol) {
        throw Error(ErrorCode::NonPhysicalSolution, "orbit under eta is incomplete");
      }
      used[best] = true;
      o.members.push_back(static_cast<int>(best));
    }
    cplx s = 0.0;
    for (int k : o.members) s += std::pow(a[k], 3);
    o.cube = s / 3.0;
    o.real = std::abs(o.cube.imag()) <= 1e-8 * std::abs(o.cube);
    c.orbits.push_back(o);
  }
  std::sort(c.orbits.begin(), c.orbits.end(), [](const Orbit& x, const Orbit& y) {
    return x.cube.real() != y.cube.real() ? x.cube.real() < y.cube.real() : x.cube.imag() < y.cube.imag();
  });
  int zeros = 0;
  for (const auto& o : c.orbits) zeros += o.zero ? 1 : 0;
  if (zeros > 1) throw Error(ErrorCode::NonPhysicalSolution, "more than one zero orbit");
  const double cube_scale = scale * scale * scale;
  for (std::size_t i = 0; i < c.orbits.size(); ++i)
    for (std::size_t k = 0; k < i; ++k)
      if (std::abs(c.orbits[i].cube - c.orbits[k].cube) < 1e-6 * cube_scale) {
        throw Error(ErrorCode::OrbitAmbiguity, "two orbits share a^3 within tolerance");
      }
  c.zero_orbit = zeros == 1;
  c.real_orbit_count = 0;
  for (const auto& o : c.orbits) c.real_orbit_count += o.real ? 1 : 0;
}

SimilarityCoefficients solve_similarity_system(int N, const SimilarityOptions& opt) {
  const int n = triangular_index(N);
  if (n == 0) throw Error(ErrorCode::ConfigInvalid, "N must be n(n+1)/2");
  if (N % 3 == 2) throw Error(ErrorCode::NonPhysicalSolution, "N = 2 mod 3 admits no Z3-invariant set");
  const int M = N / 3;
  const bool zero = N % 3 == 1;

  SimilarityCoefficients res;
  res.n = n;
  res.starts = opt.starts;
  if (M == 0) {
    res.a = {0.0};
    res.converged_starts = res.distinct_solutions = 1;
    classify_orbits(res);
    return res;
  }

  // Starts are drawn up front so the outcome does not depend on threading.
  std::mt19937_64 rng(opt.seed);
  std::normal_distribution<double> g;
  const double spread = std::cbrt(double(N));
  std::vector<std::vector<cplx>> starts(opt.starts, std::vector<cplx>(M));
  for (auto& s : starts)
    for (auto& v : s) v = spread * cplx(g(rng), g(rng));

  std::vector<NewtonOutcome> outcomes(opt.starts);
  std::atomic<int> next{0};
  const int nthreads = std::max(1, opt.threads > 0 ? opt.threads
                                                   : static_cast<int>(std::thread::hardware_concurrency()));
  {
    std::vector<std::jthread> pool;
    for (int t = 0; t < std::min(nthreads, opt.starts); ++t) {
      pool.emplace_back([&] {
        for (int i = next++; i < opt.starts; i = next++) outcomes[i] = newton(starts[i], zero, opt.newton_tol);
      });
    }
  }

  std::vector<std::vector<cplx>> distinct;
  std::vector<std::vector<cplx>> keys;
  for (const auto& o : outcomes) {
    if (!o.ok) continue;
    ++res.converged_starts;
    const auto key = sorted_cubes(o.b);
    double cs = 0.0;
    for (const cplx& v : key) cs = std::max(cs, std::abs(v));
    bool dup = false;
    for (const auto& k : keys)
      if (same_cubes(key, k, 1e-6 * cs)) dup = true;
    if (!dup) {
      keys.push_back(key);
      distinct.push_back(o.b);
    }
  }
  res.distinct_solutions = static_cast<int>(distinct.size());

  int chosen = -1;
  double best = INFINITY;
  for (std::size_t i = 0; i < distinct.size(); ++i) {
    const auto a = expand(distinct[i], zero);
    const double sc = config_scale(a);
    const double d = locus_defect(a) * sc * sc * sc;
    if (d < 1e-7 && d < best) {
      best = d;
      chosen = static_cast<int>(i);
    }
  }
  if (chosen < 0) {
    throw Error(ErrorCode::NewtonDiverged, "no start reached the pole locus after " +
                                               std::to_string(opt.starts) + " starts (" +
                                               std::to_string(res.converged_starts) + " converged)");
  }
  res.a = expand(distinct[chosen], zero);
  res.residual = similarity_defect(res.a);
  res.locus_residual = locus_defect(res.a);
  classify_orbits(res);
  return res;
}

CrosscheckResult ode_similarity_crosscheck(const std::vector<cplx>& a, double t0, double t1,
                                           const std::vector<cplx>& perturbation) {
  if (!(t0 > 0.0) || !(t1 > t0)) throw Error(ErrorCode::ConfigInvalid, "need 0 < t0 < t1");
  if (!perturbation.empty() && perturbation.size() != a.size()) {
    throw Error(ErrorCode::ConfigInvalid, "perturbation size mismatch");
  }
  const std::size_t N = a.size();
  std::vector<cplx> x(N);
  const double c0 = std::cbrt(t0);
  for (std::size_t j = 0; j < N; ++j) x[j] = a[j] * c0 + (perturbation.empty() ? 0.0 : perturbation[j]);

  CrosscheckResult out;
  bool first = true;
  const std::size_t n = N;
  auto f = [n](double, const cplx* y, cplx* dy) {
    std::vector<cplx> xs(y, y + n);
    const auto v = pole_ode_rhs(xs);
    std::copy(v.begin(), v.end(), dy);
  };
  auto obs = [&](double t, const std::vector<cplx>& y) {
    const double c = std::cbrt(t);
    double dev = 0.0;
    for (std::size_t j = 0; j < N; ++j) dev = std::max(dev, std::abs(y[j] - a[j] * c) / c);
    out.max_deviation = std::max(out.max_deviation, dev);
    if (first) out.initial_deviation = dev;
    first = false;
    out.final_deviation = dev;
    out.trajectory.push_back(PoleConfiguration{t, y});
  };
  Dp45Options o;
  o.rtol = 1e-12;
  o.atol = 1e-15;
  o.initial_step = t0 * 1e-3;
  dp45_integrate(f, t0, t1, x, o, obs);
  return out;
}

}  // namespace singap::kdv
