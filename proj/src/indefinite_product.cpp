#include "singap/indefinite_product.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <Eigen/Dense>
#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/tools/toms748_solve.hpp>

#include "singap/error.hpp"
#include "singap/parallel.hpp"
#include "singap/simd.hpp"

namespace singap {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr cplx I{0.0, 1.0};

struct Sample {
  double S, dS;
};

Sample sample(const Potential& pot, double u) {
  const auto m = monodromy(pot, u);
  return {m.S.real(), m.dS.real()};
}

std::vector<double> zone_grid(double a, double b, double T, int ppo) {
  const double dk = 2.0 * kPi / (T * ppo);
  std::vector<double> g{a};
  const double min_step = (b - a) / 4096.0;
  while (g.back() < b) {
    const double u = g.back();
    const double k = std::max(std::sqrt(std::abs(u)), 2.0 * kPi / T);
    g.push_back(std::min(b, u + std::max(min_step, std::min(2.0 * k * dk, (b - a) / 16.0))));
  }
  return g;
}

}  // namespace

double default_u_max(const HyperellipticCurve& c) {
  const int g = c.genus();
  return c.u(2 * g) + 50.0 * std::max(c.u(2 * g) - c.u(0), 1.0);
}

BlochPointSet bloch_points(const Potential& pot, const HyperellipticCurve& c, const QuasimomentumDifferential& dp,
                           const MeasureDifferential& dmu, cplx kappa, double u_max, const BlochPointOptions& opt) {
  using boost::math::tools::eps_tolerance;
  using boost::math::tools::toms748_solve;
  const double T = pot.period();
  if (!(T > 0.0)) throw Error(ErrorCode::ConfigInvalid, "Bloch points need a periodic potential");
  if (std::abs(std::abs(kappa) - 1.0) > 1e-12) throw Error(ErrorCode::ConfigInvalid, "multiplier must have |kappa| = 1");
  const int g = c.genus();
  const double ct = kappa.real(), st = kappa.imag();
  const bool real_kappa = std::abs(st) < 1e-12;

  BlochPointSet set;
  set.kappa = kappa;
  set.period = T;
  set.u_max = u_max;

  auto weight = [&](double u) { return (dp.numerator(u) / dmu.numerator(u)).real(); };
  auto add = [&](double u, int sheet, int zone, bool edge, const Sample& s) {
    BlochPoint p;
    p.u = u;
    p.sheet = sheet;
    p.zone = zone;
    p.branch_point = edge;
    p.weight = weight(u);
    // multiplier of the chosen point reconstructed from S and the sheet rule
    if (real_kappa) {
      p.multiplier_defect = std::abs(s.S - ct);
    } else {
      const double sn = std::sqrt(std::max(0.0, 1.0 - s.S * s.S));
      const double sgn = (-s.dS / (T * dp.density(u).real())) * sheet > 0 ? 1.0 : -1.0;
      p.multiplier_defect = std::abs(cplx(s.S, sgn * sn) - kappa);
    }
    set.points.push_back(p);
  };

  for (int k = 0; k <= g; ++k) {
    auto [a, b] = c.zone(k);
    if (k == g) b = u_max;
    if (!(b > a)) continue;
    const auto grid = zone_grid(a, b, T, opt.points_per_oscillation);
    std::vector<Sample> S(grid.size());
    parallel_for(grid.size(), [&](std::size_t i) { S[i] = sample(pot, grid[i]); }, opt.threads);
    std::vector<double> f(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) f[i] = S[i].S - ct;

    // band edges (only for kappa = +-1)
    const bool edge_a = real_kappa && std::abs(f.front()) < opt.edge_tol;
    const bool edge_b = real_kappa && k < g && std::abs(f.back()) < opt.edge_tol;
    if (edge_a) add(a, 1, k, true, S.front());
    if (edge_b) add(b, 1, k, true, S.back());

    // double points: S = +-1 with S' = 0 inside the zone
    std::vector<double> doubles;
    if (real_kappa) {
      for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
        if ((S[i].dS > 0) == (S[i + 1].dS > 0) || S[i + 1].dS == 0.0) continue;
        std::uintmax_t it = 80;
        auto r = toms748_solve([&](double u) { return sample(pot, u).dS; }, grid[i], grid[i + 1], S[i].dS,
                               S[i + 1].dS, eps_tolerance<double>(48), it);
        double u = 0.5 * (r.first + r.second);
        Sample s = sample(pot, u);
        if (std::abs(s.S - ct) < 1e-7) {
          // S - cos(theta) has a double root here; T p(u) = m pi is a simple one
          const double m = std::round(T * quasimomentum(dp, u, Approach::Above).real() / kPi);
          for (int it2 = 0; it2 < 4; ++it2)
            u -= (T * quasimomentum(dp, u, Approach::Above).real() - m * kPi) / (T * dp.density(u).real());
          s = sample(pot, u);
          doubles.push_back(u);
          add(u, 1, k, false, s);
          add(u, -1, k, false, s);
        }
      }
    }
    const double cluster = 1e-5 * std::max(1.0, b - a);

    for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
      if ((i == 0 && edge_a) || (i + 2 == grid.size() && edge_b)) continue;
      if (f[i] == 0.0 || (f[i] > 0) == (f[i + 1] > 0)) continue;
      std::uintmax_t it = 80;
      auto r = toms748_solve([&](double u) { return sample(pot, u).S - ct; }, grid[i], grid[i + 1], f[i], f[i + 1],
                             eps_tolerance<double>(48), it);
      const double u = 0.5 * (r.first + r.second);
      bool near_double = false;
      for (double d : doubles) near_double = near_double || std::abs(u - d) < cluster;
      if (near_double) continue;
      const Sample s = sample(pot, u);
      if (real_kappa) {
        // a simple crossing of S = +-1 inside a zone only happens at rounding level
        continue;
      }
      const double dens = dp.density(u).real();
      const double sin_plus = -s.dS / (T * dens);  // sin(T p) on sheet +
      const int sheet = (sin_plus > 0) == (st > 0) ? 1 : -1;
      add(u, sheet, k, false, s);
    }
  }
  std::sort(set.points.begin(), set.points.end(),
            [](const BlochPoint& x, const BlochPoint& y) { return x.u < y.u || (x.u == y.u && x.sheet > y.sheet); });
  return set;
}

int winding_count(const QuasimomentumDifferential& dp, int k, double T) {
  return static_cast<int>(std::lround(std::abs(2.0 * T * zone_increment(dp, k)) / (2.0 * kPi)));
}

// ---------------------------------------------------------------------------
// Periodic Gram matrix

namespace {

struct Nodes {
  std::vector<cplx> x, w;
};

void gauss_leg(Nodes& n, cplx a, cplx b, int panels) {
  using G = boost::math::quadrature::gauss<double, 20>;
  const auto& xs = G::abscissa();
  const auto& ws = G::weights();
  for (int p = 0; p < panels; ++p) {
    const cplx pa = a + (b - a) * (double(p) / panels), pb = a + (b - a) * (double(p + 1) / panels);
    const cplx m = 0.5 * (pa + pb), h = 0.5 * (pb - pa);
    for (std::size_t i = 0; i < xs.size(); ++i) {
      n.x.push_back(m - h * xs[i]);
      n.w.push_back(h * ws[i]);
      if (xs[i] != 0.0) {
        n.x.push_back(m + h * xs[i]);
        n.w.push_back(h * ws[i]);
      }
    }
  }
}

std::vector<std::vector<cplx>> gram_at(const std::vector<BlochSolution>& sols, double x_a, double T, double eps,
                                       int panels, int threads) {
  double kmax = 0.0;
  for (const auto& s : sols) kmax = std::max(kmax, std::sqrt(std::abs(s.u)));
  const int P = panels > 0 ? panels : std::max({8, int(std::ceil(T / eps)), int(std::ceil(kmax * T / kPi))});
  const int V = std::max(1, int(std::ceil(eps * P / T)));
  Nodes n;
  const cplx a(x_a, 0.0), b(x_a + T, 0.0), lift(0.0, eps);
  gauss_leg(n, a, a + lift, V);
  gauss_leg(n, a + lift, b + lift, P);
  gauss_leg(n, b + lift, b, V);

  const std::size_t J = sols.size(), N = n.x.size();
  std::vector<std::vector<cplx>> psi(J, std::vector<cplx>(N)), dual(J, std::vector<cplx>(N));
  parallel_for(
      J * N,
      [&](std::size_t idx) {
        const std::size_t j = idx / N, i = idx % N;
        psi[j][i] = sols[j].psi(n.x[i]) * n.w[i];
        dual[j][i] = dual_psi(sols[j], n.x[i]);
      },
      threads);
  std::vector<std::vector<cplx>> G(J, std::vector<cplx>(J));
  for (std::size_t j = 0; j < J; ++j)
    for (std::size_t k = 0; k < J; ++k) G[j][k] = simd::bilinear_dot(psi[j].data(), dual[k].data(), N);
  return G;
}

}  // namespace

GramReport periodic_gram(const std::vector<BlochSolution>& sols, const std::vector<double>& weights, double x_a,
                         const GramOptions& opt) {
  if (sols.empty() || sols.size() != weights.size())
    throw Error(ErrorCode::ConfigInvalid, "one weight per Bloch solution is required");
  const double T = sols.front().period;
  for (const auto& s : sols)
    if (std::abs(s.multiplier - sols.front().multiplier) > 1e-8)
      throw Error(ErrorCode::MultiplierMismatch, "Gram identity needs a common multiplier");
  const double eps = opt.eps_rel * T;
  GramReport r;
  r.G = gram_at(sols, x_a, T, eps, opt.panels, opt.threads);
  const std::size_t J = sols.size();
  double dmax = 0.0;
  for (std::size_t j = 0; j < J; ++j) {
    r.expected_diagonal.push_back(T * weights[j]);
    dmax = std::max(dmax, std::abs(r.G[j][j]));
    r.max_diag_rel_err = std::max(r.max_diag_rel_err, std::abs(r.G[j][j] / (T * weights[j]) - 1.0));
  }
  for (std::size_t j = 0; j < J; ++j)
    for (std::size_t k = 0; k < J; ++k)
      if (j != k) r.max_offdiag_rel = std::max(r.max_offdiag_rel, std::abs(r.G[j][k]) / dmax);
  if (opt.halving) {
    const int P = opt.panels > 0 ? 2 * opt.panels : 0;
    const auto G2 = gram_at(sols, x_a, T, 0.5 * eps, P, opt.threads);
    for (std::size_t j = 0; j < J; ++j)
      for (std::size_t k = 0; k < J; ++k) r.halving_diff = std::max(r.halving_diff, std::abs(r.G[j][k] - G2[j][k]) / dmax);
  }
  return r;
}

// ---------------------------------------------------------------------------
// Signatures

SignatureReport negative_square_count(const BlochPointSet& set, const QuasimomentumDifferential& dp,
                                      const MeasureDifferential& dmu, double zero_tol, bool strict) {
  SignatureReport r;
  r.kappa = set.kappa;
  double scale = 0.0;
  for (const auto& p : set.points) scale = std::max(scale, std::abs(p.weight));
  for (const auto& p : set.points) {
    if (std::abs(p.weight) <= zero_tol * scale) {
      if (strict) throw Error(ErrorCode::ZeroWeight, "Bloch point at a zero of dp/dmu, u = " + std::to_string(p.u));
      r.zero_weight.push_back(p);
      continue;
    }
    auto& z = r.per_zone[p.zone];
    if (p.weight < 0) {
      ++r.q_negative;
      ++z.first;
    } else {
      ++z.second;
    }
  }
  try {
    for (const auto& [zone, counts] : r.per_zone)
      if (zone_sign(dp, dmu, zone) < 0) r.predicted += counts.first + counts.second;
  } catch (const Error&) {
    r.predicted = -1;
  }
  return r;
}

SinhSignature sinh_degeneration_signature(double c, int continuum_samples) {
  using GK = boost::math::quadrature::gauss_kronrod<double, 61>;
  const double eps = 0.3 / c, L = 20.0 / c;
  auto f = [&](double x) {
    const cplx s = std::sinh(c * cplx(x, eps));
    return 1.0 / (s * s);
  };
  SinhSignature r;
  r.bound_state_square = GK::integrate(f, -L, L, 15, 1e-13).real();
  r.continuum_samples = continuum_samples;
  if (r.bound_state_square < 0) ++r.q_negative;
  const double u_max = 50.0 * c * c;
  for (int j = 0; j < continuum_samples; ++j) {
    const double u = (j + 0.5) * u_max / continuum_samples;
    if (u + c * c < 0) ++r.q_negative;
  }
  return r;
}

ResidueRank residue_rank(const std::vector<BlochSolution>& sols, int n, double x0, double radius,
                         double next_singularity, double rel_tol) {
  ResidueRank r;
  r.k = (n + 1) / 2;
  Eigen::MatrixXcd A(sols.size(), r.k);
  for (std::size_t j = 0; j < sols.size(); ++j) {
    const auto rep = laurent_structure(n, sols[j].psi, x0, radius, next_singularity);
    for (int i = 0; i < r.k; ++i) A(j, i) = rep.alpha[i];
  }
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(A);
  const auto& sv = svd.singularValues();
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    r.singular_values.push_back(sv(i) / sv(0));
    if (sv(i) > rel_tol * sv(0)) ++r.rank;
  }
  return r;
}

// ---------------------------------------------------------------------------
// BA Fourier pair

std::vector<ContourNode> genus0_contour_nodes(double k0, double k1, int n) {
  std::vector<ContourNode> out;
  const double h = (k1 - k0) / (n - 1);
  for (int j = 0; j < n; ++j) {
    const double w = (j == 0 || j == n - 1) ? 0.5 * h : h;
    out.push_back({genus0_bloch(k0 + j * h), w});
  }
  return out;
}

std::vector<ContourNode> lame1_contour_nodes(const Lame1Family& f, bool finite_zone, double t0, double t1, int n) {
  std::vector<ContourNode> out;
  const cplx base = finite_zone ? f.lattice().omega1() : cplx(0.0);
  const double h = (t1 - t0) / (n - 1);
  const double p1 = f.p1();
  for (int j = 0; j < n; ++j) {
    const cplx alpha = base + I * (t0 + j * h);
    auto s = f.at(alpha);
    const double w = (j == 0 || j == n - 1) ? 0.5 * h : h;
    const double sign = (s.u.real() - p1) < 0 ? -1.0 : 1.0;
    out.push_back({std::move(s), sign * w});
  }
  return out;
}

XGrid lifted_grid(double x0, double x1, int n, double eps) {
  XGrid g;
  const double h = (x1 - x0) / (n - 1);
  for (int j = 0; j < n; ++j) {
    g.x.push_back(cplx(x0 + j * h, eps));
    g.w.push_back((j == 0 || j == n - 1) ? 0.5 * h : h);
  }
  return g;
}

namespace {

void check_decay(const std::vector<ContourNode>& nodes, const std::vector<cplx>& phi) {
  const std::size_t N = nodes.size();
  if (N < 8) return;
  std::vector<std::size_t> idx(N);
  for (std::size_t i = 0; i < N; ++i) idx[i] = i;
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    return std::abs(nodes[a].sol.u) < std::abs(nodes[b].sol.u);
  });
  double mx = 0.0;
  for (const auto& v : phi) mx = std::max(mx, std::abs(v));
  if (mx == 0.0) return;
  const std::size_t start = N - N / 4;
  double outer = 0.0;
  for (std::size_t i = start; i < N; ++i) outer = std::max(outer, std::abs(phi[idx[i]]));
  if (outer <= 1e-10 * mx) return;
  // least-squares slope of log|phi| against log k over the outer quarter
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int m = 0;
  for (std::size_t i = start; i < N; ++i) {
    const double a = std::abs(phi[idx[i]]);
    const double k = std::sqrt(std::abs(nodes[idx[i]].sol.u));
    if (a <= 0.0 || k <= 0.0) continue;
    const double X = std::log(k), Y = std::log(a);
    sx += X, sy += Y, sxx += X * X, sxy += X * Y;
    ++m;
  }
  const double den = m * sxx - sx * sx;
  const double slope = (m > 1 && den > 0) ? (m * sxy - sx * sy) / den : 0.0;
  if (slope > -1.0 + 0.1)
    throw Error(ErrorCode::DecayTooSlow, "contour samples decay like k^" + std::to_string(slope));
}

}  // namespace

std::vector<cplx> ba_fourier_forward(const std::vector<ContourNode>& nodes, const std::vector<cplx>& phi,
                                     const XGrid& grid, bool use_dual, int threads) {
  if (phi.size() != nodes.size()) throw Error(ErrorCode::ConfigInvalid, "one sample per contour node is required");
  check_decay(nodes, phi);
  std::vector<cplx> out(grid.x.size());
  const double norm = 1.0 / std::sqrt(2.0 * kPi);
  parallel_for(
      grid.x.size(),
      [&](std::size_t i) {
        cplx acc = 0.0;
        for (std::size_t j = 0; j < nodes.size(); ++j) {
          if (phi[j] == 0.0) continue;
          const auto& s = nodes[j].sol;
          acc += phi[j] * nodes[j].weight * (use_dual ? dual_psi(s, grid.x[i]) : s.psi(grid.x[i]));
        }
        out[i] = norm * acc;
      },
      threads);
  return out;
}

std::vector<cplx> ba_fourier_inverse(const XGrid& grid, const std::vector<cplx>& f,
                                     const std::vector<ContourNode>& nodes, int threads) {
  if (f.size() != grid.x.size()) throw Error(ErrorCode::ConfigInvalid, "one sample per grid point is required");
  std::vector<cplx> out(nodes.size());
  const double norm = 1.0 / std::sqrt(2.0 * kPi);
  parallel_for(
      nodes.size(),
      [&](std::size_t j) {
        cplx acc = 0.0;
        for (std::size_t i = 0; i < grid.x.size(); ++i) acc += f[i] * grid.w[i] * nodes[j].sol.psi(grid.x[i]);
        out[j] = norm * acc;
      },
      threads);
  return out;
}

ParsevalReport ba_parseval(const std::vector<ContourNode>& nodes, const std::vector<cplx>& phi1,
                           const std::vector<cplx>& phi2, const XGrid& grid, int threads) {
  const auto a = ba_fourier_forward(nodes, phi1, grid, true, threads);
  const auto b = ba_fourier_forward(nodes, phi2, grid, false, threads);
  ParsevalReport r{0.0, 0.0};
  for (std::size_t i = 0; i < grid.x.size(); ++i) r.x_side += a[i] * b[i] * grid.w[i];
  for (std::size_t j = 0; j < nodes.size(); ++j) r.contour_side += phi1[j] * phi2[j] * nodes[j].weight;
  return r;
}

}  // namespace singap
