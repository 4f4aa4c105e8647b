#include "singap/spectral_ode.hpp"

#include <algorithm>
#include <boost/math/tools/roots.hpp>
#include <cmath>
#include <numbers>

#include "singap/error.hpp"
#include "singap/ode.hpp"
#include "singap/parallel.hpp"

namespace singap {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr cplx kI{0.0, 1.0};

double point_segment_distance(cplx p, cplx a, cplx b) {
  const cplx d = b - a;
  const double L2 = std::norm(d);
  if (L2 == 0.0) return std::abs(p - a);
  const double t = std::clamp(std::real((p - a) * std::conj(d)) / L2, 0.0, 1.0);
  return std::abs(p - (a + t * d));
}

double clearance_scale(const Potential& pot) {
  const double T = pot.period();
  return T > 0 ? T : 1.0;
}

void check_path(const Potential& pot, const Path& path, double clearance) {
  for (std::size_t i = 0; i + 1 < path.size(); ++i) {
    const cplx a = path[i], b = path[i + 1];
    const double lo = std::min(a.real(), b.real()) - clearance;
    const double hi = std::max(a.real(), b.real()) + clearance;
    const double h = std::max(std::abs(a.imag()), std::abs(b.imag())) + clearance;
    for (const cplx& s : pot.singularities(lo, hi, h)) {
      if (point_segment_distance(s, a, b) < clearance) {
        throw Error(ErrorCode::PathTooCloseToPole, "integration path passes within the pole clearance");
      }
    }
  }
}

// Integrates `cols` solution columns (psi, psi'), optionally with their
// u-derivatives, plus the potential's auxiliary state along the path.
// Layout: [cols x (psi, psi')] [cols x (psi_u, psi_u')] [aux].
template <class Obs>
void integrate_columns(const Potential& pot, cplx u, const Path& path, std::vector<cplx>& y, int cols,
                       bool variational, const IntegrationOptions& opt, Obs&& obs) {
  if (path.size() < 2) throw Error(ErrorCode::ConfigInvalid, "path needs at least two vertices");
  check_path(pot, path, opt.pole_clearance * clearance_scale(pot));
  const std::size_t na = pot.aux_size();
  const std::size_t base = static_cast<std::size_t>(cols) * 2 * (variational ? 2 : 1);
  if (y.size() != base + na) throw Error(ErrorCode::ConfigInvalid, "state size mismatch");
  if (na > 0) pot.aux_init(path.front(), y.data() + base);

  Dp45Options o;
  o.rtol = opt.rtol;
  o.atol = opt.atol;
  for (std::size_t seg = 0; seg + 1 < path.size(); ++seg) {
    const cplx A = path[seg], B = path[seg + 1];
    const cplx dx = B - A;
    if (dx == cplx(0.0)) continue;
    auto f = [&](double s, const cplx* st, cplx* ds) {
      const cplx x = A + s * dx;
      const cplx* aux = na > 0 ? st + base : nullptr;
      const cplx q = pot.value(x, aux) - u;
      for (int c = 0; c < cols; ++c) {
        ds[2 * c] = dx * st[2 * c + 1];
        ds[2 * c + 1] = dx * q * st[2 * c];
      }
      if (variational) {
        const std::size_t v = 2 * cols;
        for (int c = 0; c < cols; ++c) {
          ds[v + 2 * c] = dx * st[v + 2 * c + 1];
          ds[v + 2 * c + 1] = dx * (q * st[v + 2 * c] - st[2 * c]);
        }
      }
      if (na > 0) {
        pot.aux_rhs(x, aux, ds + base);
        for (std::size_t k = 0; k < na; ++k) ds[base + k] *= dx;
      }
    };
    dp45_integrate(f, 0.0, 1.0, y, o, [&](double s, const std::vector<cplx>& st) { obs(A + s * dx, st); });
  }
}

}  // namespace

cplx Potential::operator()(cplx x) const {
  if (aux_size() == 0) return value(x, nullptr);
  std::vector<cplx> aux(aux_size());
  aux_init(x, aux.data());
  return value(x, aux.data());
}

// ---------------------------------------------------------------- Lame

LamePotential::LamePotential(int n, Lattice lattice, double offset, cplx shift)
    : n_(n), lattice_(std::move(lattice)), offset_(offset), shift_(shift) {
  if (n < 0) throw Error(ErrorCode::ConfigInvalid, "Lame index must be non-negative");
}

LamePotential LamePotential::from_branch_points(int n, double u0, double u1, double u2) {
  const auto sl = lattice_from_branch_points(u0, u1, u2);
  return LamePotential(n, sl.lattice, sl.shift);
}

LamePotential LamePotential::shifted() const {
  return LamePotential(n_, lattice_, offset_, lattice_.imaginary_half_period());
}

std::string LamePotential::name() const { return shift_ == cplx(0.0) ? "lame" : "shifted-lame"; }

std::vector<RealPole> LamePotential::real_poles() const {
  if (shift_ == cplx(0.0)) return {{0.0, double(n_) * (n_ + 1)}};
  return {};
}

std::vector<cplx> LamePotential::singularities(double lo, double hi, double height) const {
  std::vector<cplx> out;
  if (n_ == 0) return out;
  const cplx A = 2.0 * lattice_.omega1(), B = 2.0 * lattice_.omega2();
  const double reach = std::max({std::abs(lo), std::abs(hi), height}) + std::abs(shift_);
  const double area = std::abs(A.real() * B.imag() - A.imag() * B.real());
  const long R = static_cast<long>(std::ceil(reach * std::max(std::abs(A), std::abs(B)) / area)) + 2;
  for (long m = -R; m <= R; ++m)
    for (long k = -R; k <= R; ++k) {
      const cplx p = double(m) * A + double(k) * B - shift_;
      if (p.real() >= lo && p.real() <= hi && std::abs(p.imag()) <= height) out.push_back(p);
    }
  return out;
}

cplx LamePotential::value(cplx x, const cplx*) const {
  if (n_ == 0) return offset_;
  return double(n_) * (n_ + 1) * lattice_.wp(x + shift_) + offset_;
}

// ---------------------------------------------------------------- degenerate cases

std::vector<cplx> SinhPotential::singularities(double lo, double hi, double height) const {
  std::vector<cplx> out;
  if (lo <= 0.0 && hi >= 0.0) {
    const double step = kPi / c_;
    for (long k = -static_cast<long>(height / step) - 1; k <= static_cast<long>(height / step) + 1; ++k) {
      if (std::abs(k * step) <= height) out.push_back(cplx(0.0, k * step));
    }
  }
  return out;
}

cplx SinhPotential::value(cplx x, const cplx*) const {
  const cplx s = std::sinh(c_ * x);
  return 2.0 * c_ * c_ / (s * s);
}

double SinPotential::period() const { return kPi / c_; }

std::vector<cplx> SinPotential::singularities(double lo, double hi, double height) const {
  std::vector<cplx> out;
  if (height < 0) return out;
  const double step = kPi / c_;
  for (long k = static_cast<long>(std::floor(lo / step)); k <= static_cast<long>(std::ceil(hi / step)); ++k) {
    const double p = k * step;
    if (p >= lo && p <= hi) out.push_back(p);
  }
  return out;
}

cplx SinPotential::value(cplx x, const cplx*) const {
  const cplx s = std::sin(c_ * x);
  return 2.0 * c_ * c_ / (s * s);
}

std::vector<RealPole> RationalPotential::real_poles() const {
  if (n_ == 0) return {};
  return {{0.0, double(n_) * (n_ + 1)}};
}

std::vector<cplx> RationalPotential::singularities(double lo, double hi, double) const {
  if (n_ != 0 && lo <= 0.0 && hi >= 0.0) return {0.0};
  return {};
}

cplx RationalPotential::value(cplx x, const cplx*) const { return double(n_) * (n_ + 1) / (x * x); }

TabulatedPotential::TabulatedPotential(std::vector<double> samples, double period) : T_(period) {
  const int N = static_cast<int>(samples.size());
  if (N < 1 || !(period > 0)) throw Error(ErrorCode::ConfigInvalid, "tabulated potential needs samples and T > 0");
  K_ = N / 2;
  coef_.assign(2 * K_ + 1, 0.0);
  for (int m = -K_; m <= K_; ++m) {
    cplx s = 0.0;
    for (int j = 0; j < N; ++j) s += samples[j] * std::exp(-2.0 * kPi * kI * double(m) * double(j) / double(N));
    s /= double(N);
    if (N % 2 == 0 && std::abs(m) == K_) s *= 0.5;  // split the Nyquist term
    coef_[m + K_] = s;
  }
}

cplx TabulatedPotential::value(cplx x, const cplx*) const {
  cplx s = 0.0;
  for (int m = -K_; m <= K_; ++m) s += coef_[m + K_] * std::exp(2.0 * kPi * kI * double(m) * x / T_);
  return s;
}

// ---------------------------------------------------------------- transfer matrices

Path default_period_path(const Potential& pot, double x_a, double eps) {
  const double T = pot.period();
  if (!(T > 0)) throw Error(ErrorCode::ConfigInvalid, "default period path needs a periodic potential");
  const double clearance = 1e-3 * T;
  bool regular = true;
  for (const cplx& s : pot.singularities(x_a - clearance, x_a + clearance, clearance))
    if (std::abs(s - x_a) < clearance) regular = false;
  const cplx lift = kI * eps;
  if (regular) return {x_a, x_a + lift, x_a + T + lift, x_a + T};
  return {x_a + lift, x_a + T + lift};
}

TransferMatrix integrate_transfer(const Potential& pot, cplx u, const Path& path, const IntegrationOptions& opt) {
  std::vector<cplx> y(4 + pot.aux_size(), 0.0);
  y[0] = 1.0;
  y[3] = 1.0;
  integrate_columns(pot, u, path, y, 2, false, opt, [](cplx, const std::vector<cplx>&) {});
  TransferMatrix t;
  t.m = {{{y[0], y[2]}, {y[1], y[3]}}};
  t.x_a = path.front();
  t.x_b = path.back();
  t.u = u;
  t.det_defect = std::abs(y[0] * y[3] - y[2] * y[1] - 1.0);
  return t;
}

std::array<cplx, 2> integrate_solution(const Potential& pot, cplx u, const Path& path, std::array<cplx, 2> init,
                                       const IntegrationOptions& opt,
                                       std::vector<std::pair<cplx, std::array<cplx, 2>>>* trace) {
  std::vector<cplx> y(2 + pot.aux_size(), 0.0);
  y[0] = init[0];
  y[1] = init[1];
  integrate_columns(pot, u, path, y, 1, false, opt, [&](cplx x, const std::vector<cplx>& st) {
    if (trace) trace->push_back({x, {st[0], st[1]}});
  });
  return {y[0], y[1]};
}

double regular_basepoint(const Potential& pot) {
  const double T = pot.period();
  auto poles = pot.real_poles();
  if (poles.empty()) return 0.0;
  std::vector<double> xs;
  for (const auto& p : poles) xs.push_back(p.position);
  std::sort(xs.begin(), xs.end());
  const double next = xs.size() > 1 ? xs[1] : xs[0] + (T > 0 ? T : 2.0);
  return 0.5 * (xs[0] + next);
}

double default_lift(const Potential& pot, cplx u) {
  const double T = pot.period();
  if (pot.real_poles().empty()) return 1e-2 * T;
  double im = INFINITY;
  for (const cplx& s : pot.singularities(0.0, T, T))
    if (std::abs(s.imag()) > 1e-9 * T) im = std::min(im, std::abs(s.imag()));
  return std::min({0.25 * T, 0.5 * im, 2.0 / std::sqrt(std::max(std::abs(u), 1.0))});
}

MonodromyData monodromy(const Potential& pot, cplx u, double eps_rel, std::optional<double> x_a,
                        const IntegrationOptions& opt) {
  const double T = pot.period();
  const double eps = eps_rel != 0.0 ? eps_rel * T : default_lift(pot, u);
  const Path path = default_period_path(pot, x_a.value_or(regular_basepoint(pot)), eps);
  std::vector<cplx> y(8 + pot.aux_size(), 0.0);
  y[0] = 1.0;
  y[3] = 1.0;
  integrate_columns(pot, u, path, y, 2, true, opt, [](cplx, const std::vector<cplx>&) {});
  MonodromyData d;
  d.T.m = {{{y[0], y[2]}, {y[1], y[3]}}};
  d.T.x_a = path.front();
  d.T.x_b = path.back();
  d.T.u = u;
  d.T.det_defect = std::abs(y[0] * y[3] - y[2] * y[1] - 1.0);
  d.dT = {{{y[4], y[6]}, {y[5], y[7]}}};
  d.S = 0.5 * d.T.trace();
  d.dS = 0.5 * (y[4] + y[7]);
  return d;
}

cplx monodromy_trace(const Potential& pot, cplx u, double eps_rel) { return monodromy(pot, u, eps_rel).S; }

// ---------------------------------------------------------------- spectrum

SpectrumReport find_spectrum(const Potential& pot, double lo, double hi, const SpectrumOptions& opt) {
  using boost::math::tools::eps_tolerance;
  using boost::math::tools::toms748_solve;
  const double T = pot.period();
  if (!(T > 0) || !(hi > lo)) throw Error(ErrorCode::ConfigInvalid, "spectrum scan needs T > 0 and lo < hi");

  // grid uniform in sqrt(u) at large u
  const double dk = 2.0 * kPi / (T * opt.points_per_oscillation);
  std::vector<double> grid{lo};
  while (grid.back() < hi) {
    const double u = grid.back();
    const double k = std::max(std::sqrt(std::abs(u)), 2.0 * kPi / T);
    grid.push_back(std::min(hi, u + 2.0 * k * dk));
  }
  std::vector<double> S(grid.size()), dS(grid.size());
  parallel_for(
      grid.size(),
      [&](std::size_t i) {
        const auto m = monodromy(pot, grid[i], opt.eps_rel);
        S[i] = m.S.real();
        dS[i] = m.dS.real();
      },
      opt.threads);

  auto eval = [&](double u) { return monodromy(pot, u, opt.eps_rel); };
  std::uintmax_t iters = 0;
  eps_tolerance<double> tol(48);

  // extrema of S
  std::vector<double> ext;
  for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
    if (dS[i] == 0.0) {
      ext.push_back(grid[i]);
    } else if ((dS[i] > 0) != (dS[i + 1] > 0) && dS[i + 1] != 0.0) {
      iters = 80;
      auto r = toms748_solve([&](double u) { return eval(u).dS.real(); }, grid[i], grid[i + 1], dS[i], dS[i + 1],
                             tol, iters);
      ext.push_back(0.5 * (r.first + r.second));
    }
  }

  SpectrumReport rep;
  for (std::size_t i = 0; i < grid.size(); ++i) rep.samples.push_back({grid[i], S[i]});

  std::vector<double> ext_S(ext.size());
  for (std::size_t e = 0; e < ext.size(); ++e) ext_S[e] = eval(ext[e]).S.real();
  std::vector<bool> is_double(ext.size(), false);
  for (std::size_t e = 0; e < ext.size(); ++e) {
    const double dev = std::abs(ext_S[e]) - 1.0;
    if (std::abs(dev) < opt.double_point_tol) {
      is_double[e] = true;
      rep.double_points.push_back({ext[e], ext_S[e] > 0 ? 1 : -1});
    } else if (dev > 0 && dev < 100.0 * opt.double_point_tol) {
      throw Error(ErrorCode::RootClusterUnresolved, "gap too narrow to separate its edges near u = " +
                                                        std::to_string(ext[e]));
    }
  }

  // monotone pieces between extrema; at most one root of S - 1 and one of S + 1 in each
  std::vector<double> knots{lo};
  for (double e : ext) knots.push_back(e);
  knots.push_back(hi);
  auto S_at = [&](double u) { return eval(u).S.real(); };
  std::vector<double> knot_S(knots.size());
  knot_S.front() = S.front();
  knot_S.back() = S.back();
  for (std::size_t e = 0; e < ext.size(); ++e) knot_S[e + 1] = ext_S[e];
  const double cluster = 1e-5 * std::max(1.0, std::abs(hi - lo));
  for (std::size_t p = 0; p + 1 < knots.size(); ++p) {
    for (int sigma : {1, -1}) {
      const double fa = knot_S[p] - sigma, fb = knot_S[p + 1] - sigma;
      if (fa == 0.0 || fb == 0.0 || (fa > 0) == (fb > 0)) continue;
      iters = 80;
      auto r = toms748_solve([&](double u) { return S_at(u) - sigma; }, knots[p], knots[p + 1], fa, fb, tol, iters);
      const double root = 0.5 * (r.first + r.second);
      // overshoot next to a double point produces a spurious pair of roots
      bool spurious = false;
      if (p > 0 && is_double[p - 1] && std::abs(root - knots[p]) < cluster) spurious = true;
      if (p + 1 < knots.size() - 1 && is_double[p] && std::abs(root - knots[p + 1]) < cluster) spurious = true;
      if (spurious) continue;
      rep.band_edges.push_back(root);
      rep.edge_parity.push_back(sigma);
    }
  }
  std::vector<std::size_t> idx(rep.band_edges.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return rep.band_edges[a] < rep.band_edges[b]; });
  std::vector<double> be;
  std::vector<int> bp;
  for (auto i : idx) {
    be.push_back(rep.band_edges[i]);
    bp.push_back(rep.edge_parity[i]);
  }
  rep.band_edges = be;
  rep.edge_parity = bp;
  for (std::size_t i = 1; i < be.size(); ++i)
    if (be[i] - be[i - 1] < 1e-9 * std::max(1.0, std::abs(be[i]))) {
      throw Error(ErrorCode::RootClusterUnresolved, "two band edges coincide within tolerance");
    }

  rep.fully_degenerate = rep.band_edges.empty() && !rep.double_points.empty() && pot.real_poles().empty();
  if (!pot.real_poles().empty()) rep.hermit_points = rep.double_points;
  return rep;
}

std::vector<double> find_band_edges(const Potential& pot, double lo, double hi, const SpectrumOptions& opt) {
  return find_spectrum(pot, lo, hi, opt).band_edges;
}

std::vector<DoublePoint> find_hermit_spectrum(const Potential& pot, double lo, double hi, const SpectrumOptions& opt) {
  return find_spectrum(pot, lo, hi, opt).hermit_points;
}

// ---------------------------------------------------------------- Dirichlet oracle

std::vector<double> wp_laurent_coefficients(double g2, double g3, int K) {
  std::vector<double> c(K + 1, 0.0);  // c[0] unused
  if (K >= 1) c[1] = g2 / 20.0;
  if (K >= 2) c[2] = g3 / 28.0;
  for (int k = 3; k <= K; ++k) {
    double s = 0.0;
    for (int m = 1; m <= k - 2; ++m) s += c[m] * c[k - 1 - m];
    c[k] = 3.0 * s / ((2.0 * k + 3.0) * (k - 2.0));
  }
  return c;
}

namespace {

// Recessive solution x^(n+1) sum d_j x^j and its derivative at x, divided by
// x^(n+1) (common scale is irrelevant for eigenvalue matching).
std::array<double, 2> frobenius_start(const FrobeniusData& fd, double lambda, double x) {
  const int n = fd.n;
  const int J = 400;
  const auto c = wp_laurent_coefficients(fd.g2, fd.g3, J / 2 + 1);
  std::vector<double> v(J + 1, 0.0);
  v[0] = fd.offset - lambda;
  for (int k = 1; 2 * k <= J; ++k) v[2 * k] = double(n) * (n + 1) * c[k];
  std::vector<double> d(J + 1, 0.0);
  d[0] = 1.0;
  double psi = 1.0, dpsi = double(n + 1) / x;
  int small = 0;
  double xp = 1.0;
  for (int j = 1; j <= J; ++j) {
    double s = 0.0;
    for (int m = 0; m <= j - 2; ++m) s += v[m] * d[j - 2 - m];
    d[j] = s / (double(j) * (j + 2 * n + 1));
    xp *= x;
    const double term = d[j] * xp;
    psi += term;
    dpsi += double(j + n + 1) * term / x;
    if (std::abs(term) <= 1e-17 * std::abs(psi)) {
      if (++small >= 4) return {psi, dpsi};
    } else {
      small = 0;
    }
    if (!std::isfinite(psi)) break;
  }
  throw Error(ErrorCode::FrobeniusSeriesDivergence, "Frobenius series did not converge at the start point");
}

}  // namespace

std::vector<double> dirichlet_shooting_oracle(const std::function<double(double)>& U, double T,
                                              const FrobeniusData& fd, double lo, double hi,
                                              const ShootingOptions& opt) {
  const double x0 = opt.eps_rel * T, x1 = 0.5 * T;
  const int N = opt.steps;
  // U on the fine grid (step h/4 of the coarse run covers both runs' stages)
  const int M = 4 * N;
  const double hf = (x1 - x0) / M;
  std::vector<double> Ug(M + 1);
  for (int i = 0; i <= M; ++i) Ug[i] = U(x0 + i * hf);

  auto rk4 = [&](double lambda, int steps) {
    const int stride = M / steps;  // grid index step per RK step
    const double h = (x1 - x0) / steps;
    auto [y, dy] = frobenius_start(fd, lambda, x0);
    for (int s = 0; s < steps; ++s) {
      const int i = s * stride;
      const double q0 = Ug[i] - lambda, qm = Ug[i + stride / 2] - lambda, q1 = Ug[i + stride] - lambda;
      const double k1y = dy, k1d = q0 * y;
      const double k2y = dy + 0.5 * h * k1d, k2d = qm * (y + 0.5 * h * k1y);
      const double k3y = dy + 0.5 * h * k2d, k3d = qm * (y + 0.5 * h * k2y);
      const double k4y = dy + h * k3d, k4d = q1 * (y + h * k3y);
      y += h / 6.0 * (k1y + 2 * k2y + 2 * k3y + k4y);
      dy += h / 6.0 * (k1d + 2 * k2d + 2 * k3d + k4d);
    }
    return std::array<double, 2>{y, dy};
  };
  // Wronskian of the left solution with its mirror image at T/2 is -2 psi psi'.
  auto mismatch = [&](double lambda) {
    const auto a = rk4(lambda, N), b = rk4(lambda, 2 * N);
    const double y = (16.0 * b[0] - a[0]) / 15.0, dy = (16.0 * b[1] - a[1]) / 15.0;
    const double nrm = std::hypot(y, dy);
    return (y / nrm) * (dy / nrm);
  };

  std::vector<double> grid(opt.scan_points + 1), F(grid.size());
  for (int i = 0; i <= opt.scan_points; ++i) grid[i] = lo + (hi - lo) * i / opt.scan_points;
  parallel_for(grid.size(), [&](std::size_t i) { F[i] = mismatch(grid[i]); });
  std::vector<double> out;
  boost::math::tools::eps_tolerance<double> tol(48);
  for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
    if (F[i] == 0.0) {
      out.push_back(grid[i]);
      continue;
    }
    if ((F[i] > 0) == (F[i + 1] > 0) || F[i + 1] == 0.0) continue;
    std::uintmax_t it = 100;
    auto r = boost::math::tools::toms748_solve(mismatch, grid[i], grid[i + 1], F[i], F[i + 1], tol, it);
    out.push_back(0.5 * (r.first + r.second));
  }
  return out;
}

std::vector<double> dirichlet_shooting_oracle(const LamePotential& pot, double lo, double hi,
                                              const ShootingOptions& opt) {
  if (pot.shift() != cplx(0.0) || pot.n() < 1) {
    throw Error(ErrorCode::ConfigInvalid, "shooting oracle needs an unshifted Lame potential with n >= 1");
  }
  const auto& L = pot.lattice();
  if (std::abs(L.g2().imag()) > 1e-12 * std::abs(L.g2()) || std::abs(L.g3().imag()) > 1e-12 * (1 + std::abs(L.g3()))) {
    throw Error(ErrorCode::ConfigInvalid, "shooting oracle needs real invariants");
  }
  FrobeniusData fd{pot.n(), L.g2().real(), L.g3().real(), pot.offset()};
  auto U = [&](double x) { return pot.value(x, nullptr).real(); };
  return dirichlet_shooting_oracle(U, pot.period(), fd, lo, hi, opt);
}

}  // namespace singap
