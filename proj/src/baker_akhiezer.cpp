#include "singap/baker_akhiezer.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "singap/error.hpp"

namespace singap {

namespace {

constexpr cplx I{0.0, 1.0};
constexpr double kPi = std::numbers::pi;

HyperellipticCurve curve_of(const ShiftedLattice& sl) {
  auto b = branch_points_of(sl);
  bool real = true;
  for (const auto& x : b) real = real && std::abs(x.imag()) <= 1e-12 * (1.0 + std::abs(x));
  if (real) return HyperellipticCurve(std::vector<double>{b[0].real(), b[1].real(), b[2].real()});
  return HyperellipticCurve(std::vector<cplx>(b.begin(), b.end()));
}

// Newton from several seeds; real seeds stay on the real line, so each one
// is nudged off it.
cplx invert_wp(cplx value, const Lattice& L) {
  const cplx w1 = L.omega1(), w2 = L.omega2();
  const cplx nudge(1.0, 0.013);
  const cplx seeds[] = {nudge / std::sqrt(value), w1 + 0.37 * w2 * nudge, w2 + 0.41 * w1 * nudge,
                        (w1 + w2) * 0.9 * nudge, 0.5 * w1 * nudge, 0.5 * w2 * nudge};
  cplx best = seeds[0];
  double best_err = INFINITY;
  for (const cplx& s : seeds) {
    const cplx a = wp_inverse(value, L, s);
    if (L.distance_to_lattice(a) < L.pole_eps()) continue;
    const double err = std::abs(L.wp(a) - value);
    if (err < best_err) {
      best_err = err;
      best = a;
    }
    if (err < 1e-12 * (1.0 + std::abs(value))) break;
  }
  return best;
}

}  // namespace

cplx dual_psi(const BlochSolution& s, cplx x) {
  if (!s.dual) throw Error(ErrorCode::DualDivisorUnavailable, "solution carries no dual function");
  return s.dual(x);
}

BlochSolution genus0_bloch(cplx k) {
  BlochSolution s;
  s.psi = [k](cplx x) { return std::exp(I * k * x); };
  s.psi_x = [k](cplx x) { return I * k * std::exp(I * k * x); };
  s.dual = [k](cplx x) { return std::exp(-I * k * x); };
  s.dual_x = [k](cplx x) { return -I * k * std::exp(-I * k * x); };
  s.phi = [](cplx) { return cplx(0.0); };
  s.u = k * k;
  s.p = k;
  s.dmu = 1.0 / (2.0 * k);
  s.divisor = "empty";
  return s;
}

// ---------------------------------------------------------------------------
// Lame n = 1

Lame1Family::Lame1Family(ShiftedLattice sl) : sl_(std::move(sl)), curve_(curve_of(sl_)) {}

Lame1Family Lame1Family::from_branch_points(double u0, double u1, double u2) {
  return Lame1Family(lattice_from_branch_points(u0, u1, u2));
}

LamePotential Lame1Family::potential() const { return LamePotential(1, sl_.lattice, sl_.shift); }

cplx Lame1Family::u(cplx alpha) const { return sl_.shift - sl_.lattice.wp(alpha); }

cplx Lame1Family::sqrtR(cplx alpha) const { return -0.5 * I * sl_.lattice.wp_prime(alpha); }

cplx Lame1Family::multiplier(cplx alpha) const {
  const double T = period();
  return std::exp(sl_.lattice.zeta(alpha) * T - 2.0 * sl_.lattice.eta1() * alpha);
}

cplx Lame1Family::quasimomentum(cplx alpha) const {
  const auto& L = sl_.lattice;
  return -I * (L.zeta(alpha) - L.eta1() * alpha / L.omega1());
}

double Lame1Family::p1() const {
  const auto& L = sl_.lattice;
  return sl_.shift + (L.eta1() / L.omega1()).real();
}

cplx Lame1Family::alpha_of(cplx uval, int sheet, Approach side) const {
  const auto& L = sl_.lattice;
  const cplx target = static_cast<double>(sheet) * curve_.sqrtR(uval, side);
  cplx a = invert_wp(sl_.shift - uval, L);
  if (std::abs(sqrtR(a) - target) > std::abs(sqrtR(-a) - target)) a = -a;
  // wp is critical at the half periods, so the inversion keeps only half the
  // digits there; snap when u is a branch point
  for (const cplx& h : {L.omega1(), L.omega2(), L.omega1() + L.omega2()})
    if (L.distance_to_lattice(a - h) < 1e-5 && std::abs(u(h) - uval) < 1e-12 * curve_.scale()) a = h;
  return a;
}

cplx Lame1Family::alpha_of_k(double k) const {
  const cplx a = wp_inverse(sl_.shift - k * k, sl_.lattice, -I / k);
  return a.imag() < 0.0 ? a : -a;
}

cplx Lame1Family::hermite(cplx x, cplx alpha) const {
  const auto& L = sl_.lattice;
  const double T = period();
  const double m = std::round(x.real() / T);
  const cplx x0 = x - m * T;
  if (L.distance_to_lattice(x0) < L.pole_eps())
    throw Error(ErrorCode::PoleProximity, "psi evaluated at a pole of the potential");
  if (L.distance_to_lattice(alpha) < L.pole_eps())
    throw Error(ErrorCode::PoleProximity, "alpha is a lattice point");
  const cplx v = L.sigma(alpha - x0) / (L.sigma(x0) * L.sigma(alpha)) * std::exp(L.zeta(alpha) * x0);
  return m == 0.0 ? v : v * std::pow(multiplier(alpha), m);
}

cplx Lame1Family::hermite_x(cplx x, cplx alpha) const {
  const auto& L = sl_.lattice;
  const double T = period();
  const cplx x0 = x - std::round(x.real() / T) * T;
  return hermite(x, alpha) * (L.zeta(alpha) - L.zeta(alpha - x0) - L.zeta(x0));
}

BlochSolution Lame1Family::at(cplx alpha, std::optional<cplx> normalise_at) const {
  BlochSolution s;
  s.u = u(alpha);
  s.multiplier = multiplier(alpha);
  s.p = quasimomentum(alpha);
  s.period = period();
  const cplx two_sqrt_r = 2.0 * sqrtR(alpha);
  auto self = *this;
  if (!normalise_at) {
    s.psi = [self, alpha](cplx x) { return I * self.hermite(x, alpha); };
    s.psi_x = [self, alpha](cplx x) { return I * self.hermite_x(x, alpha); };
    s.dual = [self, alpha](cplx x) { return I * self.hermite(-x, alpha); };
    s.dual_x = [self, alpha](cplx x) { return -I * self.hermite_x(-x, alpha); };
    const double sh = shift();
    const Lattice lat = sl_.lattice;
    s.phi = [lat, sh](cplx x) { return I * (lat.zeta(x) - 0.5 * sh * x); };
    s.dmu = 1.0 / two_sqrt_r;
    s.divisor = "inf";
    return s;
  }
  const cplx xp = *normalise_at;
  const cplx a = hermite(xp, alpha), b = hermite(-xp, alpha);
  s.psi = [self, alpha, xp, a](cplx y) { return self.hermite(y + xp, alpha) / a; };
  s.psi_x = [self, alpha, xp, a](cplx y) { return self.hermite_x(y + xp, alpha) / a; };
  s.dual = [self, alpha, xp, b](cplx y) { return self.hermite(-y - xp, alpha) / b; };
  s.dual_x = [self, alpha, xp, b](cplx y) { return -self.hermite_x(-y - xp, alpha) / b; };
  s.dmu = (s.u - u(xp)) / two_sqrt_r;
  s.divisor = "D(x')";
  return s;
}

cplx cauchy_second_derivative(const std::function<cplx(cplx)>& f, cplx x, double r, int samples) {
  cplx acc = 0.0;
  for (int j = 0; j < samples; ++j) {
    const double th = 2.0 * kPi * j / samples;
    acc += f(x + r * std::polar(1.0, th)) * std::polar(1.0, -2.0 * th);
  }
  return 2.0 * acc / (static_cast<double>(samples) * r * r);
}

BlochSolution lame1_bloch(cplx alpha, const ShiftedLattice& sl) {
  Lame1Family fam(sl);
  const auto& L = fam.lattice();
  if (L.distance_to_lattice(alpha) < L.pole_eps())
    throw Error(ErrorCode::PoleProximity, "alpha is a lattice point");
  BlochSolution s = fam.at(alpha);
  const double T = fam.period();
  const double r = 0.05 * std::min(T, L.shortest_vector());
  for (int j = 1; j <= 7; ++j) {
    const cplx x = T * (j / 8.0) + cplx(0.0, 0.01 * T);
    const cplx v = s.psi(x);
    const cplx res = -cauchy_second_derivative(s.psi, x, r) + (2.0 * L.wp(x) + fam.shift() - s.u) * v;
    if (std::abs(res) > 1e-6 * std::max(std::abs(v), 1.0))
      throw Error(ErrorCode::CheckFailed, "Hermite ansatz fails the ODE residual check");
  }
  return s;
}

// ---------------------------------------------------------------------------
// Numerical Bloch solutions

NumericalBlochFamily::NumericalBlochFamily(std::shared_ptr<const Potential> pot, QuasimomentumDifferential dp,
                                           MeasureDifferential dmu, double eps_rel, IntegrationOptions opt) {
  if (!pot || !(pot->period() > 0.0))
    throw Error(ErrorCode::InvalidCurve, "Bloch solutions need a periodic potential");
  const double xb = regular_basepoint(*pot);
  st_ = std::make_shared<const State>(State{std::move(pot), std::move(dp), std::move(dmu), eps_rel, opt, xb});
}

std::array<cplx, 2> NumericalBlochFamily::State::propagate(cplx u, std::array<cplx, 2> init, cplx x) const {
  if (x == cplx(xb)) return init;
  const double T = pot->period();
  const double sgn = x.imag() < 0.0 ? -1.0 : 1.0;
  const double lift = eps_rel != 0.0 ? eps_rel * T : default_lift(*pot, u);
  const double h = sgn * std::max(lift, 2.0 * std::abs(x.imag()));
  const Path path{cplx(xb), cplx(xb, h), cplx(x.real(), h), x};
  return integrate_solution(*pot, u, path, init, opt);
}

std::array<cplx, 2> NumericalBlochFamily::propagate(cplx u, std::array<cplx, 2> init, cplx x) const {
  return st_->propagate(u, init, x);
}

BlochSolution NumericalBlochFamily::at(cplx u, int sheet, Approach side) const {
  const auto& st = *st_;
  const double T = st.pot->period();
  const auto md = monodromy(*st.pot, u, st.eps_rel, st.xb, st.opt);
  const auto& M = md.T.m;
  const cplx disc = std::sqrt(md.S * md.S - 1.0);
  const cplx k1 = md.S + disc, k2 = md.S - disc;
  const cplx target = static_cast<double>(sheet) * st.dp.density(u, side);
  auto pprime = [&](cplx k) { return -2.0 * I * md.dS / (T * (k - 1.0 / k)); };
  const bool first = std::abs(pprime(k1) - target) <= std::abs(pprime(k2) - target);
  const cplx kap = first ? k1 : k2, kinv = first ? k2 : k1;
  auto eigvec = [&](cplx k) -> std::array<cplx, 2> {
    std::array<cplx, 2> a{M[0][1], k - M[0][0]}, b{k - M[1][1], M[1][0]};
    const double na = std::abs(a[0]) + std::abs(a[1]), nb = std::abs(b[0]) + std::abs(b[1]);
    auto v = na >= nb ? a : b;
    // Prefer Psi(x_b) = 1 when possible.
    if (std::abs(v[0]) > 1e-8 * (std::abs(v[0]) + std::abs(v[1]))) return {1.0, v[1] / v[0]};
    return v;
  };
  const auto vp = eigvec(kap), vm = eigvec(kinv);
  const cplx dmu = static_cast<double>(sheet) * st.dmu.density(u, side);
  const cplx w0 = vp[0] * vm[1] - vp[1] * vm[0];
  const cplx f = -I / (dmu * w0);

  BlochSolution s;
  s.u = u;
  s.multiplier = kap;
  s.p = -I * std::log(kap) / T;
  s.dmu = dmu;
  s.period = T;
  s.divisor = "numerical";
  auto sp = st_;
  s.psi = [sp, u, vp](cplx x) { return sp->propagate(u, vp, x)[0]; };
  s.psi_x = [sp, u, vp](cplx x) { return sp->propagate(u, vp, x)[1]; };
  s.dual = [sp, u, vm, f](cplx x) { return f * sp->propagate(u, vm, x)[0]; };
  s.dual_x = [sp, u, vm, f](cplx x) { return f * sp->propagate(u, vm, x)[1]; };
  return s;
}

// ---------------------------------------------------------------------------
// Local structure at poles

LaurentReport laurent_structure(int n, const std::function<cplx(cplx)>& f, cplx x0, double radius,
                                double next_singularity, int samples, double tol) {
  if (n < 1) throw Error(ErrorCode::FitIllConditioned, "pole order must be positive");
  if (!(radius > 0.0) || radius > 0.5 * next_singularity)
    throw Error(ErrorCode::FitIllConditioned, "fit circle too large for the next singularity");
  // Roundoff in the samples is amplified by radius^(1-2n) in the highest
  // forbidden coefficient relative to the leading one.
  if (1e-12 * std::pow(radius, 1 - 2 * n) > 0.1 * tol)
    throw Error(ErrorCode::FitIllConditioned, "fit circle too small for the requested tolerance");
  if (samples < 4 * (n + 2)) throw Error(ErrorCode::FitIllConditioned, "too few samples on the circle");

  std::vector<cplx> vals(samples);
  for (int j = 0; j < samples; ++j) vals[j] = f(x0 + radius * std::polar(1.0, 2.0 * kPi * j / samples));

  LaurentReport rep;
  rep.n = n;
  rep.radius = radius;
  rep.lowest_power = -n;
  for (int m = -n; m <= n + 1; ++m) {
    cplx c = 0.0;
    for (int j = 0; j < samples; ++j) c += vals[j] * std::polar(std::pow(radius, -m), -2.0 * kPi * m * j / samples);
    rep.coefficients.push_back(c / static_cast<double>(samples));
  }
  const double a1 = std::abs(rep.coefficient(-n));
  for (int m = -n; m < 0; m += 2) rep.alpha.push_back(rep.coefficient(m));
  for (int m = -n; m <= n - 1; ++m)
    if ((m + n) % 2 != 0) rep.spurious_max = std::max(rep.spurious_max, std::abs(rep.coefficient(m)) / a1);
  rep.pattern_ok = a1 > 0.0 && rep.spurious_max < tol;
  return rep;
}

ResidueReport residue_product_check(const BlochSolution& z, const BlochSolution& w, const Potential& pot,
                                    double x0, double radius, int samples) {
  for (const cplx& s : pot.singularities(x0 - 2.0 * radius, x0 + 2.0 * radius, 2.0 * radius))
    if (std::abs(s - x0) > 1e-9 * (1.0 + radius) && std::abs(s - x0) < 2.0 * radius)
      throw Error(ErrorCode::ContourHitsSecondPole, "another singularity lies near the contour");
  cplx acc = 0.0;
  double mx = 0.0;
  for (int j = 0; j < samples; ++j) {
    const cplx e = std::polar(1.0, 2.0 * kPi * j / samples);
    const cplx x = x0 + radius * e;
    const cplx v = z.psi(x) * dual_psi(w, x);
    mx = std::max(mx, std::abs(v));
    acc += v * e;
  }
  ResidueReport r;
  r.residue = acc * radius / static_cast<double>(samples);
  r.scale = radius * mx;
  r.relative = r.scale > 0.0 ? std::abs(r.residue) / r.scale : 0.0;
  return r;
}

// ---------------------------------------------------------------------------
// Cauchy-Baker-Akhiezer kernel

cplx cba_kernel_hyperelliptic(cplx x, const BlochSolution& z, const BlochSolution& w, double diag_tol) {
  if (!w.dual || !w.dual_x) throw Error(ErrorCode::DualDivisorUnavailable, "kernel needs the dual function");
  const cplx du = w.u - z.u;
  if (std::abs(du) <= diag_tol * std::max(1.0, std::abs(z.u)))
    throw Error(ErrorCode::DiagonalEvaluation, "z and w coincide; use the diagonal limit");
  const cplx wr = z.psi(x) * w.dual_x(x) - z.psi_x(x) * w.dual(x);
  return I * wr / du * w.dmu;
}

double fundamental_lemma_residual(cplx x, const BlochSolution& z, const BlochSolution& w, double h) {
  auto om = [&](cplx y) { return cba_kernel_hyperelliptic(y, z, w); };
  auto d5 = [&](double s) { return (om(x - 2.0 * s) - 8.0 * om(x - s) + 8.0 * om(x + s) - om(x + 2.0 * s)) / (12.0 * s); };
  const cplx d = (16.0 * d5(0.5 * h) - d5(h)) / 15.0;
  return std::abs(d + I * z.psi(x) * w.dual(x) * w.dmu);
}

double periodicity_residual(cplx x, const BlochSolution& z, const BlochSolution& w) {
  const cplx ratio = cba_kernel_hyperelliptic(x + z.period, z, w) / cba_kernel_hyperelliptic(x, z, w);
  return std::abs(ratio - z.multiplier / w.multiplier);
}

double diagonal_limit_error(cplx x, const BlochSolution& z, const std::function<BlochSolution(double)>& near,
                            double h) {
  auto q = [&](double t) {
    const BlochSolution w = near(t);
    return (w.u - z.u) * cba_kernel_hyperelliptic(x, z, w);
  };
  return std::abs(2.0 * q(0.5 * h) - q(h) - 1.0);
}

// ---------------------------------------------------------------------------
// Windowed x-space products

WindowedProducts x_space_orthogonality(const BlochSolution& z, const BlochSolution& w, double xb, double L,
                                       int n_max, double lift) {
  const double T = z.period;
  const double ratio = T > 0.0 ? L / T : 0.0;
  if (!(T > 0.0) || ratio < 0.5 || std::abs(ratio - std::round(ratio)) > 1e-9 * ratio)
    throw Error(ErrorCode::WindowNotIntegerPeriods, "window half-width must be a positive multiple of the period");
  using GK = boost::math::quadrature::gauss_kronrod<double, 61>;
  auto f = [&](cplx x) { return z.psi(x) * dual_psi(w, x); };
  auto leg = [&](cplx a, cplx b) {
    auto g = [&](double t) { return f(a + t * (b - a)) * (b - a); };
    return GK::integrate(g, 0.0, 1.0, 12, 1e-12);
  };
  auto period_integral = [&](double a) {
    const cplx lo(a, 0.0), hi(a + T, 0.0), dy(0.0, lift);
    return leg(lo, lo + dy) + leg(lo + dy, hi + dy) + leg(hi + dy, hi);
  };
  const int per = static_cast<int>(std::round(ratio));
  const int m_max = n_max * per;
  std::vector<cplx> J(2 * m_max);
  for (int m = -m_max; m < m_max; ++m) J[m + m_max] = period_integral(xb + m * T);

  WindowedProducts out;
  cplx run = 0.0;
  for (int n = 1; n <= n_max; ++n) {
    cplx s = 0.0;
    for (int m = -n * per; m < n * per; ++m) s += J[m + m_max];
    s *= w.dmu;
    out.windows.push_back(s);
    run += s;
    out.cesaro.push_back(run / static_cast<double>(n));
  }
  out.decay_ratio = std::abs(out.cesaro.back()) / std::abs(out.windows.front());
  return out;
}

cplx first_correction_fit(const std::function<cplx(double)>& g, double k1, double k2) {
  const cplx f1 = k1 * (g(k1) - 1.0), f2 = k2 * (g(k2) - 1.0);
  return (k2 * f2 - k1 * f1) / (k2 - k1);
}

}  // namespace singap
