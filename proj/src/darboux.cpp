#include "singap/darboux.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <boost/math/tools/toms748_solve.hpp>

#include "singap/baker_akhiezer.hpp"
#include "singap/error.hpp"

namespace singap {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr cplx kI{0.0, 1.0};

cplx cauchy_first_derivative(const std::function<cplx(cplx)>& f, cplx x, double r, int samples = 32) {
  cplx acc = 0.0;
  for (int j = 0; j < samples; ++j) {
    const double th = 2.0 * kPi * j / samples;
    acc += f(x + r * std::polar(1.0, th)) * std::polar(1.0, -th);
  }
  return acc / (static_cast<double>(samples) * r);
}

int ladder_level(double coefficient) {
  return static_cast<int>(std::lround(0.5 * (std::sqrt(1.0 + 4.0 * coefficient) - 1.0)));
}

}  // namespace

CrumPotential::CrumPotential(std::shared_ptr<const Potential> base, double lambda, double anchor,
                             std::array<cplx, 2> eta, std::vector<double> zeros)
    : base_(std::move(base)), lambda_(lambda), anchor_(anchor), eta_(eta), zeros_(std::move(zeros)) {
  if (!base_) throw Error(ErrorCode::ConfigInvalid, "Crum step needs a base potential");
  if (eta_[0] == cplx(0.0)) throw Error(ErrorCode::EtaVanishesOnGrid, "eta vanishes at its anchor");
  const double T = base_->period();
  const double scale = T > 0 ? T : 1.0;
  double im = INFINITY;
  for (const cplx& s : base_->singularities(anchor_ - 2.0 * scale, anchor_ + 2.0 * scale, 2.0 * scale))
    if (std::abs(s.imag()) > 1e-9 * scale) im = std::min(im, std::abs(s.imag()));
  lift_ = std::min(0.25 * scale, 0.5 * im);
}

std::string CrumPotential::name() const { return "crum(" + base_->name() + ")"; }

std::vector<RealPole> CrumPotential::real_poles() const {
  auto poles = base_->real_poles();
  for (double z : zeros_) {
    bool merged = false;
    for (auto& p : poles) {
      if (std::abs(p.position - z) < 1e-9 * std::max(1.0, period())) {
        const int j = ladder_level(p.coefficient) + 1;
        p.coefficient = double(j) * (j + 1);
        merged = true;
      }
    }
    if (!merged) poles.push_back({z, 2.0});
  }
  return poles;
}

std::vector<cplx> CrumPotential::singularities(double lo, double hi, double height) const {
  auto out = base_->singularities(lo, hi, height);
  const double T = period();
  for (double z : zeros_) {
    if (T > 0) {
      for (double m = std::floor((lo - z) / T); z + m * T <= hi; m += 1.0)
        if (z + m * T >= lo) out.push_back(z + m * T);
    } else if (z >= lo && z <= hi) {
      out.push_back(z);
    }
  }
  return out;
}

void CrumPotential::aux_init(cplx x0, cplx* aux) const {
  const std::size_t nb = base_->aux_size();
  if (nb > 0) base_->aux_init(x0, aux);
  if (x0 == cplx(anchor_)) {
    aux[nb] = eta_[0];
    aux[nb + 1] = eta_[1];
    return;
  }
  const double sgn = x0.imag() < 0 ? -1.0 : 1.0;
  const double h = std::max(lift_, std::abs(x0.imag()));
  const Path path{anchor_, cplx(anchor_, sgn * h), cplx(x0.real(), sgn * h), x0};
  const auto e = integrate_solution(*base_, lambda_, path, eta_);
  aux[nb] = e[0];
  aux[nb + 1] = e[1];
}

void CrumPotential::aux_rhs(cplx x, const cplx* aux, cplx* daux) const {
  const std::size_t nb = base_->aux_size();
  if (nb > 0) base_->aux_rhs(x, aux, daux);
  daux[nb] = aux[nb + 1];
  daux[nb + 1] = (base_->value(x, nb > 0 ? aux : nullptr) - lambda_) * aux[nb];
}

cplx CrumPotential::value(cplx x, const cplx* aux) const {
  const std::size_t nb = base_->aux_size();
  const cplx a = aux[nb + 1] / aux[nb];
  return -base_->value(x, nb > 0 ? aux : nullptr) + 2.0 * lambda_ + 2.0 * a * a;
}

std::array<cplx, 2> CrumPotential::eta(cplx x) const {
  std::vector<cplx> aux(aux_size());
  aux_init(x, aux.data());
  const std::size_t nb = base_->aux_size();
  return {aux[nb], aux[nb + 1]};
}

cplx CrumPotential::log_derivative(cplx x) const {
  const auto e = eta(x);
  return e[1] / e[0];
}

std::array<cplx, 2> CrumPotential::map_with(cplx a, double lambda, double mu, std::array<cplx, 2> f) {
  return {f[1] - a * f[0], (lambda - mu + a * a) * f[0] - a * f[1]};
}

std::array<cplx, 2> CrumPotential::map(cplx x, double mu, std::array<cplx, 2> f) const {
  return map_with(log_derivative(x), lambda_, mu, f);
}

std::vector<cplx> CrumPotential::sample(const std::vector<cplx>& xs, double clearance) const {
  const double T = period();
  std::vector<cplx> out;
  out.reserve(xs.size());
  for (const cplx& x : xs) {
    for (double z : zeros_) {
      double d = x.real() - z;
      if (T > 0) d = std::remainder(d, T);
      if (std::abs(cplx(d, x.imag())) < clearance)
        throw Error(ErrorCode::EtaVanishesOnGrid, "grid point at a zero of eta, x = " + std::to_string(x.real()));
    }
    out.push_back((*this)(x));
  }
  return out;
}

std::shared_ptr<CrumPotential> crum_step(std::shared_ptr<const Potential> base, double lambda,
                                         const std::function<cplx(cplx)>& eta,
                                         const std::function<cplx(cplx)>& eta_x, double anchor,
                                         std::vector<double> zeros) {
  return std::make_shared<CrumPotential>(std::move(base), lambda, anchor, std::array<cplx, 2>{eta(anchor), eta_x(anchor)},
                                         std::move(zeros));
}

FactorizationResidual factorization_residual(const CrumPotential& step, const std::vector<cplx>& xs, double radius) {
  FactorizationResidual r;
  const double lam = step.lambda();
  for (const cplx& x : xs) {
    const cplx a = step.log_derivative(x);
    const cplx da = cauchy_first_derivative([&](cplx y) { return step.log_derivative(y); }, x, radius);
    const cplx U = step.base()(x);
    const cplx Ut = step(x);
    const double scale = std::max({std::abs(a * a), std::abs(U), std::abs(lam), 1.0});
    r.riccati = std::max(r.riccati, std::abs(da + a * a - U + lam) / scale);
    r.dressed = std::max(r.dressed, std::abs(Ut - (a * a - da + lam)) / scale);
  }
  return r;
}

std::vector<double> dirichlet_spectrum(const Potential& pot, double x0, double lo, int count) {
  using boost::math::tools::eps_tolerance;
  using boost::math::tools::toms748_solve;
  const double T = pot.period();
  if (!(T > 0)) throw Error(ErrorCode::ConfigInvalid, "Dirichlet spectrum needs a periodic potential");
  if (!pot.real_poles().empty()) throw Error(ErrorCode::ConfigInvalid, "Dirichlet spectrum needs a smooth potential");
  double umin = INFINITY;
  for (int j = 0; j < 256; ++j) umin = std::min(umin, pot(x0 + T * j / 256.0).real());
  const Path path{x0, x0 + T};
  auto m01 = [&](double l) { return integrate_solution(pot, l, path, {0.0, 1.0})[0].real(); };

  std::vector<double> out;
  double l = std::max(lo, umin - 1e-9);
  double f = m01(l);
  const double dk = 2.0 * kPi / T;
  const double l_max = umin + std::pow((count + 8) * dk, 2);
  while (static_cast<int>(out.size()) < count) {
    if (l > l_max) throw Error(ErrorCode::GroundStateNotFound, "Dirichlet eigenvalues not bracketed");
    const double k = std::max(std::sqrt(std::max(l - umin, 0.0)), dk);
    const double next = l + k * dk / 12.0;
    const double g = m01(next);
    if ((f > 0) != (g > 0)) {
      std::uintmax_t it = 100;
      auto r = toms748_solve(m01, l, next, f, g, eps_tolerance<double>(50), it);
      out.push_back(0.5 * (r.first + r.second));
    }
    l = next;
    f = g;
  }
  return out;
}

CrumChain crum_chain(std::shared_ptr<const Potential> seed, int r, double x0, double lo, int extra_levels) {
  const double T = seed->period();
  CrumChain ch;
  ch.seed = seed;
  ch.x0 = x0;
  ch.dirichlet = dirichlet_spectrum(*seed, x0, lo, r + extra_levels);
  const double xa = x0 + 0.5 * T;
  std::vector<std::array<cplx, 2>> f;
  for (int i = 0; i < r; ++i) f.push_back(integrate_solution(*seed, ch.dirichlet[i], Path{x0, xa}, {0.0, 1.0}));

  std::shared_ptr<const Potential> level = seed;
  for (int j = 0; j < r; ++j) {
    // ground state of the current level: no sign change on (x0, x0 + T)
    for (double end : {x0 + 0.01 * T, x0 + 0.99 * T}) {
      std::vector<std::pair<cplx, std::array<cplx, 2>>> trace;
      integrate_solution(*level, ch.dirichlet[j], Path{xa, end}, f[j], {}, &trace);
      const double s0 = f[j][0].real();
      for (const auto& [x, v] : trace)
        if (v[0].real() * s0 <= 0.0)
          throw Error(ErrorCode::GroundStateNotFound, "seed eigenfunction changes sign inside the period");
    }
    auto step = std::make_shared<CrumPotential>(level, ch.dirichlet[j], xa, f[j], std::vector<double>{x0});
    const cplx a = f[j][1] / f[j][0];
    for (int i = j + 1; i < r; ++i) f[i] = CrumPotential::map_with(a, ch.dirichlet[j], ch.dirichlet[i], f[i]);
    ch.steps.push_back(step);
    ch.removed.push_back(ch.dirichlet[j]);
    level = step;
  }
  return ch;
}

cplx pole_coefficient(const Potential& pot, cplx x0, double r, int samples) {
  cplx acc = 0.0;
  for (int j = 0; j < samples; ++j) {
    const cplx e = std::polar(1.0, 2.0 * kPi * j / samples);
    acc += pot(x0 + r * e) * e * e;
  }
  return acc * (r * r / samples);
}

// ---------------------------------------------------------------------------
// Degenerate catalog

std::vector<CatalogEntry> degenerate_catalog(double c) {
  std::vector<double> xs;
  for (int j = 0; j < 20; ++j) xs.push_back((0.3 + 2.7 * j / 19.0) / c);
  std::vector<double> xs_sin;
  for (int j = 0; j < 20; ++j) xs_sin.push_back((0.3 + (kPi - 0.6) * j / 19.0) / c);

  std::vector<CatalogEntry> out;
  out.push_back({"a: 2c^2/sinh^2(cx), 1/sinh(cx)",
                 [c](cplx x) { const cplx s = std::sinh(c * x); return 2.0 * c * c / (s * s); },
                 [c](cplx x) { return 1.0 / std::sinh(c * x); }, -c * c, xs, 0.0});
  out.push_back({"b: 2/x^2, 1/x", [](cplx x) { return 2.0 / (x * x); }, [](cplx x) { return 1.0 / x; }, 0.0, xs,
                 0.0});
  out.push_back({"c: 2c^2/sin^2(cx), 1/sin(cx)",
                 [c](cplx x) { const cplx s = std::sin(c * x); return 2.0 * c * c / (s * s); },
                 [c](cplx x) { return 1.0 / std::sin(c * x); }, c * c, xs_sin, kPi / c});
  out.push_back({"c: 2c^2/sin^2(cx), cos(cx)/sin(cx)",
                 [c](cplx x) { const cplx s = std::sin(c * x); return 2.0 * c * c / (s * s); },
                 [c](cplx x) { return std::cos(c * x) / std::sin(c * x); }, 0.0, xs_sin, kPi / c});
  return out;
}

std::vector<CatalogResult> degenerate_catalog_check(double c, double tol) {
  std::vector<CatalogResult> out;
  for (const auto& e : degenerate_catalog(c)) {
    CatalogResult r;
    r.name = e.name;
    for (double x : e.xs) {
      double dist = std::abs(x);
      if (e.pole_spacing > 0) dist = std::abs(std::remainder(x, e.pole_spacing));
      const double rad = 0.3 * std::min(dist, 1.0 / c);
      const cplx v = e.psi(x);
      const cplx d2 = cauchy_second_derivative(e.psi, x, rad, 64);
      const cplx Uv = e.U(x) * v;
      const double scale = std::max({std::abs(d2), std::abs(Uv), std::abs(e.lambda * v)});
      r.max_residual = std::max(r.max_residual, std::abs(-d2 + Uv - e.lambda * v) / scale);
    }
    r.pass = r.max_residual < tol;
    out.push_back(r);
  }
  return out;
}

}  // namespace singap
