#include "singap/curve.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "singap/error.hpp"

namespace singap {

namespace {

constexpr cplx kI{0.0, 1.0};

cplx factor_sqrt(cplx d, Approach side) {
  if (d.imag() == 0.0 && d.real() < 0.0) {
    const double r = std::sqrt(-d.real());
    return side == Approach::Below ? cplx(0.0, -r) : cplx(0.0, r);
  }
  return std::sqrt(d);
}

// prod |u - u_j|^(-1/2) over the branch points other than a and b.
double outer_weight(const HyperellipticCurve& c, double u, int skip_a, int skip_b) {
  double w = 1.0;
  for (int j = 0; j <= 2 * c.genus(); ++j) {
    if (j == skip_a || j == skip_b) continue;
    w /= std::sqrt(std::abs(u - c.u(j)));
  }
  return w;
}

void require_strong_real(const HyperellipticCurve& c, const char* what) {
  if (c.reality_class() != RealityClass::StrongReal) {
    throw Error(ErrorCode::InvalidCurve, std::string(what) + " needs a curve with real branch points");
  }
}

}  // namespace

HyperellipticCurve::HyperellipticCurve(std::vector<cplx> bp) : u_(std::move(bp)) {
  if (u_.empty() || u_.size() % 2 == 0) {
    throw Error(ErrorCode::InvalidCurve, "need 2g+1 branch points");
  }
  genus_ = static_cast<int>(u_.size() - 1) / 2;
  double sc = 1.0;
  for (const cplx& v : u_) sc = std::max(sc, std::abs(v));
  for (std::size_t i = 0; i < u_.size(); ++i)
    for (std::size_t j = 0; j < i; ++j)
      if (std::abs(u_[i] - u_[j]) <= 1e-13 * sc) throw Error(ErrorCode::InvalidCurve, "coincident branch points");

  bool all_real = std::all_of(u_.begin(), u_.end(), [](cplx v) { return v.imag() == 0.0; });
  if (all_real) {
    for (std::size_t i = 1; i < u_.size(); ++i)
      if (!(u_[i - 1].real() < u_[i].real())) {
        throw Error(ErrorCode::BranchPointsNotSorted, "real branch points must increase");
      }
    reality_ = RealityClass::StrongReal;
    return;
  }
  std::sort(u_.begin(), u_.end(), [](cplx a, cplx b) {
    return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
  });
  bool closed = true;
  for (const cplx& v : u_) {
    const bool has = std::any_of(u_.begin(), u_.end(),
                                 [&](cplx w) { return std::abs(w - std::conj(v)) <= 1e-12 * sc; });
    closed = closed && has;
  }
  reality_ = closed ? RealityClass::RealWithComplexPairs : RealityClass::NonReal;
}

HyperellipticCurve::HyperellipticCurve(const std::vector<double>& bp)
    : HyperellipticCurve(std::vector<cplx>(bp.begin(), bp.end())) {}

cplx HyperellipticCurve::R(cplx u) const {
  cplx r = 1.0;
  for (const cplx& v : u_) r *= u - v;
  return r;
}

bool HyperellipticCurve::on_cut(double u) const {
  int above = 0;
  for (const cplx& v : u_) {
    if (v.imag() != 0.0) continue;
    if (v.real() == u) return false;
    if (v.real() > u) ++above;
  }
  return above % 2 == 1;
}

cplx HyperellipticCurve::sqrtR(cplx u, Approach side) const {
  if (side == Approach::Strict && u.imag() == 0.0 && on_cut(u.real())) {
    throw Error(ErrorCode::PathCrossesCut, "point lies on a branch cut");
  }
  cplx r = 1.0;
  for (const cplx& v : u_) r *= factor_sqrt(u - v, side);
  return r;
}

std::pair<double, double> HyperellipticCurve::gap(int k) const {
  if (k < 1 || k > genus_) throw Error(ErrorCode::ConfigInvalid, "gap index out of range");
  return {u(2 * k - 1), u(2 * k)};
}

std::pair<double, double> HyperellipticCurve::zone(int k) const {
  if (k < 0 || k > genus_) throw Error(ErrorCode::ConfigInvalid, "zone index out of range");
  if (k == genus_) return {u(2 * k), INFINITY};
  return {u(2 * k), u(2 * k + 1)};
}

double HyperellipticCurve::scale() const {
  return std::max(1.0, std::abs(u_.back().real() - u_.front().real()));
}

bool Divisor::is_proper(const HyperellipticCurve& c) const {
  if (at_infinity != 0 || static_cast<int>(finite.size()) != c.genus()) return false;
  for (int k = 1; k <= c.genus(); ++k) {
    const auto [a, b] = c.gap(k);
    int count = 0;
    for (const auto& p : finite)
      if (p.alpha.imag() == 0.0 && p.alpha.real() >= a && p.alpha.real() <= b) ++count;
    if (count != 1) return false;
  }
  return true;
}

std::set<int> Divisor::occupied_gaps(const HyperellipticCurve& c) const {
  std::set<int> s;
  for (int k = 1; k <= c.genus(); ++k) {
    const auto [a, b] = c.gap(k);
    for (const auto& p : finite)
      if (p.alpha.imag() == 0.0 && p.alpha.real() >= a && p.alpha.real() <= b) s.insert(k);
  }
  return s;
}

cplx QuasimomentumDifferential::numerator(cplx u) const {
  cplx r = 1.0;
  for (double p : p_roots) r *= u - p;
  return r;
}

cplx QuasimomentumDifferential::density(cplx u, Approach side) const {
  return numerator(u) / (2.0 * curve.sqrtR(u, side));
}

cplx MeasureDifferential::numerator(cplx u) const {
  cplx r = 1.0;
  for (const cplx& a : alpha_roots) r *= u - a;
  return r;
}

cplx MeasureDifferential::density(cplx u, Approach side) const {
  return numerator(u) / (2.0 * curve.sqrtR(u, side));
}

MeasureDifferential measure_from_divisor(const HyperellipticCurve& c, const Divisor& d) {
  if (d.degree() != c.genus()) throw Error(ErrorCode::ConfigInvalid, "divisor degree must equal the genus");
  MeasureDifferential m{c, {}};
  for (const auto& p : d.finite) m.alpha_roots.push_back(p.alpha);
  return m;
}

QuasimomentumDifferential compute_dp(const HyperellipticCurve& c) {
  require_strong_real(c, "compute_dp");
  const int g = c.genus();
  QuasimomentumDifferential dp{c, {}};
  if (g == 0) return dp;

  // Work in v = (u - mid)/half so that the monomials stay well scaled.
  const double mid = 0.5 * (c.u(0) + c.u(2 * g)), half = 0.5 * (c.u(2 * g) - c.u(0));
  Eigen::MatrixXd A(g, g);
  Eigen::VectorXd rhs(g);
  for (int k = 1; k <= g; ++k) {
    const auto [a, b] = c.gap(k);
    for (int i = 0; i <= g; ++i) {
      const double val = chebyshev_weighted_integral(
          [&](double u) { return std::pow((u - mid) / half, i) * outer_weight(c, u, 2 * k - 1, 2 * k); }, a, b);
      if (i < g)
        A(k - 1, i) = val;
      else
        rhs(k - 1) = -val;
    }
  }
  Eigen::FullPivLU<Eigen::MatrixXd> lu(A);
  if (lu.rank() < g || std::abs(lu.rcond()) < 1e-14) {
    throw Error(ErrorCode::SingularLinearSystem, "gap-cycle system is singular");
  }
  const Eigen::VectorXd coef = lu.solve(rhs);

  Eigen::MatrixXd comp = Eigen::MatrixXd::Zero(g, g);
  for (int i = 1; i < g; ++i) comp(i, i - 1) = 1.0;
  for (int i = 0; i < g; ++i) comp(i, g - 1) = -coef(i);
  Eigen::EigenSolver<Eigen::MatrixXd> es(comp, false);
  std::vector<double> roots;
  for (int i = 0; i < g; ++i) {
    const cplx r = es.eigenvalues()(i);
    if (std::abs(r.imag()) > 1e-9) throw Error(ErrorCode::RootOutsideGap, "complex numerator root");
    roots.push_back(mid + half * r.real());
  }
  std::sort(roots.begin(), roots.end());
  for (int k = 1; k <= g; ++k) {
    const auto [a, b] = c.gap(k);
    const double tol = 1e-10 * (b - a);
    if (roots[k - 1] < a - tol || roots[k - 1] > b + tol) {
      throw Error(ErrorCode::RootOutsideGap, "numerator root outside its gap");
    }
  }
  dp.p_roots = roots;
  return dp;
}

double gap_period(const QuasimomentumDifferential& dp, int k) {
  const auto& c = dp.curve;
  const auto [a, b] = c.gap(k);
  return chebyshev_weighted_integral(
      [&](double u) { return dp.numerator(u).real() * outer_weight(c, u, 2 * k - 1, 2 * k); }, a, b);
}

double zone_increment(const QuasimomentumDifferential& dp, int k) {
  const auto& c = dp.curve;
  require_strong_real(c, "zone_increment");
  if (k < 0 || k >= c.genus()) throw Error(ErrorCode::ConfigInvalid, "finite zone index out of range");
  const auto [a, b] = c.zone(k);
  const double sign = (c.genus() - k) % 2 == 0 ? 1.0 : -1.0;
  return chebyshev_weighted_integral(
      [&](double u) { return sign * dp.numerator(u).real() * outer_weight(c, u, 2 * k, 2 * k + 1) / 2.0; }, a, b);
}

cplx quasimomentum(const QuasimomentumDifferential& dp, cplx u, Approach side) {
  using boost::math::quadrature::gauss_kronrod;
  const auto& c = dp.curve;
  require_strong_real(c, "quasimomentum");
  if (u.imag() == 0.0 && side == Approach::Strict && c.on_cut(u.real())) {
    throw Error(ErrorCode::PathCrossesCut, "endpoint lies on a branch cut");
  }
  const double sgn = u.imag() != 0.0 ? (u.imag() > 0 ? 1.0 : -1.0) : (side == Approach::Below ? -1.0 : 1.0);
  const Approach path_side = sgn > 0 ? Approach::Above : Approach::Below;
  const double u0 = c.u(0);
  const double Hm = std::max({1.0, 0.5 * (c.u(2 * c.genus()) - u0), std::abs(u.imag()) + 1.0});
  const cplx H = sgn * kI * Hm;

  auto f = [&](cplx v) { return dp.density(v, path_side); };
  constexpr double tol = 1e-13;
  // u0 -> u0 + H with v = u0 + sgn*i*s^2
  const cplx leg1 = gauss_kronrod<double, 31>::integrate(
      [&](double s) { return f(u0 + sgn * kI * s * s) * (2.0 * sgn * kI * s); }, 0.0, std::sqrt(Hm), 15, tol);
  // horizontal
  const double len = u.real() - u0;
  cplx leg2 = 0.0;
  if (len != 0.0) {
    leg2 = gauss_kronrod<double, 31>::integrate([&](double t) { return f(u0 + t + H); }, 0.0, len, 15, tol);
  }
  // u.real + H -> u with v = u + sgn*i*s^2
  const double D = Hm - sgn * u.imag();
  const cplx leg3 = gauss_kronrod<double, 31>::integrate(
      [&](double s) { return f(u + sgn * kI * s * s) * (-2.0 * sgn * kI * s); }, 0.0, std::sqrt(D), 15, tol);
  return leg1 + leg2 + leg3;
}

int zone_sign(const QuasimomentumDifferential& dp, const MeasureDifferential& mu, int k) {
  const auto& c = dp.curve;
  require_strong_real(c, "zone_sign");
  const auto [a, b] = c.zone(k);
  for (const cplx& al : mu.alpha_roots) {
    if (al.imag() != 0.0) throw Error(ErrorCode::InvalidCurve, "divisor point off the real axis");
    if (al.real() > a && al.real() < b) {
      throw Error(ErrorCode::DivisorPointInsideZone, "divisor point inside a spectral zone");
    }
  }
  auto point = [&](int j) { return std::isinf(b) ? a + j : a + (b - a) * j / 6.0; };
  auto sign_at = [&](double u) {
    const double r = dp.numerator(u).real() / mu.numerator(u).real();
    return r > 0 ? 1 : -1;
  };
  const int s = std::isinf(b) ? sign_at(a + 1.0) : sign_at(0.5 * (a + b));
  for (int j = 1; j <= 5; ++j)
    if (sign_at(point(j)) != s) {
      throw Error(ErrorCode::DivisorPointInsideZone, "sign of dp/dmu changes inside the zone");
    }
  return s;
}

std::vector<int> intermediate_sign_assignment(int g, const std::set<int>& occupied_gaps) {
  std::vector<int> s(g + 1, 1);
  for (int k = g; k >= 1; --k) s[k - 1] = occupied_gaps.count(k) ? s[k] : -s[k];
  return s;
}

}  // namespace singap
