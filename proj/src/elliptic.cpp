#include "singap/elliptic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <utility>
#include <vector>

#include "singap/error.hpp"

namespace singap {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr cplx kI{0.0, 1.0};

bool close_multiset(std::array<cplx, 3> a, std::array<cplx, 3> b, double tol) {
  // Greedy matching is enough for three well-separated roots.
  std::array<bool, 3> used{false, false, false};
  for (const cplx& x : a) {
    bool found = false;
    for (int j = 0; j < 3; ++j) {
      if (!used[j] && std::abs(x - b[j]) <= tol) {
        used[j] = true;
        found = true;
        break;
      }
    }
    if (!found) return false;
  }
  return true;
}

}  // namespace

Lattice::Lattice(cplx omega1, cplx omega2, double pole_eps_rel)
    : omega1_(omega1), omega2_(omega2), pole_eps_rel_(pole_eps_rel) {
  if (std::abs(omega1) == 0.0 || !(std::imag(omega2 / omega1) > 0.0)) {
    throw Error(ErrorCode::LatticeDegenerate, "Im(omega2/omega1) must be positive");
  }
  // Gauss reduction of the full periods.
  cplx a = 2.0 * omega1, b = 2.0 * omega2;
  for (int it = 0; it < 200; ++it) {
    if (std::abs(b) < std::abs(a)) std::swap(a, b);
    const double mu = std::round(std::real(b * std::conj(a)) / std::norm(a));
    if (mu == 0.0) break;
    b -= mu * a;
  }
  if (std::imag(b / a) < 0.0) b = -b;
  w1_ = a / 2.0;
  w2_ = b / 2.0;
  shortest_ = std::abs(a);

  const cplx tau = w2_ / w1_;
  q_ = std::exp(kI * kPi * tau);
  q14_ = std::exp(kI * kPi * tau / 4.0);

  cplx s1 = 0.0, s3 = 0.0;
  for (int n = 0; n < 40; ++n) {
    const double k = 2.0 * n + 1.0;
    const cplx c = (n % 2 == 0 ? 1.0 : -1.0) * std::pow(q_, double(n) * (n + 1));
    s1 += c * k;
    s3 += c * k * k * k;
    if (std::abs(c) * k * k * k < 1e-18 * std::abs(s1)) break;
  }
  theta1p0_ = 2.0 * q14_ * s1;
  const cplx theta1ppp0 = -2.0 * q14_ * s3;
  rw1_ = -(kPi * kPi / (12.0 * w1_)) * theta1ppp0 / theta1p0_;
  rw2_ = (rw1_ * w2_ - kI * kPi / 2.0) / w1_;

  // Real and imaginary periods by a small search over the reduced basis.
  real_period_ = 0.0;
  imag_half_ = 0.0;
  double best_imag = 0.0;
  for (int m = -6; m <= 6; ++m) {
    for (int n = -6; n <= 6; ++n) {
      if (m == 0 && n == 0) continue;
      const cplx v = double(m) * a + double(n) * b;
      const double tol = 1e-12 * std::abs(v);
      if (std::abs(v.imag()) <= tol && v.real() > 0.0) {
        if (real_period_ == 0.0 || v.real() < real_period_) real_period_ = v.real();
      }
      if (std::abs(v.real()) <= tol && v.imag() > 0.0) {
        if (best_imag == 0.0 || v.imag() < best_imag) best_imag = v.imag();
      }
    }
  }
  imag_half_ = cplx(0.0, best_imag / 2.0);

  e_[0] = wp(omega1_);
  e_[1] = wp(omega1_ + omega2_);
  e_[2] = wp(omega2_);
  g2_ = 2.0 * (e_[0] * e_[0] + e_[1] * e_[1] + e_[2] * e_[2]);
  g3_ = 4.0 * e_[0] * e_[1] * e_[2];
  eta1_ = zeta(omega1_);
  eta2_ = zeta(omega2_);
}

bool Lattice::is_rectangular() const {
  return std::abs(std::real(omega2_ / omega1_)) < 1e-12 &&
         std::abs(std::imag(omega1_)) < 1e-12 * std::abs(omega1_);
}

Lattice::Reduced Lattice::reduce(cplx x) const {
  const cplx A = 2.0 * w1_, B = 2.0 * w2_;
  const double det = A.real() * B.imag() - A.imag() * B.real();
  const double s = (x.real() * B.imag() - x.imag() * B.real()) / det;
  const double t = (A.real() * x.imag() - A.imag() * x.real()) / det;
  Reduced r;
  r.m = std::lround(s);
  r.n = std::lround(t);
  r.big = double(r.m) * A + double(r.n) * B;
  r.z0 = x - r.big;
  return r;
}

Lattice::Theta Lattice::theta1(cplx v) const {
  Theta th{0.0, 0.0, 0.0, 0.0};
  const double growth = std::abs(v.imag());
  for (int n = 0; n < 60; ++n) {
    const double k = 2.0 * n + 1.0;
    const cplx c = (n % 2 == 0 ? 1.0 : -1.0) * std::pow(q_, double(n) * (n + 1));
    const cplx s = std::sin(k * v), co = std::cos(k * v);
    th.t0 += c * s;
    th.t1 += c * k * co;
    th.t2 -= c * k * k * s;
    th.t3 -= c * k * k * k * co;
    if (n > 1 && std::abs(c) * std::exp(k * growth) * k * k * k < 1e-18) break;
  }
  const cplx f = 2.0 * q14_;
  th.t0 *= f;
  th.t1 *= f;
  th.t2 *= f;
  th.t3 *= f;
  return th;
}

double Lattice::distance_to_lattice(cplx x) const {
  const Reduced r = reduce(x);
  double d = std::abs(r.z0);
  const cplx A = 2.0 * w1_, B = 2.0 * w2_;
  for (int m = -1; m <= 1; ++m)
    for (int n = -1; n <= 1; ++n) d = std::min(d, std::abs(r.z0 - double(m) * A - double(n) * B));
  return d;
}

void Lattice::check_pole(const Reduced& r, cplx x) const {
  (void)r;
  if (distance_to_lattice(x) < pole_eps()) {
    throw Error(ErrorCode::PoleProximity, "argument within pole tolerance of a lattice point");
  }
}

cplx Lattice::wp(cplx x) const {
  const Reduced r = reduce(x);
  check_pole(r, x);
  const cplx scale = kPi / (2.0 * w1_);
  const Theta th = theta1(scale * r.z0);
  return -rw1_ / w1_ + scale * scale * (th.t1 * th.t1 - th.t0 * th.t2) / (th.t0 * th.t0);
}

cplx Lattice::wp_prime(cplx x) const {
  const Reduced r = reduce(x);
  check_pole(r, x);
  const cplx scale = kPi / (2.0 * w1_);
  const Theta th = theta1(scale * r.z0);
  const cplx num = th.t3 * th.t0 * th.t0 - 3.0 * th.t0 * th.t1 * th.t2 + 2.0 * th.t1 * th.t1 * th.t1;
  return -scale * scale * scale * num / (th.t0 * th.t0 * th.t0);
}

cplx Lattice::zeta(cplx x) const {
  const Reduced r = reduce(x);
  check_pole(r, x);
  const cplx scale = kPi / (2.0 * w1_);
  const Theta th = theta1(scale * r.z0);
  const cplx z0 = rw1_ * r.z0 / w1_ + scale * th.t1 / th.t0;
  return z0 + 2.0 * (double(r.m) * rw1_ + double(r.n) * rw2_);
}

cplx Lattice::sigma(cplx x) const {
  const Reduced r = reduce(x);
  const cplx scale = kPi / (2.0 * w1_);
  const Theta th = theta1(scale * r.z0);
  const cplx s0 = (2.0 * w1_ / kPi) * std::exp(rw1_ * r.z0 * r.z0 / (2.0 * w1_)) * th.t0 / theta1p0_;
  if (r.m == 0 && r.n == 0) return s0;
  const cplx eta_big = double(r.m) * rw1_ + double(r.n) * rw2_;
  const cplx half = double(r.m) * w1_ + double(r.n) * w2_;
  const long parity = r.m + r.n + r.m * r.n;
  const double sign = (parity % 2 == 0) ? 1.0 : -1.0;
  return sign * std::exp(2.0 * eta_big * (r.z0 + half)) * s0;
}

cplx wp(cplx x, const Lattice& lat) { return lat.wp(x); }
cplx wp_prime(cplx x, const Lattice& lat) { return lat.wp_prime(x); }
cplx zeta_fn(cplx x, const Lattice& lat) { return lat.zeta(x); }
cplx sigma_fn(cplx x, const Lattice& lat) { return lat.sigma(x); }

cplx agm(cplx a, cplx b) {
  for (int it = 0; it < 100; ++it) {
    if (std::abs(a - b) <= 1e-16 * std::abs(a)) break;
    const cplx an = (a + b) / 2.0;
    cplx bn = std::sqrt(a * b);
    if (std::abs(an - bn) > std::abs(an + bn)) bn = -bn;
    a = an;
    b = bn;
  }
  return a;
}

ShiftedLattice lattice_from_branch_points(double u0, double u1, double u2) {
  if (!(u0 < u1 && u1 < u2)) {
    throw Error(ErrorCode::BranchPointsNotSorted, "expected u0 < u1 < u2");
  }
  const double s = (u0 + u1 + u2) / 3.0;
  const double e1 = s - u0, e2 = s - u1, e3 = s - u2;
  const double w1 = kPi / (2.0 * std::real(agm(std::sqrt(e1 - e3), std::sqrt(e1 - e2))));
  const double w2 = kPi / (2.0 * std::real(agm(std::sqrt(e1 - e3), std::sqrt(e2 - e3))));
  return ShiftedLattice{Lattice(cplx(w1, 0.0), cplx(0.0, w2)), s};
}

ShiftedLattice lattice_from_branch_points(const std::array<cplx, 3>& u) {
  const double scale = std::max({std::abs(u[0]), std::abs(u[1]), std::abs(u[2]), 1.0});
  for (int i = 0; i < 3; ++i)
    for (int j = i + 1; j < 3; ++j)
      if (std::abs(u[i] - u[j]) < 1e-12 * scale)
        throw Error(ErrorCode::LatticeDegenerate, "coincident branch points");
  if (std::abs(u[0].imag()) + std::abs(u[1].imag()) + std::abs(u[2].imag()) == 0.0) {
    std::array<double, 3> r{u[0].real(), u[1].real(), u[2].real()};
    std::sort(r.begin(), r.end());
    return lattice_from_branch_points(r[0], r[1], r[2]);
  }
  const cplx sc = (u[0] + u[1] + u[2]) / 3.0;
  std::array<cplx, 3> e{sc - u[0], sc - u[1], sc - u[2]};

  // Candidate periods from the AGM over all root orderings.
  std::vector<cplx> cand;
  const std::array<std::array<int, 3>, 6> perms{
      {{0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}}};
  for (const auto& p : perms) {
    const cplx a = std::sqrt(e[p[0]] - e[p[2]]);
    const cplx b = std::sqrt(e[p[0]] - e[p[1]]);
    cand.push_back(kPi / agm(a, b));
  }
  const double tol = 1e-9 * std::max({std::abs(e[0]), std::abs(e[1]), std::abs(e[2])});
  for (std::size_t i = 0; i < cand.size(); ++i) {
    for (std::size_t j = 0; j < cand.size(); ++j) {
      cplx A = cand[i], B = cand[j];
      const double cross = std::imag(B / A);
      if (std::abs(cross) < 1e-6) continue;
      if (cross < 0) B = -B;
      if (A.real() < 0) {
        A = -A;
        B = -B;
        if (std::imag(B / A) < 0) B = -B;
      }
      Lattice trial(A / 2.0, B / 2.0);
      if (!close_multiset({trial.e1(), trial.e2(), trial.e3()}, e, tol)) continue;
      const double T = trial.real_period();
      if (T <= 0.0) return ShiftedLattice{trial, sc.real()};
      // Rhombic basis: primitive v with Re v = T/2, Im v < 0, |v| minimal.
      cplx best{};
      for (int m = -6; m <= 6; ++m) {
        for (int n = -6; n <= 6; ++n) {
          const cplx v = double(m) * A + double(n) * B;
          if (std::abs(v.real() - T / 2.0) < 1e-10 * T && v.imag() < 0.0 &&
              (best == cplx{} || std::abs(v) < std::abs(best)))
            best = v;
        }
      }
      if (best != cplx{}) {
        Lattice rh(best / 2.0, std::conj(best) / 2.0);
        if (close_multiset({rh.e1(), rh.e2(), rh.e3()}, e, tol)) return ShiftedLattice{rh, sc.real()};
      }
      return ShiftedLattice{trial, sc.real()};
    }
  }
  throw Error(ErrorCode::LatticeDegenerate, "could not recover a period basis");
}

std::array<cplx, 3> branch_points_of(const ShiftedLattice& sl) {
  std::array<cplx, 3> u{sl.shift - sl.lattice.e1(), sl.shift - sl.lattice.e2(),
                        sl.shift - sl.lattice.e3()};
  std::sort(u.begin(), u.end(), [](cplx a, cplx b) {
    if (a.real() != b.real()) return a.real() < b.real();
    return a.imag() < b.imag();
  });
  return u;
}

cplx wp_inverse(cplx value, const Lattice& lat, cplx guess) {
  cplx a = guess;
  if (a == cplx(0.0)) a = 1.0 / std::sqrt(value);
  for (int it = 0; it < 200; ++it) {
    const cplx f = lat.wp(a) - value;
    const cplx d = lat.wp_prime(a);
    cplx step = f / d;
    const double lim = 0.25 * lat.shortest_vector();
    if (std::abs(step) > lim) step *= lim / std::abs(step);
    a -= step;
    if (std::abs(step) < 1e-15 * std::max(1.0, std::abs(a))) break;
  }
  return a;
}

}  // namespace singap
