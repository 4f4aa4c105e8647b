#pragma once

#include <complex>
#include <set>
#include <utility>
#include <vector>

namespace singap {

using cplx = std::complex<double>;

enum class RealityClass { StrongReal, RealWithComplexPairs, NonReal };

/// Side from which a point on the real axis is approached. Strict rejects
/// points lying on a cut.
enum class Approach { Strict, Above, Below };

/// w^2 = R(u) = (u - u_0)...(u - u_2g).
///
/// Sheet + uses the product of principal square roots of (u - u_j). Its cuts
/// run along the finite gaps (u_{2k-1}, u_{2k}) and along (-inf, u_0); on the
/// zones [u_{2k}, u_{2k+1}] and [u_2g, inf) it is real, and positive for
/// u > u_2g.
class HyperellipticCurve {
 public:
  /// Real input must be strictly increasing; complex input must be closed
  /// under conjugation to be classified RealWithComplexPairs.
  explicit HyperellipticCurve(std::vector<cplx> branch_points);
  explicit HyperellipticCurve(const std::vector<double>& branch_points);

  int genus() const { return genus_; }
  RealityClass reality_class() const { return reality_; }
  const std::vector<cplx>& branch_points() const { return u_; }
  /// Real branch point u_j (StrongReal curves).
  double u(int j) const { return u_[j].real(); }

  cplx R(cplx u) const;
  /// sqrt(R) on sheet +, with boundary values on the cuts taken from the
  /// requested side.
  cplx sqrtR(cplx u, Approach side = Approach::Above) const;

  /// Gap k = (u_{2k-1}, u_{2k}) for k = 1..g.
  std::pair<double, double> gap(int k) const;
  /// Zone k = [u_{2k}, u_{2k+1}] for k = 0..g-1; zone g = [u_2g, inf).
  std::pair<double, double> zone(int k) const;
  /// True when real u lies strictly inside a gap or below u_0.
  bool on_cut(double u) const;
  /// Scale used for relative tolerances: max(1, u_2g - u_0).
  double scale() const;

 private:
  std::vector<cplx> u_;
  int genus_ = 0;
  RealityClass reality_ = RealityClass::StrongReal;
};

struct DivisorPoint {
  cplx alpha;
  int sheet = 1;  // +1 or -1
};

/// D = gamma_1 + ... + gamma_{g-r} + r*inf.
struct Divisor {
  std::vector<DivisorPoint> finite;
  int at_infinity = 0;

  int degree() const { return static_cast<int>(finite.size()) + at_infinity; }
  /// One finite point in every finite gap and none at infinity.
  bool is_proper(const HyperellipticCurve& c) const;
  /// Gap indices (1..g) that contain at least one finite point.
  std::set<int> occupied_gaps(const HyperellipticCurve& c) const;
};

/// dp = (u - p_1)...(u - p_g) du / (2 sqrt(R)), normalised to dk at infinity
/// (k = sqrt(u)) with vanishing gap-cycle periods.
struct QuasimomentumDifferential {
  HyperellipticCurve curve;
  std::vector<double> p_roots;

  cplx numerator(cplx u) const;
  cplx density(cplx u, Approach side = Approach::Above) const;
};

/// dmu = (u - alpha_1)...(u - alpha_{g-r}) du / (2 sqrt(R)).
struct MeasureDifferential {
  HyperellipticCurve curve;
  std::vector<cplx> alpha_roots;

  cplx numerator(cplx u) const;
  cplx density(cplx u, Approach side = Approach::Above) const;
};

MeasureDifferential measure_from_divisor(const HyperellipticCurve& c, const Divisor& d);

/// Solves the gap-cycle conditions for the numerator of dp. Throws
/// SingularLinearSystem or RootOutsideGap.
QuasimomentumDifferential compute_dp(const HyperellipticCurve& c);

/// Gap-cycle integral of dp over gap k, i.e. 2 * integral over the gap of
/// prod(u - p)/(2 sqrt|R|); zero for a correct dp.
double gap_period(const QuasimomentumDifferential& dp, int k);
/// Integral of dp along finite zone k from u_{2k} to u_{2k+1} (real).
double zone_increment(const QuasimomentumDifferential& dp, int k);

/// p(u) = integral of dp from u_0 to u on sheet +, along a path that stays in
/// the half plane of the requested side. Throws PathCrossesCut for Strict
/// points on a cut.
cplx quasimomentum(const QuasimomentumDifferential& dp, cplx u, Approach side = Approach::Strict);

/// Sign of prod(u - p)/prod(u - alpha) on zone k (k = g is the infinite
/// zone), checked at five interior points. Throws DivisorPointInsideZone.
int zone_sign(const QuasimomentumDifferential& dp, const MeasureDifferential& mu, int k);

/// Signs per zone 0..g obtained by walking left from the infinite zone (+):
/// crossing an empty gap flips the sign, crossing an occupied gap keeps it.
std::vector<int> intermediate_sign_assignment(int g, const std::set<int>& occupied_gaps);

/// Integral of f(u)/sqrt((u - a)(b - u)) over [a, b] via u = m + h sin(t).
template <class F>
auto chebyshev_weighted_integral(F&& f, double a, double b);

}  // namespace singap

#include "singap/detail/curve_quadrature.hpp"
