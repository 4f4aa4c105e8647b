#pragma once

#include <array>
#include <complex>

namespace singap {

using cplx = std::complex<double>;

/// Period lattice of the Weierstrass functions, given by two half-periods
/// omega1, omega2 with Im(omega2/omega1) > 0.
///
/// Evaluation uses Jacobi theta quotients on an internally Gauss-reduced
/// basis (so the nome satisfies |q| <= exp(-pi*sqrt(3)/2)) after reducing the
/// argument to the fundamental cell. The functions depend only on the lattice,
/// so the user-facing basis is kept verbatim.
class Lattice {
 public:
  Lattice(cplx omega1, cplx omega2, double pole_eps_rel = 1e-6);

  cplx omega1() const { return omega1_; }
  cplx omega2() const { return omega2_; }
  cplx g2() const { return g2_; }
  cplx g3() const { return g3_; }
  /// e1 = wp(omega1), e2 = wp(omega1 + omega2), e3 = wp(omega2).
  cplx e1() const { return e_[0]; }
  cplx e2() const { return e_[1]; }
  cplx e3() const { return e_[2]; }
  /// zeta(omega1), zeta(omega2).
  cplx eta1() const { return eta1_; }
  cplx eta2() const { return eta2_; }

  /// Length of the shortest nonzero lattice vector.
  double shortest_vector() const { return shortest_; }
  /// Smallest positive real lattice vector (0 if the lattice has none).
  double real_period() const { return real_period_; }
  /// Half of the smallest purely imaginary lattice vector (0 if none).
  cplx imaginary_half_period() const { return imag_half_; }
  bool is_rectangular() const;

  double pole_eps() const { return pole_eps_rel_ * shortest_; }

  cplx wp(cplx x) const;
  cplx wp_prime(cplx x) const;
  cplx zeta(cplx x) const;
  cplx sigma(cplx x) const;

  /// Distance from x to the nearest lattice point.
  double distance_to_lattice(cplx x) const;

 private:
  struct Reduced {
    cplx z0;   // representative in the fundamental cell
    cplx big;  // shift 2*(m*w1 + n*w2) in the reduced basis
    long m = 0, n = 0;
  };
  struct Theta {
    cplx t0, t1, t2, t3;  // theta_1 and its first three v-derivatives
  };

  Reduced reduce(cplx x) const;
  Theta theta1(cplx v) const;
  void check_pole(const Reduced& r, cplx x) const;

  cplx omega1_, omega2_;
  double pole_eps_rel_;
  // reduced basis and theta data
  cplx w1_, w2_, q14_, q_;
  cplx rw1_, rw2_;  // eta values in the reduced basis
  cplx theta1p0_;
  cplx g2_, g3_, eta1_, eta2_;
  std::array<cplx, 3> e_{};
  double shortest_ = 0.0, real_period_ = 0.0;
  cplx imag_half_{};
};

cplx wp(cplx x, const Lattice& lat);
cplx wp_prime(cplx x, const Lattice& lat);
cplx zeta_fn(cplx x, const Lattice& lat);
cplx sigma_fn(cplx x, const Lattice& lat);

/// Lattice whose Lame n=1 operator -d^2 + 2*wp(x) + shift has band edges at
/// the three branch points (monic curve w^2 = (u-u0)(u-u1)(u-u2)).
///
/// Convention: shift = (u0+u1+u2)/3 and the branch values satisfy
/// u_i = shift - e_{i+1}, so the lowest branch point pairs with the largest
/// Weierstrass root. For real sorted input the lattice is rectangular with
/// omega1 real.
struct ShiftedLattice {
  Lattice lattice;
  double shift;
};

ShiftedLattice lattice_from_branch_points(double u0, double u1, double u2);

/// Same dictionary for a real curve with one complex-conjugate pair and one
/// real branch point; the resulting lattice is rhombic with |omega1| =
/// |omega2| and omega1 + omega2 real.
ShiftedLattice lattice_from_branch_points(const std::array<cplx, 3>& u);

/// Inverse dictionary: branch points u_i = shift - e_i, sorted by real part.
std::array<cplx, 3> branch_points_of(const ShiftedLattice& sl);

/// Arithmetic-geometric mean with the "right" choice of square root at every
/// step, valid for complex arguments.
cplx agm(cplx a, cplx b);

/// Solves wp(alpha) = value for alpha in the fundamental cell by Newton
/// iteration seeded from the Laurent inversion near the pole.
cplx wp_inverse(cplx value, const Lattice& lat, cplx guess);

}  // namespace singap
