#pragma once

#include <complex>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "singap/curve.hpp"
#include "singap/elliptic.hpp"
#include "singap/spectral_ode.hpp"

namespace singap {

/// Psi(x, z) and its dual at one fixed spectral point z.
///
/// The pair is normalised so that W[Psi, Psi*] = Psi Psi*_x - Psi_x Psi* =
/// -i du/dmu, which is what makes the Cauchy-Baker-Akhiezer kernel have unit
/// residue on the diagonal. `dmu` is the coefficient of dmu against du.
struct BlochSolution {
  std::function<cplx(cplx)> psi, psi_x;
  std::function<cplx(cplx)> dual, dual_x;  // empty when no dual is available
  std::function<cplx(cplx)> phi;           // first correction, when known
  cplx u = 0.0;
  cplx multiplier = 1.0;    // kappa = exp(i T p)
  cplx p = 0.0;             // quasimomentum, defined modulo 2 pi / T
  cplx dmu = 0.0;           // dmu / du at z
  double period = 0.0;
  std::string divisor;      // human-readable description, e.g. "inf"
};

/// Psi*(x, z); throws DualDivisorUnavailable when the solution carries no dual.
cplx dual_psi(const BlochSolution& s, cplx x);

/// Genus 0: Psi = exp(ikx), Psi* = exp(-ikx), u = k^2, dmu = dk.
BlochSolution genus0_bloch(cplx k);

/// Lame n = 1 operator -d^2 + 2 wp(x) + s with divisor at infinity.
///
/// Points of the curve are parametrised by alpha on the torus:
/// u = s - wp(alpha), sqrt(R) = -i wp'(alpha) / 2. Psi = i psi_H with
/// psi_H(x) = sigma(alpha - x) / (sigma(x) sigma(alpha)) exp(zeta(alpha) x),
/// so Psi ~ k exp(ikx) and Psi*(x) = Psi(-x).
class Lame1Family {
 public:
  explicit Lame1Family(ShiftedLattice sl);
  static Lame1Family from_branch_points(double u0, double u1, double u2);

  const Lattice& lattice() const { return sl_.lattice; }
  double shift() const { return sl_.shift; }
  double period() const { return sl_.lattice.real_period(); }
  const HyperellipticCurve& curve() const { return curve_; }
  LamePotential potential() const;

  cplx u(cplx alpha) const;
  cplx sqrtR(cplx alpha) const;
  cplx multiplier(cplx alpha) const;
  cplx quasimomentum(cplx alpha) const;
  /// Root p_1 of dp = (u - p_1) du / (2 sqrt R).
  double p1() const;
  /// Point alpha with u(alpha) = u on the requested sheet of sqrt(R).
  cplx alpha_of(cplx u, int sheet, Approach side = Approach::Above) const;
  /// Point on the infinite zone with u = k^2, sheet +.
  cplx alpha_of_k(double k) const;

  /// Hermite solution psi_H and its x-derivative (not normalised).
  cplx hermite(cplx x, cplx alpha) const;
  cplx hermite_x(cplx x, cplx alpha) const;

  /// BA pair for D = inf. With `normalise_at` set, returns the pair for the
  /// shifted divisor D(x') instead: Psi(y) = Psi(y + x') / Psi(x') and the
  /// matching dual and dmu = (u - u(x')) du / (2 sqrt R).
  BlochSolution at(cplx alpha, std::optional<cplx> normalise_at = std::nullopt) const;

 private:
  ShiftedLattice sl_;
  HyperellipticCurve curve_;
};

/// Lame n = 1 Bloch solution at curve parameter alpha; the ODE residual is
/// verified on construction. Throws PoleProximity for lattice alpha.
BlochSolution lame1_bloch(cplx alpha, const ShiftedLattice& sl);

/// Bloch solutions of an arbitrary periodic potential obtained from the
/// monodromy eigenvectors at the regular basepoint x_b. Psi is normalised by
/// Psi(x_b) = 1, the dual by the Wronskian condition with the given dmu, so
/// products Psi Psi* do not depend on that choice.
class NumericalBlochFamily {
 public:
  NumericalBlochFamily(std::shared_ptr<const Potential> pot, QuasimomentumDifferential dp, MeasureDifferential dmu,
                       double eps_rel = 0.0, IntegrationOptions opt = {});

  /// Point (u, sheet) with sheet = +1 or -1; the multiplier is the
  /// eigenvalue whose u-derivative of p matches dp on that sheet.
  BlochSolution at(cplx u, int sheet, Approach side = Approach::Above) const;
  double basepoint() const { return st_->xb; }
  const Potential& potential() const { return *st_->pot; }

  /// (Psi, Psi') at x for initial data at the basepoint; the path leaves the
  /// real axis on the side of Im x.
  std::array<cplx, 2> propagate(cplx u, std::array<cplx, 2> init, cplx x) const;

 private:
  struct State {
    std::shared_ptr<const Potential> pot;
    QuasimomentumDifferential dp;
    MeasureDifferential dmu;
    double eps_rel;
    IntegrationOptions opt;
    double xb;
    std::array<cplx, 2> propagate(cplx u, std::array<cplx, 2> init, cplx x) const;
  };
  std::shared_ptr<const State> st_;  // shared with the closures handed out
};

/// Laurent data of an eigenfunction of n(n+1) wp at a pole.
struct LaurentReport {
  int n = 0;
  double radius = 0.0;
  int lowest_power = 0;            // coefficients[0] multiplies (x-x0)^lowest_power
  std::vector<cplx> coefficients;  // powers -n .. n+1
  std::vector<cplx> alpha;         // singular coefficients at -n, -n+2, ..., (-1 or -2)
  double spurious_max = 0.0;       // max |c_m| / |alpha_1| over forbidden powers
  bool pattern_ok = false;
  cplx coefficient(int power) const { return coefficients.at(power - lowest_power); }
};

/// Fits Laurent coefficients of f on a circle of the given radius about x0
/// (trapezoid rule, `samples` points) and checks the pattern: every power m
/// in [-n, n-1] with m + n odd must vanish. Throws FitIllConditioned when
/// the radius is too large for the next singularity at distance
/// `next_singularity` or so small that roundoff dominates the forbidden
/// coefficients.
LaurentReport laurent_structure(int n, const std::function<cplx(cplx)>& f, cplx x0, double radius,
                                double next_singularity, int samples = 64, double tol = 1e-6);

/// (1/2 pi i) times the contour integral of Psi(x,z) Psi*(x,w) over a circle
/// about x0. Throws ContourHitsSecondPole when another singularity lies
/// within twice the radius.
struct ResidueReport {
  cplx residue;
  double scale;     // radius * max |Psi Psi*| on the circle
  double relative;  // |residue| / scale
};
ResidueReport residue_product_check(const BlochSolution& z, const BlochSolution& w, const Potential& pot,
                                    double x0, double radius, int samples = 64);

/// omega(x,z,w) = i (Psi Psi*_x - Psi_x Psi*) / (u(w) - u(z)) * dmu(w), as
/// the coefficient against du(w). Throws DiagonalEvaluation when u(w) and
/// u(z) coincide to `diag_tol` relative.
cplx cba_kernel_hyperelliptic(cplx x, const BlochSolution& z, const BlochSolution& w, double diag_tol = 1e-12);

/// |d omega/dx + i Psi(x,z) Psi*(x,w) dmu(w)| with a five-point difference
/// in x at steps h and h/2, Richardson-combined.
double fundamental_lemma_residual(cplx x, const BlochSolution& z, const BlochSolution& w, double h = 1e-2);

/// |omega(x+T)/omega(x) - exp(i (p(z) - p(w)) T)|.
double periodicity_residual(cplx x, const BlochSolution& z, const BlochSolution& w);

/// Diagonal normalisation: q(t) = (u(w_t) - u(z)) omega(x, z, w_t) with
/// w_t = near(t), extrapolated to t = 0 from t = h and h/2. Returns |q(0) - 1|.
double diagonal_limit_error(cplx x, const BlochSolution& z, const std::function<BlochSolution(double)>& near,
                            double h = 1e-5);

/// Windowed x-space products int_{xb-nL}^{xb+nL} Psi(x,z) Psi*(x,w) dx dmu(w)
/// for n = 1..n_max, integrated per period on a path lifted to Im x = lift.
/// Throws WindowNotIntegerPeriods unless L is a multiple of the period.
struct WindowedProducts {
  std::vector<cplx> windows;    // index n-1
  std::vector<cplx> cesaro;     // running Cesaro means
  double decay_ratio = 0.0;     // |cesaro.back()| / |windows.front()|
};
WindowedProducts x_space_orthogonality(const BlochSolution& z, const BlochSolution& w, double xb, double L,
                                       int n_max, double lift);

/// Richardson estimate of the 1/k coefficient of g(k) = 1 + phi/k + O(1/k^2)
/// from k1 and k2.
cplx first_correction_fit(const std::function<cplx(double)>& g, double k1, double k2);

/// f''(x) from the Cauchy integral on a circle of radius r.
cplx cauchy_second_derivative(const std::function<cplx(cplx)>& f, cplx x, double r, int samples = 32);

}  // namespace singap
