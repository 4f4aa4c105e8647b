#pragma once

#include <array>
#include <complex>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "singap/elliptic.hpp"

namespace singap {

struct RealPole {
  double position;      // in [0, T)
  double coefficient;   // m(m+1) for a leading term m(m+1)/(x - x0)^2
};

/// U(x) for L = -d^2/dx^2 + U(x), analytic along the complex paths used.
///
/// Closed-form potentials evaluate U directly. Potentials defined through
/// other solutions (Crum chains) carry an auxiliary linear state that is
/// integrated alongside psi: aux_init gives the state at the path start and
/// aux_rhs its x-derivative.
class Potential {
 public:
  virtual ~Potential() = default;

  virtual std::string name() const = 0;
  /// Real period, or 0 for non-periodic potentials.
  virtual double period() const = 0;
  virtual std::vector<RealPole> real_poles() const = 0;
  /// Singular points with real part in [lo, hi] and |Im| <= height.
  virtual std::vector<cplx> singularities(double lo, double hi, double height) const = 0;

  virtual std::size_t aux_size() const { return 0; }
  virtual void aux_init(cplx /*x0*/, cplx* /*aux*/) const {}
  virtual void aux_rhs(cplx /*x*/, const cplx* /*aux*/, cplx* /*daux*/) const {}
  virtual cplx value(cplx x, const cplx* aux) const = 0;

  /// Convenience evaluation; potentials with auxiliary state integrate it
  /// from its anchor first.
  cplx operator()(cplx x) const;
};

/// n(n+1) wp(x + shift) + offset on the given lattice.
class LamePotential : public Potential {
 public:
  LamePotential(int n, Lattice lattice, double offset = 0.0, cplx shift = 0.0);
  /// Lame operator whose n = 1 band edges are the branch points (offset =
  /// mean of the branch points).
  static LamePotential from_branch_points(int n, double u0, double u1, double u2);
  /// Same with the argument shifted by the imaginary half period, which
  /// gives a smooth real potential on the real axis.
  LamePotential shifted() const;

  std::string name() const override;
  double period() const override { return lattice_.real_period(); }
  std::vector<RealPole> real_poles() const override;
  std::vector<cplx> singularities(double lo, double hi, double height) const override;
  cplx value(cplx x, const cplx*) const override;

  int n() const { return n_; }
  const Lattice& lattice() const { return lattice_; }
  double offset() const { return offset_; }
  cplx shift() const { return shift_; }

 private:
  int n_;
  Lattice lattice_;
  double offset_;
  cplx shift_;
};

/// 2c^2/sinh^2(cx): hyperbolic degeneration, not periodic.
class SinhPotential : public Potential {
 public:
  explicit SinhPotential(double c) : c_(c) {}
  std::string name() const override { return "degenerate-sinh"; }
  double period() const override { return 0.0; }
  std::vector<RealPole> real_poles() const override { return {{0.0, 2.0}}; }
  std::vector<cplx> singularities(double lo, double hi, double height) const override;
  cplx value(cplx x, const cplx*) const override;
  double c() const { return c_; }

 private:
  double c_;
};

/// 2c^2/sin^2(cx): trigonometric degeneration with period pi/c.
class SinPotential : public Potential {
 public:
  explicit SinPotential(double c) : c_(c) {}
  std::string name() const override { return "degenerate-sin"; }
  double period() const override;
  std::vector<RealPole> real_poles() const override { return {{0.0, 2.0}}; }
  std::vector<cplx> singularities(double lo, double hi, double height) const override;
  cplx value(cplx x, const cplx*) const override;
  double c() const { return c_; }

 private:
  double c_;
};

/// n(n+1)/x^2.
class RationalPotential : public Potential {
 public:
  explicit RationalPotential(int n) : n_(n) {}
  std::string name() const override { return "rational"; }
  double period() const override { return 0.0; }
  std::vector<RealPole> real_poles() const override;
  std::vector<cplx> singularities(double lo, double hi, double height) const override;
  cplx value(cplx x, const cplx*) const override;

 private:
  int n_;
};

/// Smooth T-periodic potential given by equispaced samples, continued to
/// complex x by its trigonometric interpolant.
class TabulatedPotential : public Potential {
 public:
  TabulatedPotential(std::vector<double> samples, double period);
  std::string name() const override { return "tabulated"; }
  double period() const override { return T_; }
  std::vector<RealPole> real_poles() const override { return {}; }
  std::vector<cplx> singularities(double, double, double) const override { return {}; }
  cplx value(cplx x, const cplx*) const override;

 private:
  std::vector<cplx> coef_;  // c_m for m = -K..K stored at m + K
  int K_;
  double T_;
};

/// Constant potential U = c0 (free particle when c0 = 0).
class ConstantPotential : public Potential {
 public:
  ConstantPotential(double c0, double period) : c0_(c0), T_(period) {}
  std::string name() const override { return "constant"; }
  double period() const override { return T_; }
  std::vector<RealPole> real_poles() const override { return {}; }
  std::vector<cplx> singularities(double, double, double) const override { return {}; }
  cplx value(cplx, const cplx*) const override { return c0_; }

 private:
  double c0_, T_;
};

using Path = std::vector<cplx>;  // vertices of a piecewise-linear path

struct IntegrationOptions {
  double rtol = 1e-12;
  double atol = 1e-14;
  /// Minimum admissible distance from the path to a singularity, relative
  /// to the period (or to 1 for non-periodic potentials).
  double pole_clearance = 1e-3;
};

/// Columns are the solutions with (psi, psi') = (1, 0) and (0, 1) at the
/// path start, evaluated at the path end.
struct TransferMatrix {
  std::array<std::array<cplx, 2>, 2> m{};
  cplx x_a, x_b, u;
  double det_defect = 0.0;  // |det - 1|

  cplx trace() const { return m[0][0] + m[1][1]; }
};

/// Path [x_a, x_a + T] lifted to Im x = eps, with vertical drops at the
/// endpoints when x_a is regular.
Path default_period_path(const Potential& pot, double x_a, double eps);

TransferMatrix integrate_transfer(const Potential& pot, cplx u, const Path& path,
                                  const IntegrationOptions& opt = {});

/// Solution of -psi'' + U psi = u psi along the path with the given initial
/// values; returns (psi, psi') at every accepted step if `trace` is set and
/// the final values otherwise.
std::array<cplx, 2> integrate_solution(const Potential& pot, cplx u, const Path& path,
                                       std::array<cplx, 2> init, const IntegrationOptions& opt = {},
                                       std::vector<std::pair<cplx, std::array<cplx, 2>>>* trace = nullptr);

struct MonodromyData {
  cplx S;        // half trace
  cplx dS;       // derivative in u
  TransferMatrix T;
  std::array<std::array<cplx, 2>, 2> dT{};  // derivative of the matrix in u
};

/// Point midway between the first two real poles in [0, T) (T/2 for a single
/// pole, 0 for none); used as the default monodromy basepoint.
double regular_basepoint(const Potential& pot);

/// Monodromy over one period along the path from x_a lifted to Im x = eps
/// (eps = eps_rel * T, or default_lift when eps_rel is 0); x_a defaults to
/// regular_basepoint.
MonodromyData monodromy(const Potential& pot, cplx u, double eps_rel = 0.0,
                        std::optional<double> x_a = std::nullopt, const IntegrationOptions& opt = {});
cplx monodromy_trace(const Potential& pot, cplx u, double eps_rel = 0.0);

/// Height of the lifted period path. Near a pole of order n the two local
/// solutions differ by a factor ~ dist^(2n+1), and far above the axis they
/// differ by exp(2 sqrt(u) h); the lift balances both and stays below half
/// the distance to the next row of singularities. Potentials without real
/// poles use 0.01 T.
double default_lift(const Potential& pot, cplx u);

struct DoublePoint {
  double u;
  int parity;  // +1 periodic (S = 1), -1 antiperiodic (S = -1)
};

struct SpectrumReport {
  std::vector<double> band_edges;
  std::vector<int> edge_parity;
  std::vector<DoublePoint> double_points;  // extrema with S = +-1
  /// Double points of a potential with real poles (empty for smooth ones).
  std::vector<DoublePoint> hermit_points;
  /// Every root of S^2 = 1 in the interval is double (free-particle type
  /// spectrum); the double points are then not reported as Hermit points.
  bool fully_degenerate = false;
  std::vector<std::pair<double, double>> samples;  // (u, Re S) on the scan grid
};

struct SpectrumOptions {
  double eps_rel = 0.0;  // 0 selects default_lift
  int points_per_oscillation = 24;
  double double_point_tol = 1e-7;  // |1 - |S|| at an extremum
  int threads = 0;
};

/// Scans [lo, hi] for simple roots of S^2 - 1 (band edges) and for extrema
/// with S = +-1 (double points). Throws RootClusterUnresolved when two
/// simple roots cannot be separated.
SpectrumReport find_spectrum(const Potential& pot, double lo, double hi, const SpectrumOptions& opt = {});
std::vector<double> find_band_edges(const Potential& pot, double lo, double hi, const SpectrumOptions& opt = {});
std::vector<DoublePoint> find_hermit_spectrum(const Potential& pot, double lo, double hi,
                                              const SpectrumOptions& opt = {});

/// Data of a potential n(n+1)/x^2 + sum_k c_k x^(2k) + offset near x = 0,
/// with c_k the Laurent coefficients of wp - 1/x^2 for invariants g2, g3.
struct FrobeniusData {
  int n = 1;
  double g2 = 0.0, g3 = 0.0;
  double offset = 0.0;
};

struct ShootingOptions {
  double eps_rel = 0.02;   // series start at eps*T from each pole
  int steps = 4000;        // RK4 steps on each half; Richardson uses steps and 2*steps
  int scan_points = 4000;  // lambda grid
};

/// Dirichlet eigenvalues on (0, T) of -psi'' + U psi for a potential even
/// about T/2 with a pole of type n(n+1)/x^2 at both ends. Uses the recessive
/// Frobenius solution x^(n+1)(1 + ...) at each end, real fixed-step RK4 with
/// Richardson extrapolation, and matches the two at T/2.
std::vector<double> dirichlet_shooting_oracle(const std::function<double(double)>& U, double T,
                                              const FrobeniusData& fd, double lo, double hi,
                                              const ShootingOptions& opt = {});
std::vector<double> dirichlet_shooting_oracle(const LamePotential& pot, double lo, double hi,
                                              const ShootingOptions& opt = {});

/// Coefficients c_1..c_K of wp(x) - 1/x^2 = sum c_k x^(2k).
std::vector<double> wp_laurent_coefficients(double g2, double g3, int K);

}  // namespace singap
