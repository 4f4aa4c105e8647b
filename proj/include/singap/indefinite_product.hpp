#pragma once

#include <complex>
#include <functional>
#include <map>
#include <vector>

#include "singap/baker_akhiezer.hpp"
#include "singap/curve.hpp"
#include "singap/spectral_ode.hpp"

namespace singap {

/// A point z of the real contour with e^{iTp(z)} = kappa.
struct BlochPoint {
  double u = 0.0;
  int sheet = 1;     // sheet of sqrt(R); irrelevant at a branch point
  int zone = 0;      // 0..g-1 finite zones, g the infinite zone
  double weight = 0.0;            // dp/dmu(z), the same on both sheets
  double multiplier_defect = 0.0;  // |e^{iTp(z)} - kappa| from the monodromy
  bool branch_point = false;
};

struct BlochPointSet {
  cplx kappa = 1.0;
  double period = 0.0;
  double u_max = 0.0;
  std::vector<BlochPoint> points;  // sorted by u
  int truncation() const { return static_cast<int>(points.size()); }
};

struct BlochPointOptions {
  int points_per_oscillation = 24;
  double edge_tol = 1e-9;  // |S - cos(theta)| accepted at zone edges
  int threads = 0;
};

/// Default search bound u_2g + 50 (u_2g - u_0).
double default_u_max(const HyperellipticCurve& c);

/// All points of the real contour with multiplier kappa and u <= u_max:
/// roots of S(u) = Re kappa on every zone, sheet chosen from the sign of
/// Im kappa, plus double points (both sheets) and band edges when kappa = +-1.
BlochPointSet bloch_points(const Potential& pot, const HyperellipticCurve& c, const QuasimomentumDifferential& dp,
                           const MeasureDifferential& dmu, cplx kappa, double u_max,
                           const BlochPointOptions& opt = {});

/// Number of contour points in finite zone k for a generic multiplier, from
/// the winding of p around the zone oval: |2 T (p(u_{2k+1}) - p(u_{2k}))| / 2 pi.
int winding_count(const QuasimomentumDifferential& dp, int k, double T);

struct GramOptions {
  double eps_rel = 0.1;  // lift of the horizontal segment, relative to T
  int panels = 0;        // horizontal Gauss panels; 0 picks from eps and the largest |u|
  bool halving = true;   // repeat with eps/2 as an error estimate
  int threads = 0;
};

struct GramReport {
  std::vector<std::vector<cplx>> G;
  std::vector<double> expected_diagonal;  // T dp/dmu(z_j)
  double max_offdiag_rel = 0.0;           // max |G_jk| / max |G_jj|
  double max_diag_rel_err = 0.0;          // max |G_jj / expected - 1|
  double halving_diff = 0.0;              // max |G(eps) - G(eps/2)| / max |G_jj|
};

/// Gram matrix int_0^T Psi(x, z_j) Psi*(x, z_k) dx over the path x_a ->
/// x_a + i eps -> x_a + T + i eps -> x_a + T, composite 20-point Gauss.
/// `weights` are dp/dmu(z_j). Throws MultiplierMismatch unless all kappa agree.
GramReport periodic_gram(const std::vector<BlochSolution>& sols, const std::vector<double>& weights, double x_a,
                         const GramOptions& opt = {});

struct SignatureReport {
  cplx kappa = 1.0;
  int q_negative = 0;
  int predicted = 0;  // from the zone signs of the curve
  std::map<int, std::pair<int, int>> per_zone;  // zone -> (negative, positive)
  std::vector<BlochPoint> zero_weight;          // reported, not counted
};

/// Counts negative weights. Points with |weight| <= zero_tol * scale are
/// listed separately, or rejected with ZeroWeight when `strict`.
SignatureReport negative_square_count(const BlochPointSet& set, const QuasimomentumDifferential& dp,
                                      const MeasureDifferential& dmu, double zero_tol = 1e-10,
                                      bool strict = false);

/// Whole-line signature of -d^2 + 2c^2/sinh^2(cx): the bound state
/// 1/sinh(cx) at -c^2, whose inner square is integrated on Im x = eps, and
/// the continuum u >= 0 with weight dp/dmu = u + c^2.
struct SinhSignature {
  double bound_state_square = 0.0;  // exact value -2/c
  int q_negative = 0;
  int continuum_samples = 0;
};
SinhSignature sinh_degeneration_signature(double c, int continuum_samples = 64);

/// Rank of the matrix of singular Laurent coefficients (alpha_1..alpha_k) at
/// the pole x0 for the given eigenfunctions of n(n+1) wp.
struct ResidueRank {
  int rank = 0;
  int k = 0;                            // number of singular coefficients
  std::vector<double> singular_values;  // relative to the largest
};
ResidueRank residue_rank(const std::vector<BlochSolution>& sols, int n, double x0, double radius,
                         double next_singularity, double rel_tol = 1e-8);

// ---------------------------------------------------------------------------
// BA Fourier pair

/// Quadrature node on the contour: `weight` is the oriented dmu weight
/// (contour oriented by increasing p, so negative where dp/dmu < 0).
struct ContourNode {
  BlochSolution sol;
  cplx weight;
};

/// Genus 0 contour: k uniform on [k0, k1] with trapezoid weights.
std::vector<ContourNode> genus0_contour_nodes(double k0, double k1, int n);

/// Lame n = 1 contour: alpha = base + i t, base 0 (infinite zone) or omega1
/// (finite zone), t uniform on [t0, t1], dmu = dt.
std::vector<ContourNode> lame1_contour_nodes(const Lame1Family& f, bool finite_zone, double t0, double t1, int n);

/// Uniform points x + i eps on [x0, x1] with trapezoid weights.
struct XGrid {
  std::vector<cplx> x;
  std::vector<cplx> w;
};
XGrid lifted_grid(double x0, double x1, int n, double eps);

/// phi~(x) = (2 pi)^{-1/2} int phi(z) Psi*(x, z) dmu(z); with use_dual false
/// the kernel is Psi(x, z). Throws DecayTooSlow when the samples on the
/// infinite zone do not decay faster than k^(-1+0.1).
std::vector<cplx> ba_fourier_forward(const std::vector<ContourNode>& nodes, const std::vector<cplx>& phi,
                                     const XGrid& grid, bool use_dual = true, int threads = 0);
/// phi(z) = (2 pi)^{-1/2} int phi~(x) Psi(x, z) dx.
std::vector<cplx> ba_fourier_inverse(const XGrid& grid, const std::vector<cplx>& f,
                                     const std::vector<ContourNode>& nodes, int threads = 0);

struct ParsevalReport {
  cplx x_side;        // int phi~_1(x) phi~_2^dual(x) dx
  cplx contour_side;  // int phi_1 phi_2 dmu
};
ParsevalReport ba_parseval(const std::vector<ContourNode>& nodes, const std::vector<cplx>& phi1,
                           const std::vector<cplx>& phi2, const XGrid& grid, int threads = 0);

}  // namespace singap
