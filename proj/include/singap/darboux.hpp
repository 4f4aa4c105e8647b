#pragma once

#include <array>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "singap/spectral_ode.hpp"

namespace singap {

/// U~ = U - 2 (log eta)'' for a solution eta of -eta'' + U eta = lambda eta.
///
/// Written as U~ = -U + 2 lambda + 2 a^2 with a = eta'/eta, so no derivative
/// of eta beyond the first is formed. eta is carried as auxiliary state and
/// continued from its data at `anchor` (a regular point of U, not a zero of
/// eta). `zeros` lists the real zeros of eta in one period (or all of them
/// for a non-periodic U); they are the new poles.
class CrumPotential : public Potential {
 public:
  CrumPotential(std::shared_ptr<const Potential> base, double lambda, double anchor, std::array<cplx, 2> eta,
                std::vector<double> zeros);

  std::string name() const override;
  double period() const override { return base_->period(); }
  std::vector<RealPole> real_poles() const override;
  std::vector<cplx> singularities(double lo, double hi, double height) const override;

  std::size_t aux_size() const override { return base_->aux_size() + 2; }
  void aux_init(cplx x0, cplx* aux) const override;
  void aux_rhs(cplx x, const cplx* aux, cplx* daux) const override;
  cplx value(cplx x, const cplx* aux) const override;

  const Potential& base() const { return *base_; }
  double lambda() const { return lambda_; }
  double anchor() const { return anchor_; }
  /// (eta, eta') at x.
  std::array<cplx, 2> eta(cplx x) const;
  /// a = eta'/eta at x.
  cplx log_derivative(cplx x) const;

  /// f~ = (d - a) f for -f'' + U f = mu f given (f, f') at x; returns (f~, f~').
  std::array<cplx, 2> map(cplx x, double mu, std::array<cplx, 2> f) const;
  static std::array<cplx, 2> map_with(cplx a, double lambda, double mu, std::array<cplx, 2> f);

  /// U~ on the given points; throws EtaVanishesOnGrid when a point lies
  /// within `clearance` of a zero of eta.
  std::vector<cplx> sample(const std::vector<cplx>& xs, double clearance = 1e-6) const;

 private:
  std::shared_ptr<const Potential> base_;
  double lambda_;
  double anchor_;
  std::array<cplx, 2> eta_;
  std::vector<double> zeros_;
  double lift_;
};

/// Single Crum step over a closed-form seed eta (with eta').
std::shared_ptr<CrumPotential> crum_step(std::shared_ptr<const Potential> base, double lambda,
                                         const std::function<cplx(cplx)>& eta,
                                         const std::function<cplx(cplx)>& eta_x, double anchor,
                                         std::vector<double> zeros);

struct FactorizationResidual {
  double riccati = 0.0;   // max |a' + a^2 - U + lambda| / scale
  double dressed = 0.0;   // max |U~ - (a^2 - a' + lambda)| / scale
};
/// Checks L = -(d + a)(d - a) + lambda and L~ = -(d - a)(d + a) + lambda
/// through their coefficient identities, a' from a Cauchy integral.
FactorizationResidual factorization_residual(const CrumPotential& step, const std::vector<cplx>& xs,
                                             double radius = 0.05);

/// Dirichlet eigenvalues of a smooth T-periodic potential on (x0, x0 + T):
/// the first `count` zeros in lambda >= lo of psi(x0 + T) for psi(x0) = 0,
/// psi'(x0) = 1.
std::vector<double> dirichlet_spectrum(const Potential& pot, double x0, double lo, int count);

/// r steps over successive ground states. Level j uses the j-th Dirichlet
/// eigenfunction of U0 at x0, mapped through the earlier steps; its zeros
/// at x0 + mT become the pole r(r+1)/(x - x0)^2.
struct CrumChain {
  std::shared_ptr<const Potential> seed;
  std::vector<std::shared_ptr<const CrumPotential>> steps;
  std::vector<double> removed;    // lambda of each step
  std::vector<double> dirichlet;  // Dirichlet eigenvalues of the seed used
  double x0 = 0.0;
  const Potential& top() const { return steps.empty() ? *seed : *steps.back(); }
};
/// Throws GroundStateNotFound when a seed eigenfunction changes sign on
/// (x0, x0 + T) or the eigenvalues cannot be bracketed.
CrumChain crum_chain(std::shared_ptr<const Potential> seed, int r, double x0 = 0.0, double lo = -1e3,
                     int extra_levels = 3);

/// Coefficient of (x - x0)^-2 in the Laurent expansion of U, from a
/// contour integral of radius r.
cplx pole_coefficient(const Potential& pot, cplx x0, double r, int samples = 64);

// ---------------------------------------------------------------------------
// Degenerate catalog

struct CatalogEntry {
  std::string name;
  std::function<cplx(cplx)> U, psi;
  double lambda = 0.0;
  std::vector<double> xs;   // evaluation points
  double pole_spacing = 0;  // distance between poles on the real axis (0 for a single pole at 0)
};

struct CatalogResult {
  std::string name;
  double max_residual = 0.0;  // max |-psi'' + U psi - lambda psi| / scale
  bool pass = false;
};

/// (a) 2c^2/sinh^2(cx), 1/sinh(cx), -c^2; (b) 2/x^2, 1/x, 0;
/// (c) 2c^2/sin^2(cx) with 1/sin(cx) at c^2 and cos(cx)/sin(cx) at 0.
std::vector<CatalogEntry> degenerate_catalog(double c = 1.0);
std::vector<CatalogResult> degenerate_catalog_check(double c = 1.0, double tol = 1e-10);

}  // namespace singap
