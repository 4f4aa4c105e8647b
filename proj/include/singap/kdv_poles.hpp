#pragma once

#include <complex>
#include <cstdint>
#include <vector>

namespace singap::kdv {

using cplx = std::complex<double>;

/// Poles of the rational solution sum 2/(x - x_j(t))^2 at time t.
struct PoleConfiguration {
  double t = 0.0;
  std::vector<cplx> x;
};

struct Orbit {
  cplx cube;                  // common value of a^3 on the orbit
  std::vector<int> members;   // indices into SimilarityCoefficients::a
  bool zero = false;
  bool real = false;          // a^3 real (the zero orbit counts as real)
};

struct SimilarityCoefficients {
  int n = 0;
  std::vector<cplx> a;
  std::vector<Orbit> orbits;   // sorted by cube (real part, then imaginary)
  int real_orbit_count = 0;
  bool zero_orbit = false;
  double residual = 0.0;        // max_j |a_j/3 - sum (a_j - a_p)^-2|
  double locus_residual = 0.0;  // max_j |sum (a_j - a_p)^-3|
  int starts = 0;
  int converged_starts = 0;
  int distinct_solutions = 0;   // distinct similarity solutions found, on or off the locus
};

/// Velocities in rescaled time: dx_j/dt = sum_{p != j} (x_j - x_p)^-2.
/// Throws Collision when two poles are closer than collision_rel times the
/// configuration scale.
std::vector<cplx> pole_ode_rhs(const std::vector<cplx>& x, double collision_rel = 1e-6);

/// Returns n with n(n+1)/2 = N, or 0 if N is not triangular.
int triangular_index(int N);

struct SimilarityOptions {
  int starts = 200;
  std::uint64_t seed = 1;
  double newton_tol = 1e-12;
  int threads = 0;  // 0 uses the hardware concurrency
};

/// Solves a_j/3 = sum_{p != j} (a_j - a_p)^-2 for N = n(n+1)/2 poles by
/// multi-start Newton on Z3-orbit representatives, and returns the solution
/// whose poles also satisfy sum_{p != j} (a_j - a_p)^-3 = 0, the condition
/// for the rational potential to have trivial monodromy around every pole.
SimilarityCoefficients solve_similarity_system(int N, const SimilarityOptions& opt = {});

/// Partitions a into Z3 orbits and counts the real ones. Throws
/// NonPhysicalSolution if the set is not invariant under a -> eta*a and
/// OrbitAmbiguity if two orbits share a^3 within 1e-6 relative.
void classify_orbits(SimilarityCoefficients& c);

/// Max over j of the distance from eta*a_j to the nearest a_k, relative to
/// the configuration scale.
double z3_invariance_defect(const std::vector<cplx>& a);

struct CrosscheckResult {
  double max_deviation = 0.0;      // max_j |x_j(t) - a_j t^(1/3)| / t^(1/3)
  double initial_deviation = 0.0;
  double final_deviation = 0.0;
  std::vector<PoleConfiguration> trajectory;  // accepted steps
};

/// Integrates the pole ODE from x_j(t0) = a_j t0^(1/3) + perturbation_j and
/// measures the departure from the self-similar law over [t0, t1].
CrosscheckResult ode_similarity_crosscheck(const std::vector<cplx>& a, double t0, double t1,
                                           const std::vector<cplx>& perturbation = {});

}  // namespace singap::kdv
