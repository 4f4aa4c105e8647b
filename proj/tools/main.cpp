#include <iostream>

#include <CLI11.hpp>

#include "commands.hpp"
#include "singap/error.hpp"

using namespace singap::cli;

namespace {

void add_curve(CLI::App* sub, CurveArgs& a) {
  sub->add_option("--lame-n", a.lame_n, "Lame index n")->capture_default_str();
  sub->add_option("--branch-points", a.branch_points, "three real branch points u0 < u1 < u2")
      ->delimiter(',')
      ->expected(3);
  sub->add_option("--curve", a.curve_json, "curve JSON file (overrides --branch-points)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"singap: finite-gap potentials with real singularities"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_config("--config", "", "TOML/INI configuration file");
  app.set_version_flag("--version", SINGAP_VERSION);

  Common c;
  app.add_option("--output-dir", c.output_dir, "output directory (default $SINGAP_OUTPUT_DIR or .)");
  app.add_option("--seed", c.seed, "random seed")->capture_default_str();
  app.add_option("--ode-rtol", c.ode_rtol, "ODE relative tolerance")->capture_default_str();
  app.add_option("--quad-tol", c.quad_tol, "quadrature tolerance")->capture_default_str();
  app.add_option("--newton-tol", c.newton_tol, "Newton tolerance")->capture_default_str();
  app.add_option("--lift", c.lift, "contour lift as a fraction of the period (0 = adaptive)")->capture_default_str();
  app.add_option("--threads", c.threads, "worker threads (0 = hardware)")->capture_default_str();

  SpectrumArgs sp;
  auto* s1 = app.add_subcommand("spectrum", "band edges, double points and Hermit points");
  add_curve(s1, sp.curve);
  s1->add_flag("--shifted", sp.shifted, "use the real-shifted (smooth) potential");
  s1->add_option("--lo", sp.lo, "scan start");
  s1->add_option("--hi", sp.hi, "scan end");

  HermitArgs he;
  auto* s2 = app.add_subcommand("hermit", "Hermit spectrum vs Dirichlet shooting");
  add_curve(s2, he.curve);
  s2->add_option("--count", he.count)->capture_default_str();

  InnerProductArgs ip;
  auto* s3 = app.add_subcommand("inner-product", "Bloch points, signature and Gram matrix");
  add_curve(s3, ip.curve);
  s3->add_option("--kappa", ip.kappa, "multiplier argument theta, kappa = exp(i theta)")->capture_default_str();
  s3->add_option("--umax", ip.umax, "truncation of the Bloch set");
  s3->add_option("--gram-points", ip.gram_points)->capture_default_str();

  KernelArgs ke;
  auto* s4 = app.add_subcommand("kernel-check", "fundamental lemma, periodicity and diagonal limit");
  add_curve(s4, ke.curve);
  s4->add_option("--samples", ke.samples)->capture_default_str();

  CrumArgs cr;
  auto* s5 = app.add_subcommand("crum", "Crum chain from a smooth seed");
  s5->add_option("--seed", cr.seed, "lame-shifted | zero")->capture_default_str();
  s5->add_option("--steps", cr.steps)->capture_default_str();
  s5->add_option("--branch-points", cr.branch_points)->delimiter(',')->expected(3);
  s5->add_option("--samples", cr.samples, "grid points for the potential CSV")->capture_default_str();

  KdvArgs kd;
  auto* s6 = app.add_subcommand("kdv-poles", "similarity system for the pole dynamics");
  s6->add_option("--n", kd.n)->capture_default_str();
  s6->add_option("--starts", kd.starts)->capture_default_str();
  s6->add_option("--t0", kd.t0)->capture_default_str();
  s6->add_option("--t1", kd.t1)->capture_default_str();

  FourierArgs fo;
  auto* s7 = app.add_subcommand("fourier", "Baker-Akhiezer Fourier round trip and Parseval");
  s7->add_option("--curve", fo.curve, "genus0 | lame1")->capture_default_str();
  s7->add_option("--branch-points", fo.branch_points)->delimiter(',')->expected(3);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*s1) return run_spectrum(c, sp);
    if (*s2) return run_hermit(c, he);
    if (*s3) return run_inner_product(c, ip);
    if (*s4) return run_kernel_check(c, ke);
    if (*s5) return run_crum(c, cr);
    if (*s6) return run_kdv_poles(c, kd);
    if (*s7) return run_fourier(c, fo);
  } catch (const singap::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.code() == singap::ErrorCode::ConfigInvalid ? 2 : 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
