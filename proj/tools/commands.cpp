#include "commands.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <memory>
#include <numbers>
#include <random>

#include "singap/baker_akhiezer.hpp"
#include "singap/darboux.hpp"
#include "singap/error.hpp"
#include "singap/indefinite_product.hpp"
#include "singap/kdv_poles.hpp"
#include "singap/spectral_ode.hpp"

namespace singap::cli {

namespace {

constexpr double kPi = std::numbers::pi;

std::array<double, 3> one_gap_branch_points(const std::vector<double>& bp, const std::string& curve_json) {
  std::vector<double> u = bp;
  if (!curve_json.empty()) {
    std::ifstream in(curve_json);
    if (!in) throw Error(ErrorCode::ConfigInvalid, "cannot open curve file " + curve_json);
    json j;
    try {
      in >> j;
    } catch (const json::exception& e) {
      throw Error(ErrorCode::ConfigInvalid, std::string("curve file: ") + e.what());
    }
    auto [c, d] = curve_from_json(j);
    u.clear();
    for (const cplx& b : c.branch_points()) {
      if (b.imag() != 0.0) throw Error(ErrorCode::ConfigInvalid, "curve file: branch points must be real");
      u.push_back(b.real());
    }
  }
  if (u.size() != 3) throw Error(ErrorCode::ConfigInvalid, "exactly three branch points are required");
  if (!(u[0] < u[1] && u[1] < u[2])) throw Error(ErrorCode::ConfigInvalid, "branch points must be increasing");
  return {u[0], u[1], u[2]};
}

std::array<double, 3> branch_points_of(const CurveArgs& a) {
  if (a.lame_n < 1) throw Error(ErrorCode::ConfigInvalid, "Lame index must be at least 1");
  return one_gap_branch_points(a.branch_points, a.curve_json);
}

json curve_args_json(const CurveArgs& a, const std::array<double, 3>& u) {
  return {{"lame_n", a.lame_n}, {"branch_points", {u[0], u[1], u[2]}}};
}

std::pair<double, double> scan_window(const std::array<double, 3>& u, int n) {
  const double span = u[2] - u[0];
  const double k = 0.5 * n * (n + 1);
  return {u[0] - k * span - 1.0, u[2] + 10.0 * k * span};
}

json double_points_json(const std::vector<DoublePoint>& v) {
  json a = json::array();
  for (const auto& d : v) a.push_back({{"u", d.u}, {"parity", d.parity}});
  return a;
}

}  // namespace

// ---------------------------------------------------------------------------

int run_spectrum(const Common& c, const SpectrumArgs& a) {
  const auto u = branch_points_of(a.curve);
  const int n = a.curve.lame_n;
  auto [lo, hi] = scan_window(u, n);
  lo = a.lo.value_or(lo);
  hi = a.hi.value_or(hi);
  if (!(hi > lo)) throw Error(ErrorCode::ConfigInvalid, "--hi must exceed --lo");
  json cfg = curve_args_json(a.curve, u);
  cfg["shifted"] = a.shifted;
  cfg["lo"] = lo;
  cfg["hi"] = hi;
  Run run("spectrum", c, cfg);

  LamePotential pot = LamePotential::from_branch_points(n, u[0], u[1], u[2]);
  if (a.shifted) pot = pot.shifted();
  SpectrumOptions opt;
  opt.eps_rel = c.lift;
  opt.threads = c.threads;
  const auto rep = find_spectrum(pot, lo, hi, opt);

  run.write_json("spectrum.json", {{"potential", pot.name()},
                                   {"period", pot.period()},
                                   {"band_edges", rep.band_edges},
                                   {"edge_parity", rep.edge_parity},
                                   {"double_points", double_points_json(rep.double_points)},
                                   {"hermit_points", double_points_json(rep.hermit_points)},
                                   {"fully_degenerate", rep.fully_degenerate}});
  std::vector<std::vector<double>> rows;
  for (const auto& [x, S] : rep.samples) rows.push_back({x, S});
  run.write_csv("spectrum.csv", "u,S", rows);

  run.check_flag("band_edge_count", rep.band_edges.size() == static_cast<std::size_t>(2 * n + 1));
  if (n == 1 && rep.band_edges.size() == 3) {
    double err = 0.0;
    for (int i = 0; i < 3; ++i) err = std::max(err, std::abs(rep.band_edges[i] - u[i]) / std::max(1.0, u[2] - u[0]));
    run.check("band_edges_vs_branch_points", err, 1e-6);
  }
  return run.finish();
}

// ---------------------------------------------------------------------------

int run_hermit(const Common& c, const HermitArgs& a) {
  const auto u = branch_points_of(a.curve);
  const int n = a.curve.lame_n;
  if (a.count < 1) throw Error(ErrorCode::ConfigInvalid, "--count must be positive");
  json cfg = curve_args_json(a.curve, u);
  cfg["count"] = a.count;
  Run run("hermit", c, cfg);

  const LamePotential pot = LamePotential::from_branch_points(n, u[0], u[1], u[2]);
  auto [lo, hi] = scan_window(u, n);
  SpectrumOptions opt;
  opt.eps_rel = c.lift;
  opt.threads = c.threads;
  const auto edges = find_band_edges(pot, lo, hi, opt);
  if (edges.empty()) throw Error(ErrorCode::CheckFailed, "no band edges found");
  const double top = edges.back();

  std::vector<DoublePoint> hermit;
  double h_hi = top + 20.0 * (u[2] - u[0]);
  for (int tries = 0; tries < 6 && static_cast<int>(hermit.size()) < a.count; ++tries, h_hi = top + 2.0 * (h_hi - top))
    hermit = find_hermit_spectrum(pot, top + 1e-9 * std::max(1.0, std::abs(top)), h_hi, opt);
  const auto oracle = dirichlet_shooting_oracle(pot, top, h_hi);

  json pts = json::array();
  double worst = 0.0;
  bool above = true;
  for (int s = 0; s < a.count; ++s) {
    const double h = s < static_cast<int>(hermit.size()) ? hermit[s].u : NAN;
    const double o = s < static_cast<int>(oracle.size()) ? oracle[s] : NAN;
    pts.push_back({{"monodromy", h}, {"shooting", o}, {"parity", s < (int)hermit.size() ? hermit[s].parity : 0}});
    const double rel = std::abs(h - o) / std::max(1.0, std::abs(o));
    worst = std::isfinite(rel) ? std::max(worst, rel) : INFINITY;
    above = above && h > top;
  }
  run.check("hermit_vs_shooting_rel", worst, 1e-6);
  run.check_flag("hermit_above_top_edge", above);
  json out{{"band_edges", edges}, {"hermit", pts}};
  if (n == 1) {
    double err = edges.size() == 3 ? 0.0 : INFINITY;
    for (std::size_t i = 0; i < edges.size() && i < 3; ++i) err = std::max(err, std::abs(edges[i] - u[i]));
    run.check("simple_roots_vs_branch_points", err, 1e-6);
  }
  run.write_json("hermit.json", out);
  return run.finish();
}

// ---------------------------------------------------------------------------

int run_inner_product(const Common& c, const InnerProductArgs& a) {
  const auto u = branch_points_of(a.curve);
  const int n = a.curve.lame_n;
  if (a.gram_points < 1) throw Error(ErrorCode::ConfigInvalid, "--gram-points must be positive");
  json cfg = curve_args_json(a.curve, u);
  cfg["kappa"] = a.kappa;
  cfg["gram_points"] = a.gram_points;

  const Lame1Family fam = Lame1Family::from_branch_points(u[0], u[1], u[2]);
  std::shared_ptr<const LamePotential> pot =
      n == 1 ? std::make_shared<LamePotential>(fam.potential())
             : std::make_shared<LamePotential>(n, fam.lattice(), 0.0);
  auto [lo, hi] = scan_window(u, n);
  SpectrumOptions sopt;
  sopt.threads = c.threads;
  const HyperellipticCurve curve = n == 1 ? fam.curve() : HyperellipticCurve(find_band_edges(*pot, lo, hi, sopt));
  if (curve.genus() != n) throw Error(ErrorCode::CheckFailed, "band edge count does not match the Lame index");
  const auto dp = compute_dp(curve);
  const Divisor div{{}, n};
  const auto mu = measure_from_divisor(curve, div);
  const double umax = a.umax.value_or(default_u_max(curve));
  cfg["umax"] = umax;
  Run run("inner-product", c, cfg);

  const cplx kappa = std::polar(1.0, a.kappa);
  BlochPointOptions bopt;
  bopt.threads = c.threads;
  const auto set = bloch_points(*pot, curve, dp, mu, kappa, umax, bopt);
  const auto sig = negative_square_count(set, dp, mu);

  json points = json::array();
  double defect = 0.0;
  for (const auto& p : set.points) {
    points.push_back({{"u", p.u}, {"sheet", p.sheet}, {"zone", p.zone}, {"weight", p.weight},
                      {"branch_point", p.branch_point}, {"multiplier_defect", p.multiplier_defect}});
    defect = std::max(defect, p.multiplier_defect);
  }
  json zones = json::array();
  for (const auto& [z, cnt] : sig.per_zone) zones.push_back({{"zone", z}, {"negative", cnt.first}, {"positive", cnt.second}});
  json zero = json::array();
  for (const auto& p : sig.zero_weight) zero.push_back(p.u);
  run.write_json("signature.json", {{"kappa", to_json(kappa)},
                                    {"q_negative", sig.q_negative},
                                    {"predicted", sig.predicted},
                                    {"k", (n + 1) / 2},
                                    {"per_zone", zones},
                                    {"zero_weight", zero},
                                    {"points", points}});
  run.write_json("curve.json", curve_to_json(curve, div));
  run.check("multiplier_defect", defect, 1e-8);
  run.check_flag("q_matches_zone_signs", sig.q_negative == sig.predicted);

  const int J = std::min<int>(a.gram_points, set.truncation());
  std::vector<BlochSolution> sols;
  std::vector<double> w;
  std::optional<NumericalBlochFamily> num;
  if (n > 1) num.emplace(pot, dp, mu, c.lift);
  for (int j = 0; j < J; ++j) {
    const auto& p = set.points[j];
    sols.push_back(n == 1 ? fam.at(fam.alpha_of(p.u, p.sheet)) : num->at(p.u, p.sheet));
    w.push_back(p.weight);
  }
  GramOptions gopt;
  gopt.threads = c.threads;
  gopt.halving = n == 1;
  const auto g = periodic_gram(sols, w, 0.5 * pot->period(), gopt);
  std::vector<std::vector<double>> rows;
  for (int j = 0; j < J; ++j)
    for (int k = 0; k < J; ++k) rows.push_back({double(j), double(k), g.G[j][k].real(), g.G[j][k].imag()});
  run.write_csv("gram.csv", "j,k,re,im", rows);
  run.check("gram_offdiag_rel", g.max_offdiag_rel, 1e-5);
  run.check("gram_diag_rel_err", g.max_diag_rel_err, n == 1 ? 1e-6 : 1e-5);
  if (gopt.halving) run.check("gram_eps_halving", g.halving_diff, 1e-7);
  return run.finish();
}

// ---------------------------------------------------------------------------

int run_kernel_check(const Common& c, const KernelArgs& a) {
  const auto u = branch_points_of(a.curve);
  if (a.curve.lame_n != 1) throw Error(ErrorCode::ConfigInvalid, "kernel-check supports --lame-n 1 only");
  if (a.samples < 1) throw Error(ErrorCode::ConfigInvalid, "--samples must be positive");
  json cfg = curve_args_json(a.curve, u);
  cfg["samples"] = a.samples;
  Run run("kernel-check", c, cfg);

  const Lame1Family fam = Lame1Family::from_branch_points(u[0], u[1], u[2]);
  const auto& L = fam.lattice();
  const double T = fam.period(), h = std::abs(L.omega2());
  std::mt19937_64 rng(c.seed);
  std::uniform_real_distribution<double> t(0.08, 0.92), xs(0.1, 0.9);
  std::bernoulli_distribution coin(0.5);
  auto point = [&] {
    const double im = (coin(rng) ? 1.0 : -1.0) * t(rng) * h;
    return coin(rng) ? cplx(0.0, im) : L.omega1() + cplx(0.0, im);
  };
  double fl = 0.0, per = 0.0, diag = 0.0;
  json samples = json::array();
  for (int s = 0; s < a.samples; ++s) {
    const cplx az = point(), aw = point();
    const double x = xs(rng) * T;
    const auto z = fam.at(az), w = fam.at(aw);
    const double r1 = fundamental_lemma_residual(x, z, w);
    const double r2 = periodicity_residual(x, z, w);
    const double r3 = diagonal_limit_error(x, z, [&](double e) { return fam.at(az + cplx(0.0, e)); });
    fl = std::max(fl, r1);
    per = std::max(per, r2);
    diag = std::max(diag, r3);
    samples.push_back({{"x", x}, {"alpha_z", to_json(az)}, {"alpha_w", to_json(aw)}, {"fundamental_lemma", r1},
                       {"periodicity", r2}, {"diagonal", r3}});
  }
  run.write_json("kernel.json", {{"fundamental_lemma_max_residual", fl},
                                 {"periodicity_max_residual", per},
                                 {"diagonal_limit_error", diag},
                                 {"samples", samples}});
  run.check("fundamental_lemma_max_residual", fl, 1e-6);
  run.check("periodicity_max_residual", per, 1e-6);
  run.check("diagonal_limit_error", diag, 1e-6);
  return run.finish();
}

// ---------------------------------------------------------------------------

int run_crum(const Common& c, const CrumArgs& a) {
  if (a.steps < 1) throw Error(ErrorCode::ConfigInvalid, "--steps must be positive");
  if (a.seed != "lame-shifted" && a.seed != "zero") throw Error(ErrorCode::ConfigInvalid, "--seed must be lame-shifted or zero");
  if (a.samples < 2) throw Error(ErrorCode::ConfigInvalid, "--samples must be at least 2");
  json cfg{{"seed_potential", a.seed}, {"steps", a.steps}, {"samples", a.samples}};
  std::shared_ptr<const Potential> seed;
  double lo_scan = -1.0;
  if (a.seed == "zero") {
    seed = std::make_shared<ConstantPotential>(0.0, kPi);
  } else {
    const auto u = one_gap_branch_points(a.branch_points, "");
    cfg["branch_points"] = {u[0], u[1], u[2]};
    seed = std::make_shared<LamePotential>(LamePotential::from_branch_points(1, u[0], u[1], u[2]).shifted());
    lo_scan = u[0] - (u[2] - u[0]);
  }
  Run run("crum", c, cfg);

  const auto ch = crum_chain(seed, a.steps);
  const Potential& top = ch.top();
  const double T = seed->period();
  const int r = a.steps;

  std::vector<cplx> xs;
  for (int j = 1; j < a.samples; ++j) xs.push_back(T * j / a.samples);
  const auto U = ch.steps.back()->sample(xs);
  std::vector<std::vector<double>> rows;
  for (std::size_t j = 0; j < xs.size(); ++j) rows.push_back({xs[j].real(), U[j].real(), U[j].imag()});
  run.write_csv("crum_potential.csv", "x,re_U,im_U", rows);

  const cplx coef = pole_coefficient(top, 0.0, 0.15 * T);
  SpectrumOptions opt;
  opt.threads = c.threads;
  const double h_hi = ch.dirichlet.back() + 0.5 * (ch.dirichlet.back() - ch.dirichlet[ch.dirichlet.size() - 2]);
  const auto hermit = find_hermit_spectrum(top, lo_scan, h_hi, opt);
  double herr = 0.0;
  json hj = json::array();
  // a fully degenerate seed keeps the removed levels as closed gaps of U_r; they are
  // not Dirichlet states of U_r and are left out of the comparison
  std::vector<DoublePoint> kept;
  json closed = json::array();
  for (const auto& d : hermit) {
    bool removed = false;
    for (double l : ch.removed) removed = removed || std::abs(d.u - l) < 1e-6 * std::max(1.0, std::abs(l));
    if (removed)
      closed.push_back(d.u);
    else
      kept.push_back(d);
  }
  for (std::size_t s = r; s < ch.dirichlet.size(); ++s) {
    const std::size_t i = s - r;
    const double h = i < kept.size() ? kept[i].u : NAN;
    hj.push_back({{"hermit", h}, {"seed_dirichlet", ch.dirichlet[s]}});
    const double rel = std::abs(h - ch.dirichlet[s]) / std::max(1.0, std::abs(ch.dirichlet[s]));
    herr = std::isfinite(rel) ? std::max(herr, rel) : INFINITY;
  }
  double sdev = 0.0;
  json sj = json::array();
  for (double uu = lo_scan; uu < h_hi; uu += (h_hi - lo_scan) / 40.0) {
    bool near = false;
    for (double l : ch.removed) near = near || std::abs(uu - l) < 0.05 * std::max(1.0, std::abs(l));
    if (near) continue;
    const cplx S0 = monodromy(*seed, uu).S, S1 = monodromy(top, uu).S;
    sdev = std::max(sdev, std::abs(S0 - S1) / std::max(1.0, std::abs(S0)));
    sj.push_back({{"u", uu}, {"S_seed", S0.real()}, {"S_top", S1.real()}});
  }
  run.write_json("crum.json", {{"removed", ch.removed},
                               {"seed_dirichlet", ch.dirichlet},
                               {"pole_coefficient", to_json(coef)},
                               {"expected_pole_coefficient", r * (r + 1)},
                               {"hermit_comparison", hj},
                               {"removed_levels_still_closed", closed},
                               {"band_function", sj}});
  run.check("pole_coefficient_error", std::abs(coef - double(r * (r + 1))), 1e-6);
  run.check("hermit_vs_seed_dirichlet_rel", herr, 1e-6);
  run.check("band_function_deviation", sdev, 1e-6);
  return run.finish();
}

// ---------------------------------------------------------------------------

int run_kdv_poles(const Common& c, const KdvArgs& a) {
  if (a.n < 1) throw Error(ErrorCode::ConfigInvalid, "--n must be at least 1");
  if (a.starts < 1) throw Error(ErrorCode::ConfigInvalid, "--starts must be positive");
  if (!(a.t0 > 0 && a.t1 > a.t0)) throw Error(ErrorCode::ConfigInvalid, "need 0 < t0 < t1");
  const int N = a.n * (a.n + 1) / 2;
  Run run("kdv-poles", c, {{"n", a.n}, {"starts", a.starts}, {"t0", a.t0}, {"t1", a.t1}});

  kdv::SimilarityOptions opt;
  opt.starts = a.starts;
  opt.seed = c.seed;
  opt.newton_tol = c.newton_tol;
  opt.threads = c.threads;
  auto s = kdv::solve_similarity_system(N, opt);

  json orbits = json::array();
  for (const auto& o : s.orbits)
    orbits.push_back({{"cube", to_json(o.cube)}, {"members", o.members}, {"zero", o.zero}, {"real", o.real}});
  json out{{"n", a.n},
           {"N", N},
           {"a_values", to_json(s.a)},
           {"orbits", orbits},
           {"real_orbit_count", s.real_orbit_count},
           {"zero_orbit", s.zero_orbit},
           {"residual", s.residual},
           {"locus_residual", s.locus_residual},
           {"starts", s.starts},
           {"converged_starts", s.converged_starts}};
  const double defect = kdv::z3_invariance_defect(s.a);
  run.check("z3_invariance_defect", defect, 1e-8);
  run.check("similarity_residual", s.residual, 1e-10);
  run.check_flag("real_orbit_count_is_(n+1)/2", s.real_orbit_count == (a.n + 1) / 2);
  if (a.n == 3 && s.orbits.size() == 2) {
    const cplx w = s.orbits[0].cube / s.orbits[1].cube;
    const double w_exact = 0.5 * (-7.0 + std::sqrt(45.0));
    out["w"] = to_json(w);
    out["w_closed_form"] = w_exact;
    run.check("w_rel_error", std::abs(w - w_exact) / std::abs(w_exact), 1e-8);
  }
  run.write_json("kdv_poles.json", out);

  if (N > 1) {
    const auto cc = kdv::ode_similarity_crosscheck(s.a, a.t0, a.t1);
    std::vector<std::vector<double>> rows;
    for (const auto& p : cc.trajectory)
      for (std::size_t j = 0; j < p.x.size(); ++j) rows.push_back({p.t, double(j), p.x[j].real(), p.x[j].imag()});
    run.write_csv("kdv_trajectories.csv", "t,j,re_x,im_x", rows);
    run.check("similarity_ode_deviation", cc.max_deviation, 1e-6);
  }
  return run.finish();
}

// ---------------------------------------------------------------------------

int run_fourier(const Common& c, const FourierArgs& a) {
  if (a.curve != "genus0" && a.curve != "lame1") throw Error(ErrorCode::ConfigInvalid, "--curve must be genus0 or lame1");
  json cfg{{"curve", a.curve}};
  if (a.curve == "genus0") {
    Run run("fourier", c, cfg);
    auto nodes = genus0_contour_nodes(-12.0, 12.0, 481);
    std::vector<cplx> phi;
    for (const auto& nd : nodes) phi.push_back(std::exp(-0.5 * nd.sol.u));
    const auto grid = lifted_grid(-12.0, 12.0, 481, 0.0);
    const auto f = ba_fourier_forward(nodes, phi, grid, true, c.threads);
    const auto back = ba_fourier_inverse(grid, f, nodes, c.threads);
    double num = 0, den = 0;
    for (std::size_t j = 0; j < phi.size(); ++j) num += std::norm(back[j] - phi[j]), den += std::norm(phi[j]);
    const double err = std::sqrt(num / den);
    // dp = dk: no roots in the numerator and density 1/(2k)
    const auto dp = compute_dp(HyperellipticCurve(std::vector<double>{0.0}));
    double dk_err = dp.p_roots.empty() ? 0.0 : INFINITY;
    for (double k : {0.5, 1.0, 3.0}) dk_err = std::max(dk_err, std::abs(dp.density(k * k) * 2.0 * k - 1.0));
    std::vector<std::vector<double>> rows;
    for (std::size_t i = 0; i < f.size(); ++i) rows.push_back({grid.x[i].real(), f[i].real(), f[i].imag()});
    run.write_csv("fourier.csv", "x,re,im", rows);
    run.write_json("fourier.json", {{"round_trip_error", err}, {"dp_minus_dk", dk_err}});
    run.check("round_trip_error", err, 1e-6);
    run.check("dp_minus_dk", dk_err, 1e-14);
    return run.finish();
  }

  const auto u = one_gap_branch_points(a.branch_points, "");
  cfg["branch_points"] = {u[0], u[1], u[2]};
  Run run("fourier", c, cfg);
  const Lame1Family fam = Lame1Family::from_branch_points(u[0], u[1], u[2]);
  const double T = fam.period(), h = std::abs(fam.lattice().omega2());
  const auto grid = lifted_grid(-10.0 * T, 10.0 * T, 4001, 0.15 * T);

  // Gaussian in p, continued along the nodes
  auto gaussian_in_p = [&](const std::vector<ContourNode>& nodes, double sigma) {
    std::vector<double> p{nodes[0].sol.p.real()};
    for (std::size_t j = 1; j < nodes.size(); ++j)
      p.push_back(p.back() + std::remainder(nodes[j].sol.p.real() - nodes[j - 1].sol.p.real(), 2.0 * kPi / T));
    const double pc = p[p.size() / 2];
    std::vector<cplx> phi;
    for (double q : p) phi.push_back(std::exp(-0.5 * std::pow((q - pc) / sigma, 2)));
    return phi;
  };

  // bump in the contour parameter, negligible at both ends
  const double t0 = -0.34, t1 = -0.14;
  auto inf_nodes = lame1_contour_nodes(fam, false, t0, t1, 301);
  std::vector<cplx> phi;
  for (int j = 0; j < 301; ++j) phi.push_back(std::exp(-0.5 * std::pow((t0 + j * (t1 - t0) / 300 + 0.24) / 0.015, 2)));
  const auto f = ba_fourier_forward(inf_nodes, phi, grid, true, c.threads);
  const auto back = ba_fourier_inverse(grid, f, inf_nodes, c.threads);
  double num = 0, den = 0;
  for (std::size_t j = 0; j < phi.size(); ++j) num += std::norm(back[j] - phi[j]), den += std::norm(phi[j]);
  const double err = std::sqrt(num / den);

  auto fin_nodes = lame1_contour_nodes(fam, true, 0.02 * h, 1.98 * h, 401);
  const auto phi2 = gaussian_in_p(fin_nodes, 0.5 / T);
  const auto pr = ba_parseval(fin_nodes, phi2, phi2, grid, c.threads);

  std::vector<std::vector<double>> rows;
  for (std::size_t i = 0; i < f.size(); ++i) rows.push_back({grid.x[i].real(), f[i].real(), f[i].imag()});
  run.write_csv("fourier.csv", "x,re,im", rows);
  run.write_json("fourier.json", {{"round_trip_error", err},
                                  {"parseval_x_side", to_json(pr.x_side)},
                                  {"parseval_contour_side", to_json(pr.contour_side)}});
  run.check("round_trip_error", err, 1e-3);
  run.check("parseval_rel_error", std::abs(pr.x_side - pr.contour_side) / std::abs(pr.contour_side), 1e-3);
  run.check_flag("finite_zone_square_negative", pr.contour_side.real() < 0 && pr.x_side.real() < 0);
  return run.finish();
}

}  // namespace singap::cli
