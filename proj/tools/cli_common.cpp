#include "cli_common.hpp"

#include <fstream>
#include <iomanip>
#include <iostream>

#include "singap/error.hpp"

#ifndef SINGAP_VERSION
#define SINGAP_VERSION "0.0.0"
#endif

namespace singap::cli {

namespace fs = std::filesystem;

Run::Run(std::string subcommand, const Common& common, json config)
    : subcommand_(std::move(subcommand)), config_(std::move(config)), start_(std::chrono::steady_clock::now()) {
  if (!(common.ode_rtol > 0) || !(common.quad_tol > 0) || !(common.newton_tol > 0) || common.lift < 0)
    throw Error(ErrorCode::ConfigInvalid, "tolerances must be positive and the lift non-negative");
  config_["seed"] = common.seed;
  config_["ode_rtol"] = common.ode_rtol;
  config_["quad_tol"] = common.quad_tol;
  config_["newton_tol"] = common.newton_tol;
  config_["lift"] = common.lift;
  dir_ = common.output_dir;
  if (dir_.empty()) {
    const char* env = std::getenv("SINGAP_OUTPUT_DIR");
    dir_ = env && *env ? fs::path(env) : fs::path(".");
  }
  fs::create_directories(dir_);
}

void Run::check(const std::string& name, double value, double tolerance) {
  checks_.push_back({name, value, tolerance, value < tolerance});
}

void Run::check_flag(const std::string& name, bool pass) { checks_.push_back({name, pass ? 0.0 : 1.0, 0.5, pass}); }

void Run::write_json(const std::string& file, const json& j) {
  std::ofstream out(dir_ / file);
  out << j.dump(2) << "\n";
  outputs_.push_back(file);
}

void Run::write_csv(const std::string& file, const std::string& header, const std::vector<std::vector<double>>& rows) {
  std::ofstream out(dir_ / file);
  out << header << "\n" << std::setprecision(17);
  for (const auto& r : rows) {
    for (std::size_t i = 0; i < r.size(); ++i) out << (i ? "," : "") << r[i];
    out << "\n";
  }
  outputs_.push_back(file);
}

int Run::finish() {
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  json checks = json::array();
  bool ok = true;
  for (const auto& c : checks_) {
    checks.push_back({{"name", c.name}, {"value", c.value}, {"tolerance", c.tolerance}, {"pass", c.pass}});
    if (!c.pass) {
      ok = false;
      std::cerr << "check failed: " << c.name << " = " << c.value << " (tolerance " << c.tolerance << ")\n";
    }
  }
  json m{{"subcommand", subcommand_}, {"version", SINGAP_VERSION}, {"config", config_},
         {"wall_time_s", wall},       {"outputs", outputs_},        {"checks", checks},
         {"pass", ok}};
  std::ofstream(dir_ / "manifest.json") << m.dump(2) << "\n";
  return ok ? 0 : 1;
}

json to_json(cplx z) { return json::array({z.real(), z.imag()}); }

json to_json(const std::vector<cplx>& v) {
  json a = json::array();
  for (const auto& z : v) a.push_back(to_json(z));
  return a;
}

json curve_to_json(const HyperellipticCurve& c, const Divisor& d) {
  json fin = json::array();
  for (const auto& p : d.finite) fin.push_back({p.alpha.real(), p.alpha.imag(), p.sheet});
  return {{"branch_points", to_json(c.branch_points())}, {"divisor", {{"finite", fin}, {"at_infinity", d.at_infinity}}}};
}

std::pair<HyperellipticCurve, Divisor> curve_from_json(const json& j) {
  try {
    std::vector<cplx> bp;
    for (const auto& p : j.at("branch_points")) bp.emplace_back(p.at(0).get<double>(), p.at(1).get<double>());
    Divisor d;
    if (j.contains("divisor")) {
      const auto& dj = j.at("divisor");
      if (dj.contains("finite"))
        for (const auto& p : dj.at("finite"))
          d.finite.push_back({cplx(p.at(0).get<double>(), p.at(1).get<double>()), p.at(2).get<int>()});
      d.at_infinity = dj.value("at_infinity", 0);
    }
    return {HyperellipticCurve(bp), d};
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ConfigInvalid, std::string("curve JSON: ") + e.what());
  }
}

}  // namespace singap::cli
