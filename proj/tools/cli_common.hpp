#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "singap/curve.hpp"

namespace singap::cli {

using json = nlohmann::json;

/// Options shared by every subcommand.
struct Common {
  std::string output_dir;
  std::uint64_t seed = 1;
  double ode_rtol = 1e-12;
  double quad_tol = 1e-10;
  double newton_tol = 1e-12;
  double lift = 0.0;  // contour lift relative to T; 0 selects the adaptive default
  int threads = 0;
};

struct Check {
  std::string name;
  double value;
  double tolerance;
  bool pass;
};

/// Collects outputs and checks of one run and writes the manifest.
class Run {
 public:
  Run(std::string subcommand, const Common& common, json config);

  const std::filesystem::path& dir() const { return dir_; }
  /// Records value < tolerance (or an explicit verdict).
  void check(const std::string& name, double value, double tolerance);
  void check_flag(const std::string& name, bool pass);
  void write_json(const std::string& file, const json& j);
  void write_csv(const std::string& file, const std::string& header, const std::vector<std::vector<double>>& rows);
  /// Writes manifest.json and returns the exit status (0 or 1).
  int finish();

 private:
  std::string subcommand_;
  json config_;
  std::filesystem::path dir_;
  std::vector<Check> checks_;
  std::vector<std::string> outputs_;
  std::chrono::steady_clock::time_point start_;
};

json to_json(cplx z);
json to_json(const std::vector<cplx>& v);

/// Curve and divisor in the exchange format
/// {branch_points: [[re, im], ...], divisor: {finite: [[re, im, sheet], ...], at_infinity: r}}.
json curve_to_json(const HyperellipticCurve& c, const Divisor& d);
std::pair<HyperellipticCurve, Divisor> curve_from_json(const json& j);

}  // namespace singap::cli
