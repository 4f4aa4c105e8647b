#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cli_common.hpp"

namespace singap::cli {

struct CurveArgs {
  int lame_n = 1;
  std::vector<double> branch_points{-1.0, 0.3, 2.0};
  std::string curve_json;  // overrides branch_points when set
};

struct SpectrumArgs {
  CurveArgs curve;
  bool shifted = false;
  std::optional<double> lo, hi;
};

struct HermitArgs {
  CurveArgs curve;
  int count = 3;
};

struct InnerProductArgs {
  CurveArgs curve;
  double kappa = 1.0471975511965976;  // pi / 3
  std::optional<double> umax;
  int gram_points = 4;
};

struct KernelArgs {
  CurveArgs curve;
  int samples = 10;
};

struct CrumArgs {
  std::string seed = "lame-shifted";
  int steps = 1;
  std::vector<double> branch_points{-1.0, 0.3, 2.0};
  int samples = 400;
};

struct KdvArgs {
  int n = 3;
  int starts = 200;
  double t0 = 1e-4, t1 = 1e-3;
};

struct FourierArgs {
  std::string curve = "genus0";  // genus0 | lame1
  std::vector<double> branch_points{-1.0, 0.3, 2.0};
};

int run_spectrum(const Common& c, const SpectrumArgs& a);
int run_hermit(const Common& c, const HermitArgs& a);
int run_inner_product(const Common& c, const InnerProductArgs& a);
int run_kernel_check(const Common& c, const KernelArgs& a);
int run_crum(const Common& c, const CrumArgs& a);
int run_kdv_poles(const Common& c, const KdvArgs& a);
int run_fourier(const Common& c, const FourierArgs& a);

}  // namespace singap::cli
