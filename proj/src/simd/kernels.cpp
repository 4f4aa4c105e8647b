#include "singap/simd.hpp"

#include <atomic>
#include <stdexcept>

namespace singap::simd {

namespace scalar {

void pair_inverse_power(const cplx* x, std::size_t n, int k, cplx* out) {
  if (k != 2 && k != 3) throw std::invalid_argument("pair_inverse_power: k must be 2 or 3");
  for (std::size_t j = 0; j < n; ++j) {
    cplx s = 0.0;
    for (std::size_t p = 0; p < n; ++p) {
      if (p == j) continue;
      const cplx d = x[j] - x[p];
      const cplx d2 = d * d;
      s += k == 2 ? 1.0 / d2 : 1.0 / (d2 * d);
    }
    out[j] = s;
  }
}

cplx bilinear_dot(const cplx* a, const cplx* b, std::size_t n) {
  cplx s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
  return s;
}

}  // namespace scalar

bool cpu_has_avx2() {
#if defined(__x86_64__) || defined(__i386__)
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

namespace {
std::atomic<int> g_isa{-1};

Isa resolve() {
  int v = g_isa.load(std::memory_order_relaxed);
  if (v < 0) {
    v = cpu_has_avx2() ? static_cast<int>(Isa::Avx2) : static_cast<int>(Isa::Scalar);
    g_isa.store(v, std::memory_order_relaxed);
  }
  return static_cast<Isa>(v);
}
}  // namespace

Isa active_isa() { return resolve(); }

void set_isa(Isa isa) {
  if (isa == Isa::Avx2 && !cpu_has_avx2()) isa = Isa::Scalar;
  g_isa.store(static_cast<int>(isa), std::memory_order_relaxed);
}

std::string_view isa_name(Isa isa) { return isa == Isa::Avx2 ? "avx2" : "scalar"; }

void pair_inverse_power(const cplx* x, std::size_t n, int k, cplx* out) {
  if (resolve() == Isa::Avx2) return avx2::pair_inverse_power(x, n, k, out);
  scalar::pair_inverse_power(x, n, k, out);
}

cplx bilinear_dot(const cplx* a, const cplx* b, std::size_t n) {
  if (resolve() == Isa::Avx2) return avx2::bilinear_dot(a, b, n);
  return scalar::bilinear_dot(a, b, n);
}

}  // namespace singap::simd
