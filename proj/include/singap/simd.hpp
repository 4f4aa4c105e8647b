#pragma once

#include <complex>
#include <cstddef>
#include <string_view>

namespace singap::simd {

using cplx = std::complex<double>;

enum class Isa { Scalar, Avx2 };

/// Kernel set chosen at first use: AVX2+FMA when the CPU reports both.
Isa active_isa();
/// Overrides the dispatch (tests and benchmarks). Requesting Avx2 on a CPU
/// without it falls back to Scalar.
void set_isa(Isa isa);
bool cpu_has_avx2();
std::string_view isa_name(Isa isa);

/// out[j] = sum over p != j of (x[j] - x[p])^(-k), for k = 2 or 3.
void pair_inverse_power(const cplx* x, std::size_t n, int k, cplx* out);

/// Bilinear sum a[0]*b[0] + ... + a[n-1]*b[n-1] (no conjugation).
cplx bilinear_dot(const cplx* a, const cplx* b, std::size_t n);

namespace scalar {
void pair_inverse_power(const cplx* x, std::size_t n, int k, cplx* out);
cplx bilinear_dot(const cplx* a, const cplx* b, std::size_t n);
}  // namespace scalar

namespace avx2 {
void pair_inverse_power(const cplx* x, std::size_t n, int k, cplx* out);
cplx bilinear_dot(const cplx* a, const cplx* b, std::size_t n);
}  // namespace avx2

}  // namespace singap::simd
