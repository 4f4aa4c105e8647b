#include <immintrin.h>

#include <stdexcept>
#include <vector>

#include "singap/simd.hpp"

namespace singap::simd::avx2 {

namespace {
double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}
}  // namespace

void pair_inverse_power(const cplx* x, std::size_t n, int k, cplx* out) {
  if (k != 2 && k != 3) throw std::invalid_argument("pair_inverse_power: k must be 2 or 3");
  std::vector<double> re(n), im(n);
  for (std::size_t i = 0; i < n; ++i) {
    re[i] = x[i].real();
    im[i] = x[i].imag();
  }
  const std::size_t nv = n - n % 4;
  const __m256d zero = _mm256_setzero_pd();
  const __m256d two = _mm256_set1_pd(2.0);
  const __m256d three = _mm256_set1_pd(3.0);
  for (std::size_t j = 0; j < n; ++j) {
    const __m256d xr = _mm256_set1_pd(re[j]);
    const __m256d xi = _mm256_set1_pd(im[j]);
    __m256d sr = zero, si = zero;
    for (std::size_t p = 0; p < nv; p += 4) {
      const __m256d a = _mm256_sub_pd(xr, _mm256_loadu_pd(&re[p]));
      const __m256d b = _mm256_sub_pd(xi, _mm256_loadu_pd(&im[p]));
      const __m256d a2 = _mm256_mul_pd(a, a);
      const __m256d b2 = _mm256_mul_pd(b, b);
      const __m256d r2 = _mm256_add_pd(a2, b2);
      __m256d nr, ni, den;
      if (k == 2) {
        // conj(d)^2 / |d|^4
        nr = _mm256_sub_pd(a2, b2);
        ni = _mm256_mul_pd(_mm256_mul_pd(two, a), b);
        ni = _mm256_sub_pd(zero, ni);
        den = _mm256_mul_pd(r2, r2);
      } else {
        // conj(d)^3 / |d|^6
        nr = _mm256_mul_pd(a, _mm256_fnmadd_pd(three, b2, a2));
        ni = _mm256_mul_pd(b, _mm256_fnmadd_pd(three, a2, b2));
        den = _mm256_mul_pd(_mm256_mul_pd(r2, r2), r2);
      }
      const __m256d keep = _mm256_cmp_pd(r2, zero, _CMP_NEQ_OQ);
      sr = _mm256_add_pd(sr, _mm256_and_pd(keep, _mm256_div_pd(nr, den)));
      si = _mm256_add_pd(si, _mm256_and_pd(keep, _mm256_div_pd(ni, den)));
    }
    cplx s(hsum(sr), hsum(si));
    for (std::size_t p = nv; p < n; ++p) {
      if (p == j) continue;
      const cplx d = x[j] - x[p];
      const cplx d2 = d * d;
      s += k == 2 ? 1.0 / d2 : 1.0 / (d2 * d);
    }
    out[j] = s;
  }
}

cplx bilinear_dot(const cplx* a, const cplx* b, std::size_t n) {
  const double* pa = reinterpret_cast<const double*>(a);
  const double* pb = reinterpret_cast<const double*>(b);
  __m256d acc = _mm256_setzero_pd();
  const std::size_t nv = n - n % 2;
  for (std::size_t i = 0; i < nv; i += 2) {
    const __m256d va = _mm256_loadu_pd(pa + 2 * i);
    const __m256d vb = _mm256_loadu_pd(pb + 2 * i);
    const __m256d ar = _mm256_movedup_pd(va);
    const __m256d ai = _mm256_permute_pd(va, 0xF);
    const __m256d bs = _mm256_permute_pd(vb, 0x5);
    acc = _mm256_add_pd(acc, _mm256_fmaddsub_pd(ar, vb, _mm256_mul_pd(ai, bs)));
  }
  alignas(32) double t[4];
  _mm256_store_pd(t, acc);
  cplx s(t[0] + t[2], t[1] + t[3]);
  for (std::size_t i = nv; i < n; ++i) s += a[i] * b[i];
  return s;
}

}  // namespace singap::simd::avx2
