// AVX2 variants of the gather-accumulate kernels.  Four independent Kahan
// accumulator lanes, reduced in a fixed order at the end so results are
// deterministic for a given backend.

#include <immintrin.h>

#include "bkl/kernels.hpp"

namespace bkl::kernels {

namespace {

struct KahanLanes {
  __m256d s = _mm256_setzero_pd();
  __m256d c = _mm256_setzero_pd();

  inline void add(__m256d v) {
    __m256d y = _mm256_sub_pd(v, c);
    __m256d t = _mm256_add_pd(s, y);
    c = _mm256_sub_pd(_mm256_sub_pd(t, s), y);
    s = t;
  }

  double reduce() const {
    alignas(32) double lane[4];
    _mm256_store_pd(lane, s);
    return (lane[0] + lane[1]) + (lane[2] + lane[3]);
  }
};

}  // namespace

cplx sum_gather1_avx2(const RouTable& a, const uint32_t* idx_a, size_t n) {
  KahanLanes sr, si;
  size_t j = 0;
  for (; j + 4 <= n; j += 4) {
    __m128i ia = _mm_loadu_si128(reinterpret_cast<const __m128i*>(idx_a + j));
    sr.add(_mm256_i32gather_pd(a.re.data(), ia, 8));
    si.add(_mm256_i32gather_pd(a.im.data(), ia, 8));
  }
  KahanSum tail;
  for (; j < n; ++j) tail.add(a.at(idx_a[j]));
  return cplx{sr.reduce(), si.reduce()} + tail.value();
}

cplx sum_gather2_avx2(const RouTable& a, const uint32_t* idx_a, const RouTable& b,
                      const uint32_t* idx_b, size_t n) {
  KahanLanes sr, si;
  size_t j = 0;
  for (; j + 4 <= n; j += 4) {
    __m128i ia = _mm_loadu_si128(reinterpret_cast<const __m128i*>(idx_a + j));
    __m128i ib = _mm_loadu_si128(reinterpret_cast<const __m128i*>(idx_b + j));
    __m256d ar = _mm256_i32gather_pd(a.re.data(), ia, 8);
    __m256d ai = _mm256_i32gather_pd(a.im.data(), ia, 8);
    __m256d br = _mm256_i32gather_pd(b.re.data(), ib, 8);
    __m256d bi = _mm256_i32gather_pd(b.im.data(), ib, 8);
    sr.add(_mm256_fmsub_pd(ar, br, _mm256_mul_pd(ai, bi)));
    si.add(_mm256_fmadd_pd(ar, bi, _mm256_mul_pd(ai, br)));
  }
  KahanSum tail;
  for (; j < n; ++j) {
    const double ar = a.re[idx_a[j]], ai = a.im[idx_a[j]];
    const double br = b.re[idx_b[j]], bi = b.im[idx_b[j]];
    tail.add({ar * br - ai * bi, ar * bi + ai * br});
  }
  return cplx{sr.reduce(), si.reduce()} + tail.value();
}

}  // namespace bkl::kernels
