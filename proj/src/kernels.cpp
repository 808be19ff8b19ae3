#include "bkl/kernels.hpp"

#include <cmath>
#include <cstdlib>
#include <numbers>

#include "bkl/error.hpp"

namespace bkl::kernels {

RouTable::RouTable(uint64_t d) : den(d) {
  require(d >= 1, errc::invalid_argument, "root-of-unity denominator must be positive");
  require(d <= kMaxRouTableEntries, errc::cost_exceeded, "root-of-unity table too large");
  re.resize(d);
  im.resize(d);
  const double w = 2.0 * std::numbers::pi / double(d);
  for (uint64_t i = 0; i < d; ++i) {
    re[i] = std::cos(w * double(i));
    im[i] = std::sin(w * double(i));
  }
  // pin the exact points so small denominators stay bit-clean
  re[0] = 1.0;
  im[0] = 0.0;
  if (d % 2 == 0) {
    re[d / 2] = -1.0;
    im[d / 2] = 0.0;
  }
  if (d % 4 == 0) {
    re[d / 4] = 0.0;
    im[d / 4] = 1.0;
    re[3 * d / 4] = 0.0;
    im[3 * d / 4] = -1.0;
  }
}

namespace {

cplx sum_gather1_scalar(const RouTable& a, const uint32_t* idx_a, size_t n) {
  KahanSum s;
  for (size_t j = 0; j < n; ++j) s.add(a.at(idx_a[j]));
  return s.value();
}

cplx sum_gather2_scalar(const RouTable& a, const uint32_t* idx_a, const RouTable& b,
                        const uint32_t* idx_b, size_t n) {
  KahanSum s;
  for (size_t j = 0; j < n; ++j) {
    const double ar = a.re[idx_a[j]], ai = a.im[idx_a[j]];
    const double br = b.re[idx_b[j]], bi = b.im[idx_b[j]];
    s.add({ar * br - ai * bi, ar * bi + ai * br});
  }
  return s.value();
}

#if BKL_BUILD_AVX2
bool avx2_available() { return __builtin_cpu_supports("avx2"); }
#else
bool avx2_available() { return false; }
#endif

Backend pick_default() {
  if (const char* env = std::getenv("BKL_KERNEL")) {
    std::string v(env);
    if (v == "scalar") return Backend::scalar;
    if (v == "avx2" && avx2_available()) return Backend::avx2;
  }
  return avx2_available() ? Backend::avx2 : Backend::scalar;
}

Backend g_backend = pick_default();

}  // namespace

#if BKL_BUILD_AVX2
// defined in kernels_avx2.cpp
cplx sum_gather1_avx2(const RouTable& a, const uint32_t* idx_a, size_t n);
cplx sum_gather2_avx2(const RouTable& a, const uint32_t* idx_a, const RouTable& b,
                      const uint32_t* idx_b, size_t n);
#endif

cplx sum_gather1(const RouTable& a, const uint32_t* idx_a, size_t n) {
#if BKL_BUILD_AVX2
  if (g_backend == Backend::avx2) return sum_gather1_avx2(a, idx_a, n);
#endif
  return sum_gather1_scalar(a, idx_a, n);
}

cplx sum_gather2(const RouTable& a, const uint32_t* idx_a, const RouTable& b,
                 const uint32_t* idx_b, size_t n) {
#if BKL_BUILD_AVX2
  if (g_backend == Backend::avx2) return sum_gather2_avx2(a, idx_a, b, idx_b, n);
#endif
  return sum_gather2_scalar(a, idx_a, b, idx_b, n);
}

Backend active_backend() { return g_backend; }

std::string backend_name() { return g_backend == Backend::avx2 ? "avx2" : "scalar"; }

void set_backend(Backend b) {
  if (b == Backend::avx2 && !avx2_available())
    fail(errc::invalid_argument, "avx2 backend not available on this host");
  g_backend = b;
}

void set_backend_auto() { g_backend = pick_default(); }

}  // namespace bkl::kernels
