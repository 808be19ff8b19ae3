#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <vector>

#include "bkl/kernels.hpp"

using namespace bkl;
using kernels::Backend;
using kernels::RouTable;

namespace {

std::complex<double> naive_phase_sum(const RouTable& a, const std::vector<uint32_t>& ia) {
  std::complex<double> s = 0.0;
  for (uint32_t i : ia) s += std::polar(1.0, 2.0 * std::numbers::pi * double(i) / double(a.den));
  return s;
}

}  // namespace

TEST_CASE("root-of-unity table matches std::polar") {
  RouTable t(360);
  for (uint64_t i = 0; i < 360; ++i) {
    auto ref = std::polar(1.0, 2.0 * std::numbers::pi * double(i) / 360.0);
    CHECK(std::abs(t.at(i) - ref) < 1e-14);
  }
  CHECK(t.at(0) == std::complex<double>(1.0, 0.0));
  CHECK(t.at(180) == std::complex<double>(-1.0, 0.0));
  CHECK(t.at(90) == std::complex<double>(0.0, 1.0));
}

TEST_CASE("gather kernels match the naive reference and each other") {
  std::mt19937_64 rng(7);
  RouTable a(1021), b(13);
  for (size_t n : {size_t(0), size_t(1), size_t(3), size_t(17), size_t(4096), size_t(100003)}) {
    std::vector<uint32_t> ia(n), ib(n);
    for (size_t j = 0; j < n; ++j) {
      ia[j] = uint32_t(rng() % a.den);
      ib[j] = uint32_t(rng() % b.den);
    }

    kernels::set_backend(Backend::scalar);
    auto s1 = kernels::sum_gather1(a, ia.data(), n);
    auto s2 = kernels::sum_gather2(a, ia.data(), b, ib.data(), n);

    CHECK(std::abs(s1 - naive_phase_sum(a, ia)) < 1e-10 * (1.0 + double(n)));

    std::complex<double> ref2 = 0.0;
    for (size_t j = 0; j < n; ++j) ref2 += a.at(ia[j]) * b.at(ib[j]);
    CHECK(std::abs(s2 - ref2) < 1e-9 * (1.0 + double(n)));

#if defined(__x86_64__)
    if (__builtin_cpu_supports("avx2")) {
      kernels::set_backend(Backend::avx2);
      auto v1 = kernels::sum_gather1(a, ia.data(), n);
      auto v2 = kernels::sum_gather2(a, ia.data(), b, ib.data(), n);
      CHECK(std::abs(v1 - s1) < 1e-12 * (1.0 + double(n)));
      CHECK(std::abs(v2 - s2) < 1e-12 * (1.0 + double(n)));
    }
#endif
    kernels::set_backend_auto();
  }
}

TEST_CASE("full-turn phase sums cancel") {
  RouTable a(4097);
  std::vector<uint32_t> ia(4097);
  for (uint32_t i = 0; i < 4097; ++i) ia[i] = i;
  for (auto be : {Backend::scalar, Backend::avx2}) {
    if (be == Backend::avx2 && kernels::active_backend() != Backend::avx2) continue;
    kernels::set_backend(be);
    CHECK(std::abs(kernels::sum_gather1(a, ia.data(), ia.size())) < 1e-10);
  }
  kernels::set_backend_auto();
}

TEST_CASE("kahan accumulator is stable for long alternating sums") {
  kernels::KahanSum s;
  for (int i = 0; i < 1000000; ++i) s.add({i % 2 ? 1e-8 : -1e-8, 0.0});
  CHECK(std::abs(s.value()) < 1e-12);
}
