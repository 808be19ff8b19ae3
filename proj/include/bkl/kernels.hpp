#pragma once

// Inner-loop kernels for character-sum accumulation.
//
// Every big sum in this library reduces to the same shape: a stream of terms,
// each a product of one or two unit-modulus complex numbers fetched from
// precomputed root-of-unity tables by integer index, accumulated with
// compensated (Kahan) summation in a fixed order.  A scalar reference kernel
// and an AVX2 variant implement that shape; the active backend is chosen at
// runtime (cpuid, overridable via BKL_KERNEL=scalar|avx2) and the two are
// equivalence-tested against each other and against a naive std::polar loop.

#include <complex>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace bkl::kernels {

using cplx = std::complex<double>;

/// Table of the den-th roots of unity, split into separate re/im arrays so
/// SIMD gathers stay contiguous.  tab[i] = exp(2*pi*i*\sqrt{-1}/den).
struct RouTable {
  uint64_t den = 1;
  std::vector<double> re, im;

  explicit RouTable(uint64_t den);
  cplx at(uint64_t idx) const { return {re[idx], im[idx]}; }
  size_t size() const { return re.size(); }
};

// Largest root-of-unity table the library will materialize (entries).  Sums
// whose denominator exceeds this fall back to direct per-term evaluation.
inline constexpr uint64_t kMaxRouTableEntries = uint64_t(1) << 22;

/// sum of a[idx_a[j]] for j < n.
cplx sum_gather1(const RouTable& a, const uint32_t* idx_a, size_t n);

/// sum of a[idx_a[j]] * b[idx_b[j]] for j < n.
cplx sum_gather2(const RouTable& a, const uint32_t* idx_a, const RouTable& b,
                 const uint32_t* idx_b, size_t n);

enum class Backend { scalar, avx2 };

Backend active_backend();
std::string backend_name();
/// Force a backend (tests / BKL_KERNEL env); throws if unavailable.
void set_backend(Backend b);
void set_backend_auto();

/// Plain Kahan accumulator; used wherever terms do not come from a table.
class KahanSum {
public:
  void add(cplx v) {
    add_part(v.real(), re_, re_c_);
    add_part(v.imag(), im_, im_c_);
  }
  cplx value() const { return {re_, im_}; }

private:
  static void add_part(double v, double& s, double& c) {
    double y = v - c;
    double t = s + y;
    c = (t - s) - y;
    s = t;
  }
  double re_ = 0, im_ = 0, re_c_ = 0, im_c_ = 0;
};

}  // namespace bkl::kernels
