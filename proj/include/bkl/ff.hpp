#pragma once

// Arithmetic in F_{q^N} with every subfield F_{q^d} (d | N) realized inside
// one ambient field.  Elements are stored as base-p packed coefficient
// vectors ("codes"); multiplication goes through dense exp/dlog tables built
// once at construction.  The modulus is the lexicographically smallest monic
// irreducible of degree e*N over F_p and the generator is the smallest code
// of full multiplicative order, so all labels are reproducible bit-for-bit.

#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "bkl/error.hpp"

namespace bkl {

struct PrimePower {
  uint64_t p = 2;
  unsigned e = 1;

  uint64_t q() const;
  void validate() const;  // throws invalid_prime
};

/// Element of the ambient field, as the integer code sum c_i * p^i of its
/// coefficient vector (c_0 .. c_{D-1}) over F_p.
struct Fe {
  uint32_t code = 0;

  bool is_zero() const { return code == 0; }
  friend bool operator==(Fe a, Fe b) { return a.code == b.code; }
  friend auto operator<=>(Fe a, Fe b) { return a.code <=> b.code; }
};

class AmbientField {
public:
  static constexpr uint64_t kDefaultCap = (uint64_t(1) << 24) - 1;  // on q^N - 1

  AmbientField(PrimePower base, unsigned N, uint64_t table_cap = kDefaultCap);

  const PrimePower& base() const { return base_; }
  uint64_t p() const { return base_.p; }
  uint64_t q() const { return q_; }
  unsigned ext_degree() const { return N_; }
  unsigned fp_degree() const { return D_; }             // e*N over F_p
  uint64_t order() const { return pD_; }                // q^N
  uint64_t units() const { return M_; }                 // q^N - 1
  const std::vector<uint8_t>& modulus() const { return modulus_; }
  Fe generator() const { return gen_; }

  // element basics
  Fe zero() const { return {0}; }
  Fe one() const { return {1}; }
  /// Scalar c mod p embedded in the prime field.
  Fe scalar(uint64_t c) const { return {uint32_t(c % base_.p)}; }
  Fe minus_one() const { return scalar(base_.p - 1); }

  Fe add(Fe a, Fe b) const;
  Fe neg(Fe a) const;
  Fe sub(Fe a, Fe b) const { return add(a, neg(b)); }
  Fe mul(Fe a, Fe b) const;
  Fe inv(Fe a) const;
  Fe pow(Fe a, uint64_t k) const;

  uint64_t dlog(Fe x) const;        // throws zero_argument
  Fe from_dlog(uint64_t k) const { return {exp_[k % M_]}; }

  // subfield structure (degrees over F_q)
  bool degree_divides(unsigned d) const { return d >= 1 && N_ % d == 0; }
  uint64_t subfield_units(unsigned d) const;                 // q^d - 1
  Fe subfield_generator(unsigned d) const;                   // g_d
  bool in_subfield(Fe x, unsigned d) const;
  /// dlog of x relative to g_d; requires x in F_{q^d}^x.
  uint64_t subfield_dlog(Fe x, unsigned d) const;
  Fe from_subfield_dlog(uint64_t w, unsigned d) const;

  Fe frobenius_q(Fe x) const;                                // x^q
  Fe norm(Fe x, unsigned l, unsigned m) const;               // N_{l/m}
  Fe trace(Fe x, unsigned l, unsigned m) const;              // Tr_{l/m}
  /// Tr_{F_{q^r}/F_p}(x) as an integer in [0, p); requires x in F_{q^r}.
  uint64_t abs_trace_p(Fe x, unsigned r) const;

  uint64_t qpow(unsigned d) const;                           // q^d

  // dlog-table cache file ("BKL1" format)
  void save_cache(const std::string& path) const;
  static std::optional<AmbientField> load_cache(const std::string& path, PrimePower base,
                                                unsigned N, uint64_t table_cap = kDefaultCap);

  /// Build with an optional cache directory: loads the dlog table when a
  /// valid cache file exists, otherwise builds and writes one.
  static AmbientField make_cached(PrimePower base, unsigned N, uint64_t table_cap,
                                  const std::string& cache_dir);

private:
  struct from_cache_tag {};
  AmbientField(from_cache_tag, PrimePower base, unsigned N, std::vector<uint8_t> modulus, Fe gen,
               std::vector<uint32_t> dlog);

  void derive_sizes(uint64_t table_cap);
  void check_subfield_arg(unsigned d, const char* who) const;
  void rebuild_exp_from_dlog();

  PrimePower base_;
  unsigned N_ = 1, D_ = 1;
  uint64_t q_ = 2, pD_ = 2, M_ = 1;
  std::vector<uint8_t> modulus_;  // D_+1 coefficients over F_p, constant term first
  Fe gen_;
  std::vector<uint32_t> exp_;   // exp_[k] = code of g^k, size M_
  std::vector<uint32_t> dlog_;  // dlog_[code], size pD_; dlog_[0] unused
};

// small number-theory helpers shared across modules
bool is_prime_u64(uint64_t n);
std::vector<uint64_t> prime_factors(uint64_t n);  // distinct primes
uint64_t gcd_u64(uint64_t a, uint64_t b);
uint64_t lcm_u64(uint64_t a, uint64_t b);
uint64_t ipow_u64(uint64_t b, unsigned e);  // throws on overflow

inline uint64_t mulmod_u64(uint64_t a, uint64_t b, uint64_t m) {
  return uint64_t((unsigned __int128)(a) * b % m);
}

}  // namespace bkl
