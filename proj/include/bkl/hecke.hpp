#pragma once

// Brute-force oracle at tiny scale: builds GL_n(F_q) explicitly, forms the
// convolution algebra of bi-(U, psi)-equivariant functions, and extracts the
// normalized Bessel functions as its common eigenfunctions.  Deliberately
// self-contained: it carries its own little F_q arithmetic and shares nothing
// with the character-sum pipelines beyond complex numbers, so a match against
// them is an independent validation.

#include <complex>
#include <cstdint>
#include <vector>

#include "bkl/error.hpp"

namespace bkl {

class BesselContext;         // bessel.hpp
struct GenericRepParams;     // reps.hpp

namespace hecke {

using cplx = std::complex<double>;

/// GL_n(F_q) as an explicit element table with a multiplication oracle.
class GroupTable {
public:
  static constexpr uint64_t kSizeCap = 50000;

  GroupTable(unsigned n, uint64_t p, unsigned e, uint64_t size_cap = kSizeCap);

  unsigned n() const { return n_; }
  uint64_t p() const { return p_; }
  unsigned q() const { return q_; }
  size_t size() const { return elems_.size(); }
  size_t unipotent_size() const { return unipotent_.size(); }

  uint32_t identity() const { return id_identity_; }
  uint32_t mul(uint32_t a, uint32_t b) const;
  uint32_t inverse(uint32_t a) const { return inv_[a]; }
  const std::vector<uint8_t>& entries(uint32_t a) const { return elems_[a]; }
  const std::vector<uint32_t>& unipotent() const { return unipotent_; }

  // self-contained F_q helpers (element codes 0..q-1, base-p digits)
  uint8_t fadd(uint8_t a, uint8_t b) const { return add_[a * q_ + b]; }
  uint8_t fmul(uint8_t a, uint8_t b) const { return mul_[a * q_ + b]; }
  uint8_t fneg(uint8_t a) const { return neg_[a]; }
  uint8_t finv(uint8_t a) const;
  unsigned ftrace_p(uint8_t a) const { return trace_[a]; }

  /// psi_b on U: zeta_p ^ Tr_{F_q/F_p}(b * sum of superdiagonal entries).
  cplx psi_on_unipotent(uint32_t u, uint8_t b) const;

  uint32_t lookup(const std::vector<uint8_t>& mat) const;  // id or throws

private:
  void build_field();
  unsigned n_ = 2, q_ = 2, e_ = 1;
  uint64_t p_ = 2;
  std::vector<uint8_t> add_, mul_, neg_, inv_tab_;
  std::vector<unsigned> trace_;
  std::vector<std::vector<uint8_t>> elems_;
  std::vector<int32_t> packed_to_id_;
  std::vector<uint32_t> inv_;
  std::vector<uint32_t> unipotent_;
  uint32_t id_identity_ = 0;
};

/// Support point with scalars as F_q codes.
struct HeckePoint {
  std::vector<unsigned> blocks;
  std::vector<uint8_t> scalars;
};

struct EquivariantFunction {
  std::vector<cplx> point_values;  // indexed like Oracle::points
};

struct Oracle {
  std::vector<HeckePoint> points;
  size_t identity_point = 0;          // index of ((n), (1))
  std::vector<EquivariantFunction> functions;
  double commutator_max = 0.0;        // max |f*h - h*f| over basis pairs
  double offsupport_max = 0.0;        // consistency of the coset construction
};

std::vector<HeckePoint> support_points(const GroupTable& G);

/// Builds the convolution algebra and extracts the q^n - q^{n-1} normalized
/// common eigenfunctions.  Throws DiagonalizationDegenerate after max_draws
/// re-randomizations of the generic element (draws seeded from seed_base).
Oracle bessel_functions_numeric(const GroupTable& G, uint8_t psi_twist, unsigned max_draws = 5,
                                uint64_t seed_base = 0x42);

struct MatchResult {
  std::vector<size_t> class_to_function;  // per enumerated iso class
  double max_value_deviation = 0.0;       // over all matched points
  double min_second_best = 0.0;           // separation of the matching
};

/// Bijective matching of oracle eigenfunctions to parameter classes by
/// central character and nearest-vector distance against the gamma-recursion
/// pipeline.  Requires prime q.  Throws AmbiguousMatch when thresholds fail.
MatchResult match_oracle_to_params(const Oracle& oracle, const GroupTable& G,
                                   BesselContext& ctx, uint8_t psi_twist);

}  // namespace hecke
}  // namespace bkl
