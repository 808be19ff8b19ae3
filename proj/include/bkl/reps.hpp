#pragma once

// The Pi_lambda(alpha) parameter calculus for irreducible generic
// representations of GL_n(F_q): canonical (Frobenius-orbit) forms,
// isomorphism testing, central characters, dimensions, enumeration, and
// Shintani base-change parameters.

#include <boost/multiprecision/cpp_int.hpp>
#include <compare>
#include <vector>

#include "bkl/chars.hpp"
#include "bkl/ff.hpp"
#include "bkl/symfun.hpp"

namespace bkl {

using bigint = boost::multiprecision::cpp_int;

/// Parameters (q, lambda, alpha) identifying Pi_lambda(alpha).
struct GenericRepParams {
  uint64_t q = 2;
  std::vector<unsigned> lambda;  // partition of n
  CharTuple alpha;               // alpha.mu == lambda

  unsigned n() const;
  void validate() const;
};

/// One Frobenius orbit in the support of the parameter, with multiplicity.
struct OrbitComponent {
  unsigned d = 1;     // orbit degree
  uint64_t rep = 0;   // minimal exponent in the orbit, on F_{q^d}^x
  unsigned s = 1;     // multiplicity

  friend auto operator<=>(const OrbitComponent&, const OrbitComponent&) = default;
};

/// Canonical iso-class key: components sorted by (d, rep); sum d_i s_i = n.
struct CanonicalRepForm {
  uint64_t q = 2;
  std::vector<OrbitComponent> comps;

  unsigned n() const;
  friend bool operator==(const CanonicalRepForm&, const CanonicalRepForm&) = default;
  friend auto operator<=>(const CanonicalRepForm&, const CanonicalRepForm&) = default;
};

/// Anti-diagonal scalar-block matrix g_{n_1..n_s}(c_1..c_s): block sizes as
/// an ordered composition of n, scalars in F_q^x.
struct SupportPoint {
  std::vector<unsigned> blocks;
  std::vector<Fe> scalars;
};

CanonicalRepForm canonicalize(const GenericRepParams& P);
bool is_isomorphic(const GenericRepParams& P1, const GenericRepParams& P2);

/// The canonical realization: s_i parts of size d_i carrying the orbit
/// representative character, parts ordered (d desc, rep asc).
GenericRepParams realize(const CanonicalRepForm& form);

/// omega_pi(z) = prod_j alpha_j(z), z in F_q^x embedded in each F_{q^{n_j}}.
cplx central_character(const AmbientField& F, const GenericRepParams& P, Fe z);

/// dim Pi = [GL_n : U_n] prod_i q^{d_i s_i (s_i - 1)/2} / prod_{j<=s_i} (q^{d_i j} - 1),
/// evaluated exactly.
bigint dimension(const CanonicalRepForm& form);

bigint gl_to_unipotent_index(uint64_t q, unsigned n);  // prod_{j=1}^n (q^j - 1)
bigint gl_order(uint64_t q, unsigned n);

/// All q^n - q^{n-1} iso classes of irreducible generic representations.
std::vector<CanonicalRepForm> enumerate_generic(unsigned n, uint64_t q);

/// alpha_j -> alpha_j^{-1}.
GenericRepParams contragredient(const GenericRepParams& P);

/// Shintani base change to GL_n(F_{q^k}); result parameters live over q^k.
GenericRepParams shintani_base_change(const GenericRepParams& P, unsigned k);

/// All support points of GL_n(F_q) (compositions of n with unit scalars),
/// scalars drawn from F_q^x in subfield-dlog order.  q^n - q^{n-1} of them.
std::vector<SupportPoint> enumerate_support_points(const AmbientField& F, unsigned n);

}  // namespace bkl
