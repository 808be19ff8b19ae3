#pragma once

// Multiplicative characters of F_{q^d}^x (exponent-encoded against the
// deterministic subfield generators), the canonical additive character
// family, Frobenius orbits, and enumeration of character tuples.

#include <complex>
#include <cstdint>
#include <functional>
#include <vector>

#include "bkl/ff.hpp"

namespace bkl {

using cplx = std::complex<double>;

/// exp(2*pi*i * num/den), with the fraction reduced mod 1 exactly first.
cplx unit_phase(uint64_t num, uint64_t den);

/// Character x -> exp(2*pi*i * k * dlog_d(x) / (q^d - 1)) of F_{q^d}^x.
struct MulChar {
  unsigned d = 1;
  uint64_t k = 0;

  bool is_trivial() const { return k == 0; }
};

/// Twisted canonical additive character psi_b(x) = psi(b x), b in F_q^x;
/// evaluated on subfields through psi_r = psi o Tr.
struct AddChar {
  Fe b{1};
};

cplx mul_char_value(const AmbientField& F, const MulChar& chi, Fe x);
cplx add_char_value(const AmbientField& F, const AddChar& psi, Fe x, unsigned r);

MulChar mul_char_inverse(const AmbientField& F, const MulChar& chi);
AddChar add_char_inverse(const AmbientField& F, const AddChar& psi);

/// Exponent orbit {k q^i mod (q^d - 1)}, sorted ascending.
std::vector<uint64_t> frobenius_orbit(uint64_t q, unsigned d, uint64_t k);
bool is_regular(uint64_t q, unsigned d, uint64_t k);
/// Size of the Frobenius orbit of exponent k on F_{q^d}^x (divides d).
unsigned orbit_degree(uint64_t q, unsigned d, uint64_t k);

/// Inflation along the norm: chi of degree d' to degree d, d' | d.
MulChar char_inflate(uint64_t q, const MulChar& chi, unsigned d);

/// A character tuple beta in the product of the character groups attached to
/// the parts of mu.
struct CharTuple {
  std::vector<unsigned> mu;     // composition / partition parts
  std::vector<MulChar> chars;   // chars[j].d == mu[j]

  unsigned size() const;        // |mu|
};

/// Calls fn for each of prod_j (q^{m_j} - 1) tuples, exactly once each, in a
/// fixed odometer order.
void for_each_char_tuple(const std::vector<unsigned>& mu, uint64_t q,
                         const std::function<void(const CharTuple&)>& fn);

uint64_t char_tuple_count(const std::vector<unsigned>& mu, uint64_t q);  // phi_mu(q)

}  // namespace bkl
