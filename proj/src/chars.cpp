#include "bkl/chars.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace bkl {

cplx unit_phase(uint64_t num, uint64_t den) {
  num %= den;
  if (num == 0) return {1.0, 0.0};
  if (2 * num == den) return {-1.0, 0.0};
  if (4 * num == den) return {0.0, 1.0};
  if (4 * num == 3 * den) return {0.0, -1.0};
  const double a = 2.0 * std::numbers::pi * (double(num) / double(den));
  return {std::cos(a), std::sin(a)};
}

cplx mul_char_value(const AmbientField& F, const MulChar& chi, Fe x) {
  require(!x.is_zero(), errc::zero_argument, "multiplicative character at zero");
  const uint64_t Md = F.subfield_units(chi.d);
  const uint64_t w = F.subfield_dlog(x, chi.d);
  return unit_phase(chi.k % Md * (w % Md) % Md, Md);
}

cplx add_char_value(const AmbientField& F, const AddChar& psi, Fe x, unsigned r) {
  require(!psi.b.is_zero() && F.in_subfield(psi.b, 1), errc::invalid_argument,
          "additive character twist must lie in F_q^x");
  require(F.in_subfield(x, r), errc::degree_mismatch, "add_char_value: element outside F_{q^r}");
  // psi_r(x) = psi(b * Tr_{r/1}(x)) = zeta_p ^ Tr_{F_{q^r}/F_p}(b x)
  return unit_phase(F.abs_trace_p(F.mul(psi.b, x), r), F.p());
}

MulChar mul_char_inverse(const AmbientField& F, const MulChar& chi) {
  const uint64_t Md = F.subfield_units(chi.d);
  return {chi.d, (Md - chi.k % Md) % Md};
}

AddChar add_char_inverse(const AmbientField& F, const AddChar& psi) { return {F.neg(psi.b)}; }

std::vector<uint64_t> frobenius_orbit(uint64_t q, unsigned d, uint64_t k) {
  const uint64_t Md = ipow_u64(q, d) - 1;
  std::vector<uint64_t> orbit;
  uint64_t cur = k % Md;
  do {
    orbit.push_back(cur);
    cur = mulmod_u64(cur, q % Md, Md);
  } while (cur != k % Md);
  std::sort(orbit.begin(), orbit.end());
  return orbit;
}

unsigned orbit_degree(uint64_t q, unsigned d, uint64_t k) {
  return unsigned(frobenius_orbit(q, d, k).size());
}

bool is_regular(uint64_t q, unsigned d, uint64_t k) { return orbit_degree(q, d, k) == d; }

MulChar char_inflate(uint64_t q, const MulChar& chi, unsigned d) {
  require(d % chi.d == 0, errc::degree_not_dividing, "char_inflate: d' does not divide d");
  const uint64_t Mdp = ipow_u64(q, chi.d) - 1;
  const uint64_t Md = ipow_u64(q, d) - 1;
  return {d, chi.k % Mdp * (Md / Mdp) % Md};
}

unsigned CharTuple::size() const {
  unsigned n = 0;
  for (unsigned m : mu) n += m;
  return n;
}

uint64_t char_tuple_count(const std::vector<unsigned>& mu, uint64_t q) {
  uint64_t n = 1;
  for (unsigned m : mu) n *= ipow_u64(q, m) - 1;
  return n;
}

void for_each_char_tuple(const std::vector<unsigned>& mu, uint64_t q,
                         const std::function<void(const CharTuple&)>& fn) {
  CharTuple t;
  t.mu = mu;
  t.chars.reserve(mu.size());
  std::vector<uint64_t> limits;
  for (unsigned m : mu) {
    t.chars.push_back({m, 0});
    limits.push_back(ipow_u64(q, m) - 1);
  }
  while (true) {
    fn(t);
    size_t j = 0;
    for (; j < t.chars.size(); ++j) {
      if (++t.chars[j].k < limits[j]) break;
      t.chars[j].k = 0;
    }
    if (j == t.chars.size()) return;
  }
}

}  // namespace bkl
