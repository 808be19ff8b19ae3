#include "bkl/reps.hpp"

#include <algorithm>
#include <map>

namespace bkl {

unsigned GenericRepParams::n() const {
  unsigned n = 0;
  for (unsigned p : lambda) n += p;
  return n;
}

void GenericRepParams::validate() const {
  require(!lambda.empty(), errc::invalid_argument, "empty parameter partition");
  require(alpha.mu == lambda && alpha.chars.size() == lambda.size(), errc::degree_mismatch,
          "character tuple does not match lambda");
  for (size_t j = 0; j < lambda.size(); ++j)
    require(alpha.chars[j].d == lambda[j], errc::degree_mismatch,
            "character degree does not match its part");
}

unsigned CanonicalRepForm::n() const {
  unsigned n = 0;
  for (const auto& c : comps) n += c.d * c.s;
  return n;
}

CanonicalRepForm canonicalize(const GenericRepParams& P) {
  P.validate();
  // fold each alpha_j by its true orbit degree, then merge equal orbits
  std::map<std::pair<unsigned, uint64_t>, unsigned> acc;  // (d, rep) -> s
  for (size_t j = 0; j < P.lambda.size(); ++j) {
    const unsigned nj = P.lambda[j];
    const uint64_t Mn = ipow_u64(P.q, nj) - 1;
    const uint64_t k = P.alpha.chars[j].k % Mn;
    const unsigned d = orbit_degree(P.q, nj, k);
    // alpha_j is inflated from a character of F_{q^d}^x
    const uint64_t Md = ipow_u64(P.q, d) - 1;
    const uint64_t stride = Mn / Md;
    require(k % stride == 0, errc::invalid_argument, "orbit degree inconsistent with exponent");
    const auto orbit = frobenius_orbit(P.q, d, k / stride);
    acc[{d, orbit.front()}] += nj / d;
  }
  CanonicalRepForm form;
  form.q = P.q;
  for (const auto& [key, s] : acc) form.comps.push_back({key.first, key.second, s});
  return form;
}

bool is_isomorphic(const GenericRepParams& P1, const GenericRepParams& P2) {
  if (P1.q != P2.q) return false;
  return canonicalize(P1) == canonicalize(P2);
}

GenericRepParams realize(const CanonicalRepForm& form) {
  std::vector<OrbitComponent> comps = form.comps;
  std::sort(comps.begin(), comps.end(), [](const OrbitComponent& a, const OrbitComponent& b) {
    return a.d != b.d ? a.d > b.d : a.rep < b.rep;
  });
  GenericRepParams P;
  P.q = form.q;
  for (const auto& c : comps)
    for (unsigned i = 0; i < c.s; ++i) {
      P.lambda.push_back(c.d);
      P.alpha.mu.push_back(c.d);
      P.alpha.chars.push_back({c.d, c.rep});
    }
  return P;
}

cplx central_character(const AmbientField& F, const GenericRepParams& P, Fe z) {
  P.validate();
  require(!z.is_zero(), errc::zero_argument, "central character at zero");
  require(F.in_subfield(z, 1), errc::degree_mismatch, "central character argument outside F_q");
  cplx out{1.0, 0.0};
  for (const auto& chi : P.alpha.chars) out *= mul_char_value(F, chi, z);
  return out;
}

bigint gl_to_unipotent_index(uint64_t q, unsigned n) {
  bigint out = 1;
  bigint qj = 1;
  for (unsigned j = 1; j <= n; ++j) {
    qj *= q;
    out *= qj - 1;
  }
  return out;
}

bigint gl_order(uint64_t q, unsigned n) {
  bigint u = boost::multiprecision::pow(bigint(q), unsigned(n) * (n - 1) / 2);
  return u * gl_to_unipotent_index(q, n);
}

bigint dimension(const CanonicalRepForm& form) {
  const unsigned n = form.n();
  bigint num = gl_to_unipotent_index(form.q, n);
  bigint den = 1;
  for (const auto& c : form.comps) {
    num *= boost::multiprecision::pow(bigint(form.q), c.d * c.s * (c.s - 1) / 2);
    bigint qd = boost::multiprecision::pow(bigint(form.q), c.d);
    bigint qdj = 1;
    for (unsigned j = 1; j <= c.s; ++j) {
      qdj *= qd;
      den *= qdj - 1;
    }
  }
  require(num % den == 0, errc::invalid_argument, "dimension formula did not clear");
  return num / den;
}

std::vector<CanonicalRepForm> enumerate_generic(unsigned n, uint64_t q) {
  // regular orbit representatives per degree
  std::vector<std::vector<uint64_t>> reps_by_degree(n + 1);
  for (unsigned d = 1; d <= n; ++d) {
    const uint64_t Md = ipow_u64(q, d) - 1;
    for (uint64_t k = 0; k < Md; ++k) {
      const auto orbit = frobenius_orbit(q, d, k);
      if (orbit.size() == d && orbit.front() == k) reps_by_degree[d].push_back(k);
    }
  }
  // flatten in canonical order (d asc, rep asc) and assign multiplicities
  std::vector<std::pair<unsigned, uint64_t>> orbits;
  for (unsigned d = 1; d <= n; ++d)
    for (uint64_t rep : reps_by_degree[d]) orbits.push_back({d, rep});

  std::vector<CanonicalRepForm> out;
  CanonicalRepForm cur;
  cur.q = q;
  auto rec = [&](auto&& self, size_t idx, unsigned rest) -> void {
    if (rest == 0) {
      out.push_back(cur);
      return;
    }
    if (idx >= orbits.size() || orbits[idx].first > rest) return;
    // skip this orbit
    self(self, idx + 1, rest);
    // or take it with multiplicity s >= 1
    const auto [d, rep] = orbits[idx];
    for (unsigned s = 1; s * d <= rest; ++s) {
      cur.comps.push_back({d, rep, s});
      self(self, idx + 1, rest - s * d);
      cur.comps.pop_back();
    }
  };
  rec(rec, 0, n);
  for (auto& f : out) std::sort(f.comps.begin(), f.comps.end());
  std::sort(out.begin(), out.end());
  return out;
}

GenericRepParams contragredient(const GenericRepParams& P) {
  P.validate();
  GenericRepParams out = P;
  for (size_t j = 0; j < out.alpha.chars.size(); ++j) {
    const uint64_t Mn = ipow_u64(P.q, P.lambda[j]) - 1;
    out.alpha.chars[j].k = (Mn - P.alpha.chars[j].k % Mn) % Mn;
  }
  return out;
}

GenericRepParams shintani_base_change(const GenericRepParams& P, unsigned k) {
  P.validate();
  require(k >= 1, errc::invalid_argument, "base change degree must be positive");
  GenericRepParams out;
  out.q = ipow_u64(P.q, k);
  struct Part {
    unsigned size;      // over the new base
    uint64_t exponent;  // on F_{(q^k)^size} = F_{q^lcm}
  };
  std::vector<Part> parts;
  for (size_t j = 0; j < P.lambda.size(); ++j) {
    const unsigned nj = P.lambda[j];
    const unsigned g = unsigned(gcd_u64(nj, k));
    const unsigned l = unsigned(lcm_u64(nj, k));
    const uint64_t Mn = ipow_u64(P.q, nj) - 1;
    const uint64_t Ml = ipow_u64(P.q, l) - 1;
    uint64_t qi = 1;  // q^{i-1} mod Mn
    for (unsigned i = 1; i <= g; ++i) {
      // alpha_j^{q^{i-1}} inflated along N_{l/n_j}
      const uint64_t exp_l = mulmod_u64(P.alpha.chars[j].k % Mn, qi, Mn) * (Ml / Mn) % Ml;
      parts.push_back({l / k, exp_l});
      qi = mulmod_u64(qi, P.q % Mn, Mn);
    }
  }
  std::stable_sort(parts.begin(), parts.end(),
                   [](const Part& a, const Part& b) { return a.size > b.size; });
  for (const auto& p : parts) {
    out.lambda.push_back(p.size);
    out.alpha.mu.push_back(p.size);
    out.alpha.chars.push_back({p.size, p.exponent});
  }
  return out;
}

std::vector<SupportPoint> enumerate_support_points(const AmbientField& F, unsigned n) {
  std::vector<SupportPoint> out;
  const uint64_t Mq = F.q() - 1;
  // compositions of n
  std::vector<std::vector<unsigned>> comps;
  std::vector<unsigned> cur;
  auto rec = [&](auto&& self, unsigned rest) -> void {
    if (rest == 0) {
      comps.push_back(cur);
      return;
    }
    for (unsigned part = 1; part <= rest; ++part) {
      cur.push_back(part);
      self(self, rest - part);
      cur.pop_back();
    }
  };
  rec(rec, n);
  for (const auto& blocks : comps) {
    const size_t s = blocks.size();
    std::vector<uint64_t> w(s, 0);
    while (true) {
      SupportPoint pt;
      pt.blocks = blocks;
      for (uint64_t wi : w) pt.scalars.push_back(F.from_subfield_dlog(wi, 1));
      out.push_back(std::move(pt));
      size_t t = 0;
      for (; t < s; ++t) {
        if (++w[t] < std::max<uint64_t>(Mq, 1)) break;
        w[t] = 0;
      }
      if (t == s) break;
    }
  }
  return out;
}

}  // namespace bkl
