#include "bkl/etale.hpp"

#include <limits>

namespace bkl {

EtaleAlgebra::EtaleAlgebra(const AmbientField& F, std::vector<unsigned> lambda, unsigned m)
    : F_(&F), lambda_(std::move(lambda)), m_(m) {
  require(m_ >= 1, errc::invalid_argument, "tensor degree m must be positive");
  require(!lambda_.empty(), errc::invalid_argument, "lambda must be non-empty");
  for (unsigned ni : lambda_) {
    require(ni >= 1, errc::invalid_argument, "lambda parts must be positive");
    n_ += ni;
    const unsigned d = unsigned(gcd_u64(ni, m_));
    const unsigned l = unsigned(lcm_u64(ni, m_));
    require(F.degree_divides(l), errc::degree_not_dividing,
            "ambient field does not contain F_{q^" + std::to_string(l) + "}");
    factors_.push_back({ni, d, l});
  }
  for (unsigned i = 0; i < factors_.size(); ++i)
    for (unsigned j = 0; j < factors_[i].d; ++j) {
      coord_factor_.push_back(i);
      coord_slot_.push_back(j);
    }
}

uint64_t EtaleAlgebra::unit_count() const {
  uint64_t n = 1;
  for (unsigned t = 0; t < coord_count(); ++t) {
    const uint64_t u = F_->qpow(coord_l(t)) - 1;
    if (n > std::numeric_limits<uint64_t>::max() / u) return std::numeric_limits<uint64_t>::max();
    n *= u;
  }
  return n;
}

uint64_t EtaleAlgebra::fiber_size() const {
  const uint64_t u = unit_count();
  if (u == std::numeric_limits<uint64_t>::max()) return u;
  return u / (F_->qpow(m_) - 1);
}

uint64_t EtaleAlgebra::run_length() const {
  return (F_->qpow(factors_.back().l) - 1) / (F_->qpow(m_) - 1);
}

void validate_membership(const EtaleAlgebra& A, const EtaleElement& x) {
  const auto& F = A.field();
  require(x.coords.size() == A.factors().size(), errc::degree_mismatch,
          "etale element has wrong number of factors");
  for (size_t i = 0; i < x.coords.size(); ++i) {
    require(x.coords[i].size() == A.factors()[i].d, errc::degree_mismatch,
            "etale element factor has wrong number of coordinates");
    for (Fe c : x.coords[i])
      require(F.in_subfield(c, A.factors()[i].l), errc::degree_mismatch,
              "etale coordinate outside its component field");
  }
}

std::vector<Fe> norm1(const EtaleAlgebra& A, const EtaleElement& x) {
  validate_membership(A, x);
  const auto& F = A.field();
  std::vector<Fe> out;
  out.reserve(x.coords.size());
  for (size_t i = 0; i < x.coords.size(); ++i) {
    const auto& f = A.factors()[i];
    Fe acc = F.one();
    for (Fe c : x.coords[i]) acc = F.mul(acc, F.norm(c, f.l, f.n));
    out.push_back(acc);
  }
  return out;
}

Fe norm2(const EtaleAlgebra& A, const EtaleElement& x) {
  validate_membership(A, x);
  const auto& F = A.field();
  const uint64_t MA = F.units();
  Fe acc = F.one();
  for (size_t i = 0; i < x.coords.size(); ++i) {
    const auto& f = A.factors()[i];
    uint64_t qj = 1 % MA;  // q^j mod |ambient units| for slot j
    for (Fe c : x.coords[i]) {
      if (c.is_zero()) return F.zero();
      acc = F.mul(acc, F.pow(F.norm(c, f.l, A.m()), qj));
      qj = qj * (F.q() % MA) % MA;
    }
  }
  return acc;
}

Fe abs_trace(const EtaleAlgebra& A, const EtaleElement& x) {
  validate_membership(A, x);
  const auto& F = A.field();
  Fe acc = F.zero();
  for (size_t i = 0; i < x.coords.size(); ++i)
    for (Fe c : x.coords[i]) acc = F.add(acc, F.trace(c, A.factors()[i].l, 1));
  return acc;
}

void for_each_fiber_run(const EtaleAlgebra& A, Fe a,
                        const std::function<void(std::vector<uint64_t>& w, uint64_t w0)>& fn) {
  const auto& F = A.field();
  require(!a.is_zero(), errc::zero_argument, "norm fiber over zero");
  require(F.in_subfield(a, A.m()), errc::degree_mismatch, "fiber target outside F_{q^m}");

  const unsigned T = A.coord_count();
  const uint64_t Mm = F.qpow(A.m()) - 1;
  const uint64_t v = F.subfield_dlog(a, A.m());

  // inverse of q^{slot} mod Mm for the solved (last) coordinate
  const unsigned last_slot = A.coord_slot(T - 1);
  uint64_t qinv = 1;
  if (Mm > 1) {
    const uint64_t qm1 = F.qpow(A.m() - 1) % Mm;  // q^{-1} mod (q^m - 1)
    for (unsigned i = 0; i < last_slot; ++i) qinv = qinv * qm1 % Mm;
  }

  std::vector<uint64_t> w(T, 0);
  std::vector<uint64_t> limits(T), mult(T);
  for (unsigned t = 0; t < T; ++t) {
    limits[t] = F.qpow(A.coord_l(t)) - 1;
    uint64_t qj = 1 % Mm;
    for (unsigned s = 0; s < A.coord_slot(t); ++s) qj = qj * (F.q() % Mm) % Mm;
    mult[t] = qj;
  }

  while (true) {
    // contribution of the free coordinates to the norm2 dlog
    uint64_t rest = 0;
    for (unsigned t = 0; t + 1 < T; ++t) rest = (rest + w[t] % Mm * mult[t]) % Mm;
    const uint64_t w0 = (v % Mm + Mm - rest) % Mm * qinv % Mm;
    fn(w, w0);
    // odometer over the free coordinates
    unsigned t = 0;
    for (; t + 1 < T; ++t) {
      if (++w[t] < limits[t]) break;
      w[t] = 0;
    }
    if (t + 1 >= T) break;
  }
}

void for_each_fiber_element(const EtaleAlgebra& A, Fe a,
                            const std::function<void(const EtaleElement&)>& fn) {
  const auto& F = A.field();
  const uint64_t K = A.run_length();
  const uint64_t Mm = F.qpow(A.m()) - 1;
  for_each_fiber_run(A, a, [&](std::vector<uint64_t>& w, uint64_t w0) {
    for (uint64_t t = 0; t < K; ++t) {
      w.back() = w0 + t * Mm;
      EtaleElement x;
      x.coords.resize(A.factors().size());
      for (unsigned c = 0; c < A.coord_count(); ++c)
        x.coords[A.coord_factor(c)].push_back(F.from_subfield_dlog(w[c], A.coord_l(c)));
      fn(x);
    }
  });
}

}  // namespace bkl
