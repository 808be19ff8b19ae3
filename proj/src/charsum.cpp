#include "bkl/charsum.hpp"

#include <algorithm>

namespace bkl {

namespace {

constexpr size_t kBlock = 4096;

int parity_sign(uint64_t e) { return e % 2 == 0 ? 1 : -1; }

}  // namespace

const std::vector<uint32_t>& CharTables::trace_table(unsigned l) {
  std::lock_guard<std::mutex> lock(mu_);
  auto it = trace_tabs_.find(l);
  if (it != trace_tabs_.end()) return *it->second;
  const AmbientField& F = *F_;
  const uint64_t Ml = F.qpow(l) - 1;
  auto tab = std::make_unique<std::vector<uint32_t>>(Ml);
  for (uint64_t w = 0; w < Ml; ++w)
    (*tab)[w] = uint32_t(F.abs_trace_p(F.from_subfield_dlog(w, l), l));
  return *trace_tabs_.emplace(l, std::move(tab)).first->second;
}

const kernels::RouTable& CharTables::rou(uint64_t den) {
  std::lock_guard<std::mutex> lock(mu_);
  auto it = rou_tabs_.find(den);
  if (it != rou_tabs_.end()) return *it->second;
  return *rou_tabs_.emplace(den, std::make_unique<kernels::RouTable>(den)).first->second;
}

cplx CharTables::gauss_sum(const MulChar& gamma, const AddChar& psi) {
  const AmbientField& F = *F_;
  require(F.degree_divides(gamma.d), errc::degree_not_dividing,
          "gauss_sum: character degree outside ambient tower");
  const unsigned r = gamma.d;
  const uint64_t Mr = F.qpow(r) - 1;
  const uint64_t k = gamma.k % Mr;
  const uint64_t wb = F.subfield_dlog(psi.b, r);

  {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = gauss_memo_.find({r, k, wb});
    if (it != gauss_memo_.end()) return it->second;
  }

  const auto& tr = trace_table(r);
  const auto& R = rou(Mr);
  const auto& Z = rou(F.p());
  const uint64_t kneg = (Mr - k) % Mr;

  kernels::KahanSum acc;
  std::vector<uint32_t> ia(kBlock), ib(kBlock);
  uint64_t w = 0, phase = 0;
  while (w < Mr) {
    const size_t len = size_t(std::min<uint64_t>(kBlock, Mr - w));
    for (size_t j = 0; j < len; ++j) {
      ia[j] = uint32_t(phase);
      ib[j] = tr[(w + j + wb) % Mr];
      phase += kneg;
      if (phase >= Mr) phase -= Mr;
    }
    acc.add(kernels::sum_gather2(R, ia.data(), Z, ib.data(), len));
    w += len;
  }
  const cplx val = -acc.value();

  std::lock_guard<std::mutex> lock(mu_);
  gauss_memo_.emplace(std::make_tuple(r, k, wb), val);
  return val;
}

// ---------------------------------------------------------------------------
// shared enumeration core for the direct tensor sums and Kloosterman sums
//
// Terms are indexed by subfield dlog vectors w over the coordinates of
// A = F_lambda (x) F_m.  The last coordinate varies innermost (either over
// all of F_{q^{l_last}}^x or along a norm-kernel coset); everything else is
// folded into a complex prefix, and the varying coordinate contributes an
// affine root-of-unity phase plus a gathered trace character.

namespace {

struct TensorSummer {
  CharTables& ct;
  const EtaleAlgebra& A;
  std::vector<uint64_t> chi_exp;  // per factor: exponent of chi_i on F_{q^{n_i}} (0 if none)
  uint64_t beta_exp = 0;          // exponent of beta on F_{q^m} (applied to norm2)
  bool has_beta = false;
  AddChar psi;

  // derived
  const AmbientField& F;
  uint64_t Mm;
  uint64_t L = 1;                  // combined denominator for the varying coordinate
  uint64_t wb_last = 0;
  const std::vector<uint32_t>* tr_last = nullptr;
  uint64_t Ml_last = 0;

  TensorSummer(CharTables& ct_, const EtaleAlgebra& A_, AddChar psi_)
      : ct(ct_), A(A_), psi(psi_), F(A_.field()), Mm(F.qpow(A_.m()) - 1) {}

  void prepare() {
    const unsigned T = A.coord_count();
    const unsigned lf = A.coord_factor(T - 1);
    const uint64_t Mn_last = F.qpow(A.factors()[lf].n) - 1;
    L = chi_exp[lf] % Mn_last == 0 ? 1 : Mn_last;
    if (has_beta && beta_exp % Mm != 0) L = lcm_u64(L, Mm);
    Ml_last = F.qpow(A.coord_l(T - 1)) - 1;
    tr_last = &ct.trace_table(A.coord_l(T - 1));
    wb_last = F.subfield_dlog(psi.b, A.coord_l(T - 1));
  }

  // phase numerator mod L contributed by the last coordinate at dlog w
  uint64_t last_phase(uint64_t w) const {
    const unsigned T = A.coord_count();
    const unsigned lf = A.coord_factor(T - 1);
    const uint64_t Mn = F.qpow(A.factors()[lf].n) - 1;
    uint64_t u = 0;
    if (L > 1) {
      u = chi_exp[lf] % Mn * (w % Mn) % Mn % L * (L / Mn) % L;
      if (has_beta) {
        uint64_t qs = 1;
        for (unsigned s = 0; s < A.coord_slot(T - 1); ++s) qs = qs * (F.q() % Mm) % Mm;
        const uint64_t bm = beta_exp % Mm * (w % Mm) % Mm * qs % Mm;
        u = (u + bm * (L / Mm)) % L;
      }
    }
    return u;
  }

  // prefix phase (as complex) of the fixed coordinates w[0..T-2]
  cplx prefix_value(const std::vector<uint64_t>& w) const {
    const unsigned T = A.coord_count();
    cplx out{1.0, 0.0};
    uint64_t beta_acc = 0;  // norm2 dlog contribution of fixed coordinates
    for (unsigned t = 0; t + 1 < T; ++t) {
      const unsigned fi = A.coord_factor(t);
      const uint64_t Mn = F.qpow(A.factors()[fi].n) - 1;
      if (chi_exp[fi] % Mn) out *= unit_phase(chi_exp[fi] % Mn * (w[t] % Mn) % Mn, Mn);
      if (has_beta && Mm > 1) {
        uint64_t qs = 1;
        for (unsigned s = 0; s < A.coord_slot(t); ++s) qs = qs * (F.q() % Mm) % Mm;
        beta_acc = (beta_acc + w[t] % Mm * qs) % Mm;
      }
      const auto& tr = ct.trace_table(A.coord_l(t));
      const uint64_t Ml = F.qpow(A.coord_l(t)) - 1;
      const uint64_t wb = F.subfield_dlog(psi.b, A.coord_l(t));
      out *= unit_phase(tr[(w[t] + wb) % Ml], F.p());
    }
    if (has_beta && beta_acc) out *= unit_phase(beta_exp % Mm * beta_acc % Mm, Mm);
    return out;
  }

  // sum over the inner run w_last = start + t*stride, t < count
  cplx run_sum(uint64_t start, uint64_t stride, uint64_t count) const {
    const auto& R = ct.rou(L);
    const auto& Z = ct.rou(F.p());
    const uint64_t step = last_phase(stride) % L;  // affine: phase(start + t*stride)
    // last_phase is linear in w mod the relevant groups, so stepping works
    uint64_t phase = last_phase(start);
    uint64_t w = start % Ml_last;
    const uint64_t wstride = stride % Ml_last;
    kernels::KahanSum acc;
    std::vector<uint32_t> ia(kBlock), ib(kBlock);
    uint64_t done = 0;
    while (done < count) {
      const size_t len = size_t(std::min<uint64_t>(kBlock, count - done));
      for (size_t j = 0; j < len; ++j) {
        ia[j] = uint32_t(phase);
        ib[j] = (*tr_last)[(w + wb_last) % Ml_last];
        phase += step;
        if (phase >= L) phase -= L;
        w += wstride;
        if (w >= Ml_last) w -= Ml_last;
      }
      acc.add(kernels::sum_gather2(R, ia.data(), Z, ib.data(), len));
      done += len;
    }
    return acc.value();
  }
};

}  // namespace

// ---------------------------------------------------------------------------

cplx tau_nm(CharTables& ct, const MulChar& alpha, const MulChar& beta, const AddChar& psi) {
  const AmbientField& F = ct.field();
  const unsigned n = alpha.d, m = beta.d;
  const unsigned d = unsigned(gcd_u64(n, m)), l = unsigned(lcm_u64(n, m));
  require(F.degree_divides(l), errc::table_cap_exceeded,
          "tau_nm: ambient field does not contain F_{q^lcm}");
  const uint64_t Ml = F.qpow(l) - 1, Mn = F.qpow(n) - 1, Mm = F.qpow(m) - 1;
  cplx out{1.0, 0.0};
  uint64_t qk = 1;  // q^{k-1} mod Mm
  for (unsigned k = 1; k <= d; ++k) {
    const uint64_t combined =
        (alpha.k % Mn * (Ml / Mn) + beta.k % Mm * qk % Mm * (Ml / Mm)) % Ml;
    out *= ct.gauss_sum({l, combined}, psi);
    qk = qk * (F.q() % Mm) % Mm;
  }
  return out;
}

cplx tau_lambda_m(CharTables& ct, const std::vector<unsigned>& lambda, const CharTuple& alpha,
                  const MulChar& beta, const AddChar& psi) {
  require(alpha.mu == lambda && alpha.chars.size() == lambda.size(), errc::degree_mismatch,
          "tau_lambda_m: character tuple does not match lambda");
  cplx out{1.0, 0.0};
  for (size_t j = 0; j < lambda.size(); ++j) out *= tau_nm(ct, alpha.chars[j], beta, psi);
  return out;
}

namespace {

// Direct sum over A^x of chi^{-1}(N_1 xi) beta^{-1}(N_2 xi) psi(Tr xi),
// without any sign, via the shared enumeration core.
cplx tensor_sum_direct(CharTables& ct, const EtaleAlgebra& A, const CharTuple& chi_inv,
                       const MulChar& beta_inv, const AddChar& psi) {
  const AmbientField& F = ct.field();
  require(A.unit_count() <= ct.cost_cap(), errc::cost_exceeded,
          "direct tensor sum exceeds cost cap");
  TensorSummer S(ct, A, psi);
  S.chi_exp.resize(A.factors().size());
  for (size_t i = 0; i < A.factors().size(); ++i) S.chi_exp[i] = chi_inv.chars[i].k;
  S.has_beta = true;
  S.beta_exp = beta_inv.k;
  S.prepare();

  const unsigned T = A.coord_count();
  const uint64_t Ml_last = F.qpow(A.coord_l(T - 1)) - 1;
  std::vector<uint64_t> w(T, 0), limits(T);
  for (unsigned t = 0; t < T; ++t) limits[t] = F.qpow(A.coord_l(t)) - 1;
  kernels::KahanSum total;
  while (true) {
    total.add(S.prefix_value(w) * S.run_sum(0, 1, Ml_last));
    unsigned t = 0;
    for (; t + 1 < T; ++t) {
      if (++w[t] < limits[t]) break;
      w[t] = 0;
    }
    if (t + 1 >= T) break;
  }
  return total.value();
}

}  // namespace

cplx tau_nm_direct(CharTables& ct, const MulChar& alpha, const MulChar& beta,
                   const AddChar& psi) {
  const AmbientField& F = ct.field();
  const unsigned n = alpha.d, m = beta.d;
  EtaleAlgebra A(F, {n}, m);
  CharTuple chi_inv;
  chi_inv.mu = {n};
  chi_inv.chars = {mul_char_inverse(F, alpha)};
  const cplx s = tensor_sum_direct(ct, A, chi_inv, mul_char_inverse(F, beta), psi);
  return double(parity_sign(uint64_t(n) * m + n + m)) * s;
}

cplx tau_lambda_m_direct(CharTables& ct, const std::vector<unsigned>& lambda,
                         const CharTuple& alpha, const MulChar& beta, const AddChar& psi) {
  const AmbientField& F = ct.field();
  require(alpha.mu == lambda, errc::degree_mismatch, "tau_lambda_m_direct: tuple mismatch");
  const unsigned m = beta.d;
  EtaleAlgebra A(F, lambda, m);
  CharTuple chi_inv;
  chi_inv.mu = lambda;
  for (const auto& c : alpha.chars) chi_inv.chars.push_back(mul_char_inverse(F, c));
  const cplx s = tensor_sum_direct(ct, A, chi_inv, mul_char_inverse(F, beta), psi);
  const uint64_t n = A.n(), r = lambda.size();
  return double(parity_sign(n * m + n + r * m)) * s;
}

cplx kloosterman(CharTables& ct, const KloostermanSpec& spec) {
  const AmbientField& F = ct.field();
  require(!spec.a.is_zero(), errc::zero_argument, "kloosterman: a must be nonzero");
  require(F.in_subfield(spec.a, 1), errc::degree_mismatch, "kloosterman: a must lie in F_q");
  require(spec.chi.mu == spec.lambda, errc::degree_mismatch,
          "kloosterman: character tuple does not match lambda");
  EtaleAlgebra A(F, spec.lambda, spec.m);
  require(A.fiber_size() <= ct.cost_cap(), errc::cost_exceeded,
          "kloosterman fiber exceeds cost cap");

  TensorSummer S(ct, A, spec.psi);
  S.chi_exp.resize(A.factors().size());
  for (size_t i = 0; i < A.factors().size(); ++i) S.chi_exp[i] = spec.chi.chars[i].k;
  S.has_beta = false;
  S.prepare();

  const uint64_t Mm = F.qpow(spec.m) - 1;
  const uint64_t K = A.run_length();
  kernels::KahanSum total;
  for_each_fiber_run(A, spec.a, [&](std::vector<uint64_t>& w, uint64_t w0) {
    total.add(S.prefix_value(w) * S.run_sum(w0, Mm, K));
  });
  return total.value();
}

}  // namespace bkl
