#pragma once

// Gauss sums, tensor Gauss sums tau_{n,m} / tau_{lambda,m}, and exotic
// Kloosterman sums J_m(chi, psi, a).  All big sums run through the gather
// kernels with compensated accumulation in a fixed iteration order; Gauss
// sums and per-degree trace tables are memoized in a CharTables workspace.

#include <complex>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <vector>

#include "bkl/chars.hpp"
#include "bkl/etale.hpp"
#include "bkl/ff.hpp"
#include "bkl/kernels.hpp"

namespace bkl {

struct KloostermanSpec {
  std::vector<unsigned> lambda;  // partition of n
  CharTuple chi;                 // degrees match lambda
  AddChar psi;
  Fe a;                          // in F_q^x, embedded into F_{q^m}
  unsigned m = 1;
};

/// Per-ambient workspace: trace tables, root-of-unity tables, Gauss-sum memo.
/// Idempotent inserts behind a mutex, so concurrent duplicate computation is
/// tolerated.
class CharTables {
public:
  explicit CharTables(const AmbientField& F) : F_(&F) {}

  const AmbientField& field() const { return *F_; }

  /// tr[w] = Tr_{F_{q^l}/F_p}(g_l^w) as an integer in [0, p).
  const std::vector<uint32_t>& trace_table(unsigned l);
  const kernels::RouTable& rou(uint64_t den);

  uint64_t cost_cap() const { return cost_cap_; }
  void set_cost_cap(uint64_t cap) { cost_cap_ = cap; }

  /// tau(gamma, psi_r) = -sum over F_{q^r}^x of gamma^{-1}(xi) psi_r(xi).
  cplx gauss_sum(const MulChar& gamma, const AddChar& psi);

private:
  const AmbientField* F_;
  uint64_t cost_cap_ = 100'000'000;
  std::mutex mu_;
  std::map<unsigned, std::unique_ptr<std::vector<uint32_t>>> trace_tabs_;
  std::map<uint64_t, std::unique_ptr<kernels::RouTable>> rou_tabs_;
  std::map<std::tuple<unsigned, uint64_t, uint64_t>, cplx> gauss_memo_;
};

/// Default tolerance for a compensated sum of `terms` unit-modulus terms.
inline double sum_atol(uint64_t terms, double value_mag) {
  return 1e-12 * double(terms) + 1e-9 * value_mag;
}

/// tau_{n,m}(alpha x beta, psi) as the product of gcd(n,m) Gauss sums over
/// F_{q^lcm} (the cheap route used by the epsilon-factor pipeline).
cplx tau_nm(CharTables& ct, const MulChar& alpha, const MulChar& beta, const AddChar& psi);

/// Same value by the sign-corrected direct sum over (F_n (x) F_m)^x.
cplx tau_nm_direct(CharTables& ct, const MulChar& alpha, const MulChar& beta, const AddChar& psi);

/// tau_{lambda,m}(alpha x beta, psi) = prod_j tau_{n_j,m}(alpha_j x beta, psi).
cplx tau_lambda_m(CharTables& ct, const std::vector<unsigned>& lambda, const CharTuple& alpha,
                  const MulChar& beta, const AddChar& psi);

/// Same value by the direct sum over (F_lambda (x) F_m)^x with the sign
/// (-1)^{nm + n + rm}.
cplx tau_lambda_m_direct(CharTables& ct, const std::vector<unsigned>& lambda,
                         const CharTuple& alpha, const MulChar& beta, const AddChar& psi);

/// Exotic Kloosterman sum J_m(chi, psi, a) over the norm2 fiber of a.
cplx kloosterman(CharTables& ct, const KloostermanSpec& spec);

}  // namespace bkl
