#pragma once

// Epsilon factors, gamma factors, and the Bessel-value pipelines: the
// L-function route (Kloosterman power sums -> Newton -> coefficients), the
// gamma-recursion route for anti-diagonal scalar blocks, and the full-support
// recursion with memoization.

#include <map>
#include <mutex>
#include <string>
#include <vector>

#include "bkl/charsum.hpp"
#include "bkl/reps.hpp"
#include "bkl/symfun.hpp"

namespace bkl {

struct BesselValueTable {
  GenericRepParams P;
  AddChar psi;
  Fe c;
  std::vector<cplx> values;  // j_0 .. j_n
};

struct LPolynomialData {
  unsigned n = 0;
  std::vector<cplx> power_sums;  // p_1 .. p_n
  std::vector<cplx> elem;        // e_0 .. e_n
  std::vector<cplx> roots;       // omega_1 .. omega_n
  std::vector<cplx> lstar;       // L* coefficients, length n+1
};

/// q^{halfexp/2} with the integer part of the exponent computed exactly.
double qhalf_pow(uint64_t q, int64_t halfexp);

/// Smallest ambient degree containing every field any pipeline touches for
/// parts and tensor degrees up to nmax: lcm(1..nmax).
unsigned required_ambient_degree(unsigned nmax);

/// Smaller bound when only the anti-diagonal pipelines run for one lambda:
/// lcm of lcm(n_i, j) over parts n_i and tensor degrees j <= mmax.
unsigned required_ambient_degree_for(const std::vector<unsigned>& lambda, unsigned mmax);

/// Shared workspace for one ambient field: character-sum tables plus the
/// full-support memo cache.  Safe for concurrent idempotent use.
class BesselContext {
public:
  explicit BesselContext(const AmbientField& F) : F_(&F), tables_(F) {}

  const AmbientField& field() const { return *F_; }
  CharTables& tables() { return tables_; }

private:
  friend cplx bessel_antidiag_via_gamma(BesselContext&, const GenericRepParams&, Fe,
                                        const AddChar&, unsigned);
  friend cplx bessel_full_support(BesselContext&, const GenericRepParams&, const SupportPoint&,
                                  const AddChar&);

  const AmbientField* F_;
  CharTables tables_;
  std::mutex mu_;
  std::map<std::string, cplx> support_memo_;
  std::map<std::string, cplx> beta_sum_memo_;
};

/// epsilon_0(Pi_lambda(alpha) x Pi_mu(beta), psi)
///   = (-1)^{nm} q^{-nm/2} prod_j tau_{lambda,m_j}(alpha x beta_j, psi).
cplx epsilon0(BesselContext& ctx, const GenericRepParams& P, const GenericRepParams& Q,
              const AddChar& psi);

/// gamma(pi x sigma, psi) = q^{-m(n-m-1)/2} omega_sigma(-1)^{n-1} epsilon_0.
cplx gamma_factor(BesselContext& ctx, const GenericRepParams& P, const GenericRepParams& Q,
                  const AddChar& psi);

/// Values j_0..j_n at the anti-diagonal points antidiag(I_{n-m}, c I_m) via
/// the Kloosterman L-function route.
BesselValueTable bessel_antidiag_via_L(BesselContext& ctx, const GenericRepParams& P, Fe c,
                                       const AddChar& psi);

/// The same value via the gamma / epsilon_0 partition sum; defined for any
/// m >= 1 and equal to 0 for m > n.
cplx bessel_antidiag_via_gamma(BesselContext& ctx, const GenericRepParams& P, Fe c,
                               const AddChar& psi, unsigned m);

/// J_pi at a general support point via the gamma-factor recursion.
cplx bessel_full_support(BesselContext& ctx, const GenericRepParams& P, const SupportPoint& pt,
                         const AddChar& psi);

/// L-function data of the pair (pi, c): power sums, Newton coefficients,
/// roots, and the normalized L* coefficients q^{m(n-m)/2} j_m.
LPolynomialData lpolynomial(BesselContext& ctx, const GenericRepParams& P, Fe c,
                            const AddChar& psi);

}  // namespace bkl
