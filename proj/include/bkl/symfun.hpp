#pragma once

// Partition utilities, Newton-identity conversions between power sums and
// elementary/complete symmetric functions, exterior-power traces, Dickson
// polynomial evaluation, and polynomial root machinery (Aberth-Ehrlich) with
// unit-circle tests.

#include <complex>
#include <cstdint>
#include <utility>
#include <vector>

namespace bkl {

using cplx = std::complex<double>;
using Partition = std::vector<unsigned>;  // weakly decreasing positive parts

/// All partitions of m, duplicate-free, in canonical order:
/// (m), ..., (1,1,...,1) (descending lexicographic).
std::vector<Partition> partitions_of(unsigned m);

/// Z_mu = prod_k k^{mu(k)} mu(k)! where mu(k) = multiplicity of part k.
uint64_t z_mu(const Partition& mu);

/// phi_mu(q) = prod_j (q^{m_j} - 1).
uint64_t phi_mu(const Partition& mu, uint64_t q);

// Newton conversions.  Series orientations, once and for all:
//   prod_i (1 + x_i T)        = sum_m e_m T^m          (elementary)
//   exp( sum_m p_m T^m / m )  = sum_m h_m T^m          (complete homogeneous)
// with p_m = sum_i x_i^m.  prod_i (1 - w_i X) has X^m coefficient (-1)^m e_m
// where p_m are the power sums of the w_i.

/// e_0..e_M from p_1..p_M via m e_m = sum_{i=1}^m (-1)^{i-1} e_{m-i} p_i.
std::vector<cplx> elementary_from_powers(const std::vector<cplx>& p);
/// h_0..h_M from p_1..p_M via m h_m = sum_{i=1}^m h_{m-i} p_i.
std::vector<cplx> complete_from_powers(const std::vector<cplx>& p);
/// p_1..p_M from e_0..e_n (e_m = 0 for m > n), M terms.
std::vector<cplx> powers_from_elementary(const std::vector<cplx>& e, unsigned M);

/// trace of the m-th exterior power from power-sum traces:
/// sum_{mu |- m} (1/Z_mu) (-1)^{m + len(mu)} prod_j p_{m_j}.  Equals e_m.
cplx exterior_trace_from_powers(const std::vector<cplx>& p, unsigned m);

/// Multivariate Dickson polynomial D_j^{(k)} evaluated at elementary values
/// e_1..e_n: the unique polynomial with S_j(T^k) = D_j^{(k)}(S_1..S_n).
cplx dickson_eval(const std::vector<cplx>& e, unsigned k, unsigned j);

/// Roots of sum a_k X^k (a.front() = constant term); leading coefficient must
/// be nonzero.  Aberth-Ehrlich with Cauchy-bound initialization, max 500
/// iterations, deterministic restarts on stagnation.
std::vector<cplx> poly_roots(const std::vector<cplx>& coeffs);

struct UnitCircleReport {
  bool on_circle = false;
  double max_deviation = 0.0;  // max | |root| - 1 |
};
UnitCircleReport roots_on_unit_circle(const std::vector<cplx>& coeffs, double tol);

/// a_k -> a_k * delta^{k (n-k)} with n the degree.
std::vector<cplx> delta_deform(const std::vector<cplx>& coeffs, double delta);

}  // namespace bkl
