#include "bkl/bessel.hpp"

#include <cmath>
#include <sstream>

namespace bkl {

double qhalf_pow(uint64_t q, int64_t halfexp) {
  const bool neg = halfexp < 0;
  const uint64_t h = uint64_t(neg ? -halfexp : halfexp);
  double v = 1.0;
  for (uint64_t i = 0; i < h / 2; ++i) v *= double(q);
  if (h % 2) v *= std::sqrt(double(q));
  return neg ? 1.0 / v : v;
}

unsigned required_ambient_degree(unsigned nmax) {
  uint64_t l = 1;
  for (unsigned d = 1; d <= nmax; ++d) l = lcm_u64(l, d);
  return unsigned(l);
}

unsigned required_ambient_degree_for(const std::vector<unsigned>& lambda, unsigned mmax) {
  uint64_t l = 1;
  for (unsigned ni : lambda)
    for (unsigned j = 1; j <= mmax; ++j) l = lcm_u64(l, lcm_u64(ni, j));
  return unsigned(l);
}

namespace {

int parity_sign(uint64_t e) { return e % 2 == 0 ? 1 : -1; }

std::string canon_key(const CanonicalRepForm& f) {
  std::ostringstream os;
  os << f.q;
  for (const auto& c : f.comps) os << '|' << c.d << ',' << c.rep << ',' << c.s;
  return os.str();
}

std::string point_key(const SupportPoint& pt) {
  std::ostringstream os;
  for (size_t i = 0; i < pt.blocks.size(); ++i)
    os << pt.blocks[i] << ':' << pt.scalars[i].code << ';';
  return os.str();
}

void check_rep(const BesselContext& ctx, const GenericRepParams& P) {
  P.validate();
  require(P.q == ctx.field().q(), errc::degree_mismatch,
          "representation base field does not match the ambient field");
}

// prod_j tau_{lambda, m_j}(alpha x beta_j^{inv?}, psi)
cplx tau_product(CharTables& ct, const GenericRepParams& P, const CharTuple& beta, bool invert_beta,
                 const AddChar& psi) {
  const AmbientField& F = ct.field();
  cplx out{1.0, 0.0};
  for (const auto& b : beta.chars) {
    const MulChar bj = invert_beta ? mul_char_inverse(F, b) : b;
    out *= tau_lambda_m(ct, P.lambda, P.alpha, bj, psi);
  }
  return out;
}

}  // namespace

cplx epsilon0(BesselContext& ctx, const GenericRepParams& P, const GenericRepParams& Q,
              const AddChar& psi) {
  check_rep(ctx, P);
  check_rep(ctx, Q);
  const uint64_t n = P.n(), m = Q.n();
  const cplx tau = tau_product(ctx.tables(), P, Q.alpha, false, psi);
  return double(parity_sign(n * m)) * qhalf_pow(P.q, -int64_t(n * m)) * tau;
}

cplx gamma_factor(BesselContext& ctx, const GenericRepParams& P, const GenericRepParams& Q,
                  const AddChar& psi) {
  const int64_t n = P.n(), m = Q.n();
  const cplx om = central_character(ctx.field(), Q, ctx.field().minus_one());
  const cplx om_pow = (n - 1) % 2 == 0 ? cplx{1.0, 0.0} : om;
  return qhalf_pow(P.q, -m * (n - m - 1)) * om_pow * epsilon0(ctx, P, Q, psi);
}

// ---------------------------------------------------------------------------
// L-function route

BesselValueTable bessel_antidiag_via_L(BesselContext& ctx, const GenericRepParams& P, Fe c,
                                       const AddChar& psi) {
  check_rep(ctx, P);
  const AmbientField& F = ctx.field();
  require(!c.is_zero() && F.in_subfield(c, 1), errc::zero_argument,
          "bessel: c must lie in F_q^x");
  const unsigned n = P.n();
  const uint64_t r = P.lambda.size();

  BesselValueTable out;
  out.P = P;
  out.psi = psi;
  out.c = c;
  out.values.assign(n + 1, cplx{0.0, 0.0});
  out.values[0] = {1.0, 0.0};
  if (n == 1) {  // the Bessel function of GL_1 is the character itself
    out.values[1] = mul_char_value(F, P.alpha.chars[0], c);
    return out;
  }

  // a = (-1)^{n-1} c^{-1}; chi = alpha^{-1}
  Fe a = F.inv(c);
  if (n % 2 == 0) a = F.neg(a);
  const GenericRepParams Pv = contragredient(P);
  std::vector<cplx> p(n);
  for (unsigned m = 1; m <= n; ++m) {
    KloostermanSpec spec;
    spec.lambda = P.lambda;
    spec.chi = Pv.alpha;
    spec.psi = psi;
    spec.a = a;
    spec.m = m;
    const cplx J = kloosterman(ctx.tables(), spec);
    p[m - 1] = double(parity_sign(n - 1)) * J;
  }
  const std::vector<cplx> e = elementary_from_powers(p);
  for (unsigned m = 1; m <= n; ++m) {
    const cplx Cm = double(parity_sign(m)) * e[m];
    out.values[m] = Cm * double(parity_sign(r * m)) *
                    qhalf_pow(P.q, -int64_t(m) * (2 * int64_t(n) - m - 1));
  }
  return out;
}

// ---------------------------------------------------------------------------
// gamma route

namespace {

// S_k = sum over beta in the character group of F_{q^k}^x of
//       beta(s) * tau_{lambda,k}(alpha x beta^{-1}, psi),
// memoized per (P, psi, s, k).
cplx beta_sum(BesselContext& ctx, const GenericRepParams& P, const AddChar& psi, Fe s,
              unsigned k, std::map<std::string, cplx>& memo, std::mutex& mu) {
  std::ostringstream os;
  os << canon_key(canonicalize(P)) << '!' << psi.b.code << '!' << s.code << '!' << k;
  const std::string key = os.str();
  {
    std::lock_guard<std::mutex> lock(mu);
    auto it = memo.find(key);
    if (it != memo.end()) return it->second;
  }
  const AmbientField& F = ctx.field();
  CharTables& ct = ctx.tables();
  const uint64_t Mk = F.qpow(k) - 1;
  const uint64_t ws = F.subfield_dlog(s, k);
  kernels::KahanSum acc;
  for (uint64_t kb = 0; kb < Mk; ++kb) {
    const cplx beta_at_s = unit_phase(mulmod_u64(kb, ws % Mk, Mk), Mk);
    const MulChar beta_inv{k, (Mk - kb) % Mk};
    acc.add(beta_at_s * tau_lambda_m(ct, P.lambda, P.alpha, beta_inv, psi));
  }
  const cplx val = acc.value();
  std::lock_guard<std::mutex> lock(mu);
  memo.emplace(key, val);
  return val;
}

}  // namespace

cplx bessel_antidiag_via_gamma(BesselContext& ctx, const GenericRepParams& P, Fe c,
                               const AddChar& psi, unsigned m) {
  check_rep(ctx, P);
  const AmbientField& F = ctx.field();
  require(!c.is_zero() && F.in_subfield(c, 1), errc::zero_argument,
          "bessel: c must lie in F_q^x");
  require(m >= 1, errc::invalid_argument, "bessel: m must be >= 1");
  const unsigned n = P.n();
  if (n == 1 && m == 1) return mul_char_value(F, P.alpha.chars[0], c);

  // s = (-1)^{n-1} c
  Fe s = c;
  if (n % 2 == 0) s = F.neg(s);

  // (-1)^{nm} q^{-m(2n-m-1)/2} sum_{mu |- m} (1/Z_mu) prod_j S_{m_j}/(q^{m_j}-1)
  cplx total{0.0, 0.0};
  for (const Partition& mu : partitions_of(m)) {
    cplx term{1.0, 0.0};
    for (unsigned part : mu)
      term *= beta_sum(ctx, P, psi, s, part, ctx.beta_sum_memo_, ctx.mu_) /
              double(F.qpow(part) - 1);
    total += term / double(z_mu(mu));
  }
  return double(parity_sign(uint64_t(n) * m)) *
         qhalf_pow(P.q, -int64_t(m) * (2 * int64_t(n) - int64_t(m) - 1)) * total;
}

// ---------------------------------------------------------------------------
// full-support recursion

cplx bessel_full_support(BesselContext& ctx, const GenericRepParams& P, const SupportPoint& pt,
                         const AddChar& psi) {
  check_rep(ctx, P);
  const AmbientField& F = ctx.field();
  const unsigned n = P.n();
  unsigned total = 0;
  for (unsigned b : pt.blocks) total += b;
  require(total == n && !pt.blocks.empty() && pt.blocks.size() == pt.scalars.size(),
          errc::invalid_support_point, "support point does not match GL_n");
  for (Fe ci : pt.scalars)
    require(!ci.is_zero() && F.in_subfield(ci, 1), errc::invalid_support_point,
            "support point scalars must lie in F_q^x");

  const std::string key =
      canon_key(canonicalize(P)) + '@' + point_key(pt) + '@' + std::to_string(psi.b.code);
  {
    std::lock_guard<std::mutex> lock(ctx.mu_);
    auto it = ctx.support_memo_.find(key);
    if (it != ctx.support_memo_.end()) return it->second;
  }

  cplx val;
  if (pt.blocks.size() == 1) {
    val = central_character(F, P, pt.scalars[0]);
  } else {
    const Fe c1 = pt.scalars[0];
    const unsigned m = n - pt.blocks[0];
    SupportPoint rest;
    rest.blocks.assign(pt.blocks.begin() + 1, pt.blocks.end());
    const Fe c1_inv = F.inv(c1);
    for (size_t i = 1; i < pt.scalars.size(); ++i)
      rest.scalars.push_back(F.mul(pt.scalars[i], c1_inv));

    const Fe s0 = n % 2 == 0 ? F.minus_one() : F.one();  // (-1)^{n-1}
    const int64_t qexp = -int64_t(m) * (2 * int64_t(n) - int64_t(m) - 1);
    const int sign = parity_sign(uint64_t(n) * m);

    kernels::KahanSum acc;
    for (const Partition& mu : partitions_of(m)) {
      const double coeff = 1.0 / (double(z_mu(mu)) * double(phi_mu(mu, P.q)));
      for_each_char_tuple(mu, P.q, [&](const CharTuple& beta) {
        GenericRepParams sub;
        sub.q = P.q;
        sub.lambda = mu;
        sub.alpha = beta;
        // gamma(pi x Pi_mu(beta)^vee, psi) assembled from the tau product;
        // the q-power prefactors are folded in once outside the sum
        cplx om{1.0, 0.0};
        for (const auto& b : beta.chars) om *= mul_char_value(F, b, s0);
        const cplx tau = tau_product(ctx.tables(), P, beta, true, psi);
        const cplx sub_val = bessel_full_support(ctx, sub, rest, psi);
        acc.add(coeff * om * tau * sub_val);
      });
    }
    val = double(sign) * qhalf_pow(P.q, qexp) * central_character(F, P, c1) * acc.value();
  }

  std::lock_guard<std::mutex> lock(ctx.mu_);
  ctx.support_memo_.emplace(key, val);
  return val;
}

// ---------------------------------------------------------------------------

LPolynomialData lpolynomial(BesselContext& ctx, const GenericRepParams& P, Fe c,
                            const AddChar& psi) {
  const AmbientField& F = ctx.field();
  const unsigned n = P.n();
  LPolynomialData out;
  out.n = n;

  const BesselValueTable table = bessel_antidiag_via_L(ctx, P, c, psi);
  out.lstar.resize(n + 1);
  for (unsigned m = 0; m <= n; ++m)
    out.lstar[m] = qhalf_pow(P.q, int64_t(m) * int64_t(n - m)) * table.values[m];

  // Kloosterman power sums and C(X) = prod (1 - w_i X)
  Fe a = F.inv(c);
  if (n % 2 == 0) a = F.neg(a);
  const GenericRepParams Pv = contragredient(P);
  out.power_sums.resize(n);
  for (unsigned m = 1; m <= n; ++m) {
    KloostermanSpec spec{P.lambda, Pv.alpha, psi, a, m};
    out.power_sums[m - 1] = double(parity_sign(n - 1)) * kloosterman(ctx.tables(), spec);
  }
  out.elem = elementary_from_powers(out.power_sums);
  std::vector<cplx> cpoly(n + 1);
  for (unsigned m = 0; m <= n; ++m) cpoly[m] = double(parity_sign(m)) * out.elem[m];
  // roots of C are 1/w_i; omega_i recovered by inversion
  const std::vector<cplx> inv_roots = poly_roots(cpoly);
  out.roots.reserve(n);
  for (const cplx& z : inv_roots) out.roots.push_back(1.0 / z);
  return out;
}

}  // namespace bkl
