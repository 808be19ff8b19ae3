#include "bkl/hecke.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numbers>

#include "bkl/bessel.hpp"
#include "bkl/reps.hpp"

namespace bkl::hecke {

namespace {

cplx zeta_pow(uint64_t p, unsigned t) {
  const double a = 2.0 * std::numbers::pi * double(t % p) / double(p);
  return {std::cos(a), std::sin(a)};
}

// deterministic generator for the diagonalization draws (seed 0x42 per draw)
struct SplitMix {
  uint64_t s;
  double next_unit() {
    s += 0x9e3779b97f4a7c15ull;
    uint64_t z = s;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    z ^= z >> 31;
    return double(z >> 11) / double(1ull << 53);
  }
};

}  // namespace

// ---------------------------------------------------------------------------
// tiny self-contained F_q

void GroupTable::build_field() {
  require(is_prime_u64(p_), errc::invalid_prime, "hecke field characteristic is not prime");
  q_ = 1;
  for (unsigned i = 0; i < e_; ++i) q_ *= unsigned(p_);
  require(q_ <= 256, errc::size_cap_exceeded, "hecke oracle field too large");

  // modulus: smallest monic irreducible of degree e over F_p, found by
  // checking that no element is a root and (for e <= 3) that suffices; for
  // completeness test irreducibility by trial products.
  std::vector<uint8_t> modulus(e_ + 1, 0);
  modulus[e_] = 1;
  auto polyval_all_nonzero = [&](const std::vector<uint8_t>& f) {
    // degree 2 or 3: irreducible iff no root in F_p
    for (uint64_t x = 0; x < p_; ++x) {
      uint64_t acc = 0, xp = 1;
      for (unsigned i = 0; i <= e_; ++i) {
        acc = (acc + f[i] * xp) % p_;
        xp = xp * x % p_;
      }
      if (acc == 0) return false;
    }
    return true;
  };
  if (e_ > 1) {
    require(e_ <= 3, errc::size_cap_exceeded, "hecke oracle supports e <= 3");
    bool found = false;
    for (uint64_t code = 0; code < uint64_t(q_) && !found; ++code) {
      uint64_t c = code;
      for (unsigned i = 0; i < e_; ++i) {
        modulus[i] = uint8_t(c % p_);
        c /= p_;
      }
      found = polyval_all_nonzero(modulus);
    }
    require(found, errc::invalid_argument, "no irreducible modulus for hecke field");
  }

  add_.assign(size_t(q_) * q_, 0);
  mul_.assign(size_t(q_) * q_, 0);
  neg_.assign(q_, 0);
  trace_.assign(q_, 0);
  auto digits = [&](unsigned code) {
    std::vector<unsigned> d(e_);
    for (unsigned i = 0; i < e_; ++i) {
      d[i] = code % unsigned(p_);
      code /= unsigned(p_);
    }
    return d;
  };
  auto pack = [&](const std::vector<unsigned>& d) {
    unsigned code = 0, m = 1;
    for (unsigned i = 0; i < e_; ++i) {
      code += d[i] % unsigned(p_) * m;
      m *= unsigned(p_);
    }
    return uint8_t(code);
  };
  for (unsigned a = 0; a < q_; ++a) {
    auto da = digits(a);
    for (unsigned b = 0; b < q_; ++b) {
      auto db = digits(b);
      std::vector<unsigned> s(e_);
      for (unsigned i = 0; i < e_; ++i) s[i] = (da[i] + db[i]) % unsigned(p_);
      add_[size_t(a) * q_ + b] = pack(s);
      // schoolbook product reduced by the modulus
      std::vector<unsigned> prod(2 * e_ - 1, 0);
      for (unsigned i = 0; i < e_; ++i)
        for (unsigned j = 0; j < e_; ++j) prod[i + j] = (prod[i + j] + da[i] * db[j]) % unsigned(p_);
      for (unsigned i = unsigned(prod.size()); i-- > e_;) {
        const unsigned c = prod[i];
        if (!c) continue;
        for (unsigned j = 0; j < e_; ++j)
          prod[i - e_ + j] = (prod[i - e_ + j] + c * (unsigned(p_) - modulus[j])) % unsigned(p_);
        prod[i] = 0;
      }
      std::vector<unsigned> r(prod.begin(), prod.begin() + e_);
      mul_[size_t(a) * q_ + b] = pack(r);
    }
    std::vector<unsigned> nd(e_);
    for (unsigned i = 0; i < e_; ++i) nd[i] = (unsigned(p_) - da[i]) % unsigned(p_);
    neg_[a] = pack(nd);
  }
  // absolute trace via Frobenius powers: Tr(a) = sum a^{p^i}
  auto fpow = [&](uint8_t a, uint64_t k) {
    uint8_t r = 1;
    while (k) {
      if (k & 1) r = mul_[size_t(r) * q_ + a];
      a = mul_[size_t(a) * q_ + a];
      k >>= 1;
    }
    return r;
  };
  for (unsigned a = 0; a < q_; ++a) {
    uint8_t acc = 0;
    uint64_t pe = 1;
    for (unsigned i = 0; i < e_; ++i) {
      acc = add_[size_t(acc) * q_ + fpow(uint8_t(a), pe)];
      pe *= p_;
    }
    require(acc < p_, errc::invalid_argument, "hecke trace left the prime field");
    trace_[a] = acc;
  }
}

uint8_t GroupTable::finv(uint8_t a) const {
  require(a != 0, errc::zero_argument, "hecke field inverse of zero");
  for (unsigned b = 1; b < q_; ++b)
    if (fmul(a, uint8_t(b)) == 1) return uint8_t(b);
  fail(errc::invalid_argument, "hecke field inverse not found");
}

// ---------------------------------------------------------------------------
// group enumeration

GroupTable::GroupTable(unsigned n, uint64_t p, unsigned e, uint64_t size_cap) : n_(n), e_(e), p_(p) {
  require(n >= 1, errc::invalid_argument, "group degree must be positive");
  build_field();

  // |GL_n(F_q)| = q^{n(n-1)/2} prod (q^j - 1)
  uint64_t order = 1;
  for (unsigned i = 0; i < n * (n - 1) / 2; ++i) order *= q_;
  uint64_t qj = 1;
  for (unsigned j = 1; j <= n; ++j) {
    qj *= q_;
    order *= qj - 1;
  }
  require(order <= size_cap, errc::size_cap_exceeded,
          "|GL_" + std::to_string(n) + "(F_" + std::to_string(q_) + ")| = " +
              std::to_string(order) + " exceeds cap");

  const unsigned nn = n * n;
  uint64_t total = 1;
  for (unsigned i = 0; i < nn; ++i) total *= q_;
  packed_to_id_.assign(total, -1);

  // rank test by Gaussian elimination over F_q
  auto invertible = [&](std::vector<uint8_t> m) {
    for (unsigned col = 0; col < n; ++col) {
      unsigned pivot = col;
      while (pivot < n && m[pivot * n + col] == 0) ++pivot;
      if (pivot == n) return false;
      if (pivot != col)
        for (unsigned j = 0; j < n; ++j) std::swap(m[pivot * n + j], m[col * n + j]);
      const uint8_t inv = finv(m[col * n + col]);
      for (unsigned row = col + 1; row < n; ++row) {
        const uint8_t f = fmul(m[row * n + col], inv);
        if (!f) continue;
        for (unsigned j = col; j < n; ++j)
          m[row * n + j] = fadd(m[row * n + j], fneg(fmul(f, m[col * n + j])));
      }
    }
    return true;
  };

  std::vector<uint8_t> mat(nn, 0);
  for (uint64_t code = 0; code < total; ++code) {
    uint64_t c = code;
    for (unsigned i = 0; i < nn; ++i) {
      mat[i] = uint8_t(c % q_);
      c /= q_;
    }
    if (invertible(mat)) {
      packed_to_id_[code] = int32_t(elems_.size());
      elems_.push_back(mat);
    }
  }
  require(elems_.size() == order, errc::invalid_argument, "group enumeration size mismatch");

  std::vector<uint8_t> ident(nn, 0);
  for (unsigned i = 0; i < n; ++i) ident[i * n + i] = 1;
  id_identity_ = lookup(ident);

  inv_.assign(elems_.size(), 0);
  // inverse by augmented Gaussian elimination
  for (uint32_t id = 0; id < elems_.size(); ++id) {
    std::vector<uint8_t> a = elems_[id], b = ident;
    for (unsigned col = 0; col < n; ++col) {
      unsigned pivot = col;
      while (a[pivot * n + col] == 0) ++pivot;
      if (pivot != col)
        for (unsigned j = 0; j < n; ++j) {
          std::swap(a[pivot * n + j], a[col * n + j]);
          std::swap(b[pivot * n + j], b[col * n + j]);
        }
      const uint8_t inv = finv(a[col * n + col]);
      for (unsigned j = 0; j < n; ++j) {
        a[col * n + j] = fmul(a[col * n + j], inv);
        b[col * n + j] = fmul(b[col * n + j], inv);
      }
      for (unsigned row = 0; row < n; ++row) {
        if (row == col) continue;
        const uint8_t f = a[row * n + col];
        if (!f) continue;
        for (unsigned j = 0; j < n; ++j) {
          a[row * n + j] = fadd(a[row * n + j], fneg(fmul(f, a[col * n + j])));
          b[row * n + j] = fadd(b[row * n + j], fneg(fmul(f, b[col * n + j])));
        }
      }
    }
    inv_[id] = lookup(b);
  }

  // unipotent subgroup: unit diagonal, free strictly-upper entries
  const unsigned free_slots = n * (n - 1) / 2;
  uint64_t ucount = 1;
  for (unsigned i = 0; i < free_slots; ++i) ucount *= q_;
  for (uint64_t code = 0; code < ucount; ++code) {
    std::vector<uint8_t> u = ident;
    uint64_t c = code;
    for (unsigned i = 0; i < n; ++i)
      for (unsigned j = i + 1; j < n; ++j) {
        u[i * n + j] = uint8_t(c % q_);
        c /= q_;
      }
    unipotent_.push_back(lookup(u));
  }
}

uint32_t GroupTable::lookup(const std::vector<uint8_t>& mat) const {
  uint64_t code = 0, m = 1;
  for (uint8_t v : mat) {
    code += uint64_t(v) * m;
    m *= q_;
  }
  const int32_t id = packed_to_id_[code];
  require(id >= 0, errc::invalid_argument, "matrix is not invertible");
  return uint32_t(id);
}

uint32_t GroupTable::mul(uint32_t a, uint32_t b) const {
  const auto& A = elems_[a];
  const auto& B = elems_[b];
  std::vector<uint8_t> C(n_ * n_, 0);
  for (unsigned i = 0; i < n_; ++i)
    for (unsigned k = 0; k < n_; ++k) {
      const uint8_t aik = A[i * n_ + k];
      if (!aik) continue;
      for (unsigned j = 0; j < n_; ++j)
        C[i * n_ + j] = fadd(C[i * n_ + j], fmul(aik, B[k * n_ + j]));
    }
  return lookup(C);
}

cplx GroupTable::psi_on_unipotent(uint32_t u, uint8_t b) const {
  const auto& m = elems_[u];
  uint8_t s = 0;
  for (unsigned i = 0; i + 1 < n_; ++i) s = fadd(s, m[i * n_ + (i + 1)]);
  return zeta_pow(p_, ftrace_p(fmul(b, s)));
}

// ---------------------------------------------------------------------------
// support points and the equivariant algebra

std::vector<HeckePoint> support_points(const GroupTable& G) {
  std::vector<HeckePoint> out;
  std::vector<unsigned> cur;
  auto rec = [&](auto&& self, unsigned rest) -> void {
    if (rest == 0) {
      const size_t s = cur.size();
      std::vector<uint8_t> scal(s, 1);  // nonzero codes 1..q-1
      while (true) {
        out.push_back({cur, scal});
        size_t t = 0;
        for (; t < s; ++t) {
          scal[t] = uint8_t(scal[t] + 1 == G.q() ? 1 : scal[t] + 1);
          if (scal[t] != 1) break;  // no carry
        }
        if (t == s) break;
      }
      return;
    }
    for (unsigned part = 1; part <= rest; ++part) {
      cur.push_back(part);
      self(self, rest - part);
      cur.pop_back();
    }
  };
  rec(rec, G.n());
  return out;
}

namespace {

std::vector<uint8_t> point_matrix(const GroupTable& G, const HeckePoint& pt) {
  const unsigned n = G.n();
  std::vector<uint8_t> m(n * n, 0);
  unsigned row = 0, colend = n;
  for (size_t i = 0; i < pt.blocks.size(); ++i) {
    const unsigned ni = pt.blocks[i];
    const unsigned col = colend - ni;
    for (unsigned t = 0; t < ni; ++t) m[(row + t) * n + (col + t)] = pt.scalars[i];
    row += ni;
    colend = col;
  }
  return m;
}

}  // namespace

Oracle bessel_functions_numeric(const GroupTable& G, uint8_t psi_twist, unsigned max_draws,
                                uint64_t seed_base) {
  require(psi_twist != 0 && psi_twist < G.q(), errc::invalid_argument,
          "psi twist must be a nonzero field code");
  Oracle oracle;
  oracle.points = support_points(G);
  const size_t P = oracle.points.size();

  // equivariant basis functions as dense vectors over the group
  const cplx unset{1e300, 0.0};
  std::vector<std::vector<cplx>> basis(P);
  std::vector<std::vector<std::pair<uint32_t, cplx>>> supports(P);
  for (size_t ptI = 0; ptI < P; ++ptI) {
    if (oracle.points[ptI].blocks.size() == 1 && oracle.points[ptI].scalars[0] == 1)
      oracle.identity_point = ptI;
    std::vector<cplx>& f = basis[ptI];
    f.assign(G.size(), unset);
    const uint32_t g0 = G.lookup(point_matrix(G, oracle.points[ptI]));
    for (uint32_t u1 : G.unipotent()) {
      const uint32_t left = G.mul(u1, g0);
      const cplx v1 = G.psi_on_unipotent(u1, psi_twist);
      for (uint32_t u2 : G.unipotent()) {
        const uint32_t x = G.mul(left, u2);
        const cplx v = v1 * G.psi_on_unipotent(u2, psi_twist);
        if (f[x] == unset) {
          f[x] = v;
          supports[ptI].push_back({x, v});
        } else {
          oracle.offsupport_max = std::max(oracle.offsupport_max, std::abs(f[x] - v));
        }
      }
    }
  }

  // structure coefficients c[a][t][b] of f_a * f_b at point t
  const double invU = 1.0 / double(G.unipotent_size());
  std::vector<uint32_t> point_ids(P);
  for (size_t t = 0; t < P; ++t) point_ids[t] = G.lookup(point_matrix(G, oracle.points[t]));

  std::vector<Eigen::MatrixXcd> T(P, Eigen::MatrixXcd::Zero(long(P), long(P)));
  for (size_t a = 0; a < P; ++a)
    for (size_t t = 0; t < P; ++t) {
      const uint32_t gt = point_ids[t];
      std::vector<cplx> acc(P, cplx{0.0, 0.0});
      for (const auto& [x, vx] : supports[a]) {
        const uint32_t y = G.mul(G.inverse(x), gt);
        for (size_t b = 0; b < P; ++b) {
          const cplx fb = basis[b][y];
          if (fb != unset) acc[b] += vx * fb;
        }
      }
      for (size_t b = 0; b < P; ++b) T[a](long(t), long(b)) = invU * acc[b];
    }

  // commutativity of the algebra
  for (size_t a = 0; a < P; ++a)
    for (size_t b = a + 1; b < P; ++b)
      for (size_t t = 0; t < P; ++t)
        oracle.commutator_max =
            std::max(oracle.commutator_max, std::abs(T[a](long(t), long(b)) - T[b](long(t), long(a))));

  // simultaneous diagonalization via a generic element
  for (unsigned draw = 0; draw < max_draws; ++draw) {
    SplitMix rng{seed_base + draw};
    Eigen::MatrixXcd A = Eigen::MatrixXcd::Zero(long(P), long(P));
    for (size_t a = 0; a < P; ++a)
      A += cplx(rng.next_unit() - 0.5, rng.next_unit() - 0.5) * T[a];
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(A);
    require(solver.info() == Eigen::Success, errc::diagonalization_degenerate,
            "eigen decomposition failed");

    // demand well-separated eigenvalues
    double scale = 0.0, min_gap = 1e300;
    for (long i = 0; i < long(P); ++i) scale = std::max(scale, std::abs(solver.eigenvalues()[i]));
    for (long i = 0; i < long(P); ++i)
      for (long j = i + 1; j < long(P); ++j)
        min_gap = std::min(min_gap, std::abs(solver.eigenvalues()[i] - solver.eigenvalues()[j]));
    if (P > 1 && min_gap < 1e-8 * std::max(scale, 1.0)) continue;

    bool ok = true;
    oracle.functions.clear();
    for (long i = 0; i < long(P); ++i) {
      Eigen::VectorXcd v = solver.eigenvectors().col(i);
      const cplx at_id = v[long(oracle.identity_point)];
      if (std::abs(at_id) < 1e-9) {
        ok = false;
        break;
      }
      v /= at_id;
      EquivariantFunction fn;
      fn.point_values.assign(v.data(), v.data() + P);
      oracle.functions.push_back(std::move(fn));
    }
    if (ok) return oracle;
  }
  fail(errc::diagonalization_degenerate,
       "no generic element separated the Hecke algebra after max draws");
}

// ---------------------------------------------------------------------------
// matching against the pipeline

MatchResult match_oracle_to_params(const Oracle& oracle, const GroupTable& G, BesselContext& ctx,
                                   uint8_t psi_twist) {
  const AmbientField& F = ctx.field();
  require(G.q() == F.q() && F.base().e == 1, errc::invalid_argument,
          "oracle matching requires a prime base field shared with the pipeline");
  const unsigned n = G.n();
  const AddChar psi{F.scalar(psi_twist)};

  const auto classes = enumerate_generic(n, F.q());
  const size_t P = oracle.points.size();
  require(classes.size() == oracle.functions.size(), errc::ambiguous_match,
          "oracle eigenfunction count does not match class count");

  // pipeline value matrix
  std::vector<std::vector<cplx>> pipeline(classes.size(), std::vector<cplx>(P));
  for (size_t ci = 0; ci < classes.size(); ++ci) {
    const GenericRepParams params = realize(classes[ci]);
    for (size_t t = 0; t < P; ++t) {
      SupportPoint pt;
      pt.blocks = oracle.points[t].blocks;
      for (uint8_t s : oracle.points[t].scalars) pt.scalars.push_back(F.scalar(s));
      pipeline[ci][t] = bessel_full_support(ctx, params, pt, psi);
    }
  }

  MatchResult res;
  res.class_to_function.assign(classes.size(), size_t(-1));
  res.min_second_best = 1e300;
  std::vector<char> used(oracle.functions.size(), 0);
  for (size_t ci = 0; ci < classes.size(); ++ci) {
    double best = 1e300, second = 1e300;
    size_t best_f = size_t(-1);
    for (size_t fi = 0; fi < oracle.functions.size(); ++fi) {
      double dist = 0.0;
      for (size_t t = 0; t < P; ++t)
        dist = std::max(dist, std::abs(pipeline[ci][t] - oracle.functions[fi].point_values[t]));
      if (dist < best) {
        second = best;
        best = dist;
        best_f = fi;
      } else {
        second = std::min(second, dist);
      }
    }
    require(best < 1e-6, errc::ambiguous_match, "no oracle function within matching tolerance");
    require(second > 1e-3, errc::ambiguous_match, "second-best oracle function too close");
    require(!used[best_f], errc::ambiguous_match, "oracle function matched twice");
    used[best_f] = 1;
    res.class_to_function[ci] = best_f;
    res.max_value_deviation = std::max(res.max_value_deviation, best);
    res.min_second_best = std::min(res.min_second_best, second);
  }
  return res;
}

}  // namespace bkl::hecke
