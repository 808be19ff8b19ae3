#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <map>
#include <random>
#include <set>

#include "bkl/etale.hpp"

using namespace bkl;

namespace {

EtaleElement from_dlogs(const EtaleAlgebra& A, const std::vector<uint64_t>& w) {
  EtaleElement x;
  x.coords.resize(A.factors().size());
  for (unsigned t = 0; t < A.coord_count(); ++t)
    x.coords[A.coord_factor(t)].push_back(A.field().from_subfield_dlog(w[t], A.coord_l(t)));
  return x;
}

void for_each_unit(const EtaleAlgebra& A, const std::function<void(const EtaleElement&)>& fn) {
  const unsigned T = A.coord_count();
  std::vector<uint64_t> w(T, 0), limits(T);
  for (unsigned t = 0; t < T; ++t) limits[t] = A.field().qpow(A.coord_l(t)) - 1;
  while (true) {
    fn(from_dlogs(A, w));
    unsigned t = 0;
    for (; t < T; ++t) {
      if (++w[t] < limits[t]) break;
      w[t] = 0;
    }
    if (t == T) break;
  }
}

}  // namespace

TEST_CASE("factor shapes: gcd and lcm per part") {
  AmbientField F({2, 1}, 6);
  EtaleAlgebra A(F, {3, 2, 1}, 2);
  REQUIRE(A.factors().size() == 3);
  CHECK(A.factors()[0].d == 1);
  CHECK(A.factors()[0].l == 6);
  CHECK(A.factors()[1].d == 2);
  CHECK(A.factors()[1].l == 2);
  CHECK(A.factors()[2].d == 1);
  CHECK(A.factors()[2].l == 2);
  CHECK(A.coord_count() == 4);
  CHECK(A.unit_count() == 63ull * 3 * 3 * 3);
}

TEST_CASE("norm1/norm2 trivial cases") {
  AmbientField F({3, 1}, 1);
  EtaleAlgebra A(F, {1}, 1);
  EtaleElement x{{{F.scalar(2)}}};
  CHECK(norm1(A, x)[0] == F.scalar(2));
  CHECK(norm2(A, x) == F.scalar(2));

  // lambda=(1,1), m=1, q=3: norm2 is the product of coordinates
  EtaleAlgebra B(F, {1, 1}, 1);
  EtaleElement y{{{F.scalar(2)}, {F.scalar(2)}}};
  CHECK(norm2(B, y) == F.one());
  CHECK(abs_trace(B, {{{F.one()}, {F.scalar(2)}}}) == F.zero());
}

TEST_CASE("lambda=(2), m=2, q=2: norm2 carries the twisted exponents") {
  AmbientField F({2, 1}, 2);
  EtaleAlgebra A(F, {2}, 2);  // F_4 (x) F_4 = F_4 x F_4, d=2, l=2
  REQUIRE(A.coord_count() == 2);
  const Fe w = F.generator();
  EtaleElement x{{{w, F.mul(w, w)}}};
  // norm2(x1, x2) = x1 * x2^q = w * (w^2)^2 = w^5 = w^2
  CHECK(norm2(A, x) == F.pow(w, 5));
  // norm1 = x1 * x2 (N_{2/2} = id)
  CHECK(norm1(A, x)[0] == F.mul(w, F.mul(w, w)));
}

TEST_CASE("abs trace of omega in F_4 is 1") {
  AmbientField F({2, 1}, 2);
  EtaleAlgebra A(F, {2}, 1);
  EtaleElement x{{{F.generator()}}};
  CHECK(abs_trace(A, x) == F.one());
}

TEST_CASE("fiber sizes and contents") {
  AmbientField F({3, 1}, 2);

  // lambda=(1), m=1: fiber over a is {a}
  EtaleAlgebra A(F, {1}, 1);
  int count = 0;
  for_each_fiber_element(A, F.scalar(2), [&](const EtaleElement& x) {
    ++count;
    CHECK(x.coords[0][0] == F.scalar(2));
  });
  CHECK(count == 1);

  // lambda=(1,1), m=1, q=3: fiber over 2 is {(1,2),(2,1)}
  EtaleAlgebra B(F, {1, 1}, 1);
  std::set<std::pair<uint32_t, uint32_t>> got;
  for_each_fiber_element(B, F.scalar(2), [&](const EtaleElement& x) {
    got.insert({x.coords[0][0].code, x.coords[1][0].code});
  });
  CHECK(got == std::set<std::pair<uint32_t, uint32_t>>{{1, 2}, {2, 1}});
}

TEST_CASE("lambda=(2), m=2, q=2: fiber size is the unit-group index") {
  AmbientField F({2, 1}, 2);
  EtaleAlgebra A(F, {2}, 2);
  CHECK(A.fiber_size() == 3);
  int count = 0;
  for_each_fiber_element(A, F.generator(), [&](const EtaleElement& x) {
    ++count;
    CHECK(norm2(A, x) == F.generator());
  });
  CHECK(count == 3);
}

TEST_CASE("norm surjectivity and fiber partition, exhaustive") {
  AmbientField F({2, 1}, 6);
  for (auto lambda : std::vector<std::vector<unsigned>>{{2}, {2, 1}, {3}, {1, 1}}) {
    for (unsigned m : {1u, 2u}) {
      EtaleAlgebra A(F, lambda, m);
      const uint64_t expected = A.unit_count() / (F.qpow(m) - 1);
      CHECK(A.fiber_size() == expected);
      // every unit lands in exactly one fiber, and fibers have equal size
      std::map<uint32_t, uint64_t> counts;
      for_each_unit(A, [&](const EtaleElement& x) { ++counts[norm2(A, x).code]; });
      CHECK(counts.size() == F.qpow(m) - 1);
      for (const auto& [a, c] : counts) CHECK(c == expected);
      // fiber enumeration agrees with the filter
      uint64_t total = 0;
      for (const auto& [a, c] : counts) {
        uint64_t n = 0;
        for_each_fiber_element(A, Fe{a}, [&](const EtaleElement& x) {
          ++n;
          CHECK(norm2(A, x).code == a);
        });
        CHECK(n == c);
        total += n;
      }
      CHECK(total == A.unit_count());
    }
  }
}

TEST_CASE("norm2 is multiplicative and abs_trace is additive") {
  AmbientField F({3, 1}, 2);
  EtaleAlgebra A(F, {2, 1}, 2);
  std::vector<EtaleElement> xs;
  for_each_fiber_element(A, F.one(), [&](const EtaleElement& x) { xs.push_back(x); });
  REQUIRE(xs.size() >= 2);
  for (size_t i = 0; i < std::min<size_t>(xs.size(), 6); ++i)
    for (size_t j = 0; j < std::min<size_t>(xs.size(), 6); ++j) {
      EtaleElement prod, sum;
      prod.coords.resize(xs[i].coords.size());
      sum.coords.resize(xs[i].coords.size());
      for (size_t f = 0; f < xs[i].coords.size(); ++f)
        for (size_t c = 0; c < xs[i].coords[f].size(); ++c) {
          prod.coords[f].push_back(F.mul(xs[i].coords[f][c], xs[j].coords[f][c]));
          sum.coords[f].push_back(F.add(xs[i].coords[f][c], xs[j].coords[f][c]));
        }
      CHECK(norm2(A, prod) == F.mul(norm2(A, xs[i]), norm2(A, xs[j])));
      CHECK(abs_trace(A, sum) == F.add(abs_trace(A, xs[i]), abs_trace(A, xs[j])));
    }
}

// Independent cross-check of the norm2/abs_trace formulas: build the algebra
// F_{q^n} (x) F_{q^m} on the abstract tensor basis {g_n^a (x) g_m^b}, compute
// the multiplication matrix of a random element over F_{q^m}, and compare its
// determinant and F_q-trace with the closed-form norms.
namespace {

struct TensorBasisAlgebra {
  const AmbientField& F;
  unsigned n, m;
  Fe gn, gm;
  std::vector<Fe> gn_red;  // gn^n expressed in lower powers over F_q

  TensorBasisAlgebra(const AmbientField& F_, unsigned n_, unsigned m_)
      : F(F_), n(n_), m(m_), gn(F_.subfield_generator(n_)), gm(F_.subfield_generator(m_)) {
    gn_red = reduction(gn, n);
  }

  // coefficients of g^deg in the basis 1, g, ..., g^{deg-1} over F_q,
  // found by solving the linear system inside the ambient field
  std::vector<Fe> reduction(Fe g, unsigned deg) const {
    // Gaussian elimination on the (deg x deg+1) system sum c_i g^i = g^deg
    // with unknowns c_i in F_q.  Represent the q-span via explicit search:
    // deg is tiny here, brute-force over F_q^deg is fine for deg <= 3.
    std::vector<uint64_t> w(deg, 0);
    const uint64_t Mq = F.q() - 1;
    std::vector<Fe> powers(deg + 1);
    powers[0] = F.one();
    for (unsigned i = 1; i <= deg; ++i) powers[i] = F.mul(powers[i - 1], g);
    std::vector<Fe> coeff(deg, F.zero());
    // odometer over (F_q)^deg including zeros
    std::vector<uint64_t> code(deg, 0);
    while (true) {
      Fe acc = F.zero();
      for (unsigned i = 0; i < deg; ++i) {
        if (code[i] == 0) continue;
        acc = F.add(acc, F.mul(F.from_subfield_dlog(code[i] - 1, 1), powers[i]));
      }
      if (acc == powers[deg]) {
        for (unsigned i = 0; i < deg; ++i)
          coeff[i] = code[i] == 0 ? F.zero() : F.from_subfield_dlog(code[i] - 1, 1);
        return coeff;
      }
      unsigned t = 0;
      for (; t < deg; ++t) {
        if (++code[t] <= Mq) break;
        code[t] = 0;
      }
      if (t == deg) break;
    }
    FAIL("no reduction found");
    return coeff;
  }
};

}  // namespace

TEST_CASE("norm2/abs_trace agree with determinant/trace of the multiplication matrix") {
  // lambda = (n), tensor with F_{q^m}, tiny cases q^{nm} <= 4096
  for (auto [p, n, m] : std::vector<std::tuple<uint64_t, unsigned, unsigned>>{
           {2, 2, 2}, {2, 3, 2}, {3, 2, 2}, {2, 2, 3}}) {
    const unsigned l = unsigned(lcm_u64(n, m));
    AmbientField F({p, 1}, l);
    TensorBasisAlgebra TB(F, n, m);
    EtaleAlgebra A(F, {n}, m);
    const unsigned d = A.factors()[0].d;

    // abstract element coefficients t[a][b] over F_q; retry until the image
    // has all coordinates invertible
    std::mt19937_64 rng(5);
    std::vector<std::vector<Fe>> t(n, std::vector<Fe>(m));
    EtaleElement x;
    bool is_unit = false;
    for (int attempt = 0; attempt < 50 && !is_unit; ++attempt) {
      for (unsigned a = 0; a < n; ++a)
        for (unsigned b = 0; b < m; ++b)
          t[a][b] = rng() % 3 == 0 ? F.zero() : F.from_subfield_dlog(rng() % (F.q() - 1), 1);

      // map to product coordinates: component j evaluates X at gm^{q^{-j}}
      x.coords.assign(1, {});
      const uint64_t Mm = F.qpow(m) - 1;
      for (unsigned j = 0; j < d; ++j) {
        uint64_t inv = 1;  // dlog multiplier (q^{m-1})^j mod Mm
        for (unsigned i = 0; i < j; ++i) inv = inv * (F.qpow(m - 1) % Mm) % Mm;
        Fe gmj = F.from_subfield_dlog(inv, m);
        Fe comp = F.zero();
        Fe gn_a = F.one();
        for (unsigned a = 0; a < n; ++a) {
          Fe gm_b = F.one();
          for (unsigned b = 0; b < m; ++b) {
            comp = F.add(comp, F.mul(t[a][b], F.mul(gn_a, gm_b)));
            gm_b = F.mul(gm_b, gmj);
          }
          gn_a = F.mul(gn_a, TB.gn);
        }
        x.coords[0].push_back(comp);
      }
      is_unit = std::none_of(x.coords[0].begin(), x.coords[0].end(),
                             [](Fe c) { return c.is_zero(); });
    }
    REQUIRE(is_unit);

    // multiplication matrix over F_{q^m} on the abstract basis {gn^a (x) 1}:
    // multiply x by gn^c (x) 1 and express in coordinates over F_m.
    // Abstract elements live as arrays u[a][b] over F_q with product rules
    // from the reductions of gn^n and gm^m.
    auto mul_by_gn = [&](std::vector<std::vector<Fe>> u) {
      std::vector<std::vector<Fe>> v(n, std::vector<Fe>(m, F.zero()));
      for (unsigned a = 0; a < n; ++a)
        for (unsigned b = 0; b < m; ++b) {
          if (u[a][b].is_zero()) continue;
          if (a + 1 < n) {
            v[a + 1][b] = F.add(v[a + 1][b], u[a][b]);
          } else {
            for (unsigned i = 0; i < n; ++i)
              v[i][b] = F.add(v[i][b], F.mul(u[a][b], TB.gn_red[i]));
          }
        }
      return v;
    };
    // coordinates of abstract u over F_m along basis {gn^a (x) 1}:
    // coord_a = sum_b u[a][b] gm^b evaluated INSIDE F_m  (the b-index is the
    // gm-power in the first tensor component, i.e. the plain embedding)
    auto coord_over_Fm = [&](const std::vector<std::vector<Fe>>& u, unsigned a) {
      Fe acc = F.zero();
      Fe gm_b = F.one();
      for (unsigned b = 0; b < m; ++b) {
        acc = F.add(acc, F.mul(u[a][b], gm_b));
        gm_b = F.mul(gm_b, TB.gm);
      }
      return acc;
    };

    // build T_x columns: x * (gn^c (x) 1)
    std::vector<std::vector<Fe>> M(n, std::vector<Fe>(n));  // rows a, cols c
    for (unsigned c = 0; c < n; ++c) {
      std::vector<std::vector<Fe>> u = t;
      for (unsigned step = 0; step < c; ++step) u = mul_by_gn(u);
      for (unsigned a = 0; a < n; ++a) M[a][c] = coord_over_Fm(u, a);
    }

    // determinant over F_m by Gaussian elimination in the ambient field
    Fe det = F.one();
    Fe tr = F.zero();
    for (unsigned a = 0; a < n; ++a) tr = F.add(tr, M[a][a]);
    std::vector<std::vector<Fe>> G = M;
    for (unsigned col = 0; col < n; ++col) {
      unsigned piv = col;
      while (piv < n && G[piv][col].is_zero()) ++piv;
      REQUIRE(piv < n);
      if (piv != col) {
        std::swap(G[piv], G[col]);
        det = F.neg(det);
      }
      det = F.mul(det, G[col][col]);
      const Fe inv = F.inv(G[col][col]);
      for (unsigned row = col + 1; row < n; ++row) {
        if (G[row][col].is_zero()) continue;
        const Fe f = F.mul(G[row][col], inv);
        for (unsigned cc = col; cc < n; ++cc)
          G[row][cc] = F.sub(G[row][cc], F.mul(f, G[col][cc]));
      }
    }

    CHECK(det == norm2(A, x));
    // F_q-trace of T_x as an F_q-linear map equals Tr_{m/1}(trace over F_m)
    CHECK(F.trace(tr, m, 1) == abs_trace(A, x));
  }
}
