#include "bkl/symfun.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "bkl/error.hpp"

namespace bkl {

std::vector<Partition> partitions_of(unsigned m) {
  std::vector<Partition> out;
  Partition cur;
  // descending-lex generation: largest first part first
  auto rec = [&](auto&& self, unsigned rest, unsigned maxpart) -> void {
    if (rest == 0) {
      out.push_back(cur);
      return;
    }
    for (unsigned part = std::min(rest, maxpart); part >= 1; --part) {
      cur.push_back(part);
      self(self, rest - part, part);
      cur.pop_back();
    }
  };
  rec(rec, m, m == 0 ? 1 : m);
  return out;
}

uint64_t z_mu(const Partition& mu) {
  uint64_t z = 1;
  unsigned i = 0;
  while (i < mu.size()) {
    unsigned j = i;
    while (j < mu.size() && mu[j] == mu[i]) ++j;
    const unsigned count = j - i;
    for (unsigned c = 1; c <= count; ++c) z *= c;           // mu(k)!
    for (unsigned c = 0; c < count; ++c) z *= mu[i];        // k^{mu(k)}
    i = j;
  }
  return z;
}

uint64_t phi_mu(const Partition& mu, uint64_t q) {
  uint64_t out = 1;
  for (unsigned part : mu) {
    uint64_t t = 1;
    for (unsigned i = 0; i < part; ++i) t *= q;
    out *= t - 1;
  }
  return out;
}

std::vector<cplx> elementary_from_powers(const std::vector<cplx>& p) {
  const size_t M = p.size();
  std::vector<cplx> e(M + 1);
  e[0] = 1.0;
  for (size_t m = 1; m <= M; ++m) {
    cplx acc = 0.0;
    for (size_t i = 1; i <= m; ++i) acc += (i % 2 ? 1.0 : -1.0) * e[m - i] * p[i - 1];
    e[m] = acc / double(m);
  }
  return e;
}

std::vector<cplx> complete_from_powers(const std::vector<cplx>& p) {
  const size_t M = p.size();
  std::vector<cplx> h(M + 1);
  h[0] = 1.0;
  for (size_t m = 1; m <= M; ++m) {
    cplx acc = 0.0;
    for (size_t i = 1; i <= m; ++i) acc += h[m - i] * p[i - 1];
    h[m] = acc / double(m);
  }
  return h;
}

std::vector<cplx> powers_from_elementary(const std::vector<cplx>& e, unsigned M) {
  require(!e.empty() && e[0] == cplx(1.0), errc::invalid_argument,
          "powers_from_elementary: e_0 must be 1");
  auto em = [&](size_t m) -> cplx { return m < e.size() ? e[m] : cplx(0.0); };
  std::vector<cplx> p(M);
  for (size_t m = 1; m <= M; ++m) {
    cplx acc = double(m) * em(m);
    for (size_t i = 1; i < m; ++i) acc -= (i % 2 ? 1.0 : -1.0) * em(m - i) * p[i - 1];
    p[m - 1] = (m % 2 ? 1.0 : -1.0) * acc;
  }
  return p;
}

cplx exterior_trace_from_powers(const std::vector<cplx>& p, unsigned m) {
  require(p.size() >= m, errc::invalid_argument, "exterior trace needs p_1..p_m");
  cplx acc = 0.0;
  for (const Partition& mu : partitions_of(m)) {
    cplx term = 1.0;
    for (unsigned part : mu) term *= p[part - 1];
    const int sign = (m + mu.size()) % 2 == 0 ? 1 : -1;
    acc += double(sign) / double(z_mu(mu)) * term;
  }
  return acc;
}

cplx dickson_eval(const std::vector<cplx>& e, unsigned k, unsigned j) {
  const unsigned n = unsigned(e.size());
  require(1 <= j && j <= n && k >= 1, errc::invalid_argument, "dickson_eval: need 1 <= j <= n, k >= 1");
  std::vector<cplx> e_full(n + 1);
  e_full[0] = 1.0;
  for (unsigned i = 0; i < n; ++i) e_full[i + 1] = e[i];
  const std::vector<cplx> p = powers_from_elementary(e_full, n * k);
  std::vector<cplx> p_sub(n);
  for (unsigned i = 1; i <= n; ++i) p_sub[i - 1] = p[i * k - 1];
  return elementary_from_powers(p_sub)[j];
}

// ---------------------------------------------------------------------------
// Aberth-Ehrlich root finder

namespace {

cplx poly_eval(const std::vector<cplx>& a, cplx x) {
  cplx v = 0.0;
  for (size_t i = a.size(); i-- > 0;) v = v * x + a[i];
  return v;
}

cplx poly_eval_deriv(const std::vector<cplx>& a, cplx x) {
  cplx v = 0.0;
  for (size_t i = a.size(); i-- > 1;) v = v * x + double(i) * a[i];
  return v;
}

// tiny deterministic generator for perturbations and restarts
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

std::vector<cplx> poly_roots(const std::vector<cplx>& coeffs) {
  require(!coeffs.empty() && std::abs(coeffs.back()) != 0.0, errc::degenerate_leading,
          "poly_roots: leading coefficient is zero");
  std::vector<cplx> a = coeffs;
  std::vector<cplx> roots;

  // roots at the origin
  size_t shift = 0;
  while (shift + 1 < a.size() && a[shift] == cplx(0.0)) ++shift;
  for (size_t i = 0; i < shift; ++i) roots.push_back(0.0);
  if (shift) a.erase(a.begin(), a.begin() + long(shift));

  const size_t n = a.size() - 1;
  if (n == 0) return roots;
  if (n == 1) {
    roots.push_back(-a[0] / a[1]);
    return roots;
  }

  double scale = 0.0;
  for (const cplx& c : coeffs) scale += std::abs(c);
  const double target = 1e-10 * scale;

  // Cauchy bound
  double R = 0.0;
  for (size_t i = 0; i < n; ++i) R = std::max(R, std::abs(a[i] / a[n]));
  R = 1.0 + R;

  SplitMix rng{0x5eedULL};
  std::vector<cplx> z(n);
  auto init = [&]() {
    for (size_t i = 0; i < n; ++i) {
      const double ang =
          2.0 * std::numbers::pi * (double(i) / double(n) + 0.5 / double(n) + 0.05 * rng.next_unit());
      const double rad = 0.8 * R * (1.0 + 0.1 * rng.next_unit());
      z[i] = std::polar(rad, ang);
    }
  };
  init();

  double best_resid = 1e300;
  int stagnation = 0;
  for (int iter = 0; iter < 500; ++iter) {
    double max_step = 0.0;
    for (size_t i = 0; i < n; ++i) {
      const cplx pv = poly_eval(a, z[i]);
      const cplx dv = poly_eval_deriv(a, z[i]);
      if (pv == cplx(0.0)) continue;
      cplx w = dv == cplx(0.0) ? cplx(0.0) : pv / dv;
      cplx s = 0.0;
      for (size_t j = 0; j < n; ++j)
        if (j != i) s += 1.0 / (z[i] - z[j]);
      const cplx denom = 1.0 - w * s;
      cplx step = denom == cplx(0.0) ? w : w / denom;
      if (dv == cplx(0.0)) step = std::polar(0.1 * (1.0 + std::abs(z[i])), 2.0 * std::numbers::pi * rng.next_unit());
      z[i] -= step;
      max_step = std::max(max_step, std::abs(step));
    }
    double resid = 0.0;
    for (size_t i = 0; i < n; ++i) resid = std::max(resid, std::abs(poly_eval(a, z[i])));
    if (resid <= target || max_step <= 1e-15 * (1.0 + R)) break;
    if (resid < 0.9 * best_resid) {
      best_resid = resid;
      stagnation = 0;
    } else if (++stagnation >= 60) {
      init();  // restart with re-randomized phases
      best_resid = 1e300;
      stagnation = 0;
    }
  }

  double resid = 0.0;
  for (size_t i = 0; i < n; ++i) resid = std::max(resid, std::abs(poly_eval(a, z[i])));
  require(resid <= 1e-8 * scale, errc::invalid_argument,
          "poly_roots: residual too large after iteration");
  roots.insert(roots.end(), z.begin(), z.end());
  return roots;
}

UnitCircleReport roots_on_unit_circle(const std::vector<cplx>& coeffs, double tol) {
  UnitCircleReport rep;
  for (const cplx& r : poly_roots(coeffs))
    rep.max_deviation = std::max(rep.max_deviation, std::abs(std::abs(r) - 1.0));
  rep.on_circle = rep.max_deviation <= tol;
  return rep;
}

std::vector<cplx> delta_deform(const std::vector<cplx>& coeffs, double delta) {
  const size_t n = coeffs.empty() ? 0 : coeffs.size() - 1;
  std::vector<cplx> out(coeffs.size());
  for (size_t k = 0; k < coeffs.size(); ++k) out[k] = coeffs[k] * std::pow(delta, double(k * (n - k)));
  return out;
}

}  // namespace bkl
