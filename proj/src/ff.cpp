#include "bkl/ff.hpp"

#include <algorithm>
#include <cstring>
#include <fstream>
#include <limits>

namespace bkl {

// ---------------------------------------------------------------------------
// number-theory helpers

bool is_prime_u64(uint64_t n) {
  if (n < 2) return false;
  for (uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

std::vector<uint64_t> prime_factors(uint64_t n) {
  std::vector<uint64_t> out;
  for (uint64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) {
      out.push_back(d);
      while (n % d == 0) n /= d;
    }
  }
  if (n > 1) out.push_back(n);
  return out;
}

uint64_t gcd_u64(uint64_t a, uint64_t b) {
  while (b) {
    a %= b;
    std::swap(a, b);
  }
  return a;
}

uint64_t lcm_u64(uint64_t a, uint64_t b) { return a / gcd_u64(a, b) * b; }

uint64_t ipow_u64(uint64_t b, unsigned e) {
  uint64_t r = 1;
  for (unsigned i = 0; i < e; ++i) {
    require(b == 0 || r <= std::numeric_limits<uint64_t>::max() / b, errc::table_cap_exceeded,
            "integer power overflows 64 bits");
    r *= b;
  }
  return r;
}

uint64_t PrimePower::q() const { return ipow_u64(p, e); }

void PrimePower::validate() const {
  require(is_prime_u64(p), errc::invalid_prime, "p = " + std::to_string(p) + " is not prime");
  require(e >= 1, errc::invalid_argument, "extension exponent must be positive");
}

// ---------------------------------------------------------------------------
// dense polynomial arithmetic over F_p, used only during construction

namespace {

using Poly = std::vector<uint8_t>;  // coefficients, constant term first

Poly poly_mulmod(const Poly& a, const Poly& b, const Poly& f, uint64_t p) {
  const size_t D = f.size() - 1;
  std::vector<uint32_t> acc(a.size() + b.size() - 1, 0);
  for (size_t i = 0; i < a.size(); ++i) {
    if (!a[i]) continue;
    for (size_t j = 0; j < b.size(); ++j) acc[i + j] = uint32_t((acc[i + j] + uint64_t(a[i]) * b[j]) % p);
  }
  // reduce by monic f
  for (size_t i = acc.size(); i-- > D;) {
    if (!acc[i]) continue;
    const uint32_t c = acc[i];
    for (size_t j = 0; j < D; ++j)
      acc[i - D + j] = uint32_t((acc[i - D + j] + uint64_t(c) * (p - f[j])) % p);
    acc[i] = 0;
  }
  Poly r(D, 0);
  for (size_t i = 0; i < D; ++i) r[i] = uint8_t(acc[i]);
  return r;
}

Poly poly_powmod(Poly base, uint64_t k, const Poly& f, uint64_t p) {
  Poly r(f.size() - 1, 0);
  r[0] = 1;
  while (k) {
    if (k & 1) r = poly_mulmod(r, base, f, p);
    base = poly_mulmod(base, base, f, p);
    k >>= 1;
  }
  return r;
}

Poly poly_mod(Poly a, const Poly& b, uint64_t p) {
  while (!a.empty() && a.back() == 0) a.pop_back();
  Poly bb = b;
  while (!bb.empty() && bb.back() == 0) bb.pop_back();
  const size_t db = bb.size() - 1;
  uint64_t inv = 1;
  for (uint64_t x = 1; x < p; ++x)
    if (x * bb.back() % p == 1) {
      inv = x;
      break;
    }
  while (a.size() > db) {
    const size_t da = a.size() - 1;
    const uint64_t c = uint64_t(a.back()) * inv % p;
    if (c) {
      for (size_t j = 0; j + 1 < bb.size(); ++j) {
        uint64_t sub = c * bb[j] % p;
        a[da - db + j] = uint8_t((a[da - db + j] + p - sub) % p);
      }
    }
    a.pop_back();
    while (!a.empty() && a.back() == 0) a.pop_back();
  }
  return a;
}

Poly poly_gcd(Poly a, Poly b, uint64_t p) {
  while (!a.empty() && a.back() == 0) a.pop_back();
  while (!b.empty() && b.back() == 0) b.pop_back();
  while (!b.empty()) {
    Poly r = poly_mod(a, b, p);
    a = std::move(b);
    b = std::move(r);
  }
  return a;
}

bool poly_is_constant(const Poly& a) {
  for (size_t i = 1; i < a.size(); ++i)
    if (a[i]) return false;
  return !a.empty() && a[0] != 0;
}

bool poly_is_one(const Poly& a) {
  if (a.empty() || a[0] != 1) return false;
  for (size_t i = 1; i < a.size(); ++i)
    if (a[i]) return false;
  return true;
}

// Rabin irreducibility test for monic f of degree D over F_p.
bool is_irreducible(const Poly& f, uint64_t p) {
  const unsigned D = unsigned(f.size() - 1);
  Poly x(D, 0);
  if (D == 1) return true;
  x[1] = 1;
  // x^{p^D} == x (mod f)
  Poly xp = x;
  for (unsigned i = 0; i < D; ++i) xp = poly_powmod(xp, p, f, p);
  if (xp != x) return false;
  for (uint64_t t : prime_factors(D)) {
    Poly y = x;
    for (unsigned i = 0; i < D / t; ++i) y = poly_powmod(y, p, f, p);
    // gcd(f, y - x) must be constant
    Poly diff(D, 0);
    for (unsigned i = 0; i < D; ++i) diff[i] = uint8_t((y[i] + p - x[i]) % p);
    Poly g = poly_gcd(f, diff, p);
    if (!poly_is_constant(g)) return false;
  }
  return true;
}

Poly code_to_poly(uint64_t code, unsigned D, uint64_t p) {
  Poly a(D, 0);
  for (unsigned i = 0; i < D && code; ++i) {
    a[i] = uint8_t(code % p);
    code /= p;
  }
  return a;
}

uint32_t poly_to_code(const Poly& a, uint64_t p) {
  uint64_t code = 0, mult = 1;
  for (uint8_t c : a) {
    code += c * mult;
    mult *= p;
  }
  return uint32_t(code);
}

}  // namespace

// ---------------------------------------------------------------------------
// construction

void AmbientField::derive_sizes(uint64_t table_cap) {
  base_.validate();
  require(N_ >= 1, errc::invalid_argument, "ambient degree must be positive");
  D_ = base_.e * N_;
  q_ = base_.q();
  pD_ = ipow_u64(base_.p, D_);
  M_ = pD_ - 1;
  require(M_ <= table_cap, errc::table_cap_exceeded,
          "q^N - 1 = " + std::to_string(M_) + " exceeds table cap " + std::to_string(table_cap));
}

AmbientField::AmbientField(PrimePower base, unsigned N, uint64_t table_cap) : base_(base), N_(N) {
  derive_sizes(table_cap);
  const uint64_t p = base_.p;

  // lexicographically smallest monic irreducible: scan non-leading codes
  modulus_.assign(D_ + 1, 0);
  modulus_[D_] = 1;
  bool found = false;
  for (uint64_t code = 0; code < pD_; ++code) {
    Poly f = code_to_poly(code, D_, p);
    f.push_back(1);
    if (is_irreducible(f, p)) {
      modulus_ = f;
      found = true;
      break;
    }
  }
  require(found, errc::invalid_argument, "no irreducible modulus found");

  // smallest full-order code
  const auto mfac = prime_factors(M_);
  gen_ = {0};
  for (uint64_t code = 1; code < pD_; ++code) {
    Poly a = code_to_poly(code, D_, p);
    bool full = true;
    for (uint64_t r : mfac) {
      if (poly_is_one(poly_powmod(a, M_ / r, modulus_, p))) {
        full = false;
        break;
      }
    }
    if (full) {
      gen_ = {uint32_t(code)};
      break;
    }
  }
  require(!gen_.is_zero(), errc::invalid_argument, "no generator found");

  // dense exp/dlog tables: one pass of multiplications by g
  // rows[i] = g * x^i mod f, as coefficient vectors
  std::vector<Poly> rows(D_);
  {
    Poly g = code_to_poly(gen_.code, D_, p);
    for (unsigned i = 0; i < D_; ++i) {
      Poly xi(D_, 0);
      xi[i] = 1;
      rows[i] = poly_mulmod(g, xi, modulus_, p);
    }
  }
  exp_.assign(M_, 0);
  dlog_.assign(pD_, 0);
  Poly cur(D_, 0);
  cur[0] = 1;
  std::vector<uint32_t> acc(D_);
  for (uint64_t k = 0; k < M_; ++k) {
    uint32_t code = poly_to_code(cur, p);
    require(k == 0 || code != 1, errc::invalid_argument, "generator order is not maximal");
    exp_[k] = code;
    dlog_[code] = uint32_t(k);
    std::fill(acc.begin(), acc.end(), 0);
    for (unsigned i = 0; i < D_; ++i) {
      if (!cur[i]) continue;
      for (unsigned j = 0; j < D_; ++j) acc[j] += cur[i] * rows[i][j];
    }
    for (unsigned j = 0; j < D_; ++j) cur[j] = uint8_t(acc[j] % p);
  }
  require(poly_to_code(cur, p) == 1, errc::invalid_argument, "generator order mismatch");
}

AmbientField::AmbientField(from_cache_tag, PrimePower base, unsigned N, std::vector<uint8_t> modulus,
                           Fe gen, std::vector<uint32_t> dlog)
    : base_(base), N_(N), modulus_(std::move(modulus)), gen_(gen), dlog_(std::move(dlog)) {
  derive_sizes(std::numeric_limits<uint64_t>::max());
  rebuild_exp_from_dlog();
}

void AmbientField::rebuild_exp_from_dlog() {
  exp_.assign(M_, 0);
  for (uint64_t code = 1; code < pD_; ++code) exp_[dlog_[code]] = uint32_t(code);
}

// ---------------------------------------------------------------------------
// element operations

Fe AmbientField::add(Fe a, Fe b) const {
  if (base_.p == 2) return {a.code ^ b.code};
  uint64_t ca = a.code, cb = b.code, out = 0, mult = 1;
  const uint64_t p = base_.p;
  while (ca || cb) {
    out += (ca % p + cb % p) % p * mult;
    ca /= p;
    cb /= p;
    mult *= p;
  }
  return {uint32_t(out)};
}

Fe AmbientField::neg(Fe a) const {
  if (base_.p == 2) return a;
  uint64_t ca = a.code, out = 0, mult = 1;
  const uint64_t p = base_.p;
  while (ca) {
    uint64_t d = ca % p;
    out += (d ? p - d : 0) * mult;
    ca /= p;
    mult *= p;
  }
  return {uint32_t(out)};
}

Fe AmbientField::mul(Fe a, Fe b) const {
  if (a.is_zero() || b.is_zero()) return {0};
  uint64_t k = uint64_t(dlog_[a.code]) + dlog_[b.code];
  if (k >= M_) k -= M_;
  return {exp_[k]};
}

Fe AmbientField::inv(Fe a) const {
  require(!a.is_zero(), errc::zero_argument, "inverse of zero");
  uint64_t k = dlog_[a.code];
  return {exp_[k == 0 ? 0 : M_ - k]};
}

Fe AmbientField::pow(Fe a, uint64_t k) const {
  if (a.is_zero()) return k == 0 ? one() : zero();
  return {exp_[(uint64_t(dlog_[a.code]) % M_) * (k % M_) % M_]};
}

uint64_t AmbientField::dlog(Fe x) const {
  require(!x.is_zero(), errc::zero_argument, "dlog of zero");
  return dlog_[x.code];
}

// ---------------------------------------------------------------------------
// subfields, norms, traces

void AmbientField::check_subfield_arg(unsigned d, const char* who) const {
  require(degree_divides(d), errc::degree_not_dividing,
          std::string(who) + ": degree " + std::to_string(d) + " does not divide N = " + std::to_string(N_));
}

uint64_t AmbientField::qpow(unsigned d) const { return ipow_u64(q_, d); }

uint64_t AmbientField::subfield_units(unsigned d) const {
  check_subfield_arg(d, "subfield_units");
  return qpow(d) - 1;
}

Fe AmbientField::subfield_generator(unsigned d) const {
  check_subfield_arg(d, "subfield_generator");
  return from_dlog(M_ / (qpow(d) - 1) % M_);
}

bool AmbientField::in_subfield(Fe x, unsigned d) const {
  check_subfield_arg(d, "in_subfield");
  if (x.is_zero()) return true;
  return dlog_[x.code] % (M_ / (qpow(d) - 1)) == 0;
}

uint64_t AmbientField::subfield_dlog(Fe x, unsigned d) const {
  check_subfield_arg(d, "subfield_dlog");
  require(!x.is_zero(), errc::zero_argument, "subfield_dlog of zero");
  const uint64_t step = M_ / (qpow(d) - 1);
  const uint64_t k = dlog_[x.code];
  require(k % step == 0, errc::degree_mismatch, "element not in requested subfield");
  return k / step;
}

Fe AmbientField::from_subfield_dlog(uint64_t w, unsigned d) const {
  check_subfield_arg(d, "from_subfield_dlog");
  const uint64_t Md = qpow(d) - 1;
  return from_dlog(w % Md * (M_ / Md));
}

Fe AmbientField::frobenius_q(Fe x) const {
  if (x.is_zero()) return x;
  return {exp_[uint64_t(dlog_[x.code]) * (q_ % M_) % M_]};
}

Fe AmbientField::norm(Fe x, unsigned l, unsigned m) const {
  check_subfield_arg(l, "norm");
  require(m >= 1 && l % m == 0, errc::degree_not_dividing, "norm: m does not divide l");
  require(in_subfield(x, l), errc::degree_mismatch, "norm: element outside F_{q^l}");
  if (x.is_zero()) return x;
  uint64_t s = 0, qm = qpow(m) % M_;
  uint64_t t = 1;
  for (unsigned i = 0; i < l / m; ++i) {
    s += t;
    t = t * qm % M_;
  }
  return {exp_[uint64_t(dlog_[x.code]) % M_ * (s % M_) % M_]};
}

Fe AmbientField::trace(Fe x, unsigned l, unsigned m) const {
  check_subfield_arg(l, "trace");
  require(m >= 1 && l % m == 0, errc::degree_not_dividing, "trace: m does not divide l");
  require(in_subfield(x, l), errc::degree_mismatch, "trace: element outside F_{q^l}");
  if (x.is_zero()) return x;
  Fe acc = zero();
  uint64_t k = dlog_[x.code];
  const uint64_t qm = qpow(m) % M_;
  for (unsigned i = 0; i < l / m; ++i) {
    acc = add(acc, {exp_[k]});
    k = k * qm % M_;
  }
  return acc;
}

uint64_t AmbientField::abs_trace_p(Fe x, unsigned r) const {
  check_subfield_arg(r, "abs_trace_p");
  require(in_subfield(x, r), errc::degree_mismatch, "abs_trace_p: element outside F_{q^r}");
  if (x.is_zero()) return 0;
  Fe acc = zero();
  uint64_t k = dlog_[x.code];
  const uint64_t pm = base_.p % M_;
  for (unsigned i = 0; i < base_.e * r; ++i) {
    acc = add(acc, {exp_[k]});
    k = k * pm % M_;
  }
  require(acc.code < base_.p, errc::degree_mismatch, "absolute trace left the prime field");
  return acc.code;
}

// ---------------------------------------------------------------------------
// cache file: magic "BKL1"; p, e, N, modulus coeffs (D+1), generator coeffs
// (D), all little-endian u64; then q^N - 1 u64 dlog entries, entry i holding
// dlog of the element with code i + 1.

namespace {

void put_u64(std::ostream& os, uint64_t v) {
  unsigned char b[8];
  for (int i = 0; i < 8; ++i) b[i] = (v >> (8 * i)) & 0xff;
  os.write(reinterpret_cast<const char*>(b), 8);
}

bool get_u64(std::istream& is, uint64_t& v) {
  unsigned char b[8];
  if (!is.read(reinterpret_cast<char*>(b), 8)) return false;
  v = 0;
  for (int i = 0; i < 8; ++i) v |= uint64_t(b[i]) << (8 * i);
  return true;
}

}  // namespace

void AmbientField::save_cache(const std::string& path) const {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  require(bool(os), errc::io_error, "cannot open cache file for writing: " + path);
  os.write("BKL1", 4);
  put_u64(os, base_.p);
  put_u64(os, base_.e);
  put_u64(os, N_);
  for (uint8_t c : modulus_) put_u64(os, c);
  {
    Poly g = code_to_poly(gen_.code, D_, base_.p);
    for (uint8_t c : g) put_u64(os, c);
  }
  for (uint64_t code = 1; code < pD_; ++code) put_u64(os, dlog_[code]);
  require(bool(os), errc::io_error, "failed writing cache file: " + path);
}

std::optional<AmbientField> AmbientField::load_cache(const std::string& path, PrimePower base,
                                                     unsigned N, uint64_t table_cap) {
  std::ifstream is(path, std::ios::binary);
  if (!is) return std::nullopt;
  char magic[4];
  if (!is.read(magic, 4) || std::memcmp(magic, "BKL1", 4) != 0) return std::nullopt;
  uint64_t p, e, n;
  if (!get_u64(is, p) || !get_u64(is, e) || !get_u64(is, n)) return std::nullopt;
  if (p != base.p || e != base.e || n != N) return std::nullopt;
  const unsigned D = base.e * N;
  const uint64_t pD = ipow_u64(base.p, D);
  if (pD - 1 > table_cap) fail(errc::table_cap_exceeded, "cached field exceeds table cap");
  std::vector<uint8_t> modulus(D + 1);
  for (auto& c : modulus) {
    uint64_t v;
    if (!get_u64(is, v) || v >= base.p) return std::nullopt;
    c = uint8_t(v);
  }
  uint64_t gcode = 0, mult = 1;
  for (unsigned i = 0; i < D; ++i) {
    uint64_t v;
    if (!get_u64(is, v) || v >= base.p) return std::nullopt;
    gcode += v * mult;
    mult *= base.p;
  }
  std::vector<uint32_t> dlog(pD, 0);
  for (uint64_t code = 1; code < pD; ++code) {
    uint64_t v;
    if (!get_u64(is, v) || v >= pD - 1) return std::nullopt;
    dlog[code] = uint32_t(v);
  }
  AmbientField F(from_cache_tag{}, base, N, std::move(modulus), Fe{uint32_t(gcode)},
                 std::move(dlog));
  // spot check before trusting the table
  if (F.dlog(F.generator()) != (F.units() == 1 ? 0 : 1)) return std::nullopt;
  return F;
}

AmbientField AmbientField::make_cached(PrimePower base, unsigned N, uint64_t table_cap,
                                       const std::string& cache_dir) {
  if (cache_dir.empty()) return AmbientField(base, N, table_cap);
  const std::string path = cache_dir + "/bkl_dlog_p" + std::to_string(base.p) + "_e" +
                           std::to_string(base.e) + "_N" + std::to_string(N) + ".tbl";
  if (auto cached = load_cache(path, base, N, table_cap)) return std::move(*cached);
  AmbientField F(base, N, table_cap);
  try {
    F.save_cache(path);
  } catch (const Error&) {
    // caching is best-effort; the freshly built field is still valid
  }
  return F;
}

}  // namespace bkl
