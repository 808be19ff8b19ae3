#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <set>

#include "bkl/chars.hpp"

using namespace bkl;

TEST_CASE("trivial and defining values of multiplicative characters") {
  AmbientField F({3, 1}, 2);
  const MulChar triv{2, 0};
  const MulChar chi{2, 1};
  for (uint64_t k = 0; k < F.units(); ++k)
    CHECK(mul_char_value(F, triv, F.from_dlog(k)) == cplx(1.0, 0.0));
  const cplx at_g = mul_char_value(F, chi, F.subfield_generator(2));
  CHECK(std::abs(at_g - std::polar(1.0, 2.0 * std::numbers::pi / 8.0)) < 1e-15);

  // q=3, d=1, k=1 at x=2: the quadratic character of F_3^x
  const MulChar quad{1, 1};
  CHECK(std::abs(mul_char_value(F, quad, F.scalar(2)) - cplx(-1.0, 0.0)) < 1e-15);
  CHECK_THROWS_AS(mul_char_value(F, chi, F.zero()), Error);
}

TEST_CASE("multiplicative character homomorphism, exhaustive for q^d <= 81") {
  AmbientField F({3, 1}, 4);
  const MulChar chi{4, 7};
  for (uint64_t i = 0; i < F.units(); i += 5)
    for (uint64_t j = 0; j < F.units(); j += 7) {
      Fe x = F.from_dlog(i), y = F.from_dlog(j);
      CHECK(std::abs(mul_char_value(F, chi, F.mul(x, y)) -
                     mul_char_value(F, chi, x) * mul_char_value(F, chi, y)) < 1e-12);
    }
}

TEST_CASE("additive character values and orthogonality") {
  AmbientField F({3, 1}, 1);
  const AddChar psi{F.one()};
  CHECK(add_char_value(F, psi, F.zero(), 1) == cplx(1.0, 0.0));
  CHECK(std::abs(add_char_value(F, psi, F.one(), 1) -
                 std::polar(1.0, 2.0 * std::numbers::pi / 3.0)) < 1e-15);
  cplx sum = 0.0;
  for (uint64_t c = 0; c < 3; ++c) sum += add_char_value(F, psi, F.scalar(c), 1);
  CHECK(std::abs(sum) < 1e-15);
}

TEST_CASE("additive character is additive on subfields") {
  AmbientField F({2, 1}, 4);
  const AddChar psi{F.one()};
  for (uint64_t i = 0; i < F.units(); i += 3)
    for (uint64_t j = 0; j < F.units(); j += 5) {
      Fe x = F.from_dlog(i), y = F.from_dlog(j);
      CHECK(std::abs(add_char_value(F, psi, F.add(x, y), 4) -
                     add_char_value(F, psi, x, 4) * add_char_value(F, psi, y, 4)) < 1e-12);
    }
}

TEST_CASE("character orthogonality over F_{q^d}^x") {
  AmbientField F({2, 1}, 4);
  for (uint64_t k : {uint64_t(0), uint64_t(1), uint64_t(5), uint64_t(7)}) {
    cplx sum = 0.0;
    for (uint64_t w = 0; w < F.units(); ++w)
      sum += mul_char_value(F, {4, k}, F.from_dlog(w));
    const double expect = k == 0 ? double(F.units()) : 0.0;
    CHECK(std::abs(sum - expect) < 1e-9 * double(F.order()));
  }
}

TEST_CASE("frobenius orbits") {
  CHECK(frobenius_orbit(2, 2, 1) == std::vector<uint64_t>{1, 2});
  CHECK(frobenius_orbit(2, 2, 0) == std::vector<uint64_t>{0});
  CHECK(frobenius_orbit(3, 2, 4) == std::vector<uint64_t>{4});  // 4*3 = 12 = 4 mod 8
  CHECK(is_regular(2, 2, 1));
  CHECK(!is_regular(2, 2, 0));
  CHECK(is_regular(5, 1, 3));  // d = 1 is always regular
  CHECK(orbit_degree(2, 4, 5) == 2);  // 5*2=10, 10*2=20=5 mod 15
}

TEST_CASE("inflation is compatible with values through the norm") {
  AmbientField F({3, 1}, 2);
  const MulChar chi{1, 1};
  const MulChar infl = char_inflate(3, chi, 2);
  CHECK(infl.d == 2);
  for (uint64_t w = 0; w < F.units(); ++w) {
    Fe x = F.from_dlog(w);
    CHECK(std::abs(mul_char_value(F, infl, x) -
                   mul_char_value(F, chi, F.norm(x, 2, 1))) < 1e-12);
  }
  // trivial inflates to trivial; equal degrees are the identity
  CHECK(char_inflate(3, {1, 0}, 2).k == 0);
  CHECK(char_inflate(2, {1, 0}, 2).k == 0);  // F_2^x is trivial
  CHECK(char_inflate(3, {2, 3}, 2).k == 3);
  CHECK_THROWS_AS(char_inflate(3, {2, 1}, 3), Error);
}

TEST_CASE("inflation preserves Frobenius-orbit membership") {
  const uint64_t q = 3;
  for (uint64_t k : frobenius_orbit(q, 2, 1)) {
    const MulChar up = char_inflate(q, {2, k}, 4);
    const auto orbit = frobenius_orbit(q, 4, char_inflate(q, {2, 1}, 4).k);
    CHECK(std::count(orbit.begin(), orbit.end(), up.k) == 1);
  }
}

TEST_CASE("character tuple enumeration counts phi_mu(q)") {
  int count = 0;
  for_each_char_tuple({1}, 3, [&](const CharTuple&) { ++count; });
  CHECK(count == 2);
  count = 0;
  for_each_char_tuple({1, 1}, 2, [&](const CharTuple&) { ++count; });
  CHECK(count == 1);
  count = 0;
  std::set<uint64_t> seen;
  for_each_char_tuple({2}, 2, [&](const CharTuple& t) {
    ++count;
    seen.insert(t.chars[0].k);
  });
  CHECK(count == 3);
  CHECK(seen.size() == 3);
  CHECK(char_tuple_count({2, 1}, 3) == 16);
}
