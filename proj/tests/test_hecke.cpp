#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "bkl/bessel.hpp"
#include "bkl/hecke.hpp"

using namespace bkl;

TEST_CASE("group sizes") {
  hecke::GroupTable g22(2, 2, 1);
  CHECK(g22.size() == 6);  // GL_2(F_2) = S_3
  CHECK(g22.unipotent_size() == 2);
  hecke::GroupTable g23(2, 3, 1);
  CHECK(g23.size() == 48);
  hecke::GroupTable g32(3, 2, 1);
  CHECK(g32.size() == 168);
  hecke::GroupTable g24(2, 2, 2);  // q = 4
  CHECK(g24.size() == 180);
  CHECK_THROWS_AS(hecke::GroupTable(3, 5, 1), Error);  // over the size cap
}

TEST_CASE("group closure and inverses on samples") {
  hecke::GroupTable G(2, 3, 1);
  for (uint32_t a = 0; a < G.size(); a += 7)
    for (uint32_t b = 0; b < G.size(); b += 11) {
      const uint32_t ab = G.mul(a, b);  // lookup throws unless invertible
      CHECK(G.mul(G.inverse(ab), ab) == G.identity());
    }
}

TEST_CASE("support point counts") {
  hecke::GroupTable g22(2, 2, 1);
  CHECK(hecke::support_points(g22).size() == 2);
  hecke::GroupTable g23(2, 3, 1);
  CHECK(hecke::support_points(g23).size() == 6);
  hecke::GroupTable g33(3, 3, 1);
  CHECK(hecke::support_points(g33).size() == 18);
}

TEST_CASE("oracle of GL_2(F_2): two functions, consistent and commutative") {
  hecke::GroupTable G(2, 2, 1);
  const auto oracle = hecke::bessel_functions_numeric(G, 1);
  CHECK(oracle.functions.size() == 2);
  CHECK(oracle.commutator_max < 1e-9);
  CHECK(oracle.offsupport_max < 1e-9);
  for (const auto& f : oracle.functions)
    CHECK(std::abs(f.point_values[oracle.identity_point] - hecke::cplx(1.0, 0.0)) < 1e-9);
}

TEST_CASE("oracle of GL_2(F_3) finds the Steinberg value 2/3") {
  hecke::GroupTable G(2, 3, 1);
  const auto oracle = hecke::bessel_functions_numeric(G, 1);
  CHECK(oracle.functions.size() == 6);
  CHECK(oracle.commutator_max < 1e-9);
  // locate the point ((1,1),(1,1))
  size_t split = size_t(-1);
  for (size_t t = 0; t < oracle.points.size(); ++t)
    if (oracle.points[t].blocks == std::vector<unsigned>{1, 1} &&
        oracle.points[t].scalars == std::vector<uint8_t>{1, 1})
      split = t;
  REQUIRE(split != size_t(-1));
  // some eigenfunction takes the value 2/3 there (the Steinberg one)
  bool found = false;
  for (const auto& f : oracle.functions)
    if (std::abs(f.point_values[split] - hecke::cplx(2.0 / 3.0, 0.0)) < 1e-8) found = true;
  CHECK(found);
}

TEST_CASE("matching is bijective and tight for (2,2), (2,3), (3,2)") {
  for (auto [n, q] : std::vector<std::pair<unsigned, uint64_t>>{{2, 2}, {2, 3}, {3, 2}}) {
    hecke::GroupTable G(n, q, 1);
    const auto oracle = hecke::bessel_functions_numeric(G, 1);
    AmbientField F({q, 1}, required_ambient_degree(n));
    BesselContext ctx(F);
    const auto match = hecke::match_oracle_to_params(oracle, G, ctx, 1);
    CHECK(match.max_value_deviation < 1e-6);
    CHECK(match.min_second_best > 1e-3);
  }
}

TEST_CASE("perturbed oracle values fail the match") {
  hecke::GroupTable G(2, 2, 1);
  auto oracle = hecke::bessel_functions_numeric(G, 1);
  AmbientField F({2, 1}, required_ambient_degree(2));
  BesselContext ctx(F);
  for (auto& f : oracle.functions)
    for (auto& v : f.point_values) v += hecke::cplx(3e-4, 0.0);  // within 1e-3, beyond 1e-6
  CHECK_THROWS_AS(hecke::match_oracle_to_params(oracle, G, ctx, 1), Error);
}
