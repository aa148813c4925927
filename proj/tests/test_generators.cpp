#include <catch2/catch_amalgamated.hpp>

#include <set>
#include <vector>

#include "oracles.hpp"
#include "pbdim/design.hpp"
#include "pbdim/errors.hpp"
#include "pbdim/generators.hpp"
#include "pbdim/io.hpp"

using namespace pbdim;

TEST_CASE("affine planes and spaces") {
  PBDesign ag9 = affine_space(3, 2);
  CHECK(ag9.v == 9);
  CHECK(ag9.blocks.size() == 12);
  REQUIRE(ag9.declared_sizes.has_value());
  CHECK(*ag9.declared_sizes == std::vector<int>{3});
  CHECK(verify_pbd(ag9).valid);

  // Row-major point ids: {0,1,2} is the first line of the first coordinate.
  bool found = false;
  for (const auto& b : ag9.blocks)
    if (b == Block{0, 1, 2}) found = true;
  CHECK(found);

  struct Case {
    long long q;
    int d;
  };
  const Case cases[] = {{2, 2}, {2, 3}, {2, 4}, {3, 2}, {3, 3},
                        {4, 2}, {5, 2}, {7, 2}, {3, 4}, {13, 2}};
  for (auto [q, d] : cases) {
    PBDesign ag = affine_space(q, d);
    long long points = 1;
    for (int i = 0; i < d; ++i) points *= q;
    CHECK(ag.v == points);
    long long lines = points / q * (points - 1) / (q - 1);
    CHECK((long long)ag.blocks.size() == lines);
    for (const auto& b : ag.blocks) CHECK((long long)b.size() == q);
    CHECK(verify_pbd(ag).valid);
  }
}

TEST_CASE("dimension one affine space is a single block") {
  PBDesign d = affine_space(5, 1);
  CHECK(d.v == 5);
  REQUIRE(d.blocks.size() == 1);
  CHECK(d.blocks[0] == Block{0, 1, 2, 3, 4});
  CHECK(is_trivial_space(d));
}

TEST_CASE("binary affine plane is the complete pair graph") {
  PBDesign d = affine_space(2, 2);
  CHECK(d.v == 4);
  CHECK(d.blocks.size() == 6);
  std::set<Block> seen(d.blocks.begin(), d.blocks.end());
  for (int a = 0; a < 4; ++a)
    for (int b = a + 1; b < 4; ++b) CHECK(seen.count({a, b}) == 1);
}

TEST_CASE("projective planes") {
  PBDesign fano = projective_plane(2);
  CHECK(fano.v == 7);
  CHECK(fano.blocks.size() == 7);
  CHECK(verify_pbd(fano).valid);

  PBDesign pg3 = projective_plane(3);
  CHECK(pg3.v == 13);
  CHECK(pg3.blocks.size() == 13);
  REQUIRE(pg3.declared_sizes.has_value());
  CHECK(*pg3.declared_sizes == std::vector<int>{4});
  CHECK(verify_pbd(pg3).valid);

  for (long long q : {4, 5, 7, 8, 9}) {
    PBDesign pg = projective_plane(q);
    CHECK(pg.v == q * q + q + 1);
    CHECK((long long)pg.blocks.size() == q * q + q + 1);
    // Each point lies on q+1 lines.
    for (long long r : oracles::replication_counts(pg)) CHECK(r == q + 1);
    CHECK(verify_pbd(pg).valid);
  }
}

TEST_CASE("transversal designs") {
  GroupDesign td = transversal_design(3, 4);
  CHECK(td.v == 12);
  REQUIRE(td.groups.size() == 3);
  for (const auto& g : td.groups) CHECK(g.size() == 4);
  CHECK(td.blocks.size() == 16);
  for (const auto& b : td.blocks) CHECK(b.size() == 3);
  CHECK(verify_gdd(td).valid);

  // k = 2 lists every cross pair.
  GroupDesign td2 = transversal_design(2, 5);
  CHECK(td2.blocks.size() == 25);
  CHECK(verify_gdd(td2).valid);

  // k = n+1 uses the extended slope coordinate.
  GroupDesign ext = transversal_design(4, 3);
  CHECK(ext.v == 12);
  CHECK(ext.blocks.size() == 9);
  CHECK(verify_gdd(ext).valid);
  GroupDesign ext2 = transversal_design(5, 4);
  CHECK(verify_gdd(ext2).valid);
}

TEST_CASE("transversal design limits") {
  CHECK_THROWS_AS(transversal_design(5, 3), UnsupportedError);
  CHECK_THROWS_AS(transversal_design(3, 6), UnsupportedError);
  CHECK_THROWS_AS(transversal_design(1, 4), Error);
}

TEST_CASE("triple systems exist at every admissible order") {
  PBDesign s7 = steiner_triple_system(7);
  CHECK(s7.v == 7);
  CHECK(s7.blocks.size() == 7);
  CHECK(verify_pbd(s7).valid);

  PBDesign s9 = steiner_triple_system(9);
  CHECK(s9.v == 9);
  CHECK(s9.blocks.size() == 12);
  CHECK(verify_pbd(s9).valid);
  // Same parameter set as the ternary affine plane.
  CHECK(observed_sizes(s9) == std::vector<int>{3});

  for (long long v = 1; v <= 99; ++v) {
    if (v % 6 != 1 && v % 6 != 3) continue;
    PBDesign sts = steiner_triple_system(v);
    CHECK(sts.v == v);
    CHECK((long long)sts.blocks.size() == v * (v - 1) / 6);
    CHECK(verify_pbd(sts).valid);
  }

  CHECK_THROWS_AS(steiner_triple_system(6), InadmissibleError);
  CHECK_THROWS_AS(steiner_triple_system(5), InadmissibleError);
  try {
    steiner_triple_system(8);
    FAIL("expected a throw");
  } catch (const InadmissibleError& e) {
    CHECK_THAT(e.what(),
               Catch::Matchers::ContainsSubstring("no triple system"));
  }
}

TEST_CASE("generators reject bad parameters") {
  CHECK_THROWS_AS(affine_space(6, 2), NotPrimePowerError);
  CHECK_THROWS_AS(affine_space(3, 0), Error);
  CHECK_THROWS_AS(projective_plane(6), NotPrimePowerError);
  CHECK_THROWS_AS(affine_space(2, 21), TooLargeError);
}

TEST_CASE("generators are deterministic") {
  CHECK(serialize(affine_space(3, 2)) == serialize(affine_space(3, 2)));
  CHECK(serialize(projective_plane(4)) == serialize(projective_plane(4)));
  CHECK(serialize(transversal_design(4, 4)) ==
        serialize(transversal_design(4, 4)));
  CHECK(serialize(steiner_triple_system(21)) ==
        serialize(steiner_triple_system(21)));
}
