#include <catch2/catch_amalgamated.hpp>

#include <map>
#include <set>
#include <vector>

#include "oracles.hpp"
#include "pbdim/closure.hpp"
#include "pbdim/constructions.hpp"
#include "pbdim/design.hpp"
#include "pbdim/errors.hpp"
#include "pbdim/generators.hpp"
#include "pbdim/io.hpp"
#include "pbdim/registry.hpp"

using namespace pbdim;

namespace {

DesignRegistry g_empty_registry;

IngredientProvider builtin_provider() {
  return IngredientProvider(&g_empty_registry);
}

std::map<int, int> size_histogram(const std::vector<Block>& blocks) {
  std::map<int, int> h;
  for (const auto& b : blocks) ++h[(int)b.size()];
  return h;
}

}  // namespace

TEST_CASE("breaking the one-block design yields the plane") {
  PBDesign master;
  master.v = 13;
  master.blocks.push_back({});
  for (int p = 0; p < 13; ++p) master.blocks[0].push_back(p);

  IngredientProvider prov = builtin_provider();
  PBDesign out = break_blocks(master, prov, {4});
  CHECK(serialize(out) == serialize(projective_plane(3)));
}

TEST_CASE("breaking is the identity when sizes already conform") {
  PBDesign ag9 = affine_space(3, 2);
  IngredientProvider prov = builtin_provider();
  PBDesign out = break_blocks(ag9, prov, {3});
  CHECK(out.blocks == ag9.blocks);
  REQUIRE(out.declared_sizes.has_value());
  CHECK(*out.declared_sizes == std::vector<int>{3});
  CHECK(verify_pbd(out).valid);
}

TEST_CASE("breaking reports the exact missing ingredient") {
  IngredientProvider prov = builtin_provider();
  try {
    break_blocks(projective_plane(3), prov, {5});
    FAIL("expected a throw");
  } catch (const MissingIngredientError& e) {
    CHECK(e.request() == "PBD(4, {5})");
  }
}

TEST_CASE("breaking group design blocks leaves the groups alone") {
  GroupDesign td = transversal_design(4, 4);
  IngredientProvider prov = builtin_provider();
  GroupDesign out = break_blocks(td, prov, {2});
  CHECK(out.groups == td.groups);
  CHECK(out.blocks.size() == 96);
  for (const auto& b : out.blocks) CHECK(b.size() == 2);
  CHECK(verify_gdd(out).valid);
}

TEST_CASE("uniform inflation of the ternary plane") {
  GroupDesign master = pbd_as_gdd(affine_space(3, 2));
  IngredientProvider prov = builtin_provider();
  WfcResult r = wfc(master, WeightAssignment::uniform(9, 4), prov, {3});

  CHECK(r.design.v == 36);
  CHECK(type_string(group_type(r.design)) == "4^9");
  CHECK(r.design.blocks.size() == 192);
  CHECK(verify_gdd(r.design).valid);

  // Clone provenance: point i is clone i%4 of master point i/4.
  REQUIRE(r.origin.size() == 36);
  for (int i = 0; i < 36; ++i) {
    CHECK(r.origin[i].first == i / 4);
    CHECK(r.origin[i].second == i % 4);
  }
}

TEST_CASE("weight one inflation is the identity") {
  GroupDesign td = transversal_design(3, 3);
  IngredientProvider prov = builtin_provider();
  WfcResult r = wfc(td, WeightAssignment::uniform(9, 1), prov, {3});
  CHECK(serialize(r.design) == serialize(td));
  for (int i = 0; i < 9; ++i) {
    CHECK(r.origin[i].first == i);
    CHECK(r.origin[i].second == 0);
  }
}

TEST_CASE("zero weights erase points from the inflation") {
  GroupDesign master = pbd_as_gdd(affine_space(3, 2));
  WeightAssignment w = WeightAssignment::uniform(9, 4);
  w.weights[0] = 0;
  IngredientProvider prov = builtin_provider();
  WfcResult r = wfc(master, w, prov, {2, 3});

  CHECK(r.design.v == 32);
  CHECK(type_string(group_type(r.design)) == "4^8");
  // Four lines through the erased point keep two positive points, eight keep
  // all three.
  auto hist = size_histogram(r.design.blocks);
  CHECK(hist[2] == 4 * 16);
  CHECK(hist[3] == 8 * 16);
  CHECK(verify_gdd(r.design).valid);
  for (const auto& o : r.origin) CHECK(o.first != 0);
}

TEST_CASE("zero-one inflation matches truncation") {
  GroupDesign td = transversal_design(3, 3);
  WeightAssignment w = WeightAssignment::uniform(9, 1);
  w.weights[5] = 0;
  IngredientProvider prov = builtin_provider();
  WfcResult r = wfc(td, w, prov, {2, 3});
  TruncateResult t = truncate(td, 1, 2);
  CHECK(serialize(r.design) == serialize(t.design));
}

TEST_CASE("inflation rejects bad weightings") {
  GroupDesign td = transversal_design(3, 3);
  IngredientProvider prov = builtin_provider();
  CHECK_THROWS_AS(wfc(td, WeightAssignment{{1, 2}}, prov, {3}), Error);
  CHECK_THROWS_AS(wfc(td, WeightAssignment::uniform(9, 0), prov, {3}), Error);
  WeightAssignment neg = WeightAssignment::uniform(9, 1);
  neg.weights[3] = -2;
  CHECK_THROWS_AS(wfc(td, neg, prov, {3}), Error);
}

TEST_CASE("inflation reports the exact missing ingredient") {
  GroupDesign master = pbd_as_gdd(affine_space(3, 2));
  IngredientProvider prov = builtin_provider();
  try {
    wfc(master, WeightAssignment::uniform(9, 2), prov, {4});
    FAIL("expected a throw");
  } catch (const MissingIngredientError& e) {
    CHECK(e.request() == "GDD({4}, 2^3)");
  }
}

TEST_CASE("truncating a transversal design") {
  GroupDesign td = transversal_design(3, 4);
  TruncateResult r = truncate(td, 2, 2);
  CHECK_FALSE(r.identity);
  CHECK(type_string(group_type(r.design)) == "2^1 4^2");
  auto hist = size_histogram(r.design.blocks);
  CHECK(hist[2] == 8);
  CHECK(hist[3] == 8);
  CHECK(verify_gdd(r.design).valid);

  // Keeping a single point still leaves a valid design.
  TruncateResult one = truncate(transversal_design(3, 3), 0, 1);
  CHECK(type_string(group_type(one.design)) == "1^1 3^2");
  auto hist1 = size_histogram(one.design.blocks);
  CHECK(hist1[2] == 6);
  CHECK(hist1[3] == 3);
  CHECK(verify_gdd(one.design).valid);
}

TEST_CASE("truncation relabels with the kept id map") {
  GroupDesign td = transversal_design(3, 4);
  TruncateResult r = truncate(td, 0, 2);
  // Group 0 is {0,1,2,3}; the two smallest ids survive.
  std::vector<int> expected{0, 1, 4, 5, 6, 7, 8, 9, 10, 11};
  CHECK(r.kept_old_ids == expected);
  CHECK(r.design.v == 10);
}

TEST_CASE("truncation to the full group is flagged as the identity") {
  GroupDesign td = transversal_design(3, 4);
  TruncateResult r = truncate(td, 1, 4);
  CHECK(r.identity);
  GroupDesign canon = td;
  canonicalize(canon);
  CHECK(serialize(r.design) == serialize(canon));
}

TEST_CASE("truncation rejects bad arguments") {
  GroupDesign td = transversal_design(3, 4);
  CHECK_THROWS_AS(truncate(td, 3, 2), BadGroupError);
  CHECK_THROWS_AS(truncate(td, -1, 2), BadGroupError);
  CHECK_THROWS_AS(truncate(td, 0, 0), BadKeepError);
  CHECK_THROWS_AS(truncate(td, 0, 5), BadKeepError);
}

TEST_CASE("deleting a point of the ternary plane") {
  DeletePointResult r = delete_point(affine_space(3, 2), 0);
  CHECK(r.removed == 0);
  CHECK(r.design.v == 8);
  CHECK(type_string(group_type(r.design)) == "2^4");
  CHECK(r.design.blocks.size() == 8);
  CHECK(verify_gdd(r.design).valid);

  DeletePointResult f = delete_point(projective_plane(2), 6);
  CHECK(f.design.v == 6);
  CHECK(type_string(group_type(f.design)) == "2^3");
  CHECK(f.design.blocks.size() == 4);
  for (const auto& b : f.design.blocks) CHECK(b.size() == 3);
}

TEST_CASE("deleting the last point then refilling is the identity") {
  PBDesign sts = steiner_triple_system(13);
  DeletePointResult r = delete_point(sts, 12);
  for (int i = 0; i < 12; ++i) CHECK(r.old_of_new[i] == i);
  PBDesign back = add_point_fill_single(r.design);
  CHECK(serialize(back) == serialize(sts));
}

TEST_CASE("deleting any point then refilling matches up to relabeling") {
  PBDesign ag9 = affine_space(3, 2);
  DeletePointResult r = delete_point(ag9, 4);
  PBDesign back = add_point_fill_single(r.design);
  REQUIRE(back.v == 9);

  // New id i < 8 is old point old_of_new[i]; the adjoined point is old 4.
  PBDesign relabeled;
  relabeled.v = 9;
  for (const auto& b : back.blocks) {
    Block nb;
    for (int p : b) nb.push_back(p == 8 ? 4 : r.old_of_new[p]);
    relabeled.blocks.push_back(std::move(nb));
  }
  relabeled.declared_sizes = ag9.declared_sizes;
  canonicalize(relabeled);
  CHECK(serialize(relabeled) == serialize(ag9));
}

TEST_CASE("point deletion rejects unknown points") {
  CHECK_THROWS_AS(delete_point(affine_space(3, 2), 9), UnknownPointError);
  CHECK_THROWS_AS(delete_point(affine_space(3, 2), -1), UnknownPointError);
}

TEST_CASE("adding a point with single-block fills") {
  PBDesign p10 = add_point_fill_single(transversal_design(3, 3));
  CHECK(p10.v == 10);
  CHECK(p10.blocks.size() == 12);
  CHECK(observed_sizes(p10) == std::vector<int>{3, 4});
  CHECK(verify_pbd(p10).valid);

  DesignRegistry reg;
  IngredientProvider prov(&reg);
  GroupDesign master = pbd_as_gdd(affine_space(3, 2));
  GroupDesign inflated =
      wfc(master, WeightAssignment::uniform(9, 4), prov, {3}).design;
  PBDesign p37 = add_point_fill_single(inflated);
  CHECK(p37.v == 37);
  CHECK(p37.blocks.size() == 201);
  CHECK(observed_sizes(p37) == std::vector<int>{3, 5});
  CHECK(verify_pbd(p37).valid);
}

TEST_CASE("adding a point with ingredient fills") {
  GroupDesign punctured = delete_point(steiner_triple_system(9), 8).design;
  IngredientProvider prov = builtin_provider();
  PBDesign out = add_point_fill_pbd(punctured, prov, {3});
  CHECK(out.v == 9);
  CHECK(out.blocks.size() == 12);
  CHECK(observed_sizes(out) == std::vector<int>{3});
  CHECK(verify_pbd(out).valid);
}

TEST_CASE("fills can differ per group") {
  GroupDesign td = transversal_design(3, 4);
  IngredientProvider prov = builtin_provider();
  std::vector<GroupFill> fills(3, GroupFill{GroupFill::Mode::single_block, {}});
  fills[2] = GroupFill{GroupFill::Mode::pbd, {5}};
  PBDesign out = add_point_fill(td, prov, fills);
  CHECK(out.v == 13);
  CHECK(out.blocks.size() == 19);
  CHECK(observed_sizes(out) == std::vector<int>{3, 5});
  CHECK(verify_pbd(out).valid);

  CHECK_THROWS_AS(
      add_point_fill(td, prov, std::vector<GroupFill>(2)), Error);
}

TEST_CASE("point addition reports the exact missing fill") {
  GroupDesign td = transversal_design(3, 3);
  IngredientProvider prov = builtin_provider();
  try {
    add_point_fill_pbd(td, prov, {3});
    FAIL("expected a throw");
  } catch (const MissingIngredientError& e) {
    CHECK(e.request() == "PBD(4, {3})");
  }
}
