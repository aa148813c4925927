#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "design.hpp"
#include "registry.hpp"

namespace pbdim {

/// Nonnegative weight per master point; at least one weight positive.
struct WeightAssignment {
  std::vector<long long> weights;

  static WeightAssignment uniform(int v, long long w) {
    return {std::vector<long long>((std::size_t)std::max(v, 0), w)};
  }
};

/// Inflation result with clone provenance: output point i came from
/// origin[i] = (master point, clone index).
struct WfcResult {
  GroupDesign design;
  std::vector<std::pair<int, int>> origin;
};

/// Weighting construction: every master point x becomes ω(x) clones, groups
/// inherit their points' clones (empty groups dropped), and every master
/// block is replaced by an ingredient GDD with block sizes in
/// `ingredient_sizes` whose groups are the clone sets of the block's
/// points.  Master blocks with fewer than two positive-weight points
/// disappear (they cover no cross pairs).
inline WfcResult wfc(const GroupDesign& master, const WeightAssignment& w,
                     const IngredientProvider& provider,
                     const std::vector<int>& ingredient_sizes) {
  if ((int)w.weights.size() != master.v)
    throw Error("weight map must cover every master point");
  long long total = 0;
  bool positive = false;
  for (long long wt : w.weights) {
    if (wt < 0) throw Error("weights must be nonnegative");
    positive = positive || wt > 0;
    total += wt;
    if (total > INT32_MAX - 1) throw TooLargeError("inflated design too big");
  }
  if (!positive) throw Error("at least one weight must be positive");

  std::vector<long long> offset(master.v + 1, 0);
  for (int x = 0; x < master.v; ++x) offset[x + 1] = offset[x] + w.weights[x];

  WfcResult out;
  out.design.v = (int)total;
  out.origin.resize(total);
  for (int x = 0; x < master.v; ++x)
    for (long long j = 0; j < w.weights[x]; ++j)
      out.origin[offset[x] + j] = {x, (int)j};

  for (const auto& grp : master.groups) {
    Block g;
    for (int x : grp)
      for (long long j = 0; j < w.weights[x]; ++j)
        g.push_back((int)(offset[x] + j));
    if (!g.empty()) out.design.groups.push_back(std::move(g));
  }

  std::vector<int> pos;                    // positive-weight block points
  std::vector<int> pt_map;                 // ingredient point -> output point
  for (const auto& blk : master.blocks) {
    pos.clear();
    for (int x : blk)
      if (w.weights[x] > 0) pos.push_back(x);
    if (pos.size() < 2) continue;

    std::vector<std::pair<int, int>> type;  // (size, count) ascending
    {
      std::vector<int> sizes;
      for (int x : pos) sizes.push_back((int)w.weights[x]);
      std::sort(sizes.begin(), sizes.end());
      for (int s : sizes) {
        if (!type.empty() && type.back().first == s)
          ++type.back().second;
        else
          type.emplace_back(s, 1);
      }
    }
    auto ing = provider.gdd(GddRequest{ingredient_sizes, type});

    // Size-sorted bijection: i-th smallest ingredient group onto the i-th
    // lightest block point (ties broken by point order on both sides).
    std::sort(pos.begin(), pos.end(), [&](int a, int b) {
      return std::make_pair(w.weights[a], a) < std::make_pair(w.weights[b], b);
    });
    std::vector<std::size_t> giv(ing->groups.size());
    std::iota(giv.begin(), giv.end(), 0);
    std::sort(giv.begin(), giv.end(), [&](std::size_t a, std::size_t b) {
      return std::make_pair(ing->groups[a].size(), ing->groups[a]) <
             std::make_pair(ing->groups[b].size(), ing->groups[b]);
    });
    if (giv.size() != pos.size())
      throw Error("ingredient group count mismatch for " +
                  to_string(GddRequest{ingredient_sizes, type}));
    pt_map.assign(ing->v, -1);
    for (std::size_t i = 0; i < pos.size(); ++i) {
      const Block& g = ing->groups[giv[i]];
      if ((long long)g.size() != w.weights[pos[i]])
        throw Error("ingredient group size mismatch for " +
                    to_string(GddRequest{ingredient_sizes, type}));
      for (std::size_t j = 0; j < g.size(); ++j)
        pt_map[g[j]] = (int)(offset[pos[i]] + j);
    }
    for (const auto& ib : ing->blocks) {
      Block b;
      b.reserve(ib.size());
      for (int p : ib) b.push_back(pt_map[p]);
      std::sort(b.begin(), b.end());
      out.design.blocks.push_back(std::move(b));
    }
  }
  canonicalize(out.design);
  return out;
}

namespace detail {

inline std::vector<Block> replace_blocks(const std::vector<Block>& blocks,
                                         const IngredientProvider& provider,
                                         const std::vector<int>& target) {
  std::vector<Block> out;
  for (const auto& blk : blocks) {
    int k = (int)blk.size();
    if (std::binary_search(target.begin(), target.end(), k)) {
      out.push_back(blk);
      continue;
    }
    auto ing = provider.pbd(PbdRequest{k, target});
    for (const auto& ib : ing->blocks) {
      Block b;
      b.reserve(ib.size());
      for (int p : ib) b.push_back(blk[p]);
      std::sort(b.begin(), b.end());
      out.push_back(std::move(b));
    }
  }
  return out;
}

}  // namespace detail

/// Replaces every block whose size is outside `target_sizes` by the blocks
/// of an ingredient PBD on its points.  Dimension never decreases.
inline PBDesign break_blocks(const PBDesign& d,
                             const IngredientProvider& provider,
                             std::vector<int> target_sizes) {
  target_sizes = normalized_sizes(std::move(target_sizes));
  PBDesign out;
  out.v = d.v;
  out.blocks = detail::replace_blocks(d.blocks, provider, target_sizes);
  out.declared_sizes = target_sizes;
  canonicalize(out);
  return out;
}

/// Group-design variant: groups untouched, blocks replaced the same way.
inline GroupDesign break_blocks(const GroupDesign& g,
                                const IngredientProvider& provider,
                                std::vector<int> target_sizes) {
  target_sizes = normalized_sizes(std::move(target_sizes));
  GroupDesign out;
  out.v = g.v;
  out.groups = g.groups;
  out.blocks = detail::replace_blocks(g.blocks, provider, target_sizes);
  canonicalize(out);
  return out;
}

/// Truncation result; kept_old_ids[i] is the input id of output point i.
struct TruncateResult {
  GroupDesign design;
  std::vector<int> kept_old_ids;
  bool identity = false;
};

/// Removes all but `keep` points (the smallest ids) of one group, deleting
/// them from every block; blocks reduced below 2 points are dropped.
/// keep = group size is the identity.  Strong dimension never decreases.
inline TruncateResult truncate(const GroupDesign& g, int group_index,
                               long long keep) {
  if (group_index < 0 || group_index >= (int)g.groups.size())
    throw BadGroupError(group_index);
  const Block& grp = g.groups[group_index];
  if (keep < 1 || keep > (long long)grp.size())
    throw BadKeepError(keep, grp.size());

  TruncateResult out;
  if (keep == (long long)grp.size()) {
    out.design = g;
    canonicalize(out.design);
    out.kept_old_ids.resize(g.v);
    std::iota(out.kept_old_ids.begin(), out.kept_old_ids.end(), 0);
    out.identity = true;
    return out;
  }

  std::vector<char> deleted(g.v, 0);
  for (std::size_t i = keep; i < grp.size(); ++i) deleted[grp[i]] = 1;
  std::vector<int> new_id(g.v, -1);
  for (int x = 0; x < g.v; ++x)
    if (!deleted[x]) {
      new_id[x] = (int)out.kept_old_ids.size();
      out.kept_old_ids.push_back(x);
    }

  out.design.v = (int)out.kept_old_ids.size();
  for (const auto& gr : g.groups) {
    Block b;
    for (int x : gr)
      if (!deleted[x]) b.push_back(new_id[x]);
    if (!b.empty()) out.design.groups.push_back(std::move(b));
  }
  for (const auto& blk : g.blocks) {
    Block b;
    for (int x : blk)
      if (!deleted[x]) b.push_back(new_id[x]);
    if (b.size() >= 2) out.design.blocks.push_back(std::move(b));
  }
  canonicalize(out.design);
  return out;
}

/// Point-deletion result; old_of_new[i] is the input id of output point i.
struct DeletePointResult {
  GroupDesign design;
  std::vector<int> old_of_new;
  int removed = -1;
};

/// Deletes one point of a PBD: the punctured blocks through it become the
/// groups, the remaining blocks stay, points relabel to 0..v-2.
inline DeletePointResult delete_point(const PBDesign& d, int x) {
  if (x < 0 || x >= d.v) throw UnknownPointError(x);
  DeletePointResult out;
  out.removed = x;
  out.design.v = d.v - 1;
  std::vector<int> new_id(d.v, -1);
  for (int p = 0; p < d.v; ++p)
    if (p != x) {
      new_id[p] = (int)out.old_of_new.size();
      out.old_of_new.push_back(p);
    }
  for (const auto& blk : d.blocks) {
    Block b;
    bool through = false;
    for (int p : blk) {
      if (p == x)
        through = true;
      else
        b.push_back(new_id[p]);
    }
    if (through) {
      if (!b.empty()) out.design.groups.push_back(std::move(b));
    } else {
      out.design.blocks.push_back(std::move(b));
    }
  }
  canonicalize(out.design);
  return out;
}

/// Per-group filling choice for add_point_fill.
struct GroupFill {
  enum class Mode { single_block, pbd };
  Mode mode = Mode::single_block;
  std::vector<int> sizes;  // block sizes of the filling PBD (pbd mode)
};

/// Adjoins a new point (id v) and fills each extended group X_i + {v}:
/// either as one block, or with the blocks of an ingredient
/// PBD(|X_i| + 1, sizes).  fills are indexed like g.groups.
inline PBDesign add_point_fill(const GroupDesign& g,
                               const IngredientProvider& provider,
                               const std::vector<GroupFill>& fills) {
  if (fills.size() != g.groups.size())
    throw Error("one fill choice per group required");
  PBDesign out;
  out.v = g.v + 1;
  int infinity = g.v;
  out.blocks = g.blocks;
  for (std::size_t gi = 0; gi < g.groups.size(); ++gi) {
    const Block& grp = g.groups[gi];
    if (fills[gi].mode == GroupFill::Mode::single_block) {
      Block b = grp;
      b.push_back(infinity);
      out.blocks.push_back(std::move(b));
      continue;
    }
    auto ing = provider.pbd(
        PbdRequest{(long long)grp.size() + 1, fills[gi].sizes});
    // ingredient point i < |grp| is grp[i]; the last point is infinity
    for (const auto& ib : ing->blocks) {
      Block b;
      b.reserve(ib.size());
      for (int p : ib)
        b.push_back(p < (int)grp.size() ? grp[p] : infinity);
      std::sort(b.begin(), b.end());
      out.blocks.push_back(std::move(b));
    }
  }
  out.declared_sizes = observed_sizes(out);
  canonicalize(out);
  return out;
}

inline PBDesign add_point_fill_single(const GroupDesign& g) {
  static const IngredientProvider kNone;
  return add_point_fill(
      g, kNone,
      std::vector<GroupFill>(g.groups.size(),
                             GroupFill{GroupFill::Mode::single_block, {}}));
}

inline PBDesign add_point_fill_pbd(const GroupDesign& g,
                                   const IngredientProvider& provider,
                                   const std::vector<int>& sizes) {
  return add_point_fill(
      g, provider,
      std::vector<GroupFill>(g.groups.size(),
                             GroupFill{GroupFill::Mode::pbd, sizes}));
}

}  // namespace pbdim
