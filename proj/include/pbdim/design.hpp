#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "errors.hpp"

namespace pbdim {

using Block = std::vector<int>;

/// Pairwise balanced design candidate: v points labeled 0..v-1 and a list of
/// blocks.  Validity (every pair in exactly one block, all sizes >= 2) is a
/// property checked by verify_pbd, not enforced by the type.
struct PBDesign {
  int v = 0;
  std::vector<Block> blocks;
  /// Block sizes the design claims to use; checked during verification when
  /// present.
  std::optional<std::vector<int>> declared_sizes;
};

/// Group divisible design candidate: a partition of the points into groups
/// plus blocks meeting every group at most once and covering exactly the
/// cross-group pairs.
struct GroupDesign {
  int v = 0;
  std::vector<Block> groups;
  std::vector<Block> blocks;
};

inline void sort_blocks(std::vector<Block>& blocks) {
  for (auto& b : blocks) std::sort(b.begin(), b.end());
  std::sort(blocks.begin(), blocks.end());
}

/// Canonical form: every block sorted ascending, block list sorted
/// lexicographically.  All construction outputs are canonical, which makes
/// equal designs byte-identical when serialized.
inline void canonicalize(PBDesign& d) {
  sort_blocks(d.blocks);
  if (d.declared_sizes) {
    auto& s = *d.declared_sizes;
    std::sort(s.begin(), s.end());
    s.erase(std::unique(s.begin(), s.end()), s.end());
  }
}

inline void canonicalize(GroupDesign& g) {
  sort_blocks(g.groups);
  sort_blocks(g.blocks);
}

/// Group type as (size, multiplicity) pairs, ascending by size.
inline std::vector<std::pair<int, int>> group_type(const GroupDesign& g) {
  std::vector<int> sizes;
  sizes.reserve(g.groups.size());
  for (const auto& grp : g.groups) sizes.push_back((int)grp.size());
  std::sort(sizes.begin(), sizes.end());
  std::vector<std::pair<int, int>> type;
  for (int s : sizes) {
    if (!type.empty() && type.back().first == s)
      ++type.back().second;
    else
      type.emplace_back(s, 1);
  }
  return type;
}

/// Exponential notation for a group type, e.g. "3^4 5^1".
inline std::string type_string(const std::vector<std::pair<int, int>>& type) {
  std::string s;
  for (const auto& [g, u] : type) {
    if (!s.empty()) s += ' ';
    s += std::to_string(g) + "^" + std::to_string(u);
  }
  return s;
}

inline std::string type_string(const GroupDesign& g) {
  return type_string(group_type(g));
}

/// Distinct block sizes actually present, ascending.
template <typename D>
std::vector<int> observed_sizes(const D& d) {
  std::vector<int> sizes;
  for (const auto& b : d.blocks) sizes.push_back((int)b.size());
  std::sort(sizes.begin(), sizes.end());
  sizes.erase(std::unique(sizes.begin(), sizes.end()), sizes.end());
  return sizes;
}

struct DesignParams {
  long long alpha;  // gcd of k-1 over K
  long long beta;   // gcd of k(k-1) over K
  long long gamma;  // beta / alpha
};

/// Divisibility parameters of a block size set.  Every K contains only
/// integers >= 2; alpha always divides beta.
inline DesignParams design_params(const std::vector<int>& sizes) {
  if (sizes.empty()) throw EmptyKError();
  long long a = 0, b = 0;
  for (long long k : sizes) {
    if (k < 2) throw Error("block sizes must be at least 2");
    a = std::gcd(a, k - 1);
    b = std::gcd(b, k * (k - 1));
  }
  return {a, b, b / a};
}

/// Necessary arithmetic conditions for a PBD(v, K) to exist:
/// v - 1 divisible by alpha and v(v-1) divisible by beta.  v = 0 is
/// rejected; v = 1 (empty design) is admissible by convention.
inline bool admissible(long long v, const std::vector<int>& sizes) {
  DesignParams p = design_params(sizes);
  if (v < 1) return false;
  return (v - 1) % p.alpha == 0 && (v * (v - 1)) % p.beta == 0;
}

enum class ViolationKind {
  uncovered_pair,
  doubly_covered_pair,
  undersized_block,
  group_block_clash,
  in_group_pair_covered,
  size_not_declared,
};

inline const char* to_string(ViolationKind k) {
  switch (k) {
    case ViolationKind::uncovered_pair: return "uncovered_pair";
    case ViolationKind::doubly_covered_pair: return "doubly_covered_pair";
    case ViolationKind::undersized_block: return "undersized_block";
    case ViolationKind::group_block_clash: return "group_block_clash";
    case ViolationKind::in_group_pair_covered: return "in_group_pair_covered";
    case ViolationKind::size_not_declared: return "size_not_declared";
  }
  return "?";
}

/// One concrete witness of a violated invariant.  The meaning of (a, b)
/// depends on the kind: a point pair for the pair kinds, (block index, size)
/// for undersized_block and size_not_declared, (block index, group index)
/// for group_block_clash.
struct Violation {
  ViolationKind kind;
  long long a = 0;
  long long b = 0;
};

constexpr std::size_t kWitnessCap = 100;  // per violation kind
constexpr int kDenseCounterMaxV = 20000;  // triangular byte table threshold

struct VerificationReport {
  bool valid = true;
  std::vector<Violation> witnesses;  // capped at kWitnessCap per kind
  std::array<std::uint64_t, 6> totals{};  // indexed by ViolationKind
  std::uint64_t pairs_checked = 0;
  std::uint64_t blocks_checked = 0;

  void record(ViolationKind kind, long long a, long long b) {
    valid = false;
    auto idx = (std::size_t)kind;
    if (totals[idx] < kWitnessCap) witnesses.push_back({kind, a, b});
    ++totals[idx];
  }
};

namespace detail {

inline void check_point_range(int v, const std::vector<Block>& blocks,
                              const char* what) {
  for (const auto& b : blocks) {
    for (std::size_t i = 0; i < b.size(); ++i) {
      if (b[i] < 0 || b[i] >= v) throw UnknownPointError(b[i]);
      if (i > 0 && b[i] == b[i - 1])
        throw Error(std::string("repeated point in ") + what + ": " +
                    std::to_string(b[i]));
      if (i > 0 && b[i] < b[i - 1])
        throw Error(std::string(what) + " not sorted ascending");
    }
  }
}

// Pair coverage counters.  Dense mode: one byte per unordered pair,
// saturating at 255.  Streaming mode: all covered pairs as packed integers,
// sorted once at the end.
class PairCounter {
 public:
  PairCounter(int v, std::uint64_t total_block_points) : v_(v) {
    if (v <= kDenseCounterMaxV) {
      dense_ = true;
      counts_.assign((std::uint64_t)v * (v - 1) / 2, 0);
    } else {
      pairs_.reserve(total_block_points);  // loose lower bound
    }
  }

  void add(int a, int b) {  // requires a < b
    if (dense_) {
      auto& c = counts_[tri_index(a, b)];
      if (c < 255) ++c;
    } else {
      pairs_.push_back((std::uint64_t)a * v_ + b);
    }
  }

  /// Invokes fn(a, b, count) ascending for every pair whose count is not 1,
  /// and for count-1 pairs as well when include_ones is set.
  template <typename Fn>
  void scan(bool include_ones, Fn&& fn) {
    if (dense_) {
      std::uint64_t idx = 0;
      for (int a = 0; a < v_ - 1; ++a)
        for (int b = a + 1; b < v_; ++b, ++idx)
          if (counts_[idx] != 1 || include_ones)
            fn(a, b, (std::uint64_t)counts_[idx]);
      return;
    }
    if (v_ < 2) return;
    std::sort(pairs_.begin(), pairs_.end());
    // Uncovered pairs are the gaps in the sorted code sequence; codes with
    // b <= a are not pairs and are skipped.
    auto walk_gap = [&](std::uint64_t from, std::uint64_t to) {
      while (from < to) {
        int a = (int)(from / v_), b = (int)(from % v_);
        if (b <= a) {
          from = pack(a, a + 1);
          continue;
        }
        fn(a, b, 0);
        ++from;
      }
    };
    std::uint64_t cursor = pack(0, 1);
    for (std::size_t i = 0; i < pairs_.size();) {
      std::size_t j = i;
      while (j < pairs_.size() && pairs_[j] == pairs_[i]) ++j;
      walk_gap(cursor, pairs_[i]);
      if (j - i != 1 || include_ones)
        fn((int)(pairs_[i] / v_), (int)(pairs_[i] % v_),
           (std::uint64_t)(j - i));
      cursor = pairs_[i] + 1;
      i = j;
    }
    walk_gap(cursor, pack(v_ - 2, v_ - 1) + 1);
  }

 private:
  std::uint64_t pack(int a, int b) const { return (std::uint64_t)a * v_ + b; }

  std::uint64_t tri_index(int a, int b) const {
    // index of (a, b), a < b, in row-major upper triangle
    return (std::uint64_t)a * v_ - (std::uint64_t)a * (a + 1) / 2 + (b - a - 1);
  }

  int v_;
  bool dense_ = false;
  std::vector<std::uint8_t> counts_;
  std::vector<std::uint64_t> pairs_;
};

}  // namespace detail

/// Checks the defining properties of a pairwise balanced design: every
/// unordered pair of points lies in exactly one block, every block has at
/// least 2 points, and block sizes match declared_sizes when present.
/// Structural breaches (points out of range, repeats) throw; combinatorial
/// violations are reported with witnesses and exact totals.
inline VerificationReport verify_pbd(const PBDesign& d) {
  if (d.v < 0) throw Error("negative point count");
  detail::check_point_range(d.v, d.blocks, "block");
  VerificationReport rep;
  std::uint64_t total_pts = 0;
  for (const auto& b : d.blocks) total_pts += b.size() * (b.size() - 1) / 2;
  detail::PairCounter counter(d.v, total_pts);
  for (std::size_t bi = 0; bi < d.blocks.size(); ++bi) {
    const Block& b = d.blocks[bi];
    if (b.size() < 2) rep.record(ViolationKind::undersized_block, bi, b.size());
    if (d.declared_sizes &&
        !std::binary_search(d.declared_sizes->begin(), d.declared_sizes->end(),
                            (int)b.size()))
      rep.record(ViolationKind::size_not_declared, bi, b.size());
    for (std::size_t i = 0; i < b.size(); ++i)
      for (std::size_t j = i + 1; j < b.size(); ++j) counter.add(b[i], b[j]);
    ++rep.blocks_checked;
  }
  counter.scan(false, [&](int a, int b, std::uint64_t count) {
    rep.record(count == 0 ? ViolationKind::uncovered_pair
                          : ViolationKind::doubly_covered_pair,
               a, b);
  });
  rep.pairs_checked = (std::uint64_t)d.v * (d.v - 1) / 2;
  return rep;
}

/// Checks the defining properties of a group divisible design: the groups
/// partition the points (structural; throws on breach), every block meets
/// every group in at most one point, and the pairs covered by blocks are
/// exactly the cross-group pairs, each once.
inline VerificationReport verify_gdd(const GroupDesign& g) {
  if (g.v < 0) throw Error("negative point count");
  detail::check_point_range(g.v, g.groups, "group");
  detail::check_point_range(g.v, g.blocks, "block");
  std::vector<int> group_of(g.v, -1);
  for (std::size_t gi = 0; gi < g.groups.size(); ++gi) {
    if (g.groups[gi].empty()) throw Error("empty group");
    for (int x : g.groups[gi]) {
      if (group_of[x] != -1)
        throw Error("point " + std::to_string(x) + " in two groups");
      group_of[x] = (int)gi;
    }
  }
  for (int x = 0; x < g.v; ++x)
    if (group_of[x] == -1)
      throw Error("point " + std::to_string(x) + " in no group");

  VerificationReport rep;
  std::uint64_t total_pts = 0;
  for (const auto& b : g.blocks) total_pts += b.size() * (b.size() - 1) / 2;
  detail::PairCounter counter(g.v, total_pts);
  std::vector<int> hit_groups;
  for (std::size_t bi = 0; bi < g.blocks.size(); ++bi) {
    const Block& b = g.blocks[bi];
    if (b.size() < 2) rep.record(ViolationKind::undersized_block, bi, b.size());
    hit_groups.clear();
    for (int x : b) hit_groups.push_back(group_of[x]);
    std::sort(hit_groups.begin(), hit_groups.end());
    for (std::size_t i = 0; i < hit_groups.size(); ++i)
      if (i + 1 < hit_groups.size() && hit_groups[i] == hit_groups[i + 1]) {
        rep.record(ViolationKind::group_block_clash, bi, hit_groups[i]);
        while (i + 1 < hit_groups.size() && hit_groups[i] == hit_groups[i + 1])
          ++i;
      }
    for (std::size_t i = 0; i < b.size(); ++i)
      for (std::size_t j = i + 1; j < b.size(); ++j) counter.add(b[i], b[j]);
    ++rep.blocks_checked;
  }
  counter.scan(true, [&](int a, int b, std::uint64_t count) {
    bool same_group = group_of[a] == group_of[b];
    if (count == 0) {
      if (!same_group) rep.record(ViolationKind::uncovered_pair, a, b);
    } else if (same_group) {
      rep.record(ViolationKind::in_group_pair_covered, a, b);
    } else if (count >= 2) {
      rep.record(ViolationKind::doubly_covered_pair, a, b);
    }
  });
  rep.pairs_checked = (std::uint64_t)g.v * (g.v - 1) / 2;
  return rep;
}

struct OverlapSplit {
  long long n;
  long long x;
};

/// Given y >= 1, step A >= 1 and floor c >= 1, finds n and x with
/// y = n*A + x and c <= x <= n, by division with remainder shifted into
/// [c, A+c).  Such a representation is guaranteed once y >= A(A+c+1)+c;
/// below that it may still exist, and is returned whenever the division
/// form lands in range.  Throws BelowThresholdError otherwise.
inline OverlapSplit solve_overlap(long long y, long long a, long long c) {
  if (a < 1 || c < 1) throw Error("overlap parameters must be positive");
  if (y < c) throw BelowThresholdError(y, a, c);
  long long n = (y - c) / a;
  long long x = (y - c) % a + c;
  if (x > n) throw BelowThresholdError(y, a, c);
  return {n, x};
}

/// A PBD viewed as a group divisible design with singleton groups.
inline GroupDesign pbd_as_gdd(const PBDesign& d) {
  GroupDesign g;
  g.v = d.v;
  g.groups.reserve(d.v);
  for (int x = 0; x < d.v; ++x) g.groups.push_back({x});
  g.blocks = d.blocks;
  canonicalize(g);
  return g;
}

}  // namespace pbdim
