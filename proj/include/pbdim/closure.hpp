#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <variant>
#include <vector>

#include "design.hpp"

namespace pbdim {

constexpr std::uint64_t kDefaultDimensionBudget = 10'000'000;
constexpr std::uint64_t kDefaultSampleCount = 10'000;

/// C(v, d), or nothing when the value exceeds uint64.
inline std::optional<std::uint64_t> subset_count(long long v, long long d) {
  if (d < 0 || d > v) return 0;
  if (d > v - d) d = v - d;
  unsigned __int128 r = 1;
  for (long long i = 1; i <= d; ++i) {
    r = r * (unsigned __int128)(v - d + i) / (unsigned __int128)i;
    if (r > (unsigned __int128)UINT64_MAX) return std::nullopt;
  }
  return (std::uint64_t)r;
}

/// The complete design on v points (one block containing everything, or
/// fewer than 2 points).  These carry the conventional dimension v - 1
/// instead of the value the closure rule would give.
inline bool is_trivial_space(const PBDesign& d) {
  if (d.v <= 1) return true;
  return d.blocks.size() == 1 && (int)d.blocks[0].size() == d.v;
}

/// Subsets of {0..v-1} of fixed size in colexicographic order.
class ColexSubsets {
 public:
  ColexSubsets(int v, int d) : v_(v), d_(d), done_(d > v || d < 0) {
    cur_.resize(std::max(d, 0));
    for (int i = 0; i < d; ++i) cur_[i] = i;
  }

  bool done() const { return done_; }
  const std::vector<int>& current() const { return cur_; }

  void advance() {
    for (int i = 0; i < d_; ++i) {
      int limit = (i + 1 < d_) ? cur_[i + 1] : v_;
      if (cur_[i] + 1 < limit) {
        ++cur_[i];
        for (int j = 0; j < i; ++j) cur_[j] = j;
        return;
      }
    }
    done_ = true;
  }

 private:
  int v_, d_;
  bool done_;
  std::vector<int> cur_;
};

/// Uniform random d-subset of {0..v-1}, sorted.  Floyd's algorithm; the
/// modulo step keeps draws reproducible across platforms at the cost of a
/// negligible bias.
inline std::vector<int> sample_subset(std::mt19937_64& gen, int v, int d) {
  std::vector<int> s;
  s.reserve(d);
  for (int j = v - d; j < v; ++j) {
    int t = (int)(gen() % (std::uint64_t)(j + 1));
    bool present = false;
    for (int e : s) present = present || (e == t);
    s.push_back(present ? j : t);
  }
  std::sort(s.begin(), s.end());
  return s;
}

namespace detail {

// Point/block incidence in CSR form with epoch-stamped visit state, so a
// closure run needs no per-run reinitialization.
struct BlockIncidence {
  BlockIncidence(int v, const std::vector<Block>& blocks) : v_(v) {
    std::size_t nb = blocks.size();
    blk_off_.assign(nb + 1, 0);
    std::vector<std::uint32_t> inc_count(v, 0);
    std::size_t total = 0;
    for (std::size_t b = 0; b < nb; ++b) {
      blk_off_[b] = total;
      total += blocks[b].size();
      for (int x : blocks[b]) {
        if (x < 0 || x >= v) throw UnknownPointError(x);
        ++inc_count[x];
      }
    }
    blk_off_[nb] = total;
    blk_pts_.reserve(total);
    for (const auto& b : blocks)
      blk_pts_.insert(blk_pts_.end(), b.begin(), b.end());
    pt_off_.assign(v + 1, 0);
    for (int x = 0; x < v; ++x) pt_off_[x + 1] = pt_off_[x] + inc_count[x];
    pt_blks_.resize(total);
    std::vector<std::size_t> cursor(pt_off_.begin(), pt_off_.end() - 1);
    for (std::size_t b = 0; b < nb; ++b)
      for (std::size_t i = blk_off_[b]; i < blk_off_[b + 1]; ++i)
        pt_blks_[cursor[blk_pts_[i]]++] = (std::uint32_t)b;
    pt_epoch_.assign(v, 0);
    blk_epoch_.assign(nb, 0);
    blk_cnt_.assign(nb, 0);
  }

  static constexpr std::uint8_t kFired = 0xff;

  bool mark_point(int p, std::uint64_t epoch) {
    if (pt_epoch_[p] == epoch) return false;
    pt_epoch_[p] = epoch;
    return true;
  }

  // Bumps block b's counter for this epoch; true exactly when it reaches 2.
  bool bump_block(std::uint32_t b, std::uint64_t epoch) {
    if (blk_epoch_[b] != epoch) {
      blk_epoch_[b] = epoch;
      blk_cnt_[b] = 0;
    }
    if (blk_cnt_[b] == kFired) return false;
    if (++blk_cnt_[b] == 2) {
      blk_cnt_[b] = kFired;
      return true;
    }
    return false;
  }

  int v_;
  std::vector<std::size_t> blk_off_, pt_off_;
  std::vector<int> blk_pts_;
  std::vector<std::uint32_t> pt_blks_;
  std::vector<std::uint64_t> pt_epoch_, blk_epoch_;
  std::vector<std::uint8_t> blk_cnt_;
};

}  // namespace detail

/// Iterated closure under blocks: a block with two points in the running
/// set pulls in the whole block, until nothing changes.
class PbdClosure {
 public:
  explicit PbdClosure(const PBDesign& d) : inc_(d.v, d.blocks) {}

  int point_count() const { return inc_.v_; }

  /// Closure of the seed, sorted.
  std::vector<int> span(const std::vector<int>& seed) {
    run(seed, false);
    std::vector<int> out(queue_.begin(), queue_.end());
    std::sort(out.begin(), out.end());
    return out;
  }

  /// True when the closure is the whole point set; stops early.
  bool spans_all(const std::vector<int>& seed) {
    return run(seed, true) == inc_.v_;
  }

 private:
  int run(const std::vector<int>& seed, bool early_stop) {
    ++epoch_;
    queue_.clear();
    for (int p : seed) {
      if (p < 0 || p >= inc_.v_) throw UnknownPointError(p);
      if (inc_.mark_point(p, epoch_)) queue_.push_back(p);
    }
    for (std::size_t qi = 0; qi < queue_.size(); ++qi) {
      int p = queue_[qi];
      for (std::size_t ii = inc_.pt_off_[p]; ii < inc_.pt_off_[p + 1]; ++ii) {
        std::uint32_t b = inc_.pt_blks_[ii];
        if (!inc_.bump_block(b, epoch_)) continue;
        for (std::size_t j = inc_.blk_off_[b]; j < inc_.blk_off_[b + 1]; ++j) {
          int x = inc_.blk_pts_[j];
          if (inc_.mark_point(x, epoch_)) queue_.push_back(x);
        }
        if (early_stop && (int)queue_.size() == inc_.v_)
          return (int)queue_.size();
      }
    }
    return (int)queue_.size();
  }

  detail::BlockIncidence inc_;
  std::uint64_t epoch_ = 0;
  std::vector<int> queue_;
};

/// Strong closure for group divisible designs: any touched group joins
/// whole, and blocks fire at two points as usual.  The result is always a
/// union of groups; it is proper when at least one group stays out.
class GddClosure {
 public:
  explicit GddClosure(const GroupDesign& g)
      : inc_(g.v, g.blocks), groups_(g.groups) {
    group_of_.assign(g.v, -1);
    for (std::size_t gi = 0; gi < groups_.size(); ++gi)
      for (int x : groups_[gi]) {
        if (x < 0 || x >= g.v) throw UnknownPointError(x);
        if (group_of_[x] != -1) throw Error("point in two groups");
        group_of_[x] = (int)gi;
      }
    for (int x = 0; x < g.v; ++x)
      if (group_of_[x] == -1) throw Error("point in no group");
    grp_epoch_.assign(groups_.size(), 0);
  }

  std::size_t group_count() const { return groups_.size(); }

  std::vector<int> strong_span(const std::vector<int>& seed) {
    run(seed, false);
    std::vector<int> out(queue_.begin(), queue_.end());
    std::sort(out.begin(), out.end());
    return out;
  }

  /// True when the strong closure touches every group (improper span).
  bool strong_span_improper(const std::vector<int>& seed) {
    return run(seed, true) == groups_.size();
  }

 private:
  std::size_t run(const std::vector<int>& seed, bool early_stop) {
    ++epoch_;
    fired_groups_ = 0;
    queue_.clear();
    for (int p : seed) {
      if (p < 0 || p >= inc_.v_) throw UnknownPointError(p);
      if (inc_.mark_point(p, epoch_)) queue_.push_back(p);
    }
    for (std::size_t qi = 0; qi < queue_.size(); ++qi) {
      int p = queue_[qi];
      int gi = group_of_[p];
      if (grp_epoch_[gi] != epoch_) {
        grp_epoch_[gi] = epoch_;
        ++fired_groups_;
        for (int x : groups_[gi])
          if (inc_.mark_point(x, epoch_)) queue_.push_back(x);
        if (early_stop && fired_groups_ == groups_.size())
          return fired_groups_;
      }
      for (std::size_t ii = inc_.pt_off_[p]; ii < inc_.pt_off_[p + 1]; ++ii) {
        std::uint32_t b = inc_.pt_blks_[ii];
        if (!inc_.bump_block(b, epoch_)) continue;
        for (std::size_t j = inc_.blk_off_[b]; j < inc_.blk_off_[b + 1]; ++j) {
          int x = inc_.blk_pts_[j];
          if (inc_.mark_point(x, epoch_)) queue_.push_back(x);
        }
      }
    }
    return fired_groups_;
  }

  detail::BlockIncidence inc_;
  std::vector<Block> groups_;
  std::vector<int> group_of_;
  std::vector<std::uint64_t> grp_epoch_;
  std::uint64_t epoch_ = 0;
  std::size_t fired_groups_ = 0;
  std::vector<int> queue_;
};

/// One-shot closure of a point set.
inline std::vector<int> span(const PBDesign& d, const std::vector<int>& seed) {
  return PbdClosure(d).span(seed);
}

inline std::vector<int> strong_span(const GroupDesign& g,
                                    const std::vector<int>& seed) {
  return GddClosure(g).strong_span(seed);
}

struct DimensionCertificate {
  enum class Kind {
    exact,         // dimension determined; witness is an improper (d+1)-set
    at_least,      // every d-subset proved proper
    refuted,       // witness is a d-subset whose span is improper
    inconclusive,  // budget or sampling exhausted without a decision
  };
  Kind kind = Kind::inconclusive;
  int d = 0;
  std::vector<int> witness;
  std::uint64_t subsets_checked = 0;
  std::optional<std::uint64_t> seed;
  bool trivial = false;  // complete-design convention applied
  std::string note;
};

inline const char* to_string(DimensionCertificate::Kind k) {
  switch (k) {
    case DimensionCertificate::Kind::exact: return "exact";
    case DimensionCertificate::Kind::at_least: return "at_least";
    case DimensionCertificate::Kind::refuted: return "refuted";
    case DimensionCertificate::Kind::inconclusive: return "inconclusive";
  }
  return "?";
}

struct ExhaustiveMode {
  std::uint64_t budget = kDefaultDimensionBudget;
};
struct SampleMode {
  std::uint64_t count = kDefaultSampleCount;
  std::uint64_t seed = 0;
};
using SearchMode = std::variant<ExhaustiveMode, SampleMode>;

namespace detail {

inline DimensionCertificate trivial_cert(int v) {
  DimensionCertificate c;
  c.kind = DimensionCertificate::Kind::exact;
  c.d = v >= 1 ? v - 1 : 0;
  c.trivial = true;
  c.witness.resize(std::max(v, 0));
  for (int i = 0; i < v; ++i) c.witness[i] = i;
  c.note = "complete design; dimension v - 1 by convention";
  return c;
}

}  // namespace detail

/// Largest d such that every d-subset generates a proper subspace, found by
/// exhausting subset levels in colex order.  Levels whose subset count
/// exceeds the budget make the result inconclusive (a lower bound).
inline DimensionCertificate dimension(
    const PBDesign& design, std::uint64_t budget = kDefaultDimensionBudget) {
  if (design.v < 1) throw Error("dimension of an empty design");
  if (is_trivial_space(design)) return detail::trivial_cert(design.v);
  PbdClosure eng(design);
  DimensionCertificate cert;
  std::uint64_t checked = 0;
  for (int d = 2; d <= design.v; ++d) {
    auto level = subset_count(design.v, d);
    if (!level || *level > budget) {
      cert.kind = DimensionCertificate::Kind::inconclusive;
      cert.d = d - 1;  // all smaller levels exhausted: dimension >= d - 1
      cert.subsets_checked = checked;
      cert.note = "level " + std::to_string(d) + " exceeds subset budget " +
                  std::to_string(budget) + "; dimension is at least " +
                  std::to_string(d - 1);
      return cert;
    }
    for (ColexSubsets it(design.v, d); !it.done(); it.advance()) {
      ++checked;
      if (eng.spans_all(it.current())) {
        cert.kind = DimensionCertificate::Kind::exact;
        cert.d = d - 1;
        cert.witness = it.current();
        cert.subsets_checked = checked;
        return cert;
      }
    }
  }
  throw Error("unreachable: the full point set spans");  // cannot happen
}

/// Strong analog for group divisible designs; a subset is improper when its
/// strong closure touches every group.
inline DimensionCertificate strong_dimension(
    const GroupDesign& design, std::uint64_t budget = kDefaultDimensionBudget) {
  if (design.v < 1) throw Error("dimension of an empty design");
  GddClosure eng(design);
  DimensionCertificate cert;
  std::uint64_t checked = 0;
  for (int d = 1; d <= design.v; ++d) {
    auto level = subset_count(design.v, d);
    if (!level || *level > budget) {
      cert.kind = DimensionCertificate::Kind::inconclusive;
      cert.d = d - 1;
      cert.subsets_checked = checked;
      cert.note = "level " + std::to_string(d) + " exceeds subset budget " +
                  std::to_string(budget) + "; strong dimension is at least " +
                  std::to_string(d - 1);
      return cert;
    }
    for (ColexSubsets it(design.v, d); !it.done(); it.advance()) {
      ++checked;
      if (eng.strong_span_improper(it.current())) {
        cert.kind = DimensionCertificate::Kind::exact;
        cert.d = d - 1;
        cert.witness = it.current();
        cert.subsets_checked = checked;
        return cert;
      }
    }
  }
  throw Error("unreachable: the full point set is improper");  // cannot happen
}

namespace detail {

// Shared lower-bound search.  improper(S) must return true when S refutes.
template <typename Improper>
DimensionCertificate at_least_search(int v, int d, const SearchMode& mode,
                                     Improper&& improper) {
  DimensionCertificate cert;
  cert.d = d;
  if (d > v) {
    cert.kind = DimensionCertificate::Kind::refuted;
    cert.note = "no " + std::to_string(d) +
                "-subset exists; dimension is at most v - 1";
    return cert;
  }
  if (const auto* ex = std::get_if<ExhaustiveMode>(&mode)) {
    auto level = subset_count(v, d);
    if (!level || *level > ex->budget) {
      cert.kind = DimensionCertificate::Kind::inconclusive;
      cert.note = "subset count exceeds budget " + std::to_string(ex->budget);
      return cert;
    }
    for (ColexSubsets it(v, d); !it.done(); it.advance()) {
      ++cert.subsets_checked;
      if (improper(it.current())) {
        cert.kind = DimensionCertificate::Kind::refuted;
        cert.witness = it.current();
        return cert;
      }
    }
    cert.kind = DimensionCertificate::Kind::at_least;
    return cert;
  }
  const auto& sm = std::get<SampleMode>(mode);
  std::mt19937_64 gen(sm.seed);
  cert.seed = sm.seed;
  for (std::uint64_t i = 0; i < sm.count; ++i) {
    std::vector<int> s = sample_subset(gen, v, d);
    ++cert.subsets_checked;
    if (improper(s)) {
      cert.kind = DimensionCertificate::Kind::refuted;
      cert.witness = s;
      return cert;
    }
  }
  cert.kind = DimensionCertificate::Kind::inconclusive;
  cert.note = "no improper subset among " + std::to_string(sm.count) +
              " samples; supports but does not certify the bound";
  return cert;
}

}  // namespace detail

/// Decides or refutes dimension >= d.  Exhaustive mode certifies; sample
/// mode can only refute (kind refuted) or stay inconclusive.
inline DimensionCertificate dimension_at_least(
    const PBDesign& design, int d, const SearchMode& mode = ExhaustiveMode{}) {
  if (design.v < 1) throw Error("dimension of an empty design");
  if (d < 0) throw Error("dimension bound must be nonnegative");
  if (is_trivial_space(design)) {
    DimensionCertificate c;
    c.trivial = true;
    c.d = d;
    c.note = "complete design; dimension is v - 1 by convention";
    c.kind = d <= design.v - 1 ? DimensionCertificate::Kind::at_least
                               : DimensionCertificate::Kind::refuted;
    return c;
  }
  if (d <= 1) {
    DimensionCertificate c;
    c.kind = DimensionCertificate::Kind::at_least;
    c.d = d;
    c.note = "holds for every design with at least 2 points";
    return c;
  }
  PbdClosure eng(design);
  return detail::at_least_search(
      design.v, d, mode,
      [&](const std::vector<int>& s) { return eng.spans_all(s); });
}

inline DimensionCertificate strong_dimension_at_least(
    const GroupDesign& design, int d,
    const SearchMode& mode = ExhaustiveMode{}) {
  if (design.v < 1) throw Error("dimension of an empty design");
  if (d < 0) throw Error("dimension bound must be nonnegative");
  if (d == 0) {
    DimensionCertificate c;
    c.kind = DimensionCertificate::Kind::at_least;
    c.d = 0;
    c.note = "holds vacuously";
    return c;
  }
  GddClosure eng(design);
  return detail::at_least_search(
      design.v, d, mode,
      [&](const std::vector<int>& s) { return eng.strong_span_improper(s); });
}

/// Fast certificate for dimension >= 2, valid only for verified pairwise
/// balanced designs: there the span of any pair is exactly the block
/// containing it, so dimension >= 2 holds iff no block is the whole point
/// set.  Runs in one pass over the blocks.
inline DimensionCertificate dimension_at_least_two_by_blocks(
    const PBDesign& design) {
  if (design.v < 3) throw Error("needs at least 3 points");
  DimensionCertificate cert;
  cert.d = 2;
  for (const auto& b : design.blocks) {
    ++cert.subsets_checked;
    if ((int)b.size() == design.v) {
      cert.kind = DimensionCertificate::Kind::refuted;
      cert.witness = {b[0], b[1]};
      cert.note = "a block contains every point";
      return cert;
    }
  }
  cert.kind = DimensionCertificate::Kind::at_least;
  cert.note = "pair spans equal their blocks; every block is proper";
  return cert;
}

}  // namespace pbdim
