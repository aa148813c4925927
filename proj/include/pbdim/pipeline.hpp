#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "closure.hpp"
#include "constructions.hpp"
#include "design.hpp"
#include "generators.hpp"
#include "registry.hpp"

namespace pbdim {

/// User caps standing in for the non-effective existence bounds: the search
/// never proposes parameters beyond these.
struct SearchLimits {
  long long r_max = 50;
  long long q_max = 2048;
  long long n_max = 4096;
  long long master_points_max = 1 << 20;  // cap on q^d
  long long fill_min = 1;                 // c, the smallest usable truncation
};

struct PipelinePlan {
  bool weak = false;        // single-size entry point
  std::vector<int> sizes;   // K (weak mode: {k})
  int d = 2;
  long long r = 0, q = 0, n = 0, x = 0;
  long long y = 0;          // n(q^d - 1) + x
  long long alpha = 0, beta = 0, gamma = 0;
  long long final_v = 0;
  std::vector<std::string> ingredients;  // requests the stages will make
  std::vector<std::string> notes;
};

/// Optional overrides and caps for plan().  Overridden values are taken as
/// given (hard arithmetic invariants still checked); missing ones are
/// searched smallest-first.
struct PlanOptions {
  std::optional<long long> y;
  std::optional<long long> r, q, n, x;
  SearchLimits limits;
};

namespace detail {

inline long long checked_power(long long q, int d, long long cap) {
  long long p = 1;
  for (int i = 0; i < d; ++i) {
    p *= q;
    if (p > cap) return -1;
  }
  return p;
}

inline std::vector<std::pair<int, int>> uniform_type(long long g,
                                                     long long u) {
  if (u <= 0) return {};
  return {{(int)g, (int)u}};
}

// Group type n^(m) x^1 as a sorted multiset (merges when x = n).
inline std::vector<std::pair<int, int>> truncated_type(long long n,
                                                       long long m,
                                                       long long x) {
  if (x == n) return uniform_type(n, m + 1);
  std::vector<std::pair<int, int>> t;
  if (x < n) {
    if (x > 0) t.push_back({(int)x, 1});
    if (m > 0) t.push_back({(int)n, (int)m});
  } else {
    if (m > 0) t.push_back({(int)n, (int)m});
    t.push_back({(int)x, 1});
  }
  return t;
}

struct PlanFailure {
  std::vector<std::string> attempts;

  void note(const std::string& s) {
    if (attempts.size() < 50) attempts.push_back(s);
  }

  [[noreturn]] void raise(const std::string& context) const {
    std::string msg = "no pipeline parameters within limits (" + context + ")";
    for (const auto& a : attempts) msg += "\n  " + a;
    throw NoParametersError(msg);
  }
};

}  // namespace detail

/// Chooses (r, q, n, x) for the construction chain: smallest r with the
/// stage-5 ingredient designs available, then smallest prime power
/// q ≡ 1 (mod r(r-1)) with a block-breaking PBD(q,{r}), then (n, x) either
/// from the division witness for a requested y or by direct search.  All
/// parameters can be overridden; searched inflation weights honor gamma | n
/// while explicit overrides bypass that filter.
inline PipelinePlan plan(std::vector<int> sizes, bool weak, int d,
                         const IngredientProvider& provider,
                         const PlanOptions& opts = {}) {
  sizes = normalized_sizes(std::move(sizes));
  DesignParams par = design_params(sizes);
  if (d < 1) throw Error("target dimension must be positive");

  PipelinePlan plan;
  plan.weak = weak;
  plan.sizes = sizes;
  plan.d = d;
  plan.alpha = par.alpha;
  plan.beta = par.beta;
  plan.gamma = par.gamma;

  const SearchLimits& lim = opts.limits;
  if (opts.y) {
    long long y = *opts.y;
    if (y < 1 || (y % par.gamma) * ((par.alpha * y + 1) % par.gamma) % par.gamma != 0)
      throw InadmissibleError("y = " + std::to_string(y) +
                              " fails y(alpha*y + 1) = 0 (mod gamma)");
  }

  detail::PlanFailure fail;
  const bool overridden_nx = opts.n.has_value() || opts.x.has_value();
  if (overridden_nx && (!opts.n || !opts.x))
    throw Error("n and x must be overridden together");
  if (opts.q && !prime_power_decompose(*opts.q))
    throw InadmissibleError("q = " + std::to_string(*opts.q) +
                            " is not a prime power");

  // r candidates: r >= 3, r = 1 (mod gamma)
  std::vector<long long> r_cands;
  if (opts.r) {
    if (*opts.r < 3 || (*opts.r - 1) % par.gamma != 0)
      throw InadmissibleError("r = " + std::to_string(*opts.r) +
                              " violates r = 1 (mod gamma), r >= 3");
    r_cands.push_back(*opts.r);
  } else {
    for (long long r = 3; r <= lim.r_max; ++r)
      if ((r - 1) % par.gamma == 0) r_cands.push_back(r);
  }

  // Accepts a candidate (n, x) at fixed (r, q): checks the fill congruence
  // and, unless (n, x) was given outright, ingredient availability.
  auto try_nx = [&](long long r, long long q, long long master, long long n,
                    long long x) -> bool {
    if (n < 1 || x < 1 || x > n) {
      if (overridden_nx) throw InadmissibleError("need 1 <= x <= n");
      return false;
    }
    if ((x % par.gamma) * ((par.alpha * x + 1) % par.gamma) % par.gamma != 0) {
      if (overridden_nx)
        throw InadmissibleError("x = " + std::to_string(x) +
                                " fails x(alpha*x + 1) = 0 (mod gamma)");
      return false;
    }
    GddRequest td{{(int)q}, detail::uniform_type(n, q)};
    PbdRequest fill_n{n * par.alpha + 1, sizes};
    PbdRequest fill_x{x * par.alpha + 1, sizes};
    if (!overridden_nx && !provider.find_pbd(fill_x)) {
      fail.note("n=" + std::to_string(n) + " x=" + std::to_string(x) +
                ": missing " + to_string(fill_x));
      return false;
    }
    plan.r = r;
    plan.q = q;
    plan.n = n;
    plan.x = x;
    plan.y = n * (master - 1) + x;
    plan.final_v = plan.y * par.alpha + 1;
    plan.ingredients.push_back(to_string(td));
    plan.ingredients.push_back(to_string(PbdRequest{q, {(int)r}}));
    plan.ingredients.push_back(
        to_string(GddRequest{sizes, detail::uniform_type(par.alpha, r)}));
    if (x != n)
      plan.ingredients.push_back(to_string(
          GddRequest{sizes, detail::uniform_type(par.alpha, r - 1)}));
    plan.ingredients.push_back(to_string(fill_n));
    if (x != n) plan.ingredients.push_back(to_string(fill_x));
    if (n % par.gamma != 0)
      plan.notes.push_back(
          "override bypasses the gamma | n search filter (n = " +
          std::to_string(n) + ")");
    if (x == n)
      plan.notes.push_back("x = n: the truncation stage is the identity");
    return true;
  };

  // For a searched n, both the transversal ingredient and the large fill
  // depend on n alone; a miss rules out every x under that n.
  auto n_usable = [&](long long q, long long n) -> bool {
    GddRequest td{{(int)q}, detail::uniform_type(n, q)};
    if (!provider.find_gdd(td)) {
      fail.note("n=" + std::to_string(n) + ": missing " + to_string(td));
      return false;
    }
    PbdRequest fill_n{n * par.alpha + 1, sizes};
    if (!provider.find_pbd(fill_n)) {
      fail.note("n=" + std::to_string(n) + ": missing " + to_string(fill_n));
      return false;
    }
    return true;
  };

  for (long long r : r_cands) {
    if (!opts.r) {
      // stage 5 inflates by alpha and needs both ingredient shapes
      GddRequest big{sizes, detail::uniform_type(par.alpha, r)};
      GddRequest small{sizes, detail::uniform_type(par.alpha, r - 1)};
      if (!provider.find_gdd(big)) {
        fail.note("r=" + std::to_string(r) + ": missing " + to_string(big));
        continue;
      }
      if (!provider.find_gdd(small)) {
        fail.note("r=" + std::to_string(r) + ": missing " + to_string(small));
        continue;
      }
    }

    std::vector<long long> q_cands;
    if (opts.q) {
      if ((*opts.q - 1) % (r * (r - 1)) != 0) {
        if (opts.r)
          throw InadmissibleError("q = " + std::to_string(*opts.q) +
                                  " violates q = 1 (mod r(r-1))");
        fail.note("r=" + std::to_string(r) +
                  ": requested q is not 1 (mod r(r-1))");
        continue;
      }
      q_cands.push_back(*opts.q);
    } else {
      for (long long q = r * (r - 1) + 1; q <= lim.q_max; q += r * (r - 1))
        if (prime_power_decompose(q)) q_cands.push_back(q);
    }

    for (long long q : q_cands) {
      long long master = detail::checked_power(q, d, lim.master_points_max);
      if (master < 0) {
        fail.note("r=" + std::to_string(r) + " q=" + std::to_string(q) +
                  ": q^d exceeds the master point cap");
        continue;
      }
      if (!opts.q) {
        PbdRequest breaker{q, {(int)r}};
        if (!provider.find_pbd(breaker)) {
          fail.note("r=" + std::to_string(r) + " q=" + std::to_string(q) +
                    ": missing " + to_string(breaker));
          continue;
        }
      }

      if (overridden_nx) {
        if (try_nx(r, q, master, *opts.n, *opts.x)) {
          if (opts.y && plan.y != *opts.y)
            throw InadmissibleError("requested y does not match n(q^d-1)+x");
          return plan;
        }
      } else if (opts.y) {
        // division witness first, then shift overlap between the two parts
        long long a = par.gamma * (master - 1);
        OverlapSplit s;
        try {
          s = solve_overlap(*opts.y, a, lim.fill_min);
        } catch (const BelowThresholdError&) {
          fail.note("r=" + std::to_string(r) + " q=" + std::to_string(q) +
                    ": y below the representable range");
          continue;
        }
        for (long long t = 0;; ++t) {
          long long np = par.gamma * (s.n - t), xp = s.x + t * a;
          if (np < 1 || xp > np) break;
          if (!n_usable(q, np)) continue;
          if (try_nx(r, q, master, np, xp)) return plan;
        }
      } else {
        for (long long n = par.gamma; n <= lim.n_max; n += par.gamma) {
          if (!n_usable(q, n)) continue;
          for (long long x = lim.fill_min; x <= n; ++x)
            if (try_nx(r, q, master, n, x)) return plan;
        }
      }
    }
  }
  fail.raise("K=" + size_set_string(sizes) + " d=" + std::to_string(d));
}

inline PipelinePlan plan_weak(int k, int d, const IngredientProvider& provider,
                              const PlanOptions& opts = {}) {
  return plan({k}, true, d, provider, opts);
}

inline PipelinePlan plan_full(std::vector<int> sizes, int d,
                              const IngredientProvider& provider,
                              const PlanOptions& opts = {}) {
  return plan(std::move(sizes), false, d, provider, opts);
}

struct ExecuteOptions {
  std::uint64_t stage_cert_budget = 50'000;  // exhaustive cap per stage
  std::uint64_t stage_sample_count = 200;    // sampled attempt above it
  std::uint64_t final_sample_count = kDefaultSampleCount;
  std::uint64_t seed = 1;
  bool stage_certificates = true;
};

struct StageRecord {
  std::string name;
  std::string input_summary;
  std::string output_summary;
  VerificationReport verification;
  std::optional<DimensionCertificate> certificate;
  std::string certificate_note;
};

struct StageTrace {
  std::vector<StageRecord> stages;
  std::optional<DimensionCertificate> final_lower_bound;  // dimension >= d
  std::optional<DimensionCertificate> exactness_probe;    // level d + 1
  std::optional<long long> replication;  // uniform replication, weak mode
  bool completed = false;
  std::string failure;
};

/// Stage failure carrying the partial trace.
class StageError : public Error {
 public:
  StageError(const std::string& stage, const std::string& what,
             StageTrace trace)
      : Error("stage " + stage + ": " + what), trace_(std::move(trace)) {}
  const StageTrace& trace() const { return trace_; }

 private:
  StageTrace trace_;
};

struct PipelineResult {
  PBDesign design;
  StageTrace trace;
};

namespace detail {

inline std::string summarize(const GroupDesign& g) {
  return "gdd v=" + std::to_string(g.v) +
         " groups=" + std::to_string(g.groups.size()) +
         " blocks=" + std::to_string(g.blocks.size()) + " type=" +
         type_string(g);
}

inline std::string summarize(const PBDesign& d) {
  std::string s = "pbd v=" + std::to_string(d.v) +
                  " blocks=" + std::to_string(d.blocks.size()) + " sizes=";
  auto sz = observed_sizes(d);
  s += size_set_string(sz);
  return s;
}

}  // namespace detail

/// Runs the six-stage chain described by the plan, verifying each stage and
/// checking the group-type laws.  Dimension certification per stage follows
/// the budget policy: exhaustive when the subset count fits, otherwise a
/// small sampled refutation attempt recorded as not certifying.
inline PipelineResult execute(const PipelinePlan& plan,
                              const IngredientProvider& provider,
                              const ExecuteOptions& opts = {}) {
  StageTrace trace;
  long long master_pts = detail::checked_power(plan.q, plan.d, INT32_MAX);
  if (master_pts < 0) throw Error("q^d exceeds the representable range");
  if (plan.x < 1 || plan.x > plan.n) throw Error("plan needs 1 <= x <= n");

  auto fail = [&](const std::string& stage, const std::string& why)
      -> StageError {
    trace.completed = false;
    trace.failure = "stage " + stage + ": " + why;
    return StageError(stage, why, std::move(trace));
  };

  auto check_stage = [&](const std::string& name,
                         const std::string& input_summary,
                         const GroupDesign& out,
                         const std::vector<std::pair<int, int>>* want_type,
                         const std::vector<int>* want_sizes) {
    StageRecord rec;
    rec.name = name;
    rec.input_summary = input_summary;
    rec.output_summary = detail::summarize(out);
    rec.verification = verify_gdd(out);
    bool ok = rec.verification.valid;
    trace.stages.push_back(rec);
    if (!ok) throw fail(name, "verification failed");
    if (want_type && group_type(out) != *want_type)
      throw fail(name, "group type law violated: expected " +
                           type_string(*want_type) + ", got " +
                           type_string(out));
    if (want_sizes) {
      for (const auto& b : out.blocks)
        if (!std::binary_search(want_sizes->begin(), want_sizes->end(),
                                (int)b.size()))
          throw fail(name,
                     "block size " + std::to_string(b.size()) +
                         " outside " + size_set_string(*want_sizes));
    }
    if (opts.stage_certificates) {
      auto cnt = subset_count(out.v, plan.d);
      StageRecord& r = trace.stages.back();
      if (cnt && *cnt <= opts.stage_cert_budget) {
        r.certificate = strong_dimension_at_least(
            out, plan.d, ExhaustiveMode{opts.stage_cert_budget});
        r.certificate_note = "exhaustive";
      } else {
        r.certificate = strong_dimension_at_least(
            out, plan.d,
            SampleMode{opts.stage_sample_count,
                       opts.seed + trace.stages.size()});
        r.certificate_note =
            "sampled refutation attempt; does not certify the bound";
      }
      if (r.certificate->kind == DimensionCertificate::Kind::refuted)
        trace.stages.back().certificate_note = "refuted";
    } else {
      trace.stages.back().certificate_note =
          "skipped: stage certification disabled";
    }
  };

  // stage 1: master geometry as a GDD of singletons
  PBDesign master = affine_space(plan.q, plan.d);
  GroupDesign g1 = pbd_as_gdd(master);
  {
    auto t1 = detail::uniform_type(1, master_pts);
    check_stage("1-master", "ag(" + std::to_string(plan.q) + "," +
                                std::to_string(plan.d) + ")",
                g1, &t1, nullptr);
  }

  // stage 2: inflate by n with transversal-design ingredients
  WfcResult w2 = wfc(g1, WeightAssignment::uniform(g1.v, plan.n), provider,
                     {(int)plan.q});
  {
    auto t2 = detail::uniform_type(plan.n, master_pts);
    std::vector<int> s2{(int)plan.q};
    check_stage("2-inflate", detail::summarize(g1), w2.design, &t2, &s2);
  }

  // stage 3: break the size-q blocks into size-r blocks
  GroupDesign g3 = break_blocks(w2.design, provider, {(int)plan.r});
  {
    auto t3 = detail::uniform_type(plan.n, master_pts);
    std::vector<int> s3{(int)plan.r};
    check_stage("3-break", detail::summarize(w2.design), g3, &t3, &s3);
  }

  // stage 4: truncate the last group to x points
  TruncateResult t4 = truncate(g3, (int)g3.groups.size() - 1, plan.x);
  {
    auto ty = detail::truncated_type(plan.n, master_pts - 1, plan.x);
    std::vector<int> s4{(int)plan.r - 1, (int)plan.r};
    check_stage("4-truncate", detail::summarize(g3), t4.design, &ty, &s4);
    if (t4.identity)
      trace.stages.back().certificate_note += "; identity (x = n)";
  }

  // stage 5: inflate by alpha with the small ingredient designs
  WfcResult w5 =
      wfc(t4.design, WeightAssignment::uniform(t4.design.v, plan.alpha),
          provider, plan.sizes);
  {
    auto t5 = detail::truncated_type(plan.n * plan.alpha, master_pts - 1,
                                     plan.x * plan.alpha);
    check_stage("5-inflate", detail::summarize(t4.design), w5.design, &t5,
                &plan.sizes);
  }

  // stage 6: adjoin a point and fill every group with a PBD
  PBDesign final_design =
      add_point_fill_pbd(w5.design, provider, plan.sizes);
  {
    StageRecord rec;
    rec.name = "6-fill";
    rec.input_summary = detail::summarize(w5.design);
    rec.output_summary = detail::summarize(final_design);
    rec.verification = verify_pbd(final_design);
    trace.stages.push_back(rec);
    if (!rec.verification.valid) throw fail("6-fill", "verification failed");
    if (final_design.v != plan.final_v)
      throw fail("6-fill", "final point count " +
                               std::to_string(final_design.v) +
                               " does not match the plan");
    if (!admissible(final_design.v, plan.sizes))
      throw fail("6-fill", "final parameters inadmissible");
    for (const auto& b : final_design.blocks)
      if (!std::binary_search(plan.sizes.begin(), plan.sizes.end(),
                              (int)b.size()))
        throw fail("6-fill", "final block size outside K");
    trace.stages.back().certificate_note = "final output";
  }

  // replication uniformity in weak mode
  if (plan.weak) {
    long long k = plan.sizes[0];
    long long want = (final_design.v - 1) / (k - 1);
    std::vector<long long> repl(final_design.v, 0);
    for (const auto& b : final_design.blocks)
      for (int p : b) ++repl[p];
    for (int p = 0; p < final_design.v; ++p)
      if (repl[p] != want)
        throw fail("6-fill", "replication of point " + std::to_string(p) +
                                 " is " + std::to_string(repl[p]) +
                                 ", expected " + std::to_string(want));
    trace.replication = want;
  }

  // dimension >= d: blockwise shortcut at d = 2, search otherwise
  if (plan.d == 2) {
    trace.final_lower_bound = dimension_at_least_two_by_blocks(final_design);
  } else {
    auto cnt = subset_count(final_design.v, plan.d);
    if (cnt && *cnt <= opts.stage_cert_budget)
      trace.final_lower_bound = dimension_at_least(
          final_design, plan.d, ExhaustiveMode{opts.stage_cert_budget});
    else
      trace.final_lower_bound = dimension_at_least(
          final_design, plan.d,
          SampleMode{opts.final_sample_count, opts.seed + 64});
  }

  // exactness probe one level up; sampled results never certify
  {
    int probe = plan.d + 1;
    auto cnt = subset_count(final_design.v, probe);
    if (cnt && *cnt <= opts.stage_cert_budget)
      trace.exactness_probe = dimension_at_least(
          final_design, probe, ExhaustiveMode{opts.stage_cert_budget});
    else
      trace.exactness_probe = dimension_at_least(
          final_design, probe,
          SampleMode{opts.final_sample_count, opts.seed + 65});
  }

  trace.completed = true;
  return {std::move(final_design), std::move(trace)};
}

}  // namespace pbdim
