// Acceptance gate: ten self-contained checks, one PASS/FAIL line each, with
// wall-clock limits enforced in-process.  Exit code is the failure count.
// The address-space cap proves the end-to-end run fits in 4 GB.

#include <sys/resource.h>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "pbdim/io.hpp"
#include "pbdim/pipeline.hpp"

using namespace pbdim;
using Kind = DimensionCertificate::Kind;

// On failure, records the reason and bails out of the criterion.
#define EXPECT(cond, msg) \
  do {                    \
    if (!(cond)) {        \
      why = (msg);        \
      return false;       \
    }                     \
  } while (0)

namespace {

bool subset_of(const std::vector<int>& a, const std::vector<int>& b) {
  return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

std::vector<std::vector<int>> seed_sets(int v) {
  std::vector<std::vector<int>> raw = {{0},
                                       {v - 1},
                                       {0, v - 1},
                                       {0, 1},
                                       {1, v / 2, v - 1},
                                       {0, v / 3, v / 2, v - 2}};
  std::vector<std::vector<int>> out;
  for (auto& s : raw) {
    std::sort(s.begin(), s.end());
    s.erase(std::unique(s.begin(), s.end()), s.end());
    if (!s.empty()) out.push_back(std::move(s));
  }
  return out;
}

DesignRegistry& triple_gdd_registry() {
  static DesignRegistry reg = [] {
    DesignRegistry r;
    r.put(GddRequest{{3}, {{2, 4}}},
          delete_point(steiner_triple_system(9), 8).design);
    return r;
  }();
  return reg;
}

// 1. Divisibility parameters and the triple-system admissibility sieve.
bool crit1(std::string& why) {
  DesignParams p3 = design_params({3});
  EXPECT(p3.alpha == 2 && p3.beta == 6 && p3.gamma == 3,
         "params({3}) != (2,6,3)");
  DesignParams p345 = design_params({3, 4, 5});
  EXPECT(p345.alpha == 1 && p345.beta == 2 && p345.gamma == 2,
         "params({3,4,5}) != (1,2,2)");
  for (long long v = 1; v <= 1000; ++v) {
    bool lib = admissible(v, {3});
    bool mod = v % 6 == 1 || v % 6 == 3;
    EXPECT(lib == mod, "admissible(" + std::to_string(v) + ", {3}) mismatch");
  }
  return true;
}

// 2. The 9-point affine plane has dimension exactly 2.
bool crit2(std::string& why, std::string* transcript = nullptr) {
  PBDesign ag9 = affine_space(3, 2);
  EXPECT(ag9.v == 9 && ag9.blocks.size() == 12, "AG_2(3) shape");
  EXPECT(verify_pbd(ag9).valid, "AG_2(3) does not verify");
  for (const auto& pr : oracles::all_subsets(9, 2))
    EXPECT(span(ag9, pr).size() == 3, "a pair spans more than its line");
  int collinear = 0, spanning = 0;
  for (const auto& t : oracles::all_subsets(9, 3)) {
    std::size_t s = span(ag9, t).size();
    if (s == 3)
      ++collinear;
    else if (s == 9)
      ++spanning;
    else
      EXPECT(false, "triple span of unexpected size");
  }
  EXPECT(collinear == 12 && spanning == 72, "triple split is not 12/72");
  DimensionCertificate c = dimension(ag9);
  EXPECT(c.kind == Kind::exact && c.d == 2, "dimension of AG_2(3) is not 2");
  if (transcript) *transcript = serialize(ag9) + to_string(c) + "\n";
  return true;
}

// 3. The 27-point affine space has dimension exactly 3.
bool crit3(std::string& why) {
  PBDesign cube = affine_space(3, 3);
  DimensionCertificate lo = dimension_at_least(cube, 3, ExhaustiveMode{50'000});
  EXPECT(lo.kind == Kind::at_least && lo.subsets_checked == 2925,
         "not all 2925 triples are proper");
  DimensionCertificate hi = dimension_at_least(cube, 4, ExhaustiveMode{50'000});
  EXPECT(hi.kind == Kind::refuted, "no spanning 4-subset found");
  EXPECT(span(cube, hi.witness).size() == 27, "witness does not span");
  DimensionCertificate ex = dimension(cube);
  EXPECT(ex.kind == Kind::exact && ex.d == 3, "dimension of AG_3(3) is not 3");
  return true;
}

// 4. Transversal designs sit at strong dimension 1.
bool crit4(std::string& why) {
  for (int n = 3; n <= 5; ++n) {
    DimensionCertificate c = strong_dimension(transversal_design(3, n));
    EXPECT(c.kind == Kind::exact && c.d == 1,
           "TD(3," + std::to_string(n) + ") strong dimension is not 1");
  }
  return true;
}

// 5. Inflate the 9-point plane by 4, fill with one extra point, certify.
bool crit5(std::string& why, std::string* transcript = nullptr) {
  DesignRegistry reg;
  IngredientProvider prov(&reg);
  GroupDesign master = pbd_as_gdd(affine_space(3, 2));
  WfcResult infl = wfc(master, WeightAssignment::uniform(9, 4), prov, {3});
  EXPECT(type_string(group_type(infl.design)) == "4^9", "inflated type");
  EXPECT(infl.design.blocks.size() == 192, "inflated block count");
  EXPECT(verify_gdd(infl.design).valid, "inflated design does not verify");
  DimensionCertificate sd =
      strong_dimension_at_least(infl.design, 2, ExhaustiveMode{10'000});
  EXPECT(sd.kind == Kind::at_least && sd.subsets_checked == 630,
         "strong dimension >= 2 not certified over all 630 pairs");

  PBDesign filled = add_point_fill_single(infl.design);
  EXPECT(filled.v == 37, "filled design is not on 37 points");
  EXPECT(observed_sizes(filled) == std::vector<int>({3, 5}),
         "filled block sizes are not {3,5}");
  EXPECT(verify_pbd(filled).valid, "filled design does not verify");
  DimensionCertificate lo = dimension_at_least(filled, 2, ExhaustiveMode{10'000});
  EXPECT(lo.kind == Kind::at_least && lo.subsets_checked == 666,
         "dimension >= 2 not certified over all 666 pairs");
  DimensionCertificate probe =
      dimension_at_least(filled, 3, ExhaustiveMode{8'000});
  EXPECT(probe.kind == Kind::refuted || probe.kind == Kind::at_least,
         "triple probe did not finish within budget");
  if (probe.kind == Kind::refuted)
    EXPECT(span(filled, probe.witness).size() == 37,
           "refuting triple does not span");
  if (transcript)
    *transcript = serialize(infl.design) + serialize(filled) + to_string(sd) +
                  "\n" + to_string(lo) + "\n" + to_string(probe) + "\n";
  return true;
}

// 6. Invariant suite over the bundled corpus (all designs have v <= 100).
bool crit6(std::string& why) {
  auto pbds = oracles::pbd_corpus();
  auto gdds = oracles::gdd_corpus();

  for (const auto& item : pbds) {
    const PBDesign& d = item.design;
    for (const auto& s : seed_sets(d.v)) {
      std::vector<int> sp = span(d, s);
      EXPECT(subset_of(s, sp), item.name + ": span is not extensive");
      EXPECT(span(d, sp) == sp, item.name + ": span is not idempotent");
      std::vector<int> t = s;
      t.push_back((s.back() + 1) % d.v);
      std::sort(t.begin(), t.end());
      t.erase(std::unique(t.begin(), t.end()), t.end());
      EXPECT(subset_of(sp, span(d, t)), item.name + ": span is not monotone");
      PBDesign sub = oracles::restrict_to(d, sp);  // throws on a stray point
      EXPECT(verify_pbd(sub).valid, item.name + ": span is not a subspace");
    }
  }

  for (const auto& item : gdds) {
    const GroupDesign& g = item.design;
    for (const auto& s : seed_sets(g.v)) {
      std::vector<int> sp = strong_span(g, s);
      EXPECT(subset_of(s, sp), item.name + ": strong span is not extensive");
      EXPECT(strong_span(g, sp) == sp,
             item.name + ": strong span is not idempotent");
      for (const auto& grp : g.groups) {
        std::size_t inside = 0;
        for (int p : grp)
          if (std::binary_search(sp.begin(), sp.end(), p)) ++inside;
        EXPECT(inside == 0 || inside == grp.size(),
               item.name + ": a group is split by a strong span");
      }
    }
  }

  // dimension monotonicity: break_blocks and add_point_fill
  IngredientProvider prov(&triple_gdd_registry());
  struct BreakCase {
    const char* master;
    std::vector<int> sizes;
  };
  const std::vector<BreakCase> breaks = {{"ag_2_7", {3}},
                                         {"ag_2_9", {3}},
                                         {"pg_3", {4}},
                                         {"sts_13", {3}},
                                         {"td_3_3_filled", {3, 4}}};
  for (const auto& c : breaks) {
    auto it = std::find_if(pbds.begin(), pbds.end(),
                           [&](const auto& n) { return n.name == c.master; });
    EXPECT(it != pbds.end(), std::string("missing corpus entry ") + c.master);
    DimensionCertificate in = dimension(it->design);
    EXPECT(in.kind == Kind::exact, std::string(c.master) + ": no exact input");
    PBDesign out = break_blocks(it->design, prov, c.sizes);
    EXPECT(verify_pbd(out).valid, std::string(c.master) + ": break invalid");
    DimensionCertificate kept =
        dimension_at_least(out, in.d, ExhaustiveMode{500'000});
    EXPECT(kept.kind == Kind::at_least,
           std::string(c.master) + ": break lowered the dimension");
  }

  for (const auto& item : gdds) {
    DimensionCertificate sd = strong_dimension(item.design);
    EXPECT(sd.kind == Kind::exact, item.name + ": no exact strong dimension");

    PBDesign filled = add_point_fill_single(item.design);
    EXPECT(verify_pbd(filled).valid, item.name + ": fill invalid");
    DimensionCertificate kept =
        dimension_at_least(filled, sd.d, ExhaustiveMode{500'000});
    EXPECT(kept.kind == Kind::at_least,
           item.name + ": fill lowered the dimension");

    // strong-dimension monotonicity: wfc and truncate
    std::vector<int> sizes = observed_sizes(item.design);
    bool doubled = sizes.front() >= 3 && sizes.back() <= 4;
    long long w = doubled ? 2 : 1;
    std::vector<int> ing = doubled ? std::vector<int>{3} : sizes;
    WfcResult res =
        wfc(item.design, WeightAssignment::uniform(item.design.v, w), prov, ing);
    EXPECT(verify_gdd(res.design).valid, item.name + ": inflation invalid");
    DimensionCertificate infl_kept =
        strong_dimension_at_least(res.design, sd.d, ExhaustiveMode{500'000});
    EXPECT(infl_kept.kind == Kind::at_least,
           item.name + ": inflation lowered the strong dimension");

    int gi = (int)item.design.groups.size() - 1;
    int gs = (int)item.design.groups[gi].size();
    std::vector<int> keeps = {1, gs - 1, gs};
    std::sort(keeps.begin(), keeps.end());
    keeps.erase(std::unique(keeps.begin(), keeps.end()), keeps.end());
    for (int keep : keeps) {
      if (keep < 1) continue;
      TruncateResult tr = truncate(item.design, gi, keep);
      EXPECT(verify_gdd(tr.design).valid, item.name + ": truncation invalid");
      DimensionCertificate trunc_kept =
          strong_dimension_at_least(tr.design, sd.d, ExhaustiveMode{500'000});
      EXPECT(trunc_kept.kind == Kind::at_least,
             item.name + ": truncation lowered the strong dimension");
    }
  }

  // delete_point / add_point_fill round trip on canonical forms
  for (const auto& item : pbds) {
    PBDesign orig = item.design;
    DeletePointResult del = delete_point(orig, orig.v - 1);
    PBDesign back = add_point_fill_single(del.design);
    canonicalize(orig);
    canonicalize(back);
    EXPECT(serialize(orig) == serialize(back),
           item.name + ": delete/refill round trip drifted");
  }
  return true;
}

// 7. Overlap splits agree with brute-force representability.
bool crit7(std::string& why) {
  for (long long a = 1; a <= 10; ++a) {
    for (long long c = 1; c <= 10; ++c) {
      long long threshold = c * (a + 1);  // least y with n >= c and x >= c
      for (long long y = threshold; y <= threshold + 200; ++y) {
        auto witnesses = oracles::overlap_witnesses(y, a, c);
        bool split_ok = false;
        OverlapSplit s{0, 0};
        try {
          s = solve_overlap(y, a, c);
          split_ok = true;
        } catch (const Error&) {
          split_ok = false;
        }
        EXPECT(split_ok == !witnesses.empty(),
               "solvability mismatch at y=" + std::to_string(y) +
                   " A=" + std::to_string(a) + " c=" + std::to_string(c));
        if (!split_ok) continue;
        EXPECT(y == s.n * a + s.x && c <= s.x && s.x <= s.n,
               "split out of range at y=" + std::to_string(y));
        EXPECT(s.n == witnesses.back().first && s.x == witnesses.back().second,
               "split is not the max-n witness at y=" + std::to_string(y));
      }
    }
  }
  return true;
}

// 8. Triple systems exist and verify for every admissible order below 100.
bool crit8(std::string& why) {
  for (int v = 1; v <= 99; ++v) {
    if (v % 6 != 1 && v % 6 != 3) continue;
    PBDesign d = steiner_triple_system(v);
    EXPECT((long long)d.blocks.size() == (long long)v * (v - 1) / 6,
           "block count off at v=" + std::to_string(v));
    EXPECT(verify_pbd(d).valid, "invalid system at v=" + std::to_string(v));
  }
  return true;
}

// 9. End-to-end weak pipeline to a verified 4395-point triple cover.
bool crit9(std::string& why, std::string* transcript = nullptr) {
  DesignRegistry reg;
  reg.put(PbdRequest{13, {4}}, projective_plane(3));
  reg.put(GddRequest{{13}, {{13, 13}}}, transversal_design(13, 13));
  reg.put(GddRequest{{3}, {{2, 4}}},
          delete_point(steiner_triple_system(9), 8).design);
  reg.put(GddRequest{{3}, {{2, 3}}}, transversal_design(3, 2));
  IngredientProvider prov(&reg);

  PlanOptions opts;
  opts.r = 4;
  opts.q = 13;
  opts.n = 13;
  opts.x = 13;
  PipelinePlan plan = plan_weak(3, 2, prov, opts);
  EXPECT(plan.final_v == 4395 && plan.y == 2197, "plan does not land on 4395");

  // the same chain step by step, checking the type law at each junction
  GroupDesign g1 = pbd_as_gdd(affine_space(13, 2));
  WfcResult w1 = wfc(g1, WeightAssignment::uniform(g1.v, 13), prov, {13});
  EXPECT(type_string(group_type(w1.design)) == "13^169", "inflated type");
  GroupDesign broken = break_blocks(w1.design, prov, {4});
  EXPECT(type_string(group_type(broken)) == "13^169", "broken type");
  TruncateResult tr = truncate(broken, (int)broken.groups.size() - 1, 13);
  EXPECT(tr.identity, "x = n should keep the last group whole");
  WfcResult w2 =
      wfc(tr.design, WeightAssignment::uniform(tr.design.v, 2), prov, {3});
  EXPECT(type_string(group_type(w2.design)) == "26^169", "final gdd type");
  PBDesign manual = add_point_fill_pbd(w2.design, prov, {3});

  PipelineResult res = execute(plan, prov, ExecuteOptions{});
  EXPECT(res.trace.completed && res.trace.stages.size() == 6,
         "pipeline did not complete six stages");
  for (const auto& st : res.trace.stages)
    EXPECT(st.verification.valid, "stage does not verify: " + st.name);
  EXPECT(serialize(res.design) == serialize(manual),
         "pipeline output differs from the manual chain");
  EXPECT(res.design.v == 4395, "final design is not on 4395 points");
  EXPECT(observed_sizes(res.design) == std::vector<int>({3}),
         "final design is not all triples");
  EXPECT(verify_pbd(res.design).valid, "final design does not verify");
  EXPECT(res.trace.replication && *res.trace.replication == 2197,
         "replication is not uniformly 2197");
  EXPECT(res.trace.final_lower_bound &&
             res.trace.final_lower_bound->kind == Kind::at_least &&
             res.trace.final_lower_bound->d == 2,
         "dimension >= 2 not certified");
  EXPECT(res.trace.exactness_probe.has_value(), "no exactness probe recorded");
  const DimensionCertificate& probe = *res.trace.exactness_probe;
  EXPECT(probe.kind == Kind::refuted || probe.kind == Kind::inconclusive,
         "sampled probe must refute or stay inconclusive");
  if (probe.kind == Kind::refuted)
    EXPECT(span(res.design, probe.witness).size() == 4395,
           "refuting sample does not span");
  if (transcript)
    *transcript = serialize(res.design) +
                  to_string(*res.trace.final_lower_bound) + "\n" +
                  to_string(probe) + "\n" +
                  std::to_string(*res.trace.replication) + "\n";
  return true;
}

// 10. Re-running the constructive criteria yields byte-identical output.
bool crit10(std::string& why, const std::string& t2, const std::string& t5,
            const std::string& t9) {
  EXPECT(!t2.empty() && !t5.empty() && !t9.empty(),
         "earlier criteria left no transcript");
  std::string r2, r5, r9, sub;
  EXPECT(crit2(sub, &r2), "criterion 2 rerun failed: " + sub);
  EXPECT(r2 == t2, "criterion 2 output drifted");
  EXPECT(crit5(sub, &r5), "criterion 5 rerun failed: " + sub);
  EXPECT(r5 == t5, "criterion 5 output drifted");
  EXPECT(crit9(sub, &r9), "criterion 9 rerun failed: " + sub);
  EXPECT(r9 == t9, "criterion 9 output drifted");
  return true;
}

}  // namespace

int main() {
  rlimit rl{};
  rl.rlim_cur = rl.rlim_max = 4ull << 30;
  setrlimit(RLIMIT_AS, &rl);  // the pipeline run must fit in 4 GB

  std::string t2, t5, t9;
  struct Criterion {
    int id;
    const char* label;
    double limit;  // seconds, 0 = untimed
    std::function<bool(std::string&)> fn;
  };
  const std::vector<Criterion> criteria = {
      {1, "divisibility arithmetic and admissibility sieve", 1.0,
       [](std::string& why) { return crit1(why); }},
      {2, "9-point plane has dimension exactly 2", 1.0,
       [&](std::string& why) { return crit2(why, &t2); }},
      {3, "27-point space has dimension exactly 3", 30.0,
       [](std::string& why) { return crit3(why); }},
      {4, "transversal designs have strong dimension 1", 5.0,
       [](std::string& why) { return crit4(why); }},
      {5, "inflate and fill to a certified 37-point cover", 60.0,
       [&](std::string& why) { return crit5(why, &t5); }},
      {6, "construction invariants over the bundled corpus", 300.0,
       [](std::string& why) { return crit6(why); }},
      {7, "overlap splits match brute force", 10.0,
       [](std::string& why) { return crit7(why); }},
      {8, "triple systems for every admissible order below 100", 5.0,
       [](std::string& why) { return crit8(why); }},
      {9, "weak pipeline to a verified 4395-point cover", 600.0,
       [&](std::string& why) { return crit9(why, &t9); }},
      {10, "byte-identical reruns of criteria 2, 5 and 9", 0.0,
       [&](std::string& why) { return crit10(why, t2, t5, t9); }},
  };

  int failures = 0;
  for (const auto& c : criteria) {
    auto start = std::chrono::steady_clock::now();
    bool ok = false;
    std::string why;
    try {
      ok = c.fn(why);
    } catch (const std::exception& e) {
      ok = false;
      why = std::string("exception: ") + e.what();
    }
    double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    if (ok && c.limit > 0 && secs > c.limit) {
      ok = false;
      why = "over the " + std::to_string((int)c.limit) + "s limit";
    }
    std::printf("%s %2d %s (%.2fs)%s%s\n", ok ? "PASS" : "FAIL", c.id, c.label,
                secs, ok ? "" : " - ", ok ? "" : why.c_str());
    std::fflush(stdout);
    failures += ok ? 0 : 1;
  }
  return failures;
}
