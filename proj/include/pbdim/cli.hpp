#pragma once

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <istream>
#include <memory>
#include <optional>
#include <ostream>
#include <string>
#include <variant>
#include <vector>

#include <CLI11.hpp>

#include "closure.hpp"
#include "constructions.hpp"
#include "design.hpp"
#include "generators.hpp"
#include "io.hpp"
#include "pipeline.hpp"
#include "registry.hpp"

namespace pbdim::cli {

// Exit codes are part of the scripted interface.
constexpr int kOk = 0;
constexpr int kUsage = 1;
constexpr int kInvalid = 2;
constexpr int kRefuted = 3;
constexpr int kInconclusive = 4;
constexpr int kMissingIngredient = 5;

namespace detail {

inline ParsedDesign read_design(const std::string& path, std::istream& in) {
  if (path == "-") return parse_design(in);
  std::ifstream f(path);
  if (!f) throw ParseError("cannot open '" + path + "'");
  return parse_design(f);
}

inline void write_text(const std::string& path, const std::string& text,
                       std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error("cannot write '" + path + "'");
  f << text;
}

inline std::string registry_dir(const std::string& flag) {
  if (!flag.empty()) return flag;
  const char* env = std::getenv("PBD_REGISTRY");
  return env ? std::string(env) : std::string();
}

/// Loads every *.txt design in the directory, in name order.  Lookup keys
/// come from the parsed content: declared sizes for a pbd when present,
/// observed sizes otherwise; observed sizes plus group type for a gdd.
inline DesignRegistry load_registry(const std::string& dir) {
  DesignRegistry reg;
  if (dir.empty()) return reg;
  namespace fs = std::filesystem;
  if (!fs::is_directory(dir))
    throw Error("registry '" + dir + "' is not a directory");
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(dir))
    if (e.is_regular_file() && e.path().extension() == ".txt")
      files.push_back(e.path());
  std::sort(files.begin(), files.end());
  for (const auto& p : files) {
    std::ifstream f(p);
    if (!f) throw Error("cannot open '" + p.string() + "'");
    ParsedDesign d;
    try {
      d = parse_design(f);
    } catch (const Error& e) {
      throw ParseError(p.string() + ": " + e.what());
    }
    if (auto* pbd = std::get_if<PBDesign>(&d)) {
      PbdRequest key{pbd->v, pbd->declared_sizes ? *pbd->declared_sizes
                                                 : observed_sizes(*pbd)};
      reg.put(std::move(key), std::move(*pbd));
    } else {
      auto& g = std::get<GroupDesign>(d);
      GddRequest key{observed_sizes(g), group_type(g)};
      reg.put(std::move(key), std::move(g));
    }
  }
  return reg;
}

inline std::string join_ints(const std::vector<int>& xs, char sep) {
  std::string s;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) s += sep;
    s += std::to_string(xs[i]);
  }
  return s;
}

/// Canonical registry file name; lookup never depends on it, but the layout
/// keeps one design per self-describing file.
inline std::string canonical_name(const ParsedDesign& d) {
  if (const auto* pbd = std::get_if<PBDesign>(&d)) {
    std::vector<int> sizes =
        pbd->declared_sizes ? *pbd->declared_sizes : observed_sizes(*pbd);
    std::string name = "pbd_" + std::to_string(pbd->v);
    if (!sizes.empty()) name += "_" + join_ints(sizes, '-');
    return name + ".txt";
  }
  const auto& g = std::get<GroupDesign>(d);
  std::string name = "gdd_" + join_ints(observed_sizes(g), '-') + "_";
  auto type = group_type(g);
  for (std::size_t i = 0; i < type.size(); ++i) {
    if (i) name += '-';
    name += std::to_string(type[i].first) + "x" +
            std::to_string(type[i].second);
  }
  return name + ".txt";
}

struct Ctx {
  std::istream* in;
  std::ostream* out;
  std::ostream* err;
  int rc = kOk;
};

inline void emit_design(Ctx* ctx, const std::string& out_path, bool json,
                        const ParsedDesign& d) {
  if (json)
    write_text(out_path, to_json(d).dump(2) + "\n", *ctx->out);
  else
    write_text(out_path, serialize(d), *ctx->out);
}

inline int cert_exit(const DimensionCertificate& c) {
  switch (c.kind) {
    case DimensionCertificate::Kind::exact:
    case DimensionCertificate::Kind::at_least:
      return kOk;
    case DimensionCertificate::Kind::refuted:
      return kRefuted;
    case DimensionCertificate::Kind::inconclusive:
      return kInconclusive;
  }
  return kInconclusive;
}

// ---- subcommand registration ----

inline void add_params(CLI::App& app, Ctx* ctx) {
  auto sizes = std::make_shared<std::vector<int>>();
  auto json = std::make_shared<bool>(false);
  auto* sc = app.add_subcommand("params", "divisibility parameters of K");
  sc->add_option("K", *sizes, "block sizes")->required();
  sc->add_flag("--json", *json);
  sc->callback([ctx, sizes, json] {
    DesignParams p = design_params(*sizes);
    if (*json)
      *ctx->out << nlohmann::json{{"alpha", p.alpha},
                                  {"beta", p.beta},
                                  {"gamma", p.gamma}}
                       .dump()
                << "\n";
    else
      *ctx->out << "alpha=" << p.alpha << " beta=" << p.beta
                << " gamma=" << p.gamma << "\n";
  });
}

inline void add_admissible(CLI::App& app, Ctx* ctx) {
  auto v = std::make_shared<long long>(0);
  auto sizes = std::make_shared<std::vector<int>>();
  auto json = std::make_shared<bool>(false);
  auto* sc =
      app.add_subcommand("admissible", "necessary divisibility test for v");
  sc->add_option("v", *v, "point count")->required();
  sc->add_option("K", *sizes, "block sizes")->required();
  sc->add_flag("--json", *json);
  sc->callback([ctx, v, sizes, json] {
    DesignParams p = design_params(*sizes);
    bool positive = *v >= 1;
    bool a_ok = positive && (*v - 1) % p.alpha == 0;
    bool b_ok = positive && ((*v % p.beta) * ((*v - 1) % p.beta)) % p.beta == 0;
    bool ok = admissible(*v, *sizes);
    if (*json) {
      *ctx->out << nlohmann::json{{"admissible", ok},
                                  {"alpha_divides", a_ok},
                                  {"beta_divides", b_ok}}
                       .dump()
                << "\n";
    } else if (ok) {
      *ctx->out << "yes\n";
    } else {
      std::string why;
      if (!positive) why = "v must be positive";
      if (positive && !a_ok) why = "alpha does not divide v-1";
      if (positive && !b_ok)
        why += std::string(why.empty() ? "" : "; ") +
               "beta does not divide v(v-1)";
      *ctx->out << "no: " << why << "\n";
    }
    if (!ok) ctx->rc = kInvalid;
  });
}

inline void add_build(CLI::App& app, Ctx* ctx) {
  auto* build = app.add_subcommand("build", "construct a design");
  build->require_subcommand(1);

  {
    auto q = std::make_shared<long long>(0);
    auto d = std::make_shared<int>(0);
    auto out_path = std::make_shared<std::string>();
    auto json = std::make_shared<bool>(false);
    auto* sc = build->add_subcommand("ag", "affine space AG_d(q) point-line design");
    sc->add_option("q", *q, "prime power order")->required();
    sc->add_option("d", *d, "dimension")->required();
    sc->add_option("--out", *out_path, "output file, - for stdout");
    sc->add_flag("--json", *json);
    sc->callback([ctx, q, d, out_path, json] {
      emit_design(ctx, *out_path, *json, affine_space(*q, *d));
    });
  }
  {
    auto q = std::make_shared<long long>(0);
    auto out_path = std::make_shared<std::string>();
    auto json = std::make_shared<bool>(false);
    auto* sc = build->add_subcommand("pg", "projective plane of order q");
    sc->add_option("q", *q, "prime power order")->required();
    sc->add_option("--out", *out_path, "output file, - for stdout");
    sc->add_flag("--json", *json);
    sc->callback([ctx, q, out_path, json] {
      emit_design(ctx, *out_path, *json, projective_plane(*q));
    });
  }
  {
    auto k = std::make_shared<int>(0);
    auto n = std::make_shared<long long>(0);
    auto out_path = std::make_shared<std::string>();
    auto json = std::make_shared<bool>(false);
    auto* sc = build->add_subcommand("td", "transversal design TD(k,n)");
    sc->add_option("k", *k, "number of groups")->required();
    sc->add_option("n", *n, "group size, prime power")->required();
    sc->add_option("--out", *out_path, "output file, - for stdout");
    sc->add_flag("--json", *json);
    sc->callback([ctx, k, n, out_path, json] {
      emit_design(ctx, *out_path, *json, transversal_design(*k, *n));
    });
  }
  {
    auto v = std::make_shared<long long>(0);
    auto out_path = std::make_shared<std::string>();
    auto json = std::make_shared<bool>(false);
    auto* sc = build->add_subcommand("sts", "Steiner triple system of order v");
    sc->add_option("v", *v, "order, 1 or 3 mod 6")->required();
    sc->add_option("--out", *out_path, "output file, - for stdout");
    sc->add_flag("--json", *json);
    sc->callback([ctx, v, out_path, json] {
      emit_design(ctx, *out_path, *json, steiner_triple_system(*v));
    });
  }
  {
    struct P {
      std::string mode = "weak";
      int k = 0;
      std::vector<int> sizes;
      int d = 2;
      std::optional<long long> y, r, q, n, x;
      std::string registry, out_path;
      bool trace = false, json = false, no_stage_certs = false;
      std::uint64_t budget = ExecuteOptions{}.stage_cert_budget;
      std::uint64_t samples = ExecuteOptions{}.final_sample_count;
      std::uint64_t stage_samples = ExecuteOptions{}.stage_sample_count;
      std::uint64_t seed = ExecuteOptions{}.seed;
      SearchLimits limits;
    };
    auto p = std::make_shared<P>();
    auto* sc = build->add_subcommand(
        "pipeline", "run the dimension-preserving construction chain");
    sc->add_option("--mode", p->mode, "weak (single k) or full (size set K)")
        ->check(CLI::IsMember({"weak", "full"}));
    sc->add_option("--k", p->k, "block size for weak mode");
    sc->add_option("--sizes", p->sizes, "block sizes for full mode");
    sc->add_option("--d", p->d, "target dimension lower bound");
    sc->add_option("--y", p->y, "target y with v = alpha*y + 1");
    sc->add_option("--r", p->r, "override the breaking block size");
    sc->add_option("--q", p->q, "override the master field order");
    sc->add_option("--n", p->n, "override the first inflation weight");
    sc->add_option("--x", p->x, "override the truncated group size");
    sc->add_option("--registry", p->registry, "ingredient design directory");
    sc->add_option("--budget", p->budget, "exhaustive certificate budget");
    sc->add_option("--samples", p->samples, "final sampled probe size");
    sc->add_option("--stage-samples", p->stage_samples,
                   "per-stage sampled certificate size");
    sc->add_option("--seed", p->seed, "sampling seed");
    sc->add_option("--r-max", p->limits.r_max, "search cap for r");
    sc->add_option("--q-max", p->limits.q_max, "search cap for q");
    sc->add_option("--n-max", p->limits.n_max, "search cap for n");
    sc->add_flag("--trace", p->trace, "print the stage trace to stderr");
    sc->add_flag("--no-stage-certs", p->no_stage_certs,
                 "skip per-stage dimension certificates");
    sc->add_flag("--json", p->json, "emit plan, trace and design as json");
    sc->add_option("--out", p->out_path, "output file, - for stdout");
    sc->callback([ctx, p] {
      DesignRegistry reg = load_registry(registry_dir(p->registry));
      IngredientProvider provider(&reg);
      PlanOptions popts;
      popts.y = p->y;
      popts.r = p->r;
      popts.q = p->q;
      popts.n = p->n;
      popts.x = p->x;
      popts.limits = p->limits;
      PipelinePlan plan;
      if (p->mode == "weak") {
        if (p->k < 2) throw Error("weak mode needs --k");
        plan = plan_weak(p->k, p->d, provider, popts);
      } else {
        if (p->sizes.empty()) throw Error("full mode needs --sizes");
        plan = plan_full(p->sizes, p->d, provider, popts);
      }
      ExecuteOptions eopts;
      eopts.stage_cert_budget = p->budget;
      eopts.stage_sample_count = p->stage_samples;
      eopts.final_sample_count = p->samples;
      eopts.seed = p->seed;
      eopts.stage_certificates = !p->no_stage_certs;
      PipelineResult res = execute(plan, provider, eopts);
      if (p->trace) *ctx->err << render_trace(res.trace);
      if (p->json) {
        nlohmann::json j{{"plan", to_json(plan)},
                         {"trace", to_json(res.trace)},
                         {"design", to_json(res.design)}};
        write_text(p->out_path, j.dump(2) + "\n", *ctx->out);
      } else {
        write_text(p->out_path, serialize(res.design), *ctx->out);
      }
    });
  }
}

inline void add_verify(CLI::App& app, Ctx* ctx) {
  auto file = std::make_shared<std::string>();
  auto json = std::make_shared<bool>(false);
  auto* sc = app.add_subcommand("verify", "check the defining properties");
  sc->add_option("FILE", *file, "design file, - for stdin")->required();
  sc->add_flag("--json", *json);
  sc->callback([ctx, file, json] {
    ParsedDesign d = read_design(*file, *ctx->in);
    bool gdd = std::holds_alternative<GroupDesign>(d);
    VerificationReport rep = gdd ? verify_gdd(std::get<GroupDesign>(d))
                                 : verify_pbd(std::get<PBDesign>(d));
    if (*json)
      *ctx->out << to_json(rep).dump() << "\n";
    else
      *ctx->out << render_report(rep, gdd);
    if (!rep.valid) ctx->rc = kInvalid;
  });
}

inline void add_dimension(CLI::App& app, Ctx* ctx) {
  struct P {
    std::string file;
    std::optional<int> at_least;
    bool exhaustive = false, json = false;
    std::optional<std::uint64_t> sample;
    std::uint64_t seed = 0;
    std::uint64_t budget = kDefaultDimensionBudget;
  };
  auto p = std::make_shared<P>();
  auto* sc = app.add_subcommand(
      "dimension", "dimension search (strong dimension for gdd files)");
  sc->add_option("FILE", p->file, "design file, - for stdin")->required();
  sc->add_option("--at-least", p->at_least, "certify a lower bound d");
  auto* ex = sc->add_flag("--exhaustive", p->exhaustive,
                          "enumerate subsets (default)");
  auto* sa = sc->add_option("--sample", p->sample,
                            "sampled refutation attempt of this size");
  sc->add_option("--seed", p->seed, "sampling seed");
  sc->add_option("--budget", p->budget, "subset enumeration budget");
  sc->add_flag("--json", p->json);
  sa->excludes(ex);
  sa->needs(sc->get_option("--at-least"));
  sc->callback([ctx, p] {
    ParsedDesign d = read_design(p->file, *ctx->in);
    DimensionCertificate cert;
    if (p->at_least) {
      SearchMode mode = p->sample
                            ? SearchMode(SampleMode{*p->sample, p->seed})
                            : SearchMode(ExhaustiveMode{p->budget});
      cert = std::holds_alternative<GroupDesign>(d)
                 ? strong_dimension_at_least(std::get<GroupDesign>(d),
                                             *p->at_least, mode)
                 : dimension_at_least(std::get<PBDesign>(d), *p->at_least,
                                      mode);
    } else {
      cert = std::holds_alternative<GroupDesign>(d)
                 ? strong_dimension(std::get<GroupDesign>(d), p->budget)
                 : dimension(std::get<PBDesign>(d), p->budget);
    }
    if (p->json)
      *ctx->out << to_json(cert).dump() << "\n";
    else
      *ctx->out << to_string(cert) << "\n";
    ctx->rc = cert_exit(cert);
  });
}

inline void add_spans(CLI::App& app, Ctx* ctx) {
  {
    auto file = std::make_shared<std::string>();
    auto pts = std::make_shared<std::vector<int>>();
    auto json = std::make_shared<bool>(false);
    auto* sc = app.add_subcommand("span", "closure of a point set");
    sc->add_option("FILE", *file, "design file, - for stdin")->required();
    sc->add_option("points", *pts, "seed points")->required();
    sc->add_flag("--json", *json);
    sc->callback([ctx, file, pts, json] {
      ParsedDesign d = read_design(*file, *ctx->in);
      PBDesign flat;
      if (auto* g = std::get_if<GroupDesign>(&d))
        flat = PBDesign{g->v, g->blocks, std::nullopt};
      else
        flat = std::move(std::get<PBDesign>(d));
      std::vector<int> s = span(flat, *pts);
      if (*json)
        *ctx->out << nlohmann::json{{"span", s}}.dump() << "\n";
      else
        *ctx->out << join_ints(s, ' ') << "\n";
    });
  }
  {
    auto file = std::make_shared<std::string>();
    auto pts = std::make_shared<std::vector<int>>();
    auto json = std::make_shared<bool>(false);
    auto* sc = app.add_subcommand(
        "strong-span", "group-absorbing closure of a point set");
    sc->add_option("FILE", *file, "gdd file, - for stdin")->required();
    sc->add_option("points", *pts, "seed points")->required();
    sc->add_flag("--json", *json);
    sc->callback([ctx, file, pts, json] {
      ParsedDesign d = read_design(*file, *ctx->in);
      auto* g = std::get_if<GroupDesign>(&d);
      if (!g) throw Error("strong-span needs a gdd file");
      std::vector<int> s = strong_span(*g, *pts);
      if (*json)
        *ctx->out << nlohmann::json{{"span", s}}.dump() << "\n";
      else
        *ctx->out << join_ints(s, ' ') << "\n";
    });
  }
}

inline void add_transforms(CLI::App& app, Ctx* ctx) {
  {
    struct P {
      std::string file, registry, out_path;
      std::vector<long long> weights;
      std::vector<int> sizes;
      bool json = false;
    };
    auto p = std::make_shared<P>();
    auto* sc = app.add_subcommand(
        "inflate", "weight every point and rebuild blocks from ingredient "
                   "designs");
    sc->add_option("MASTER", p->file, "master design file, - for stdin")
        ->required();
    sc->add_option("--weights", p->weights,
                   "one weight per point, or a single uniform weight")
        ->required();
    sc->add_option("--sizes", p->sizes, "ingredient block sizes")->required();
    sc->add_option("--registry", p->registry, "ingredient design directory");
    sc->add_option("--out", p->out_path, "output file, - for stdout");
    sc->add_flag("--json", p->json);
    sc->callback([ctx, p] {
      ParsedDesign d = read_design(p->file, *ctx->in);
      GroupDesign master = std::holds_alternative<GroupDesign>(d)
                               ? std::move(std::get<GroupDesign>(d))
                               : pbd_as_gdd(std::get<PBDesign>(d));
      WeightAssignment w =
          p->weights.size() == 1
              ? WeightAssignment::uniform(master.v, p->weights[0])
              : WeightAssignment{p->weights};
      DesignRegistry reg = load_registry(registry_dir(p->registry));
      IngredientProvider provider(&reg);
      WfcResult res = wfc(master, w, provider, p->sizes);
      emit_design(ctx, p->out_path, p->json, std::move(res.design));
    });
  }
  {
    struct P {
      std::string file, registry, out_path;
      std::vector<int> sizes;
      bool json = false;
    };
    auto p = std::make_shared<P>();
    auto* sc = app.add_subcommand(
        "break", "replace oversized blocks by ingredient designs");
    sc->add_option("FILE", p->file, "design file, - for stdin")->required();
    sc->add_option("--sizes", p->sizes, "target block sizes")->required();
    sc->add_option("--registry", p->registry, "ingredient design directory");
    sc->add_option("--out", p->out_path, "output file, - for stdout");
    sc->add_flag("--json", p->json);
    sc->callback([ctx, p] {
      ParsedDesign d = read_design(p->file, *ctx->in);
      DesignRegistry reg = load_registry(registry_dir(p->registry));
      IngredientProvider provider(&reg);
      if (auto* g = std::get_if<GroupDesign>(&d))
        emit_design(ctx, p->out_path, p->json,
                    break_blocks(*g, provider, p->sizes));
      else
        emit_design(ctx, p->out_path, p->json,
                    break_blocks(std::get<PBDesign>(d), provider, p->sizes));
    });
  }
  {
    struct P {
      std::string file, out_path;
      int group = 0, keep = 0;
      bool json = false;
    };
    auto p = std::make_shared<P>();
    auto* sc = app.add_subcommand("truncate", "shrink one group of a gdd");
    sc->add_option("FILE", p->file, "gdd file, - for stdin")->required();
    sc->add_option("--group", p->group, "group index")->required();
    sc->add_option("--keep", p->keep, "points to keep")->required();
    sc->add_option("--out", p->out_path, "output file, - for stdout");
    sc->add_flag("--json", p->json);
    sc->callback([ctx, p] {
      ParsedDesign d = read_design(p->file, *ctx->in);
      auto* g = std::get_if<GroupDesign>(&d);
      if (!g) throw Error("truncate needs a gdd file");
      TruncateResult res = truncate(*g, p->group, p->keep);
      emit_design(ctx, p->out_path, p->json, std::move(res.design));
    });
  }
  {
    struct P {
      std::string file, out_path;
      int x = 0;
      bool json = false;
    };
    auto p = std::make_shared<P>();
    auto* sc = app.add_subcommand(
        "delete-point", "remove a point; its punctured lines become groups");
    sc->add_option("FILE", p->file, "pbd file, - for stdin")->required();
    sc->add_option("x", p->x, "point to remove")->required();
    sc->add_option("--out", p->out_path, "output file, - for stdout");
    sc->add_flag("--json", p->json);
    sc->callback([ctx, p] {
      ParsedDesign d = read_design(p->file, *ctx->in);
      auto* pb = std::get_if<PBDesign>(&d);
      if (!pb) throw Error("delete-point needs a pbd file");
      DeletePointResult res = delete_point(*pb, p->x);
      emit_design(ctx, p->out_path, p->json, std::move(res.design));
    });
  }
  {
    struct P {
      std::string file, fill = "single", registry, out_path;
      std::vector<int> sizes;
      bool json = false;
    };
    auto p = std::make_shared<P>();
    auto* sc = app.add_subcommand(
        "add-point", "adjoin a point and fill the extended groups");
    sc->add_option("FILE", p->file, "gdd file, - for stdin")->required();
    sc->add_option("--fill", p->fill, "single (one block per group) or "
                                      "registry (pbd fills)")
        ->check(CLI::IsMember({"single", "registry"}));
    sc->add_option("--sizes", p->sizes, "fill block sizes (registry mode)");
    sc->add_option("--registry", p->registry, "ingredient design directory");
    sc->add_option("--out", p->out_path, "output file, - for stdout");
    sc->add_flag("--json", p->json);
    sc->callback([ctx, p] {
      ParsedDesign d = read_design(p->file, *ctx->in);
      auto* g = std::get_if<GroupDesign>(&d);
      if (!g) throw Error("add-point needs a gdd file");
      if (p->fill == "single") {
        emit_design(ctx, p->out_path, p->json, add_point_fill_single(*g));
      } else {
        if (p->sizes.empty())
          throw Error("registry fill needs --sizes");
        DesignRegistry reg = load_registry(registry_dir(p->registry));
        IngredientProvider provider(&reg);
        emit_design(ctx, p->out_path, p->json,
                    add_point_fill_pbd(*g, provider, p->sizes));
      }
    });
  }
}

inline void add_solve_overlap(CLI::App& app, Ctx* ctx) {
  auto y = std::make_shared<long long>(0);
  auto a = std::make_shared<long long>(0);
  auto c = std::make_shared<long long>(0);
  auto json = std::make_shared<bool>(false);
  auto* sc = app.add_subcommand("solve-overlap",
                                "split y as n*A + x with c <= x <= n");
  sc->add_option("y", *y, "total")->required();
  sc->add_option("A", *a, "step")->required();
  sc->add_option("c", *c, "floor for x")->required();
  sc->add_flag("--json", *json);
  sc->callback([ctx, y, a, c, json] {
    OverlapSplit s = solve_overlap(*y, *a, *c);
    if (*json)
      *ctx->out << nlohmann::json{{"n", s.n}, {"x", s.x}}.dump() << "\n";
    else
      *ctx->out << "n=" << s.n << " x=" << s.x << "\n";
  });
}

inline void add_registry_cmd(CLI::App& app, Ctx* ctx) {
  auto* sc = app.add_subcommand("registry", "manage a design directory");
  sc->require_subcommand(1);
  auto file = std::make_shared<std::string>();
  auto dir = std::make_shared<std::string>();
  auto* add = sc->add_subcommand(
      "add", "verify a design and store it under its canonical name");
  add->add_option("FILE", *file, "design file, - for stdin")->required();
  add->add_option("DIR", *dir, "registry directory")->required();
  add->callback([ctx, file, dir] {
    ParsedDesign d = read_design(*file, *ctx->in);
    // reject invalid designs before they can poison lookups
    DesignRegistry probe;
    if (auto* pbd = std::get_if<PBDesign>(&d)) {
      std::vector<int> sizes =
          pbd->declared_sizes ? *pbd->declared_sizes : observed_sizes(*pbd);
      probe.put(PbdRequest{pbd->v, std::move(sizes)}, *pbd);
    } else {
      const auto& g = std::get<GroupDesign>(d);
      probe.put(GddRequest{observed_sizes(g), group_type(g)}, g);
    }
    namespace fs = std::filesystem;
    fs::create_directories(*dir);
    fs::path target = fs::path(*dir) / canonical_name(d);
    std::ofstream f(target, std::ios::binary);
    if (!f) throw Error("cannot write '" + target.string() + "'");
    f << serialize(d);
    *ctx->out << target.string() << "\n";
  });
}

}  // namespace detail

/// Full command surface behind an injectable stream triple; returns the
/// process exit code.  args excludes the program name.
inline int run(std::vector<std::string> args, std::istream& in,
               std::ostream& out, std::ostream& err) {
  detail::Ctx ctx{&in, &out, &err};
  CLI::App app{"pairwise balanced and group divisible design toolkit"};
  app.fallthrough();
  int threads = 1;
  app.add_option("--threads", threads,
                 "accepted for compatibility; execution is sequential");
  app.require_subcommand(1);

  detail::add_params(app, &ctx);
  detail::add_admissible(app, &ctx);
  detail::add_build(app, &ctx);
  detail::add_verify(app, &ctx);
  detail::add_dimension(app, &ctx);
  detail::add_spans(app, &ctx);
  detail::add_transforms(app, &ctx);
  detail::add_solve_overlap(app, &ctx);
  detail::add_registry_cmd(app, &ctx);

  std::vector<const char*> argv;
  argv.reserve(args.size() + 1);
  argv.push_back("pbdim");
  for (const auto& a : args) argv.push_back(a.c_str());

  try {
    app.parse((int)argv.size(), argv.data());
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  } catch (const MissingIngredientError& e) {
    err << "error: " << e.what() << "\n";
    return kMissingIngredient;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kInvalid;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kInvalid;
  }
  return ctx.rc;
}

}  // namespace pbdim::cli
