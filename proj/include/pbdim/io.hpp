#pragma once

#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "closure.hpp"
#include "design.hpp"
#include "pipeline.hpp"

namespace pbdim {

using ParsedDesign = std::variant<PBDesign, GroupDesign>;

namespace detail {

inline long long parse_int(const std::string& tok, long long lo,
                           long long hi, const std::string& what) {
  std::size_t pos = 0;
  long long val = 0;
  try {
    val = std::stoll(tok, &pos);
  } catch (const std::exception&) {
    throw ParseError("bad " + what + ": '" + tok + "'");
  }
  if (pos != tok.size()) throw ParseError("bad " + what + ": '" + tok + "'");
  if (val < lo || val > hi)
    throw ParseError(what + " " + tok + " out of range [" +
                     std::to_string(lo) + ", " + std::to_string(hi) + "]");
  return val;
}

inline std::vector<std::string> tokenize(const std::string& line) {
  std::vector<std::string> toks;
  std::istringstream in(line);
  std::string t;
  while (in >> t) toks.push_back(t);
  return toks;
}

inline Block parse_point_line(const std::vector<std::string>& toks, int v,
                              const std::string& what) {
  if (toks.size() < 2) throw ParseError(what + " line has no points");
  Block b;
  for (std::size_t i = 1; i < toks.size(); ++i)
    b.push_back((int)parse_int(toks[i], 0, v - 1, what + " point"));
  std::sort(b.begin(), b.end());
  for (std::size_t i = 0; i + 1 < b.size(); ++i)
    if (b[i] == b[i + 1])
      throw ParseError("duplicate point " + std::to_string(b[i]) + " in " +
                       what + " line");
  return b;
}

}  // namespace detail

/// Reads a design file.  Grammar per line, '#' starting a comment:
///   pbd <v> [k1 k2 ...]      header, declared sizes optional
///   gdd <v>                  header
///   group <p1 p2 ...>        gdd only
///   block <p1 p2 ...>
/// Points must lie in [0, v) and be distinct within a line; groups must be
/// disjoint.  The result is canonicalized, so parse then serialize is the
/// identity exactly on canonical files.
inline ParsedDesign parse_design(std::istream& in) {
  std::string line;
  bool have_header = false;
  bool is_gdd = false;
  int v = 0;
  std::vector<int> declared;
  bool have_declared = false;
  std::vector<Block> groups, blocks;

  while (std::getline(in, line)) {
    if (auto hash = line.find('#'); hash != std::string::npos)
      line.erase(hash);
    auto toks = detail::tokenize(line);
    if (toks.empty()) continue;
    const std::string& kw = toks[0];
    if (!have_header) {
      if (kw != "pbd" && kw != "gdd")
        throw ParseError("expected 'pbd' or 'gdd' header, got '" + kw + "'");
      if (toks.size() < 2) throw ParseError("header missing point count");
      is_gdd = (kw == "gdd");
      v = (int)detail::parse_int(toks[1], 0, INT32_MAX - 1, "point count");
      if (is_gdd && toks.size() > 2)
        throw ParseError("gdd header takes only a point count");
      for (std::size_t i = 2; i < toks.size(); ++i) {
        declared.push_back(
            (int)detail::parse_int(toks[i], 2, INT32_MAX - 1, "block size"));
        have_declared = true;
      }
      have_header = true;
    } else if (kw == "group") {
      if (!is_gdd) throw ParseError("group line in a pbd file");
      groups.push_back(detail::parse_point_line(toks, v, "group"));
    } else if (kw == "block") {
      blocks.push_back(detail::parse_point_line(toks, v, "block"));
    } else {
      throw ParseError("unknown line keyword '" + kw + "'");
    }
  }
  if (!have_header) throw ParseError("empty input, no design header");

  if (is_gdd) {
    std::vector<char> seen(v, 0);
    for (const auto& grp : groups)
      for (int x : grp) {
        if (seen[x])
          throw ParseError("point " + std::to_string(x) +
                           " appears in two groups");
        seen[x] = 1;
      }
    GroupDesign g{v, std::move(groups), std::move(blocks)};
    canonicalize(g);
    return g;
  }
  PBDesign d;
  d.v = v;
  d.blocks = std::move(blocks);
  if (have_declared) d.declared_sizes = std::move(declared);
  canonicalize(d);
  return d;
}

inline ParsedDesign parse_design_text(const std::string& text) {
  std::istringstream in(text);
  return parse_design(in);
}

namespace detail {

inline void append_line(std::string& out, const char* kw, const Block& pts) {
  out += kw;
  for (int p : pts) {
    out += ' ';
    out += std::to_string(p);
  }
  out += '\n';
}

}  // namespace detail

/// Canonical text form.  Assumes the design is already canonicalized, which
/// every generator and construction guarantees.
inline std::string serialize(const PBDesign& d) {
  std::string out = "pbd " + std::to_string(d.v);
  if (d.declared_sizes)
    for (int k : *d.declared_sizes) out += ' ' + std::to_string(k);
  out += '\n';
  for (const auto& b : d.blocks) detail::append_line(out, "block", b);
  return out;
}

inline std::string serialize(const GroupDesign& g) {
  std::string out = "gdd " + std::to_string(g.v) + "\n";
  for (const auto& grp : g.groups) detail::append_line(out, "group", grp);
  for (const auto& b : g.blocks) detail::append_line(out, "block", b);
  return out;
}

inline std::string serialize(const ParsedDesign& d) {
  return std::holds_alternative<PBDesign>(d)
             ? serialize(std::get<PBDesign>(d))
             : serialize(std::get<GroupDesign>(d));
}

// ---- human-readable reports ----

inline std::string to_string(const DimensionCertificate& c) {
  std::string s = std::string(to_string(c.kind)) + " d=" + std::to_string(c.d);
  if (!c.witness.empty()) {
    s += " witness=";
    for (std::size_t i = 0; i < c.witness.size(); ++i)
      s += (i ? "," : "") + std::to_string(c.witness[i]);
  }
  s += " subsets_checked=" + std::to_string(c.subsets_checked);
  if (c.seed) s += " seed=" + std::to_string(*c.seed);
  if (c.trivial) s += " trivial";
  if (!c.note.empty()) s += " (" + c.note + ")";
  return s;
}

inline std::string render_report(const VerificationReport& rep, bool gdd) {
  std::string out;
  if (rep.valid) {
    out = "valid: " + std::to_string(rep.pairs_checked) +
          (gdd ? " pairs checked, cross pairs each covered once"
               : " pairs, each covered once");
    out += "; " + std::to_string(rep.blocks_checked) + " blocks\n";
    return out;
  }
  out = "invalid:\n";
  static const ViolationKind kKinds[] = {
      ViolationKind::uncovered_pair,     ViolationKind::doubly_covered_pair,
      ViolationKind::in_group_pair_covered, ViolationKind::group_block_clash,
      ViolationKind::undersized_block,   ViolationKind::size_not_declared,
  };
  for (ViolationKind k : kKinds) {
    auto n = rep.totals[(std::size_t)k];
    if (n)
      out += "  " + std::string(to_string(k)) + ": " + std::to_string(n) + "\n";
  }
  for (const auto& w : rep.witnesses)
    out += "  " + std::string(to_string(w.kind)) + " (" + std::to_string(w.a) +
           ", " + std::to_string(w.b) + ")\n";
  return out;
}

inline std::string render_trace(const StageTrace& t) {
  std::string out;
  for (const auto& s : t.stages) {
    out += s.name + ": " + s.input_summary + " -> " + s.output_summary;
    out += s.verification.valid ? " [valid]" : " [INVALID]";
    out += '\n';
    if (s.certificate)
      out += "  certificate: " + to_string(*s.certificate) + "\n";
    if (!s.certificate_note.empty())
      out += "  note: " + s.certificate_note + "\n";
  }
  if (t.replication)
    out += "replication: " + std::to_string(*t.replication) + "\n";
  if (t.final_lower_bound)
    out += "dimension bound: " + to_string(*t.final_lower_bound) + "\n";
  if (t.exactness_probe)
    out += "exactness probe: " + to_string(*t.exactness_probe) + "\n";
  out += t.completed ? "completed\n" : ("failed: " + t.failure + "\n");
  return out;
}

// ---- json forms ----

inline nlohmann::json to_json(const PBDesign& d) {
  nlohmann::json j{{"kind", "pbd"}, {"v", d.v}, {"blocks", d.blocks}};
  if (d.declared_sizes) j["sizes"] = *d.declared_sizes;
  return j;
}

inline nlohmann::json to_json(const GroupDesign& g) {
  return {{"kind", "gdd"},
          {"v", g.v},
          {"groups", g.groups},
          {"blocks", g.blocks},
          {"type", type_string(g)}};
}

inline nlohmann::json to_json(const ParsedDesign& d) {
  return std::holds_alternative<PBDesign>(d) ? to_json(std::get<PBDesign>(d))
                                             : to_json(std::get<GroupDesign>(d));
}

inline nlohmann::json to_json(const VerificationReport& rep) {
  nlohmann::json viol = nlohmann::json::array();
  for (const auto& w : rep.witnesses)
    viol.push_back({{"kind", to_string(w.kind)}, {"a", w.a}, {"b", w.b}});
  nlohmann::json totals;
  static const ViolationKind kKinds[] = {
      ViolationKind::uncovered_pair,     ViolationKind::doubly_covered_pair,
      ViolationKind::in_group_pair_covered, ViolationKind::group_block_clash,
      ViolationKind::undersized_block,   ViolationKind::size_not_declared,
  };
  for (ViolationKind k : kKinds)
    totals[to_string(k)] = rep.totals[(std::size_t)k];
  return {{"valid", rep.valid},
          {"pairs_checked", rep.pairs_checked},
          {"blocks_checked", rep.blocks_checked},
          {"totals", totals},
          {"witnesses", viol}};
}

inline nlohmann::json to_json(const DimensionCertificate& c) {
  nlohmann::json j{{"kind", to_string(c.kind)},
                   {"d", c.d},
                   {"subsets_checked", c.subsets_checked}};
  if (!c.witness.empty()) j["witness"] = c.witness;
  if (c.seed) j["seed"] = *c.seed;
  if (c.trivial) j["trivial"] = true;
  if (!c.note.empty()) j["note"] = c.note;
  return j;
}

inline nlohmann::json to_json(const StageTrace& t) {
  nlohmann::json stages = nlohmann::json::array();
  for (const auto& s : t.stages) {
    nlohmann::json js{{"name", s.name},
                      {"input", s.input_summary},
                      {"output", s.output_summary},
                      {"valid", s.verification.valid}};
    if (s.certificate) js["certificate"] = to_json(*s.certificate);
    if (!s.certificate_note.empty()) js["note"] = s.certificate_note;
    stages.push_back(js);
  }
  nlohmann::json j{{"stages", stages}, {"completed", t.completed}};
  if (t.replication) j["replication"] = *t.replication;
  if (t.final_lower_bound)
    j["dimension_bound"] = to_json(*t.final_lower_bound);
  if (t.exactness_probe) j["exactness_probe"] = to_json(*t.exactness_probe);
  if (!t.failure.empty()) j["failure"] = t.failure;
  return j;
}

inline nlohmann::json to_json(const PipelinePlan& p) {
  return {{"mode", p.weak ? "weak" : "full"},
          {"sizes", p.sizes},
          {"d", p.d},
          {"r", p.r},
          {"q", p.q},
          {"n", p.n},
          {"x", p.x},
          {"y", p.y},
          {"alpha", p.alpha},
          {"beta", p.beta},
          {"gamma", p.gamma},
          {"final_v", p.final_v},
          {"ingredients", p.ingredients},
          {"notes", p.notes}};
}

}  // namespace pbdim
