// SPDX-FileCopyrightText: © 2026 The symcsp Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

/**
 * Line-oriented text formats. Blank lines and lines whose first non-blank
 * character is '#' are ignored.
 *
 *   graph                          gug m=<int>
 *   v <name>                       vertex <name>
 *   e <u> <v> [w=<p>/<q>]          bundle <u> <v> <hex,hex,...>
 *
 *   pug q=<int>                    csp q=<int>
 *   vertex <name>                  var <name>
 *   edge <u> <v> perm=<i0,...>     ctype <id> arity=<k> sat=<t;t;...>   (t = a,b,...)
 *                                  apply <id> <v1> ... <vk> w=<p>/<q>
 *   assign <vertex> <label>
 *
 * A perm edge holds iff a(u) = perm[a(v)]. Endpoints of bundles, edges and
 * applications are declared implicitly on first use. Repeated `apply` lines with the
 * same type and tuple are merged by adding their weights.
 */

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "symcsp/error.hpp"
#include "symcsp/graph.hpp"
#include "symcsp/instances.hpp"
#include "symcsp/rational.hpp"

namespace symcsp {

namespace detail {

struct Line {
  std::size_t number;
  std::vector<std::string> tokens;
};

inline std::vector<Line> tokenize(std::string_view text) {
  std::vector<Line> out;
  std::size_t number = 0;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    ++number;
    std::istringstream ls(line);
    std::vector<std::string> toks;
    std::string t;
    while (ls >> t) toks.push_back(t);
    if (toks.empty() || toks[0][0] == '#') continue;
    out.push_back({number, std::move(toks)});
  }
  return out;
}

/// Value of a "key=value" token.
inline std::string keyed(const Line& l, std::size_t i, std::string_view key) {
  if (i >= l.tokens.size()) throw ParseError("missing " + std::string(key) + "=", l.number);
  const auto& t = l.tokens[i];
  if (t.rfind(std::string(key) + "=", 0) != 0) throw ParseError("expected " + std::string(key) + "=, got '" + t + "'", l.number);
  return t.substr(key.size() + 1);
}

inline unsigned long long parse_uint(const std::string& s, std::size_t line) {
  if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos)
    throw ParseError("expected a non-negative integer, got '" + s + "'", line);
  try {
    return std::stoull(s);
  } catch (const std::exception&) {
    throw ParseError("integer out of range '" + s + "'", line);
  }
}

inline std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  if (s.empty()) return out;
  std::size_t start = 0;
  while (true) {
    auto p = s.find(sep, start);
    out.emplace_back(s.substr(start, p == std::string_view::npos ? std::string_view::npos : p - start));
    if (p == std::string_view::npos) break;
    start = p + 1;
  }
  return out;
}

inline void expect_arity(const Line& l, std::size_t n) {
  if (l.tokens.size() != n)
    throw ParseError("'" + l.tokens[0] + "' expects " + std::to_string(n - 1) + " fields", l.number);
}

template <class F>
auto at_line(const Line& l, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const ParseError&) {
    throw;
  } catch (const Error& e) {
    throw ParseError(e.what(), l.number);
  }
}

}  // namespace detail

inline WeightedGraph parse_graph(std::string_view text) {
  auto lines = detail::tokenize(text);
  if (lines.empty() || lines[0].tokens != std::vector<std::string>{"graph"}) throw ParseError("missing 'graph' header", lines.empty() ? 0 : lines[0].number);
  WeightedGraph out;
  auto vertex = [&](const std::string& n) {
    if (auto i = out.graph.find(n)) return *i;
    return out.graph.add_vertex(n);
  };
  for (std::size_t i = 1; i < lines.size(); ++i) {
    auto& l = lines[i];
    detail::at_line(l, [&] {
      if (l.tokens[0] == "v") {
        detail::expect_arity(l, 2);
        if (out.graph.find(l.tokens[1])) throw ParseError("duplicate vertex '" + l.tokens[1] + "'", l.number);
        out.graph.add_vertex(l.tokens[1]);
      } else if (l.tokens[0] == "e") {
        if (l.tokens.size() != 3 && l.tokens.size() != 4) throw ParseError("'e' expects 2 or 3 fields", l.number);
        auto a = vertex(l.tokens[1]), b = vertex(l.tokens[2]);
        out.graph.add_edge(a, b);
        out.weights.push_back(l.tokens.size() == 4 ? parse_ratio(detail::keyed(l, 3, "w")) : ExactRatio(1));
      } else {
        throw ParseError("unknown record '" + l.tokens[0] + "'", l.number);
      }
    });
  }
  return out;
}

inline std::string format_graph(const SimpleGraph& g, const std::vector<ExactRatio>* weights = nullptr) {
  std::string out = "graph\n";
  for (auto& n : g.names()) out += "v " + n + "\n";
  for (std::size_t i = 0; i < g.edge_count(); ++i) {
    auto& e = g.edge(i);
    out += "e " + g.name(e.u) + " " + g.name(e.v);
    if (weights) out += " w=" + to_string((*weights)[i]);
    out += "\n";
  }
  return out;
}

inline std::string format_graph(const WeightedGraph& g) { return format_graph(g.graph, &g.weights); }

inline GroupUgInstance parse_gug(std::string_view text) {
  auto lines = detail::tokenize(text);
  if (lines.empty() || lines[0].tokens.size() != 2 || lines[0].tokens[0] != "gug")
    throw ParseError("missing 'gug m=<int>' header", lines.empty() ? 0 : lines[0].number);
  auto m = detail::parse_uint(detail::keyed(lines[0], 1, "m"), lines[0].number);
  if (m == 0 || m > kMaxGf2Dim) throw ParseError("m must be in 1..64", lines[0].number);
  GroupUgInstance out(static_cast<unsigned>(m));
  for (std::size_t i = 1; i < lines.size(); ++i) {
    auto& l = lines[i];
    detail::at_line(l, [&] {
      if (l.tokens[0] == "vertex") {
        detail::expect_arity(l, 2);
        out.add_vertex(l.tokens[1]);
      } else if (l.tokens[0] == "bundle") {
        detail::expect_arity(l, 4);
        std::vector<Gf2Vector> diffs;
        for (auto& h : detail::split(l.tokens[3], ',')) diffs.push_back(Gf2Vector::from_hex(h, out.m()));
        out.add_bundle(out.ensure_vertex(l.tokens[1]), out.ensure_vertex(l.tokens[2]), std::move(diffs));
      } else {
        throw ParseError("unknown record '" + l.tokens[0] + "'", l.number);
      }
    });
  }
  return out;
}

inline std::string format_gug(const GroupUgInstance& inst) {
  std::string out = "gug m=" + std::to_string(inst.m()) + "\n";
  for (auto& n : inst.names().all()) out += "vertex " + n + "\n";
  for (auto& b : inst.bundles()) {
    out += "bundle " + inst.name(b.u) + " " + inst.name(b.v) + " ";
    for (std::size_t i = 0; i < b.diffs.size(); ++i) out += (i ? "," : "") + b.diffs[i].hex();
    out += "\n";
  }
  return out;
}

inline PermUgInstance parse_pug(std::string_view text) {
  auto lines = detail::tokenize(text);
  if (lines.empty() || lines[0].tokens.size() != 2 || lines[0].tokens[0] != "pug")
    throw ParseError("missing 'pug q=<int>' header", lines.empty() ? 0 : lines[0].number);
  auto q = detail::parse_uint(detail::keyed(lines[0], 1, "q"), lines[0].number);
  if (q == 0 || q > (1u << 24)) throw ParseError("q out of range", lines[0].number);
  PermUgInstance out(static_cast<std::uint32_t>(q));
  for (std::size_t i = 1; i < lines.size(); ++i) {
    auto& l = lines[i];
    detail::at_line(l, [&] {
      if (l.tokens[0] == "vertex") {
        detail::expect_arity(l, 2);
        out.add_vertex(l.tokens[1]);
      } else if (l.tokens[0] == "edge") {
        detail::expect_arity(l, 4);
        std::vector<std::uint32_t> perm;
        for (auto& s : detail::split(detail::keyed(l, 3, "perm"), ','))
          perm.push_back(static_cast<std::uint32_t>(detail::parse_uint(s, l.number)));
        auto u = out.ensure_vertex(l.tokens[1]);
        auto v = out.ensure_vertex(l.tokens[2]);
        out.add_constraint(u, v, std::move(perm));
      } else {
        throw ParseError("unknown record '" + l.tokens[0] + "'", l.number);
      }
    });
  }
  return out;
}

inline std::string format_pug(const PermUgInstance& inst) {
  std::string out = "pug q=" + std::to_string(inst.q()) + "\n";
  for (auto& n : inst.names().all()) out += "vertex " + n + "\n";
  for (auto& c : inst.constraints()) {
    out += "edge " + inst.name(c.u) + " " + inst.name(c.v) + " perm=";
    for (std::size_t i = 0; i < c.perm.size(); ++i) out += (i ? "," : "") + std::to_string(c.perm[i]);
    out += "\n";
  }
  return out;
}

inline WeightedCspInstance parse_csp(std::string_view text) {
  auto lines = detail::tokenize(text);
  if (lines.empty() || lines[0].tokens.size() != 2 || lines[0].tokens[0] != "csp")
    throw ParseError("missing 'csp q=<int>' header", lines.empty() ? 0 : lines[0].number);
  auto q = detail::parse_uint(detail::keyed(lines[0], 1, "q"), lines[0].number);
  if (q == 0 || q > (1u << 16)) throw ParseError("q out of range", lines[0].number);
  WeightedCspInstance out(static_cast<std::uint32_t>(q));
  for (std::size_t i = 1; i < lines.size(); ++i) {
    auto& l = lines[i];
    detail::at_line(l, [&] {
      if (l.tokens[0] == "var") {
        detail::expect_arity(l, 2);
        out.add_variable(l.tokens[1]);
      } else if (l.tokens[0] == "ctype") {
        detail::expect_arity(l, 4);
        auto arity = detail::parse_uint(detail::keyed(l, 2, "arity"), l.number);
        std::vector<std::vector<std::uint32_t>> sat;
        for (auto& t : detail::split(detail::keyed(l, 3, "sat"), ';')) {
          std::vector<std::uint32_t> tuple;
          for (auto& x : detail::split(t, ',')) tuple.push_back(static_cast<std::uint32_t>(detail::parse_uint(x, l.number)));
          sat.push_back(std::move(tuple));
        }
        out.add_type(l.tokens[1], arity, std::move(sat));
      } else if (l.tokens[0] == "apply") {
        if (l.tokens.size() < 3) throw ParseError("'apply' needs a type and a weight", l.number);
        auto type = out.find_type(l.tokens[1]);
        if (!type) throw ParseError("unknown constraint type '" + l.tokens[1] + "'", l.number);
        std::vector<std::size_t> vars;
        for (std::size_t k = 2; k + 1 < l.tokens.size(); ++k) vars.push_back(out.ensure_variable(l.tokens[k]));
        out.apply(*type, std::move(vars), parse_ratio(detail::keyed(l, l.tokens.size() - 1, "w")));
      } else {
        throw ParseError("unknown record '" + l.tokens[0] + "'", l.number);
      }
    });
  }
  return out;
}

inline std::string format_csp(const WeightedCspInstance& inst) {
  std::string out = "csp q=" + std::to_string(inst.q()) + "\n";
  for (auto& n : inst.names().all()) out += "var " + n + "\n";
  for (auto& t : inst.types()) {
    out += "ctype " + t.id + " arity=" + std::to_string(t.arity) + " sat=";
    for (std::size_t i = 0; i < t.satisfying.size(); ++i) {
      if (i) out += ";";
      for (std::size_t j = 0; j < t.satisfying[i].size(); ++j) out += (j ? "," : "") + std::to_string(t.satisfying[i][j]);
    }
    out += "\n";
  }
  for (auto& a : inst.applications()) {
    out += "apply " + inst.types()[a.type].id;
    for (auto v : a.vars) out += " " + inst.names().name(v);
    out += " w=" + to_string(a.weight) + "\n";
  }
  return out;
}

/// Raw `assign` records, keyed by vertex name.
inline std::map<std::string, std::string> parse_assignment(std::string_view text) {
  std::map<std::string, std::string> out;
  for (auto& l : detail::tokenize(text)) {
    if (l.tokens[0] != "assign") throw ParseError("unknown record '" + l.tokens[0] + "'", l.number);
    detail::expect_arity(l, 3);
    if (!out.emplace(l.tokens[1], l.tokens[2]).second) throw ParseError("vertex assigned twice", l.number);
  }
  return out;
}

inline GroupAssignment parse_group_assignment(const GroupUgInstance& inst, std::string_view text) {
  std::map<std::string, Gf2Vector> labels;
  for (auto& [k, v] : parse_assignment(text)) labels.emplace(k, Gf2Vector::from_hex(v, inst.m()));
  return resolve_assignment<Gf2Vector>(inst, labels);
}

template <class Instance>
LabelAssignment parse_label_assignment(const Instance& inst, std::string_view text) {
  std::map<std::string, std::uint32_t> labels;
  for (auto& [k, v] : parse_assignment(text)) labels.emplace(k, static_cast<std::uint32_t>(detail::parse_uint(v, 0)));
  return resolve_assignment<std::uint32_t>(inst, labels);
}

inline std::string format_assignment(const VertexNames& names, const GroupAssignment& x) {
  std::string out;
  for (std::size_t i = 0; i < x.size(); ++i) out += "assign " + names.name(i) + " " + x[i].hex() + "\n";
  return out;
}

inline std::string format_assignment(const VertexNames& names, const LabelAssignment& x) {
  std::string out;
  for (std::size_t i = 0; i < x.size(); ++i) out += "assign " + names.name(i) + " " + std::to_string(x[i]) + "\n";
  return out;
}

inline std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw PreconditionError("cannot read '" + p.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

/// Writes to a sibling temporary file, then renames over the target.
inline void write_file_atomic(const std::filesystem::path& p, std::string_view content) {
  auto tmp = p;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw PreconditionError("cannot write '" + tmp.string() + "'");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw PreconditionError("write failed for '" + tmp.string() + "'");
  }
  std::filesystem::rename(tmp, p);
}

}  // namespace symcsp
