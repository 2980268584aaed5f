// SPDX-FileCopyrightText: © 2026 The symcsp Authors
// SPDX-License-Identifier: Apache-2.0

// Batch front end. Exit codes: 0 ok, 1 usage, 2 precondition/budget/input error,
// 3 game assertions failed.

#include <chrono>
#include <ctime>
#include <filesystem>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "symcsp/symcsp.hpp"

using namespace symcsp;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct Global {
  std::uint64_t seed = 0;
  bool no_timestamp = false;
};

Global global;

class UsageError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

void stamp(json& j) {
  if (global.no_timestamp) return;
  auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
  j["timestamp"] = buf;
}

void emit_json(const std::string& path, json j) {
  stamp(j);
  auto text = j.dump(2) + "\n";
  if (path.empty() || path == "-") std::cout << text;
  else write_file_atomic(path, text);
}

void emit_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") std::cout << text;
  else write_file_atomic(path, text);
}

std::string header_of(const std::string& text) {
  for (auto& l : detail::tokenize(text)) return l.tokens[0];
  return "";
}

// ---------------------------------------------------------------------------
// Sidecars

json klein_sidecar(const KleinPair& k) {
  return {{"kind", "klein"}, {"graph", format_graph(k.h)}, {"coloring", k.coloring}, {"star_edge", k.star_edge}};
}

json pair_sidecar(const InapproxPair& p, std::uint64_t seed) {
  json z = json::array(), b = json::array(), good = json::array();
  for (std::size_t e = 0; e < p.base.edge_count(); ++e) {
    z.push_back(p.z[e].to_string());
    b.push_back(p.b[e].hex());
    good.push_back(static_cast<bool>(p.good[e]));
  }
  std::size_t good_count = 0;
  for (bool g : p.good) good_count += g;
  return {{"kind", "random-pair"},
          {"graph", format_graph(p.base)},
          {"params", {{"d", p.params.d}, {"ell", p.params.ell}, {"m", p.params.m}, {"r", p.params.r}}},
          {"seed", seed},
          {"z", z},
          {"b", b},
          {"good", good},
          {"good_edges", good_count},
          {"bad_edges", p.base.edge_count() - good_count},
          {"warnings", p.warnings}};
}

KleinPair klein_from(const json& j) {
  auto g = parse_graph(j.at("graph").get<std::string>()).graph;
  return klein_pair(g, j.at("coloring").get<std::vector<int>>(), j.at("star_edge").get<std::size_t>());
}

InapproxPair pair_from(const json& j) {
  auto g = parse_graph(j.at("graph").get<std::string>()).graph;
  auto& pj = j.at("params");
  auto p = desk_params(pj.at("d"), pj.at("ell"), pj.at("m"), pj.at("r"));
  const auto m = static_cast<unsigned>(p.m);
  std::vector<Gf2Subspace> z;
  std::vector<Gf2Vector> b;
  for (auto& s : j.at("z")) z.push_back(Gf2Subspace::parse(s.get<std::string>(), m));
  for (auto& s : j.at("b")) b.push_back(Gf2Vector::from_hex(s.get<std::string>(), m));
  return assemble_inapprox_pair(g, p, z, b, j.at("good").get<std::vector<bool>>());
}

json read_json(const std::string& path) {
  try {
    return json::parse(read_file(path));
  } catch (const json::exception& e) {
    throw ParseError(path + ": " + e.what(), 0);
  }
}

// ---------------------------------------------------------------------------
// gen

struct GenArgs {
  std::string kind, out, graph;
  std::string delta = "1/2";
  std::string family = "k4";
  std::size_t k = 3;
  std::uint64_t d = 3, ell = 2, m = 3, r = 3;
  bool girth_override = false;
  std::size_t pebbles = 2;
};

int run_gen(const GenArgs& a) {
  if (a.out.empty()) throw UsageError("gen needs --out");
  if (a.kind == "unsat") {
    auto u = unsat_complete_graph(parse_ratio(a.delta));
    write_file_atomic(a.out, format_gug(u));
    json side{{"kind", "unsat"}, {"delta", a.delta}, {"vertices", u.vertex_count()}};
    emit_json(a.out + ".json", side);
    return 0;
  }
  if (a.kind == "cops-graph") {
    write_file_atomic(a.out, format_graph(cops_robbers_graph(a.k)));
    return 0;
  }
  if (a.kind == "klein") {
    KleinPair k;
    if (a.family == "k4") k = k4_klein_pair();
    else if (a.family == "cops") {
      auto h = cops_robbers_graph(a.k);
      auto ms = matching_decomposition(h);
      k = klein_pair(h, coloring_from_matchings(h, ms), ms[0][0]);
    } else if (a.family == "file") {
      if (a.graph.empty()) throw UsageError("--family file needs --graph");
      auto h = parse_graph(read_file(a.graph)).graph;
      auto ms = matching_decomposition(h);
      k = klein_pair(h, coloring_from_matchings(h, ms), ms[0][0]);
    } else {
      throw UsageError("unknown klein family '" + a.family + "'");
    }
    write_file_atomic(a.out + ".u1.gug", format_gug(k.u1));
    write_file_atomic(a.out + ".u2.gug", format_gug(k.u2));
    emit_json(a.out + ".json", klein_sidecar(k));
    return 0;
  }
  if (a.kind == "random-pair") {
    SimpleGraph base = a.graph.empty() ? petersen_graph() : parse_graph(read_file(a.graph)).graph;
    std::mt19937_64 rng(global.seed);
    PairOptions opt;
    opt.k = a.pebbles;
    opt.girth_override = a.girth_override;
    auto p = random_inapprox_pair(desk_params(a.d, a.ell, a.m, a.r), base, rng, opt);
    for (auto& w : p.warnings) std::cerr << "warning: " << w << "\n";
    write_file_atomic(a.out + ".u1.gug", format_gug(p.u1));
    write_file_atomic(a.out + ".u2.gug", format_gug(p.u2));
    write_file_atomic(a.out + ".u1_full.gug", format_gug(p.u1_full));
    write_file_atomic(a.out + ".u2_full.gug", format_gug(p.u2_full));
    emit_json(a.out + ".json", pair_sidecar(p, global.seed));
    return 0;
  }
  throw UsageError("unknown gen kind '" + a.kind + "'");
}

// ---------------------------------------------------------------------------
// lift / solve

int run_lift(const std::string& in, const std::string& out, std::uint64_t max_vertices) {
  LiftCaps caps;
  caps.max_vertices = max_vertices;
  emit_text(out, format_gug(label_lift(parse_gug(read_file(in)), caps)));
  return 0;
}

template <class Label>
json eval_json(const OptResult<Label>& r) {
  return {{"value", to_string(r.eval.fraction)},
          {"satisfied", r.eval.satisfied},
          {"total", r.eval.total},
          {"vacuous", r.eval.vacuous}};
}

int run_solve(const std::string& method, const std::string& in, const std::string& out, const std::string& witness,
              std::uint64_t budget) {
  auto text = read_file(in);
  auto head = header_of(text);
  json j{{"solver", method}, {"input", fs::path(in).filename().string()}};
  std::string wtext;
  if (method == "brute") {
    BruteOptions opt;
    opt.budget = budget;
    if (head == "gug") {
      auto u = parse_gug(text);
      auto r = brute_force_opt(u, opt);
      j.update(eval_json(r));
      wtext = format_assignment(u.names(), r.witness);
    } else if (head == "pug") {
      auto u = parse_pug(text);
      auto r = brute_force_opt(u, opt);
      j.update(eval_json(r));
      wtext = format_assignment(u.names(), r.witness);
    } else if (head == "csp") {
      auto c = parse_csp(text);
      auto r = csp_brute_opt(c, budget);
      j["value"] = to_string(r.value);
      j["vacuous"] = c.applications().empty();
      wtext = format_assignment(c.names(), r.witness);
    } else {
      throw ParseError("unrecognised instance header '" + head + "'", 1);
    }
  } else if (method == "tree") {
    if (head != "gug") throw PreconditionError("tree solver needs a group instance");
    auto u = parse_gug(text);
    auto r = spanning_tree_opt(u, budget);
    j.update(eval_json(r));
    wtext = format_assignment(u.names(), r.witness);
  } else if (method == "propagate") {
    if (head != "pug") throw PreconditionError("propagation needs a permutation instance");
    auto u = parse_pug(text);
    auto r = propagate_complete_sat(u);
    j["satisfiable"] = r.satisfiable;
    if (r.satisfiable) wtext = format_assignment(u.names(), r.witness);
  } else {
    throw UsageError("unknown solver '" + method + "'");
  }
  if (!witness.empty() && !wtext.empty()) write_file_atomic(witness, wtext);
  emit_json(out, j);
  return 0;
}

// ---------------------------------------------------------------------------
// game

struct GameArgs {
  std::string u1, u2, pair, out;
  std::string duplicator = "identity";
  std::string spoiler = "random";
  std::string assert_level = "full";
  std::size_t k = 2, rounds = 100, depth = 2;
  std::uint64_t budget = std::uint64_t{1} << 24;
};

int run_game(const GameArgs& a) {
  GroupUgInstance u1, u2;
  std::unique_ptr<Duplicator> dup;
  json pj;
  if (!a.pair.empty()) {
    pj = read_json(a.pair);
    auto kind = pj.at("kind").get<std::string>();
    if (kind == "klein") {
      auto k = klein_from(pj);
      u1 = k.u1, u2 = k.u2;
      if (a.duplicator == "cops") dup = std::make_unique<DuplicatorCops>(k);
    } else if (kind == "random-pair") {
      auto p = pair_from(pj);
      u1 = p.u1, u2 = p.u2;
      if (a.duplicator == "tree") dup = std::make_unique<DuplicatorTree>(p);
    } else {
      throw PreconditionError("sidecar kind '" + kind + "' carries no pair");
    }
  } else {
    if (a.u1.empty() || a.u2.empty()) throw UsageError("game needs --pair or both --u1 and --u2");
    u1 = parse_gug(read_file(a.u1));
    u2 = parse_gug(read_file(a.u2));
  }
  if (!dup) {
    if (a.duplicator == "identity") dup = std::make_unique<IdentityDuplicator>(u1);
    else if (a.duplicator == "k2") dup = std::make_unique<DuplicatorK2>(u1, u2);
    else throw UsageError("duplicator '" + a.duplicator + "' is unavailable for this input");
  }
  auto level = parse_assert_level(a.assert_level);
  json j{{"duplicator", dup->name()}, {"spoiler", a.spoiler}, {"k", a.k}, {"seed", global.seed},
         {"assert_level", a.assert_level}};
  if (a.spoiler == "exhaustive") {
    auto r = spoiler_exhaustive(u1, u2, a.k, *dup, a.depth, a.budget, level);
    json line = json::array();
    for (auto& mv : r.line) line.push_back({{"pick", mv.pick}, {"element", lifted_name(u1, mv.element)}});
    j["depth"] = a.depth;
    j["found"] = r.found;
    j["line"] = line;
    j["nodes"] = r.nodes;
    emit_json(a.out, j);
    return 0;
  }
  if (a.spoiler != "random") throw UsageError("unknown spoiler '" + a.spoiler + "'");
  RandomSpoiler sp(u1, global.seed);
  auto t = play_game(u1, u2, a.k, *dup, sp, a.rounds, level);
  j["transcript"] = to_json(u1, t);
  emit_json(a.out, j);
  return t.outcome == Outcome::StrategyViolation ? 3 : 0;
}

// ---------------------------------------------------------------------------
// sdp

struct SdpArgs {
  std::string kind, out, sdpa;
  std::vector<std::string> inputs;
  std::string normalization = "weight";
  double eta = 0, tol = 1e-6;
  std::size_t restarts = 5, round = 0;
  std::vector<double> grid;
};

int run_sdp(const SdpArgs& a) {
  SdpOptions opt;
  opt.tol = a.tol;
  opt.restarts = a.restarts;
  opt.seed = global.seed;
  if (a.inputs.empty()) throw UsageError("sdp needs --in");
  auto export_sdpa = [&](const SdpInstance& s) {
    if (a.sdpa.empty()) return;
    std::ostringstream ss;
    write_sdpa(ss, s);
    write_file_atomic(a.sdpa, ss.str());
  };
  if (a.kind == "maxcut") {
    auto g = parse_graph(read_file(a.inputs[0]));
    auto inst = build_maxcut_sdp(g);
    export_sdpa(inst);
    auto s = solve_sdp_lowrank(inst, opt);
    json j = to_json(s);
    j["gw_alpha"] = gw_alpha();
    j["gw_symmetric_value"] = gw_symmetric_value(s, g);
    j["expected_hyperplane_cut"] = expected_hyperplane_cut(s, g);
    if (a.round) {
      std::mt19937_64 rng(global.seed);
      auto r = hyperplane_round(s, g, rng, a.round);
      j["rounding"] = {{"trials", r.trials}, {"mean", r.mean}, {"stddev", r.stddev}};
    }
    emit_json(a.out, j);
    return 0;
  }
  auto mode = parse_normalization(a.normalization);
  if (a.kind == "lc") {
    auto nrm = normalize(parse_csp(read_file(a.inputs[0])), mode);
    auto inst = build_lc_relaxation(nrm.instance);
    export_sdpa(inst);
    json j = to_json(solve_sdp_lowrank(inst, opt));
    j["normalization"] = a.normalization;
    j["scale"] = to_string(nrm.factor);
    emit_json(a.out, j);
    return 0;
  }
  if (a.kind == "gap") {
    std::vector<WeightedCspInstance> fam;
    for (auto& f : a.inputs) fam.push_back(parse_csp(read_file(f)));
    auto t = gap_curve_estimate(fam, a.eta, mode, opt);
    json pts = json::array(), curve = json::array();
    for (auto& p : t.points) pts.push_back({{"sdp", p.sdp}, {"opt", p.opt}});
    for (auto& [c, v] : t.curve(a.grid)) curve.push_back({{"c", c}, {"lookup", std::isinf(v) ? json(nullptr) : json(v)}});
    emit_json(a.out, {{"eta", a.eta}, {"normalization", a.normalization}, {"seed", global.seed}, {"points", pts},
                      {"curve", curve}});
    return 0;
  }
  throw UsageError("unknown sdp kind '" + a.kind + "'");
}

// ---------------------------------------------------------------------------
// params / report

int run_params(const std::string& alpha, const std::string& gamma, const std::string& eps, bool as_json) {
  auto p = compute_params(parse_ratio(alpha), parse_ratio(gamma), parse_ratio(eps));
  if (as_json) {
    emit_json("-", {{"alpha", to_string(p.alpha)}, {"gamma", to_string(p.gamma)}, {"epsilon", to_string(p.epsilon)},
                    {"d", p.d}, {"ell", p.ell}, {"m", p.m}, {"r", p.r}, {"q", p.q}});
  } else {
    std::cout << "d=" << p.d << " ℓ=" << p.ell << " m=" << p.m << " r=" << p.r << " q=" << p.q << "\n";
  }
  return 0;
}

int run_report(const std::string& dir, const std::string& out) {
  if (!fs::is_directory(dir)) throw PreconditionError("'" + dir + "' is not a directory");
  std::vector<fs::path> files;
  for (auto& e : fs::directory_iterator(dir))
    if (e.is_regular_file() && e.path().extension() == ".json") files.push_back(e.path());
  std::sort(files.begin(), files.end());
  json runs = json::object();
  std::size_t violations = 0;
  for (auto& f : files) {
    if (!out.empty() && fs::exists(out) && fs::equivalent(f, out)) continue;
    auto j = read_json(f.string());
    j.erase("timestamp");
    if (j.contains("transcript") && j["transcript"].value("outcome", "") == "strategy-violation") ++violations;
    runs[f.filename().string()] = j;
  }
  emit_json(out, {{"directory", fs::path(dir).filename().string()}, {"files", files.size()},
                  {"strategy_violations", violations}, {"runs", runs}});
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"symmetric CSP constructions, games and relaxations"};
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("--seed", global.seed, "RNG seed")->capture_default_str();
  app.add_flag("--no-timestamp", global.no_timestamp, "omit timestamps from JSON output");

  GenArgs gen;
  auto* g = app.add_subcommand("gen", "write a construction");
  g->add_option("kind", gen.kind)->required()->check(CLI::IsMember({"unsat", "klein", "cops-graph", "random-pair"}));
  g->add_option("-o,--out", gen.out, "output file or prefix")->required();
  g->add_option("--delta", gen.delta);
  g->add_option("--family", gen.family)->check(CLI::IsMember({"k4", "cops", "file"}));
  g->add_option("--k", gen.k);
  g->add_option("--graph", gen.graph);
  g->add_option("--d", gen.d);
  g->add_option("--ell", gen.ell);
  g->add_option("--m", gen.m);
  g->add_option("--r", gen.r);
  g->add_option("--pebbles", gen.pebbles);
  g->add_flag("--girth-override", gen.girth_override);

  std::string lift_in, lift_out;
  std::uint64_t lift_cap = LiftCaps{}.max_vertices;
  auto* l = app.add_subcommand("lift", "apply the label lift");
  l->add_option("-i,--in", lift_in)->required();
  l->add_option("-o,--out", lift_out);
  l->add_option("--max-vertices", lift_cap);

  std::string solve_method, solve_in, solve_out, solve_witness;
  std::uint64_t solve_budget = std::uint64_t{1} << 24;
  auto* s = app.add_subcommand("solve", "exact optimum");
  s->add_option("method", solve_method)->required()->check(CLI::IsMember({"brute", "propagate", "tree"}));
  s->add_option("-i,--in", solve_in)->required();
  s->add_option("-o,--out", solve_out);
  s->add_option("--witness", solve_witness);
  s->add_option("--budget", solve_budget);

  GameArgs game;
  auto* gm = app.add_subcommand("game", "play the bijective pebble game");
  gm->add_option("--u1", game.u1);
  gm->add_option("--u2", game.u2);
  gm->add_option("--pair", game.pair, "sidecar JSON from gen klein or gen random-pair");
  gm->add_option("--duplicator", game.duplicator)->check(CLI::IsMember({"identity", "k2", "cops", "tree"}));
  gm->add_option("--spoiler", game.spoiler)->check(CLI::IsMember({"random", "exhaustive"}));
  gm->add_option("--k", game.k);
  gm->add_option("--rounds", game.rounds);
  gm->add_option("--depth", game.depth);
  gm->add_option("--budget", game.budget);
  gm->add_option("--assert-level", game.assert_level)->check(CLI::IsMember({"off", "edges", "full"}));
  gm->add_option("-o,--out", game.out);

  SdpArgs sdp;
  auto* sd = app.add_subcommand("sdp", "semidefinite relaxations");
  sd->add_option("kind", sdp.kind)->required()->check(CLI::IsMember({"maxcut", "lc", "gap"}));
  sd->add_option("-i,--in", sdp.inputs)->required();
  sd->add_option("-o,--out", sdp.out);
  sd->add_option("--sdpa", sdp.sdpa);
  sd->add_option("--normalize", sdp.normalization)->check(CLI::IsMember({"weight", "count", "none"}));
  sd->add_option("--eta", sdp.eta);
  sd->add_option("--tol", sdp.tol);
  sd->add_option("--restarts", sdp.restarts);
  sd->add_option("--round", sdp.round, "hyperplane rounding trials");
  sd->add_option("--grid", sdp.grid);

  std::string alpha = "1", gamma = "1/4", eps = "1/4";
  bool params_json = false;
  auto* p = app.add_subcommand("params", "parameters for a target ratio");
  p->add_option("--alpha", alpha);
  p->add_option("--gamma", gamma);
  p->add_option("--epsilon", eps);
  p->add_flag("--json", params_json);

  std::string report_dir, report_out;
  auto* rp = app.add_subcommand("report", "summarise a run directory");
  rp->add_option("--dir", report_dir)->required();
  rp->add_option("-o,--out", report_out);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*g) return run_gen(gen);
    if (*l) return run_lift(lift_in, lift_out, lift_cap);
    if (*s) return run_solve(solve_method, solve_in, solve_out, solve_witness, solve_budget);
    if (*gm) return run_game(game);
    if (*sd) return run_sdp(sdp);
    if (*p) return run_params(alpha, gamma, eps, params_json);
    if (*rp) return run_report(report_dir, report_out);
  } catch (const UsageError& e) {
    std::cerr << "usage: " << e.what() << "\n";
    return 1;
  } catch (const StrategyViolation& e) {
    std::cerr << "strategy violation: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 1;
}
