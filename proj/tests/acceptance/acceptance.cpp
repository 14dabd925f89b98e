// Prints one PASS/FAIL line per acceptance criterion; exits non-zero if any fails.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>

#include "brute_matcher.hpp"
#include "fuzz.hpp"
#include "rootgraph/assets.hpp"
#include "rootgraph/bench.hpp"
#include "rootgraph/bst.hpp"
#include "rootgraph/errors.hpp"
#include "rootgraph/oracle.hpp"
#include "rootgraph/text.hpp"
#include "rootgraph_tools/cli.hpp"

using namespace rootgraph;

namespace {

struct Outcome {
  bool pass = true;
  std::vector<std::string> details;
  std::vector<std::string> failures;

  void note(std::string s) { details.push_back(std::move(s)); }
  void expect(bool ok, std::string what) {
    if (!ok) {
      pass = false;
      failures.push_back(std::move(what));
    }
  }
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

const std::string kFixtures = ROOTGRAPH_FIXTURE_DIR;
const std::string kAssets = ROOTGRAPH_ASSET_DIR;

// Max anchors and extension work per find call, across every benchmark row measured here.
std::uint64_t g_max_anchors = 0;
std::uint64_t g_max_extension = 0;
std::size_t g_rows_seen = 0;

BenchRow observe(BenchRow r) {
  g_max_anchors = std::max(g_max_anchors, r.max_anchors_per_call);
  g_max_extension = std::max(g_max_extension, r.max_extension_per_call);
  ++g_rows_seen;
  return r;
}

Outcome differential(BstVariant v, Constraints c, std::uint64_t seeds) {
  Outcome o;
  std::size_t mismatches = 0;
  std::size_t ops = 0;
  for (std::uint64_t seed = 1; seed <= seeds; ++seed) {
    const OpScript w = gen_workload(seed, 300, c);
    ops += w.size();
    if (auto diff = differential_check(w, program(v))) {
      if (mismatches++ == 0) o.failures.push_back("seed " + std::to_string(seed) + ": " + *diff);
    }
  }
  o.expect(mismatches == 0, std::to_string(mismatches) + " mismatching workloads");
  o.note(std::to_string(seeds) + " workloads, " + std::to_string(ops) + " ops, " + std::to_string(mismatches) +
         " mismatches");
  return o;
}

Outcome criterion1() { return differential(BstVariant::sanitized, Constraints::sanitized_safe, 1000); }
Outcome criterion2() { return differential(BstVariant::faithful, Constraints::faithful_safe, 200); }

Outcome criterion3() {
  Outcome o;
  const OpScript fig1 = parse_opscript(assets::fig1_ops());
  const auto built = run_bst(fig1, BstVariant::sanitized);
  o.expect(built.tree.to_string() == "(5 (2 (1) (4)) (7 () (8)))", "example tree: " + built.tree.to_string());

  OpScript with_delete = fig1;
  with_delete.push_back({OpKind::remove, 5});
  const auto expected = o_apply(with_delete);
  const auto after = run_bst(with_delete, BstVariant::sanitized);
  o.expect(expected.two_child_deletes == 1, "d 5 should be a two-child delete");
  o.expect(after.tree == expected.tree, "after d 5: " + after.tree.to_string() + " vs " + expected.tree.to_string());
  o.expect(!after.tree.empty() && after.tree.at(after.tree.top()).key == 4, "top after d 5 is not 4");
  o.note("d 5 -> " + after.tree.to_string());

  const Program& p = program(BstVariant::sanitized);
  std::string fired_list;
  for (int k = 1; k <= 6; ++k) {
    const std::string name = "swap" + std::to_string(k);
    const OpScript ops = parse_opscript(read_file(kFixtures + "/" + name + ".ops"));
    RunOptions opts;
    opts.record_trace = true;
    const auto r = run_bst(ops, p, opts);
    std::map<std::string, int> fired;
    for (std::size_t rule : r.trace) fired[p.rules[rule].name]++;
    bool only = fired[name] == 1;
    for (int j = 1; j <= 6; ++j) {
      if (j != k) only = only && fired["swap" + std::to_string(j)] == 0;
    }
    o.expect(only, name + " fixture does not fire exactly " + name);
    o.expect(r.tree == o_apply(ops).tree, name + " fixture tree differs from the reference");
    if (only) fired_list += (fired_list.empty() ? "" : ",") + name;
  }
  o.note("fixtures fired " + fired_list);
  return o;
}

std::string stated_vs(std::uint64_t got, const std::string& stated) {
  return std::to_string(got) + " (criterion text gives " + stated + ")";
}

Outcome criterion4() {
  Outcome o;
  const auto v = BstVariant::sanitized;
  for (std::size_t n : {100u, 1000u, 10000u}) {
    const auto tree = o_apply(gen_degenerate(n)).tree;
    // Reference path length: edges from the top to the parent of the new key.
    const std::size_t path = tree.height() - 1;
    const auto ins = observe(measure_case(make_case(Shape::degenerate, n, BenchOp::insert), 1, v));
    o.expect(ins.go_apps == path, "degenerate n=" + std::to_string(n) + " go apps " + std::to_string(ins.go_apps));
    for (BenchOp op : {BenchOp::insert, BenchOp::search, BenchOp::remove}) {
      const auto r = op == BenchOp::insert ? ins : observe(measure_case(make_case(Shape::degenerate, n, op), 1, v));
      o.expect(r.rule_apps <= n + 12, "degenerate n=" + std::to_string(n) + " " + std::string(to_string(op)) +
                                          " rule apps " + std::to_string(r.rule_apps));
    }
    if (n == 10000) o.note("insert(n+1) go apps at n=1e4: " + stated_vs(ins.go_apps, "n") + ", oracle path n-1");
  }
  double worst = 0;
  std::uint64_t prev = 0;
  for (std::size_t n : {1000u, 2000u, 4000u, 8000u}) {
    const auto r = observe(measure_case(make_case(Shape::degenerate, n, BenchOp::insert), 1, v));
    if (prev) {
      const double ratio = static_cast<double>(r.rule_apps) / static_cast<double>(prev);
      worst = std::max(worst, std::abs(ratio - 2.0));
    }
    prev = r.rule_apps;
  }
  o.expect(worst <= 0.05, "rule_apps doubling ratio off by " + fmt("%.3f", worst));
  o.note("rule_apps doubling ratio within 2 +- " + fmt("%.3f", worst));

  std::uint64_t last_triple = 0;
  std::int64_t max_step = 0;
  for (unsigned h = 6; h <= 13; ++h) {
    const std::size_t n = (std::size_t{1} << h) - 1;
    const auto s = observe(measure_case(make_case(Shape::balanced, n, BenchOp::search), 1, v));
    o.expect(s.go_apps == h - 1, "balanced h=" + std::to_string(h) + " search go apps " + std::to_string(s.go_apps));
    const auto t = observe(measure_case(make_case(Shape::balanced, n, BenchOp::triple), 1, v));
    if (last_triple) {
      const auto step = static_cast<std::int64_t>(t.rule_apps) - static_cast<std::int64_t>(last_triple);
      max_step = std::max(max_step, step);
      o.expect(step >= 0 && step <= 8, "triple rule apps step " + std::to_string(step) + " at h=" + std::to_string(h));
    }
    last_triple = t.rule_apps;
  }
  o.note("balanced search go apps = h-1 for h=6..13; triple step <= " + std::to_string(max_step));
  return o;
}

Outcome criterion6() {
  Outcome o;
  const auto v = BstVariant::sanitized;
  std::vector<BenchRow> rows;
  for (auto& r : measure(Shape::degenerate, {1000, 2000, 4000, 8000}, kDefaultReps, v,
                         {BenchOp::insert, BenchOp::search, BenchOp::remove})) {
    rows.push_back(observe(r));
  }
  for (auto& r : measure(Shape::balanced, {1023, 2047, 4095, 8191}, kDefaultReps, v, {BenchOp::triple})) {
    rows.push_back(observe(r));
  }
  const auto report = scaling_report(rows);
  for (const auto& s : report.series) {
    std::string ratios;
    for (double r : s.time_ratios) ratios += (ratios.empty() ? "" : "/") + fmt("%.2f", r);
    if (s.shape == Shape::degenerate) {
      o.expect(s.time_pass, std::string(to_string(s.op)) + " time ratios " + ratios);
      o.note(std::string(to_string(s.op)) + " " + ratios);
    } else {
      double first = 0, last = 0;
      for (const auto& r : rows) {
        if (r.shape == Shape::balanced && r.n == 1023) first = r.mean_ns;
        if (r.shape == Shape::balanced && r.n == 8191) last = r.mean_ns;
      }
      o.expect(s.time_pass, "balanced triple 8191/1023 = " + fmt("%.2f", last / first));
      o.note("triple 8191/1023 " + fmt("%.2f", last / first));
    }
  }
  o.note("reps " + std::to_string(kDefaultReps));
  return o;
}

Outcome criterion5() {
  Outcome o;
  // The sweeps of criteria 4 and 6 have run; add a few mid sizes of every op.
  for (BenchOp op : {BenchOp::insert, BenchOp::search, BenchOp::remove, BenchOp::triple}) {
    for (std::size_t n : {10u, 300u, 3000u}) observe(measure_case(make_case(Shape::degenerate, n, op), 1, BstVariant::sanitized));
    for (unsigned h : {3u, 9u}) {
      observe(measure_case(make_case(Shape::balanced, (std::size_t{1} << h) - 1, op), 1, BstVariant::sanitized));
    }
  }
  o.expect(g_max_anchors <= 3, "anchors per call " + std::to_string(g_max_anchors));
  o.expect(g_max_extension <= 32, "extension steps per call " + std::to_string(g_max_extension));
  o.note(std::to_string(g_rows_seen) + " benchmark rows; max anchors/call " + std::to_string(g_max_anchors) +
         ", max extension steps/call " + std::to_string(g_max_extension));
  return o;
}

std::size_t dashed_edges(const HostGraph& g) {
  std::size_t n = 0;
  for (EdgeId e : g.edge_ids()) n += g.edge(e).mark == Mark::dashed;
  return n;
}

Outcome criterion7() {
  Outcome o;
  const auto v = BstVariant::sanitized;
  o.expect(dashed_edges(run_bst(parse_opscript("i 5\ni 5\n"), v).graph) == 0, "dashed edge after duplicate insert");
  o.expect(dashed_edges(run_bst(parse_opscript("i 5\ns 5\n"), v).graph) == 1, "no dashed edge after search");

  const Program loops = parse_program(R"(
    Main = (add; small)!
    add() [ (1(R), empty) | ] => [ (1(R), empty) (2, empty) | (e1, 1, 2, empty) ] interface = {1}
    small() [ (1(R), empty) | ] => [ (1(R), empty) | ] interface = {1} where outdeg(1) < 3
  )");
  HostGraph g;
  g.add_node(Label{}, Mark::none, true);
  const auto lr = run(loops, g);
  o.expect(lr.status == ExecStatus::success && g.node_count() == 3 && g.next_node_id().value == 3,
           "failed loop body not undone");

  const OpScript fig1 = parse_opscript(assets::fig1_ops());
  const auto fr = run_bst(fig1, v);
  const auto roots = fr.graph.roots();
  o.expect(validate_output(fr.graph, fig1).ok() && roots.size() == 1 && roots[0] == NodeId{5},
           "tail not rooted after break");

  const Rule del = parse_rule("del() [ (1(R), empty) | ] => [ | ] interface = {}");
  HostGraph dg = parse_host("[ (n0(R), empty) (n1, empty) | (e0, n0, n1, empty) ]");
  MatchStats ms;
  o.expect(!find_match(del, dg, ms), "dangling match accepted");

  const Rule wild = parse_rule("w(x:int) [ (1(R), x # any) | ] => [ (1(R), 0 # any) | ] interface = {1}");
  bool kept = true;
  for (Mark mk : {Mark::red, Mark::green, Mark::blue, Mark::grey}) {
    HostGraph wg;
    wg.add_node(Label{3}, mk, true);
    auto m = find_match(wild, wg, ms);
    if (!m) {
      kept = false;
      continue;
    }
    apply(wild, *m, wg);
    kept = kept && wg.node(NodeId{0}).mark == mk;
  }
  o.expect(kept, "wildcard mark not preserved");

  const Rule rooted = parse_rule("a() [ (1(R), empty) | ] => [ (1(R), empty) | ] interface = {1}");
  const Rule plain = parse_rule("b() [ (1, empty) | ] => [ (1, empty) | ] interface = {1}");
  HostGraph hr, hp;
  hr.add_node(Label{}, Mark::none, true);
  hp.add_node(Label{});
  o.expect(find_match(rooted, hr, ms) && !find_match(rooted, hp, ms) && find_match(plain, hp, ms) &&
               !find_match(plain, hr, ms),
           "rootedness not matched in both directions");

  std::mt19937_64 rng(12345);
  std::size_t disagreements = 0, with_match = 0;
  const std::size_t cases = 10000;
  for (std::size_t i = 0; i < cases; ++i) {
    Rule r = rgtest::random_rule(rng);
    if (!validate_rule(r).ok()) {
      ++disagreements;
      continue;
    }
    const HostGraph h = i % 2 ? rgtest::planted_host(rng, r, 6) : rgtest::random_host(rng, 6);
    const auto all = rgtest::brute_force_matches(r, h);
    const auto m = find_match(r, h, ms);
    bool same = m.has_value() == !all.empty();
    if (m && same) {
      ++with_match;
      same = std::any_of(all.begin(), all.end(), [&](const rgtest::BruteMatch& b) {
        return b.nodes == m->nodes && b.edges == m->edges && b.assignment == m->assignment;
      });
    }
    disagreements += !same;
  }
  o.expect(disagreements == 0, std::to_string(disagreements) + " brute-force disagreements");
  o.note("brute-force: " + std::to_string(cases) + " cases, " + std::to_string(with_match) + " with a match, " +
         std::to_string(disagreements) + " disagreements");
  return o;
}

Outcome criterion8() {
  Outcome o;
  std::mt19937_64 rng(99);
  std::size_t bad = 0;
  for (int i = 0; i < 1000; ++i) {
    const HostGraph g = rgtest::fuzz_host(rng);
    try {
      const std::string text = print_host(g);
      const HostGraph back = parse_host(text);
      bad += !(same_content(g, back) && print_host(back) == text);
    } catch (const Error&) {
      ++bad;
    }
  }
  o.expect(bad == 0, std::to_string(bad) + " round-trip failures");
  o.note("1000 fuzzed graphs round-trip");

  const std::set<std::string> named = {"make_root", "insert",    "search",      "delete", "next_op", "root",
                                       "add_root",  "add_leaf",  "match",       "go_right1", "go_left1",
                                       "go_left2",  "go_right2", "delete_leaf", "delete_midl", "save_node",
                                       "swap1",     "swap2",     "swap3",       "swap4",  "swap5",   "swap6"};
  const Program f = parse_program(read_file(kAssets + "/bst_faithful.gp2"));
  std::set<std::string> names;
  for (const auto& r : f.rules) names.insert(r.name);
  o.expect(names == named && f.rules.size() == named.size(), "faithful rule set differs from the named rules");
  o.expect(f.procedures.size() == 7, "procedure count " + std::to_string(f.procedures.size()));
  o.note(stated_vs(f.rules.size(), "21") + " rules = the named rule list, " + std::to_string(f.procedures.size()) +
         " procedures");

  std::ostringstream out, err;
  const int code = cli::run_cli({"bst", kAssets + "/fig1.ops", "--print", "tree"}, out, err);
  o.expect(code == 0 && out.str() == "(5 (2 (1) (4)) (7 () (8)))\n", "golden tree output: " + out.str());
  o.note("cli tree output matches golden");
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<int, std::function<Outcome()>>> criteria = {
      {1, criterion1}, {2, criterion2}, {3, criterion3}, {4, criterion4}, {6, criterion6},
      {5, criterion5}, {7, criterion7}, {8, criterion8}};
  std::map<int, std::string> lines;
  bool all = true;
  for (const auto& [id, fn] : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o.expect(false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::string line = "criterion " + std::to_string(id) + ": " + (o.pass ? "PASS" : "FAIL");
    for (const auto& d : o.details) line += " | " + d;
    for (const auto& f : o.failures) line += " | FAILED: " + f;
    line += " | " + fmt("%.1fs", secs);
    lines[id] = line;
    all = all && o.pass;
  }
  for (const auto& [id, line] : lines) std::printf("%s\n", line.c_str());
  return all ? 0 : 1;
}
