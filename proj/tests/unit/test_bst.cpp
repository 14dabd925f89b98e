#include "doctest.h"

#include <fstream>
#include <map>
#include <sstream>

#include "rootgraph/assets.hpp"
#include "rootgraph/bst.hpp"
#include "rootgraph/errors.hpp"
#include "rootgraph/oracle.hpp"
#include "rootgraph/text.hpp"

using namespace rootgraph;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  REQUIRE_MESSAGE(in, path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

OpScript fixture_ops(const std::string& name) {
  return parse_opscript(read_file(std::string(ROOTGRAPH_FIXTURE_DIR) + "/" + name));
}

const OpScript& fig1() {
  static const OpScript ops = parse_opscript(assets::fig1_ops());
  return ops;
}

OpScript with(OpScript ops, std::string_view more) {
  for (const auto& op : parse_opscript(more)) ops.push_back(op);
  return ops;
}

std::size_t dashed_edges(const HostGraph& g) {
  std::size_t n = 0;
  for (EdgeId e : g.edge_ids()) n += g.edge(e).mark == Mark::dashed;
  return n;
}

}  // namespace

TEST_CASE("the example inserts build the expected tree in both variants") {
  for (BstVariant v : {BstVariant::sanitized, BstVariant::faithful}) {
    const auto r = run_bst(fig1(), v);
    CHECK(r.status == ExecStatus::success);
    CHECK(r.tree.to_string() == "(5 (2 (1) (4)) (7 () (8)))");
    CHECK(r.garbage_count == 0);
    CHECK(validate_output(r.graph, fig1()).ok());
    // The tail instruction is rooted at the end.
    const auto roots = r.graph.roots();
    CHECK(std::find(roots.begin(), roots.end(), NodeId{5}) != roots.end());
  }
}

TEST_CASE("two-child delete replaces the key with its predecessor") {
  const OpScript ops = with(fig1(), "d 5\n");
  const auto expected = o_apply(ops).tree;
  CHECK(expected.to_string() == "(4 (2 (1) ()) (7 () (8)))");
  const auto s = run_bst(ops, BstVariant::sanitized);
  CHECK(s.tree == expected);
  CHECK(s.garbage_count == 1);
  const auto report = validate_output(s.graph, ops);
  CHECK(report.ok());
  CHECK(report.stale_roots == 0);
  const auto f = run_bst(ops, BstVariant::faithful);
  CHECK(f.tree == expected);
  CHECK(validate_output(f.graph, ops).stale_roots == 1);
}

TEST_CASE("a duplicate insert leaves no dashed edge, a search leaves one") {
  for (BstVariant v : {BstVariant::sanitized, BstVariant::faithful}) {
    const OpScript dup = parse_opscript("i 5\ni 5\n");
    const auto d = run_bst(dup, v);
    CHECK(dashed_edges(d.graph) == 0);
    CHECK(d.tree.to_string() == "(5)");

    const OpScript found = parse_opscript("i 5\ns 5\n");
    const auto s = run_bst(found, v);
    CHECK(dashed_edges(s.graph) == 1);
    REQUIRE(s.search_hits.size() == 1);
    CHECK(s.search_hits[0].op == 1);
    CHECK(s.search_hits[0].key == 5);
    CHECK(s.graph.node(s.search_hits[0].target).label == Label{5});
  }
}

TEST_CASE("empty script and searches on an empty tree") {
  const auto e = run_bst({}, BstVariant::sanitized);
  CHECK(e.graph.node_count() == 1);
  CHECK(e.tree.empty());
  const auto report = validate_output(e.graph, {});
  CHECK(report.ok());
  CHECK_FALSE(report.notes.empty());

  const OpScript ops = parse_opscript("s 3\nd 3\ni 1\ns 2\n");
  const auto r = run_bst(ops, BstVariant::sanitized);
  CHECK(r.tree.to_string() == "(1)");
  CHECK(r.search_hits.empty());
  CHECK_FALSE(compare_with_oracle(ops, r));
}

TEST_CASE("faithful program leaves stale roots that later inserts trip over") {
  const OpScript ops = parse_opscript("i 5\ns 5\ni 3\n");
  const auto f = run_bst(ops, BstVariant::faithful);
  CHECK(f.tree_error);
  CHECK_FALSE(validate_output(f.graph, ops).ok());
  CHECK(compare_with_oracle(ops, f));
  const auto s = run_bst(ops, BstVariant::sanitized);
  CHECK_FALSE(s.tree_error);
  CHECK_FALSE(compare_with_oracle(ops, s));
  CHECK(validate_output(s.graph, ops).ok());
}

TEST_CASE("each swap rule has a fixture that fires it exactly once") {
  const Program& p = program(BstVariant::sanitized);
  for (int k = 1; k <= 6; ++k) {
    const std::string name = "swap" + std::to_string(k);
    const OpScript ops = fixture_ops(name + ".ops");
    RunOptions o;
    o.record_trace = true;
    const auto r = run_bst(ops, p, o);
    std::map<std::string, std::size_t> fired;
    for (std::size_t rule : r.trace) fired[p.rules[rule].name]++;
    INFO(name);
    for (int j = 1; j <= 6; ++j) {
      CHECK(fired["swap" + std::to_string(j)] == (j == k ? 1u : 0u));
    }
    CHECK(fired["save_node"] == 1);
    CHECK(r.tree == o_apply(ops).tree);
    CHECK(o_apply(ops).two_child_deletes == 1);
    CHECK(validate_output(r.graph, ops).ok());
    const auto f = run_bst(ops, BstVariant::faithful);
    CHECK(f.tree == r.tree);
  }
}

TEST_CASE("sanitized program keeps exactly one root between operations") {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const OpScript ops = gen_workload(seed, 120, Constraints::sanitized_safe, 60);
    const Program& p = program(BstVariant::sanitized);
    const std::size_t next_op = p.find_rule("next_op").value();
    std::size_t steps = 0;
    std::size_t max_roots = 0;
    RunOptions o;
    o.on_apply = [&](std::size_t rule, const HostGraph& g, const MatchStats&) {
      max_roots = std::max(max_roots, g.root_count());
      if (rule != next_op) return;
      ++steps;
      REQUIRE(g.root_count() == 1);
      REQUIRE(g.roots()[0] == NodeId{static_cast<std::uint32_t>(steps)});
    };
    const auto r = run_bst(ops, p, o);
    CHECK(steps == ops.size() - 1);
    CHECK(r.graph.root_count() == 1);
    CHECK(max_roots <= 3);
    CHECK_FALSE(compare_with_oracle(ops, r));
    CHECK(validate_output(r.graph, ops).ok());
  }
}

TEST_CASE("sanitized program differs from the original one only in the documented places") {
  const Program& f = program(BstVariant::faithful);
  const Program& s = program(BstVariant::sanitized);
  REQUIRE(s.rules.size() == f.rules.size() + 1);
  for (const Rule& r : f.rules) {
    const auto i = s.find_rule(r.name);
    REQUIRE(i);
    CHECK(print_rule(s.rules[*i]) == print_rule(r));
  }
  const auto unroot = s.find_rule("unroot");
  REQUIRE(unroot);
  CHECK_FALSE(f.find_rule("unroot"));
  CHECK(print_rule(s.rules[*unroot]) ==
        print_rule(parse_rule("unroot(x:int) [ (1(R), x # grey) | ] => [ (1, x # grey) | ] interface = {1}")));

  for (const char* same : {"Main", "Case1", "Case2", "Case3"}) {
    CHECK(to_string(s.procedures[s.find_procedure(same).value()].body) ==
          to_string(f.procedures[f.find_procedure(same).value()].body));
  }
  const Program expected = parse_program_unchecked(R"(
    Main = skip
    Insert = try root then ({go_right1, go_left1}!; if match then skip else add_leaf; unroot!) else add_root
    Search = try root else skip; {go_right1, go_left1}!; try match; unroot!
    Delete = try root else skip; {go_right1, go_left1}!;
             if match then (try Case1 else (try Case2 else Case3)) else skip; unroot!
  )");
  for (const char* changed : {"Insert", "Search", "Delete"}) {
    const auto& got = s.procedures[s.find_procedure(changed).value()].body;
    CHECK(to_string(got) == to_string(expected.procedures[expected.find_procedure(changed).value()].body));
    CHECK(to_string(got) != to_string(f.procedures[f.find_procedure(changed).value()].body));
  }
}

TEST_CASE("prepared graphs equal the graphs the program builds") {
  const std::vector<OpScript> prefixes = {
      parse_opscript("i 1\n"), fig1(), parse_opscript("i 1\ni 2\ni 3\ni 4\ni 5\ni 6\n"),
      parse_opscript("i 4\ni 2\ni 6\ni 1\ni 3\ni 5\ni 7\n")};
  for (const auto& prefix : prefixes) {
    const auto built = run_bst(prefix, BstVariant::sanitized);
    CHECK(same_content(build_prepared_graph(prefix, {}), built.graph));
    for (std::string_view rest : {"s 1\n", "i 100\ns 100\nd 100\n", "d 1\ni 0\n"}) {
      const OpScript tail = parse_opscript(rest);
      for (BstVariant v : {BstVariant::sanitized, BstVariant::faithful}) {
        HostGraph g = build_prepared_graph(prefix, tail);
        run_command(program(v), resume_command(v), g);
        OpScript all = prefix;
        all.insert(all.end(), tail.begin(), tail.end());
        CHECK(same_content(g, run_bst(all, v).graph));
      }
    }
  }
  CHECK_THROWS_AS(build_prepared_graph({}, {}), std::invalid_argument);
  CHECK_THROWS_AS(build_prepared_graph(parse_opscript("i 1\ns 1\n"), {}), std::invalid_argument);
}

TEST_CASE("tree extraction") {
  CHECK(extract_tree(parse_host("[ (n0, empty # green) | ]")).empty());
  const HostGraph g = parse_host(R"([
    (n0, empty # green) (n1, 5 # grey) (n2, 7 # grey) (n3, 2 # grey) (n4, 3 # red) (n5, 9 # grey)
    | (e0, n0, n1, empty) (e1, n1, n2, empty) (e2, n1, n3, empty) (e3, n1, n4, empty)
      (e4, n5, n2, empty # dashed) ])");
  CHECK(extract_tree(g).to_string() == "(5 (2) (7))");
  CHECK(tree_nodes(g).size() == 3);
  CHECK(garbage_count(g) == 2);
  CHECK_THROWS_AS(extract_tree(parse_host("[ | ]")), MalformedTree);
  CHECK_THROWS_AS(extract_tree(parse_host("[ (n0, empty # green) (n1, empty # green) | ]")), MalformedTree);
  CHECK_THROWS_AS(extract_tree(parse_host(
                      "[ (n0, empty # green) (n1, 1 # grey) (n2, 2 # grey) | (e0, n0, n1, empty) (e1, n0, n2, empty) ]")),
                  MalformedTree);
  CHECK_THROWS_AS(extract_tree(parse_host(
                      "[ (n0, empty # green) (n1, 1 # grey) (n2, 2 # grey) (n3, 3 # grey) (n4, 4 # grey) | "
                      "(e0, n0, n1, empty) (e1, n1, n2, empty) (e2, n1, n3, empty) (e3, n1, n4, empty) ]")),
                  MalformedTree);
}

TEST_CASE("output validation flags broken lists") {
  const OpScript ops = parse_opscript("i 1\ni 2\n");
  const auto good = run_bst(ops, BstVariant::sanitized);
  CHECK(validate_output(good.graph, ops).ok());
  HostGraph unrooted = good.graph;
  unrooted.set_root(NodeId{1}, false);
  CHECK_FALSE(validate_output(unrooted, ops).ok());
  HostGraph head_rooted = good.graph;
  head_rooted.set_root(NodeId{0}, true);
  CHECK_FALSE(validate_output(head_rooted, ops).ok());
  CHECK_FALSE(validate_output(good.graph, parse_opscript("i 1\ni 3\n")).ok());
  CHECK_FALSE(validate_output(good.graph, parse_opscript("i 1\n")).ok());
}

TEST_CASE("differential check on a handful of seeds") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    CHECK_FALSE(differential_check(gen_workload(seed, 200, Constraints::sanitized_safe),
                                   program(BstVariant::sanitized)));
    CHECK_FALSE(differential_check(gen_workload(seed, 200, Constraints::faithful_safe),
                                   program(BstVariant::faithful)));
  }
}

TEST_CASE("a broken program is caught and its counterexample shrunk") {
  const Program bad = parse_program(read_file(std::string(ROOTGRAPH_FIXTURE_DIR) + "/mutated_go_left1.gp2"));
  OpScript failing;
  for (std::uint64_t seed = 1; seed <= 20 && failing.empty(); ++seed) {
    const OpScript ops = gen_workload(seed, 300, Constraints::sanitized_safe);
    if (differential_check(ops, bad)) failing = ops;
  }
  REQUIRE_FALSE(failing.empty());
  const OpScript small = minimize_counterexample(failing, bad, Constraints::sanitized_safe);
  CHECK(small.size() < failing.size());
  CHECK(differential_check(small, bad));
  CHECK_FALSE(check_constraints(small, Constraints::sanitized_safe));
  for (std::size_t i = 0; i < small.size(); ++i) {
    OpScript fewer = small;
    fewer.erase(fewer.begin() + static_cast<std::ptrdiff_t>(i));
    if (!check_constraints(fewer, Constraints::sanitized_safe)) CHECK_FALSE(differential_check(fewer, bad));
  }
}

TEST_CASE("variant names") {
  CHECK(parse_variant("faithful") == BstVariant::faithful);
  CHECK(parse_variant("sanitized") == BstVariant::sanitized);
  CHECK_FALSE(parse_variant("other"));
  CHECK(program_text(BstVariant::sanitized) == assets::bst_sanitized());
}
