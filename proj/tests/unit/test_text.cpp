#include "doctest.h"

#include <limits>
#include <random>

#include "rootgraph/assets.hpp"
#include "rootgraph/errors.hpp"
#include "rootgraph/text.hpp"
#include "fuzz.hpp"

using namespace rootgraph;


TEST_CASE("host graph text round-trips on fuzzed graphs") {
  std::mt19937_64 rng(99);
  for (int i = 0; i < 1000; ++i) {
    const HostGraph g = rgtest::fuzz_host(rng);
    const std::string text = print_host(g);
    INFO(text);
    const HostGraph back = parse_host(text);
    REQUIRE(same_content(g, back));
    REQUIRE(print_host(back) == text);
  }
}

TEST_CASE("host graph parsing") {
  const HostGraph g = parse_host(R"([ (n0(R), "i":5) (n1, 2 # grey) | (e0, n0, n1, empty # dashed) ])");
  CHECK(g.node_count() == 2);
  CHECK(g.node(NodeId{0}).rooted);
  CHECK(g.node(NodeId{0}).label == Label{"i", 5});
  CHECK(g.node(NodeId{1}).mark == Mark::grey);
  CHECK(g.edge(EdgeId{0}).mark == Mark::dashed);
  CHECK(parse_host("[ | ]").node_count() == 0);
  CHECK(parse_host("[ (3, -7) | ]").node(NodeId{3}).label == Label{-7});
  CHECK(print_host(HostGraph{}) == "[ | ]\n");
}

TEST_CASE("host graph errors") {
  CHECK_THROWS_AS(parse_host("[ (n0, 1 # purple) | ]"), ParseError);
  CHECK_THROWS_AS(parse_host("[ (n0, 1 # any) | ]"), ParseError);
  CHECK_THROWS_AS(parse_host("[ (n0, 1 # dashed) | ]"), ParseError);
  CHECK_THROWS_AS(parse_host("[ (n0, 1) | (e0, n0, n0, 1 # grey) ]"), ParseError);
  CHECK_THROWS_AS(parse_host("[ (n0, 1) | (e0, n0, n1, 1) ]"), ParseError);
  CHECK_THROWS_AS(parse_host("[ (n0, 1) (n0, 2) | ]"), ParseError);
  CHECK_THROWS_AS(parse_host("[ (n0, 1) |"), ParseError);
  CHECK_THROWS_AS(parse_host("[ (n0, \"open) | ]"), ParseError);
  try {
    parse_host("[ (n0, 1)\n  (n1, 2 # mauve) | ]");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 2);
  }
}

TEST_CASE("bundled programs parse with the expected declarations") {
  const Program f = parse_program(assets::bst_faithful());
  CHECK(f.rules.size() == 22);
  CHECK(f.procedures.size() == 7);
  const Program s = parse_program(assets::bst_sanitized());
  CHECK(s.rules.size() == 23);
  CHECK(s.procedures.size() == 7);
}

TEST_CASE("printed programs parse back to the same text") {
  for (std::string_view src : {assets::bst_faithful(), assets::bst_sanitized()}) {
    const Program p = parse_program(src);
    const std::string text = print_program(p);
    const Program back = parse_program(text);
    CHECK(print_program(back) == text);
    REQUIRE(back.rules.size() == p.rules.size());
    for (std::size_t i = 0; i < p.rules.size(); ++i) {
      CHECK(print_rule(back.rules[i]) == print_rule(p.rules[i]));
      CHECK(back.rules[i].fast == p.rules[i].fast);
    }
  }
}

TEST_CASE("rule syntax") {
  const Rule r = parse_rule(R"(
    // comment
    go(o:char; x, n, m:int)
    [ (1(R), n # grey) (2, m # grey) (3(R), o:x) | (e1, 1, 2, empty) ]
    =>
    [ (1, n # grey) (2(R), m # grey) (3(R), o:x) | (e1, 1, 2, empty) ]
    interface = {1, 2, 3}
    where m > n and x > n /* trailing */)");
  CHECK(r.name == "go");
  CHECK(r.vars.size() == 4);
  CHECK(r.lhs.nodes.size() == 3);
  CHECK(r.lhs.edges.size() == 1);
  CHECK(r.condition);
  CHECK(r.interface.size() == 3);
  CHECK_NOTHROW(parse_rule("r() [ | ] => [ | ] interface = {}"));
  CHECK_NOTHROW(parse_rule("r(x:int) [ (1, x) | ] => [ (1, x) | ] interface = {1} where not (outdeg(1) = 0 or x <= -2)"));
}

TEST_CASE("unsupported features are reported as such") {
  auto message = [](std::string_view text) -> std::string {
    try {
      parse_program_unchecked(text);
    } catch (const ParseError& e) {
      return e.what();
    }
    return "";
  };
  CHECK(message("Main = a or b") .find("unsupported feature") != std::string::npos);
  CHECK(message("Main = r\nr(x:int) [ (1, x.x) | ] => [ (1, x) | ] interface = {1}").find("unsupported feature") !=
        std::string::npos);
  CHECK(message("Main = r\nr() [ (1, empty) | (e1(B), 1, 1, empty) ] => [ (1, empty) | ] interface = {1}")
            .find("unsupported feature") != std::string::npos);
  CHECK(message("Main = r\nr(x:int) [ (1, x) | ] => [ (1, x) | ] interface = {1} where x * 2 > 1")
            .find("unsupported feature") != std::string::npos);
}

TEST_CASE("op scripts") {
  const OpScript ops = parse_opscript("# list\ni 5\n\ns 5   # find it\nd -3\n");
  REQUIRE(ops.size() == 3);
  CHECK(ops[0] == Instruction{OpKind::insert, 5});
  CHECK(ops[1] == Instruction{OpKind::search, 5});
  CHECK(ops[2] == Instruction{OpKind::remove, -3});
  CHECK(parse_opscript(print_opscript(ops)) == ops);
  CHECK(parse_opscript("").empty());
  CHECK_THROWS_AS(parse_opscript("i 5\nx 9\n"), ParseError);
  CHECK_THROWS_AS(parse_opscript("i five\n"), ParseError);
  CHECK_THROWS_AS(parse_opscript("i\n"), ParseError);
  try {
    parse_opscript("i 1\ni 2\nq 3\n");
  } catch (const ParseError& e) {
    CHECK(e.line() == 3);
  }
}

TEST_CASE("instruction graphs") {
  const HostGraph g = build_instruction_graph(parse_opscript("i 5\ns 5\nd 2\n"));
  CHECK(g.node_count() == 3);
  CHECK(g.edge_count() == 2);
  CHECK(g.roots() == std::vector<NodeId>{NodeId{0}});
  CHECK(g.node(NodeId{0}).label == Label{"i", 5});
  CHECK(g.node(NodeId{1}).label == Label{"s", 5});
  CHECK(g.node(NodeId{2}).label == Label{"d", 2});
  CHECK(g.outdeg(NodeId{2}) == 0);
  const EdgeRec& e = g.edge(g.out_edges(NodeId{0})[0]);
  CHECK(e.target == NodeId{1});
  CHECK(e.mark == Mark::none);
  CHECK(build_instruction_graph({}).node_count() == 0);
}
