#include "doctest.h"

#include <random>
#include <set>

#include "rootgraph/key_tree.hpp"
#include "rootgraph/oracle.hpp"
#include "rootgraph/text.hpp"

using namespace rootgraph;

namespace {

KeyTree build(std::initializer_list<Int> keys) {
  KeyTree t;
  for (Int k : keys) o_insert(t, k);
  return t;
}

}  // namespace

TEST_CASE("tree printing and structural equality") {
  const KeyTree fig1 = build({5, 2, 7, 1, 4, 8});
  CHECK(fig1.to_string() == "(5 (2 (1) (4)) (7 () (8)))");
  CHECK(fig1 == KeyTree::make(5, KeyTree::make(2, KeyTree::leaf(1), KeyTree::leaf(4)),
                              KeyTree::make(7, {}, KeyTree::leaf(8))));
  CHECK_FALSE(fig1 == build({5, 2, 7, 1, 4}));
  CHECK(KeyTree{}.to_string() == "()");
  CHECK(fig1.size() == 6);
  CHECK(fig1.height() == 3);
  CHECK(fig1.keys_inorder() == std::vector<Int>{1, 2, 4, 5, 7, 8});
  CHECK(fig1.is_search_tree());
  CHECK_FALSE(KeyTree::make(5, KeyTree::leaf(6), {}).is_search_tree());
}

TEST_CASE("insert and search") {
  KeyTree t;
  CHECK(o_insert(t, 3));
  CHECK_FALSE(o_insert(t, 3));
  CHECK(o_search(t, 3));
  CHECK_FALSE(o_search(t, 4));
  CHECK_FALSE(o_search(KeyTree{}, 0));
}

TEST_CASE("deletion cases") {
  KeyTree t = build({5, 2, 7, 1, 4, 8});
  CHECK(o_delete(t, 5) == DeleteCase::two_children);
  CHECK(t.to_string() == "(4 (2 (1) ()) (7 () (8)))");
  CHECK(o_delete(t, 7) == DeleteCase::one_child);
  CHECK(t.to_string() == "(4 (2 (1) ()) (8))");
  CHECK(o_delete(t, 1) == DeleteCase::leaf);
  CHECK(t.to_string() == "(4 (2) (8))");
  CHECK(o_delete(t, 6) == DeleteCase::absent);
  // Predecessor deeper in the left subtree, with a left child of its own.
  KeyTree u = build({10, 5, 15, 7, 9, 8});
  CHECK(o_delete(u, 10) == DeleteCase::two_children);
  CHECK(u.to_string() == "(9 (5 () (7 () (8))) (15))");
  KeyTree single = build({1});
  CHECK(o_delete(single, 1) == DeleteCase::leaf);
  CHECK(single.empty());
}

TEST_CASE("oracle keeps the search-tree invariant and the key set of a reference set") {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<int> key(0, 40), kind(0, 2);
  for (int round = 0; round < 200; ++round) {
    KeyTree t;
    std::set<Int> ref;
    for (int i = 0; i < 200; ++i) {
      const Int k = key(rng);
      switch (kind(rng)) {
        case 0: CHECK(o_insert(t, k) == ref.insert(k).second); break;
        case 1: CHECK(o_search(t, k) == (ref.count(k) == 1)); break;
        default: CHECK((o_delete(t, k) != DeleteCase::absent) == (ref.erase(k) == 1)); break;
      }
    }
    REQUIRE(t.is_search_tree());
    CHECK(t.keys_inorder() == std::vector<Int>(ref.begin(), ref.end()));
  }
}

TEST_CASE("o_apply reports outcomes and delete cases") {
  const auto r = o_apply(parse_opscript("i 5\ni 2\ni 7\ni 5\ns 2\ns 3\nd 5\nd 2\nd 9\n"));
  CHECK(r.outcomes == std::vector<bool>{true, true, true, false, true, false, true, true, false});
  CHECK(r.two_child_deletes == 1);
  CHECK(r.one_child_deletes == 1);  // 2 took 5's place with 7 below it
  CHECK(r.leaf_deletes == 0);
  CHECK(r.tree.to_string() == "(7)");
}

TEST_CASE("workloads are deterministic and satisfy their constraints") {
  for (Constraints c : {Constraints::sanitized_safe, Constraints::faithful_safe, Constraints::unrestricted}) {
    for (std::uint64_t seed = 1; seed <= 50; ++seed) {
      const OpScript a = gen_workload(seed, 300, c);
      CHECK(a == gen_workload(seed, 300, c));
      CHECK(a.size() == 300);
      CHECK_FALSE(check_constraints(a, c));
      for (const auto& op : a) {
        CHECK(op.key >= 0);
        CHECK(op.key <= kDefaultMaxKey);
      }
    }
  }
  CHECK_FALSE(gen_workload(1, 300, Constraints::sanitized_safe) == gen_workload(2, 300, Constraints::sanitized_safe));
  CHECK_THROWS_AS(gen_workload(1, 50, Constraints::faithful_safe, 10), std::invalid_argument);
}

TEST_CASE("constraint checks") {
  const OpScript reused = parse_opscript("i 1\nd 1\ni 1\n");
  CHECK(check_constraints(reused, Constraints::faithful_safe));
  CHECK_FALSE(check_constraints(parse_opscript("i 1\ni 2\nd 1\ns 2\n"), Constraints::faithful_safe));
  CHECK(check_constraints(parse_opscript("i 1\ns 1\ni 2\n"), Constraints::faithful_safe));
  CHECK(check_constraints(parse_opscript("d 4\n"), Constraints::faithful_safe));
  CHECK_FALSE(check_constraints(reused, Constraints::unrestricted));
  CHECK(parse_constraints("faithful-safe") == Constraints::faithful_safe);
  CHECK_FALSE(parse_constraints("strict"));
}
