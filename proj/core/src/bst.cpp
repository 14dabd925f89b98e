#include "rootgraph/bst.hpp"

#include <algorithm>
#include <set>
#include <unordered_set>

#include "rootgraph/assets.hpp"
#include "rootgraph/errors.hpp"

namespace rootgraph {

std::string_view to_string(BstVariant v) {
  return v == BstVariant::faithful ? "faithful" : "sanitized";
}

std::optional<BstVariant> parse_variant(std::string_view text) {
  if (text == "faithful") return BstVariant::faithful;
  if (text == "sanitized") return BstVariant::sanitized;
  return std::nullopt;
}

std::string_view program_text(BstVariant v) {
  return v == BstVariant::faithful ? assets::bst_faithful() : assets::bst_sanitized();
}

const Program& program(BstVariant v) {
  static const Program faithful = parse_program(assets::bst_faithful());
  static const Program sanitized = parse_program(assets::bst_sanitized());
  return v == BstVariant::faithful ? faithful : sanitized;
}

namespace {

Command make_resume(BstVariant v) {
  const Program& p = program(v);
  const Command& main = p.main().body;
  // Main = make_root; (body)!
  if (main.kind != Command::Kind::seq || main.children.size() != 2 ||
      main.children[1].kind != Command::Kind::loop) {
    throw EngineFault("unexpected shape of Main");
  }
  Command c = Command::seq({Command::rule_call("next_op"), main.children[1]});
  p.resolve(c, false);
  return c;
}

bool is_instruction(const NodeRec& n) {
  return n.mark == Mark::none && n.label.size() == 2 && n.label.atoms[0].is_string() &&
         n.label.atoms[1].is_int() &&
         (n.label.atoms[0].as_string() == "i" || n.label.atoms[0].as_string() == "s" ||
          n.label.atoms[0].as_string() == "d");
}

std::optional<NodeId> green_node(const HostGraph& g) {
  const auto& greens = g.nodes_with_mark(Mark::green);
  if (greens.empty()) return std::nullopt;
  if (greens.size() > 1) throw MalformedTree("more than one green node");
  return *greens.begin();
}

Int grey_key(const HostGraph& g, NodeId id) {
  const Label& l = g.node(id).label;
  if (l.size() != 1 || !l.atoms[0].is_int()) {
    throw MalformedTree("tree node n" + std::to_string(id.value) + " has non-integer label " +
                        l.to_string());
  }
  return l.atoms[0].as_int();
}

std::vector<NodeId> grey_children(const HostGraph& g, NodeId id) {
  std::vector<NodeId> out;
  for (EdgeId e : g.out_edges(id)) {
    const EdgeRec& rec = g.edge(e);
    if (rec.mark != Mark::none) continue;
    if (g.node(rec.target).mark == Mark::grey) out.push_back(rec.target);
  }
  return out;
}

// Walks the tree, filling `out` and returning the top index.
KeyTree::Index read_subtree(const HostGraph& g, NodeId id, KeyTree& out,
                            std::unordered_set<std::uint32_t>& seen,
                            std::vector<NodeId>* nodes) {
  if (!seen.insert(id.value).second) {
    throw MalformedTree("node n" + std::to_string(id.value) + " is reachable twice");
  }
  if (nodes) nodes->push_back(id);
  const Int key = grey_key(g, id);
  const KeyTree::Index here = out.add(key);
  auto children = grey_children(g, id);
  if (children.size() > 2) {
    throw MalformedTree("node n" + std::to_string(id.value) + " has " +
                        std::to_string(children.size()) + " children");
  }
  KeyTree::Index left = KeyTree::kNone;
  KeyTree::Index right = KeyTree::kNone;
  std::vector<std::pair<Int, NodeId>> keyed;
  for (NodeId c : children) keyed.emplace_back(grey_key(g, c), c);
  std::sort(keyed.begin(), keyed.end());
  for (const auto& [k, c] : keyed) {
    if (k == key) {
      throw MalformedTree("child n" + std::to_string(c.value) + " repeats key " +
                          std::to_string(key));
    }
  }
  if (keyed.size() == 2 && !(keyed[0].first < key && key < keyed[1].first)) {
    throw MalformedTree("children of n" + std::to_string(id.value) + " are on the same side");
  }
  for (const auto& [k, c] : keyed) {
    const KeyTree::Index sub = read_subtree(g, c, out, seen, nodes);
    (k < key ? left : right) = sub;
  }
  out.at(here).left = left;
  out.at(here).right = right;
  return here;
}

KeyTree read_tree(const HostGraph& g, std::vector<NodeId>* nodes) {
  auto green = green_node(g);
  if (!green) throw MalformedTree("no green node");
  const auto tops = grey_children(g, *green);
  if (tops.size() > 1) throw MalformedTree("green node has " + std::to_string(tops.size()) + " children");
  KeyTree t;
  if (tops.empty()) return t;
  std::unordered_set<std::uint32_t> seen;
  t.set_top(read_subtree(g, tops.front(), t, seen, nodes));
  return t;
}

}  // namespace

const Command& resume_command(BstVariant v) {
  static const Command faithful = make_resume(BstVariant::faithful);
  static const Command sanitized = make_resume(BstVariant::sanitized);
  return v == BstVariant::faithful ? faithful : sanitized;
}

KeyTree extract_tree(const HostGraph& g) { return read_tree(g, nullptr); }

std::vector<NodeId> tree_nodes(const HostGraph& g) {
  std::vector<NodeId> nodes;
  read_tree(g, &nodes);
  return nodes;
}

std::vector<SearchHit> search_hits(const HostGraph& g) {
  std::vector<SearchHit> hits;
  for (EdgeId e : g.edge_ids()) {
    const EdgeRec& rec = g.edge(e);
    if (rec.mark != Mark::dashed) continue;
    const NodeRec& src = g.node(rec.source);
    if (!is_instruction(src) || src.label.atoms[0].as_string() != "s") continue;
    hits.push_back(SearchHit{rec.source.value, src.label.atoms[1].as_int(), rec.target});
  }
  std::sort(hits.begin(), hits.end(),
            [](const SearchHit& a, const SearchHit& b) { return a.op < b.op; });
  return hits;
}

std::size_t garbage_count(const HostGraph& g) {
  std::set<NodeId> in_tree;
  try {
    for (NodeId n : tree_nodes(g)) in_tree.insert(n);
  } catch (const MalformedTree&) {
    // Fall back to plain reachability so the census is still meaningful.
    auto green = g.nodes_with_mark(Mark::green);
    std::vector<NodeId> stack(green.begin(), green.end());
    while (!stack.empty()) {
      const NodeId n = stack.back();
      stack.pop_back();
      for (NodeId c : grey_children(g, n)) {
        if (in_tree.insert(c).second) stack.push_back(c);
      }
    }
  }
  std::size_t count = 0;
  for (NodeId id : g.node_ids()) {
    const NodeRec& n = g.node(id);
    if (is_instruction(n) || n.mark == Mark::green || in_tree.count(id)) continue;
    ++count;
  }
  return count;
}

BstRunResult run_bst(const OpScript& ops, BstVariant variant, const RunOptions& options) {
  return run_bst(ops, program(variant), options);
}

BstRunResult run_bst(const OpScript& ops, const Program& p, const RunOptions& options) {
  const auto next_op_rule = p.find_rule("next_op");
  if (!next_op_rule) throw ValidationError("program has no next_op rule");
  const std::size_t next_op = *next_op_rule;
  BstRunResult result;
  result.graph = build_instruction_graph(ops);

  RunOptions opts = options;
  MatchStats last;
  opts.on_apply = [&](std::size_t rule, const HostGraph& g, const MatchStats& so_far) {
    if (rule == next_op) {
      MatchStats delta = so_far;
      delta.find_calls -= last.find_calls;
      delta.anchors_tried -= last.anchors_tried;
      delta.extension_steps -= last.extension_steps;
      delta.matches_found -= last.matches_found;
      delta.applications -= last.applications;
      result.per_op.push_back(delta);
      last = so_far;
    }
    if (options.on_apply) options.on_apply(rule, g, so_far);
  };

  RunResult run = rootgraph::run(p, result.graph, opts);
  result.status = run.status;
  result.stats = run.stats;
  if (!ops.empty()) {
    MatchStats delta = run.stats;
    delta.find_calls -= last.find_calls;
    delta.anchors_tried -= last.anchors_tried;
    delta.extension_steps -= last.extension_steps;
    delta.matches_found -= last.matches_found;
    delta.applications -= last.applications;
    result.per_op.push_back(delta);
  }
  result.rule_applications = std::move(run.rule_applications);
  result.trace = std::move(run.trace);
  try {
    result.tree = extract_tree(result.graph);
  } catch (const MalformedTree& e) {
    result.tree_error = e.what();
  }
  result.search_hits = search_hits(result.graph);
  result.garbage_count = garbage_count(result.graph);
  return result;
}

std::string OutputReport::to_string() const {
  std::string out;
  for (const auto& v : violations) out += "violation: " + v + "\n";
  for (const auto& n : notes) out += "note: " + n + "\n";
  out += "garbage nodes: " + std::to_string(garbage_count) + "\n";
  out += "stale roots: " + std::to_string(stale_roots) + "\n";
  out += ok() ? "status: ok\n" : "status: " + std::to_string(violations.size()) + " violation(s)\n";
  return out;
}

OutputReport validate_output(const HostGraph& g, const OpScript& ops) {
  OutputReport r;
  const auto node_name = [](NodeId id) { return "n" + std::to_string(id.value); };

  // Instruction list: node k encodes op k, edge k -> k+1, tail rooted.
  std::optional<NodeId> tail;
  if (ops.empty()) {
    r.notes.push_back("no instruction list (empty op script)");
  }
  for (std::size_t k = 0; k < ops.size(); ++k) {
    const NodeId id{static_cast<std::uint32_t>(k)};
    const Label expected{Atom(std::string(1, static_cast<char>(ops[k].kind))), Atom(ops[k].key)};
    if (!g.contains(id) || g.node(id).label != expected || g.node(id).mark != Mark::none) {
      r.violations.push_back("instruction " + std::to_string(k) + " missing or altered");
      continue;
    }
    if (k + 1 < ops.size()) {
      bool linked = false;
      for (EdgeId e : g.out_edges(id)) {
        const EdgeRec& rec = g.edge(e);
        if (rec.target.value == k + 1 && rec.mark == Mark::none && rec.label.empty()) linked = true;
      }
      if (!linked) r.violations.push_back("instruction list broken after " + node_name(id));
    }
    tail = id;
  }
  if (tail && ops.size() > 0 && !g.node(*tail).rooted) {
    r.violations.push_back("tail instruction " + node_name(*tail) + " is not rooted");
  }

  // Green node and tree.
  const auto& greens = g.nodes_with_mark(Mark::green);
  if (greens.size() != 1) {
    r.violations.push_back("expected one green node, found " + std::to_string(greens.size()));
  }
  try {
    const KeyTree t = extract_tree(g);
    if (!t.is_search_tree()) r.violations.push_back("tree violates search order");
    r.notes.push_back("tree: " + t.to_string());
  } catch (const MalformedTree& e) {
    r.violations.push_back(std::string("tree malformed: ") + e.what());
  }

  // Dashed edges only from search instructions.
  for (EdgeId e : g.edge_ids()) {
    const EdgeRec& rec = g.edge(e);
    if (rec.mark != Mark::dashed) continue;
    const NodeRec& src = g.node(rec.source);
    if (!is_instruction(src) || src.label.atoms[0].as_string() != "s") {
      r.violations.push_back("dashed edge e" + std::to_string(e.value) + " leaves " +
                             node_name(rec.source) + ", not a search instruction");
    }
  }

  for (NodeId id : g.nodes_with_mark(Mark::red)) {
    r.violations.push_back("leftover red node " + node_name(id));
  }

  for (NodeId id : g.roots()) {
    if (tail && id == *tail) continue;
    ++r.stale_roots;
    const NodeRec& n = g.node(id);
    r.violations.push_back("stale root " + node_name(id) + " (" + std::string(to_string(n.mark)) +
                           " " + n.label.to_string() + ")");
  }

  r.garbage_count = garbage_count(g);
  if (r.garbage_count > 0) {
    r.notes.push_back(std::to_string(r.garbage_count) + " garbage node(s) left by deletions");
  }
  return r;
}

std::optional<std::string> compare_with_oracle(const OpScript& ops, const BstRunResult& run) {
  const OracleResult expected = o_apply(ops);
  if (run.tree_error) return "no readable tree: " + *run.tree_error;
  if (run.status != ExecStatus::success) {
    return "program ended with " + std::string(to_string(run.status));
  }
  if (!(run.tree == expected.tree)) {
    return "tree " + run.tree.to_string() + " differs from expected " + expected.tree.to_string();
  }
  std::size_t next_hit = 0;
  for (std::size_t i = 0; i < ops.size(); ++i) {
    while (next_hit < run.search_hits.size() && run.search_hits[next_hit].op < i) ++next_hit;
    const bool hit = next_hit < run.search_hits.size() && run.search_hits[next_hit].op == i;
    if (ops[i].kind != OpKind::search) {
      if (hit) return "op " + std::to_string(i) + " is not a search but has a hit";
      continue;
    }
    if (hit != expected.outcomes[i]) {
      return "op " + std::to_string(i) + " (s " + std::to_string(ops[i].key) + "): " +
             (hit ? "hit, but the key is absent" : "no hit, but the key is present");
    }
    if (hit) {
      const NodeId target = run.search_hits[next_hit].target;
      if (!run.graph.contains(target) || run.graph.node(target).label != Label{Atom(ops[i].key)}) {
        return "op " + std::to_string(i) + " hit a node without key " + std::to_string(ops[i].key);
      }
    }
    if (hit && next_hit + 1 < run.search_hits.size() && run.search_hits[next_hit + 1].op == i) {
      return "op " + std::to_string(i) + " has more than one hit";
    }
  }
  return std::nullopt;
}

std::optional<std::string> differential_check(const OpScript& ops, const Program& program) {
  try {
    return compare_with_oracle(ops, run_bst(ops, program));
  } catch (const std::exception& e) {
    return std::string("run failed: ") + e.what();
  }
}

OpScript minimize_counterexample(OpScript ops, const Program& program, Constraints constraints) {
  bool shrunk = true;
  while (shrunk) {
    shrunk = false;
    for (std::size_t i = ops.size(); i-- > 0;) {
      OpScript candidate = ops;
      candidate.erase(candidate.begin() + static_cast<std::ptrdiff_t>(i));
      if (check_constraints(candidate, constraints)) continue;
      if (!differential_check(candidate, program)) continue;
      ops = std::move(candidate);
      shrunk = true;
    }
  }
  return ops;
}

HostGraph build_prepared_graph(const OpScript& prefix, const OpScript& rest) {
  if (prefix.empty()) throw std::invalid_argument("prefix must not be empty");
  OpScript all = prefix;
  all.insert(all.end(), rest.begin(), rest.end());
  HostGraph g = build_instruction_graph(all);
  g.set_root(NodeId{0}, false);
  g.set_root(NodeId{static_cast<std::uint32_t>(prefix.size() - 1)}, true);

  const NodeId green = g.add_node(Label{}, Mark::green);
  struct Slot {
    Int key;
    NodeId id;
    std::optional<NodeId> left;
    std::optional<NodeId> right;
  };
  std::vector<Slot> tree;
  for (const auto& op : prefix) {
    if (op.kind != OpKind::insert) throw std::invalid_argument("prefix must contain inserts only");
    const NodeId id = g.add_node(Label{Atom(op.key)}, Mark::grey);
    if (tree.empty()) {
      g.add_edge(green, id, Label{});
      tree.push_back({op.key, id, {}, {}});
      continue;
    }
    std::size_t cur = 0;
    for (;;) {
      Slot& s = tree[cur];
      if (op.key == s.key) throw std::invalid_argument("prefix repeats key " + std::to_string(op.key));
      auto& next = op.key < s.key ? s.left : s.right;
      if (!next) {
        next = id;
        g.add_edge(s.id, id, Label{});
        break;
      }
      cur = next->value - tree.front().id.value;
    }
    tree.push_back({op.key, id, {}, {}});
  }
  return g;
}

}  // namespace rootgraph
