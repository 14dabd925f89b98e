#include "rootgraph/rule_engine.hpp"

#include <algorithm>

#include "rootgraph/errors.hpp"

namespace rootgraph {

MatchStats& MatchStats::operator+=(const MatchStats& other) {
  find_calls += other.find_calls;
  anchors_tried += other.anchors_tried;
  extension_steps += other.extension_steps;
  matches_found += other.matches_found;
  applications += other.applications;
  max_anchors_per_call = std::max(max_anchors_per_call, other.max_anchors_per_call);
  max_extension_per_call = std::max(max_extension_per_call, other.max_extension_per_call);
  return *this;
}

namespace {

constexpr NodeId kUnbound{~std::uint32_t{0}};

class Search {
 public:
  Search(const Rule& rule, const HostGraph& graph)
      : rule_(rule),
        graph_(graph),
        node_map_(rule.lhs.nodes.size(), kUnbound),
        edge_map_(rule.lhs.edges.size(), EdgeId{~std::uint32_t{0}}),
        edge_bound_(rule.lhs.edges.size(), false),
        assignment_(rule.vars.size()) {}

  bool run() { return match_component(0); }

  Match take() { return Match{std::move(node_map_), std::move(edge_map_), std::move(assignment_)}; }

  std::uint64_t anchors = 0;
  std::uint64_t extension = 0;

 private:
  bool host_node_used(NodeId h) const {
    return std::find(bound_hosts_.begin(), bound_hosts_.end(), h) != bound_hosts_.end();
  }

  bool host_edge_used(EdgeId h) const {
    for (std::size_t i = 0; i < edge_map_.size(); ++i) {
      if (edge_bound_[i] && edge_map_[i] == h) return true;
    }
    return false;
  }

  bool bind_node(std::size_t p, NodeId h) {
    if (host_node_used(h)) return false;
    const PatternNode& pn = rule_.lhs.nodes[p];
    const NodeRec& rec = graph_.node(h);
    if (rec.rooted != pn.rooted) return false;
    if (!mark_admits(pn.mark, rec.mark)) return false;
    if (!unify_into(pn.label, rec.label, rule_.vars, assignment_, trail_)) return false;
    node_map_[p] = h;
    bound_hosts_.push_back(h);
    return true;
  }

  void unbind_node(std::size_t p, std::size_t trail_mark) {
    node_map_[p] = kUnbound;
    bound_hosts_.pop_back();
    undo_trail(trail_mark);
  }

  bool bind_edge(std::size_t p, EdgeId h) {
    if (host_edge_used(h)) return false;
    const PatternEdge& pe = rule_.lhs.edges[p];
    const EdgeRec& rec = graph_.edge(h);
    if (!mark_admits(pe.mark, rec.mark)) return false;
    if (!unify_into(pe.label, rec.label, rule_.vars, assignment_, trail_)) return false;
    edge_map_[p] = h;
    edge_bound_[p] = true;
    return true;
  }

  void unbind_edge(std::size_t p, std::size_t trail_mark) {
    edge_bound_[p] = false;
    undo_trail(trail_mark);
  }

  void undo_trail(std::size_t mark) {
    while (trail_.size() > mark) {
      assignment_.unbind(trail_.back());
      trail_.pop_back();
    }
  }

  std::size_t candidate_count(const PatternNode& pn) const {
    if (pn.mark == Mark::any) return graph_.node_count();
    return graph_.nodes_with_mark(pn.mark).size();
  }

  bool try_start(std::size_t ci, const StartOption& opt, NodeId h) {
    if (ci == 0) {
      ++anchors;
    } else {
      ++extension;
    }
    const std::size_t mark = trail_.size();
    if (!bind_node(opt.start, h)) return false;
    if (match_steps(ci, opt, 0)) return true;
    unbind_node(opt.start, mark);
    return false;
  }

  bool match_component(std::size_t ci) {
    if (ci == rule_.plan.size()) return finish();
    const ComponentPlan& cp = rule_.plan[ci];
    if (cp.rooted) {
      const StartOption& opt = cp.options.front();
      const auto order = graph_.root_order();
      for (auto it = order.rbegin(); it != order.rend(); ++it) {
        if (try_start(ci, opt, *it)) return true;
      }
      return false;
    }
    const StartOption* best = &cp.options.front();
    std::size_t best_count = candidate_count(rule_.lhs.nodes[best->start]);
    for (const auto& opt : cp.options) {
      const std::size_t c = candidate_count(rule_.lhs.nodes[opt.start]);
      if (c < best_count) {
        best = &opt;
        best_count = c;
      }
    }
    const PatternNode& pn = rule_.lhs.nodes[best->start];
    if (pn.mark == Mark::any) {
      for (NodeId h : graph_.node_ids()) {
        if (try_start(ci, *best, h)) return true;
      }
      return false;
    }
    for (NodeId h : graph_.nodes_with_mark(pn.mark)) {
      if (try_start(ci, *best, h)) return true;
    }
    return false;
  }

  bool match_steps(std::size_t ci, const StartOption& opt, std::size_t si) {
    if (si == opt.steps.size()) return match_component(ci + 1);
    const SearchStep& step = opt.steps[si];
    const PatternEdge& pe = rule_.lhs.edges[step.edge];
    switch (step.kind) {
      case SearchStep::Kind::check_edge: {
        const NodeId src = node_map_[pe.source];
        const NodeId tgt = node_map_[pe.target];
        for (EdgeId h : graph_.out_edges(src)) {
          ++extension;
          if (graph_.edge(h).target != tgt) continue;
          const std::size_t mark = trail_.size();
          if (!bind_edge(step.edge, h)) continue;
          if (match_steps(ci, opt, si + 1)) return true;
          unbind_edge(step.edge, mark);
        }
        return false;
      }
      case SearchStep::Kind::out_edge:
      case SearchStep::Kind::in_edge: {
        const bool forward = step.kind == SearchStep::Kind::out_edge;
        const NodeId from = node_map_[forward ? pe.source : pe.target];
        const std::size_t other = forward ? pe.target : pe.source;
        const auto edges = forward ? graph_.out_edges(from) : graph_.in_edges(from);
        for (EdgeId h : edges) {
          ++extension;
          const EdgeRec& rec = graph_.edge(h);
          const NodeId w = forward ? rec.target : rec.source;
          const std::size_t mark = trail_.size();
          if (!bind_edge(step.edge, h)) continue;
          if (bind_node(other, w)) {
            if (match_steps(ci, opt, si + 1)) return true;
            node_map_[other] = kUnbound;
            bound_hosts_.pop_back();
          }
          unbind_edge(step.edge, mark);
        }
        return false;
      }
    }
    return false;
  }

  bool finish() {
    for (std::size_t p = 0; p < rule_.lhs.nodes.size(); ++p) {
      if (rule_.lhs_to_rhs[p]) continue;
      const NodeId h = node_map_[p];
      if (graph_.indeg(h) + graph_.outdeg(h) != rule_.incident_edges[p]) return false;
    }
    if (!rule_.condition) return true;
    DegreeQuery degrees = [this](std::size_t p, DegreeKind kind) {
      const NodeId h = node_map_[p];
      return kind == DegreeKind::out ? graph_.outdeg(h) : graph_.indeg(h);
    };
    return eval_cond(rule_.condition, assignment_, degrees);
  }

  const Rule& rule_;
  const HostGraph& graph_;
  std::vector<NodeId> node_map_;
  std::vector<NodeId> bound_hosts_;
  std::vector<EdgeId> edge_map_;
  std::vector<bool> edge_bound_;
  Assignment assignment_;
  std::vector<VarIndex> trail_;
};

}  // namespace

std::optional<Match> find_match(const Rule& rule, const HostGraph& graph, MatchStats& stats) {
  if (!rule.validated) throw EngineFault("find_match: rule " + rule.name + " is not validated");
  Search search(rule, graph);
  const bool found = search.run();
  ++stats.find_calls;
  stats.anchors_tried += search.anchors;
  stats.extension_steps += search.extension;
  stats.max_anchors_per_call = std::max(stats.max_anchors_per_call, search.anchors);
  stats.max_extension_per_call = std::max(stats.max_extension_per_call, search.extension);
  if (!found) return std::nullopt;
  ++stats.matches_found;
  return search.take();
}

std::vector<NodeId> apply(const Rule& rule, const Match& match, HostGraph& graph) {
  const Assignment& a = match.assignment;
  for (std::size_t i = 0; i < rule.lhs.edges.size(); ++i) {
    if (!rule.preserved_edge[i]) graph.delete_edge(match.edges[i]);
  }
  for (std::size_t i = 0; i < rule.lhs.nodes.size(); ++i) {
    if (!rule.lhs_to_rhs[i]) graph.delete_node(match.nodes[i]);
  }

  std::vector<NodeId> rhs_nodes(rule.rhs.nodes.size());
  for (std::size_t ri = 0; ri < rule.rhs.nodes.size(); ++ri) {
    const PatternNode& pn = rule.rhs.nodes[ri];
    if (!rule.rhs_to_lhs[ri]) continue;
    const NodeId h = match.nodes[*rule.rhs_to_lhs[ri]];
    rhs_nodes[ri] = h;
    graph.set_label(h, eval_pattern(pn.label, a));
    if (pn.mark != Mark::any) graph.set_mark(h, pn.mark);
    graph.set_root(h, pn.rooted);
  }
  for (std::size_t li = 0; li < rule.lhs.edges.size(); ++li) {
    if (!rule.preserved_edge[li]) continue;
    const PatternEdge& pe = rule.rhs.edges[*rule.preserved_edge[li]];
    const EdgeId h = match.edges[li];
    graph.set_edge_label(h, eval_pattern(pe.label, a));
    if (pe.mark != Mark::any) graph.set_edge_mark(h, pe.mark);
  }
  for (std::size_t ri = 0; ri < rule.rhs.nodes.size(); ++ri) {
    if (rule.rhs_to_lhs[ri]) continue;
    const PatternNode& pn = rule.rhs.nodes[ri];
    rhs_nodes[ri] = graph.add_node(eval_pattern(pn.label, a), pn.mark, pn.rooted);
  }
  for (std::size_t ri = 0; ri < rule.rhs.edges.size(); ++ri) {
    if (rule.rhs_edge_preserved[ri]) continue;
    const PatternEdge& pe = rule.rhs.edges[ri];
    graph.add_edge(rhs_nodes[pe.source], rhs_nodes[pe.target], eval_pattern(pe.label, a), pe.mark);
  }
  return rhs_nodes;
}

std::optional<std::size_t> apply_first(std::span<const Rule* const> rules, HostGraph& graph,
                                       MatchStats& stats) {
  for (std::size_t i = 0; i < rules.size(); ++i) {
    auto m = find_match(*rules[i], graph, stats);
    if (!m) continue;
    apply(*rules[i], *m, graph);
    ++stats.applications;
    return i;
  }
  return std::nullopt;
}

}  // namespace rootgraph
