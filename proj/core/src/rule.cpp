#include "rootgraph/rule.hpp"

#include <algorithm>
#include <set>

#include "rootgraph/errors.hpp"

namespace rootgraph {

std::optional<std::size_t> PatternGraph::find_node(std::string_view name) const {
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (nodes[i].name == name) return i;
  }
  return std::nullopt;
}

std::optional<std::size_t> PatternGraph::find_edge(std::string_view name) const {
  for (std::size_t i = 0; i < edges.size(); ++i) {
    if (edges[i].name == name) return i;
  }
  return std::nullopt;
}

bool mark_admits(Mark pattern, Mark host) noexcept {
  if (pattern == Mark::any) return host != Mark::none;
  return pattern == host;
}

namespace {

void collect_pattern_vars(const LabelPattern& p, std::set<VarIndex>& out) {
  for (const auto& item : p.items) {
    if (item.is_variable()) out.insert(item.variable());
  }
}

void check_pattern(const LabelPattern& p, const Rule& r, const std::string& where,
                   RuleDiagnostics& d) {
  int lists = 0;
  for (const auto& item : p.items) {
    if (!item.is_variable()) continue;
    if (item.variable() >= r.vars.size()) {
      d.errors.push_back(where + ": undeclared variable");
      continue;
    }
    if (r.vars[item.variable()].kind == VarKind::list) ++lists;
  }
  if (lists > 1) d.errors.push_back(where + ": more than one list variable in a label");
}

void check_side(const PatternGraph& g, const Rule& r, const std::string& side,
                RuleDiagnostics& d) {
  std::set<std::string> names;
  for (const auto& n : g.nodes) {
    if (!names.insert(n.name).second) d.errors.push_back(side + ": duplicate node id " + n.name);
    if (n.mark == Mark::dashed) d.errors.push_back(side + ": node " + n.name + " cannot be dashed");
    check_pattern(n.label, r, side + " node " + n.name, d);
  }
  std::set<std::string> edge_names;
  for (const auto& e : g.edges) {
    if (!edge_names.insert(e.name).second) {
      d.errors.push_back(side + ": duplicate edge id " + e.name);
    }
    if (e.source >= g.nodes.size() || e.target >= g.nodes.size()) {
      d.errors.push_back(side + ": edge " + e.name + " has a missing endpoint");
    }
    if (e.mark == Mark::grey) d.errors.push_back(side + ": edge " + e.name + " cannot be grey");
    check_pattern(e.label, r, side + " edge " + e.name, d);
  }
}

// Builds the step list of one component from a given start node: repeatedly take the
// first unplanned edge (declaration order) that touches an already-bound node.
StartOption plan_from(const PatternGraph& lhs, std::size_t start,
                      const std::vector<std::size_t>& component_edges) {
  StartOption opt;
  opt.start = start;
  std::vector<bool> bound(lhs.nodes.size(), false);
  bound[start] = true;
  std::vector<bool> planned(lhs.edges.size(), false);
  std::size_t remaining = component_edges.size();
  while (remaining > 0) {
    bool progressed = false;
    for (std::size_t ei : component_edges) {
      if (planned[ei]) continue;
      const auto& e = lhs.edges[ei];
      SearchStep step;
      step.edge = ei;
      if (bound[e.source] && bound[e.target]) {
        step.kind = SearchStep::Kind::check_edge;
      } else if (bound[e.source]) {
        step.kind = SearchStep::Kind::out_edge;
        bound[e.target] = true;
      } else if (bound[e.target]) {
        step.kind = SearchStep::Kind::in_edge;
        bound[e.source] = true;
      } else {
        continue;
      }
      planned[ei] = true;
      opt.steps.push_back(step);
      --remaining;
      progressed = true;
      break;
    }
    if (!progressed) break;
  }
  return opt;
}

void build_plan(Rule& r) {
  const auto& lhs = r.lhs;
  const std::size_t n = lhs.nodes.size();
  std::vector<std::size_t> comp(n, static_cast<std::size_t>(-1));
  std::vector<std::vector<std::size_t>> members;
  for (std::size_t s = 0; s < n; ++s) {
    if (comp[s] != static_cast<std::size_t>(-1)) continue;
    const std::size_t c = members.size();
    members.emplace_back();
    std::vector<std::size_t> stack{s};
    comp[s] = c;
    while (!stack.empty()) {
      const std::size_t v = stack.back();
      stack.pop_back();
      members[c].push_back(v);
      for (const auto& e : lhs.edges) {
        for (auto [a, b] : {std::pair{e.source, e.target}, std::pair{e.target, e.source}}) {
          if (a == v && comp[b] == static_cast<std::size_t>(-1)) {
            comp[b] = c;
            stack.push_back(b);
          }
        }
      }
    }
    std::sort(members[c].begin(), members[c].end());
  }

  std::vector<std::vector<std::size_t>> comp_edges(members.size());
  for (std::size_t ei = 0; ei < lhs.edges.size(); ++ei) {
    comp_edges[comp[lhs.edges[ei].source]].push_back(ei);
  }

  r.plan.clear();
  std::vector<ComponentPlan> unrooted;
  for (std::size_t c = 0; c < members.size(); ++c) {
    ComponentPlan cp;
    for (std::size_t v : members[c]) {
      if (lhs.nodes[v].rooted) {
        cp.rooted = true;
        cp.options.push_back(plan_from(lhs, v, comp_edges[c]));
        break;
      }
    }
    if (cp.rooted) {
      r.plan.push_back(std::move(cp));
      continue;
    }
    for (std::size_t v : members[c]) cp.options.push_back(plan_from(lhs, v, comp_edges[c]));
    unrooted.push_back(std::move(cp));
  }
  for (auto& cp : unrooted) r.plan.push_back(std::move(cp));

  r.fast = !lhs.nodes.empty() && unrooted.empty();
}

}  // namespace

RuleDiagnostics validate_rule(Rule& r) {
  RuleDiagnostics d;
  r.validated = false;

  std::set<std::string> var_names;
  for (const auto& v : r.vars) {
    if (!var_names.insert(v.name).second) d.errors.push_back("duplicate variable " + v.name);
  }
  check_side(r.lhs, r, "left", d);
  check_side(r.rhs, r, "right", d);

  r.lhs_to_rhs.assign(r.lhs.nodes.size(), std::nullopt);
  r.rhs_to_lhs.assign(r.rhs.nodes.size(), std::nullopt);
  std::set<std::string> seen;
  for (const auto& name : r.interface) {
    if (!seen.insert(name).second) d.errors.push_back("interface lists " + name + " twice");
    auto l = r.lhs.find_node(name);
    auto rr = r.rhs.find_node(name);
    if (!l || !rr) {
      d.errors.push_back("interface node " + name + " must appear on both sides");
      continue;
    }
    r.lhs_to_rhs[*l] = *rr;
    r.rhs_to_lhs[*rr] = *l;
  }

  for (std::size_t i = 0; i < r.rhs.nodes.size(); ++i) {
    const auto& node = r.rhs.nodes[i];
    if (node.mark != Mark::any) continue;
    if (!r.rhs_to_lhs[i] || r.lhs.nodes[*r.rhs_to_lhs[i]].mark != Mark::any) {
      d.errors.push_back("right node " + node.name + ": wildcard mark needs a wildcard left node");
    }
  }

  r.preserved_edge.assign(r.lhs.edges.size(), std::nullopt);
  r.rhs_edge_preserved.assign(r.rhs.edges.size(), false);
  if (d.ok()) {
    for (std::size_t ri = 0; ri < r.rhs.edges.size(); ++ri) {
      const auto& re = r.rhs.edges[ri];
      auto li = r.lhs.find_edge(re.name);
      if (li) {
        const auto& le = r.lhs.edges[*li];
        if (r.lhs_to_rhs[le.source] == re.source && r.lhs_to_rhs[le.target] == re.target) {
          r.preserved_edge[*li] = ri;
          r.rhs_edge_preserved[ri] = true;
        }
      }
      if (re.mark == Mark::any && !(li && r.rhs_edge_preserved[ri] &&
                                    r.lhs.edges[*li].mark == Mark::any)) {
        d.errors.push_back("right edge " + re.name + ": wildcard mark needs a preserved wildcard edge");
      }
    }
  }

  std::set<VarIndex> lhs_vars;
  for (const auto& n : r.lhs.nodes) collect_pattern_vars(n.label, lhs_vars);
  for (const auto& e : r.lhs.edges) collect_pattern_vars(e.label, lhs_vars);
  std::set<VarIndex> rhs_vars;
  for (const auto& n : r.rhs.nodes) collect_pattern_vars(n.label, rhs_vars);
  for (const auto& e : r.rhs.edges) collect_pattern_vars(e.label, rhs_vars);
  for (VarIndex v : rhs_vars) {
    if (v < r.vars.size() && !lhs_vars.count(v)) {
      d.errors.push_back("variable " + r.vars[v].name + " is used on the right but not the left");
    }
  }
  std::vector<VarIndex> cond_vars;
  collect_variables(r.condition.get(), cond_vars);
  for (VarIndex v : cond_vars) {
    if (v >= r.vars.size()) {
      d.errors.push_back("condition uses an undeclared variable");
    } else if (!lhs_vars.count(v)) {
      d.errors.push_back("condition variable " + r.vars[v].name + " does not occur on the left");
    }
  }
  std::vector<std::size_t> cond_nodes;
  collect_degree_nodes(r.condition.get(), cond_nodes);
  for (std::size_t n : cond_nodes) {
    if (n >= r.lhs.nodes.size()) d.errors.push_back("condition refers to a missing node");
  }

  if (!d.ok()) return d;

  r.incident_edges.assign(r.lhs.nodes.size(), 0);
  for (const auto& e : r.lhs.edges) {
    ++r.incident_edges[e.source];
    ++r.incident_edges[e.target];
  }
  build_plan(r);
  bool any_root = std::any_of(r.lhs.nodes.begin(), r.lhs.nodes.end(),
                              [](const PatternNode& n) { return n.rooted; });
  if (!r.lhs.nodes.empty() && !any_root) {
    d.warnings.push_back("rule " + r.name + " has no rooted left node; matching needs a node scan");
  } else if (!r.lhs.nodes.empty() && !r.fast) {
    d.warnings.push_back("rule " + r.name + " has left nodes unreachable from a root");
  }
  r.validated = true;
  return d;
}

void require_valid(Rule& rule) {
  auto d = validate_rule(rule);
  if (!d.ok()) throw ValidationError("rule " + rule.name + ": " + d.errors.front());
}

}  // namespace rootgraph
