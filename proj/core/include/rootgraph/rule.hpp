#pragma once

#include <optional>
#include <string>
#include <vector>

#include "rootgraph/host_graph.hpp"
#include "rootgraph/label.hpp"

namespace rootgraph {

struct PatternNode {
  std::string name;
  LabelPattern label;
  Mark mark = Mark::none;  // none means "unmarked"; any is the wildcard
  bool rooted = false;
};

struct PatternEdge {
  std::string name;
  std::size_t source = 0;
  std::size_t target = 0;
  LabelPattern label;
  Mark mark = Mark::none;
};

struct PatternGraph {
  std::vector<PatternNode> nodes;
  std::vector<PatternEdge> edges;

  std::optional<std::size_t> find_node(std::string_view name) const;
  std::optional<std::size_t> find_edge(std::string_view name) const;
};

/// One step of a precomputed search plan.
struct SearchStep {
  enum class Kind : std::uint8_t {
    out_edge,    // follow an out-edge of a matched source; binds the edge's target
    in_edge,     // follow an in-edge of a matched target; binds the edge's source
    check_edge,  // both endpoints matched; find a parallel host edge
  };
  Kind kind = Kind::out_edge;
  std::size_t edge = 0;
};

struct StartOption {
  std::size_t start = 0;
  std::vector<SearchStep> steps;
};

/// Search plan of one connected component of the left-hand side. Rooted components
/// have a single option starting at their first rooted node; unrooted components
/// carry one option per node and the matcher picks the most selective at run time.
struct ComponentPlan {
  bool rooted = false;
  std::vector<StartOption> options;
};

struct Rule {
  std::string name;
  std::vector<VarDecl> vars;
  PatternGraph lhs;
  PatternGraph rhs;
  std::vector<std::string> interface;  // node names present on both sides
  ConditionPtr condition;              // null when there is no where-clause

  // Filled by validate_rule.
  bool validated = false;
  bool fast = false;
  std::vector<std::optional<std::size_t>> lhs_to_rhs;
  std::vector<std::optional<std::size_t>> rhs_to_lhs;
  std::vector<std::optional<std::size_t>> preserved_edge;  // lhs edge -> rhs edge
  std::vector<bool> rhs_edge_preserved;
  std::vector<std::size_t> incident_edges;  // per lhs node; loops count twice
  std::vector<ComponentPlan> plan;
};

struct RuleDiagnostics {
  std::vector<std::string> errors;
  std::vector<std::string> warnings;

  bool ok() const noexcept { return errors.empty(); }
};

/// Checks structural invariants and fills the derived fields (interface maps,
/// preserved edges, fast flag, search plan). Errors leave the rule unvalidated.
RuleDiagnostics validate_rule(Rule& rule);

/// validate_rule, throwing ValidationError on the first error.
void require_valid(Rule& rule);

/// Whether a pattern mark admits a host mark (`any` admits every concrete mark except none).
bool mark_admits(Mark pattern, Mark host) noexcept;

}  // namespace rootgraph
