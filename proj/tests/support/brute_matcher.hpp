#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "rootgraph/host_graph.hpp"
#include "rootgraph/rule.hpp"
#include "rootgraph/rule_engine.hpp"

namespace rgtest {

using namespace rootgraph;

/// One match found by exhaustive enumeration.
struct BruteMatch {
  std::vector<NodeId> nodes;
  std::vector<EdgeId> edges;
  Assignment assignment;
};

/// Every valid match of `rule` in `g`, by trying all injective node and edge maps.
/// Shares no code with the engine's matcher beyond the data types.
std::vector<BruteMatch> brute_force_matches(const Rule& rule, const HostGraph& g);

/// Random small host graph: up to `max_nodes` nodes with small labels, assorted marks
/// and root flags.
HostGraph random_host(std::mt19937_64& rng, std::size_t max_nodes);

/// Host graph holding one planted image of `rule`'s left side (under a random
/// assignment) plus random extra nodes and edges, `max_nodes` in total at most.
HostGraph planted_host(std::mt19937_64& rng, const Rule& rule, std::size_t max_nodes);

/// Random valid rule with 1..3 left nodes, random interface, optional condition.
Rule random_rule(std::mt19937_64& rng);

}  // namespace rgtest
