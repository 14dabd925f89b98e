#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "rootgraph/host_graph.hpp"
#include "rootgraph/rule.hpp"

namespace rootgraph {

/// Work counters for matching. All fields except the two maxima are sums over a run.
struct MatchStats {
  std::uint64_t find_calls = 0;
  std::uint64_t anchors_tried = 0;    // candidates examined for the first search-plan node
  std::uint64_t extension_steps = 0;  // host edges/nodes examined beyond the anchor
  std::uint64_t matches_found = 0;
  std::uint64_t applications = 0;
  std::uint64_t max_anchors_per_call = 0;
  std::uint64_t max_extension_per_call = 0;

  MatchStats& operator+=(const MatchStats& other);
};

struct Match {
  std::vector<NodeId> nodes;  // by left-hand node index
  std::vector<EdgeId> edges;  // by left-hand edge index
  Assignment assignment;
};

/// First match in the fixed search order, or nullopt. Anchors are tried
/// most-recently-rooted first; unrooted components start from the per-mark index.
std::optional<Match> find_match(const Rule& rule, const HostGraph& graph, MatchStats& stats);

/// Applies a rule at a match produced by find_match on the current graph.
/// Returns the host node of every right-hand node.
std::vector<NodeId> apply(const Rule& rule, const Match& match, HostGraph& graph);

/// Tries the rules in order and applies the first that matches. Returns the index of the
/// applied rule within `rules`.
std::optional<std::size_t> apply_first(std::span<const Rule* const> rules, HostGraph& graph,
                                       MatchStats& stats);

}  // namespace rootgraph
