#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "rootgraph/label.hpp"

namespace rootgraph {

/// Node and edge marks. Host nodes use none/red/green/blue/grey, host edges
/// none/dashed/red/green/blue. `any` only appears in rule patterns.
enum class Mark : std::uint8_t { none, red, green, blue, grey, dashed, any };

inline constexpr std::size_t kMarkCount = 7;

std::string_view to_string(Mark mark);
std::optional<Mark> parse_mark(std::string_view text);
bool is_node_mark(Mark mark) noexcept;
bool is_edge_mark(Mark mark) noexcept;

struct NodeId {
  std::uint32_t value = 0;
  friend auto operator<=>(const NodeId&, const NodeId&) = default;
};

struct EdgeId {
  std::uint32_t value = 0;
  friend auto operator<=>(const EdgeId&, const EdgeId&) = default;
};

struct NodeRec {
  Label label;
  Mark mark = Mark::none;
  bool rooted = false;
  friend bool operator==(const NodeRec&, const NodeRec&) = default;
};

struct EdgeRec {
  NodeId source;
  NodeId target;
  Label label;
  Mark mark = Mark::none;
  friend bool operator==(const EdgeRec&, const EdgeRec&) = default;
};

/// Handle returned by begin_scope; scopes must be closed in LIFO order.
struct ScopeToken {
  std::size_t depth = 0;
};

/// Mutable directed host graph with marks, a root registry, and a scoped undo journal.
///
/// Identifiers are allocated monotonically and never reused, except that rolling back a
/// scope rewinds both allocators. All registries (adjacency, roots, per-mark index) are
/// maintained incrementally so degree and root queries are O(1).
class HostGraph {
 public:
  HostGraph() = default;

  // Copies carry the graph state only; the journal and open scopes are not copied.
  HostGraph(const HostGraph& other);
  HostGraph& operator=(const HostGraph& other);
  HostGraph(HostGraph&&) noexcept = default;
  HostGraph& operator=(HostGraph&&) noexcept = default;

  NodeId add_node(Label label, Mark mark = Mark::none, bool rooted = false);
  void delete_node(NodeId id);
  EdgeId add_edge(NodeId source, NodeId target, Label label, Mark mark = Mark::none);
  void delete_edge(EdgeId id);
  void set_label(NodeId id, Label label);
  void set_mark(NodeId id, Mark mark);
  void set_root(NodeId id, bool rooted);
  void set_edge_label(EdgeId id, Label label);
  void set_edge_mark(EdgeId id, Mark mark);

  /// Loader entry points: place an item at a specific id (outside any scope).
  void insert_node_at(NodeId id, NodeRec rec);
  void insert_edge_at(EdgeId id, EdgeRec rec);

  bool contains(NodeId id) const noexcept;
  bool contains(EdgeId id) const noexcept;
  const NodeRec& node(NodeId id) const;
  const EdgeRec& edge(EdgeId id) const;

  std::span<const EdgeId> out_edges(NodeId id) const;
  std::span<const EdgeId> in_edges(NodeId id) const;
  std::size_t outdeg(NodeId id) const { return out_edges(id).size(); }
  std::size_t indeg(NodeId id) const { return in_edges(id).size(); }

  /// Rooted nodes in ascending id order.
  std::vector<NodeId> roots() const;
  /// Rooted nodes in the order they were rooted (oldest first).
  std::span<const NodeId> root_order() const noexcept { return root_order_; }
  std::size_t root_count() const noexcept { return root_order_.size(); }

  /// Live nodes carrying `mark`, ascending.
  const std::set<NodeId>& nodes_with_mark(Mark mark) const;

  std::vector<NodeId> node_ids() const;
  std::vector<EdgeId> edge_ids() const;
  std::size_t node_count() const noexcept { return live_nodes_; }
  std::size_t edge_count() const noexcept { return live_edges_; }

  /// Next ids the allocators will hand out.
  NodeId next_node_id() const noexcept { return NodeId{static_cast<std::uint32_t>(nodes_.size())}; }
  EdgeId next_edge_id() const noexcept { return EdgeId{static_cast<std::uint32_t>(edges_.size())}; }

  ScopeToken begin_scope();
  void commit_scope(ScopeToken token);
  void rollback_scope(ScopeToken token);
  std::size_t scope_depth() const noexcept { return scope_marks_.size(); }
  std::size_t journal_size() const noexcept { return journal_.size(); }

  /// Recomputes every registry by a full scan; returns a description of the first
  /// discrepancy, or nullopt when coherent.
  std::optional<std::string> check_coherence() const;

  /// Exact state equality: records, adjacency order, root order, allocators.
  friend bool operator==(const HostGraph& a, const HostGraph& b);

 private:
  struct NodeSlot {
    std::optional<NodeRec> rec;
    std::vector<EdgeId> out;
    std::vector<EdgeId> in;
  };

  struct NodeAdded { NodeId id; };
  struct NodeDeleted { NodeId id; NodeRec rec; std::size_t root_pos; };
  struct EdgeAdded { EdgeId id; };
  struct EdgeDeleted { EdgeId id; EdgeRec rec; std::size_t out_pos; std::size_t in_pos; };
  struct LabelChanged { NodeId id; Label old; };
  struct MarkChanged { NodeId id; Mark old; };
  struct RootChanged { NodeId id; bool was_rooted; std::size_t pos; };
  struct EdgeLabelChanged { EdgeId id; Label old; };
  struct EdgeMarkChanged { EdgeId id; Mark old; };

  using JournalEntry = std::variant<NodeAdded, NodeDeleted, EdgeAdded, EdgeDeleted, LabelChanged,
                                    MarkChanged, RootChanged, EdgeLabelChanged, EdgeMarkChanged>;

  NodeSlot& slot(NodeId id);
  const NodeSlot& slot(NodeId id) const;
  EdgeRec& edge_rec(EdgeId id);
  void record(JournalEntry entry);
  void undo(JournalEntry& entry);
  void erase_root(NodeId id, std::size_t pos);

  std::vector<NodeSlot> nodes_;
  std::vector<std::optional<EdgeRec>> edges_;
  std::vector<NodeId> root_order_;
  std::array<std::set<NodeId>, kMarkCount> by_mark_;
  std::size_t live_nodes_ = 0;
  std::size_t live_edges_ = 0;

  std::vector<JournalEntry> journal_;
  std::vector<std::size_t> scope_marks_;
};

/// Same nodes, edges, and root set under identical ids (ignores allocator
/// positions and rooting order). Used for text round-trips.
bool same_content(const HostGraph& a, const HostGraph& b);

}  // namespace rootgraph
