#include "rootgraph/host_graph.hpp"

#include <algorithm>
#include <utility>

#include "rootgraph/errors.hpp"

namespace rootgraph {

namespace {

constexpr std::size_t kNoPos = static_cast<std::size_t>(-1);

std::size_t mark_index(Mark m) { return static_cast<std::size_t>(m); }

template <class... Fs>
struct Overloaded : Fs... {
  using Fs::operator()...;
};
template <class... Fs>
Overloaded(Fs...) -> Overloaded<Fs...>;

std::size_t position_of(const std::vector<EdgeId>& list, EdgeId id) {
  auto it = std::find(list.begin(), list.end(), id);
  if (it == list.end()) throw EngineFault("adjacency list out of sync");
  return static_cast<std::size_t>(it - list.begin());
}

}  // namespace

std::string_view to_string(Mark mark) {
  switch (mark) {
    case Mark::none: return "none";
    case Mark::red: return "red";
    case Mark::green: return "green";
    case Mark::blue: return "blue";
    case Mark::grey: return "grey";
    case Mark::dashed: return "dashed";
    case Mark::any: return "any";
  }
  return "?";
}

std::optional<Mark> parse_mark(std::string_view text) {
  if (text == "red") return Mark::red;
  if (text == "green") return Mark::green;
  if (text == "blue") return Mark::blue;
  if (text == "grey" || text == "gray") return Mark::grey;
  if (text == "dashed") return Mark::dashed;
  if (text == "any") return Mark::any;
  return std::nullopt;
}

bool is_node_mark(Mark mark) noexcept { return mark != Mark::dashed && mark != Mark::any; }
bool is_edge_mark(Mark mark) noexcept { return mark != Mark::grey && mark != Mark::any; }

namespace {

// Copies keep growth headroom so the first allocation after a copy does not
// reallocate (and move) the whole store.
template <typename T>
void copy_with_headroom(std::vector<T>& dst, const std::vector<T>& src) {
  dst.clear();
  dst.reserve(src.size() + src.size() / 2 + 16);
  dst.insert(dst.end(), src.begin(), src.end());
}

}  // namespace

HostGraph::HostGraph(const HostGraph& other)
    : root_order_(other.root_order_),
      by_mark_(other.by_mark_),
      live_nodes_(other.live_nodes_),
      live_edges_(other.live_edges_) {
  copy_with_headroom(nodes_, other.nodes_);
  copy_with_headroom(edges_, other.edges_);
}

HostGraph& HostGraph::operator=(const HostGraph& other) {
  if (this != &other) {
    copy_with_headroom(nodes_, other.nodes_);
    copy_with_headroom(edges_, other.edges_);
    root_order_ = other.root_order_;
    by_mark_ = other.by_mark_;
    live_nodes_ = other.live_nodes_;
    live_edges_ = other.live_edges_;
    journal_.clear();
    scope_marks_.clear();
  }
  return *this;
}

HostGraph::NodeSlot& HostGraph::slot(NodeId id) {
  if (id.value >= nodes_.size() || !nodes_[id.value].rec) {
    throw EngineFault("invalid node id n" + std::to_string(id.value));
  }
  return nodes_[id.value];
}

const HostGraph::NodeSlot& HostGraph::slot(NodeId id) const {
  if (id.value >= nodes_.size() || !nodes_[id.value].rec) {
    throw EngineFault("invalid node id n" + std::to_string(id.value));
  }
  return nodes_[id.value];
}

EdgeRec& HostGraph::edge_rec(EdgeId id) {
  if (id.value >= edges_.size() || !edges_[id.value]) {
    throw EngineFault("invalid edge id e" + std::to_string(id.value));
  }
  return *edges_[id.value];
}

void HostGraph::record(JournalEntry entry) {
  if (!scope_marks_.empty()) journal_.push_back(std::move(entry));
}

bool HostGraph::contains(NodeId id) const noexcept {
  return id.value < nodes_.size() && nodes_[id.value].rec.has_value();
}

bool HostGraph::contains(EdgeId id) const noexcept {
  return id.value < edges_.size() && edges_[id.value].has_value();
}

const NodeRec& HostGraph::node(NodeId id) const { return *slot(id).rec; }

const EdgeRec& HostGraph::edge(EdgeId id) const {
  if (!contains(id)) throw EngineFault("invalid edge id e" + std::to_string(id.value));
  return *edges_[id.value];
}

std::span<const EdgeId> HostGraph::out_edges(NodeId id) const { return slot(id).out; }
std::span<const EdgeId> HostGraph::in_edges(NodeId id) const { return slot(id).in; }

NodeId HostGraph::add_node(Label label, Mark mark, bool rooted) {
  if (!is_node_mark(mark)) throw EngineFault("mark not allowed on host nodes");
  const NodeId id = next_node_id();
  nodes_.push_back(NodeSlot{NodeRec{std::move(label), mark, rooted}, {}, {}});
  ++live_nodes_;
  by_mark_[mark_index(mark)].insert(id);
  if (rooted) root_order_.push_back(id);
  record(NodeAdded{id});
  return id;
}

void HostGraph::erase_root(NodeId id, std::size_t pos) {
  root_order_.erase(root_order_.begin() + static_cast<std::ptrdiff_t>(pos));
  (void)id;
}

void HostGraph::delete_node(NodeId id) {
  NodeSlot& s = slot(id);
  if (!s.out.empty() || !s.in.empty()) {
    throw EngineFault("delete_node: n" + std::to_string(id.value) + " has incident edges");
  }
  std::size_t root_pos = kNoPos;
  if (s.rec->rooted) {
    auto it = std::find(root_order_.begin(), root_order_.end(), id);
    root_pos = static_cast<std::size_t>(it - root_order_.begin());
    erase_root(id, root_pos);
  }
  by_mark_[mark_index(s.rec->mark)].erase(id);
  NodeRec old = std::move(*s.rec);
  s.rec.reset();
  --live_nodes_;
  record(NodeDeleted{id, std::move(old), root_pos});
}

EdgeId HostGraph::add_edge(NodeId source, NodeId target, Label label, Mark mark) {
  if (!is_edge_mark(mark)) throw EngineFault("mark not allowed on host edges");
  NodeSlot& src = slot(source);
  NodeSlot& tgt = slot(target);
  const EdgeId id = next_edge_id();
  edges_.push_back(EdgeRec{source, target, std::move(label), mark});
  src.out.push_back(id);
  tgt.in.push_back(id);
  ++live_edges_;
  record(EdgeAdded{id});
  return id;
}

void HostGraph::delete_edge(EdgeId id) {
  EdgeRec& e = edge_rec(id);
  NodeSlot& src = slot(e.source);
  NodeSlot& tgt = slot(e.target);
  const std::size_t out_pos = position_of(src.out, id);
  src.out.erase(src.out.begin() + static_cast<std::ptrdiff_t>(out_pos));
  const std::size_t in_pos = position_of(tgt.in, id);
  tgt.in.erase(tgt.in.begin() + static_cast<std::ptrdiff_t>(in_pos));
  EdgeRec old = std::move(e);
  edges_[id.value].reset();
  --live_edges_;
  record(EdgeDeleted{id, std::move(old), out_pos, in_pos});
}

void HostGraph::set_label(NodeId id, Label label) {
  NodeSlot& s = slot(id);
  if (s.rec->label == label) return;
  Label old = std::exchange(s.rec->label, std::move(label));
  record(LabelChanged{id, std::move(old)});
}

void HostGraph::set_mark(NodeId id, Mark mark) {
  if (!is_node_mark(mark)) throw EngineFault("mark not allowed on host nodes");
  NodeSlot& s = slot(id);
  if (s.rec->mark == mark) return;
  by_mark_[mark_index(s.rec->mark)].erase(id);
  by_mark_[mark_index(mark)].insert(id);
  const Mark old = std::exchange(s.rec->mark, mark);
  record(MarkChanged{id, old});
}

void HostGraph::set_root(NodeId id, bool rooted) {
  NodeSlot& s = slot(id);
  if (s.rec->rooted == rooted) return;
  s.rec->rooted = rooted;
  if (rooted) {
    root_order_.push_back(id);
    record(RootChanged{id, false, root_order_.size() - 1});
  } else {
    auto it = std::find(root_order_.begin(), root_order_.end(), id);
    const auto pos = static_cast<std::size_t>(it - root_order_.begin());
    erase_root(id, pos);
    record(RootChanged{id, true, pos});
  }
}

void HostGraph::set_edge_label(EdgeId id, Label label) {
  EdgeRec& e = edge_rec(id);
  if (e.label == label) return;
  Label old = std::exchange(e.label, std::move(label));
  record(EdgeLabelChanged{id, std::move(old)});
}

void HostGraph::set_edge_mark(EdgeId id, Mark mark) {
  if (!is_edge_mark(mark)) throw EngineFault("mark not allowed on host edges");
  EdgeRec& e = edge_rec(id);
  if (e.mark == mark) return;
  const Mark old = std::exchange(e.mark, mark);
  record(EdgeMarkChanged{id, old});
}

void HostGraph::insert_node_at(NodeId id, NodeRec rec) {
  if (!scope_marks_.empty()) throw EngineFault("insert_node_at inside a scope");
  if (!is_node_mark(rec.mark)) throw EngineFault("mark not allowed on host nodes");
  if (id.value >= nodes_.size()) nodes_.resize(id.value + 1);
  if (nodes_[id.value].rec) throw EngineFault("duplicate node id n" + std::to_string(id.value));
  by_mark_[mark_index(rec.mark)].insert(id);
  if (rec.rooted) root_order_.push_back(id);
  nodes_[id.value].rec = std::move(rec);
  ++live_nodes_;
}

void HostGraph::insert_edge_at(EdgeId id, EdgeRec rec) {
  if (!scope_marks_.empty()) throw EngineFault("insert_edge_at inside a scope");
  if (!is_edge_mark(rec.mark)) throw EngineFault("mark not allowed on host edges");
  NodeSlot& src = slot(rec.source);
  NodeSlot& tgt = slot(rec.target);
  if (id.value >= edges_.size()) edges_.resize(id.value + 1);
  if (edges_[id.value]) throw EngineFault("duplicate edge id e" + std::to_string(id.value));
  src.out.push_back(id);
  tgt.in.push_back(id);
  edges_[id.value] = std::move(rec);
  ++live_edges_;
}

std::vector<NodeId> HostGraph::roots() const {
  std::vector<NodeId> out(root_order_.begin(), root_order_.end());
  std::sort(out.begin(), out.end());
  return out;
}

const std::set<NodeId>& HostGraph::nodes_with_mark(Mark mark) const {
  return by_mark_[mark_index(mark)];
}

std::vector<NodeId> HostGraph::node_ids() const {
  std::vector<NodeId> out;
  out.reserve(live_nodes_);
  for (std::uint32_t i = 0; i < nodes_.size(); ++i) {
    if (nodes_[i].rec) out.push_back(NodeId{i});
  }
  return out;
}

std::vector<EdgeId> HostGraph::edge_ids() const {
  std::vector<EdgeId> out;
  out.reserve(live_edges_);
  for (std::uint32_t i = 0; i < edges_.size(); ++i) {
    if (edges_[i]) out.push_back(EdgeId{i});
  }
  return out;
}

ScopeToken HostGraph::begin_scope() {
  scope_marks_.push_back(journal_.size());
  return ScopeToken{scope_marks_.size()};
}

void HostGraph::commit_scope(ScopeToken token) {
  if (token.depth != scope_marks_.size() || token.depth == 0) {
    throw EngineFault("commit_scope: scopes must close in LIFO order");
  }
  scope_marks_.pop_back();
  if (scope_marks_.empty()) journal_.clear();
}

void HostGraph::rollback_scope(ScopeToken token) {
  if (token.depth != scope_marks_.size() || token.depth == 0) {
    throw EngineFault("rollback_scope: scopes must close in LIFO order");
  }
  const std::size_t mark = scope_marks_.back();
  while (journal_.size() > mark) {
    undo(journal_.back());
    journal_.pop_back();
  }
  scope_marks_.pop_back();
}

void HostGraph::undo(JournalEntry& entry) {
  std::visit(
      Overloaded{
          [&](NodeAdded& e) {
            NodeSlot& s = nodes_.back();
            if (e.id.value + 1 != nodes_.size() || !s.rec) throw EngineFault("journal out of order");
            by_mark_[mark_index(s.rec->mark)].erase(e.id);
            if (s.rec->rooted) {
              if (root_order_.empty() || root_order_.back() != e.id) {
                throw EngineFault("journal out of order (root)");
              }
              root_order_.pop_back();
            }
            nodes_.pop_back();
            --live_nodes_;
          },
          [&](NodeDeleted& e) {
            NodeSlot& s = nodes_[e.id.value];
            by_mark_[mark_index(e.rec.mark)].insert(e.id);
            if (e.root_pos != kNoPos) {
              root_order_.insert(root_order_.begin() + static_cast<std::ptrdiff_t>(e.root_pos), e.id);
            }
            s.rec = std::move(e.rec);
            ++live_nodes_;
          },
          [&](EdgeAdded& e) {
            if (e.id.value + 1 != edges_.size()) throw EngineFault("journal out of order");
            const EdgeRec& rec = *edges_.back();
            nodes_[rec.source.value].out.pop_back();
            nodes_[rec.target.value].in.pop_back();
            edges_.pop_back();
            --live_edges_;
          },
          [&](EdgeDeleted& e) {
            auto& out = nodes_[e.rec.source.value].out;
            auto& in = nodes_[e.rec.target.value].in;
            out.insert(out.begin() + static_cast<std::ptrdiff_t>(e.out_pos), e.id);
            in.insert(in.begin() + static_cast<std::ptrdiff_t>(e.in_pos), e.id);
            edges_[e.id.value] = std::move(e.rec);
            ++live_edges_;
          },
          [&](LabelChanged& e) { nodes_[e.id.value].rec->label = std::move(e.old); },
          [&](MarkChanged& e) {
            NodeRec& rec = *nodes_[e.id.value].rec;
            by_mark_[mark_index(rec.mark)].erase(e.id);
            by_mark_[mark_index(e.old)].insert(e.id);
            rec.mark = e.old;
          },
          [&](RootChanged& e) {
            NodeRec& rec = *nodes_[e.id.value].rec;
            if (e.was_rooted) {
              root_order_.insert(root_order_.begin() + static_cast<std::ptrdiff_t>(e.pos), e.id);
            } else {
              root_order_.erase(root_order_.begin() + static_cast<std::ptrdiff_t>(e.pos));
            }
            rec.rooted = e.was_rooted;
          },
          [&](EdgeLabelChanged& e) { edges_[e.id.value]->label = std::move(e.old); },
          [&](EdgeMarkChanged& e) { edges_[e.id.value]->mark = e.old; },
      },
      entry);
}

std::optional<std::string> HostGraph::check_coherence() const {
  std::size_t live_nodes = 0;
  std::vector<std::size_t> out_count(nodes_.size(), 0);
  std::vector<std::size_t> in_count(nodes_.size(), 0);
  std::size_t live_edges = 0;
  for (std::uint32_t i = 0; i < edges_.size(); ++i) {
    if (!edges_[i]) continue;
    ++live_edges;
    const EdgeRec& e = *edges_[i];
    if (!contains(e.source) || !contains(e.target)) {
      return "edge e" + std::to_string(i) + " has a missing endpoint";
    }
    ++out_count[e.source.value];
    ++in_count[e.target.value];
    const auto& out = nodes_[e.source.value].out;
    const auto& in = nodes_[e.target.value].in;
    if (std::count(out.begin(), out.end(), EdgeId{i}) != 1) {
      return "edge e" + std::to_string(i) + " missing from out-list";
    }
    if (std::count(in.begin(), in.end(), EdgeId{i}) != 1) {
      return "edge e" + std::to_string(i) + " missing from in-list";
    }
  }
  if (live_edges != live_edges_) return "live edge count mismatch";
  std::vector<NodeId> rooted;
  std::array<std::size_t, kMarkCount> per_mark{};
  for (std::uint32_t i = 0; i < nodes_.size(); ++i) {
    const NodeSlot& s = nodes_[i];
    if (!s.rec) {
      if (!s.out.empty() || !s.in.empty()) return "dead node n" + std::to_string(i) + " has adjacency";
      continue;
    }
    ++live_nodes;
    if (s.out.size() != out_count[i]) return "outdeg mismatch at n" + std::to_string(i);
    if (s.in.size() != in_count[i]) return "indeg mismatch at n" + std::to_string(i);
    if (s.rec->rooted) rooted.push_back(NodeId{i});
    ++per_mark[mark_index(s.rec->mark)];
    if (by_mark_[mark_index(s.rec->mark)].count(NodeId{i}) != 1) {
      return "mark index missing n" + std::to_string(i);
    }
  }
  if (live_nodes != live_nodes_) return "live node count mismatch";
  for (std::size_t m = 0; m < kMarkCount; ++m) {
    if (by_mark_[m].size() != per_mark[m]) return "mark index size mismatch";
  }
  if (rooted != roots()) return "root registry mismatch";
  if (root_order_.size() != rooted.size()) return "root order has duplicates";
  return std::nullopt;
}

bool operator==(const HostGraph& a, const HostGraph& b) {
  if (a.nodes_.size() != b.nodes_.size() || a.edges_.size() != b.edges_.size()) return false;
  for (std::size_t i = 0; i < a.nodes_.size(); ++i) {
    const auto& x = a.nodes_[i];
    const auto& y = b.nodes_[i];
    if (x.rec != y.rec || x.out != y.out || x.in != y.in) return false;
  }
  return a.edges_ == b.edges_ && a.root_order_ == b.root_order_ && a.live_nodes_ == b.live_nodes_ &&
         a.live_edges_ == b.live_edges_;
}

bool same_content(const HostGraph& a, const HostGraph& b) {
  const auto na = a.node_ids();
  if (na != b.node_ids() || a.edge_ids() != b.edge_ids()) return false;
  for (NodeId id : na) {
    if (a.node(id) != b.node(id)) return false;
  }
  for (EdgeId id : a.edge_ids()) {
    if (a.edge(id) != b.edge(id)) return false;
  }
  return a.roots() == b.roots();
}

}  // namespace rootgraph
