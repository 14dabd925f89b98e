#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rootgraph/label.hpp"

namespace rootgraph {

/// Binary tree of integer keys stored in an arena. Equality is structural: two
/// trees are equal when they have the same shape and keys, wherever the nodes live.
class KeyTree {
 public:
  using Index = std::int32_t;
  static constexpr Index kNone = -1;

  struct Node {
    Int key = 0;
    Index left = kNone;
    Index right = kNone;
  };

  KeyTree() = default;

  /// Builds a tree from its nested form: `KeyTree::make(5, KeyTree::leaf(2), {})`.
  static KeyTree leaf(Int key) { return make(key, {}, {}); }
  static KeyTree make(Int key, const KeyTree& left, const KeyTree& right);

  bool empty() const noexcept { return top_ == kNone; }
  Index top() const noexcept { return top_; }
  const Node& at(Index i) const { return nodes_.at(static_cast<std::size_t>(i)); }
  Node& at(Index i) { return nodes_.at(static_cast<std::size_t>(i)); }

  Index add(Int key);
  void set_top(Index i) { top_ = i; }

  std::size_t size() const;
  /// Number of nodes on the longest top-to-leaf path (0 for the empty tree).
  std::size_t height() const;
  std::vector<Int> keys_inorder() const;
  /// Strict order: every left key < node key < every right key.
  bool is_search_tree() const;

  /// Nested parentheses: a leaf is `(k)`, an inner node `(k L R)` with `()` for a
  /// missing child, the empty tree `()`.
  std::string to_string() const;

  friend bool operator==(const KeyTree& a, const KeyTree& b);

 private:
  Index copy_from(const KeyTree& other, Index i);

  std::vector<Node> nodes_;
  Index top_ = kNone;
};

}  // namespace rootgraph
