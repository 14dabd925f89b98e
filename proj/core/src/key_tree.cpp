#include "rootgraph/key_tree.hpp"

#include <utility>

namespace rootgraph {

KeyTree KeyTree::make(Int key, const KeyTree& left, const KeyTree& right) {
  KeyTree t;
  t.nodes_.reserve(1 + left.nodes_.size() + right.nodes_.size());
  const Index top = t.add(key);
  const Index l = t.copy_from(left, left.top_);
  const Index r = t.copy_from(right, right.top_);
  t.at(top).left = l;
  t.at(top).right = r;
  t.top_ = top;
  return t;
}

KeyTree::Index KeyTree::add(Int key) {
  nodes_.push_back(Node{key, kNone, kNone});
  return static_cast<Index>(nodes_.size() - 1);
}

KeyTree::Index KeyTree::copy_from(const KeyTree& other, Index i) {
  if (i == kNone) return kNone;
  const Node& n = other.at(i);
  const Index here = add(n.key);
  const Index l = copy_from(other, n.left);
  const Index r = copy_from(other, n.right);
  at(here).left = l;
  at(here).right = r;
  return here;
}

std::size_t KeyTree::size() const { return keys_inorder().size(); }

std::size_t KeyTree::height() const {
  std::size_t best = 0;
  std::vector<std::pair<Index, std::size_t>> stack;
  if (top_ != kNone) stack.emplace_back(top_, 1);
  while (!stack.empty()) {
    auto [i, depth] = stack.back();
    stack.pop_back();
    best = std::max(best, depth);
    const Node& n = at(i);
    if (n.left != kNone) stack.emplace_back(n.left, depth + 1);
    if (n.right != kNone) stack.emplace_back(n.right, depth + 1);
  }
  return best;
}

std::vector<Int> KeyTree::keys_inorder() const {
  std::vector<Int> out;
  std::vector<Index> stack;
  Index cur = top_;
  while (cur != kNone || !stack.empty()) {
    while (cur != kNone) {
      stack.push_back(cur);
      cur = at(cur).left;
    }
    cur = stack.back();
    stack.pop_back();
    out.push_back(at(cur).key);
    cur = at(cur).right;
  }
  return out;
}

bool KeyTree::is_search_tree() const {
  const auto keys = keys_inorder();
  for (std::size_t i = 1; i < keys.size(); ++i) {
    if (!(keys[i - 1] < keys[i])) return false;
  }
  return true;
}

namespace {

void render(const KeyTree& t, KeyTree::Index i, std::string& out) {
  if (i == KeyTree::kNone) {
    out += "()";
    return;
  }
  const auto& n = t.at(i);
  out += '(';
  out += std::to_string(n.key);
  if (n.left != KeyTree::kNone || n.right != KeyTree::kNone) {
    out += ' ';
    render(t, n.left, out);
    out += ' ';
    render(t, n.right, out);
  }
  out += ')';
}

}  // namespace

std::string KeyTree::to_string() const {
  std::string out;
  render(*this, top_, out);
  return out;
}

bool operator==(const KeyTree& a, const KeyTree& b) {
  std::vector<std::pair<KeyTree::Index, KeyTree::Index>> stack{{a.top_, b.top_}};
  while (!stack.empty()) {
    auto [i, j] = stack.back();
    stack.pop_back();
    if ((i == KeyTree::kNone) != (j == KeyTree::kNone)) return false;
    if (i == KeyTree::kNone) continue;
    const auto& x = a.at(i);
    const auto& y = b.at(j);
    if (x.key != y.key) return false;
    stack.emplace_back(x.left, y.left);
    stack.emplace_back(x.right, y.right);
  }
  return true;
}

}  // namespace rootgraph
