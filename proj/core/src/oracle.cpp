#include "rootgraph/oracle.hpp"

#include <random>
#include <set>
#include <stdexcept>

namespace rootgraph {

namespace {

using Index = KeyTree::Index;

// Finds `key`; returns the node (or kNone) and the link that points at it.
std::pair<Index, Index*> locate(KeyTree& t, Int key, Index* link) {
  Index cur = *link;
  while (cur != KeyTree::kNone && t.at(cur).key != key) {
    link = key < t.at(cur).key ? &t.at(cur).left : &t.at(cur).right;
    cur = *link;
  }
  return {cur, link};
}

}  // namespace

bool o_insert(KeyTree& t, Int key) {
  if (o_search(t, key)) return false;
  const Index fresh = t.add(key);
  if (t.empty()) {
    t.set_top(fresh);
    return true;
  }
  Index cur = t.top();
  for (;;) {
    auto& n = t.at(cur);
    Index& next = key < n.key ? n.left : n.right;
    if (next == KeyTree::kNone) {
      next = fresh;
      return true;
    }
    cur = next;
  }
}

bool o_search(const KeyTree& t, Int key) {
  Index cur = t.top();
  while (cur != KeyTree::kNone) {
    const auto& n = t.at(cur);
    if (n.key == key) return true;
    cur = key < n.key ? n.left : n.right;
  }
  return false;
}

DeleteCase o_delete(KeyTree& t, Int key) {
  Index top = t.top();
  auto [node, link] = locate(t, key, &top);
  if (node == KeyTree::kNone) return DeleteCase::absent;
  DeleteCase kind;
  auto& n = t.at(node);
  if (n.left == KeyTree::kNone && n.right == KeyTree::kNone) {
    *link = KeyTree::kNone;
    kind = DeleteCase::leaf;
  } else if (n.left == KeyTree::kNone || n.right == KeyTree::kNone) {
    *link = n.left != KeyTree::kNone ? n.left : n.right;
    kind = DeleteCase::one_child;
  } else {
    // Predecessor: rightmost node of the left subtree; it has no right child.
    Index* pred_link = &n.left;
    while (t.at(*pred_link).right != KeyTree::kNone) pred_link = &t.at(*pred_link).right;
    const Index pred = *pred_link;
    n.key = t.at(pred).key;
    *pred_link = t.at(pred).left;
    kind = DeleteCase::two_children;
  }
  t.set_top(top);
  return kind;
}

OracleResult o_apply(const OpScript& ops) {
  OracleResult r;
  r.outcomes.reserve(ops.size());
  for (const auto& op : ops) {
    switch (op.kind) {
      case OpKind::insert: r.outcomes.push_back(o_insert(r.tree, op.key)); break;
      case OpKind::search: r.outcomes.push_back(o_search(r.tree, op.key)); break;
      case OpKind::remove: {
        const DeleteCase c = o_delete(r.tree, op.key);
        r.outcomes.push_back(c != DeleteCase::absent);
        if (c == DeleteCase::leaf) ++r.leaf_deletes;
        if (c == DeleteCase::one_child) ++r.one_child_deletes;
        if (c == DeleteCase::two_children) ++r.two_child_deletes;
        break;
      }
    }
  }
  return r;
}

std::string_view to_string(Constraints c) {
  switch (c) {
    case Constraints::sanitized_safe: return "sanitized-safe";
    case Constraints::faithful_safe: return "faithful-safe";
    case Constraints::unrestricted: return "unrestricted";
  }
  return "?";
}

std::optional<Constraints> parse_constraints(std::string_view text) {
  if (text == "sanitized-safe") return Constraints::sanitized_safe;
  if (text == "faithful-safe") return Constraints::faithful_safe;
  if (text == "unrestricted") return Constraints::unrestricted;
  return std::nullopt;
}

namespace {

Int pick(const std::set<Int>& keys, std::mt19937_64& rng) {
  std::uniform_int_distribution<std::size_t> d(0, keys.size() - 1);
  return *std::next(keys.begin(), static_cast<std::ptrdiff_t>(d(rng)));
}

}  // namespace

OpScript gen_workload(std::uint64_t seed, std::size_t size, Constraints constraints, Int max_key) {
  if (max_key < 0) throw std::invalid_argument("max_key must be non-negative");
  const auto key_space = static_cast<std::uint64_t>(max_key) + 1;
  if (constraints == Constraints::faithful_safe && size > key_space) {
    throw std::invalid_argument("faithful-safe workload of " + std::to_string(size) +
                                " ops needs more than " + std::to_string(key_space) +
                                " distinct keys");
  }
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<Int> any_key(0, max_key);
  std::uniform_int_distribution<int> percent(0, 99);
  std::set<Int> present;
  std::set<Int> used;  // faithful-safe: every key ever inserted
  OpScript ops;
  ops.reserve(size);

  auto fresh_key = [&]() {
    for (;;) {
      const Int k = any_key(rng);
      if (!used.count(k)) return k;
    }
  };

  for (std::size_t i = 0; i < size; ++i) {
    const int roll = percent(rng);
    if (constraints == Constraints::faithful_safe) {
      const bool last = i + 1 == size;
      if (last && size > 1 && roll < 25) {
        // Search a live key or one never touched.
        const bool hit = !present.empty() && percent(rng) < 50;
        ops.push_back({OpKind::search, hit ? pick(present, rng) : fresh_key()});
      } else if (roll >= 75 && !present.empty()) {
        const Int k = pick(present, rng);
        present.erase(k);
        ops.push_back({OpKind::remove, k});
      } else {
        const Int k = fresh_key();
        used.insert(k);
        present.insert(k);
        ops.push_back({OpKind::insert, k});
      }
      continue;
    }
    if (roll < 50) {
      const Int k = any_key(rng);
      present.insert(k);
      ops.push_back({OpKind::insert, k});
    } else if (roll < 75) {
      const bool hit = !present.empty() && percent(rng) < 50;
      ops.push_back({OpKind::search, hit ? pick(present, rng) : any_key(rng)});
    } else if (constraints == Constraints::unrestricted) {
      const bool hit = !present.empty() && percent(rng) < 50;
      const Int k = hit ? pick(present, rng) : any_key(rng);
      present.erase(k);
      ops.push_back({OpKind::remove, k});
    } else if (!present.empty()) {
      const Int k = pick(present, rng);
      present.erase(k);
      ops.push_back({OpKind::remove, k});
    } else {
      const Int k = any_key(rng);
      present.insert(k);
      ops.push_back({OpKind::insert, k});
    }
  }
  return ops;
}

std::optional<std::string> check_constraints(const OpScript& ops, Constraints constraints) {
  if (constraints == Constraints::unrestricted) return std::nullopt;
  std::set<Int> present;
  std::set<Int> used;
  std::size_t searches = 0;
  for (std::size_t i = 0; i < ops.size(); ++i) {
    const auto& op = ops[i];
    const std::string where = "op " + std::to_string(i) + ": ";
    switch (op.kind) {
      case OpKind::insert:
        if (constraints == Constraints::faithful_safe && used.count(op.key)) {
          return where + "key " + std::to_string(op.key) + " inserted twice";
        }
        used.insert(op.key);
        present.insert(op.key);
        break;
      case OpKind::remove:
        if (!present.count(op.key)) return where + "delete of absent key " + std::to_string(op.key);
        present.erase(op.key);
        break;
      case OpKind::search:
        if (constraints == Constraints::faithful_safe) {
          if (++searches > 1) return where + "more than one search";
          if (i + 1 != ops.size()) return where + "search is not the last op";
          if (used.count(op.key) && !present.count(op.key)) {
            return where + "search of deleted key " + std::to_string(op.key);
          }
        }
        break;
    }
  }
  return std::nullopt;
}

}  // namespace rootgraph
