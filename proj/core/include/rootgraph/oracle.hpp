#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rootgraph/key_tree.hpp"
#include "rootgraph/text.hpp"

namespace rootgraph {

/// Which structural case a deletion hit.
enum class DeleteCase : std::uint8_t { absent, leaf, one_child, two_children };

/// Inserts `key`; duplicates leave the tree unchanged and return false.
bool o_insert(KeyTree& t, Int key);
bool o_search(const KeyTree& t, Int key);
/// Deletes `key`. A node with two children takes the maximum key of its left
/// subtree, and that node is removed instead.
DeleteCase o_delete(KeyTree& t, Int key);

struct OracleResult {
  KeyTree tree;
  /// Per op: inserted / found / deleted.
  std::vector<bool> outcomes;
  std::size_t leaf_deletes = 0;
  std::size_t one_child_deletes = 0;
  std::size_t two_child_deletes = 0;
};

OracleResult o_apply(const OpScript& ops);

enum class Constraints : std::uint8_t { sanitized_safe, faithful_safe, unrestricted };

std::string_view to_string(Constraints c);
std::optional<Constraints> parse_constraints(std::string_view text);

inline constexpr Int kDefaultMaxKey = 10'000;

/// Deterministic random workload of `size` ops with keys in [0, max_key].
/// Throws std::invalid_argument when the constraints cannot be met.
OpScript gen_workload(std::uint64_t seed, std::size_t size, Constraints constraints,
                      Int max_key = kDefaultMaxKey);

/// Returns the first constraint violation of `ops`, or nullopt.
std::optional<std::string> check_constraints(const OpScript& ops, Constraints constraints);

}  // namespace rootgraph
