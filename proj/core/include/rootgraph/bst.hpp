#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rootgraph/host_graph.hpp"
#include "rootgraph/interpreter.hpp"
#include "rootgraph/key_tree.hpp"
#include "rootgraph/oracle.hpp"
#include "rootgraph/text.hpp"

namespace rootgraph {

/// faithful: the original program unchanged. sanitized: adds `unroot` and the
/// duplicate/absent-key guards so that no stale roots survive an operation.
enum class BstVariant : std::uint8_t { faithful, sanitized };

std::string_view to_string(BstVariant v);
std::optional<BstVariant> parse_variant(std::string_view text);

/// Source text of the bundled program.
std::string_view program_text(BstVariant v);

/// The parsed and validated program (built once, shared, immutable).
const Program& program(BstVariant v);

/// `next_op; (Main's loop body)!`: continues the instruction list from the op after
/// the currently rooted one. Used to run a single op on a prepared graph.
const Command& resume_command(BstVariant v);

struct SearchHit {
  std::size_t op = 0;
  Int key = 0;
  NodeId target;

  friend bool operator==(const SearchHit&, const SearchHit&) = default;
};

struct BstRunResult {
  ExecStatus status = ExecStatus::success;
  HostGraph graph;
  KeyTree tree;
  std::optional<std::string> tree_error;  // set when the final graph holds no readable tree
  std::vector<SearchHit> search_hits;  // ordered by op index
  std::size_t garbage_count = 0;
  MatchStats stats;
  std::vector<MatchStats> per_op;  // counters spent on each op (make_root counts toward op 0)
  std::vector<std::uint64_t> rule_applications;
  std::vector<std::size_t> trace;
};

/// Builds the instruction graph, runs the program, and reads back the results.
/// Throws DivergenceError if a loop exceeds its cap. A final graph without a readable
/// tree leaves `tree` empty and sets `tree_error`.
BstRunResult run_bst(const OpScript& ops, BstVariant variant, const RunOptions& options = {});

/// Same, with any program that follows the bundled program's conventions
/// (a `next_op` rule and a green-node tree).
BstRunResult run_bst(const OpScript& ops, const Program& program, const RunOptions& options = {});

/// Reads the tree below the green node. Among at most two grey children, the smaller
/// key is the left child. Dashed and red edges and non-grey nodes are ignored.
KeyTree extract_tree(const HostGraph& g);

/// Grey nodes of the tree hanging below the green node, in no particular order.
std::vector<NodeId> tree_nodes(const HostGraph& g);

/// Dashed edges leaving search instructions: (op index, key, target).
std::vector<SearchHit> search_hits(const HostGraph& g);

/// Non-instruction nodes that are neither the green node nor part of the tree.
std::size_t garbage_count(const HostGraph& g);

struct OutputReport {
  std::vector<std::string> violations;
  std::vector<std::string> notes;
  std::size_t garbage_count = 0;
  std::size_t stale_roots = 0;

  bool ok() const noexcept { return violations.empty(); }
  std::string to_string() const;
};

/// Checks a final graph against the expected output shape for `ops`.
OutputReport validate_output(const HostGraph& g, const OpScript& ops);

/// Compares a run against the reference tree: final tree equality, and a search hit
/// for exactly those searches whose key was present. Returns the first difference.
std::optional<std::string> compare_with_oracle(const OpScript& ops, const BstRunResult& run);

/// Runs `program` on `ops` and compares; exceptions count as mismatches.
std::optional<std::string> differential_check(const OpScript& ops, const Program& program);

/// Greedily drops ops while the script still satisfies `constraints` and still fails
/// differential_check. Returns a script that is minimal under single-op removal.
OpScript minimize_counterexample(OpScript ops, const Program& program, Constraints constraints);

/// The graph the program produces after executing `prefix`, built directly, with the
/// instructions of `rest` appended to the list (unexecuted). The last prefix
/// instruction is rooted. `prefix` must be non-empty and consist of distinct inserts.
HostGraph build_prepared_graph(const OpScript& prefix, const OpScript& rest);

}  // namespace rootgraph
