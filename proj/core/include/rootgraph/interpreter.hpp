#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "rootgraph/host_graph.hpp"
#include "rootgraph/rule.hpp"
#include "rootgraph/rule_engine.hpp"

namespace rootgraph {

/// Control-construct tree. Conditional forms keep three children: condition, then, else
/// (one-armed forms are desugared with Skip by the parser).
struct Command {
  enum class Kind : std::uint8_t {
    rule_call,
    rule_set,
    seq,
    loop,
    try_,
    if_,
    break_,
    fail,
    skip,
    proc_call,
  };

  Kind kind = Kind::skip;
  std::vector<std::string> names;   // rule_call / proc_call: one name; rule_set: members
  std::vector<Command> children;    // seq: items; loop: body; try_/if_: cond, then, else
  std::vector<std::size_t> targets;  // resolved rule or procedure indices

  static Command rule_call(std::string name);
  static Command rule_set(std::vector<std::string> names);
  static Command seq(std::vector<Command> items);
  static Command loop(Command body);
  static Command try_(Command cond, Command then_branch, Command else_branch);
  static Command if_(Command cond, Command then_branch, Command else_branch);
  static Command brk();
  static Command fail();
  static Command skip();
  static Command proc_call(std::string name);
};

std::string to_string(const Command& c);

struct Procedure {
  std::string name;
  Command body;
};

/// Rules plus procedure declarations; `Main` is the entry point.
class Program {
 public:
  std::vector<Rule> rules;
  std::vector<Procedure> procedures;

  std::optional<std::size_t> find_rule(std::string_view name) const;
  std::optional<std::size_t> find_procedure(std::string_view name) const;
  const Procedure& main() const;

  /// Resolves names inside a command built after validation (e.g. a continuation entry).
  /// Throws ValidationError on unknown names or misplaced break.
  void resolve(Command& c, bool break_allowed) const;
};

struct ProgramDiagnostics {
  std::vector<std::string> errors;
  std::vector<std::string> warnings;
  bool ok() const noexcept { return errors.empty(); }
};

/// Resolves names, rejects recursion and misplaced break, validates every rule.
ProgramDiagnostics validate_program(Program& p);
void require_valid(Program& p);

enum class ExecStatus : std::uint8_t { success, failure, break_signal };
std::string_view to_string(ExecStatus s);

struct RunOptions {
  std::uint64_t max_loop_iterations = 10'000'000;  // per loop execution
  bool record_trace = false;
  /// Called after every rule application with the applied rule's index and the
  /// counters accumulated so far.
  std::function<void(std::size_t rule, const HostGraph&, const MatchStats&)> on_apply;
};

struct RunResult {
  ExecStatus status = ExecStatus::success;
  MatchStats stats;
  std::vector<std::uint64_t> rule_applications;  // by rule index
  std::vector<std::size_t> trace;                // applied rule indices, in order
};

/// Runs `Main`. Throws DivergenceError when a loop exceeds its cap.
RunResult run(const Program& p, HostGraph& g, const RunOptions& options = {});

/// Runs an arbitrary resolved command against the program's declarations.
RunResult run_command(const Program& p, const Command& entry, HostGraph& g,
                      const RunOptions& options = {});

}  // namespace rootgraph
