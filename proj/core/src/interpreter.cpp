#include "rootgraph/interpreter.hpp"

#include <set>

#include "rootgraph/errors.hpp"

namespace rootgraph {

Command Command::rule_call(std::string name) {
  Command c;
  c.kind = Kind::rule_call;
  c.names.push_back(std::move(name));
  return c;
}

Command Command::rule_set(std::vector<std::string> names) {
  Command c;
  c.kind = Kind::rule_set;
  c.names = std::move(names);
  return c;
}

Command Command::seq(std::vector<Command> items) {
  Command c;
  c.kind = Kind::seq;
  c.children = std::move(items);
  return c;
}

Command Command::loop(Command body) {
  Command c;
  c.kind = Kind::loop;
  c.children.push_back(std::move(body));
  return c;
}

Command Command::try_(Command cond, Command then_branch, Command else_branch) {
  Command c;
  c.kind = Kind::try_;
  c.children = {std::move(cond), std::move(then_branch), std::move(else_branch)};
  return c;
}

Command Command::if_(Command cond, Command then_branch, Command else_branch) {
  Command c;
  c.kind = Kind::if_;
  c.children = {std::move(cond), std::move(then_branch), std::move(else_branch)};
  return c;
}

Command Command::brk() {
  Command c;
  c.kind = Kind::break_;
  return c;
}

Command Command::fail() {
  Command c;
  c.kind = Kind::fail;
  return c;
}

Command Command::skip() { return Command{}; }

Command Command::proc_call(std::string name) {
  Command c;
  c.kind = Kind::proc_call;
  c.names.push_back(std::move(name));
  return c;
}

namespace {

bool is_simple(const Command& c) {
  switch (c.kind) {
    case Command::Kind::rule_call:
    case Command::Kind::rule_set:
    case Command::Kind::break_:
    case Command::Kind::fail:
    case Command::Kind::skip:
    case Command::Kind::proc_call:
      return true;
    default:
      return false;
  }
}

std::string block(const Command& c) {
  if (is_simple(c) || c.kind == Command::Kind::loop) return to_string(c);
  return "(" + to_string(c) + ")";
}

}  // namespace

std::string to_string(const Command& c) {
  switch (c.kind) {
    case Command::Kind::rule_call:
    case Command::Kind::proc_call:
      return c.names.front();
    case Command::Kind::rule_set: {
      std::string out = "{";
      for (std::size_t i = 0; i < c.names.size(); ++i) {
        if (i > 0) out += ", ";
        out += c.names[i];
      }
      return out + "}";
    }
    case Command::Kind::seq: {
      std::string out;
      for (std::size_t i = 0; i < c.children.size(); ++i) {
        if (i > 0) out += "; ";
        out += block(c.children[i]);
      }
      return out;
    }
    case Command::Kind::loop: {
      const Command& body = c.children.front();
      return (is_simple(body) ? to_string(body) : "(" + to_string(body) + ")") + "!";
    }
    case Command::Kind::try_:
    case Command::Kind::if_: {
      std::string out = c.kind == Command::Kind::try_ ? "try " : "if ";
      out += block(c.children[0]);
      if (c.children[1].kind != Command::Kind::skip) out += " then " + block(c.children[1]);
      if (c.children[2].kind != Command::Kind::skip) out += " else " + block(c.children[2]);
      return out;
    }
    case Command::Kind::break_: return "break";
    case Command::Kind::fail: return "fail";
    case Command::Kind::skip: return "skip";
  }
  return "?";
}

std::string_view to_string(ExecStatus s) {
  switch (s) {
    case ExecStatus::success: return "success";
    case ExecStatus::failure: return "failure";
    case ExecStatus::break_signal: return "break";
  }
  return "?";
}

std::optional<std::size_t> Program::find_rule(std::string_view name) const {
  for (std::size_t i = 0; i < rules.size(); ++i) {
    if (rules[i].name == name) return i;
  }
  return std::nullopt;
}

std::optional<std::size_t> Program::find_procedure(std::string_view name) const {
  for (std::size_t i = 0; i < procedures.size(); ++i) {
    if (procedures[i].name == name) return i;
  }
  return std::nullopt;
}

const Procedure& Program::main() const {
  auto m = find_procedure("Main");
  if (!m) throw ValidationError("program has no Main");
  return procedures[*m];
}

namespace {

class Resolver {
 public:
  Resolver(const Program& p, std::vector<std::string>& errors) : p_(p), errors_(errors) {}

  // Resolves names in place and records procedure call edges of `owner`.
  void resolve_names(Command& c, std::set<std::size_t>* calls) {
    c.targets.clear();
    switch (c.kind) {
      case Command::Kind::rule_call:
      case Command::Kind::proc_call: {
        const std::string& name = c.names.front();
        if (auto r = p_.find_rule(name)) {
          c.kind = Command::Kind::rule_call;
          c.targets.push_back(*r);
        } else if (auto q = p_.find_procedure(name)) {
          c.kind = Command::Kind::proc_call;
          c.targets.push_back(*q);
          if (calls) calls->insert(*q);
        } else {
          errors_.push_back("unknown rule or procedure " + name);
        }
        break;
      }
      case Command::Kind::rule_set:
        for (const auto& name : c.names) {
          if (auto r = p_.find_rule(name)) {
            c.targets.push_back(*r);
          } else {
            errors_.push_back("rule set member " + name + " is not a rule");
          }
        }
        break;
      default:
        for (auto& child : c.children) resolve_names(child, calls);
        break;
    }
  }

  // Break is allowed inside a loop body unless it sits in a try/if condition
  // without an intervening loop. Procedure bodies are checked in each calling context.
  void check_break(const Command& c, bool allowed, const std::string& where) {
    switch (c.kind) {
      case Command::Kind::break_:
        if (!allowed) errors_.push_back("break outside a loop or in a condition (" + where + ")");
        break;
      case Command::Kind::loop:
        check_break(c.children.front(), true, where);
        break;
      case Command::Kind::try_:
      case Command::Kind::if_:
        check_break(c.children[0], false, where);
        check_break(c.children[1], allowed, where);
        check_break(c.children[2], allowed, where);
        break;
      case Command::Kind::proc_call: {
        if (c.targets.empty()) break;
        const std::size_t q = c.targets.front();
        if (!checked_.insert({q, allowed}).second) break;
        check_break(p_.procedures[q].body, allowed, p_.procedures[q].name);
        break;
      }
      default:
        for (const auto& child : c.children) check_break(child, allowed, where);
        break;
    }
  }

 private:
  const Program& p_;
  std::vector<std::string>& errors_;
  std::set<std::pair<std::size_t, bool>> checked_;
};

bool has_cycle(std::size_t v, const std::vector<std::set<std::size_t>>& calls,
               std::vector<int>& state) {
  state[v] = 1;
  for (std::size_t w : calls[v]) {
    if (state[w] == 1) return true;
    if (state[w] == 0 && has_cycle(w, calls, state)) return true;
  }
  state[v] = 2;
  return false;
}

}  // namespace

void Program::resolve(Command& c, bool break_allowed) const {
  std::vector<std::string> errors;
  Resolver resolver(*this, errors);
  resolver.resolve_names(c, nullptr);
  if (errors.empty()) resolver.check_break(c, break_allowed, "entry");
  if (!errors.empty()) throw ValidationError(errors.front());
}

ProgramDiagnostics validate_program(Program& p) {
  ProgramDiagnostics d;
  std::set<std::string> names;
  for (auto& r : p.rules) {
    if (!names.insert(r.name).second) d.errors.push_back("duplicate declaration " + r.name);
    auto rd = validate_rule(r);
    for (auto& e : rd.errors) d.errors.push_back("rule " + r.name + ": " + e);
    for (auto& w : rd.warnings) d.warnings.push_back(std::move(w));
  }
  for (const auto& q : p.procedures) {
    if (!names.insert(q.name).second) d.errors.push_back("duplicate declaration " + q.name);
  }
  if (!p.find_procedure("Main")) d.errors.push_back("program has no Main");
  if (!d.ok()) return d;

  Resolver resolver(p, d.errors);
  std::vector<std::set<std::size_t>> calls(p.procedures.size());
  for (std::size_t i = 0; i < p.procedures.size(); ++i) {
    resolver.resolve_names(p.procedures[i].body, &calls[i]);
  }
  if (!d.ok()) return d;

  std::vector<int> state(p.procedures.size(), 0);
  for (std::size_t i = 0; i < p.procedures.size(); ++i) {
    if (state[i] == 0 && has_cycle(i, calls, state)) {
      d.errors.push_back("recursive procedure call involving " + p.procedures[i].name);
      return d;
    }
  }
  resolver.check_break(p.main().body, false, "Main");
  return d;
}

void require_valid(Program& p) {
  auto d = validate_program(p);
  if (!d.ok()) throw ValidationError(d.errors.front());
}

namespace {

class Executor {
 public:
  Executor(const Program& p, HostGraph& g, const RunOptions& o, RunResult& r)
      : program_(p), graph_(g), options_(o), result_(r) {
    result_.rule_applications.assign(p.rules.size(), 0);
  }

  ExecStatus exec(const Command& c) {
    switch (c.kind) {
      case Command::Kind::rule_call: {
        const std::size_t r = target(c);
        auto m = find_match(program_.rules[r], graph_, result_.stats);
        if (!m) return ExecStatus::failure;
        apply(program_.rules[r], *m, graph_);
        applied(r);
        return ExecStatus::success;
      }
      case Command::Kind::rule_set: {
        for (std::size_t r : c.targets) {
          auto m = find_match(program_.rules[r], graph_, result_.stats);
          if (!m) continue;
          apply(program_.rules[r], *m, graph_);
          applied(r);
          return ExecStatus::success;
        }
        return ExecStatus::failure;
      }
      case Command::Kind::seq:
        for (const auto& child : c.children) {
          const ExecStatus s = exec(child);
          if (s != ExecStatus::success) return s;
        }
        return ExecStatus::success;
      case Command::Kind::loop: {
        const Command& body = c.children.front();
        for (std::uint64_t i = 0;; ++i) {
          if (i >= options_.max_loop_iterations) {
            throw DivergenceError("loop exceeded " + std::to_string(options_.max_loop_iterations) +
                                  " iterations: " + to_string(c));
          }
          const ScopeToken t = graph_.begin_scope();
          const ExecStatus s = exec(body);
          if (s == ExecStatus::failure) {
            graph_.rollback_scope(t);
            return ExecStatus::success;
          }
          graph_.commit_scope(t);
          if (s == ExecStatus::break_signal) return ExecStatus::success;
        }
      }
      case Command::Kind::try_: {
        const ScopeToken t = graph_.begin_scope();
        const ExecStatus s = exec(c.children[0]);
        if (s == ExecStatus::success) {
          graph_.commit_scope(t);
          return exec(c.children[1]);
        }
        graph_.rollback_scope(t);
        return exec(c.children[2]);
      }
      case Command::Kind::if_: {
        const ScopeToken t = graph_.begin_scope();
        const ExecStatus s = exec(c.children[0]);
        graph_.rollback_scope(t);
        return exec(c.children[s == ExecStatus::success ? 1 : 2]);
      }
      case Command::Kind::break_: return ExecStatus::break_signal;
      case Command::Kind::fail: return ExecStatus::failure;
      case Command::Kind::skip: return ExecStatus::success;
      case Command::Kind::proc_call: return exec(program_.procedures[target(c)].body);
    }
    return ExecStatus::failure;
  }

 private:
  static std::size_t target(const Command& c) {
    if (c.targets.empty()) throw EngineFault("unresolved command " + to_string(c));
    return c.targets.front();
  }

  void applied(std::size_t r) {
    ++result_.stats.applications;
    ++result_.rule_applications[r];
    if (options_.record_trace) result_.trace.push_back(r);
    if (options_.on_apply) options_.on_apply(r, graph_, result_.stats);
  }

  const Program& program_;
  HostGraph& graph_;
  const RunOptions& options_;
  RunResult& result_;
};

}  // namespace

RunResult run_command(const Program& p, const Command& entry, HostGraph& g,
                      const RunOptions& options) {
  RunResult result;
  Executor ex(p, g, options, result);
  result.status = ex.exec(entry);
  if (result.status == ExecStatus::break_signal) {
    throw EngineFault("break escaped to the top level");
  }
  return result;
}

RunResult run(const Program& p, HostGraph& g, const RunOptions& options) {
  return run_command(p, p.main().body, g, options);
}

}  // namespace rootgraph
