#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "rootgraph/host_graph.hpp"
#include "rootgraph/interpreter.hpp"
#include "rootgraph/rule.hpp"

namespace rootgraph {

/// Host graph text: `[ (n0(R), "i":5) (n1, 2 # grey) | (e0, n0, n1, empty # dashed) ]`.
/// Node ids are `n<k>` (or a bare integer) and become NodeId k; edges likewise with `e<k>`.
HostGraph parse_host(std::string_view text);

/// Canonical text: ascending ids, one item per line, labels always printed.
std::string print_host(const HostGraph& g);

/// Parses a whole program (rule and procedure declarations) and validates it.
Program parse_program(std::string_view text);

/// Parses a program without validating it (for diagnostics tooling).
Program parse_program_unchecked(std::string_view text);

/// Parses a single rule declaration and validates it.
Rule parse_rule(std::string_view text);

std::string print_rule(const Rule& r);
std::string print_program(const Program& p);

enum class OpKind : char { insert = 'i', search = 's', remove = 'd' };

struct Instruction {
  OpKind kind = OpKind::insert;
  Int key = 0;

  friend bool operator==(const Instruction&, const Instruction&) = default;
};

/// A user op-script: one instruction per line.
using OpScript = std::vector<Instruction>;

/// Lines `i 5`, `s 7`, `d 2`; blank lines and `#` comments are ignored.
OpScript parse_opscript(std::string_view text);
std::string print_opscript(const OpScript& ops);

/// Linked list of unmarked instruction nodes labelled "i"/"s"/"d":key, head rooted,
/// one unmarked edge from each instruction to the next. Node k is instruction k.
HostGraph build_instruction_graph(const OpScript& ops);

}  // namespace rootgraph
