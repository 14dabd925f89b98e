#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace rootgraph {

using Int = std::int64_t;

/// A single label component: an integer or a string.
class Atom {
 public:
  Atom() : value_(Int{0}) {}
  Atom(Int value) : value_(value) {}  // NOLINT(google-explicit-constructor)
  Atom(int value) : value_(Int{value}) {}  // NOLINT(google-explicit-constructor)
  Atom(std::string value) : value_(std::move(value)) {}  // NOLINT(google-explicit-constructor)
  Atom(const char* value) : value_(std::string(value)) {}  // NOLINT(google-explicit-constructor)

  bool is_int() const noexcept { return std::holds_alternative<Int>(value_); }
  bool is_string() const noexcept { return std::holds_alternative<std::string>(value_); }
  bool is_char() const noexcept { return is_string() && as_string().size() == 1; }

  Int as_int() const { return std::get<Int>(value_); }
  const std::string& as_string() const { return std::get<std::string>(value_); }

  std::string to_string() const;

  friend bool operator==(const Atom&, const Atom&) = default;
  friend std::strong_ordering operator<=>(const Atom& a, const Atom& b) {
    return a.value_ <=> b.value_;
  }

 private:
  std::variant<Int, std::string> value_;
};

/// Ordered sequence of atoms; the empty sequence prints as `empty`.
struct Label {
  std::vector<Atom> atoms;

  Label() = default;
  Label(std::initializer_list<Atom> init) : atoms(init) {}
  explicit Label(std::vector<Atom> a) : atoms(std::move(a)) {}

  bool empty() const noexcept { return atoms.empty(); }
  std::size_t size() const noexcept { return atoms.size(); }

  std::string to_string() const;

  friend bool operator==(const Label&, const Label&) = default;
  friend std::strong_ordering operator<=>(const Label& a, const Label& b) {
    return std::lexicographical_compare_three_way(a.atoms.begin(), a.atoms.end(), b.atoms.begin(),
                                                  b.atoms.end());
  }
};

enum class VarKind : std::uint8_t { integer, character, string, atom, list };

std::string_view to_string(VarKind kind);
std::optional<VarKind> parse_var_kind(std::string_view text);

struct VarDecl {
  std::string name;
  VarKind kind = VarKind::list;

  friend bool operator==(const VarDecl&, const VarDecl&) = default;
};

using VarIndex = std::uint32_t;

/// One item of a label pattern: a constant atom or a reference into the rule's variables.
struct PatternItem {
  std::variant<Atom, VarIndex> value;

  bool is_variable() const noexcept { return std::holds_alternative<VarIndex>(value); }
  VarIndex variable() const { return std::get<VarIndex>(value); }
  const Atom& constant() const { return std::get<Atom>(value); }

  friend bool operator==(const PatternItem&, const PatternItem&) = default;
};

struct LabelPattern {
  std::vector<PatternItem> items;

  bool empty() const noexcept { return items.empty(); }

  friend bool operator==(const LabelPattern&, const LabelPattern&) = default;
};

std::string to_string(const LabelPattern& pattern, std::span<const VarDecl> vars);

/// Variable bindings of a (partial) match. Every binding is stored as a label;
/// single-atom kinds hold exactly one atom.
class Assignment {
 public:
  Assignment() = default;
  explicit Assignment(std::size_t var_count) : bindings_(var_count) {}

  std::size_t size() const noexcept { return bindings_.size(); }
  bool bound(VarIndex v) const { return bindings_.at(v).has_value(); }
  const Label& value(VarIndex v) const { return *bindings_.at(v); }
  void bind(VarIndex v, Label value) { bindings_.at(v) = std::move(value); }
  void unbind(VarIndex v) { bindings_.at(v).reset(); }

  friend bool operator==(const Assignment&, const Assignment&) = default;

 private:
  std::vector<std::optional<Label>> bindings_;
};

/// Whether `value` is a legal binding for a variable of `kind`.
bool kind_admits(VarKind kind, const Label& value);

/// Extends `a` in place so that `pattern` evaluates to `value`. Variables newly bound are
/// appended to `trail`. On mismatch returns false and leaves `a` and `trail` unchanged.
bool unify_into(const LabelPattern& pattern, const Label& value, std::span<const VarDecl> vars,
                Assignment& a, std::vector<VarIndex>& trail);

/// Pure form of unify_into: nullopt means Mismatch.
std::optional<Assignment> unify_label(const LabelPattern& pattern, const Label& value,
                                      std::span<const VarDecl> vars, const Assignment& partial);

/// Substitutes bindings into a pattern. Throws EngineFault on an unbound variable.
Label eval_pattern(const LabelPattern& pattern, const Assignment& a);

// ---------------------------------------------------------------------------
// Conditions

enum class DegreeKind : std::uint8_t { out, in };

/// Answers outdeg/indeg for a left-hand pattern node index.
using DegreeQuery = std::function<std::size_t(std::size_t pattern_node, DegreeKind)>;

struct IntTerm;
using IntTermPtr = std::shared_ptr<const IntTerm>;

struct IntTerm {
  enum class Kind : std::uint8_t { constant, variable, add, sub, negate, degree };

  Kind kind = Kind::constant;
  Int constant = 0;
  VarIndex variable = 0;
  std::size_t node = 0;  // degree: left-hand pattern node index
  DegreeKind degree = DegreeKind::out;
  IntTermPtr lhs;
  IntTermPtr rhs;

  static IntTermPtr make_constant(Int value);
  static IntTermPtr make_variable(VarIndex v);
  static IntTermPtr make_degree(DegreeKind kind, std::size_t node);
  static IntTermPtr make_binary(Kind kind, IntTermPtr lhs, IntTermPtr rhs);
  static IntTermPtr make_negate(IntTermPtr operand);
};

enum class CompareOp : std::uint8_t { eq, ne, lt, le, gt, ge };

struct Condition;
using ConditionPtr = std::shared_ptr<const Condition>;

struct Condition {
  enum class Kind : std::uint8_t { compare, conj, disj, negation };

  Kind kind = Kind::compare;
  CompareOp op = CompareOp::eq;
  IntTermPtr lhs_term;
  IntTermPtr rhs_term;
  ConditionPtr lhs;
  ConditionPtr rhs;

  static ConditionPtr make_compare(CompareOp op, IntTermPtr lhs, IntTermPtr rhs);
  static ConditionPtr make_and(ConditionPtr lhs, ConditionPtr rhs);
  static ConditionPtr make_or(ConditionPtr lhs, ConditionPtr rhs);
  static ConditionPtr make_not(ConditionPtr operand);
};

/// Evaluates a condition. A null condition is true. Integer arithmetic wraps at 64 bits;
/// a comparison touching a non-integer binding is false.
bool eval_cond(const Condition* c, const Assignment& a, const DegreeQuery& degrees);
inline bool eval_cond(const ConditionPtr& c, const Assignment& a, const DegreeQuery& degrees) {
  return eval_cond(c.get(), a, degrees);
}

/// Variables referenced anywhere in the condition.
void collect_variables(const Condition* c, std::vector<VarIndex>& out);
/// Pattern nodes referenced by degree terms.
void collect_degree_nodes(const Condition* c, std::vector<std::size_t>& out);

std::string to_string(const Condition& c, std::span<const VarDecl> vars,
                      const std::function<std::string(std::size_t)>& node_name);

}  // namespace rootgraph
