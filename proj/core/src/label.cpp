#include "rootgraph/label.hpp"

#include <algorithm>

#include "rootgraph/errors.hpp"

namespace rootgraph {

std::string Atom::to_string() const {
  if (is_int()) return std::to_string(as_int());
  return "\"" + as_string() + "\"";
}

std::string Label::to_string() const {
  if (atoms.empty()) return "empty";
  std::string out;
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    if (i > 0) out += ':';
    out += atoms[i].to_string();
  }
  return out;
}

std::string_view to_string(VarKind kind) {
  switch (kind) {
    case VarKind::integer: return "int";
    case VarKind::character: return "char";
    case VarKind::string: return "string";
    case VarKind::atom: return "atom";
    case VarKind::list: return "list";
  }
  return "?";
}

std::optional<VarKind> parse_var_kind(std::string_view text) {
  if (text == "int") return VarKind::integer;
  if (text == "char") return VarKind::character;
  if (text == "string") return VarKind::string;
  if (text == "atom") return VarKind::atom;
  if (text == "list") return VarKind::list;
  return std::nullopt;
}

std::string to_string(const LabelPattern& pattern, std::span<const VarDecl> vars) {
  if (pattern.items.empty()) return "empty";
  std::string out;
  for (std::size_t i = 0; i < pattern.items.size(); ++i) {
    if (i > 0) out += ':';
    const auto& item = pattern.items[i];
    out += item.is_variable() ? vars[item.variable()].name : item.constant().to_string();
  }
  return out;
}

bool kind_admits(VarKind kind, const Label& value) {
  if (kind == VarKind::list) return true;
  if (value.size() != 1) return false;
  const Atom& atom = value.atoms.front();
  switch (kind) {
    case VarKind::integer: return atom.is_int();
    case VarKind::character: return atom.is_char();
    case VarKind::string: return atom.is_string();
    case VarKind::atom: return true;
    case VarKind::list: return true;
  }
  return false;
}

namespace {

// Binds or checks one variable against a candidate value.
bool bind_variable(VarIndex v, Label value, std::span<const VarDecl> vars, Assignment& a,
                   std::vector<VarIndex>& trail) {
  if (!kind_admits(vars[v].kind, value)) return false;
  if (a.bound(v)) return a.value(v) == value;
  a.bind(v, std::move(value));
  trail.push_back(v);
  return true;
}

bool match_single(const PatternItem& item, const Atom& atom, std::span<const VarDecl> vars,
                  Assignment& a, std::vector<VarIndex>& trail) {
  if (!item.is_variable()) return item.constant() == atom;
  return bind_variable(item.variable(), Label{atom}, vars, a, trail);
}

}  // namespace

bool unify_into(const LabelPattern& pattern, const Label& value, std::span<const VarDecl> vars,
                Assignment& a, std::vector<VarIndex>& trail) {
  const auto& items = pattern.items;
  const auto& atoms = value.atoms;
  const std::size_t mark = trail.size();
  auto undo = [&] {
    while (trail.size() > mark) {
      a.unbind(trail.back());
      trail.pop_back();
    }
    return false;
  };

  std::size_t list_pos = items.size();
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (items[i].is_variable() && vars[items[i].variable()].kind == VarKind::list) {
      list_pos = i;
      break;
    }
  }

  if (list_pos == items.size()) {
    if (items.size() != atoms.size()) return false;
    for (std::size_t i = 0; i < items.size(); ++i) {
      if (!match_single(items[i], atoms[i], vars, a, trail)) return undo();
    }
    return true;
  }

  const std::size_t fixed = items.size() - 1;
  if (atoms.size() < fixed) return false;
  for (std::size_t i = 0; i < list_pos; ++i) {
    if (!match_single(items[i], atoms[i], vars, a, trail)) return undo();
  }
  const std::size_t suffix = items.size() - list_pos - 1;
  const std::size_t middle_end = atoms.size() - suffix;
  for (std::size_t k = 0; k < suffix; ++k) {
    if (!match_single(items[list_pos + 1 + k], atoms[middle_end + k], vars, a, trail)) return undo();
  }
  Label middle(std::vector<Atom>(atoms.begin() + static_cast<std::ptrdiff_t>(list_pos),
                                 atoms.begin() + static_cast<std::ptrdiff_t>(middle_end)));
  if (!bind_variable(items[list_pos].variable(), std::move(middle), vars, a, trail)) return undo();
  return true;
}

std::optional<Assignment> unify_label(const LabelPattern& pattern, const Label& value,
                                      std::span<const VarDecl> vars, const Assignment& partial) {
  Assignment a = partial;
  std::vector<VarIndex> trail;
  if (!unify_into(pattern, value, vars, a, trail)) return std::nullopt;
  return a;
}

Label eval_pattern(const LabelPattern& pattern, const Assignment& a) {
  Label out;
  for (const auto& item : pattern.items) {
    if (!item.is_variable()) {
      out.atoms.push_back(item.constant());
      continue;
    }
    const VarIndex v = item.variable();
    if (v >= a.size() || !a.bound(v)) {
      throw EngineFault("eval_pattern: unbound variable #" + std::to_string(v));
    }
    const auto& bound = a.value(v).atoms;
    out.atoms.insert(out.atoms.end(), bound.begin(), bound.end());
  }
  return out;
}

// ---------------------------------------------------------------------------

IntTermPtr IntTerm::make_constant(Int value) {
  auto t = std::make_shared<IntTerm>();
  t->kind = Kind::constant;
  t->constant = value;
  return t;
}

IntTermPtr IntTerm::make_variable(VarIndex v) {
  auto t = std::make_shared<IntTerm>();
  t->kind = Kind::variable;
  t->variable = v;
  return t;
}

IntTermPtr IntTerm::make_degree(DegreeKind kind, std::size_t node) {
  auto t = std::make_shared<IntTerm>();
  t->kind = Kind::degree;
  t->degree = kind;
  t->node = node;
  return t;
}

IntTermPtr IntTerm::make_binary(Kind kind, IntTermPtr lhs, IntTermPtr rhs) {
  auto t = std::make_shared<IntTerm>();
  t->kind = kind;
  t->lhs = std::move(lhs);
  t->rhs = std::move(rhs);
  return t;
}

IntTermPtr IntTerm::make_negate(IntTermPtr operand) {
  auto t = std::make_shared<IntTerm>();
  t->kind = Kind::negate;
  t->lhs = std::move(operand);
  return t;
}

ConditionPtr Condition::make_compare(CompareOp op, IntTermPtr lhs, IntTermPtr rhs) {
  auto c = std::make_shared<Condition>();
  c->kind = Kind::compare;
  c->op = op;
  c->lhs_term = std::move(lhs);
  c->rhs_term = std::move(rhs);
  return c;
}

ConditionPtr Condition::make_and(ConditionPtr lhs, ConditionPtr rhs) {
  auto c = std::make_shared<Condition>();
  c->kind = Kind::conj;
  c->lhs = std::move(lhs);
  c->rhs = std::move(rhs);
  return c;
}

ConditionPtr Condition::make_or(ConditionPtr lhs, ConditionPtr rhs) {
  auto c = std::make_shared<Condition>();
  c->kind = Kind::disj;
  c->lhs = std::move(lhs);
  c->rhs = std::move(rhs);
  return c;
}

ConditionPtr Condition::make_not(ConditionPtr operand) {
  auto c = std::make_shared<Condition>();
  c->kind = Kind::negation;
  c->lhs = std::move(operand);
  return c;
}

namespace {

Int wrap_add(Int x, Int y) {
  return static_cast<Int>(static_cast<std::uint64_t>(x) + static_cast<std::uint64_t>(y));
}
Int wrap_sub(Int x, Int y) {
  return static_cast<Int>(static_cast<std::uint64_t>(x) - static_cast<std::uint64_t>(y));
}

std::optional<Int> eval_term(const IntTerm& t, const Assignment& a, const DegreeQuery& degrees) {
  switch (t.kind) {
    case IntTerm::Kind::constant: return t.constant;
    case IntTerm::Kind::variable: {
      if (t.variable >= a.size() || !a.bound(t.variable)) {
        throw EngineFault("eval_cond: unbound variable #" + std::to_string(t.variable));
      }
      const Label& v = a.value(t.variable);
      if (v.size() != 1 || !v.atoms.front().is_int()) return std::nullopt;
      return v.atoms.front().as_int();
    }
    case IntTerm::Kind::add:
    case IntTerm::Kind::sub: {
      auto x = eval_term(*t.lhs, a, degrees);
      auto y = eval_term(*t.rhs, a, degrees);
      if (!x || !y) return std::nullopt;
      return t.kind == IntTerm::Kind::add ? wrap_add(*x, *y) : wrap_sub(*x, *y);
    }
    case IntTerm::Kind::negate: {
      auto x = eval_term(*t.lhs, a, degrees);
      if (!x) return std::nullopt;
      return wrap_sub(0, *x);
    }
    case IntTerm::Kind::degree: return static_cast<Int>(degrees(t.node, t.degree));
  }
  return std::nullopt;
}

bool compare(CompareOp op, Int x, Int y) {
  switch (op) {
    case CompareOp::eq: return x == y;
    case CompareOp::ne: return x != y;
    case CompareOp::lt: return x < y;
    case CompareOp::le: return x <= y;
    case CompareOp::gt: return x > y;
    case CompareOp::ge: return x >= y;
  }
  return false;
}

void collect_term_variables(const IntTerm* t, std::vector<VarIndex>& out) {
  if (t == nullptr) return;
  if (t->kind == IntTerm::Kind::variable) out.push_back(t->variable);
  collect_term_variables(t->lhs.get(), out);
  collect_term_variables(t->rhs.get(), out);
}

void collect_term_nodes(const IntTerm* t, std::vector<std::size_t>& out) {
  if (t == nullptr) return;
  if (t->kind == IntTerm::Kind::degree) out.push_back(t->node);
  collect_term_nodes(t->lhs.get(), out);
  collect_term_nodes(t->rhs.get(), out);
}

std::string term_to_string(const IntTerm& t, std::span<const VarDecl> vars,
                           const std::function<std::string(std::size_t)>& node_name) {
  switch (t.kind) {
    case IntTerm::Kind::constant: return std::to_string(t.constant);
    case IntTerm::Kind::variable: return vars[t.variable].name;
    case IntTerm::Kind::add:
      return "(" + term_to_string(*t.lhs, vars, node_name) + " + " +
             term_to_string(*t.rhs, vars, node_name) + ")";
    case IntTerm::Kind::sub:
      return "(" + term_to_string(*t.lhs, vars, node_name) + " - " +
             term_to_string(*t.rhs, vars, node_name) + ")";
    case IntTerm::Kind::negate: return "-" + term_to_string(*t.lhs, vars, node_name);
    case IntTerm::Kind::degree:
      return std::string(t.degree == DegreeKind::out ? "outdeg(" : "indeg(") + node_name(t.node) +
             ")";
  }
  return "?";
}

std::string_view op_text(CompareOp op) {
  switch (op) {
    case CompareOp::eq: return "=";
    case CompareOp::ne: return "!=";
    case CompareOp::lt: return "<";
    case CompareOp::le: return "<=";
    case CompareOp::gt: return ">";
    case CompareOp::ge: return ">=";
  }
  return "?";
}

}  // namespace

bool eval_cond(const Condition* c, const Assignment& a, const DegreeQuery& degrees) {
  if (c == nullptr) return true;
  switch (c->kind) {
    case Condition::Kind::compare: {
      auto x = eval_term(*c->lhs_term, a, degrees);
      auto y = eval_term(*c->rhs_term, a, degrees);
      return x && y && compare(c->op, *x, *y);
    }
    case Condition::Kind::conj:
      return eval_cond(c->lhs.get(), a, degrees) && eval_cond(c->rhs.get(), a, degrees);
    case Condition::Kind::disj:
      return eval_cond(c->lhs.get(), a, degrees) || eval_cond(c->rhs.get(), a, degrees);
    case Condition::Kind::negation: return !eval_cond(c->lhs.get(), a, degrees);
  }
  return false;
}

void collect_variables(const Condition* c, std::vector<VarIndex>& out) {
  if (c == nullptr) return;
  collect_term_variables(c->lhs_term.get(), out);
  collect_term_variables(c->rhs_term.get(), out);
  collect_variables(c->lhs.get(), out);
  collect_variables(c->rhs.get(), out);
}

void collect_degree_nodes(const Condition* c, std::vector<std::size_t>& out) {
  if (c == nullptr) return;
  collect_term_nodes(c->lhs_term.get(), out);
  collect_term_nodes(c->rhs_term.get(), out);
  collect_degree_nodes(c->lhs.get(), out);
  collect_degree_nodes(c->rhs.get(), out);
}

std::string to_string(const Condition& c, std::span<const VarDecl> vars,
                      const std::function<std::string(std::size_t)>& node_name) {
  switch (c.kind) {
    case Condition::Kind::compare:
      return term_to_string(*c.lhs_term, vars, node_name) + " " + std::string(op_text(c.op)) + " " +
             term_to_string(*c.rhs_term, vars, node_name);
    case Condition::Kind::conj:
      return "(" + to_string(*c.lhs, vars, node_name) + " and " + to_string(*c.rhs, vars, node_name) +
             ")";
    case Condition::Kind::disj:
      return "(" + to_string(*c.lhs, vars, node_name) + " or " + to_string(*c.rhs, vars, node_name) +
             ")";
    case Condition::Kind::negation: return "not " + to_string(*c.lhs, vars, node_name);
  }
  return "?";
}

}  // namespace rootgraph
