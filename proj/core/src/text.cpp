#include "rootgraph/text.hpp"

#include <cctype>
#include <charconv>
#include <set>

#include "rootgraph/errors.hpp"

namespace rootgraph {

namespace {

struct Token {
  enum class Kind : std::uint8_t { ident, integer, string, punct, end };
  Kind kind = Kind::end;
  std::string text;
  std::size_t line = 0;
  std::size_t column = 0;
};

std::vector<Token> tokenize(std::string_view src) {
  std::vector<Token> out;
  std::size_t i = 0;
  std::size_t line = 1;
  std::size_t line_start = 0;
  auto col = [&](std::size_t pos) { return pos - line_start + 1; };
  while (i < src.size()) {
    const char c = src[i];
    if (c == '\n') {
      ++line;
      ++i;
      line_start = i;
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    if (c == '/' && i + 1 < src.size() && src[i + 1] == '/') {
      while (i < src.size() && src[i] != '\n') ++i;
      continue;
    }
    if (c == '/' && i + 1 < src.size() && src[i + 1] == '*') {
      const std::size_t start_line = line;
      const std::size_t start_col = col(i);
      i += 2;
      while (i + 1 < src.size() && !(src[i] == '*' && src[i + 1] == '/')) {
        if (src[i] == '\n') {
          ++line;
          line_start = i + 1;
        }
        ++i;
      }
      if (i + 1 >= src.size()) throw ParseError("unterminated comment", start_line, start_col);
      i += 2;
      continue;
    }
    Token t;
    t.line = line;
    t.column = col(i);
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < src.size() && (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_')) {
        ++j;
      }
      t.kind = Token::Kind::ident;
      t.text = std::string(src.substr(i, j - i));
      i = j;
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
      t.kind = Token::Kind::integer;
      t.text = std::string(src.substr(i, j - i));
      i = j;
    } else if (c == '"') {
      std::size_t j = i + 1;
      while (j < src.size() && src[j] != '"' && src[j] != '\n') ++j;
      if (j >= src.size() || src[j] != '"') throw ParseError("unterminated string", t.line, t.column);
      t.kind = Token::Kind::string;
      t.text = std::string(src.substr(i + 1, j - i - 1));
      i = j + 1;
    } else {
      static const char* const two[] = {"=>", "!=", "<=", ">="};
      t.kind = Token::Kind::punct;
      for (const char* op : two) {
        if (src.substr(i, 2) == op) t.text = op;
      }
      if (t.text.empty()) {
        static const std::string_view single = "()[]{},;:|=!#<>+-.*/";
        if (single.find(c) == std::string_view::npos) {
          throw ParseError(std::string("unexpected character '") + c + "'", t.line, t.column);
        }
        t.text = std::string(1, c);
      }
      i += t.text.size();
    }
    out.push_back(std::move(t));
  }
  Token end;
  end.kind = Token::Kind::end;
  end.line = line;
  end.column = col(i);
  out.push_back(end);
  return out;
}

class Parser {
 public:
  explicit Parser(std::string_view src) : tokens_(tokenize(src)) {}

  const Token& peek(std::size_t ahead = 0) const {
    return tokens_[std::min(pos_ + ahead, tokens_.size() - 1)];
  }
  bool at_end() const { return peek().kind == Token::Kind::end; }
  Token next() {
    Token t = peek();
    if (pos_ < tokens_.size() - 1) ++pos_;
    return t;
  }
  std::size_t position() const { return pos_; }
  void rewind(std::size_t p) { pos_ = p; }

  bool is_punct(std::string_view p, std::size_t ahead = 0) const {
    const Token& t = peek(ahead);
    return t.kind == Token::Kind::punct && t.text == p;
  }
  bool is_keyword(std::string_view k, std::size_t ahead = 0) const {
    const Token& t = peek(ahead);
    return t.kind == Token::Kind::ident && t.text == k;
  }
  bool accept_punct(std::string_view p) {
    if (!is_punct(p)) return false;
    next();
    return true;
  }
  bool accept_keyword(std::string_view k) {
    if (!is_keyword(k)) return false;
    next();
    return true;
  }
  [[noreturn]] void fail(const std::string& message) const { fail_at(peek(), message); }
  [[noreturn]] static void fail_at(const Token& t, const std::string& message) {
    throw ParseError(message, t.line, t.column);
  }
  static std::string describe(const Token& t) {
    switch (t.kind) {
      case Token::Kind::end: return "end of input";
      case Token::Kind::string: return "\"" + t.text + "\"";
      default: return "'" + t.text + "'";
    }
  }
  void expect_punct(std::string_view p) {
    if (!accept_punct(p)) fail("expected '" + std::string(p) + "' but found " + describe(peek()));
  }
  void expect_keyword(std::string_view k) {
    if (!accept_keyword(k)) fail("expected '" + std::string(k) + "' but found " + describe(peek()));
  }
  std::string expect_ident(const std::string& what) {
    if (peek().kind != Token::Kind::ident) fail("expected " + what + " but found " + describe(peek()));
    return next().text;
  }
  Int expect_integer() {
    const bool negative = accept_punct("-");
    const Token t = peek();
    if (t.kind != Token::Kind::integer) fail("expected integer but found " + describe(t));
    next();
    // Parse with the sign attached so the most negative value is representable.
    const std::string digits = (negative ? "-" : "") + t.text;
    Int value = 0;
    auto [p, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), value);
    if (ec != std::errc{} || p != digits.data() + digits.size()) fail_at(t, "integer out of range");
    return value;
  }

 private:
  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
};

// ---------------------------------------------------------------------------
// Host graphs

std::uint32_t parse_item_id(Parser& p, char prefix, const std::string& what) {
  const Token t = p.next();
  std::string_view digits;
  if (t.kind == Token::Kind::integer) {
    digits = t.text;
  } else if (t.kind == Token::Kind::ident && t.text.size() > 1 && t.text[0] == prefix &&
             std::all_of(t.text.begin() + 1, t.text.end(),
                         [](char c) { return std::isdigit(static_cast<unsigned char>(c)); })) {
    digits = std::string_view(t.text).substr(1);
  } else {
    Parser::fail_at(t, "expected " + what + " id of the form " + prefix + "<number>, found " +
                           Parser::describe(t));
  }
  std::uint32_t value = 0;
  auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), value);
  if (ec != std::errc{} || value == ~std::uint32_t{0}) Parser::fail_at(t, what + " id out of range");
  return value;
}

Atom parse_host_atom(Parser& p) {
  const Token& t = p.peek();
  if (t.kind == Token::Kind::string) return Atom(p.next().text);
  if (t.kind == Token::Kind::integer || p.is_punct("-")) return Atom(p.expect_integer());
  p.fail("expected label atom but found " + Parser::describe(t));
}

Label parse_host_label(Parser& p) {
  if (p.accept_keyword("empty")) return {};
  Label label;
  label.atoms.push_back(parse_host_atom(p));
  while (p.accept_punct(":")) label.atoms.push_back(parse_host_atom(p));
  if (p.is_punct(".") || p.is_punct("+")) p.fail("unsupported feature: label operators");
  return label;
}

Mark parse_mark_suffix(Parser& p) {
  if (!p.accept_punct("#")) return Mark::none;
  const Token t = p.peek();
  const std::string name = p.expect_ident("mark name");
  auto m = parse_mark(name);
  if (!m) Parser::fail_at(t, "unknown mark '" + name + "'");
  return *m;
}

bool parse_root_flag(Parser& p) {
  if (!p.is_punct("(")) return false;
  if (p.is_keyword("R", 1) && p.is_punct(")", 2)) {
    p.next();
    p.next();
    p.next();
    return true;
  }
  if (p.is_keyword("B", 1)) p.fail("unsupported feature: bidirectional edges");
  p.fail("expected '(R)'");
}

// ---------------------------------------------------------------------------
// Rules

class RuleParser {
 public:
  explicit RuleParser(Parser& p) : p_(p) {}

  Rule parse() {
    Rule r;
    r.name = p_.expect_ident("rule name");
    p_.expect_punct("(");
    if (!p_.is_punct(")")) {
      do {
        std::vector<Token> names;
        do {
          const Token t = p_.peek();
          p_.expect_ident("variable name");
          names.push_back(t);
        } while (p_.accept_punct(","));
        p_.expect_punct(":");
        const Token kt = p_.peek();
        const std::string kind_name = p_.expect_ident("variable type");
        auto kind = parse_var_kind(kind_name);
        if (!kind) Parser::fail_at(kt, "unknown variable type '" + kind_name + "'");
        for (const auto& n : names) {
          for (const auto& v : r.vars) {
            if (v.name == n.text) Parser::fail_at(n, "duplicate variable '" + n.text + "'");
          }
          r.vars.push_back(VarDecl{n.text, *kind});
        }
      } while (p_.accept_punct(";"));
    }
    p_.expect_punct(")");
    vars_ = &r.vars;
    r.lhs = parse_graph();
    p_.expect_punct("=>");
    r.rhs = parse_graph();
    p_.expect_keyword("interface");
    p_.expect_punct("=");
    p_.expect_punct("{");
    if (!p_.is_punct("}")) {
      do {
        r.interface.push_back(parse_pattern_id());
      } while (p_.accept_punct(","));
    }
    p_.expect_punct("}");
    if (p_.accept_keyword("where")) {
      lhs_ = &r.lhs;
      r.condition = parse_or();
    }
    return r;
  }

 private:
  std::string parse_pattern_id() {
    const Token t = p_.next();
    if (t.kind != Token::Kind::ident && t.kind != Token::Kind::integer) {
      Parser::fail_at(t, "expected node or edge id but found " + Parser::describe(t));
    }
    return t.text;
  }

  std::optional<VarIndex> find_var(const std::string& name) const {
    for (std::size_t i = 0; i < vars_->size(); ++i) {
      if ((*vars_)[i].name == name) return static_cast<VarIndex>(i);
    }
    return std::nullopt;
  }

  PatternItem parse_pattern_atom() {
    const Token t = p_.peek();
    if (t.kind == Token::Kind::string) return PatternItem{Atom(p_.next().text)};
    if (t.kind == Token::Kind::integer || p_.is_punct("-")) return PatternItem{Atom(p_.expect_integer())};
    if (t.kind == Token::Kind::ident) {
      static const std::set<std::string> unsupported = {"length", "indeg", "outdeg"};
      if (unsupported.count(t.text)) p_.fail("unsupported feature: '" + t.text + "' in labels");
      p_.next();
      auto v = find_var(t.text);
      if (!v) Parser::fail_at(t, "undeclared variable '" + t.text + "'");
      return PatternItem{*v};
    }
    p_.fail("expected label but found " + Parser::describe(t));
  }

  LabelPattern parse_label() {
    LabelPattern lp;
    if (p_.accept_keyword("empty")) return lp;
    lp.items.push_back(parse_pattern_atom());
    while (p_.accept_punct(":")) lp.items.push_back(parse_pattern_atom());
    if (p_.is_punct(".") || p_.is_punct("+") || p_.is_punct("-") || p_.is_punct("*") ||
        p_.is_punct("/")) {
      p_.fail("unsupported feature: label expressions");
    }
    return lp;
  }

  PatternGraph parse_graph() {
    PatternGraph g;
    p_.expect_punct("[");
    while (p_.is_punct("(")) {
      p_.next();
      PatternNode n;
      const Token id = p_.peek();
      n.name = parse_pattern_id();
      if (g.find_node(n.name)) Parser::fail_at(id, "duplicate node id '" + n.name + "'");
      n.rooted = parse_root_flag(p_);
      p_.expect_punct(",");
      n.label = parse_label();
      n.mark = parse_mark_suffix(p_);
      if (n.mark == Mark::dashed) Parser::fail_at(id, "nodes cannot be dashed");
      p_.expect_punct(")");
      g.nodes.push_back(std::move(n));
    }
    p_.expect_punct("|");
    while (p_.is_punct("(")) {
      p_.next();
      PatternEdge e;
      const Token id = p_.peek();
      e.name = parse_pattern_id();
      if (g.find_edge(e.name)) Parser::fail_at(id, "duplicate edge id '" + e.name + "'");
      if (p_.is_punct("(")) {
        if (p_.is_keyword("B", 1)) p_.fail("unsupported feature: bidirectional edges");
        p_.fail("unexpected '(' after edge id");
      }
      p_.expect_punct(",");
      e.source = node_ref(g);
      p_.expect_punct(",");
      e.target = node_ref(g);
      p_.expect_punct(",");
      e.label = parse_label();
      e.mark = parse_mark_suffix(p_);
      if (e.mark == Mark::grey) Parser::fail_at(id, "edges cannot be grey");
      p_.expect_punct(")");
      g.edges.push_back(std::move(e));
    }
    p_.expect_punct("]");
    return g;
  }

  std::size_t node_ref(const PatternGraph& g) {
    const Token t = p_.peek();
    const std::string name = parse_pattern_id();
    auto n = g.find_node(name);
    if (!n) Parser::fail_at(t, "edge endpoint '" + name + "' is not a node of this graph");
    return *n;
  }

  // Conditions ------------------------------------------------------------

  ConditionPtr parse_or() {
    ConditionPtr c = parse_and();
    while (p_.accept_keyword("or")) c = Condition::make_or(c, parse_and());
    return c;
  }

  ConditionPtr parse_and() {
    ConditionPtr c = parse_not();
    while (p_.accept_keyword("and")) c = Condition::make_and(c, parse_not());
    return c;
  }

  ConditionPtr parse_not() {
    if (p_.accept_keyword("not")) return Condition::make_not(parse_not());
    if (p_.is_punct("(")) {
      const std::size_t save = p_.position();
      try {
        p_.next();
        ConditionPtr inner = parse_or();
        p_.expect_punct(")");
        if (!is_comparison_or_arith()) return inner;
      } catch (const ParseError&) {
      }
      p_.rewind(save);
    }
    return parse_comparison();
  }

  bool is_comparison_or_arith() const {
    for (const char* op : {"=", "!=", "<", "<=", ">", ">=", "+", "-"}) {
      if (p_.is_punct(op)) return true;
    }
    return false;
  }

  ConditionPtr parse_comparison() {
    IntTermPtr lhs = parse_term();
    static const std::pair<const char*, CompareOp> ops[] = {
        {"=", CompareOp::eq}, {"!=", CompareOp::ne}, {"<", CompareOp::lt},
        {"<=", CompareOp::le}, {">", CompareOp::gt}, {">=", CompareOp::ge}};
    for (const auto& [text, op] : ops) {
      if (p_.accept_punct(text)) return Condition::make_compare(op, lhs, parse_term());
    }
    p_.fail("expected comparison operator but found " + Parser::describe(p_.peek()));
  }

  IntTermPtr parse_term() {
    IntTermPtr t = parse_factor();
    for (;;) {
      if (p_.accept_punct("+")) {
        t = IntTerm::make_binary(IntTerm::Kind::add, t, parse_factor());
      } else if (p_.accept_punct("-")) {
        t = IntTerm::make_binary(IntTerm::Kind::sub, t, parse_factor());
      } else if (p_.is_punct("*") || p_.is_punct("/")) {
        p_.fail("unsupported feature: multiplication and division");
      } else {
        return t;
      }
    }
  }

  IntTermPtr parse_factor() {
    const Token t = p_.peek();
    if (p_.accept_punct("-")) return IntTerm::make_negate(parse_factor());
    if (p_.accept_punct("(")) {
      IntTermPtr inner = parse_term();
      p_.expect_punct(")");
      return inner;
    }
    if (t.kind == Token::Kind::integer) return IntTerm::make_constant(p_.expect_integer());
    if (t.kind == Token::Kind::string) p_.fail("unsupported feature: string comparisons");
    if (t.kind != Token::Kind::ident) p_.fail("expected integer term but found " + Parser::describe(t));
    if (t.text == "outdeg" || t.text == "indeg") {
      p_.next();
      p_.expect_punct("(");
      const Token nt = p_.peek();
      const std::string name = parse_pattern_id();
      auto n = lhs_->find_node(name);
      if (!n) Parser::fail_at(nt, "'" + name + "' is not a left-hand node");
      p_.expect_punct(")");
      return IntTerm::make_degree(t.text == "outdeg" ? DegreeKind::out : DegreeKind::in, *n);
    }
    static const std::set<std::string> unsupported = {"edge", "length", "int", "char",
                                                      "string", "atom", "list"};
    if (unsupported.count(t.text)) p_.fail("unsupported feature: '" + t.text + "' in conditions");
    p_.next();
    auto v = find_var(t.text);
    if (!v) Parser::fail_at(t, "undeclared variable '" + t.text + "'");
    const VarKind kind = (*vars_)[*v].kind;
    if (kind != VarKind::integer && kind != VarKind::atom) {
      Parser::fail_at(t, "variable '" + t.text + "' is not an integer");
    }
    return IntTerm::make_variable(*v);
  }

  Parser& p_;
  const std::vector<VarDecl>* vars_ = nullptr;
  const PatternGraph* lhs_ = nullptr;
};

// ---------------------------------------------------------------------------
// Commands

class CommandParser {
 public:
  explicit CommandParser(Parser& p) : p_(p) {}

  Command parse_sequence() {
    std::vector<Command> items;
    items.push_back(parse_command());
    while (p_.accept_punct(";")) items.push_back(parse_command());
    if (items.size() == 1) return std::move(items.front());
    return Command::seq(std::move(items));
  }

 private:
  Command parse_command() {
    if (p_.accept_keyword("if")) {
      Command cond = parse_block();
      Command then_branch = p_.accept_keyword("then") ? parse_block() : Command::skip();
      Command else_branch = p_.accept_keyword("else") ? parse_block() : Command::skip();
      return Command::if_(std::move(cond), std::move(then_branch), std::move(else_branch));
    }
    if (p_.accept_keyword("try")) {
      Command cond = parse_block();
      Command then_branch = p_.accept_keyword("then") ? parse_block() : Command::skip();
      Command else_branch = p_.accept_keyword("else") ? parse_block() : Command::skip();
      return Command::try_(std::move(cond), std::move(then_branch), std::move(else_branch));
    }
    Command c = parse_block();
    if (p_.is_keyword("or")) p_.fail("unsupported feature: 'or' command");
    return c;
  }

  Command parse_block() {
    Command c;
    if (p_.accept_punct("(")) {
      c = parse_sequence();
      p_.expect_punct(")");
    } else if (p_.accept_punct("{")) {
      std::vector<std::string> names;
      if (!p_.is_punct("}")) {
        do {
          names.push_back(p_.expect_ident("rule name"));
        } while (p_.accept_punct(","));
      }
      p_.expect_punct("}");
      c = Command::rule_set(std::move(names));
    } else if (p_.accept_keyword("skip")) {
      c = Command::skip();
    } else if (p_.accept_keyword("fail")) {
      c = Command::fail();
    } else if (p_.accept_keyword("break")) {
      c = Command::brk();
    } else {
      const Token t = p_.peek();
      static const std::set<std::string> reserved = {"then", "else", "if", "try", "or", "where",
                                                     "interface"};
      if (t.kind != Token::Kind::ident || reserved.count(t.text)) {
        p_.fail("expected command but found " + Parser::describe(t));
      }
      p_.next();
      c = Command::proc_call(t.text);  // resolved to a rule call during validation
    }
    if (p_.accept_punct("!")) c = Command::loop(std::move(c));
    return c;
  }

  Parser& p_;
};

bool is_declaration_start(const Parser& p) {
  return p.peek().kind == Token::Kind::ident && (p.is_punct("=", 1) || p.is_punct("(", 1));
}

std::string escape_id(std::uint32_t v, char prefix) { return prefix + std::to_string(v); }

}  // namespace

HostGraph parse_host(std::string_view text) {
  Parser p(text);
  HostGraph g;
  p.expect_punct("[");
  while (p.is_punct("(")) {
    p.next();
    const Token id_tok = p.peek();
    const std::uint32_t id = parse_item_id(p, 'n', "node");
    NodeRec rec;
    rec.rooted = parse_root_flag(p);
    p.expect_punct(",");
    rec.label = parse_host_label(p);
    const Token mark_tok = p.peek();
    rec.mark = parse_mark_suffix(p);
    if (!is_node_mark(rec.mark)) Parser::fail_at(mark_tok, "mark not allowed on host nodes");
    p.expect_punct(")");
    if (g.contains(NodeId{id})) Parser::fail_at(id_tok, "duplicate node id n" + std::to_string(id));
    g.insert_node_at(NodeId{id}, std::move(rec));
  }
  p.expect_punct("|");
  while (p.is_punct("(")) {
    p.next();
    const Token id_tok = p.peek();
    const std::uint32_t id = parse_item_id(p, 'e', "edge");
    if (p.is_punct("(")) {
      if (p.is_keyword("B", 1)) p.fail("unsupported feature: bidirectional edges");
      p.fail("unexpected '(' after edge id");
    }
    p.expect_punct(",");
    EdgeRec rec;
    const Token src_tok = p.peek();
    rec.source = NodeId{parse_item_id(p, 'n', "node")};
    p.expect_punct(",");
    const Token tgt_tok = p.peek();
    rec.target = NodeId{parse_item_id(p, 'n', "node")};
    p.expect_punct(",");
    rec.label = parse_host_label(p);
    const Token mark_tok = p.peek();
    rec.mark = parse_mark_suffix(p);
    if (!is_edge_mark(rec.mark)) Parser::fail_at(mark_tok, "mark not allowed on host edges");
    p.expect_punct(")");
    if (!g.contains(rec.source)) Parser::fail_at(src_tok, "dangling edge endpoint");
    if (!g.contains(rec.target)) Parser::fail_at(tgt_tok, "dangling edge endpoint");
    if (g.contains(EdgeId{id})) Parser::fail_at(id_tok, "duplicate edge id e" + std::to_string(id));
    g.insert_edge_at(EdgeId{id}, std::move(rec));
  }
  p.expect_punct("]");
  if (!p.at_end()) p.fail("trailing input after host graph");
  return g;
}

std::string print_host(const HostGraph& g) {
  if (g.node_count() == 0 && g.edge_count() == 0) return "[ | ]\n";
  std::string out = "[\n";
  for (NodeId id : g.node_ids()) {
    const NodeRec& n = g.node(id);
    out += "  (" + escape_id(id.value, 'n');
    if (n.rooted) out += "(R)";
    out += ", " + n.label.to_string();
    if (n.mark != Mark::none) out += " # " + std::string(to_string(n.mark));
    out += ")\n";
  }
  out += "|\n";
  for (EdgeId id : g.edge_ids()) {
    const EdgeRec& e = g.edge(id);
    out += "  (" + escape_id(id.value, 'e') + ", " + escape_id(e.source.value, 'n') + ", " +
           escape_id(e.target.value, 'n') + ", " + e.label.to_string();
    if (e.mark != Mark::none) out += " # " + std::string(to_string(e.mark));
    out += ")\n";
  }
  out += "]\n";
  return out;
}

Program parse_program_unchecked(std::string_view text) {
  Parser p(text);
  Program prog;
  while (!p.at_end()) {
    if (!is_declaration_start(p)) p.fail("expected declaration but found " + Parser::describe(p.peek()));
    if (p.is_punct("=", 1)) {
      Procedure proc;
      proc.name = p.next().text;
      p.next();
      CommandParser cp(p);
      proc.body = cp.parse_sequence();
      prog.procedures.push_back(std::move(proc));
    } else {
      RuleParser rp(p);
      prog.rules.push_back(rp.parse());
    }
  }
  return prog;
}

Program parse_program(std::string_view text) {
  Program prog = parse_program_unchecked(text);
  require_valid(prog);
  return prog;
}

Rule parse_rule(std::string_view text) {
  Parser p(text);
  RuleParser rp(p);
  Rule r = rp.parse();
  if (!p.at_end()) p.fail("trailing input after rule");
  require_valid(r);
  return r;
}

namespace {

std::string print_pattern_graph(const PatternGraph& g, const Rule& r) {
  std::string out = "[ ";
  for (const auto& n : g.nodes) {
    out += "(" + n.name + (n.rooted ? "(R)" : "") + ", " + to_string(n.label, r.vars);
    if (n.mark != Mark::none) out += " # " + std::string(to_string(n.mark));
    out += ") ";
  }
  out += "| ";
  for (const auto& e : g.edges) {
    out += "(" + e.name + ", " + g.nodes[e.source].name + ", " + g.nodes[e.target].name + ", " +
           to_string(e.label, r.vars);
    if (e.mark != Mark::none) out += " # " + std::string(to_string(e.mark));
    out += ") ";
  }
  return out + "]";
}

}  // namespace

std::string print_rule(const Rule& r) {
  std::string out = r.name + "(";
  // Group consecutive variables of equal kind.
  for (std::size_t i = 0; i < r.vars.size();) {
    std::size_t j = i;
    std::string group;
    while (j < r.vars.size() && r.vars[j].kind == r.vars[i].kind) {
      if (j > i) group += ", ";
      group += r.vars[j].name;
      ++j;
    }
    if (i > 0) out += "; ";
    out += group + ":" + std::string(to_string(r.vars[i].kind));
    i = j;
  }
  out += ")\n" + print_pattern_graph(r.lhs, r) + "\n=>\n" + print_pattern_graph(r.rhs, r) +
         "\ninterface = {";
  for (std::size_t i = 0; i < r.interface.size(); ++i) {
    if (i > 0) out += ", ";
    out += r.interface[i];
  }
  out += "}";
  if (r.condition) {
    out += "\nwhere " + to_string(*r.condition, r.vars,
                                  [&](std::size_t n) { return r.lhs.nodes[n].name; });
  }
  return out + "\n";
}

std::string print_program(const Program& p) {
  std::string out;
  for (const auto& q : p.procedures) out += q.name + " = " + to_string(q.body) + "\n";
  for (const auto& r : p.rules) out += "\n" + print_rule(r);
  return out;
}

OpScript parse_opscript(std::string_view text) {
  OpScript ops;
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    ++line_no;
    start = end + 1;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    auto is_space = [](char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; };
    while (!line.empty() && is_space(line.front())) line.remove_prefix(1);
    while (!line.empty() && is_space(line.back())) line.remove_suffix(1);
    if (line.empty()) {
      if (end == text.size()) break;
      continue;
    }
    const char kind = line.front();
    if ((kind != 'i' && kind != 's' && kind != 'd') || line.size() < 2 || !is_space(line[1])) {
      throw ParseError("expected 'i', 's' or 'd' followed by a key", line_no, 1);
    }
    std::string_view rest = line.substr(1);
    while (!rest.empty() && is_space(rest.front())) rest.remove_prefix(1);
    Int key = 0;
    auto [p, ec] = std::from_chars(rest.data(), rest.data() + rest.size(), key);
    if (ec != std::errc{} || p != rest.data() + rest.size()) {
      throw ParseError("malformed key '" + std::string(rest) + "'", line_no,
                       static_cast<std::size_t>(rest.data() - line.data()) + 1);
    }
    ops.push_back(Instruction{static_cast<OpKind>(kind), key});
    if (end == text.size()) break;
  }
  return ops;
}

std::string print_opscript(const OpScript& ops) {
  std::string out;
  for (const auto& op : ops) {
    out += static_cast<char>(op.kind);
    out += ' ';
    out += std::to_string(op.key);
    out += '\n';
  }
  return out;
}

HostGraph build_instruction_graph(const OpScript& ops) {
  HostGraph g;
  std::optional<NodeId> prev;
  for (std::size_t i = 0; i < ops.size(); ++i) {
    const NodeId id =
        g.add_node(Label{Atom(std::string(1, static_cast<char>(ops[i].kind))), Atom(ops[i].key)},
                   Mark::none, i == 0);
    if (prev) g.add_edge(*prev, id, Label{}, Mark::none);
    prev = id;
  }
  return g;
}

}  // namespace rootgraph
