#include "infdl/parser.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <vector>

namespace infdl {

namespace {

enum class Tok { ident, integer, punct, end };

struct Token {
  Tok kind = Tok::end;
  std::string text;
  SourceSpan span;
};

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '@' || c == '\'';
}

std::vector<Token> tokenize(std::string_view text, const std::string& file) {
  std::vector<Token> out;
  int line = 1, col = 1;
  std::size_t i = 0;
  auto advance = [&](std::size_t k) {
    for (std::size_t j = 0; j < k; ++j, ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
  };
  while (i < text.size()) {
    char c = text[i];
    if (c == '%') {
      while (i < text.size() && text[i] != '\n') advance(1);
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    Token t;
    t.span = {file, line, col};
    if (ident_start(c)) {
      std::size_t j = i;
      while (j < text.size() && ident_char(text[j])) ++j;
      t.kind = Tok::ident;
      t.text = std::string(text.substr(i, j - i));
      advance(j - i);
    } else if (std::isdigit(static_cast<unsigned char>(c)) ||
               (c == '-' && i + 1 < text.size() &&
                std::isdigit(static_cast<unsigned char>(text[i + 1])))) {
      std::size_t j = i + 1;
      while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
      t.kind = Tok::integer;
      t.text = std::string(text.substr(i, j - i));
      advance(j - i);
    } else {
      static const char* two[] = {":-", "<-"};
      bool matched = false;
      for (const char* p : two)
        if (text.substr(i, 2) == p) {
          t.kind = Tok::punct;
          t.text = p;
          advance(2);
          matched = true;
          break;
        }
      if (!matched) {
        static const std::string single = "(),.;~&|![]";
        if (single.find(c) == std::string::npos) {
          std::string shown = std::isprint(static_cast<unsigned char>(c))
                                  ? std::string(1, c)
                                  : "\\x" + [&] {
                                      std::ostringstream os;
                                      os << std::hex << (static_cast<unsigned>(c) & 0xffu);
                                      return os.str();
                                    }();
          throw ParseError("unexpected character '" + shown + "'", t.span);
        }
        t.kind = Tok::punct;
        t.text = std::string(1, c);
        advance(1);
      }
    }
    out.push_back(std::move(t));
  }
  Token end;
  end.kind = Tok::end;
  end.span = {file, line, col};
  out.push_back(end);
  return out;
}

bool is_variable_name(const std::string& s) {
  return !s.empty() && (std::isupper(static_cast<unsigned char>(s[0])) || s[0] == '_');
}

class Cursor {
 public:
  explicit Cursor(std::vector<Token> toks) : toks_(std::move(toks)) {}

  const Token& peek(std::size_t k = 0) const {
    return toks_[std::min(pos_ + k, toks_.size() - 1)];
  }
  const Token& next() {
    const Token& t = toks_[pos_];
    if (pos_ + 1 < toks_.size()) ++pos_;
    return t;
  }
  bool at_end() const { return peek().kind == Tok::end; }
  bool is_punct(const char* p, std::size_t k = 0) const {
    return peek(k).kind == Tok::punct && peek(k).text == p;
  }
  bool accept(const char* p) {
    if (!is_punct(p)) return false;
    next();
    return true;
  }
  const Token& expect(const char* p) {
    if (!is_punct(p)) fail(std::string("expected '") + p + "'");
    return next();
  }
  const Token& expect_ident(const char* what) {
    if (peek().kind != Tok::ident) fail(std::string("expected ") + what);
    return next();
  }
  [[noreturn]] void fail(const std::string& msg) const {
    const Token& t = peek();
    std::string found = t.kind == Tok::end ? "end of input" : "'" + t.text + "'";
    throw ParseError(msg + ", found " + found, t.span);
  }

  // `.name` with no space between the dot and the name.
  bool at_directive() const {
    const Token& d = peek();
    const Token& n = peek(1);
    return d.kind == Tok::punct && d.text == "." && n.kind == Tok::ident &&
           n.span.line == d.span.line && n.span.column == d.span.column + 1;
  }

  struct Directive {
    std::string name;
    std::vector<Token> args;
    SourceSpan span;
  };

  // Arguments run to the end of the line or an optional terminating '.'.
  Directive directive() {
    Directive d;
    d.span = next().span;
    d.name = next().text;
    const int line = d.span.line;
    bool want_arg = true;
    while (!at_end() && peek().span.line == line && !is_punct(".")) {
      if (want_arg) {
        if (peek().kind != Tok::ident && peek().kind != Tok::integer)
          fail("expected a name in ." + d.name);
        d.args.push_back(next());
        want_arg = false;
      } else {
        expect(",");
        want_arg = true;
      }
    }
    if (!d.args.empty() && want_arg) fail("dangling ',' in ." + d.name);
    if (is_punct(".") && peek().span.line == line && !at_directive()) next();
    return d;
  }

 private:
  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

Atom parse_atom(Cursor& c, bool ground) {
  const Token& name = c.expect_ident("a predicate name");
  Atom a;
  a.predicate = name.text;
  a.span = name.span;
  if (c.accept("(")) {
    while (true) {
      const Token& t = c.peek();
      if (t.kind == Tok::integer) {
        a.args.push_back(Term::constant(c.next().text));
      } else if (t.kind == Tok::ident) {
        if (is_variable_name(t.text)) {
          if (ground) throw ParseError("facts must be ground; '" + t.text + "' is a variable", t.span);
          a.args.push_back(Term::var(c.next().text));
        } else {
          a.args.push_back(Term::constant(c.next().text));
        }
      } else {
        c.fail("expected a term");
      }
      if (c.accept(")")) break;
      c.expect(",");
    }
  }
  return a;
}

}  // namespace

// ---------------------------------------------------------------------------
// Programs

Program parse_program(std::string_view text, const std::string& file) {
  Cursor c(tokenize(text, file));
  Program p;
  std::set<std::string> seen_directives;
  std::vector<std::pair<std::string, SourceSpan>> gfp_names, order_names;
  SourceSpan order_span;

  while (!c.at_end()) {
    if (c.at_directive()) {
      auto d = c.directive();
      auto require_args = [&] {
        if (d.args.empty()) throw ParseError("." + d.name + " needs at least one name", d.span);
      };
      if (d.name == "gfp") {
        require_args();
        for (const auto& a : d.args) {
          if (!p.gfp.insert(a.text).second)
            throw ParseError("'" + a.text + "' tagged twice", a.span);
          gfp_names.emplace_back(a.text, a.span);
        }
      } else if (d.name == "order") {
        if (!seen_directives.insert("order").second)
          throw ParseError("duplicate .order directive", d.span);
        require_args();
        order_span = d.span;
        for (const auto& a : d.args) {
          if (std::find(p.order.begin(), p.order.end(), a.text) != p.order.end())
            throw ParseError("'" + a.text + "' appears twice in .order", a.span);
          p.order.push_back(a.text);
          order_names.emplace_back(a.text, a.span);
        }
        p.order_declared = true;
      } else if (d.name == "param") {
        require_args();
        for (const auto& a : d.args) {
          if (p.is_parameter(a.text))
            throw ParseError("parameter '" + a.text + "' declared twice", a.span);
          p.parameters.push_back(a.text);
        }
      } else if (d.name == "monadic") {
        if (!seen_directives.insert("monadic").second)
          throw ParseError("duplicate .monadic directive", d.span);
        if (!d.args.empty()) throw ParseError(".monadic takes no arguments", d.span);
        p.monadic = true;
      } else {
        throw ParseError("unknown directive ." + d.name, d.span);
      }
      continue;
    }

    Rule r;
    r.head = parse_atom(c, false);
    r.span = r.head.span;
    if (c.is_punct(".")) {
      throw ParseError("rule for '" + r.head.predicate +
                           "' has no body; facts belong in the database file",
                       c.peek().span);
    }
    if (!c.accept("<-") && !c.accept(":-")) c.fail("expected '<-' or ':-'");
    while (true) {
      Literal l;
      l.negated = c.accept("~");
      l.atom = parse_atom(c, false);
      r.body.push_back(std::move(l));
      if (c.is_punct(".") && !c.at_directive()) {
        c.next();
        break;
      }
      if (c.at_directive()) c.fail("expected '.' to end the rule");
      c.expect(",");
    }
    p.rules.push_back(std::move(r));
  }

  auto heads = [&](const std::string& n) {
    return std::any_of(p.rules.begin(), p.rules.end(),
                       [&](const Rule& r) { return r.head.predicate == n; });
  };
  for (const auto& [n, span] : gfp_names)
    if (!heads(n)) throw ParseError(".gfp names '" + n + "', which heads no rule (an EDB)", span);
  for (const auto& [n, span] : order_names)
    if (!heads(n)) throw ParseError(".order names '" + n + "', which heads no rule", span);
  for (const auto& n : p.parameters)
    if (heads(n)) throw ParseError("parameter '" + n + "' heads a rule", {file, 0, 0});
  if (p.order_declared) {
    for (const auto& r : p.rules)
      if (std::find(p.order.begin(), p.order.end(), r.head.predicate) == p.order.end())
        throw ParseError(".order omits IDB '" + r.head.predicate + "'", order_span);
  } else {
    p.complete_order();
  }
  return p;
}

namespace {

std::string join_names(const std::vector<std::string>& v) {
  std::string s;
  for (const auto& x : v) s += (s.empty() ? "" : ", ") + x;
  return s;
}

std::string print_atom(const Atom& a) {
  std::string s = a.predicate;
  if (!a.args.empty()) {
    s += '(';
    for (std::size_t i = 0; i < a.args.size(); ++i) s += (i ? "," : "") + a.args[i].name;
    s += ')';
  }
  return s;
}

}  // namespace

std::string print_rule(const Rule& r) {
  std::string s = print_atom(r.head) + " <- ";
  for (std::size_t i = 0; i < r.body.size(); ++i) {
    if (i) s += ", ";
    if (r.body[i].negated) s += '~';
    s += print_atom(r.body[i].atom);
  }
  return s + ".";
}

std::string print_program(const Program& p) {
  std::ostringstream os;
  if (p.monadic) os << ".monadic\n";
  if (!p.gfp.empty()) os << ".gfp " << join_names({p.gfp.begin(), p.gfp.end()}) << "\n";
  if (!p.parameters.empty()) os << ".param " << join_names(p.parameters) << "\n";
  if (p.order_declared && !p.order.empty()) os << ".order " << join_names(p.order) << "\n";
  for (const auto& r : p.rules) os << print_rule(r) << "\n";
  return os.str();
}

// ---------------------------------------------------------------------------
// Databases

Database parse_database(std::string_view text, const std::string& file) {
  Cursor c(tokenize(text, file));
  Database db;
  while (!c.at_end()) {
    if (c.at_directive()) {
      auto d = c.directive();
      if (d.name != "domain") throw ParseError("unknown directive ." + d.name, d.span);
      for (const auto& a : d.args) {
        if (a.kind == Tok::ident && is_variable_name(a.text))
          throw ParseError("domain constants must not be variables: '" + a.text + "'", a.span);
        db.add_constant(a.text);
      }
      continue;
    }
    Atom a = parse_atom(c, true);
    if (!c.is_punct(".") || c.at_directive()) c.fail("expected '.' after fact");
    c.next();
    Tuple t;
    for (const auto& term : a.args) t.push_back(term.name);
    try {
      db.add_fact(a.predicate, std::move(t));
    } catch (const std::invalid_argument& e) {
      throw ParseError(e.what(), a.span);
    }
  }
  return db;
}

std::string print_database(const Database& db) {
  std::ostringstream os;
  if (db.size() > 0) os << ".domain " << join_names(db.domain()) << "\n";
  for (const auto& [name, rel] : db.relations()) {
    for (const auto& t : rel.tuples) {
      os << name;
      if (!t.empty()) {
        os << '(';
        for (std::size_t i = 0; i < t.size(); ++i) os << (i ? "," : "") << t[i];
        os << ')';
      }
      os << ".\n";
    }
  }
  return os.str();
}

// ---------------------------------------------------------------------------
// Kripke structures

Database parse_kripke(std::string_view text, const std::string& file) {
  Cursor c(tokenize(text, file));
  Database db;
  std::set<std::string> states;
  auto state_name = [&]() -> Token {
    const Token& t = c.peek();
    if (t.kind != Tok::ident && t.kind != Tok::integer) c.fail("expected a state id");
    return c.next();
  };
  auto known = [&](const Token& t) {
    if (!states.count(t.text)) throw ParseError("undeclared state '" + t.text + "'", t.span);
  };

  while (!c.at_end()) {
    const Token& kw = c.expect_ident("'state', 'label' or 'trans'");
    if (kw.text == "state") {
      do {
        Token s = state_name();
        if (!states.insert(s.text).second)
          throw ParseError("duplicate state '" + s.text + "'", s.span);
        db.add_constant(s.text);
      } while (c.accept(","));
    } else if (kw.text == "label") {
      Token s = state_name();
      known(s);
      if (c.is_punct(";")) c.fail("expected at least one proposition");
      while (!c.is_punct(";")) {
        const Token& p = c.expect_ident("a proposition");
        try {
          db.add_fact(p.text, {s.text});
        } catch (const std::invalid_argument& e) {
          throw ParseError(e.what(), p.span);
        }
        c.accept(",");
      }
    } else if (kw.text == "trans") {
      const Token& rel = c.expect_ident("a relation name");
      std::string rel_name = rel.text;
      SourceSpan rel_span = rel.span;
      Token from = state_name();
      Token to = state_name();
      known(from);
      known(to);
      try {
        db.add_fact(rel_name, {from.text, to.text});
      } catch (const std::invalid_argument& e) {
        throw ParseError(e.what(), rel_span);
      }
    } else {
      throw ParseError("unknown statement '" + kw.text + "'", kw.span);
    }
    c.expect(";");
  }
  return db;
}

// ---------------------------------------------------------------------------
// Formulas
//
//   formula := ("mu" | "nu") VAR "." formula | disj
//   disj    := conj ("|" conj)*
//   conj    := unary ("&" unary)*
//   unary   := "!" prop | ("AX"|"EX") ["[" rel "]"] unary
//            | ("AF"|"EF"|"AG"|"EG") unary
//            | ("A"|"E") "(" formula ("U"|"W") formula ")"
//            | "(" formula ")" | "true" | "false" | prop | VAR | binder

namespace {

const std::set<std::string>& formula_keywords() {
  static const std::set<std::string> k = {"mu", "nu", "true", "false", "AX", "EX", "AF", "EF",
                                          "AG", "EG", "A",  "E",  "U",    "W"};
  return k;
}

// Single-letter keywords double as fixpoint variables where one is bound.
bool letter_keyword(const std::string& w) { return w == "A" || w == "E" || w == "U" || w == "W"; }

class FormulaParser {
 public:
  explicit FormulaParser(Cursor& c) : c_(c) {}

  FormulaPtr formula() {
    if (peek_ident("mu") || peek_ident("nu")) return binder();
    return disj();
  }

 private:
  bool peek_ident(const char* s, std::size_t k = 0) const {
    return c_.peek(k).kind == Tok::ident && c_.peek(k).text == s;
  }

  static FormulaPtr at(FormulaPtr f, const SourceSpan& span) {
    auto copy = std::make_shared<Formula>(*f);
    copy->span = span;
    return copy;
  }

  FormulaPtr binder() {
    const Token& kw = c_.next();
    bool is_mu = kw.text == "mu";
    SourceSpan span = kw.span;
    const Token& v = c_.expect_ident("a fixpoint variable");
    if (!is_variable_name(v.text) || (formula_keywords().count(v.text) && !letter_keyword(v.text)))
      throw ParseError("fixpoint variables must be uppercase identifiers, got '" + v.text + "'",
                       v.span);
    std::string name = v.text;
    c_.expect(".");
    bound_.push_back(name);
    FormulaPtr body = formula();
    bound_.pop_back();
    return at(is_mu ? fml::mu(name, body) : fml::nu(name, body), span);
  }

  FormulaPtr disj() {
    FormulaPtr f = conj();
    while (c_.is_punct("|")) {
      SourceSpan span = c_.next().span;
      FormulaPtr rhs = (peek_ident("mu") || peek_ident("nu")) ? binder() : conj();
      f = at(fml::disj(f, rhs), span);
    }
    return f;
  }

  FormulaPtr conj() {
    FormulaPtr f = unary();
    while (c_.is_punct("&")) {
      SourceSpan span = c_.next().span;
      FormulaPtr rhs = (peek_ident("mu") || peek_ident("nu")) ? binder() : unary();
      f = at(fml::conj(f, rhs), span);
    }
    return f;
  }

  FormulaPtr unary() {
    const Token& t = c_.peek();
    SourceSpan span = t.span;
    if (c_.accept("!")) {
      const Token& p = c_.peek();
      if (p.kind != Tok::ident || formula_keywords().count(p.text) || is_variable_name(p.text))
        throw ParseError("negation applies to propositions only", p.span);
      return at(fml::neg_prop(c_.next().text), span);
    }
    if (c_.accept("(")) {
      FormulaPtr f = formula();
      c_.expect(")");
      return f;
    }
    if (t.kind != Tok::ident) c_.fail("expected a formula");
    const std::string word = t.text;
    if (word == "mu" || word == "nu") return binder();
    if (word == "true") {
      c_.next();
      return at(fml::top(), span);
    }
    if (word == "false") {
      c_.next();
      return at(fml::bottom(), span);
    }
    if (word == "AX" || word == "EX") {
      c_.next();
      std::string rel;
      if (c_.accept("[")) {
        rel = c_.expect_ident("a relation name").text;
        c_.expect("]");
      }
      FormulaPtr a = operand();
      return at(word == "AX" ? fml::ax(a, rel) : fml::ex(a, rel), span);
    }
    static const std::map<std::string, FormulaKind> prefix = {
        {"AF", FormulaKind::af}, {"EF", FormulaKind::ef}, {"AG", FormulaKind::ag},
        {"EG", FormulaKind::eg}};
    if (auto it = prefix.find(word); it != prefix.end()) {
      c_.next();
      return at(fml::unary(it->second, operand()), span);
    }
    if ((word == "A" || word == "E") && c_.is_punct("(", 1)) {
      c_.next();
      c_.expect("(");
      FormulaPtr a = formula();
      const Token& op = c_.peek();
      if (op.kind != Tok::ident || (op.text != "U" && op.text != "W"))
        c_.fail("expected 'U' or 'W'");
      bool until = c_.next().text == "U";
      FormulaPtr b = formula();
      c_.expect(")");
      FormulaKind k = word == "A" ? (until ? FormulaKind::au : FormulaKind::aw)
                                  : (until ? FormulaKind::eu : FormulaKind::ew);
      return at(fml::binary(k, a, b), span);
    }
    if (letter_keyword(word) && std::find(bound_.begin(), bound_.end(), word) != bound_.end()) {
      c_.next();
      return at(fml::var(word), span);
    }
    if (formula_keywords().count(word)) c_.fail("unexpected keyword");
    c_.next();
    if (is_variable_name(word)) {
      if (std::find(bound_.begin(), bound_.end(), word) == bound_.end())
        throw ParseError("unbound fixpoint variable '" + word + "'", span);
      return at(fml::var(word), span);
    }
    return at(fml::prop(word), span);
  }

  // Prefix operators bind tighter than & and |, but accept a binder operand.
  FormulaPtr operand() {
    if (peek_ident("mu") || peek_ident("nu")) return binder();
    return unary();
  }

  Cursor& c_;
  std::vector<std::string> bound_;
};

}  // namespace

FormulaPtr parse_formula(std::string_view text, const std::string& file) {
  Cursor c(tokenize(text, file));
  FormulaParser p(c);
  FormulaPtr f = p.formula();
  if (!c.at_end()) c.fail("unexpected trailing input");
  return f;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open file '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

}  // namespace infdl
