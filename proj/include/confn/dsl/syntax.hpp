#pragma once

#include <cctype>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "confn/core.hpp"

namespace confn::dsl {

struct Span {
  int line = 0;
  int col = 0;
  friend bool operator==(const Span&, const Span&) = default;
};

enum class ErrorCategory { Lexical, Syntax, Name, Type };

inline const char* categoryName(ErrorCategory c) {
  switch (c) {
    case ErrorCategory::Lexical: return "lexical";
    case ErrorCategory::Syntax: return "syntax";
    case ErrorCategory::Name: return "name";
    case ErrorCategory::Type: return "type";
  }
  return "?";
}

class DslError : public Error {
 public:
  DslError(ErrorCategory cat, Span span, std::string message, std::string hint)
      : Error(format(cat, span, message, hint)), category(cat), span(span), message(std::move(message)),
        hint(std::move(hint)) {}

  ErrorCategory category;
  Span span;
  std::string message;
  std::string hint;

 private:
  static std::string format(ErrorCategory cat, Span s, const std::string& m, const std::string& h) {
    std::string out = std::to_string(s.line) + ":" + std::to_string(s.col) + ": " + categoryName(cat) +
                      " error: " + m;
    if (!h.empty()) out += " (hint: " + h + ")";
    return out;
  }
};

// ---------------------------------------------------------------------------
// Lexer

enum class Tok { Ident, Int, Sym, Newline, End };

struct Token {
  Tok kind;
  std::string text;
  Span span;
};

/// Newlines inside (), [] are not tokens, so argument lists may span lines.
inline std::vector<Token> lex(std::string_view src) {
  std::vector<Token> out;
  int line = 1, col = 1, depth = 0;
  std::size_t i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k, ++i) {
      if (src[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
  };
  while (i < src.size()) {
    const char c = src[i];
    const Span here{line, col};
    if (c == '#') {
      while (i < src.size() && src[i] != '\n') advance(1);
    } else if (c == '\n') {
      if (depth == 0 && !out.empty() && out.back().kind != Tok::Newline) out.push_back({Tok::Newline, "\\n", here});
      advance(1);
    } else if (c == ' ' || c == '\t' || c == '\r') {
      advance(1);
    } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < src.size() && (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_')) ++j;
      out.push_back({Tok::Ident, std::string(src.substr(i, j - i)), here});
      advance(j - i);
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
      if (j < src.size() && (std::isalpha(static_cast<unsigned char>(src[j])) || src[j] == '_'))
        throw DslError(ErrorCategory::Lexical, Span{line, col + static_cast<int>(j - i)},
                       "identifier glued to a number", "write an explicit '*', e.g. 3*H");
      out.push_back({Tok::Int, std::string(src.substr(i, j - i)), here});
      advance(j - i);
    } else if (std::string_view("=()[],+-*").find(c) != std::string_view::npos) {
      if (c == '(' || c == '[') ++depth;
      if ((c == ')' || c == ']') && depth > 0) --depth;
      out.push_back({Tok::Sym, std::string(1, c), here});
      advance(1);
    } else {
      const unsigned char uc = static_cast<unsigned char>(c);
      std::string shown = uc < 0x80 ? std::string(1, c) : "non-ASCII byte";
      throw DslError(ErrorCategory::Lexical, here, "unexpected character '" + shown + "'",
                     "only identifiers, integers, '#' comments and = ( ) [ ] , + - * are allowed");
    }
  }
  if (!out.empty() && out.back().kind != Tok::Newline) out.push_back({Tok::Newline, "\\n", Span{line, col}});
  out.push_back({Tok::End, "", Span{line, col}});
  return out;
}

// ---------------------------------------------------------------------------
// AST

/// coeff * name, or a constant when name is empty.
struct Term {
  Integer coeff;
  std::string name;
  Span span;
  friend bool operator==(const Term&, const Term&) = default;
};

struct Value {
  enum class Kind { Linear, List } kind = Kind::Linear;
  std::vector<Term> terms;
  std::vector<Value> items;
  /// A single identifier written without sign or coefficient.
  bool bare = false;
  Span span;

  bool isIdent() const { return kind == Kind::Linear && bare; }
  const std::string& ident() const { return terms.front().name; }
  bool isInt() const { return kind == Kind::Linear && terms.size() == 1 && terms[0].name.empty(); }
  bool isList() const { return kind == Kind::List; }
  friend bool operator==(const Value&, const Value&) = default;
};

struct Arg {
  std::string name;  // empty for positional
  Value value;
  Span span;
  friend bool operator==(const Arg&, const Arg&) = default;
};

struct Statement {
  enum class Kind { Let, Compute, AssertExact, AssertInterval } kind;
  std::string name;
  Span span;
  Span nameSpan;
  // Let
  std::string ctor;
  std::vector<Arg> args;
  // Assertions
  Integer k, lo, hi;
  friend bool operator==(const Statement&, const Statement&) = default;
};

struct Program {
  std::vector<Statement> statements;
  friend bool operator==(const Program&, const Program&) = default;
};

// ---------------------------------------------------------------------------
// Constructor signatures

enum class ParamType { Variety, Int, Divisor, IdentList, Structured };

struct Param {
  std::string name;
  ParamType type;
  bool required;
};

inline const std::map<std::string, std::vector<Param>>& signatures() {
  using P = ParamType;
  static const std::map<std::string, std::vector<Param>> table = {
      {"projective_space", {{"n", P::Int, true}}},
      {"complete_intersection", {{"n", P::Int, true}, {"degrees", P::Structured, true}, {"assume", P::IdentList, false}}},
      {"curve", {{"genus", P::Int, true}}},
      {"hirzebruch1", {}},
      {"delpezzo7", {}},
      {"abelian", {{"n", P::Int, true}, {"top", P::Int, false}}},
      {"custom",
       {{"dim", P::Int, true},
        {"basis", P::IdentList, true},
        {"entries", P::Structured, true},
        {"canonical", P::Divisor, true},
        {"nef", P::Structured, false},
        {"gg", P::Structured, false},
        {"flags", P::IdentList, false},
        {"genus", P::Int, false},
        {"annotations", P::Structured, false},
        {"effective", P::Structured, false}}},
      {"product", {{"first", P::Variety, true}, {"second", P::Variety, true}, {"assume", P::IdentList, false}}},
      {"blowup_point", {{"surface", P::Variety, true}}},
      {"hypersurface_section", {{"ambient", P::Variety, true}, {"section", P::Divisor, true}, {"p", P::Int, true}}},
      {"cyclic_cover",
       {{"base", P::Variety, true}, {"degree", P::Int, true}, {"branch", P::Divisor, true}, {"assume", P::IdentList, false}}},
      {"pipeline_n2k1", {{"surface", P::Variety, true}}},
      {"pipeline_n3k1", {{"surface", P::Variety, true}, {"m", P::Divisor, true}}},
      {"pipeline_simple_surface", {{"ambient", P::Variety, true}, {"section", P::Divisor, true}, {"p", P::Int, true}}},
      {"pipeline_simple_variety",
       {{"base", P::Variety, true}, {"degree", P::Int, true}, {"branch", P::Divisor, true}, {"assume", P::IdentList, false}}},
  };
  return table;
}

inline std::string joinNames(const std::vector<std::string>& v) {
  std::string out;
  for (const auto& s : v) out += (out.empty() ? "" : ", ") + s;
  return out;
}

// ---------------------------------------------------------------------------
// Parser

class Parser {
 public:
  explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

  Program program() {
    Program p;
    while (peek().kind != Tok::End) {
      if (peek().kind == Tok::Newline) {
        ++pos_;
        continue;
      }
      p.statements.push_back(statement());
      if (peek().kind != Tok::Newline && peek().kind != Tok::End)
        fail(ErrorCategory::Syntax, peek().span, "unexpected '" + peek().text + "' after statement",
             "one statement per line");
    }
    return p;
  }

 private:
  const Token& peek(std::size_t ahead = 0) const { return toks_[std::min(pos_ + ahead, toks_.size() - 1)]; }
  const Token& next() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }

  [[noreturn]] static void fail(ErrorCategory c, Span s, std::string m, std::string h) {
    throw DslError(c, s, std::move(m), std::move(h));
  }

  static std::string describe(const Token& t) {
    if (t.kind == Tok::Newline) return "end of line";
    if (t.kind == Tok::End) return "end of file";
    return "'" + t.text + "'";
  }

  const Token& expectSym(const char* s, const char* hint) {
    if (peek().kind != Tok::Sym || peek().text != s)
      fail(ErrorCategory::Syntax, peek().span, std::string("expected '") + s + "', found " + describe(peek()), hint);
    return next();
  }

  const Token& expectIdent(const char* what, const char* hint) {
    if (peek().kind != Tok::Ident)
      fail(ErrorCategory::Syntax, peek().span, std::string("expected ") + what + ", found " + describe(peek()), hint);
    return next();
  }

  Integer signedInt(const char* hint) {
    bool neg = false;
    const Span s = peek().span;
    if (peek().kind == Tok::Sym && peek().text == "-") {
      neg = true;
      next();
    }
    if (peek().kind != Tok::Int)
      fail(ErrorCategory::Syntax, s, "expected an integer, found " + describe(peek()), hint);
    Integer v(next().text);
    return neg ? Integer(-v) : v;
  }

  Statement statement() {
    const Token& kw = expectIdent("'let', 'compute' or 'assert_confn'", "statements start with a keyword");
    Statement st;
    st.span = kw.span;
    if (kw.text == "let") {
      st.kind = Statement::Kind::Let;
      const Token& name = expectIdent("a variety name", "e.g. let X = projective_space(3)");
      st.name = name.text;
      st.nameSpan = name.span;
      expectSym("=", "e.g. let X = projective_space(3)");
      const Token& ctor = expectIdent("a constructor name", "e.g. projective_space, product, cyclic_cover");
      st.ctor = ctor.text;
      if (!signatures().count(st.ctor)) {
        std::vector<std::string> names;
        for (const auto& [k, v] : signatures()) names.push_back(k);
        fail(ErrorCategory::Name, ctor.span, "unknown constructor '" + st.ctor + "'", "known: " + joinNames(names));
      }
      expectSym("(", "constructor arguments go in parentheses, even when empty");
      if (!(peek().kind == Tok::Sym && peek().text == ")")) {
        st.args.push_back(arg());
        while (peek().kind == Tok::Sym && peek().text == ",") {
          next();
          st.args.push_back(arg());
        }
      }
      expectSym(")", "separate arguments with ','");
    } else if (kw.text == "compute") {
      st.kind = Statement::Kind::Compute;
      const Token& name = expectIdent("a variety name", "e.g. compute X");
      st.name = name.text;
      st.nameSpan = name.span;
    } else if (kw.text == "assert_confn") {
      const Token& name = expectIdent("a variety name", "e.g. assert_confn X = 2");
      st.name = name.text;
      st.nameSpan = name.span;
      if (peek().kind == Tok::Sym && peek().text == "=") {
        next();
        st.kind = Statement::Kind::AssertExact;
        st.k = signedInt("e.g. assert_confn X = 2");
      } else if (peek().kind == Tok::Ident && peek().text == "in") {
        next();
        st.kind = Statement::Kind::AssertInterval;
        expectSym("[", "e.g. assert_confn X in [0, 2]");
        st.lo = signedInt("e.g. assert_confn X in [0, 2]");
        expectSym(",", "e.g. assert_confn X in [0, 2]");
        st.hi = signedInt("e.g. assert_confn X in [0, 2]");
        expectSym("]", "e.g. assert_confn X in [0, 2]");
      } else {
        fail(ErrorCategory::Syntax, peek().span, "expected '=' or 'in' after the variety name, found " + describe(peek()),
             "assert_confn X = k  or  assert_confn X in [lo, hi]");
      }
    } else {
      fail(ErrorCategory::Syntax, kw.span, "unknown statement keyword '" + kw.text + "'",
           "statements are let, compute, assert_confn");
    }
    return st;
  }

  Arg arg() {
    Arg a;
    a.span = peek().span;
    if (peek().kind == Tok::Ident && peek(1).kind == Tok::Sym && peek(1).text == "=") {
      a.name = next().text;
      next();
    }
    a.value = value();
    return a;
  }

  Value value() {
    Value v;
    v.span = peek().span;
    if (peek().kind == Tok::Sym && peek().text == "[") {
      next();
      v.kind = Value::Kind::List;
      if (!(peek().kind == Tok::Sym && peek().text == "]")) {
        v.items.push_back(value());
        while (peek().kind == Tok::Sym && peek().text == ",") {
          next();
          v.items.push_back(value());
        }
      }
      expectSym("]", "separate list items with ','");
      return v;
    }
    bool first = true;
    v.bare = peek().kind == Tok::Ident;
    while (true) {
      Integer sign = 1;
      if (peek().kind == Tok::Sym && (peek().text == "+" || peek().text == "-")) {
        if (first && peek().text == "+")
          fail(ErrorCategory::Syntax, peek().span, "leading '+' is not allowed", "drop the '+'");
        sign = peek().text == "-" ? -1 : 1;
        next();
        v.bare = false;
      } else if (!first) {
        break;
      }
      Term t;
      t.span = peek().span;
      if (peek().kind == Tok::Int) {
        t.coeff = sign * Integer(next().text);
        if (peek().kind == Tok::Sym && peek().text == "*") {
          next();
          t.name = expectIdent("a basis name after '*'", "e.g. 3*H").text;
          v.bare = false;
        }
      } else if (peek().kind == Tok::Ident) {
        t.coeff = sign;
        t.name = next().text;
      } else {
        fail(ErrorCategory::Syntax, peek().span, "expected a value, found " + describe(peek()),
             "values are integers, divisor literals like 3*H - E1, names, or [lists]");
      }
      v.terms.push_back(std::move(t));
      first = false;
      if (!(peek().kind == Tok::Sym && (peek().text == "+" || peek().text == "-"))) break;
    }
    if (v.terms.size() != 1) v.bare = false;
    return v;
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

namespace detail {

/// Static checks: arguments match the signature, variety names are defined before use.
inline void checkProgram(const Program& p) {
  std::map<std::string, Span> defined;
  auto requireDefined = [&](const std::string& n, Span s) {
    if (!defined.count(n)) {
      std::string known;
      for (const auto& [k, v] : defined) known += (known.empty() ? "" : ", ") + k;
      throw DslError(ErrorCategory::Name, s, "variety '" + n + "' is not defined",
                     known.empty() ? "define it first with let " + n + " = ..."
                                   : "defined so far: " + known);
    }
  };
  for (const auto& st : p.statements) {
    if (st.kind != Statement::Kind::Let) {
      requireDefined(st.name, st.nameSpan);
      continue;
    }
    if (defined.count(st.name))
      throw DslError(ErrorCategory::Name, st.nameSpan, "variety '" + st.name + "' is already defined",
                     "names are single-assignment; pick a new name");
    const auto& sig = signatures().at(st.ctor);
    std::vector<std::string> pnames;
    for (const auto& prm : sig) pnames.push_back(prm.name);
    std::set<std::string> seen;
    std::size_t positional = 0;
    bool named = false;
    for (const auto& a : st.args) {
      const Param* prm = nullptr;
      if (a.name.empty()) {
        if (named)
          throw DslError(ErrorCategory::Syntax, a.span, "positional argument after a named one",
                         "put positional arguments first");
        if (positional >= sig.size())
          throw DslError(ErrorCategory::Syntax, a.span,
                         st.ctor + " takes at most " + std::to_string(sig.size()) + " arguments",
                         sig.empty() ? "write " + st.ctor + "()" : "parameters: " + joinNames(pnames));
        prm = &sig[positional++];
      } else {
        named = true;
        for (const auto& s : sig)
          if (s.name == a.name) prm = &s;
        if (!prm)
          throw DslError(ErrorCategory::Name, a.span, st.ctor + " has no parameter '" + a.name + "'",
                         sig.empty() ? "it takes no arguments" : "parameters: " + joinNames(pnames));
      }
      if (!seen.insert(prm->name).second)
        throw DslError(ErrorCategory::Syntax, a.span, "parameter '" + prm->name + "' given twice", "remove one");
      const Value& v = a.value;
      switch (prm->type) {
        case ParamType::Variety:
          if (!v.isIdent())
            throw DslError(ErrorCategory::Type, v.span, "parameter '" + prm->name + "' expects a variety name",
                           "pass a name bound by an earlier let");
          requireDefined(v.ident(), v.span);
          break;
        case ParamType::Int:
          if (!v.isInt())
            throw DslError(ErrorCategory::Type, v.span, "parameter '" + prm->name + "' expects an integer",
                           "e.g. " + prm->name + "=3");
          break;
        case ParamType::Divisor:
          if (v.isList())
            throw DslError(ErrorCategory::Type, v.span, "parameter '" + prm->name + "' expects a divisor",
                           "e.g. 3*H - E1 - E2");
          break;
        case ParamType::IdentList:
          if (!v.isList())
            throw DslError(ErrorCategory::Type, v.span, "parameter '" + prm->name + "' expects a list of names",
                           "e.g. " + prm->name + "=[a, b]");
          for (const auto& it : v.items)
            if (!it.isIdent())
              throw DslError(ErrorCategory::Type, it.span, "'" + prm->name + "' items must be plain names",
                             "e.g. " + prm->name + "=[a, b]");
          break;
        case ParamType::Structured: break;
      }
    }
    for (const auto& prm : sig)
      if (prm.required && !seen.count(prm.name))
        throw DslError(ErrorCategory::Syntax, st.span, st.ctor + " is missing parameter '" + prm.name + "'",
                       "parameters: " + joinNames(pnames));
    defined[st.name] = st.nameSpan;
  }
}

}  // namespace detail

/// Lexes, parses and checks names and argument shapes.
inline Program parse(std::string_view text) {
  Program p = Parser(lex(text)).program();
  detail::checkProgram(p);
  return p;
}

inline std::string toSource(const Value& v) {
  if (v.isList()) {
    std::string out = "[";
    for (std::size_t i = 0; i < v.items.size(); ++i) out += (i ? ", " : "") + toSource(v.items[i]);
    return out + "]";
  }
  if (v.terms.empty()) return "0";
  std::string out;
  for (std::size_t i = 0; i < v.terms.size(); ++i) {
    const Term& t = v.terms[i];
    const bool neg = t.coeff < 0;
    const Integer mag = neg ? Integer(-t.coeff) : t.coeff;
    out += i == 0 ? (neg ? "-" : "") : (neg ? " - " : " + ");
    if (t.name.empty())
      out += mag.str();
    else
      out += (mag == 1 ? std::string() : mag.str() + "*") + t.name;
  }
  return out;
}

/// Canonical text of a program; parse(toSource(p)) has the same statements up to spans.
inline std::string toSource(const Program& p) {
  std::string out;
  for (const auto& st : p.statements) {
    switch (st.kind) {
      case Statement::Kind::Let: {
        out += "let " + st.name + " = " + st.ctor + "(";
        for (std::size_t i = 0; i < st.args.size(); ++i)
          out += (i ? ", " : "") + (st.args[i].name.empty() ? "" : st.args[i].name + "=") + toSource(st.args[i].value);
        out += ")";
        break;
      }
      case Statement::Kind::Compute: out += "compute " + st.name; break;
      case Statement::Kind::AssertExact: out += "assert_confn " + st.name + " = " + st.k.str(); break;
      case Statement::Kind::AssertInterval:
        out += "assert_confn " + st.name + " in [" + st.lo.str() + ", " + st.hi.str() + "]";
        break;
    }
    out += "\n";
  }
  return out;
}

}  // namespace confn::dsl
