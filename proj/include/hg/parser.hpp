//===-- parser.hpp - Recursive-descent parser for HGL -----------*- C++ -*-===//
//
// app       = "app" STRING decl* func* ;
// decl      = "input" IDENT ":" kind ( "title" STRING )? ;
// func      = "def" IDENT "(" IDENT? ")" block ;
//
// Beyond the core statement forms the parser accepts `else if` chains and a
// ternary on the right of an assignment; the latter becomes an If node.
// `state.NAME` reads a persistent state field.
//
//===----------------------------------------------------------------------===//
#pragma once

#include "hg/ast.hpp"
#include "hg/lexer.hpp"

#include <set>
#include <string>
#include <vector>

namespace hg {

struct ParseResult {
  std::optional<SourceUnit> unit;
  std::vector<Diagnostic> diagnostics;

  bool ok() const { return unit.has_value(); }
};

namespace detail {

inline bool is_keyword(std::string_view w) {
  static const std::set<std::string_view> kw = {
      "app",   "input", "def",      "if",   "else",  "switch", "case",  "default",
      "true",  "false", "subscribe", "runIn", "runEvery", "state"};
  return kw.count(w) != 0;
}

class Parser {
 public:
  explicit Parser(std::string_view src) : src_(src) {}

  ParseResult run() {
    ParseResult r;
    Lexer lex(src_);
    toks_ = lex.run(r.diagnostics);
    if (has_errors(r.diagnostics)) return r;
    try {
      SourceUnit u = unit();
      classify_calls(u);
      check_duplicates(u, r.diagnostics);
      if (has_errors(r.diagnostics)) return r;
      u.sourceText = std::string(src_);
      r.unit = std::move(u);
    } catch (const Diagnostic& d) {
      r.diagnostics.push_back(d);
    }
    return r;
  }

 private:
  static constexpr int kMaxDepth = 256;

  const Token& cur() const { return toks_[pos_]; }
  const Token& ahead(std::size_t k) const {
    return toks_[std::min(pos_ + k, toks_.size() - 1)];
  }
  SourceLoc prev_end() const { return pos_ > 0 ? toks_[pos_ - 1].loc.end : cur().loc.begin; }

  [[noreturn]] void fail(const std::string& msg, const std::string& code = "SyntaxError") const {
    throw Diagnostic{Severity::Error, code, msg, cur().loc};
  }

  std::string describe(const Token& t) const {
    switch (t.kind) {
      case Token::Kind::End: return "end of input";
      case Token::Kind::String: return "string literal";
      case Token::Kind::Int: return "'" + t.text + "'";
      default: return "'" + t.text + "'";
    }
  }

  void expect(std::string_view punct) {
    if (!cur().is(punct)) fail("expected '" + std::string(punct) + "' but found " + describe(cur()));
    ++pos_;
  }

  bool accept(std::string_view punct) {
    if (cur().is(punct)) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect_word(std::string_view w) {
    if (!cur().is_ident(w)) fail("expected '" + std::string(w) + "' but found " + describe(cur()));
    ++pos_;
  }

  std::string ident(const char* what) {
    if (cur().kind != Token::Kind::Ident) fail(std::string("expected ") + what + " but found " + describe(cur()));
    if (is_keyword(cur().text)) fail("'" + cur().text + "' is a reserved word");
    return toks_[pos_++].text;
  }

  std::string string_lit(const char* what) {
    if (cur().kind != Token::Kind::String) fail(std::string("expected ") + what + " but found " + describe(cur()));
    return toks_[pos_++].text;
  }

  SourceUnit unit() {
    SourceUnit u;
    if (!cur().is_ident("app")) fail("source must start with `app \"Name\"`", "MissingAppHeader");
    ++pos_;
    if (cur().kind != Token::Kind::String) fail("expected app name string after 'app'", "MissingAppHeader");
    if (cur().text.empty()) fail("app name must not be empty", "MissingAppHeader");
    u.appName = toks_[pos_++].text;
    while (cur().is_ident("input")) u.inputs.push_back(decl());
    while (cur().is_ident("def")) u.functions.push_back(func());
    if (cur().kind != Token::Kind::End) fail("expected 'input', 'def' or end of input but found " + describe(cur()));
    return u;
  }

  InputDecl decl() {
    InputDecl d;
    d.loc.begin = cur().loc.begin;
    ++pos_;
    d.name = ident("input name");
    expect(":");
    if (cur().kind != Token::Kind::Ident) fail("expected input kind");
    std::string k = toks_[pos_++].text;
    if (k == "device") {
      d.kind = InputDecl::Kind::Device;
      expect(".");
      if (cur().kind != Token::Kind::Ident) fail("expected capability name");
      d.capability = toks_[pos_++].text;
    } else if (k == "number") {
      d.kind = InputDecl::Kind::Number;
    } else if (k == "string") {
      d.kind = InputDecl::Kind::String;
    } else if (k == "bool") {
      d.kind = InputDecl::Kind::Bool;
    } else if (k == "enum") {
      d.kind = InputDecl::Kind::Enum;
      expect("(");
      d.values.push_back(string_lit("enum value"));
      while (accept(",")) d.values.push_back(string_lit("enum value"));
      expect(")");
    } else {
      --pos_;
      fail("unknown input kind '" + k + "'");
    }
    if (cur().is_ident("title")) {
      ++pos_;
      d.title = string_lit("title string");
    }
    d.loc.end = prev_end();
    return d;
  }

  FuncDef func() {
    FuncDef f;
    f.loc.begin = cur().loc.begin;
    ++pos_;
    f.name = ident("function name");
    expect("(");
    if (cur().kind == Token::Kind::Ident) f.param = ident("parameter name");
    expect(")");
    f.body = block(0);
    f.loc.end = prev_end();
    return f;
  }

  std::vector<Stmt> block(int depth) {
    if (depth > kMaxDepth) fail("statements nested too deeply");
    expect("{");
    std::vector<Stmt> out;
    while (!cur().is("}")) {
      if (cur().kind == Token::Kind::End) fail("expected '}' but found end of input");
      out.push_back(stmt(depth));
    }
    ++pos_;
    return out;
  }

  std::vector<Expr> arglist() {
    std::vector<Expr> out;
    expect("(");
    if (!cur().is(")")) {
      out.push_back(expr(0));
      while (accept(",")) out.push_back(expr(0));
    }
    expect(")");
    return out;
  }

  Stmt stmt(int depth) {
    Stmt s;
    s.loc.begin = cur().loc.begin;
    if (cur().kind != Token::Kind::Ident) fail("expected a statement but found " + describe(cur()));
    const std::string word = cur().text;

    if (word == "subscribe") {
      ++pos_;
      s.kind = Stmt::Kind::Subscribe;
      expect("(");
      s.device = ident("device variable");
      expect(",");
      s.name = string_lit("attribute string");
      expect(",");
      s.handler = ident("handler name");
      expect(")");
    } else if (word == "runIn" || word == "runEvery") {
      ++pos_;
      s.kind = word == "runIn" ? Stmt::Kind::RunIn : Stmt::Kind::RunEvery;
      expect("(");
      s.args.push_back(expr(0));
      expect(",");
      s.handler = ident("handler name");
      expect(")");
    } else if (word == "if") {
      s = if_stmt(depth);
    } else if (word == "switch") {
      ++pos_;
      s.kind = Stmt::Kind::Switch;
      expect("(");
      s.args.push_back(expr(0));
      expect(")");
      expect("{");
      while (cur().is_ident("case")) {
        SwitchCase c;
        c.loc.begin = cur().loc.begin;
        ++pos_;
        c.label = literal();
        expect(":");
        c.body = block(depth + 1);
        c.loc.end = prev_end();
        s.cases.push_back(std::move(c));
      }
      if (s.cases.empty()) fail("switch needs at least one case");
      if (cur().is_ident("default")) {
        ++pos_;
        expect(":");
        s.defaultBody = block(depth + 1);
      }
      expect("}");
    } else {
      std::string name = ident("statement");
      if (accept(".")) {
        s.kind = Stmt::Kind::Command;
        s.device = name;
        if (cur().kind != Token::Kind::Ident) fail("expected command name");
        s.name = toks_[pos_++].text;
        s.args = arglist();
      } else if (accept("=")) {
        s.kind = Stmt::Kind::Assign;
        s.name = name;
        Expr value = expr(0);
        if (accept("?")) {
          Expr a = expr(0);
          expect(":");
          Expr b = expr(0);
          Stmt ta, tb;
          ta.kind = tb.kind = Stmt::Kind::Assign;
          ta.name = tb.name = name;
          ta.loc = tb.loc = {s.loc.begin, prev_end()};
          ta.args.push_back(std::move(a));
          tb.args.push_back(std::move(b));
          s.kind = Stmt::Kind::If;
          s.fromTernary = true;
          s.hasElse = true;
          s.name.clear();
          s.args.push_back(std::move(value));
          s.thenBody.push_back(std::move(ta));
          s.elseBody.push_back(std::move(tb));
        } else {
          s.args.push_back(std::move(value));
        }
      } else if (cur().is("(")) {
        s.kind = Stmt::Kind::ApiCall;  // reclassified once all functions are known
        s.name = name;
        s.args = arglist();
      } else {
        fail("expected '.', '=' or '(' after '" + name + "'");
      }
    }
    s.loc.end = prev_end();
    return s;
  }

  Stmt if_stmt(int depth) {
    Stmt s;
    s.kind = Stmt::Kind::If;
    s.loc.begin = cur().loc.begin;
    ++pos_;
    expect("(");
    s.args.push_back(expr(0));
    expect(")");
    s.thenBody = block(depth + 1);
    if (cur().is_ident("else")) {
      ++pos_;
      s.hasElse = true;
      if (cur().is_ident("if")) {
        if (depth > kMaxDepth) fail("statements nested too deeply");
        s.elseIf = true;
        s.elseBody.push_back(if_stmt(depth + 1));
      } else {
        s.elseBody = block(depth + 1);
      }
    }
    s.loc.end = prev_end();
    return s;
  }

  Expr literal() {
    Expr e;
    e.loc.begin = cur().loc.begin;
    if (cur().kind == Token::Kind::Int) {
      e.kind = Expr::Kind::Int;
      e.ival = toks_[pos_++].ival;
    } else if (cur().kind == Token::Kind::String) {
      e.kind = Expr::Kind::Str;
      e.text = toks_[pos_++].text;
    } else if (cur().is_ident("true") || cur().is_ident("false")) {
      e.kind = Expr::Kind::Bool;
      e.bval = cur().text == "true";
      ++pos_;
    } else if (cur().is("-") && ahead(1).kind == Token::Kind::Int) {
      ++pos_;
      Expr n;
      n.kind = Expr::Kind::Int;
      n.ival = cur().ival;
      n.loc = cur().loc;
      ++pos_;
      e.kind = Expr::Kind::Unary;
      e.op = "-";
      e.args.push_back(std::move(n));
    } else {
      fail("expected a literal but found " + describe(cur()));
    }
    e.loc.end = prev_end();
    return e;
  }

  // Binding strength of a binary operator token; 0 if it is not one.
  static int precedence(const Token& t) {
    if (t.kind != Token::Kind::Punct) return 0;
    const std::string& p = t.text;
    if (p == "||") return 1;
    if (p == "&&") return 2;
    if (p == "==" || p == "!=") return 3;
    if (p == "<" || p == "<=" || p == ">" || p == ">=") return 4;
    if (p == "+" || p == "-") return 5;
    if (p == "*") return 6;
    return 0;
  }

  Expr expr(int depth) {
    if (depth > kMaxDepth) fail("expression nested too deeply");
    return binary(1, depth);
  }

  Expr binary(int min_prec, int depth) {
    Expr lhs = unary(depth);
    while (true) {
      int p = precedence(cur());
      if (p < min_prec || p == 0) return lhs;
      std::string op = toks_[pos_++].text;
      Expr rhs = binary(p + 1, depth + 1);
      Expr e;
      e.kind = Expr::Kind::Binary;
      e.op = op;
      e.loc = {lhs.loc.begin, rhs.loc.end};
      e.args.push_back(std::move(lhs));
      e.args.push_back(std::move(rhs));
      lhs = std::move(e);
    }
  }

  Expr unary(int depth) {
    if (depth > kMaxDepth) fail("expression nested too deeply");
    if (cur().is("!") || cur().is("-")) {
      Expr e;
      e.loc.begin = cur().loc.begin;
      e.kind = Expr::Kind::Unary;
      e.op = toks_[pos_++].text;
      e.args.push_back(unary(depth + 1));
      e.loc.end = prev_end();
      return e;
    }
    return primary(depth);
  }

  Expr primary(int depth) {
    Expr e;
    e.loc.begin = cur().loc.begin;
    const Token& t = cur();
    if (t.kind == Token::Kind::Int) {
      e.kind = Expr::Kind::Int;
      e.ival = t.ival;
      ++pos_;
    } else if (t.kind == Token::Kind::String) {
      e.kind = Expr::Kind::Str;
      e.text = t.text;
      ++pos_;
    } else if (t.is("(")) {
      ++pos_;
      e = expr(depth + 1);
      expect(")");
      ++e.parens;
      return e;
    } else if (t.is_ident("true") || t.is_ident("false")) {
      e.kind = Expr::Kind::Bool;
      e.bval = t.text == "true";
      ++pos_;
    } else if (t.is_ident("state")) {
      ++pos_;
      expect(".");
      e.kind = Expr::Kind::StateRead;
      if (cur().kind != Token::Kind::Ident) fail("expected state field name");
      e.text = toks_[pos_++].text;
    } else if (t.kind == Token::Kind::Ident) {
      std::string name = ident("expression");
      if (accept(".")) {
        if (cur().is_ident("value")) {
          ++pos_;
          e.kind = Expr::Kind::EventValue;
          e.text = name;
        } else if (cur().is_ident("current")) {
          ++pos_;
          expect("(");
          e.kind = Expr::Kind::AttrRead;
          e.text = name;
          e.attr = string_lit("attribute name");
          expect(")");
        } else {
          fail("expected 'value' or 'current(\"attr\")' after '" + name + ".'");
        }
      } else {
        e.kind = Expr::Kind::Var;
        e.text = name;
      }
    } else {
      fail("expected an expression but found " + describe(t));
    }
    e.loc.end = prev_end();
    return e;
  }

  void classify(std::vector<Stmt>& body, const std::set<std::string>& funcs) {
    for (auto& s : body) {
      if (s.kind == Stmt::Kind::ApiCall && funcs.count(s.name)) {
        if (!s.args.empty())
          throw Diagnostic{Severity::Error, "SyntaxError",
                           "call to local function '" + s.name + "' cannot take arguments", s.loc};
        s.kind = Stmt::Kind::LocalCall;
      }
      classify(s.thenBody, funcs);
      classify(s.elseBody, funcs);
      for (auto& c : s.cases) classify(c.body, funcs);
      if (s.defaultBody) classify(*s.defaultBody, funcs);
    }
  }

  void classify_calls(SourceUnit& u) {
    std::set<std::string> funcs;
    for (const auto& f : u.functions) funcs.insert(f.name);
    for (auto& f : u.functions) classify(f.body, funcs);
  }

  static void check_duplicates(const SourceUnit& u, std::vector<Diagnostic>& diags) {
    std::set<std::string> seen;
    for (const auto& i : u.inputs)
      if (!seen.insert(i.name).second)
        diags.push_back({Severity::Error, "DuplicateName", "input '" + i.name + "' is declared twice", i.loc});
    for (const auto& f : u.functions)
      if (!seen.insert(f.name).second)
        diags.push_back({Severity::Error, "DuplicateName", "name '" + f.name + "' is defined twice", f.loc});
  }

  std::string_view src_;
  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

}  // namespace detail

inline ParseResult parse(std::string_view source) { return detail::Parser(source).run(); }

}  // namespace hg
