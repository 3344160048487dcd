//===-- printer.hpp - Canonical HGL pretty-printer --------------*- C++ -*-===//
#pragma once

#include "hg/ast.hpp"

#include <sstream>
#include <string>

namespace hg {

namespace detail {

inline std::string escape_hgl(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      default: out += c;
    }
  }
  return out + "\"";
}

inline int binary_prec(const std::string& op) {
  if (op == "||") return 1;
  if (op == "&&") return 2;
  if (op == "==" || op == "!=") return 3;
  if (op == "<" || op == "<=" || op == ">" || op == ">=") return 4;
  if (op == "+" || op == "-") return 5;
  return 6;
}

inline int expr_prec(const Expr& e) {
  if (e.parens > 0) return 100;
  if (e.kind == Expr::Kind::Binary) return binary_prec(e.op);
  if (e.kind == Expr::Kind::Unary) return 7;
  return 100;
}

class Printer {
 public:
  std::string unit(const SourceUnit& u) {
    os_ << "app " << escape_hgl(u.appName) << "\n";
    if (!u.inputs.empty()) os_ << "\n";
    for (const auto& i : u.inputs) {
      os_ << "input " << i.name << ": ";
      switch (i.kind) {
        case InputDecl::Kind::Device: os_ << "device." << i.capability; break;
        case InputDecl::Kind::Number: os_ << "number"; break;
        case InputDecl::Kind::String: os_ << "string"; break;
        case InputDecl::Kind::Bool: os_ << "bool"; break;
        case InputDecl::Kind::Enum:
          os_ << "enum(";
          for (std::size_t k = 0; k < i.values.size(); ++k) os_ << (k ? ", " : "") << escape_hgl(i.values[k]);
          os_ << ")";
          break;
      }
      if (i.title) os_ << " title " << escape_hgl(*i.title);
      os_ << "\n";
    }
    for (const auto& f : u.functions) {
      os_ << "\ndef " << f.name << "(" << f.param.value_or("") << ") ";
      block(f.body, 0);
      os_ << "\n";
    }
    return os_.str();
  }

  std::string expr(const Expr& e) {
    std::string s = bare(e);
    for (int i = 0; i < e.parens; ++i) s = "(" + s + ")";
    return s;
  }

 private:
  std::string bare(const Expr& e) {
    switch (e.kind) {
      case Expr::Kind::Int: return std::to_string(e.ival);
      case Expr::Kind::Str: return escape_hgl(e.text);
      case Expr::Kind::Bool: return e.bval ? "true" : "false";
      case Expr::Kind::Var: return e.text;
      case Expr::Kind::EventValue: return e.text + ".value";
      case Expr::Kind::AttrRead: return e.text + ".current(" + escape_hgl(e.attr) + ")";
      case Expr::Kind::StateRead: return "state." + e.text;
      case Expr::Kind::Unary: {
        std::string inner = expr(e.args[0]);
        if (expr_prec(e.args[0]) < 7) inner = "(" + inner + ")";
        return e.op + inner;
      }
      case Expr::Kind::Binary: {
        int p = binary_prec(e.op);
        std::string l = expr(e.args[0]);
        std::string r = expr(e.args[1]);
        if (expr_prec(e.args[0]) < p) l = "(" + l + ")";
        if (expr_prec(e.args[1]) <= p) r = "(" + r + ")";
        return l + " " + e.op + " " + r;
      }
    }
    return {};
  }

  void indent(int n) {
    for (int i = 0; i < n; ++i) os_ << "  ";
  }

  std::string args(const std::vector<Expr>& a) {
    std::string s;
    for (std::size_t i = 0; i < a.size(); ++i) s += (i ? ", " : "") + expr(a[i]);
    return s;
  }

  void block(const std::vector<Stmt>& body, int depth) {
    os_ << "{\n";
    for (const auto& s : body) {
      indent(depth + 1);
      stmt(s, depth + 1);
      os_ << "\n";
    }
    indent(depth);
    os_ << "}";
  }

  void stmt(const Stmt& s, int depth) {
    switch (s.kind) {
      case Stmt::Kind::Subscribe:
        os_ << "subscribe(" << s.device << ", " << escape_hgl(s.name) << ", " << s.handler << ")";
        return;
      case Stmt::Kind::RunIn:
      case Stmt::Kind::RunEvery:
        os_ << (s.kind == Stmt::Kind::RunIn ? "runIn(" : "runEvery(") << expr(s.args[0]) << ", " << s.handler
            << ")";
        return;
      case Stmt::Kind::Assign: os_ << s.name << " = " << expr(s.args[0]); return;
      case Stmt::Kind::Command: os_ << s.device << "." << s.name << "(" << args(s.args) << ")"; return;
      case Stmt::Kind::ApiCall:
      case Stmt::Kind::LocalCall: os_ << s.name << "(" << args(s.args) << ")"; return;
      case Stmt::Kind::If:
        if (s.fromTernary) {
          os_ << s.thenBody[0].name << " = " << expr(s.args[0]) << " ? " << expr(s.thenBody[0].args[0])
              << " : " << expr(s.elseBody[0].args[0]);
          return;
        }
        os_ << "if (" << expr(s.args[0]) << ") ";
        block(s.thenBody, depth);
        if (s.hasElse) {
          os_ << " else ";
          if (s.elseIf)
            stmt(s.elseBody[0], depth);
          else
            block(s.elseBody, depth);
        }
        return;
      case Stmt::Kind::Switch:
        os_ << "switch (" << expr(s.args[0]) << ") {\n";
        for (const auto& c : s.cases) {
          indent(depth + 1);
          os_ << "case " << expr(c.label) << ": ";
          block(c.body, depth + 1);
          os_ << "\n";
        }
        if (s.defaultBody) {
          indent(depth + 1);
          os_ << "default: ";
          block(*s.defaultBody, depth + 1);
          os_ << "\n";
        }
        indent(depth);
        os_ << "}";
        return;
    }
  }

  std::ostringstream os_;
};

}  // namespace detail

inline std::string print(const SourceUnit& u) { return detail::Printer().unit(u); }
inline std::string print(const Expr& e) { return detail::Printer().expr(e); }

}  // namespace hg
