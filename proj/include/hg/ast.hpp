//===-- ast.hpp - HGL syntax tree -------------------------------*- C++ -*-===//
#pragma once

#include "hg/error.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace hg {

struct Expr {
  enum class Kind { Int, Str, Bool, Var, EventValue, AttrRead, StateRead, Unary, Binary };

  Kind kind = Kind::Int;
  std::int64_t ival = 0;
  bool bval = false;
  // Str: literal text. Var: name. EventValue: event parameter name.
  // AttrRead: device variable. StateRead: state field.
  std::string text;
  std::string attr;  // AttrRead only
  std::string op;    // Unary / Binary operator spelling
  std::vector<Expr> args;
  int parens = 0;  // redundant parentheses written around this node
  SourceSpan loc;
};

struct Stmt;

struct SwitchCase {
  Expr label;
  std::vector<Stmt> body;
  SourceSpan loc;
};

struct Stmt {
  enum class Kind { Subscribe, RunIn, RunEvery, Assign, Command, ApiCall, LocalCall, If, Switch };

  Kind kind = Kind::Assign;
  // Subscribe: device var. Command: device var.
  std::string device;
  // Subscribe: attribute spec ("switch" or "switch.on"). Assign: target.
  // Command: command. ApiCall / LocalCall: callee.
  std::string name;
  std::string handler;     // Subscribe / RunIn / RunEvery
  std::vector<Expr> args;  // call args; delay; assigned value; if / switch scrutinee
  std::vector<Stmt> thenBody;
  std::vector<Stmt> elseBody;
  std::vector<SwitchCase> cases;
  std::optional<std::vector<Stmt>> defaultBody;
  bool hasElse = false;
  bool elseIf = false;       // else branch was written `else if`
  bool fromTernary = false;  // `x = c ? a : b`, desugared into If
  SourceSpan loc;
};

struct InputDecl {
  enum class Kind { Device, Number, String, Bool, Enum };

  std::string name;
  Kind kind = Kind::Number;
  std::string capability;           // Device
  std::vector<std::string> values;  // Enum
  std::optional<std::string> title;
  SourceSpan loc;
};

struct FuncDef {
  std::string name;
  std::optional<std::string> param;
  std::vector<Stmt> body;
  SourceSpan loc;
};

struct SourceUnit {
  std::string appName;
  std::vector<InputDecl> inputs;
  std::vector<FuncDef> functions;
  std::string sourceText;

  const InputDecl* input(std::string_view n) const {
    for (const auto& i : inputs)
      if (i.name == n) return &i;
    return nullptr;
  }
  const FuncDef* function(std::string_view n) const {
    for (const auto& f : functions)
      if (f.name == n) return &f;
    return nullptr;
  }
};

inline bool is_entry_point(std::string_view name) {
  return name == "installed" || name == "updated" || name == "uninstalled";
}

//===----------------------------------------------------------------------===//
// Structural equality, ignoring source locations.
//===----------------------------------------------------------------------===//

bool same_tree(const Stmt& a, const Stmt& b);

inline bool same_tree(const Expr& a, const Expr& b) {
  if (a.kind != b.kind || a.ival != b.ival || a.bval != b.bval || a.text != b.text ||
      a.attr != b.attr || a.op != b.op || a.parens != b.parens || a.args.size() != b.args.size())
    return false;
  for (std::size_t i = 0; i < a.args.size(); ++i)
    if (!same_tree(a.args[i], b.args[i])) return false;
  return true;
}

template <class T>
bool same_trees(const std::vector<T>& a, const std::vector<T>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!same_tree(a[i], b[i])) return false;
  return true;
}

inline bool same_tree(const Stmt& a, const Stmt& b) {
  if (a.kind != b.kind || a.device != b.device || a.name != b.name || a.handler != b.handler ||
      a.hasElse != b.hasElse || a.elseIf != b.elseIf || a.fromTernary != b.fromTernary ||
      a.defaultBody.has_value() != b.defaultBody.has_value() || a.cases.size() != b.cases.size())
    return false;
  if (!same_trees(a.args, b.args) || !same_trees(a.thenBody, b.thenBody) ||
      !same_trees(a.elseBody, b.elseBody))
    return false;
  for (std::size_t i = 0; i < a.cases.size(); ++i)
    if (!same_tree(a.cases[i].label, b.cases[i].label) || !same_trees(a.cases[i].body, b.cases[i].body))
      return false;
  return !a.defaultBody || same_trees(*a.defaultBody, *b.defaultBody);
}

inline bool same_tree(const SourceUnit& a, const SourceUnit& b) {
  if (a.appName != b.appName || a.inputs.size() != b.inputs.size() ||
      a.functions.size() != b.functions.size())
    return false;
  for (std::size_t i = 0; i < a.inputs.size(); ++i) {
    const auto& x = a.inputs[i];
    const auto& y = b.inputs[i];
    if (x.name != y.name || x.kind != y.kind || x.capability != y.capability || x.values != y.values ||
        x.title != y.title)
      return false;
  }
  for (std::size_t i = 0; i < a.functions.size(); ++i) {
    const auto& f = a.functions[i];
    const auto& g = b.functions[i];
    if (f.name != g.name || f.param != g.param || !same_trees(f.body, g.body)) return false;
  }
  return true;
}

/// Visits every statement of a body, nested ones included.
template <class F>
void for_each_stmt(const std::vector<Stmt>& body, F&& f) {
  for (const auto& s : body) {
    f(s);
    for_each_stmt(s.thenBody, f);
    for_each_stmt(s.elseBody, f);
    for (const auto& c : s.cases) for_each_stmt(c.body, f);
    if (s.defaultBody) for_each_stmt(*s.defaultBody, f);
  }
}

template <class F>
void for_each_expr(const Expr& e, F&& f) {
  f(e);
  for (const auto& a : e.args) for_each_expr(a, f);
}

}  // namespace hg
