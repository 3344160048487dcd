//===-- validate.hpp - Static checks that make an app analyzable -*- C++ -*-===//
//
// A unit passes when every name resolves, commands exist for the device's
// capability, expression sorts line up, and no function can reach itself
// through calls, subscriptions or schedules. Locals must be definitely
// assigned before they are read.
//
//===----------------------------------------------------------------------===//
#pragma once

#include "hg/ast.hpp"
#include "hg/catalog.hpp"
#include "hg/term.hpp"

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace hg {

/// Capability of a device variable: a declared device input or a builtin.
inline const CapabilityEntry* device_capability(const SourceUnit& u, const Catalog& cat,
                                                std::string_view var) {
  if (const auto* in = u.input(var)) {
    if (in->kind != InputDecl::Kind::Device) return nullptr;
    return cat.capability(in->capability);
  }
  if (const auto* b = cat.builtin(var)) return cat.capability(b->capability);
  return nullptr;
}

inline std::optional<Sort> input_sort(const InputDecl& d) {
  switch (d.kind) {
    case InputDecl::Kind::Number: return Sort::Int;
    case InputDecl::Kind::String:
    case InputDecl::Kind::Enum: return Sort::Str;
    case InputDecl::Kind::Bool: return Sort::Bool;
    case InputDecl::Kind::Device: return std::nullopt;
  }
  return std::nullopt;
}

/// Splits "attr" / "attr.value" subscription specs.
inline std::pair<std::string, std::optional<std::string>> split_attribute_spec(const std::string& spec) {
  auto dot = spec.find('.');
  if (dot == std::string::npos) return {spec, std::nullopt};
  return {spec.substr(0, dot), spec.substr(dot + 1)};
}

/// Parses the value half of "attr.value" against the attribute's sort.
inline std::optional<Value> attribute_value(const AttributeSpec& a, const std::string& text) {
  switch (a.sort) {
    case Sort::Str:
      if (!a.values.empty() && std::find(a.values.begin(), a.values.end(), text) == a.values.end())
        return std::nullopt;
      return Value{text};
    case Sort::Bool:
      if (text == "true") return Value{true};
      if (text == "false") return Value{false};
      return std::nullopt;
    case Sort::Int:
      try {
        std::size_t used = 0;
        long long v = std::stoll(text, &used);
        if (used != text.size()) return std::nullopt;
        return Value{static_cast<std::int64_t>(v)};
      } catch (const std::logic_error&) {
        return std::nullopt;
      }
  }
  return std::nullopt;
}

namespace detail {

class Validator {
 public:
  Validator(const SourceUnit& u, const Catalog& c) : u_(u), cat_(c) {}

  std::vector<Diagnostic> run() {
    check_inputs();
    for (const auto& f : u_.functions) check_function(f);
    check_recursion();
    return std::move(diags_);
  }

 private:
  void report(const std::string& code, const std::string& msg, const SourceSpan& at) {
    diags_.push_back({Severity::Error, code, msg, at});
  }

  void check_inputs() {
    for (const auto& in : u_.inputs) {
      if (cat_.builtin(in.name))
        report("DuplicateName", "input '" + in.name + "' shadows a builtin device", in.loc);
      if (in.kind == InputDecl::Kind::Device && !cat_.capability(in.capability))
        report("UnknownCapability", "capability '" + in.capability + "' is not in the catalog", in.loc);
      std::set<std::string> vals;
      for (const auto& v : in.values)
        if (!vals.insert(v).second) report("DuplicateName", "enum value \"" + v + "\" is repeated", in.loc);
    }
  }

  // Per-function walk state.
  struct Scope {
    const FuncDef* fn = nullptr;
    std::map<std::string, Sort> locals;  // sort of every local assigned anywhere so far
  };

  void check_function(const FuncDef& f) {
    Scope sc;
    sc.fn = &f;
    std::set<std::string> assigned;
    body(f.body, sc, assigned);
  }

  void body(const std::vector<Stmt>& stmts, Scope& sc, std::set<std::string>& assigned) {
    for (const auto& s : stmts) stmt(s, sc, assigned);
  }

  static std::set<std::string> intersect(const std::set<std::string>& a, const std::set<std::string>& b) {
    std::set<std::string> out;
    for (const auto& x : a)
      if (b.count(x)) out.insert(x);
    return out;
  }

  void expect_sort(const Expr& e, Sort want, Scope& sc, const std::set<std::string>& assigned,
                   const char* what) {
    auto s = sort(e, sc, assigned);
    if (s && *s != want)
      report("SortMismatch", std::string(what) + " must be " + sort_name(want) + ", got " + sort_name(*s), e.loc);
  }

  void check_handler(const Stmt& s) {
    if (!u_.function(s.handler))
      report("UnknownHandler", "handler '" + s.handler + "' is not defined", s.loc);
  }

  void check_args(const Stmt& s, const std::vector<ParamSpec>& params, Scope& sc,
                  const std::set<std::string>& assigned) {
    if (s.args.size() != params.size()) {
      report("ArityMismatch",
             "'" + s.name + "' takes " + std::to_string(params.size()) + " argument(s), got " +
                 std::to_string(s.args.size()),
             s.loc);
      for (const auto& a : s.args) sort(a, sc, assigned);
      return;
    }
    for (std::size_t i = 0; i < params.size(); ++i)
      expect_sort(s.args[i], params[i].sort, sc, assigned, "argument");
  }

  void stmt(const Stmt& s, Scope& sc, std::set<std::string>& assigned) {
    switch (s.kind) {
      case Stmt::Kind::Subscribe: {
        check_handler(s);
        const auto* cap = device_capability(u_, cat_, s.device);
        if (!cap) {
          report("UnboundVariable", "'" + s.device + "' is not a device", s.loc);
          return;
        }
        auto [attr, value] = split_attribute_spec(s.name);
        const auto* a = cap->attribute(attr);
        if (!a) {
          report("UnknownAttribute", "capability '" + cap->name + "' has no attribute '" + attr + "'", s.loc);
        } else if (value && !attribute_value(*a, *value)) {
          report("UnknownAttribute", "\"" + *value + "\" is not a value of " + cap->name + "." + attr, s.loc);
        }
        return;
      }
      case Stmt::Kind::RunIn:
      case Stmt::Kind::RunEvery:
        check_handler(s);
        expect_sort(s.args[0], Sort::Int, sc, assigned, "schedule delay");
        return;
      case Stmt::Kind::Assign: {
        if (u_.input(s.name) || cat_.builtin(s.name) ||
            (sc.fn->param && *sc.fn->param == s.name)) {
          report("InvalidAssignment", "cannot assign to '" + s.name + "'", s.loc);
          sort(s.args[0], sc, assigned);
          return;
        }
        auto v = sort(s.args[0], sc, assigned);
        if (v) {
          auto it = sc.locals.find(s.name);
          if (it != sc.locals.end() && it->second != *v)
            report("SortMismatch", "'" + s.name + "' was " + sort_name(it->second) + ", now assigned " + sort_name(*v),
                   s.loc);
          else
            sc.locals[s.name] = *v;
        }
        assigned.insert(s.name);
        return;
      }
      case Stmt::Kind::Command: {
        const auto* cap = device_capability(u_, cat_, s.device);
        if (!cap) {
          report("UnboundVariable", "'" + s.device + "' is not a device", s.loc);
          return;
        }
        const auto* cmd = cap->command(s.name);
        if (!cmd) {
          report("UnknownCommand", "capability '" + cap->name + "' has no command '" + s.name + "'", s.loc);
          return;
        }
        check_args(s, cmd->params, sc, assigned);
        return;
      }
      case Stmt::Kind::ApiCall: {
        const auto* api = cat_.api(s.name);
        if (!api) {
          report("UnknownHandler", "'" + s.name + "' is neither a function nor a known API", s.loc);
          return;
        }
        check_args(s, api->params, sc, assigned);
        return;
      }
      case Stmt::Kind::LocalCall: return;
      case Stmt::Kind::If: {
        expect_sort(s.args[0], Sort::Bool, sc, assigned, "condition");
        auto a = assigned;
        auto b = assigned;
        body(s.thenBody, sc, a);
        body(s.elseBody, sc, b);
        assigned = intersect(a, b);
        return;
      }
      case Stmt::Kind::Switch: {
        auto scrut = sort(s.args[0], sc, assigned);
        std::vector<std::string> labels;
        std::optional<std::set<std::string>> out;
        for (const auto& c : s.cases) {
          auto ls = sort(c.label, sc, assigned);
          if (scrut && ls && *scrut != *ls)
            report("SortMismatch", "case label sort differs from switch value", c.label.loc);
          std::string key = std::to_string(static_cast<int>(c.label.kind)) + print_label(c.label);
          if (std::find(labels.begin(), labels.end(), key) != labels.end())
            report("DuplicateCase", "case label repeated", c.label.loc);
          labels.push_back(key);
          auto a = assigned;
          body(c.body, sc, a);
          out = out ? intersect(*out, a) : a;
        }
        auto d = assigned;
        if (s.defaultBody) body(*s.defaultBody, sc, d);
        assigned = out ? intersect(*out, d) : d;
        return;
      }
    }
  }

  static std::string print_label(const Expr& e) {
    if (e.kind == Expr::Kind::Unary) return "-" + std::to_string(e.args[0].ival);
    if (e.kind == Expr::Kind::Int) return std::to_string(e.ival);
    if (e.kind == Expr::Kind::Bool) return e.bval ? "true" : "false";
    return e.text;
  }

  std::optional<Sort> sort(const Expr& e, Scope& sc, const std::set<std::string>& assigned) {
    switch (e.kind) {
      case Expr::Kind::Int: return Sort::Int;
      case Expr::Kind::Str: return Sort::Str;
      case Expr::Kind::Bool: return Sort::Bool;
      case Expr::Kind::StateRead: return std::nullopt;
      case Expr::Kind::EventValue:
        if (!sc.fn->param || *sc.fn->param != e.text)
          report("UnboundVariable", "'" + e.text + "' is not this function's event parameter", e.loc);
        return std::nullopt;
      case Expr::Kind::AttrRead: {
        const auto* cap = device_capability(u_, cat_, e.text);
        if (!cap) {
          report("UnboundVariable", "'" + e.text + "' is not a device", e.loc);
          return std::nullopt;
        }
        const auto* a = cap->attribute(e.attr);
        if (!a) {
          report("UnknownAttribute", "capability '" + cap->name + "' has no attribute '" + e.attr + "'", e.loc);
          return std::nullopt;
        }
        return a->sort;
      }
      case Expr::Kind::Var: {
        if (const auto* in = u_.input(e.text)) {
          auto s = input_sort(*in);
          if (!s) report("SortMismatch", "device '" + e.text + "' used as a value", e.loc);
          return s;
        }
        if (assigned.count(e.text)) {
          auto it = sc.locals.find(e.text);
          return it == sc.locals.end() ? std::nullopt : std::optional<Sort>(it->second);
        }
        report("UnboundVariable", "'" + e.text + "' is not an input or an assigned local", e.loc);
        return std::nullopt;
      }
      case Expr::Kind::Unary: {
        Sort want = e.op == "!" ? Sort::Bool : Sort::Int;
        expect_sort(e.args[0], want, sc, assigned, e.op == "!" ? "operand of '!'" : "operand of '-'");
        return want;
      }
      case Expr::Kind::Binary: {
        const std::string& op = e.op;
        if (op == "&&" || op == "||") {
          expect_sort(e.args[0], Sort::Bool, sc, assigned, "operand of logical operator");
          expect_sort(e.args[1], Sort::Bool, sc, assigned, "operand of logical operator");
          return Sort::Bool;
        }
        if (op == "+" || op == "-" || op == "*") {
          expect_sort(e.args[0], Sort::Int, sc, assigned, "arithmetic operand");
          expect_sort(e.args[1], Sort::Int, sc, assigned, "arithmetic operand");
          return Sort::Int;
        }
        if (op == "==" || op == "!=") {
          auto l = sort(e.args[0], sc, assigned);
          auto r = sort(e.args[1], sc, assigned);
          if (l && r && *l != *r)
            report("SortMismatch", std::string("cannot compare ") + sort_name(*l) + " with " + sort_name(*r), e.loc);
          return Sort::Bool;
        }
        expect_sort(e.args[0], Sort::Int, sc, assigned, "ordered comparison operand");
        expect_sort(e.args[1], Sort::Int, sc, assigned, "ordered comparison operand");
        return Sort::Bool;
      }
    }
    return std::nullopt;
  }

  void check_recursion() {
    std::map<std::string, std::vector<std::string>> edges;
    for (const auto& f : u_.functions) {
      auto& out = edges[f.name];
      for_each_stmt(f.body, [&](const Stmt& s) {
        if (s.kind == Stmt::Kind::LocalCall) out.push_back(s.name);
        if (!s.handler.empty() && u_.function(s.handler)) out.push_back(s.handler);
      });
    }
    // 0 = unvisited, 1 = on stack, 2 = done
    std::map<std::string, int> mark;
    std::set<std::string> reported;
    std::function<void(const std::string&, std::vector<std::string>&)> dfs =
        [&](const std::string& n, std::vector<std::string>& stack) {
          mark[n] = 1;
          stack.push_back(n);
          for (const auto& m : edges[n]) {
            if (mark[m] == 1) {
              auto it = std::find(stack.begin(), stack.end(), m);
              std::string cycle;
              for (auto k = it; k != stack.end(); ++k) cycle += *k + " -> ";
              cycle += m;
              if (reported.insert(m).second)
                report("RecursionNotSupported", "call cycle " + cycle, u_.function(m)->loc);
            } else if (mark[m] == 0) {
              dfs(m, stack);
            }
          }
          stack.pop_back();
          mark[n] = 2;
        };
    for (const auto& f : u_.functions) {
      std::vector<std::string> stack;
      if (mark[f.name] == 0) dfs(f.name, stack);
    }
  }

  const SourceUnit& u_;
  const Catalog& cat_;
  std::vector<Diagnostic> diags_;
};

}  // namespace detail

/// Returns no diagnostics iff `unit` can be symbolically executed.
inline std::vector<Diagnostic> validate(const SourceUnit& unit, const Catalog& catalog) {
  return detail::Validator(unit, catalog).run();
}

}  // namespace hg
