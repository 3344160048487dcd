//===-- symex.hpp - Rule extraction by symbolic execution -------*- C++ -*-===//
//
// Every path from an entry point or subscribed handler to a sink becomes one
// rule. Branching copies the path state, so each path carries a plain
// conjunction of literals. Integer and string locals are renamed SSA-style
// ("t", "t$2", ...) and defined by data constraints; boolean locals are kept
// as the literal sets under which they are true or false and expand in
// place wherever they are tested.
//
// Scheduled handlers (runIn / runEvery) are explored as a side branch that
// ends the path; the caller's path continues without them.
//
//===----------------------------------------------------------------------===//
#pragma once

#include "hg/ast.hpp"
#include "hg/catalog.hpp"
#include "hg/merge.hpp"
#include "hg/rules.hpp"
#include "hg/solver.hpp"
#include "hg/term.hpp"
#include "hg/validate.hpp"

#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace hg {

inline constexpr std::size_t kPathBudget = 10'000;

struct SinkHit {
  std::string subject;
  std::string capability;
  std::string command;
  std::vector<Term> params;
  std::vector<ConstraintLit> lits;   // path literals in force at the sink
  std::vector<DataConstraint> data;  // local definitions made so far
  Term when = Term::integer(0);
  Term period = Term::integer(0);
  bool scheduled = false;  // reached through runIn / runEvery
};

struct SymPath {
  std::vector<ConstraintLit> lits;
  std::vector<SinkHit> sinks;
};

/// A subscription made by some entry point.
struct Subscription {
  std::string device;
  std::string spec;  // "attr" or "attr.value"
  std::string handler;
  friend auto operator<=>(const Subscription&, const Subscription&) = default;
};

namespace detail {

// Literal sets under which a boolean local is true / false.
using Dnf = std::vector<std::vector<ConstraintLit>>;

struct BoolLocal {
  Dnf whenTrue;
  Dnf whenFalse;
};

struct SymState {
  std::vector<ConstraintLit> lits;
  std::vector<DataConstraint> data;
  std::map<std::string, Term> locals;      // current SSA term of each int / str local
  std::map<std::string, BoolLocal> flags;  // boolean locals
  std::map<std::string, int> versions;
  Term when = Term::integer(0);
  Term period = Term::integer(0);
  bool scheduled = false;
  std::vector<SinkHit> sinks;
};

class Executor {
 public:
  using K = std::function<void(SymState&)>;
  using TermK = std::function<void(SymState&, const Term&)>;

  Executor(const SourceUnit& u, const Catalog& cat, std::optional<Sort> eventSort)
      : u_(u), cat_(cat), eventSort_(eventSort) {}

  std::vector<SymPath> run(const FuncDef& f) {
    SymState st;
    block(f.body, 0, st, [this](SymState& s) { leaf(s); });
    return std::move(paths_);
  }

  const std::set<Subscription>& subscriptions() const { return subs_; }

 private:
  void leaf(SymState& s) {
    if (paths_.size() >= kPathBudget)
      throw Error("PathBudgetExceeded", "more than " + std::to_string(kPathBudget) + " paths in '" + u_.appName + "'");
    paths_.push_back({s.lits, s.sinks});
  }

  //===--- Statements ---===//

  void block(const std::vector<Stmt>& body, std::size_t i, SymState& st, const K& k) {
    if (i == body.size()) return k(st);
    stmt(body[i], st, [&](SymState& s) { block(body, i + 1, s, k); });
  }

  void stmt(const Stmt& s, SymState& st, const K& k) {
    switch (s.kind) {
      case Stmt::Kind::Subscribe:
        subs_.insert({s.device, s.name, s.handler});
        return k(st);
      case Stmt::Kind::RunIn:
      case Stmt::Kind::RunEvery: {
        bool every = s.kind == Stmt::Kind::RunEvery;
        term(s.args[0], Sort::Int, st, [&](SymState& st2, const Term& delay) {
          SymState side = st2;
          if (every) {
            if (!(delay.kind == Term::Kind::IntConst && delay.ival == 0)) side.period = delay;
          } else {
            side.when = Term::arith('+', side.when, delay);
          }
          side.scheduled = true;
          call(*u_.function(s.handler), side, [this](SymState& x) { leaf(x); });
          k(st2);
        });
        return;
      }
      case Stmt::Kind::Assign: assign(s, st, k); return;
      case Stmt::Kind::Command: {
        const auto* cap = device_capability(u_, cat_, s.device);
        const auto& spec = cat_.command(cap->name, s.name);
        args(s.args, spec.params, 0, {}, st, [&](SymState& st2, const std::vector<Term>& ps) {
          sink(st2, s.device, cap->name, s.name, ps);
          k(st2);
        });
        return;
      }
      case Stmt::Kind::ApiCall: {
        const auto* api = cat_.api(s.name);
        args(s.args, api->params, 0, {}, st, [&](SymState& st2, const std::vector<Term>& ps) {
          sink(st2, api->subject, api->capability, api->command, ps);
          k(st2);
        });
        return;
      }
      case Stmt::Kind::LocalCall: call(*u_.function(s.name), st, k); return;
      case Stmt::Kind::If:
        cond(s.args[0], true, st, [&](SymState& a) { block(s.thenBody, 0, a, k); });
        cond(s.args[0], false, st, [&](SymState& b) { block(s.elseBody, 0, b, k); });
        return;
      case Stmt::Kind::Switch: {
        auto hint = infer(s.args[0], st);
        if (!hint && !s.cases.empty()) hint = infer(s.cases[0].label, st);
        term(s.args[0], hint.value_or(Sort::Str), st, [&](SymState& st2, const Term& scrut) {
          std::vector<Term> labels;
          for (const auto& c : s.cases) labels.push_back(label_term(c.label));
          for (std::size_t i = 0; i < s.cases.size(); ++i) {
            SymState branch = st2;
            if (add_lit(branch, {scrut, CmpOp::Eq, labels[i]})) block(s.cases[i].body, 0, branch, k);
          }
          SymState rest = st2;
          for (const auto& l : labels)
            if (!add_lit(rest, {scrut, CmpOp::Ne, l})) return;
          if (s.defaultBody)
            block(*s.defaultBody, 0, rest, k);
          else
            k(rest);
        });
        return;
      }
    }
  }

  // Locals are per function: the callee starts with none and the caller's
  // are restored afterwards.
  void call(const FuncDef& f, SymState& st, const K& k) {
    auto savedLocals = st.locals;
    auto savedFlags = st.flags;
    st.locals.clear();
    st.flags.clear();
    block(f.body, 0, st, [&](SymState& s) {
      auto innerLocals = std::move(s.locals);
      auto innerFlags = std::move(s.flags);
      s.locals = savedLocals;
      s.flags = savedFlags;
      k(s);
      s.locals = std::move(innerLocals);
      s.flags = std::move(innerFlags);
    });
  }

  void assign(const Stmt& s, SymState& st, const K& k) {
    const Expr& e = s.args[0];
    if (infer(e, st) == Sort::Bool) {
      BoolLocal b;
      for (bool want : {true, false}) {
        SymState scratch = st;
        scratch.lits.clear();
        Dnf& out = want ? b.whenTrue : b.whenFalse;
        cond(e, want, scratch, [&](SymState& r) { out.push_back(r.lits); });
      }
      SymState next = st;
      next.locals.erase(s.name);
      next.flags[s.name] = std::move(b);
      return k(next);
    }
    term(e, infer(e, st).value_or(Sort::Str), st, [&](SymState& st2, const Term& value) {
      int v = ++st2.versions[s.name];
      std::string ssa = v == 1 ? s.name : s.name + "$" + std::to_string(v);
      Term local = Term::local(ssa, value.sort);
      SymState next = st2;
      next.data.push_back({local, value});
      next.flags.erase(s.name);
      next.locals[s.name] = local;
      k(next);
    });
  }

  void args(const std::vector<Expr>& es, const std::vector<ParamSpec>& params, std::size_t i,
            std::vector<Term> acc, SymState& st, const std::function<void(SymState&, const std::vector<Term>&)>& k) {
    if (i == es.size()) return k(st, acc);
    Sort hint = i < params.size() ? params[i].sort : Sort::Str;
    term(es[i], hint, st, [&, acc](SymState& st2, const Term& t) mutable {
      acc.push_back(t);
      args(es, params, i + 1, acc, st2, k);
    });
  }

  void sink(SymState& st, const std::string& subject, const std::string& cap, const std::string& cmd,
            const std::vector<Term>& params) {
    st.sinks.push_back({subject, cap, cmd, params, st.lits, st.data, st.when, st.period, st.scheduled});
  }

  //===--- Expressions ---===//

  std::optional<Sort> infer(const Expr& e, const SymState& st) const {
    switch (e.kind) {
      case Expr::Kind::Int: return Sort::Int;
      case Expr::Kind::Str: return Sort::Str;
      case Expr::Kind::Bool: return Sort::Bool;
      case Expr::Kind::StateRead: return std::nullopt;
      case Expr::Kind::EventValue: return eventSort_;
      case Expr::Kind::AttrRead: {
        const auto* cap = device_capability(u_, cat_, e.text);
        const auto* a = cap ? cap->attribute(e.attr) : nullptr;
        return a ? std::optional<Sort>(a->sort) : std::nullopt;
      }
      case Expr::Kind::Var: {
        if (const auto* in = u_.input(e.text)) return input_sort(*in);
        if (st.flags.count(e.text)) return Sort::Bool;
        auto it = st.locals.find(e.text);
        return it == st.locals.end() ? std::nullopt : std::optional<Sort>(it->second.sort);
      }
      case Expr::Kind::Unary: return e.op == "!" ? Sort::Bool : Sort::Int;
      case Expr::Kind::Binary:
        if (e.op == "+" || e.op == "-" || e.op == "*") return Sort::Int;
        return Sort::Bool;
    }
    return std::nullopt;
  }

  static bool is_comparison(const std::string& op) {
    return op == "==" || op == "!=" || op == "<" || op == "<=" || op == ">" || op == ">=";
  }

  static Term label_term(const Expr& e) {
    switch (e.kind) {
      case Expr::Kind::Int: return Term::integer(e.ival);
      case Expr::Kind::Bool: return Term::boolean(e.bval);
      case Expr::Kind::Unary: return Term::integer(-e.args[0].ival);
      default: return Term::string(e.text);
    }
  }

  /// Evaluates `e` to a term. Boolean subexpressions that are not atoms split
  /// the path into a true and a false branch.
  void term(const Expr& e, Sort hint, SymState& st, const TermK& k) {
    switch (e.kind) {
      case Expr::Kind::Int: return k(st, Term::integer(e.ival));
      case Expr::Kind::Str: return k(st, Term::string(e.text));
      case Expr::Kind::Bool: return k(st, Term::boolean(e.bval));
      case Expr::Kind::EventValue: return k(st, Term::event(eventSort_.value_or(hint)));
      case Expr::Kind::StateRead: return k(st, Term::input("state." + e.text, hint));
      case Expr::Kind::AttrRead:
        return k(st, Term::attribute(e.text, e.attr, infer(e, st).value_or(hint)));
      case Expr::Kind::Var: {
        if (const auto* in = u_.input(e.text)) return k(st, Term::input(e.text, input_sort(*in).value_or(hint)));
        if (auto it = st.locals.find(e.text); it != st.locals.end()) return k(st, it->second);
        break;  // boolean local
      }
      case Expr::Kind::Unary:
        if (e.op == "-")
          return term(e.args[0], Sort::Int, st,
                      [&](SymState& s, const Term& t) { k(s, Term::arith('-', Term::integer(0), t)); });
        break;
      case Expr::Kind::Binary:
        if (e.op == "+" || e.op == "-" || e.op == "*") {
          return term(e.args[0], Sort::Int, st, [&](SymState& s, const Term& a) {
            term(e.args[1], Sort::Int, s, [&](SymState& s2, const Term& b) { k(s2, Term::arith(e.op[0], a, b)); });
          });
        }
        break;
    }
    for (bool v : {true, false}) {
      SymState branch = st;
      cond(e, v, branch, [&](SymState& s) { k(s, Term::boolean(v)); });
    }
  }

  /// Continues with every extension of the path under which `e` == `want`.
  void cond(const Expr& e, bool want, SymState& st, const K& k) {
    switch (e.kind) {
      case Expr::Kind::Bool:
        if (e.bval == want) k(st);
        return;
      case Expr::Kind::Unary:
        if (e.op == "!") return cond(e.args[0], !want, st, k);
        break;
      case Expr::Kind::Var:
        if (auto it = st.flags.find(e.text); it != st.flags.end()) {
          const Dnf& sets = want ? it->second.whenTrue : it->second.whenFalse;
          for (const auto& lits : sets) {
            SymState branch = st;
            bool ok = true;
            for (const auto& l : lits) ok = ok && add_lit(branch, l);
            if (ok) k(branch);
          }
          return;
        }
        break;
      case Expr::Kind::Binary: {
        const std::string& op = e.op;
        bool conj = op == "&&";
        if (conj || op == "||") {
          // want == conj: both sides must agree with `want`; otherwise the
          // first side decides or falls through to the second.
          if (want == conj) {
            SymState branch = st;
            cond(e.args[0], want, branch, [&](SymState& s) { cond(e.args[1], want, s, k); });
          } else {
            SymState first = st;
            cond(e.args[0], want, first, k);
            SymState second = st;
            cond(e.args[0], !want, second, [&](SymState& s) { cond(e.args[1], want, s, k); });
          }
          return;
        }
        if (is_comparison(op)) {
          auto ls = infer(e.args[0], st);
          auto rs = infer(e.args[1], st);
          if ((op == "==" || op == "!=") && (ls == Sort::Bool || rs == Sort::Bool) &&
              (!atomic_bool(e.args[0], st) || !atomic_bool(e.args[1], st))) {
            // Case split on the left operand's truth value.
            for (bool v : {true, false}) {
              bool right = v ^ (op == "!=") ^ !want;
              SymState branch = st;
              cond(e.args[0], v, branch, [&](SymState& s) { cond(e.args[1], right, s, k); });
            }
            return;
          }
          Sort hint = ls ? *ls : rs.value_or(Sort::Str);
          CmpOp cmp = *parse_op(op);
          if (!want) cmp = negate(cmp);
          SymState branch = st;
          term(e.args[0], hint, branch, [&](SymState& s, const Term& a) {
            term(e.args[1], hint, s, [&](SymState& s2, const Term& b) {
              SymState next = s2;
              if (add_lit(next, {a, cmp, b})) k(next);
            });
          });
          return;
        }
        break;
      }
      default: break;
    }
    // A boolean atom: input, attribute, event value or state field.
    term(e, Sort::Bool, st, [&](SymState& s, const Term& t) {
      SymState next = s;
      if (add_lit(next, {t, CmpOp::Eq, Term::boolean(want)})) k(next);
    });
  }

  // True for boolean expressions that evaluate to a single term.
  bool atomic_bool(const Expr& e, const SymState& st) const {
    switch (e.kind) {
      case Expr::Kind::Bool:
      case Expr::Kind::EventValue:
      case Expr::Kind::AttrRead:
      case Expr::Kind::StateRead: return true;
      case Expr::Kind::Var: return !st.flags.count(e.text);
      default: return infer(e, st) != Sort::Bool;
    }
  }

  /// Conjoins `l`; false when the path becomes syntactically inconsistent.
  static bool add_lit(SymState& st, ConstraintLit l) {
    if (l.lhs.is_const() && l.rhs.is_const()) {
      auto v = compare(*l.lhs.const_value(), l.op, *l.rhs.const_value());
      return v.value_or(false);
    }
    if (l.lhs.is_const()) l = {l.rhs, mirror(l.op), l.lhs};
    ConstraintLit neg = l.negated();
    for (const auto& x : st.lits) {
      if (x == l) return true;
      if (x == neg) return false;
    }
    st.lits.push_back(std::move(l));
    return true;
  }

  const SourceUnit& u_;
  const Catalog& cat_;
  std::optional<Sort> eventSort_;
  std::set<Subscription> subs_;
  std::vector<SymPath> paths_;
};

}  // namespace detail

/// Enumerates the paths of `fn`. `eventSort` is the sort of the event value
/// when `fn` handles a subscription.
inline std::vector<SymPath> explore(const SourceUnit& u, const Catalog& cat, const FuncDef& fn,
                                    std::optional<Sort> eventSort = std::nullopt) {
  return detail::Executor(u, cat, eventSort).run(fn);
}

namespace detail {

inline Term resolve_locals(const Term& t, const std::vector<DataConstraint>& data, int depth = 0) {
  if (depth > 256) return t;
  return substitute(t, [&](const Term& v) -> std::optional<Term> {
    if (v.kind != Term::Kind::Local) return std::nullopt;
    for (const auto& d : data)
      if (d.target == v) return resolve_locals(d.source, data, depth + 1);
    return std::nullopt;
  });
}

inline bool has_event(const Term& t) {
  return mentions(t, [](const Term& x) { return x.kind == Term::Kind::Event; });
}

/// Data constraints defining the locals of `roots`, transitively.
inline std::vector<DataConstraint> needed_data(const std::vector<Term>& roots, const std::vector<DataConstraint>& data) {
  std::set<std::string> need;
  std::vector<Term> work;
  for (const auto& r : roots) collect_vars(r, work);
  while (!work.empty()) {
    Term v = work.back();
    work.pop_back();
    if (v.kind != Term::Kind::Local || !need.insert(v.text).second) continue;
    for (const auto& d : data)
      if (d.target == v) collect_vars(d.source, work);
  }
  std::vector<DataConstraint> out;
  for (const auto& d : data)
    if (need.count(d.target.text)) out.push_back(d);
  return out;
}

struct RuleRoot {
  std::optional<Subscription> sub;  // absent: lifecycle or timer rule
  bool onUninstall = false;
};

class RuleBuilder {
 public:
  RuleBuilder(const SourceUnit& u, const Catalog& cat) : u_(u), cat_(cat) {}

  Rule build(const RuleRoot& root, const SinkHit& hit) {
    Rule r;
    r.app = u_.appName;
    std::optional<Term> self;
    if (root.sub) {
      const auto* cap = device_capability(u_, cat_, root.sub->device);
      auto [attr, value] = split_attribute_spec(root.sub->spec);
      const auto* spec = cap->attribute(attr);
      r.trigger = {root.sub->device, cap->name, attr, {}};
      self = Term::attribute(root.sub->device, attr, spec->sort);
      if (value) r.trigger.constraint.push_back({*self, CmpOp::Eq, Term::constant(*attribute_value(*spec, *value))});
    } else if (hit.scheduled) {
      r.trigger = {kTimerSubject, "", "schedule", {}};
    } else {
      r.trigger = {kLifecycleSubject, "", "lifecycle", {}};
    }
    auto fold_event = [&](const Term& t) {
      if (!self) return t;
      return substitute(t, [&](const Term& v) -> std::optional<Term> {
        if (v.kind == Term::Kind::Event) return *self;
        return std::nullopt;
      });
    };
    bool contradictory = false;
    for (const auto& l : hit.lits) {
      ConstraintLit resolved{resolve_locals(l.lhs, hit.data), l.op, resolve_locals(l.rhs, hit.data)};
      if (!has_event(resolved.lhs) && !has_event(resolved.rhs)) {
        r.condition.predicates.push_back(l);
        continue;
      }
      ConstraintLit folded{fold_event(resolved.lhs), l.op, fold_event(resolved.rhs)};
      if (folded.lhs.is_const() && folded.rhs.is_const()) {
        if (!compare(*folded.lhs.const_value(), folded.op, *folded.rhs.const_value()).value_or(false))
          contradictory = true;
        continue;
      }
      if (folded.lhs.is_const()) folded = {folded.rhs, mirror(folded.op), folded.lhs};
      r.trigger.constraint.push_back(folded);
    }
    std::vector<Term> predTerms;
    for (const auto& l : r.condition.predicates) {
      predTerms.push_back(l.lhs);
      predTerms.push_back(l.rhs);
    }
    r.condition.data = needed_data(predTerms, hit.data);
    r.action.subject = hit.subject;
    r.action.capability = hit.capability;
    r.action.command = hit.command;
    std::vector<Term> actTerms = {hit.when, hit.period};
    for (const auto& p : hit.params) {
      r.action.params.push_back(fold_event(p));
      actTerms.push_back(p);
    }
    r.action.data = needed_data(actTerms, hit.data);
    r.action.when = fold_event(hit.when);
    r.action.period = fold_event(hit.period);
    for (auto* data : {&r.condition.data, &r.action.data})
      for (auto& d : *data) d.source = fold_event(d.source);

    for (const auto& var : rule_device_vars(r)) {
      if (const auto* cap = device_capability(u_, cat_, var))
        r.capabilities[var] = cap->name;
      else if (var == r.action.subject)
        r.capabilities[var] = r.action.capability;
    }
    if (root.onUninstall) r.flags.insert(kFlagOnUninstall);
    if (contradictory || !trigger_satisfiable(r)) r.flags.insert(kFlagUnsatisfiable);
    finalize(r);
    return r;
  }

 private:
  bool trigger_satisfiable(const Rule& r) const {
    if (r.trigger.constraint.empty()) return true;
    ProblemBuilder pb(cat_, {false});
    pb.add_trigger(r, Side::Pre);
    return solve(pb.build()).kind != Outcome::Kind::Unsat;
  }

  const SourceUnit& u_;
  const Catalog& cat_;
};

}  // namespace detail

/// Extracts the rules of a validated unit.
inline RuleSet extract_rules(const SourceUnit& u, const Catalog& cat) {
  RuleSet rs;
  rs.app = u.appName;
  for (const auto& in : u.inputs) rs.inputs.push_back(input_spec(in));

  std::map<std::string, Rule> rules;
  detail::RuleBuilder builder(u, cat);
  auto emit = [&](const detail::RuleRoot& root, const std::vector<SymPath>& paths) {
    for (const auto& p : paths)
      for (const auto& hit : p.sinks) {
        Rule r = builder.build(root, hit);
        rules.emplace(r.id, std::move(r));
      }
  };

  // Subscription -> whether every entry point making it is `uninstalled`.
  std::map<Subscription, bool> subs;
  for (const char* entry : {"installed", "updated", "uninstalled"}) {
    const auto* fn = u.function(entry);
    if (!fn) continue;
    bool uninstall = std::string_view(entry) == "uninstalled";
    detail::Executor ex(u, cat, std::nullopt);
    auto paths = ex.run(*fn);
    emit({std::nullopt, uninstall}, paths);
    for (const auto& s : ex.subscriptions()) {
      auto [it, fresh] = subs.emplace(s, uninstall);
      if (!fresh) it->second = it->second && uninstall;
    }
  }
  // Handlers may subscribe further; follow until no new subscription appears.
  std::set<Subscription> done;
  while (true) {
    std::vector<std::pair<Subscription, bool>> todo;
    for (const auto& [s, un] : subs)
      if (!done.count(s)) todo.emplace_back(s, un);
    if (todo.empty()) break;
    for (const auto& [s, un] : todo) {
      done.insert(s);
      const auto* cap = device_capability(u, cat, s.device);
      const auto* attr = cap->attribute(split_attribute_spec(s.spec).first);
      detail::Executor ex(u, cat, attr->sort);
      emit({s, un}, ex.run(*u.function(s.handler)));
      for (const auto& more : ex.subscriptions()) subs.emplace(more, un);
    }
  }
  for (auto& [id, r] : rules) rs.rules.push_back(std::move(r));
  return rs;
}

}  // namespace hg
