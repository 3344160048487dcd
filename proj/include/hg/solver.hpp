//===-- solver.hpp - Finite-domain constraint solver ------------*- C++ -*-===//
//
// Conjunctions of comparison literals over integer ranges, string
// enumerations and booleans. Search assigns variables in declaration order
// and tries values in ascending order, pruning with bounds propagation, so
// the first solution found is the lexicographically smallest one. The
// brute-force oracle enumerates in the same order and must agree.
//
//===----------------------------------------------------------------------===//
#pragma once

#include "hg/error.hpp"
#include "hg/term.hpp"

#include <algorithm>
#include <cstdint>
#include <limits>
#include <map>
#include <sstream>
#include <string>
#include <vector>

namespace hg {

struct Domain {
  enum class Kind { IntRange, EnumSet, Bool };

  Kind kind = Kind::IntRange;
  std::int64_t lo = 0;
  std::int64_t hi = 0;
  std::vector<std::string> values;  // sorted, unique

  static Domain range(std::int64_t lo, std::int64_t hi) {
    if (lo > hi) throw Error("EmptyDomain", "integer range with lo > hi");
    Domain d;
    d.lo = lo;
    d.hi = hi;
    return d;
  }
  static Domain enumeration(std::vector<std::string> vs) {
    std::sort(vs.begin(), vs.end());
    vs.erase(std::unique(vs.begin(), vs.end()), vs.end());
    if (vs.empty()) throw Error("EmptyDomain", "enumeration without values");
    Domain d;
    d.kind = Kind::EnumSet;
    d.values = std::move(vs);
    return d;
  }
  static Domain boolean() {
    Domain d;
    d.kind = Kind::Bool;
    return d;
  }

  Sort sort() const {
    switch (kind) {
      case Kind::IntRange: return Sort::Int;
      case Kind::EnumSet: return Sort::Str;
      case Kind::Bool: return Sort::Bool;
    }
    return Sort::Int;
  }
  std::uint64_t size() const {
    switch (kind) {
      case Kind::IntRange: return static_cast<std::uint64_t>(hi - lo) + 1;
      case Kind::EnumSet: return values.size();
      case Kind::Bool: return 2;
    }
    return 0;
  }
  friend bool operator==(const Domain&, const Domain&) = default;
};

inline constexpr std::int64_t kDefaultIntBound = 1'000'000;
inline constexpr std::uint64_t kNodeBudget = 1'000'000;
inline constexpr std::uint64_t kOracleBudget = 1'000'000;

struct VarDecl {
  std::string name;
  Domain domain;
  friend bool operator==(const VarDecl&, const VarDecl&) = default;
};

struct Problem {
  std::vector<VarDecl> vars;
  std::vector<ConstraintLit> constraints;
  std::vector<std::string> provenance;  // originating rule id per constraint; may be empty

  const VarDecl* var(std::string_view n) const {
    for (const auto& v : vars)
      if (v.name == n) return &v;
    return nullptr;
  }
};

using Witness = std::map<std::string, Value>;

struct Outcome {
  enum class Kind { Sat, Unsat, BudgetExceeded };

  Kind kind = Kind::Unsat;
  Witness witness;
  std::uint64_t nodes = 0;

  bool sat() const { return kind == Kind::Sat; }
};

inline const char* outcome_name(Outcome::Kind k) {
  switch (k) {
    case Outcome::Kind::Sat: return "sat";
    case Outcome::Kind::Unsat: return "unsat";
    case Outcome::Kind::BudgetExceeded: return "budget-exceeded";
  }
  return "?";
}

/// Looks a witness value up for a solver variable term.
inline Assignment witness_assignment(const Witness& w) {
  return [&w](const Term& t) -> std::optional<Value> {
    auto it = w.find(t.symbol());
    if (it == w.end()) return std::nullopt;
    return it->second;
  };
}

/// True iff every constraint evaluates to true under `w`.
inline bool check_witness(const Problem& p, const Witness& w) {
  auto env = witness_assignment(w);
  for (const auto& v : p.vars) {
    auto it = w.find(v.name);
    if (it == w.end() || sort_of(it->second) != v.domain.sort()) return false;
    const Value& x = it->second;
    switch (v.domain.kind) {
      case Domain::Kind::IntRange: {
        auto i = std::get<std::int64_t>(x);
        if (i < v.domain.lo || i > v.domain.hi) return false;
        break;
      }
      case Domain::Kind::EnumSet:
        if (!std::binary_search(v.domain.values.begin(), v.domain.values.end(), std::get<std::string>(x)))
          return false;
        break;
      case Domain::Kind::Bool: break;
    }
  }
  for (const auto& c : p.constraints) {
    auto r = evaluate(c, env);
    if (!r || !*r) return false;
  }
  return true;
}

namespace detail {

using i128 = __int128;

struct LinearTerm {
  std::vector<std::pair<int, std::int64_t>> coefs;  // variable index -> coefficient
  std::int64_t constant = 0;
};

// One compiled literal. Integer literals become `sum + c (<=|==|!=) 0`;
// string and boolean literals compare codes of a variable with a constant
// code or another variable.
struct Compiled {
  enum class Form { Le, Eq, Ne, VarConst, VarVar, Const };
  Form form = Form::Const;
  LinearTerm lin;
  bool equal = true;  // VarConst / VarVar: == (true) or != (false)
  int a = -1;
  int b = -1;
  std::int64_t code = 0;
  bool truth = true;  // Const
};

class Solver {
 public:
  explicit Solver(const Problem& p, std::uint64_t budget) : p_(p), budget_(budget) {
    for (std::size_t i = 0; i < p.vars.size(); ++i) {
      if (!index_.emplace(p.vars[i].name, static_cast<int>(i)).second)
        throw Error("DuplicateVariable", "variable '" + p.vars[i].name + "' declared twice");
    }
    // Every string that can show up gets a global code; sorted, so code order
    // is lexicographic order.
    std::vector<std::string> strs;
    for (const auto& v : p.vars)
      if (v.domain.kind == Domain::Kind::EnumSet) strs.insert(strs.end(), v.domain.values.begin(), v.domain.values.end());
    for (const auto& c : p.constraints) {
      if (c.lhs.kind == Term::Kind::StrConst) strs.push_back(c.lhs.text);
      if (c.rhs.kind == Term::Kind::StrConst) strs.push_back(c.rhs.text);
    }
    std::sort(strs.begin(), strs.end());
    strs.erase(std::unique(strs.begin(), strs.end()), strs.end());
    strings_ = std::move(strs);
    for (const auto& c : p.constraints) compiled_.push_back(compile(c));
  }

  Outcome run() {
    Outcome out;
    State st = initial();
    for (const auto& c : compiled_)
      if (c.form == Compiled::Form::Const && !c.truth) return out;
    try {
      if (propagate(st) && search(0, st, out.witness)) out.kind = Outcome::Kind::Sat;
    } catch (const BudgetHit&) {
      out.kind = Outcome::Kind::BudgetExceeded;
      out.witness.clear();
    }
    out.nodes = nodes_;
    return out;
  }

 private:
  struct BudgetHit {};

  struct VarState {
    std::int64_t lo = 0, hi = 0;
    std::vector<char> alive;  // string / bool variables only, indexed by code
  };
  using State = std::vector<VarState>;

  int var_index(const Term& t) const {
    auto it = index_.find(t.symbol());
    if (it == index_.end()) throw Error("UndeclaredVariable", "variable '" + t.symbol() + "' is not declared");
    if (p_.vars[it->second].domain.sort() != t.sort)
      throw Error("SortMismatch", "variable '" + t.symbol() + "' used with sort " + sort_name(t.sort));
    return it->second;
  }

  std::int64_t string_code(const std::string& s) const {
    auto it = std::lower_bound(strings_.begin(), strings_.end(), s);
    return it - strings_.begin();
  }

  LinearTerm linearize(const Term& t) const {
    LinearTerm out;
    if (t.kind == Term::Kind::IntConst) {
      out.constant = t.ival;
      return out;
    }
    if (t.is_var()) {
      out.coefs.push_back({var_index(t), 1});
      return out;
    }
    if (t.kind != Term::Kind::Arith) throw Error("SortMismatch", "non-integer term in arithmetic");
    LinearTerm l = linearize(t.args[0]);
    LinearTerm r = linearize(t.args[1]);
    if (t.op == '*') {
      if (!l.coefs.empty() && !r.coefs.empty()) throw Error("NonLinear", "product of two variables: " + to_sexpr(t));
      if (l.coefs.empty()) std::swap(l, r);
      for (auto& [v, c] : l.coefs) c *= r.constant;
      l.constant *= r.constant;
      return l;
    }
    std::int64_t sign = t.op == '-' ? -1 : 1;
    for (auto [v, c] : r.coefs) l.coefs.push_back({v, sign * c});
    l.constant += sign * r.constant;
    return l;
  }

  static LinearTerm combine(LinearTerm a, std::int64_t sign_a, const LinearTerm& b, std::int64_t sign_b,
                            std::int64_t extra) {
    std::map<int, std::int64_t> acc;
    for (auto [v, c] : a.coefs) acc[v] += sign_a * c;
    for (auto [v, c] : b.coefs) acc[v] += sign_b * c;
    LinearTerm out;
    for (auto [v, c] : acc)
      if (c != 0) out.coefs.push_back({v, c});
    out.constant = sign_a * a.constant + sign_b * b.constant + extra;
    return out;
  }

  Compiled compile(const ConstraintLit& l) const {
    Compiled c;
    if (l.lhs.sort != l.rhs.sort)
      throw Error("SortMismatch", "comparison between different sorts: " + to_sexpr(l));
    if (l.lhs.sort == Sort::Int) {
      LinearTerm a = linearize(l.lhs);
      LinearTerm b = linearize(l.rhs);
      switch (l.op) {
        case CmpOp::Le: c.lin = combine(a, 1, b, -1, 0); c.form = Compiled::Form::Le; break;
        case CmpOp::Lt: c.lin = combine(a, 1, b, -1, 1); c.form = Compiled::Form::Le; break;
        case CmpOp::Ge: c.lin = combine(b, 1, a, -1, 0); c.form = Compiled::Form::Le; break;
        case CmpOp::Gt: c.lin = combine(b, 1, a, -1, 1); c.form = Compiled::Form::Le; break;
        case CmpOp::Eq: c.lin = combine(a, 1, b, -1, 0); c.form = Compiled::Form::Eq; break;
        case CmpOp::Ne: c.lin = combine(a, 1, b, -1, 0); c.form = Compiled::Form::Ne; break;
      }
      if (c.lin.coefs.empty()) {
        std::int64_t k = c.lin.constant;
        c.truth = c.form == Compiled::Form::Le ? k <= 0 : c.form == Compiled::Form::Eq ? k == 0 : k != 0;
        c.form = Compiled::Form::Const;
      }
      return c;
    }
    if (l.op != CmpOp::Eq && l.op != CmpOp::Ne)
      throw Error("SortMismatch", "ordered comparison on non-integer terms: " + to_sexpr(l));
    if (l.lhs.kind == Term::Kind::Arith || l.rhs.kind == Term::Kind::Arith)
      throw Error("SortMismatch", "arithmetic on non-integer terms");
    c.equal = l.op == CmpOp::Eq;
    auto code = [&](const Term& t) -> std::int64_t {
      if (t.kind == Term::Kind::BoolConst) return t.bval ? 1 : 0;
      return string_code(t.text);
    };
    bool lv = l.lhs.is_var(), rv = l.rhs.is_var();
    if (lv && rv) {
      c.form = Compiled::Form::VarVar;
      c.a = var_index(l.lhs);
      c.b = var_index(l.rhs);
    } else if (lv || rv) {
      c.form = Compiled::Form::VarConst;
      c.a = var_index(lv ? l.lhs : l.rhs);
      c.code = code(lv ? l.rhs : l.lhs);
    } else {
      c.form = Compiled::Form::Const;
      c.truth = (l.lhs == l.rhs) == c.equal;
    }
    return c;
  }

  State initial() const {
    State st(p_.vars.size());
    for (std::size_t i = 0; i < p_.vars.size(); ++i) {
      const Domain& d = p_.vars[i].domain;
      auto& s = st[i];
      switch (d.kind) {
        case Domain::Kind::IntRange:
          s.lo = d.lo;
          s.hi = d.hi;
          break;
        case Domain::Kind::Bool:
          s.lo = 0;
          s.hi = 1;
          s.alive.assign(2, 1);
          break;
        case Domain::Kind::EnumSet:
          s.alive.assign(strings_.size(), 0);
          for (const auto& v : d.values) s.alive[string_code(v)] = 1;
          s.lo = string_code(d.values.front());
          s.hi = string_code(d.values.back());
          break;
      }
    }
    return st;
  }

  static bool finite(const VarState& s) { return !s.alive.empty(); }

  // Re-tightens lo/hi of a finite variable to its live codes.
  static bool normalize(VarState& s) {
    if (!finite(s)) return s.lo <= s.hi;
    while (s.lo <= s.hi && !s.alive[s.lo]) ++s.lo;
    while (s.hi >= s.lo && !s.alive[s.hi]) --s.hi;
    return s.lo <= s.hi;
  }

  static bool fixed(const VarState& s) { return s.lo == s.hi; }

  static bool restrict(VarState& s, std::int64_t lo, std::int64_t hi, bool& changed) {
    if (lo > s.lo) {
      s.lo = lo;
      changed = true;
    }
    if (hi < s.hi) {
      s.hi = hi;
      changed = true;
    }
    return normalize(s);
  }

  static bool remove_value(VarState& s, std::int64_t v, bool& changed) {
    if (v < s.lo || v > s.hi) return true;
    if (finite(s)) {
      if (s.alive[v]) {
        s.alive[v] = 0;
        changed = true;
      }
      return normalize(s);
    }
    if (v == s.lo) {
      ++s.lo;
      changed = true;
    } else if (v == s.hi) {
      --s.hi;
      changed = true;
    }
    return s.lo <= s.hi;
  }

  static i128 floor_div(i128 a, i128 b) {
    i128 q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return q;
  }
  static i128 ceil_div(i128 a, i128 b) { return -floor_div(-a, b); }

  static std::int64_t clamp64(i128 v) {
    constexpr auto mx = std::numeric_limits<std::int64_t>::max();
    constexpr auto mn = std::numeric_limits<std::int64_t>::min();
    return v > mx ? mx : v < mn ? mn : static_cast<std::int64_t>(v);
  }

  // sum + c <= 0
  static bool propagate_le(const LinearTerm& lin, State& st, bool& changed) {
    i128 min_sum = lin.constant;
    for (auto [v, c] : lin.coefs) min_sum += c > 0 ? i128(c) * st[v].lo : i128(c) * st[v].hi;
    if (min_sum > 0) return false;
    for (auto [v, c] : lin.coefs) {
      i128 own = c > 0 ? i128(c) * st[v].lo : i128(c) * st[v].hi;
      i128 slack = -(min_sum - own);  // c * x <= slack
      if (c > 0) {
        if (!restrict(st[v], st[v].lo, clamp64(floor_div(slack, c)), changed)) return false;
      } else {
        if (!restrict(st[v], clamp64(ceil_div(slack, c)), st[v].hi, changed)) return false;
      }
    }
    return true;
  }

  static LinearTerm negated(const LinearTerm& lin) {
    LinearTerm n = lin;
    for (auto& [v, c] : n.coefs) c = -c;
    n.constant = -n.constant;
    return n;
  }

  bool propagate_one(const Compiled& c, State& st, bool& changed) const {
    switch (c.form) {
      case Compiled::Form::Const: return c.truth;
      case Compiled::Form::Le: return propagate_le(c.lin, st, changed);
      case Compiled::Form::Eq: return propagate_le(c.lin, st, changed) && propagate_le(negated(c.lin), st, changed);
      case Compiled::Form::Ne: {
        int open = -1;
        i128 sum = c.lin.constant;
        for (auto [v, k] : c.lin.coefs) {
          if (fixed(st[v])) {
            sum += i128(k) * st[v].lo;
          } else if (open < 0) {
            open = v;
          } else {
            return true;  // two free variables, nothing to prune
          }
        }
        if (open < 0) return sum != 0;
        std::int64_t k = 0;
        for (auto [v, kk] : c.lin.coefs)
          if (v == open) k = kk;
        if ((-sum) % k != 0) return true;
        i128 bad = -sum / k;
        if (bad < st[open].lo || bad > st[open].hi) return true;
        return remove_value(st[open], static_cast<std::int64_t>(bad), changed);
      }
      case Compiled::Form::VarConst: {
        auto& s = st[c.a];
        if (c.equal) {
          if (c.code < s.lo || c.code > s.hi || !s.alive[c.code]) return false;
          return restrict(s, c.code, c.code, changed);
        }
        return remove_value(s, c.code, changed);
      }
      case Compiled::Form::VarVar: {
        auto& x = st[c.a];
        auto& y = st[c.b];
        if (c.a == c.b) return c.equal;
        if (c.equal) {
          for (std::int64_t k = 0; k < static_cast<std::int64_t>(x.alive.size()); ++k) {
            bool both = x.alive[k] && y.alive[k] && k >= x.lo && k <= x.hi && k >= y.lo && k <= y.hi;
            if (x.alive[k] && !both) {
              x.alive[k] = 0;
              changed = true;
            }
            if (y.alive[k] && !both) {
              y.alive[k] = 0;
              changed = true;
            }
          }
          return normalize(x) && normalize(y);
        }
        if (fixed(x)) return remove_value(y, x.lo, changed);
        if (fixed(y)) return remove_value(x, y.lo, changed);
        return true;
      }
    }
    return true;
  }

  bool propagate(State& st) const {
    // Bounds tightening can creep one unit per round on cyclic constraints;
    // the cap keeps each call cheap and the search stays complete.
    for (int round = 0; round < 64; ++round) {
      bool changed = false;
      for (const auto& c : compiled_)
        if (!propagate_one(c, st, changed)) return false;
      if (!changed) return true;
    }
    return true;
  }

  Value decode(int var, std::int64_t code) const {
    switch (p_.vars[var].domain.kind) {
      case Domain::Kind::IntRange: return Value{code};
      case Domain::Kind::Bool: return Value{code != 0};
      case Domain::Kind::EnumSet: return Value{strings_[code]};
    }
    return Value{code};
  }

  bool search(std::size_t idx, const State& st, Witness& out) {
    if (idx == p_.vars.size()) {
      bool changed = false;
      State final_state = st;
      for (const auto& c : compiled_)
        if (!propagate_one(c, final_state, changed)) return false;
      for (std::size_t i = 0; i < st.size(); ++i) out[p_.vars[i].name] = decode(static_cast<int>(i), st[i].lo);
      return true;
    }
    int v = static_cast<int>(idx);
    const VarState& s = st[v];
    for (std::int64_t k = s.lo; k <= s.hi; ++k) {
      if (finite(s) && !s.alive[k]) continue;
      if (++nodes_ > budget_) throw BudgetHit{};
      State next = st;
      next[v].lo = next[v].hi = k;
      if (propagate(next) && search(idx + 1, next, out)) return true;
      if (k == std::numeric_limits<std::int64_t>::max()) break;
    }
    return false;
  }

  const Problem& p_;
  std::uint64_t budget_;
  std::map<std::string, int> index_;
  std::vector<std::string> strings_;
  std::vector<Compiled> compiled_;
  std::uint64_t nodes_ = 0;
};

}  // namespace detail

/// Backtracking search with propagation. Deterministic: the witness is the
/// lexicographically smallest solution in declaration order.
inline Outcome solve(const Problem& p, std::uint64_t budget = kNodeBudget) {
  return detail::Solver(p, budget).run();
}

/// Exhaustive enumeration; the reference the search is checked against.
inline Outcome oracle_solve(const Problem& p) {
  long double product = 1;
  for (const auto& v : p.vars) product *= static_cast<long double>(v.domain.size());
  if (product > kOracleBudget)
    throw Error("OracleBudgetExceeded", "search space exceeds " + std::to_string(kOracleBudget));
  Outcome out;
  std::vector<std::uint64_t> pos(p.vars.size(), 0);
  auto value_at = [&](std::size_t i) -> Value {
    const Domain& d = p.vars[i].domain;
    switch (d.kind) {
      case Domain::Kind::IntRange: return Value{d.lo + static_cast<std::int64_t>(pos[i])};
      case Domain::Kind::Bool: return Value{pos[i] != 0};
      case Domain::Kind::EnumSet: return Value{d.values[pos[i]]};
    }
    return Value{std::int64_t{0}};
  };
  while (true) {
    ++out.nodes;
    Witness w;
    for (std::size_t i = 0; i < p.vars.size(); ++i) w[p.vars[i].name] = value_at(i);
    auto env = witness_assignment(w);
    bool ok = true;
    for (const auto& c : p.constraints) {
      auto r = evaluate(c, env);
      if (!r) throw Error("UndeclaredVariable", "cannot evaluate " + to_sexpr(c));
      if (!*r) {
        ok = false;
        break;
      }
    }
    if (ok) {
      out.kind = Outcome::Kind::Sat;
      out.witness = std::move(w);
      return out;
    }
    // Odometer step; the last variable varies fastest.
    std::size_t i = p.vars.size();
    while (i > 0) {
      --i;
      if (++pos[i] < p.vars[i].domain.size()) break;
      pos[i] = 0;
      if (i == 0) return out;
    }
    if (p.vars.empty()) return out;
  }
}

//===----------------------------------------------------------------------===//
// SMT-LIB export
//===----------------------------------------------------------------------===//

namespace detail {

inline std::string smt_symbol(const std::string& s) {
  std::string out = "|";
  for (char c : s) out += (c == '|' || c == '\\') ? '_' : c;
  return out + "|";
}

inline std::string smt_int(std::int64_t v) {
  if (v >= 0) return std::to_string(v);
  return "(- " + std::to_string(static_cast<std::uint64_t>(-(v + 1)) + 1) + ")";
}

}  // namespace detail

/// QF_LIA rendering of a problem. Strings become integer codes (listed in a
/// comment); a string constant outside every domain gets a code no
/// variable can take.
inline std::string to_smtlib(const Problem& p) {
  std::vector<std::string> strs;
  for (const auto& v : p.vars)
    if (v.domain.kind == Domain::Kind::EnumSet) strs.insert(strs.end(), v.domain.values.begin(), v.domain.values.end());
  for (const auto& c : p.constraints) {
    if (c.lhs.kind == Term::Kind::StrConst) strs.push_back(c.lhs.text);
    if (c.rhs.kind == Term::Kind::StrConst) strs.push_back(c.rhs.text);
  }
  std::sort(strs.begin(), strs.end());
  strs.erase(std::unique(strs.begin(), strs.end()), strs.end());
  auto code = [&](const std::string& s) {
    return static_cast<std::int64_t>(std::lower_bound(strs.begin(), strs.end(), s) - strs.begin());
  };

  std::function<std::string(const Term&)> term = [&](const Term& t) -> std::string {
    switch (t.kind) {
      case Term::Kind::IntConst: return detail::smt_int(t.ival);
      case Term::Kind::StrConst: return std::to_string(code(t.text));
      case Term::Kind::BoolConst: return t.bval ? "true" : "false";
      case Term::Kind::Arith: return std::string("(") + t.op + " " + term(t.args[0]) + " " + term(t.args[1]) + ")";
      default: return detail::smt_symbol(t.symbol());
    }
  };

  std::ostringstream os;
  os << "(set-logic QF_LIA)\n";
  if (!strs.empty()) {
    os << ";";
    for (std::size_t i = 0; i < strs.size(); ++i) os << " " << i << "=" << quote(strs[i]);
    os << "\n";
  }
  for (const auto& v : p.vars) {
    std::string n = detail::smt_symbol(v.name);
    switch (v.domain.kind) {
      case Domain::Kind::Bool: os << "(declare-const " << n << " Bool)\n"; break;
      case Domain::Kind::IntRange:
        os << "(declare-const " << n << " Int)\n";
        os << "(assert (and (<= " << detail::smt_int(v.domain.lo) << " " << n << ") (<= " << n << " "
           << detail::smt_int(v.domain.hi) << ")))\n";
        break;
      case Domain::Kind::EnumSet:
        os << "(declare-const " << n << " Int)\n(assert (or";
        for (const auto& s : v.domain.values) os << " (= " << n << " " << code(s) << ")";
        os << "))\n";
        break;
    }
  }
  for (std::size_t i = 0; i < p.constraints.size(); ++i) {
    const auto& c = p.constraints[i];
    std::string l = term(c.lhs), r = term(c.rhs);
    os << "(assert ";
    if (c.op == CmpOp::Ne)
      os << "(not (= " << l << " " << r << "))";
    else
      os << "(" << (c.op == CmpOp::Eq ? "=" : op_symbol(c.op)) << " " << l << " " << r << ")";
    os << ")";
    if (i < p.provenance.size() && !p.provenance[i].empty()) os << " ; " << p.provenance[i];
    os << "\n";
  }
  os << "(check-sat)\n(get-model)\n";
  return os.str();
}

}  // namespace hg
