//===-- term.hpp - Symbolic terms and constraint literals -------*- C++ -*-===//
//
// Terms are small immutable trees shared by the symbolic executor, the rule
// model and the constraint solver. Every term has an s-expression spelling
// used by the rule file format.
//
//===----------------------------------------------------------------------===//
#pragma once

#include "hg/error.hpp"

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

namespace hg {

enum class Sort { Int, Str, Bool };

inline const char* sort_name(Sort s) {
  switch (s) {
    case Sort::Int: return "int";
    case Sort::Str: return "str";
    case Sort::Bool: return "bool";
  }
  return "?";
}

inline Sort parse_sort(std::string_view s) {
  if (s == "int") return Sort::Int;
  if (s == "str") return Sort::Str;
  if (s == "bool") return Sort::Bool;
  throw Error("SchemaViolation", "unknown sort '" + std::string(s) + "'");
}

/// A concrete value: integer, string or boolean.
using Value = std::variant<std::int64_t, std::string, bool>;

inline Sort sort_of(const Value& v) {
  if (std::holds_alternative<std::int64_t>(v)) return Sort::Int;
  if (std::holds_alternative<std::string>(v)) return Sort::Str;
  return Sort::Bool;
}

inline std::string value_text(const Value& v) {
  if (auto* i = std::get_if<std::int64_t>(&v)) return std::to_string(*i);
  if (auto* s = std::get_if<std::string>(&v)) return *s;
  return std::get<bool>(v) ? "true" : "false";
}

inline nlohmann::json value_json(const Value& v) {
  if (auto* i = std::get_if<std::int64_t>(&v)) return *i;
  if (auto* s = std::get_if<std::string>(&v)) return *s;
  return std::get<bool>(v);
}

struct Term {
  enum class Kind { IntConst, StrConst, BoolConst, Input, Attr, Event, Local, Arith };

  Kind kind = Kind::IntConst;
  Sort sort = Sort::Int;
  std::int64_t ival = 0;
  bool bval = false;
  std::string text;  // string constant, variable name, or device variable
  std::string attr;  // attribute name of an Attr term
  char op = 0;       // '+', '-' or '*' for Arith
  std::vector<Term> args;

  static Term integer(std::int64_t v) {
    Term t;
    t.ival = v;
    return t;
  }
  static Term string(std::string v) {
    Term t;
    t.kind = Kind::StrConst;
    t.sort = Sort::Str;
    t.text = std::move(v);
    return t;
  }
  static Term boolean(bool v) {
    Term t;
    t.kind = Kind::BoolConst;
    t.sort = Sort::Bool;
    t.bval = v;
    return t;
  }
  static Term constant(const Value& v) {
    if (auto* i = std::get_if<std::int64_t>(&v)) return integer(*i);
    if (auto* s = std::get_if<std::string>(&v)) return string(*s);
    return boolean(std::get<bool>(v));
  }
  static Term input(std::string name, Sort s) {
    Term t;
    t.kind = Kind::Input;
    t.sort = s;
    t.text = std::move(name);
    return t;
  }
  static Term attribute(std::string device, std::string attribute, Sort s) {
    Term t;
    t.kind = Kind::Attr;
    t.sort = s;
    t.text = std::move(device);
    t.attr = std::move(attribute);
    return t;
  }
  static Term event(Sort s) {
    Term t;
    t.kind = Kind::Event;
    t.sort = s;
    return t;
  }
  static Term local(std::string name, Sort s) {
    Term t;
    t.kind = Kind::Local;
    t.sort = s;
    t.text = std::move(name);
    return t;
  }
  // Folds constant operands; the caller guarantees both sides are Int.
  static Term arith(char op, Term lhs, Term rhs) {
    if (lhs.kind == Kind::IntConst && rhs.kind == Kind::IntConst) {
      switch (op) {
        case '+': return integer(lhs.ival + rhs.ival);
        case '-': return integer(lhs.ival - rhs.ival);
        case '*': return integer(lhs.ival * rhs.ival);
      }
    }
    if (op == '+' && lhs.kind == Kind::IntConst && lhs.ival == 0) return rhs;
    if ((op == '+' || op == '-') && rhs.kind == Kind::IntConst && rhs.ival == 0) return lhs;
    Term t;
    t.kind = Kind::Arith;
    t.sort = Sort::Int;
    t.op = op;
    t.args.push_back(std::move(lhs));
    t.args.push_back(std::move(rhs));
    return t;
  }

  bool is_const() const {
    return kind == Kind::IntConst || kind == Kind::StrConst || kind == Kind::BoolConst;
  }
  bool is_var() const {
    return kind == Kind::Input || kind == Kind::Attr || kind == Kind::Event ||
           kind == Kind::Local;
  }
  std::optional<Value> const_value() const {
    switch (kind) {
      case Kind::IntConst: return Value{ival};
      case Kind::StrConst: return Value{text};
      case Kind::BoolConst: return Value{bval};
      default: return std::nullopt;
    }
  }

  // Key used in symbol tables: locals and inputs by name, attributes as
  // "device.attribute", the event value as "evt".
  std::string symbol() const {
    switch (kind) {
      case Kind::Input:
      case Kind::Local: return text;
      case Kind::Attr: return text + "." + attr;
      case Kind::Event: return "evt";
      default: return {};
    }
  }

  friend bool operator==(const Term&, const Term&) = default;
};

enum class CmpOp { Eq, Ne, Lt, Le, Gt, Ge };

inline const char* op_symbol(CmpOp op) {
  switch (op) {
    case CmpOp::Eq: return "==";
    case CmpOp::Ne: return "!=";
    case CmpOp::Lt: return "<";
    case CmpOp::Le: return "<=";
    case CmpOp::Gt: return ">";
    case CmpOp::Ge: return ">=";
  }
  return "?";
}

inline std::optional<CmpOp> parse_op(std::string_view s) {
  if (s == "==") return CmpOp::Eq;
  if (s == "!=") return CmpOp::Ne;
  if (s == "<") return CmpOp::Lt;
  if (s == "<=") return CmpOp::Le;
  if (s == ">") return CmpOp::Gt;
  if (s == ">=") return CmpOp::Ge;
  return std::nullopt;
}

// Logical negation: !(a < b) is a >= b.
inline CmpOp negate(CmpOp op) {
  switch (op) {
    case CmpOp::Eq: return CmpOp::Ne;
    case CmpOp::Ne: return CmpOp::Eq;
    case CmpOp::Lt: return CmpOp::Ge;
    case CmpOp::Le: return CmpOp::Gt;
    case CmpOp::Gt: return CmpOp::Le;
    case CmpOp::Ge: return CmpOp::Lt;
  }
  return op;
}

// Operand swap: a < b is b > a.
inline CmpOp mirror(CmpOp op) {
  switch (op) {
    case CmpOp::Lt: return CmpOp::Gt;
    case CmpOp::Le: return CmpOp::Ge;
    case CmpOp::Gt: return CmpOp::Lt;
    case CmpOp::Ge: return CmpOp::Le;
    default: return op;
  }
}

/// A comparison literal. Negated literals are stored with the flipped
/// operator, so every stored literal is positive.
struct ConstraintLit {
  Term lhs;
  CmpOp op = CmpOp::Eq;
  Term rhs;

  ConstraintLit negated() const { return {lhs, negate(op), rhs}; }
  friend bool operator==(const ConstraintLit&, const ConstraintLit&) = default;
};

/// Assignment-style equality `target = source` recorded along a path.
struct DataConstraint {
  Term target;
  Term source;

  ConstraintLit as_literal() const { return {target, CmpOp::Eq, source}; }
  friend bool operator==(const DataConstraint&, const DataConstraint&) = default;
};

//===----------------------------------------------------------------------===//
// S-expressions
//===----------------------------------------------------------------------===//

inline std::string quote(std::string_view s) { return nlohmann::json(std::string(s)).dump(); }

inline std::string to_sexpr(const Term& t) {
  switch (t.kind) {
    case Term::Kind::IntConst: return std::to_string(t.ival);
    case Term::Kind::StrConst: return quote(t.text);
    case Term::Kind::BoolConst: return t.bval ? "true" : "false";
    case Term::Kind::Input: return "(input " + t.text + ")";
    case Term::Kind::Attr: return "(attr " + t.text + " " + t.attr + ")";
    case Term::Kind::Event: return "(event)";
    case Term::Kind::Local: return "(var " + t.text + ")";
    case Term::Kind::Arith:
      return std::string("(") + t.op + " " + to_sexpr(t.args[0]) + " " + to_sexpr(t.args[1]) + ")";
  }
  return {};
}

inline std::string to_sexpr(const ConstraintLit& l) {
  return std::string("(") + op_symbol(l.op) + " " + to_sexpr(l.lhs) + " " + to_sexpr(l.rhs) + ")";
}

inline std::string to_sexpr(const DataConstraint& d) {
  return "(= " + to_sexpr(d.target) + " " + to_sexpr(d.source) + ")";
}

/// Maps a symbol key (see Term::symbol) to its sort while reading terms back.
using SortLookup = std::function<std::optional<Sort>(const std::string& symbol)>;

namespace detail {

class SexprReader {
 public:
  SexprReader(std::string_view text, const SortLookup& sorts) : text_(text), sorts_(sorts) {}

  Term term() {
    skip();
    if (pos_ >= text_.size()) fail("unexpected end");
    char c = text_[pos_];
    if (c == '"') return Term::string(string_literal());
    if (c == '(') return compound();
    std::string a = atom();
    if (a == "true") return Term::boolean(true);
    if (a == "false") return Term::boolean(false);
    return Term::integer(integer(a));
  }

  ConstraintLit literal() {
    expect('(');
    std::string o = atom();
    auto op = parse_op(o);
    if (!op) fail("unknown comparison '" + o + "'");
    Term l = term();
    Term r = term();
    expect(')');
    return {std::move(l), *op, std::move(r)};
  }

  DataConstraint data() {
    expect('(');
    if (atom() != "=") fail("data constraint must start with '='");
    Term l = term();
    Term r = term();
    expect(')');
    return {std::move(l), std::move(r)};
  }

  void finish() {
    skip();
    if (pos_ != text_.size()) fail("trailing characters");
  }

 private:
  [[noreturn]] void fail(const std::string& why) const {
    throw Error("SchemaViolation", "bad s-expression '" + std::string(text_) + "': " + why);
  }

  void skip() {
    while (pos_ < text_.size() && text_[pos_] == ' ') ++pos_;
  }

  void expect(char c) {
    skip();
    if (pos_ >= text_.size() || text_[pos_] != c) fail(std::string("expected '") + c + "'");
    ++pos_;
  }

  std::string atom() {
    skip();
    std::size_t b = pos_;
    while (pos_ < text_.size() && text_[pos_] != ' ' && text_[pos_] != '(' &&
           text_[pos_] != ')' && text_[pos_] != '"')
      ++pos_;
    if (b == pos_) fail("expected atom");
    return std::string(text_.substr(b, pos_ - b));
  }

  std::string string_literal() {
    std::size_t b = pos_++;
    while (pos_ < text_.size() && text_[pos_] != '"') {
      if (text_[pos_] == '\\') ++pos_;
      ++pos_;
    }
    if (pos_ >= text_.size()) fail("unterminated string");
    ++pos_;
    try {
      return nlohmann::json::parse(text_.substr(b, pos_ - b)).get<std::string>();
    } catch (const nlohmann::json::exception&) {
      fail("bad string literal");
    }
  }

  std::int64_t integer(const std::string& a) {
    try {
      std::size_t used = 0;
      long long v = std::stoll(a, &used);
      if (used != a.size()) fail("bad integer '" + a + "'");
      return v;
    } catch (const std::logic_error&) {
      fail("bad integer '" + a + "'");
    }
  }

  Sort sort_for(const std::string& symbol) {
    auto s = sorts_ ? sorts_(symbol) : std::nullopt;
    if (!s) fail("no sort for symbol '" + symbol + "'");
    return *s;
  }

  Term compound() {
    expect('(');
    std::string head = atom();
    Term out;
    if (head == "input") {
      std::string n = atom();
      out = Term::input(n, sort_for(n));
    } else if (head == "var") {
      std::string n = atom();
      out = Term::local(n, sort_for(n));
    } else if (head == "attr") {
      std::string d = atom();
      std::string a = atom();
      out = Term::attribute(d, a, sort_for(d + "." + a));
    } else if (head == "event") {
      out = Term::event(sort_for("evt"));
    } else if (head == "+" || head == "-" || head == "*") {
      Term l = term();
      Term r = term();
      if (l.sort != Sort::Int || r.sort != Sort::Int) fail("arithmetic on non-integer terms");
      out.kind = Term::Kind::Arith;
      out.sort = Sort::Int;
      out.op = head[0];
      out.args = {std::move(l), std::move(r)};
    } else {
      fail("unknown head '" + head + "'");
    }
    expect(')');
    return out;
  }

  std::string_view text_;
  const SortLookup& sorts_;
  std::size_t pos_ = 0;
};

}  // namespace detail

inline Term parse_term_sexpr(std::string_view s, const SortLookup& sorts) {
  detail::SexprReader r(s, sorts);
  Term t = r.term();
  r.finish();
  return t;
}

inline ConstraintLit parse_literal_sexpr(std::string_view s, const SortLookup& sorts) {
  detail::SexprReader r(s, sorts);
  ConstraintLit l = r.literal();
  r.finish();
  return l;
}

inline DataConstraint parse_data_sexpr(std::string_view s, const SortLookup& sorts) {
  detail::SexprReader r(s, sorts);
  DataConstraint d = r.data();
  r.finish();
  return d;
}

//===----------------------------------------------------------------------===//
// Traversal helpers
//===----------------------------------------------------------------------===//

inline void collect_vars(const Term& t, std::vector<Term>& out) {
  if (t.is_var()) {
    for (const auto& v : out)
      if (v == t) return;
    out.push_back(t);
    return;
  }
  for (const auto& a : t.args) collect_vars(a, out);
}

inline void collect_vars(const ConstraintLit& l, std::vector<Term>& out) {
  collect_vars(l.lhs, out);
  collect_vars(l.rhs, out);
}

inline bool mentions(const Term& t, const std::function<bool(const Term&)>& pred) {
  if (pred(t)) return true;
  for (const auto& a : t.args)
    if (mentions(a, pred)) return true;
  return false;
}

inline bool mentions(const ConstraintLit& l, const std::function<bool(const Term&)>& pred) {
  return mentions(l.lhs, pred) || mentions(l.rhs, pred);
}

/// Rewrites every variable for which `f` returns a replacement.
inline Term substitute(const Term& t, const std::function<std::optional<Term>(const Term&)>& f) {
  if (t.is_var()) {
    if (auto r = f(t)) return *r;
    return t;
  }
  if (t.kind != Term::Kind::Arith) return t;
  return Term::arith(t.op, substitute(t.args[0], f), substitute(t.args[1], f));
}

inline ConstraintLit substitute(const ConstraintLit& l,
                                const std::function<std::optional<Term>(const Term&)>& f) {
  return {substitute(l.lhs, f), l.op, substitute(l.rhs, f)};
}

//===----------------------------------------------------------------------===//
// Concrete evaluation
//===----------------------------------------------------------------------===//

using Assignment = std::function<std::optional<Value>(const Term& var)>;

inline std::optional<Value> evaluate(const Term& t, const Assignment& env) {
  if (auto c = t.const_value()) return c;
  if (t.is_var()) return env(t);
  auto l = evaluate(t.args[0], env);
  auto r = evaluate(t.args[1], env);
  if (!l || !r) return std::nullopt;
  auto* a = std::get_if<std::int64_t>(&*l);
  auto* b = std::get_if<std::int64_t>(&*r);
  if (!a || !b) return std::nullopt;
  switch (t.op) {
    case '+': return Value{*a + *b};
    case '-': return Value{*a - *b};
    case '*': return Value{*a * *b};
  }
  return std::nullopt;
}

inline std::optional<bool> compare(const Value& a, CmpOp op, const Value& b) {
  if (a.index() != b.index()) return std::nullopt;
  switch (op) {
    case CmpOp::Eq: return a == b;
    case CmpOp::Ne: return a != b;
    default: break;
  }
  auto* x = std::get_if<std::int64_t>(&a);
  auto* y = std::get_if<std::int64_t>(&b);
  if (!x || !y) return std::nullopt;
  switch (op) {
    case CmpOp::Lt: return *x < *y;
    case CmpOp::Le: return *x <= *y;
    case CmpOp::Gt: return *x > *y;
    case CmpOp::Ge: return *x >= *y;
    default: return std::nullopt;
  }
}

inline std::optional<bool> evaluate(const ConstraintLit& l, const Assignment& env) {
  auto a = evaluate(l.lhs, env);
  auto b = evaluate(l.rhs, env);
  if (!a || !b) return std::nullopt;
  return compare(*a, l.op, *b);
}

//===----------------------------------------------------------------------===//
// Human-readable rendering
//===----------------------------------------------------------------------===//

inline std::string render(const Term& t, bool quote_strings = false) {
  switch (t.kind) {
    case Term::Kind::IntConst: return std::to_string(t.ival);
    case Term::Kind::StrConst: return quote_strings ? quote(t.text) : t.text;
    case Term::Kind::BoolConst: return t.bval ? "true" : "false";
    case Term::Kind::Input:
    case Term::Kind::Local: return t.text;
    case Term::Kind::Attr: return t.text + "." + t.attr;
    case Term::Kind::Event: return "evt.value";
    case Term::Kind::Arith: {
      auto side = [&](const Term& a) {
        std::string s = render(a, quote_strings);
        return a.kind == Term::Kind::Arith ? "(" + s + ")" : s;
      };
      return side(t.args[0]) + " " + t.op + " " + side(t.args[1]);
    }
  }
  return {};
}

inline std::string render(const ConstraintLit& l) {
  return render(l.lhs) + " " + op_symbol(l.op) + " " + render(l.rhs);
}

}  // namespace hg
