#include "support.hpp"

#include <random>

using namespace hg;

namespace {

class TermGen {
 public:
  explicit TermGen(std::uint32_t seed) : rng_(seed) {}

  Term term(Sort s, int depth) {
    if (s == Sort::Int && depth > 0 && pick(3) == 0) {
      static const char ops[] = {'+', '-', '*'};
      return Term::arith(ops[pick(3)], term(Sort::Int, depth - 1), term(Sort::Int, depth - 1));
    }
    switch (pick(5)) {
      case 0: return Term::input(name_for(s) + std::to_string(pick(3)), s);
      case 1: return Term::attribute("dev" + std::to_string(pick(3)), attr_for(s), s);
      case 2: return Term::local(name_for(s), s);
      case 3: return Term::event(s);
      default:
        if (s == Sort::Int) return Term::integer(pick(2001) - 1000);
        if (s == Sort::Bool) return Term::boolean(pick(2));
        return Term::string(kStrings[pick(4)]);
    }
  }

  ConstraintLit literal() {
    Sort s = static_cast<Sort>(pick(3));
    CmpOp op = s == Sort::Int ? static_cast<CmpOp>(pick(6)) : static_cast<CmpOp>(pick(2));
    return {term(s, 2), op, term(s, 2)};
  }

  int pick(int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng_); }

 private:
  static constexpr const char* kStrings[] = {"on", "I am \"home\"", "", "a b\\c"};

  // Symbols carry one sort each, so the reader can recover it.
  static std::string attr_for(Sort s) { return s == Sort::Int ? "level" : s == Sort::Bool ? "flag" : "switch"; }
  static std::string name_for(Sort s) { return s == Sort::Int ? "n" : s == Sort::Bool ? "b" : "s"; }

  std::mt19937 rng_;
};

std::optional<Sort> sort_lookup(const std::string& sym) {
  if (sym == "evt") return std::nullopt;
  auto ends = [&](std::string_view suf) { return sym.size() >= suf.size() && sym.ends_with(suf); };
  bool dotted = sym.find('.') != std::string::npos;
  if (dotted ? ends("level") : sym[0] == 'n') return Sort::Int;
  if (dotted ? ends("flag") : sym[0] == 'b') return Sort::Bool;
  if (dotted ? ends("switch") : sym[0] == 's') return Sort::Str;
  return std::nullopt;
}

}  // namespace

TEST(Term, SexprRoundTrip) {
  TermGen gen(7);
  for (int i = 0; i < 2000; ++i) {
    ConstraintLit l = gen.literal();
    // The event's sort is not recoverable from its symbol; pin it via the other side.
    SortLookup lookup = [&](const std::string& sym) -> std::optional<Sort> {
      if (sym == "evt") return l.lhs.sort;
      return sort_lookup(sym);
    };
    std::string text = to_sexpr(l);
    EXPECT_EQ(parse_literal_sexpr(text, lookup), l) << text;
  }
}

TEST(Term, SexprRejectsGarbage) {
  SortLookup none = [](const std::string&) { return std::optional<Sort>(Sort::Int); };
  for (std::string bad : {"", "(", "(== 1)", "(== 1 2", "(~ 1 2)", "(== (attr d) 1)", "(== 1 2) x", "(== \"a 1)"}) {
    try {
      parse_literal_sexpr(bad, none);
      ADD_FAILURE() << "accepted " << bad;
    } catch (const Error&) {
    }
  }
}

TEST(Term, NegateIsAnInvolutionAndFlipsTruth) {
  TermGen gen(11);
  for (int i = 0; i < 500; ++i) {
    std::int64_t a = gen.pick(21) - 10, b = gen.pick(21) - 10;
    for (int k = 0; k < 6; ++k) {
      auto op = static_cast<CmpOp>(k);
      EXPECT_EQ(negate(negate(op)), op);
      EXPECT_EQ(*compare(Value{a}, negate(op), Value{b}), !*compare(Value{a}, op, Value{b}));
      EXPECT_EQ(*compare(Value{a}, mirror(op), Value{b}), *compare(Value{b}, op, Value{a}));
    }
  }
}

TEST(Term, ArithFoldsConstants) {
  Term x = Term::local("x", Sort::Int);
  EXPECT_EQ(Term::arith('+', Term::integer(2), Term::integer(3)), Term::integer(5));
  EXPECT_EQ(Term::arith('*', Term::integer(4), Term::integer(-3)), Term::integer(-12));
  EXPECT_EQ(Term::arith('+', Term::integer(0), x), x);
  EXPECT_EQ(Term::arith('-', x, Term::integer(0)), x);
  EXPECT_EQ(Term::arith('-', Term::integer(0), x).kind, Term::Kind::Arith);
}

TEST(Term, EvaluateAndRender) {
  Term t = Term::arith('+', Term::attribute("tSensor", "temperature", Sort::Int), Term::input("offset", Sort::Int));
  Assignment env = [](const Term& v) -> std::optional<Value> {
    if (v.symbol() == "tSensor.temperature") return Value{std::int64_t{28}};
    if (v.symbol() == "offset") return Value{std::int64_t{3}};
    return std::nullopt;
  };
  EXPECT_EQ(evaluate(t, env), Value{std::int64_t{31}});
  ConstraintLit l{t, CmpOp::Gt, Term::integer(30)};
  EXPECT_EQ(evaluate(l, env), true);
  EXPECT_EQ(render(l), "tSensor.temperature + offset > 30");
  EXPECT_EQ(evaluate(Term::local("unknown", Sort::Int), env), std::nullopt);
}

TEST(Term, CompareAcrossSortsIsUndefined) {
  EXPECT_EQ(compare(Value{std::int64_t{1}}, CmpOp::Eq, Value{std::string("1")}), std::nullopt);
  EXPECT_EQ(compare(Value{std::string("a")}, CmpOp::Lt, Value{std::string("b")}), std::nullopt);
}
