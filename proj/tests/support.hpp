// Fixture loading and a concrete HGL interpreter used as an oracle for
// extraction. The interpreter shares no code with the symbolic executor.
#pragma once

#include "hg/hg.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

namespace hgtest {

inline std::filesystem::path source_dir() { return HG_SOURCE_DIR; }
inline std::filesystem::path corpus(const std::string& rel) { return source_dir() / "corpus" / rel; }

inline std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + p.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline std::string trim(std::string s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.pop_back();
  return s;
}

inline hg::SourceUnit parse_ok(const std::string& src) {
  auto r = hg::parse(src);
  if (!r.ok()) {
    std::ostringstream os;
    for (const auto& d : r.diagnostics) os << d << "\n";
    throw std::runtime_error("parse failed:\n" + os.str() + src);
  }
  auto diags = hg::validate(*r.unit, hg::default_catalog());
  if (hg::has_errors(diags)) {
    std::ostringstream os;
    for (const auto& d : diags) os << d << "\n";
    throw std::runtime_error("validation failed:\n" + os.str() + src);
  }
  return *r.unit;
}

inline hg::RuleSet extract(const std::string& src) { return hg::extract_rules(parse_ok(src), hg::default_catalog()); }

/// Rules of corpus/<dir>/<app>.hgl bound with the matching .uri file.
inline hg::RuleSet fixture(const std::string& dir, const std::string& app) {
  auto rs = extract(read_file(corpus(dir + "/" + app + ".hgl")));
  auto cfg = hg::parse_config_uri(trim(read_file(corpus(dir + "/" + app + ".uri"))));
  return hg::bind_configuration(rs, cfg);
}

inline std::set<std::tuple<std::string, std::vector<std::string>>> kinds_of(const std::vector<hg::Finding>& fs) {
  std::set<std::tuple<std::string, std::vector<std::string>>> out;
  for (const auto& f : fs) out.insert({hg::kind_name(f.kind), f.rules});
  return out;
}

//===----------------------------------------------------------------------===//
// Concrete interpreter
//===----------------------------------------------------------------------===//

struct World {
  std::map<std::string, hg::Value> attrs;   // "device.attribute"
  std::map<std::string, hg::Value> inputs;  // also "state.<field>"
  std::optional<hg::Value> evt;
};

struct Fired {
  std::string subject;
  std::string command;
  std::vector<hg::Value> params;
  std::int64_t when = 0;
  std::int64_t period = 0;
  friend auto operator<=>(const Fired&, const Fired&) = default;
};

class Interpreter {
 public:
  Interpreter(const hg::SourceUnit& u, const hg::Catalog& cat, World w) : u_(u), cat_(cat), w_(std::move(w)) {}

  std::set<Fired> run(const std::string& fn) {
    call(fn, 0, 0);
    return out_;
  }

 private:
  using Locals = std::map<std::string, hg::Value>;

  void call(const std::string& fn, std::int64_t when, std::int64_t period) {
    if (++calls_ > 10'000) throw std::runtime_error("runaway interpretation");
    Locals locals;
    block(u_.function(fn)->body, locals, when, period);
  }

  void block(const std::vector<hg::Stmt>& body, Locals& l, std::int64_t when, std::int64_t period) {
    for (const auto& s : body) stmt(s, l, when, period);
  }

  void stmt(const hg::Stmt& s, Locals& l, std::int64_t when, std::int64_t period) {
    using K = hg::Stmt::Kind;
    switch (s.kind) {
      case K::Subscribe: return;
      case K::RunIn: return call(s.handler, when + as_int(eval(s.args[0], l)), period);
      case K::RunEvery: {
        std::int64_t d = as_int(eval(s.args[0], l));
        return call(s.handler, when, d != 0 ? d : period);
      }
      case K::Assign: l[s.name] = eval(s.args[0], l); return;
      case K::Command: {
        std::vector<hg::Value> ps;
        for (const auto& a : s.args) ps.push_back(eval(a, l));
        out_.insert({s.device, s.name, ps, when, period});
        return;
      }
      case K::ApiCall: {
        const auto* api = cat_.api(s.name);
        std::vector<hg::Value> ps;
        for (const auto& a : s.args) ps.push_back(eval(a, l));
        out_.insert({api->subject, api->command, ps, when, period});
        return;
      }
      case K::LocalCall: return call(s.name, when, period);
      case K::If:
        if (std::get<bool>(eval(s.args[0], l)))
          block(s.thenBody, l, when, period);
        else
          block(s.elseBody, l, when, period);
        return;
      case K::Switch: {
        hg::Value v = eval(s.args[0], l);
        for (const auto& c : s.cases)
          if (eval(c.label, l) == v) return block(c.body, l, when, period);
        if (s.defaultBody) block(*s.defaultBody, l, when, period);
        return;
      }
    }
  }

  static std::int64_t as_int(const hg::Value& v) { return std::get<std::int64_t>(v); }

  hg::Value eval(const hg::Expr& e, const Locals& l) const {
    using K = hg::Expr::Kind;
    switch (e.kind) {
      case K::Int: return e.ival;
      case K::Str: return e.text;
      case K::Bool: return e.bval;
      case K::EventValue: return w_.evt.value();
      case K::AttrRead: return w_.attrs.at(e.text + "." + e.attr);
      case K::StateRead: return w_.inputs.at("state." + e.text);
      case K::Var:
        if (auto it = l.find(e.text); it != l.end()) return it->second;
        return w_.inputs.at(e.text);
      case K::Unary:
        if (e.op == "!") return !std::get<bool>(eval(e.args[0], l));
        return -as_int(eval(e.args[0], l));
      case K::Binary: {
        if (e.op == "&&") return std::get<bool>(eval(e.args[0], l)) && std::get<bool>(eval(e.args[1], l));
        if (e.op == "||") return std::get<bool>(eval(e.args[0], l)) || std::get<bool>(eval(e.args[1], l));
        hg::Value a = eval(e.args[0], l), b = eval(e.args[1], l);
        if (e.op == "+") return as_int(a) + as_int(b);
        if (e.op == "-") return as_int(a) - as_int(b);
        if (e.op == "*") return as_int(a) * as_int(b);
        if (e.op == "==") return a == b;
        if (e.op == "!=") return a != b;
        if (e.op == "<") return as_int(a) < as_int(b);
        if (e.op == "<=") return as_int(a) <= as_int(b);
        if (e.op == ">") return as_int(a) > as_int(b);
        if (e.op == ">=") return as_int(a) >= as_int(b);
      }
    }
    throw std::runtime_error("cannot evaluate expression");
  }

  const hg::SourceUnit& u_;
  const hg::Catalog& cat_;
  World w_;
  std::set<Fired> out_;
  int calls_ = 0;
};

/// Actions of the rules in `rs` that fire in `w` when `device.attr` changes.
/// Lifecycle and timer rules are ignored.
inline std::set<Fired> fire_rules(const hg::RuleSet& rs, const std::string& device, const std::string& attr,
                                  const World& w) {
  std::set<Fired> out;
  for (const auto& r : rs.rules) {
    if (r.trigger.subject != device || r.trigger.attribute != attr) continue;
    std::vector<hg::DataConstraint> data = r.condition.data;
    data.insert(data.end(), r.action.data.begin(), r.action.data.end());
    std::function<std::optional<hg::Value>(const hg::Term&)> env = [&](const hg::Term& t) -> std::optional<hg::Value> {
      switch (t.kind) {
        case hg::Term::Kind::Attr: {
          auto it = w.attrs.find(t.symbol());
          return it == w.attrs.end() ? std::nullopt : std::optional<hg::Value>(it->second);
        }
        case hg::Term::Kind::Input: {
          auto it = w.inputs.find(t.text);
          return it == w.inputs.end() ? std::nullopt : std::optional<hg::Value>(it->second);
        }
        case hg::Term::Kind::Event: return w.evt;
        case hg::Term::Kind::Local:
          for (const auto& d : data)
            if (d.target == t) return hg::evaluate(d.source, env);
          return std::nullopt;
        default: return std::nullopt;
      }
    };
    bool fires = true;
    for (const auto* lits : {&r.trigger.constraint, &r.condition.predicates})
      for (const auto& lit : *lits) fires = fires && hg::evaluate(lit, env).value_or(false);
    if (!fires) continue;
    Fired f{r.action.subject, r.action.command, {}, 0, 0};
    for (const auto& p : r.action.params) f.params.push_back(hg::evaluate(p, env).value());
    f.when = std::get<std::int64_t>(hg::evaluate(r.action.when, env).value());
    f.period = std::get<std::int64_t>(hg::evaluate(r.action.period, env).value());
    out.insert(f);
  }
  return out;
}

//===----------------------------------------------------------------------===//
// Random programs
//===----------------------------------------------------------------------===//

// Random well-typed handlers over a fixed set of devices and inputs.
class ProgramGen {
 public:
  explicit ProgramGen(std::uint32_t seed) : rng_(seed) {}

  std::string program(bool intTrigger) {
    intTrigger_ = intTrigger;
    ints_.clear();
    bools_.clear();
    std::string out = "app \"Random\"\n"
                      "input sw1: device.switch\ninput sw2: device.switch\ninput temp: device.temperatureMeasurement\n"
                      "input lvl: device.switchLevel\ninput n1: number\ninput s1: string\ninput b1: bool\n"
                      "input e1: enum(\"a\", \"b\", \"c\")\n";
    out += intTrigger ? "def installed() { subscribe(temp, \"temperature\", h) }\n"
                      : "def installed() { subscribe(sw1, \"switch\", h) }\n";
    // Helpers see neither the event nor the handler's locals.
    allowEvt_ = false;
    out += "def helper() {\n" + block(2, false) + "}\n";
    out += "def later() {\n" + block(2, false) + "}\n";
    allowEvt_ = true;
    out += "def h(evt) {\n";
    // Top-level locals are visible to everything after them.
    for (int i = 0, n = pick(3); i < n; ++i) {
      if (pick(2)) {
        std::string name = "i" + std::to_string(ints_.size());
        out += "  " + name + " = " + int_expr(2) + "\n";
        ints_.push_back(name);
      } else {
        std::string name = "f" + std::to_string(bools_.size());
        out += "  " + name + " = " + cond(2) + "\n";
        bools_.push_back(name);
      }
    }
    out += block(3, true) + "}\n";
    return out;
  }

  World world() {
    World w;
    w.attrs["sw1.switch"] = std::string(pick(2) ? "on" : "off");
    w.attrs["sw2.switch"] = std::string(pick(2) ? "on" : "off");
    w.attrs["temp.temperature"] = std::int64_t(pick(12) - 2);
    w.attrs["lvl.level"] = std::int64_t(pick(5) * 25);
    w.attrs["location.mode"] = std::string(kModes[pick(3)]);
    w.inputs["n1"] = std::int64_t(pick(10));
    w.inputs["s1"] = std::string(kModes[pick(3)]);
    w.inputs["b1"] = pick(2) == 1;
    w.inputs["e1"] = std::string(1, "abc"[pick(3)]);
    w.evt = intTrigger_ ? w.attrs["temp.temperature"] : w.attrs["sw1.switch"];
    return w;
  }

 private:
  static constexpr const char* kModes[] = {"home", "away", "night"};

  int pick(int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng_); }

  std::string int_atom() {
    switch (pick(ints_.empty() ? 4 : 5)) {
      case 0: return std::to_string(pick(10));
      case 1: return "temp.current(\"temperature\")";
      case 2: return "n1";
      case 3: return intTrigger_ && allowEvt_ ? "evt.value" : "lvl.current(\"level\")";
      default: return ints_[pick(static_cast<int>(ints_.size()))];
    }
  }

  std::string int_expr(int depth) {
    if (depth == 0 || pick(3)) return int_atom();
    static const char* ops[] = {"+", "-", "*"};
    return "(" + int_expr(depth - 1) + " " + ops[pick(3)] + " " + int_atom() + ")";
  }

  std::string str_cond() {
    switch (pick(4)) {
      case 0: return std::string("sw2.current(\"switch\") ") + (pick(2) ? "==" : "!=") + " \"on\"";
      case 1: return std::string("location.current(\"mode\") == ") + (pick(2) ? "s1" : "\"home\"");
      case 2: return std::string("e1 ") + (pick(2) ? "==" : "!=") + " \"" + "abc"[pick(3)] + "\"";
      default:
        if (intTrigger_ || !allowEvt_) return "sw1.current(\"switch\") == \"on\"";
        return std::string("evt.value == \"") + (pick(2) ? "on" : "off") + "\"";
    }
  }

  std::string cond(int depth) {
    int k = pick(depth == 0 ? 4 : 7);
    static const char* cmps[] = {"<", "<=", ">", ">=", "==", "!="};
    switch (k) {
      case 0: return int_expr(1) + " " + cmps[pick(6)] + " " + int_atom();
      case 1: return str_cond();
      case 2: return pick(2) ? "b1" : "!b1";
      case 3:
        if (!bools_.empty()) return bools_[pick(static_cast<int>(bools_.size()))];
        return int_atom() + " > " + std::to_string(pick(10));
      case 4: return "(" + cond(depth - 1) + " && " + cond(depth - 1) + ")";
      case 5: return "(" + cond(depth - 1) + " || " + cond(depth - 1) + ")";
      default: return "!(" + cond(depth - 1) + ")";
    }
  }

  std::string stmt(int depth, bool inHandler) {
    std::string ind(static_cast<std::size_t>(2 * (4 - depth)), ' ');
    int k = pick(depth == 0 ? 3 : 6);
    switch (k) {
      case 0: return ind + (pick(2) ? "sw2.on()" : "sw2.off()") + "\n";
      case 1: return ind + "lvl.setLevel(" + int_expr(1) + ")\n";
      case 2:
        if (pick(2)) return ind + "setLocationMode(" + (pick(2) ? std::string("s1") : "\"away\"") + ")\n";
        return ind + "sendSms(\"555\", " + (pick(2) ? std::string("s1") : "\"hi\"") + ")\n";
      case 3: {
        std::string s = ind + "if (" + cond(2) + ") {\n" + block(depth - 1, inHandler) + ind + "}";
        if (pick(2)) s += " else {\n" + block(depth - 1, inHandler) + ind + "}";
        return s + "\n";
      }
      case 4: {
        std::string s = ind + "switch (e1) {\n";
        std::vector<std::string> labels = {"a", "b", "c"};
        std::shuffle(labels.begin(), labels.end(), rng_);
        for (int i = 0, n = 1 + pick(2); i < n; ++i) s += ind + "  case \"" + labels[i] + "\": {\n" + block(depth - 1, inHandler) + ind + "  }\n";
        if (pick(2)) s += ind + "  default: {\n" + block(depth - 1, inHandler) + ind + "  }\n";
        return s + ind + "}\n";
      }
      default:
        if (!inHandler) return ind + "sw2.off()\n";
        switch (pick(3)) {
          case 0: return ind + "helper()\n";
          case 1: return ind + "runIn(" + (pick(2) ? std::to_string(10 * pick(5)) : "n1") + ", later)\n";
          default: return ind + "runEvery(" + std::to_string(60 * (1 + pick(3))) + ", later)\n";
        }
    }
  }

  std::string block(int depth, bool inHandler) {
    std::string out;
    for (int i = 0, n = 1 + pick(2); i < n; ++i) out += stmt(depth, inHandler);
    return out;
  }

  std::mt19937 rng_;
  bool intTrigger_ = false;
  bool allowEvt_ = true;
  std::vector<std::string> ints_, bools_;
};

}  // namespace hgtest
