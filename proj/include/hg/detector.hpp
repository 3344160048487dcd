//===-- detector.hpp - Cross-app interference detection ---------*- C++ -*-===//
//
// Pairwise checks over bound rules:
//   AR  same actuator, contradictory commands, same trigger, jointly satisfiable
//   GC  different actuators pushing a goal feature in opposite directions
//   CT  r1's action fires r2's trigger (device attribute or sensed feature)
//   SD  CT whose two actions contradict; LT  CT both ways plus contradiction
//   EC  r1's action can make r2's condition hold; DC  it makes it fail
// plus CHAIN findings over CT / EC edges, including ones the user kept.
//
// A CT or EC / DC problem keeps r1's trigger and condition on the pre side
// and r2's on the post side; only variables r1's action changes differ
// between the two.
//
//===----------------------------------------------------------------------===//
#pragma once

#include "hg/catalog.hpp"
#include "hg/merge.hpp"
#include "hg/rules.hpp"
#include "hg/solver.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace hg {

enum class FindingKind { AR, GC, CT, SD, LT, EC, DC, CHAIN, Indeterminate };

inline const char* kind_name(FindingKind k) {
  switch (k) {
    case FindingKind::AR: return "AR";
    case FindingKind::GC: return "GC";
    case FindingKind::CT: return "CT";
    case FindingKind::SD: return "SD";
    case FindingKind::LT: return "LT";
    case FindingKind::EC: return "EC";
    case FindingKind::DC: return "DC";
    case FindingKind::CHAIN: return "CHAIN";
    case FindingKind::Indeterminate: return "Indeterminate";
  }
  return "?";
}

inline FindingKind parse_kind(std::string_view s) {
  for (auto k : {FindingKind::AR, FindingKind::GC, FindingKind::CT, FindingKind::SD, FindingKind::LT, FindingKind::EC,
                 FindingKind::DC, FindingKind::CHAIN, FindingKind::Indeterminate})
    if (s == kind_name(k)) return k;
  throw Error("SchemaViolation", "unknown finding kind '" + std::string(s) + "'");
}

/// Kinds whose two rules play the same role.
inline bool symmetric_kind(FindingKind k) {
  return k == FindingKind::AR || k == FindingKind::GC || k == FindingKind::LT || k == FindingKind::Indeterminate;
}

struct Finding {
  FindingKind kind = FindingKind::AR;
  std::vector<std::string> rules;  // directed kinds: [from, to]; symmetric: sorted
  std::vector<std::string> apps;   // app of each rule
  std::optional<Witness> witness;
  std::string channel;
  std::string explanation;
  std::string covertRule;  // CHAIN only

  bool directed() const { return !symmetric_kind(kind) && kind != FindingKind::CHAIN; }
  friend bool operator==(const Finding&, const Finding&) = default;
};

struct DetectOptions {
  MergeOptions merge;
  std::uint64_t budget = kNodeBudget;
  std::size_t maxChainLen = 4;
  // Called with a descriptive name for every problem handed to the solver.
  std::function<void(const std::string&, const Problem&)> onProblem;
};

inline constexpr std::size_t kChainBudget = 10'000;

/// Device-indexed and goal-indexed views of a rule set.
struct PairIndex {
  struct ActionRef {
    std::string rule;
    std::string command;
    std::vector<Term> params;
  };
  std::map<std::string, std::vector<ActionRef>> byDevice;
  std::map<std::string, std::vector<std::pair<std::string, GoalSign>>> byGoalFeature;

  static PairIndex build(const std::vector<const Rule*>& rules, const Catalog& cat);
};

namespace detail {

inline std::string device_key(const Rule& r, const std::string& var) {
  std::string id = r.device_id(var);
  return id.empty() ? r.app + ":" + var : id;
}

inline std::vector<Term> resolved_params(const Rule& r) {
  std::vector<Term> out;
  for (const auto& p : r.action.params) out.push_back(resolve_term(r, p));
  return out;
}

inline bool skipped(const Rule& r) { return r.has_flag(kFlagOnUninstall) || r.has_flag(kFlagUnsatisfiable); }

inline bool event_triggered(const Rule& r) {
  return r.trigger.subject != kLifecycleSubject && r.trigger.subject != kTimerSubject;
}

/// Same actuator and contradictory commands.
inline bool ar_candidate(const Rule& a, const Rule& b, const Catalog& cat) {
  if (device_key(a, a.action.subject) != device_key(b, b.action.subject)) return false;
  if (a.action.capability != b.action.capability) return false;
  auto pa = resolved_params(a);
  auto pb = resolved_params(b);
  return contradicts(cat, a.action.capability, a.action.command, pa, b.action.command, pb);
}

inline std::string witness_text(const Witness& w) {
  std::string out;
  for (const auto& [k, v] : w) {
    if (!out.empty()) out += ", ";
    out += k + " = " + value_text(v);
  }
  return out;
}

class PairDetector {
 public:
  PairDetector(const Rule& a, const Rule& b, const Catalog& cat, const DetectOptions& opts)
      : a_(a), b_(b), cat_(cat), opts_(opts) {}

  std::vector<Finding> run() {
    if (skipped(a_) || skipped(b_) || a_.id == b_.id) return {};
    const Rule& lo = a_.id < b_.id ? a_ : b_;
    const Rule& hi = a_.id < b_.id ? b_ : a_;
    action_interference(lo, hi);
    auto ct12 = covert_trigger(lo, hi);
    auto ct21 = covert_trigger(hi, lo);
    bool arc = ar_candidate(lo, hi, cat_);
    if (ct12 && arc) sd(lo, hi, *ct12);
    if (ct21 && arc) sd(hi, lo, *ct21);
    if (ct12 && ct21 && arc) {
      Finding f = make(FindingKind::LT, lo, hi);
      f.witness = ct12->witness;
      f.channel = ct12->channel;
      f.explanation = "each rule's action triggers the other while their commands contradict, so the actuator can toggle without end";
      out_.push_back(std::move(f));
    }
    condition_interference(lo, hi);
    condition_interference(hi, lo);
    std::stable_sort(out_.begin(), out_.end(), [](const Finding& x, const Finding& y) {
      if (x.kind != y.kind) return x.kind < y.kind;
      return x.rules < y.rules;
    });
    return std::move(out_);
  }

 private:
  Finding make(FindingKind k, const Rule& from, const Rule& to) const {
    Finding f;
    f.kind = k;
    f.rules = {from.id, to.id};
    f.apps = {from.app, to.app};
    if (symmetric_kind(k) && f.rules[0] > f.rules[1]) {
      std::swap(f.rules[0], f.rules[1]);
      std::swap(f.apps[0], f.apps[1]);
    }
    return f;
  }

  Outcome check(const std::string& name, const Problem& p) {
    if (opts_.onProblem) opts_.onProblem(name, p);
    try {
      return solve(p, opts_.budget);
    } catch (const Error& e) {
      if (e.code() != "NonLinear") throw;
      nonlinear_ = true;
      return Outcome{Outcome::Kind::BudgetExceeded, {}};
    }
  }

  void indeterminate(const Rule& x, const Rule& y, const std::string& what) {
    Finding f = make(FindingKind::Indeterminate, x, y);
    f.explanation = (nonlinear_ ? "nonlinear arithmetic while checking " : "solver budget exhausted while checking ") + what;
    for (const auto& g : out_)
      if (g == f) return;
    out_.push_back(std::move(f));
  }

  // AR and GC.
  void action_interference(const Rule& x, const Rule& y) {
    bool ar = ar_candidate(x, y, cat_) && event_triggered(x) && event_triggered(y) &&
              device_key(x, x.trigger.subject) == device_key(y, y.trigger.subject) &&
              x.trigger.attribute == y.trigger.attribute;
    std::vector<std::string> goals;
    if (device_key(x, x.action.subject) != device_key(y, y.action.subject)) {
      auto gx = goal_effect(cat_, x.action.capability, x.action.command);
      auto gy = goal_effect(cat_, y.action.capability, y.action.command);
      for (const auto& [feature, sx] : gx) {
        GoalSign sy = gy[feature];
        if (sx != GoalSign::None && sy != GoalSign::None && sx != sy) goals.push_back(feature);
      }
    }
    if (!ar && goals.empty()) return;
    ProblemBuilder pb(cat_, opts_.merge);
    pb.add_trigger(x, Side::Pre);
    pb.add_condition(x, Side::Pre);
    pb.add_trigger(y, Side::Pre);
    pb.add_condition(y, Side::Pre);
    Outcome o = check(x.id + "-" + y.id + ".overlap", pb.build());
    if (o.kind == Outcome::Kind::BudgetExceeded) return indeterminate(x, y, "overlapping conditions");
    if (!o.sat()) return;
    if (ar) {
      Finding f = make(FindingKind::AR, x, y);
      f.witness = o.witness;
      f.channel = "dev:" + device_key(x, x.action.subject);
      f.explanation = "both rules fire on " + x.trigger.subject + "." + x.trigger.attribute + " and issue " +
                      x.action.command + " / " + y.action.command + " to the same device; e.g. " + witness_text(o.witness);
      out_.push_back(std::move(f));
    }
    for (const auto& g : goals) {
      Finding f = make(FindingKind::GC, x, y);
      f.witness = o.witness;
      f.channel = "feature:" + g;
      f.explanation = "'" + x.action.subject + "." + x.action.command + "' and '" + y.action.subject + "." +
                      y.action.command + "' push " + g + " in opposite directions";
      out_.push_back(std::move(f));
    }
  }

  struct CtResult {
    Witness witness;
    std::string channel;
  };

  std::optional<CtResult> covert_trigger(const Rule& x, const Rule& y) {
    if (!event_triggered(y)) return std::nullopt;
    const auto& spec = cat_.command(x.action.capability, x.action.command);
    auto params = x.action.params;
    bool budget = false;
    auto attempt = [&](const std::string& channel, const std::function<void(ProblemBuilder&, const std::string&)>& effect)
        -> std::optional<CtResult> {
      ProblemBuilder pb(cat_, opts_.merge);
      pb.add_trigger(x, Side::Pre);
      pb.add_condition(x, Side::Pre);
      pb.add_action_data(x, Side::Pre);
      std::string base = pb.attr_name(y, y.trigger.subject, y.trigger.attribute);
      pb.affect(base);
      effect(pb, base);
      pb.add_trigger(y, Side::Post);
      pb.add_condition(y, Side::Post);
      Outcome o = check(x.id + "-" + y.id + ".trigger", pb.build());
      if (o.kind == Outcome::Kind::BudgetExceeded) budget = true;
      if (!o.sat()) return std::nullopt;
      return CtResult{o.witness, channel};
    };

    std::optional<CtResult> found;
    // Channel 1: the command sets the very attribute r2 subscribes to.
    if (spec.selfEffect && spec.selfEffect->attribute == y.trigger.attribute &&
        device_key(x, x.action.subject) == device_key(y, y.trigger.subject)) {
      std::optional<Term> value;
      if (spec.selfEffect->value) value = Term::constant(*spec.selfEffect->value);
      int idx = spec.param_index(spec.selfEffect->param);
      if (!value && idx >= 0 && static_cast<std::size_t>(idx) < params.size()) value = params[idx];
      found = attempt("dev:" + device_key(y, y.trigger.subject) + "." + y.trigger.attribute,
                      [&](ProblemBuilder& pb, const std::string& base) {
                        if (!value) return;
                        Term post = Term::local(pb.at(base, Side::Post), value->sort);
                        pb.add_raw({post, CmpOp::Eq, pb.rename(x, *value, Side::Pre)}, x.id);
                      });
    }
    // Channel 2: the command moves a feature r2's trigger senses.
    std::string feature = attribute_feature(cat_, y.trigger.capability, y.trigger.attribute);
    if (!found && !feature.empty()) {
      for (const auto& eff : channel_effects(cat_, x.action.capability, x.action.command, params)) {
        if (eff.feature != feature || !direction_compatible(y, eff)) continue;
        found = attempt("feature:" + feature, [&](ProblemBuilder& pb, const std::string& base) {
          Term post = Term::local(pb.at(base, Side::Post), Sort::Int);
          if (eff.setpoint) {
            pb.add_raw({post, CmpOp::Eq, pb.rename(x, *eff.setpoint, Side::Pre)}, x.id);
          } else {
            Term pre = Term::local(base, Sort::Int);
            pb.add_raw({post, eff.direction == Direction::Up ? CmpOp::Gt : CmpOp::Lt, pre}, x.id);
          }
        });
        if (found) break;
      }
    }
    if (found) {
      Finding f = make(FindingKind::CT, x, y);
      f.witness = found->witness;
      f.channel = found->channel;
      f.explanation = "'" + x.action.subject + "." + x.action.command + "' fires the trigger of the second rule (" +
                      y.trigger.subject + "." + y.trigger.attribute + ")";
      out_.push_back(std::move(f));
    } else if (budget) {
      indeterminate(x, y, "covert triggering");
    }
    return found;
  }

  // Sign-only reading of how a directional effect meets r2's trigger.
  static bool direction_compatible(const Rule& y, const ChannelEffect& eff) {
    if (y.trigger.any_change()) return true;
    bool compatible = false;
    for (auto l : y.trigger.constraint) {
      auto self = [&](const Term& t) {
        return t.kind == Term::Kind::Attr && t.text == y.trigger.subject && t.attr == y.trigger.attribute;
      };
      if (self(l.rhs) && !self(l.lhs)) l = {l.rhs, mirror(l.op), l.lhs};
      if (!self(l.lhs)) continue;
      switch (l.op) {
        case CmpOp::Eq:
          if (!eff.setpoint) return false;
          compatible = true;
          break;
        case CmpOp::Ne: compatible = true; break;
        case CmpOp::Gt:
        case CmpOp::Ge: compatible = compatible || eff.direction == Direction::Up || eff.setpoint.has_value(); break;
        case CmpOp::Lt:
        case CmpOp::Le: compatible = compatible || eff.direction == Direction::Down || eff.setpoint.has_value(); break;
      }
    }
    return compatible;
  }

  void sd(const Rule& x, const Rule& y, const CtResult& ct) {
    Finding f = make(FindingKind::SD, x, y);
    f.witness = ct.witness;
    f.channel = ct.channel;
    f.explanation = "the first rule triggers the second, whose '" + y.action.command + "' undoes '" +
                    x.action.command + "' on the same device";
    out_.push_back(std::move(f));
  }

  struct Effect {
    std::string base;  // variable changed
    std::optional<ConstraintLit> constraint;
    bool qualitative = false;
  };

  // EC / DC: r1's action changes something r2's condition reads.
  void condition_interference(const Rule& x, const Rule& y) {
    ProblemBuilder pb(cat_, opts_.merge);
    const auto& spec = cat_.command(x.action.capability, x.action.command);
    std::string triggerVar = event_triggered(y) ? pb.attr_name(y, y.trigger.subject, y.trigger.attribute) : "";

    std::set<std::string> condVars;
    auto collect = [&](const Term& t) {
      std::vector<Term> vars;
      collect_vars(t, vars);
      for (const auto& v : vars) {
        if (v.kind != Term::Kind::Attr || v.text == y.action.subject) continue;
        std::string n = pb.attr_name(y, v.text, v.attr);
        if (n != triggerVar) condVars.insert(n);
      }
    };
    for (const auto& l : y.condition.predicates) {
      collect(l.lhs);
      collect(l.rhs);
    }
    for (const auto& d : y.condition.data) collect(d.source);

    std::vector<Effect> effects;
    if (spec.selfEffect) {
      std::string base = pb.attr_name(x, x.action.subject, spec.selfEffect->attribute);
      if (condVars.count(base)) {
        std::optional<Term> value;
        if (spec.selfEffect->value) value = Term::constant(*spec.selfEffect->value);
        int idx = spec.param_index(spec.selfEffect->param);
        if (!value && idx >= 0 && static_cast<std::size_t>(idx) < x.action.params.size())
          value = x.action.params[idx];
        Effect e{base, std::nullopt, false};
        if (value) e.constraint = ConstraintLit{Term::local(base + "'", value->sort), CmpOp::Eq, pb.rename(x, *value, Side::Pre)};
        effects.push_back(std::move(e));
      }
    }
    for (const auto& ch : channel_effects(cat_, x.action.capability, x.action.command, x.action.params)) {
      const auto* fs = cat_.feature(ch.feature);
      if (!fs || !fs->numeric()) continue;
      std::string base = opts_.merge.unifyEnvironment ? pb.feature_name(ch.feature) : "";
      if (base.empty() || !condVars.count(base)) continue;
      Term post = Term::local(base + "'", Sort::Int);
      Effect e{base, std::nullopt, false};
      if (ch.setpoint) {
        e.constraint = ConstraintLit{post, ch.direction == Direction::Up ? CmpOp::Ge : CmpOp::Le, pb.rename(x, *ch.setpoint, Side::Pre)};
      } else {
        e.constraint = ConstraintLit{post, CmpOp::Eq, Term::integer(ch.direction == Direction::Up ? fs->hi : fs->lo)};
        e.qualitative = true;
      }
      effects.push_back(std::move(e));
    }
    if (effects.empty()) return;

    pb.add_trigger(x, Side::Pre);
    pb.add_condition(x, Side::Pre);
    pb.add_action_data(x, Side::Pre);
    bool qualitative = false;
    std::string channel;
    for (const auto& e : effects) {
      pb.affect(e.base);
      pb.at(e.base, Side::Post);
      if (e.constraint) pb.add_raw(*e.constraint, x.id);
      qualitative = qualitative || e.qualitative;
      channel += (channel.empty() ? "" : ",") + (e.base.rfind("env.", 0) == 0 ? "feature:" + e.base.substr(4) : e.base);
    }
    pb.add_trigger(y, Side::Post);
    pb.add_condition(y, Side::Post);
    Outcome joint = check(x.id + "-" + y.id + ".condition", pb.build());
    if (joint.kind == Outcome::Kind::BudgetExceeded) return indeterminate(x, y, "condition interference");
    std::string note = qualitative ? " (qualitative: the effect is modeled as driving the feature to its limit)" : "";
    if (joint.sat()) {
      Finding f = make(FindingKind::EC, x, y);
      f.witness = joint.witness;
      f.channel = channel;
      f.explanation = "'" + x.action.subject + "." + x.action.command + "' can make the condition of the second rule hold" + note;
      out_.push_back(std::move(f));
      return;
    }
    // DC only when both rules could fire on their own.
    for (const Rule* r : {&x, &y}) {
      ProblemBuilder alone(cat_, opts_.merge);
      alone.add_trigger(*r, Side::Pre);
      alone.add_condition(*r, Side::Pre);
      Outcome o = check(r->id + ".alone", alone.build());
      if (o.kind == Outcome::Kind::BudgetExceeded) return indeterminate(x, y, "condition interference");
      if (!o.sat()) return;
    }
    Finding f = make(FindingKind::DC, x, y);
    f.channel = channel;
    f.explanation = "'" + x.action.subject + "." + x.action.command + "' leaves the condition of the second rule unsatisfiable" + note;
    out_.push_back(std::move(f));
  }

  const Rule& a_;
  const Rule& b_;
  const Catalog& cat_;
  const DetectOptions& opts_;
  std::vector<Finding> out_;
  bool nonlinear_ = false;
};

}  // namespace detail

inline PairIndex PairIndex::build(const std::vector<const Rule*>& rules, const Catalog& cat) {
  PairIndex idx;
  for (const Rule* r : rules) {
    idx.byDevice[detail::device_key(*r, r->action.subject)].push_back(
        {r->id, r->action.command, detail::resolved_params(*r)});
    for (const auto& [f, s] : goal_effect(cat, r->action.capability, r->action.command))
      if (s != GoalSign::None) idx.byGoalFeature[f].push_back({r->id, s});
  }
  return idx;
}

/// All findings between two bound rules, in kind order.
inline std::vector<Finding> detect_pair(const Rule& r1, const Rule& r2, const Catalog& cat, const DetectOptions& opts = {}) {
  return detail::PairDetector(r1, r2, cat, opts).run();
}

/// A pair the user chose to keep; feeds chain detection.
struct AllowedPair {
  std::string ruleA;
  std::string ruleB;
  std::string kind;
  std::string decidedAt;
  std::string decidedBy;
  friend bool operator==(const AllowedPair&, const AllowedPair&) = default;
};

namespace detail {

inline std::string trigger_phrase(const Rule& r, const Catalog& cat) {
  if (r.trigger.subject == kLifecycleSubject) return "the app is installed";
  if (r.trigger.subject == kTimerSubject) return "a schedule fires";
  const auto* cap = cat.capability(r.trigger.capability);
  const auto* attr = cap ? cap->attribute(r.trigger.attribute) : nullptr;
  if (attr) {
    for (const auto& l : r.trigger.constraint) {
      auto c = l.rhs.const_value();
      if (l.op != CmpOp::Eq || !c) continue;
      auto it = attr->phrases.find(value_text(*c));
      if (it != attr->phrases.end()) return it->second;
    }
    if (auto it = attr->phrases.find("*"); it != attr->phrases.end()) return it->second;
  }
  return r.trigger.subject + "." + r.trigger.attribute + " changes";
}

inline std::string action_phrase(const Rule& r, const Catalog& cat) {
  const auto* cap = cat.capability(r.action.capability);
  const auto* cmd = cap ? cap->command(r.action.command) : nullptr;
  if (cmd && !cmd->phrase.empty()) return cmd->phrase;
  return "runs " + r.action.subject + "." + r.action.command;
}

}  // namespace detail

/// CHAIN findings: simple paths of 3..maxLen rules over CT and EC edges that
/// use at least one edge from `fresh`.
inline std::vector<Finding> detect_chains(const std::vector<Finding>& fresh, const std::vector<AllowedPair>& allowed,
                                          const std::map<std::string, const Rule*>& rules, const Catalog& cat,
                                          std::size_t maxLen = 4) {
  if (maxLen < 3) throw Error("InvalidArgument", "chains need at least three rules");
  std::map<std::string, std::map<std::string, bool>> adj;  // from -> to -> edge is new
  auto edge_kind = [](std::string_view k) { return k == "CT" || k == "EC"; };
  for (const auto& a : allowed)
    if (edge_kind(a.kind) && rules.count(a.ruleA) && rules.count(a.ruleB)) adj[a.ruleA].emplace(a.ruleB, false);
  for (const auto& f : fresh)
    if (edge_kind(kind_name(f.kind)) && f.rules.size() == 2) adj[f.rules[0]][f.rules[1]] = true;

  std::vector<Finding> out;
  std::size_t visited = 0;
  std::vector<std::string> path;
  std::function<void(bool)> dfs = [&](bool usedNew) {
    if (++visited > kChainBudget) throw Error("ChainBudgetExceeded", "more than 10000 chain paths");
    if (path.size() >= 3 && usedNew) {
      Finding f;
      f.kind = FindingKind::CHAIN;
      f.rules = path;
      for (const auto& id : path) f.apps.push_back(rules.at(id)->app);
      const Rule& first = *rules.at(path.front());
      const Rule& last = *rules.at(path.back());
      f.covertRule = detail::action_phrase(last, cat) + " when " + detail::trigger_phrase(first, cat);
      f.explanation = "covert rule formed by " + std::to_string(path.size()) + " rules: " + f.covertRule;
      out.push_back(std::move(f));
    }
    if (path.size() == maxLen) return;
    auto it = adj.find(path.back());
    if (it == adj.end()) return;
    for (const auto& [next, isNew] : it->second) {
      if (std::find(path.begin(), path.end(), next) != path.end()) continue;
      path.push_back(next);
      dfs(usedNew || isNew);
      path.pop_back();
    }
  };
  for (const auto& [start, _] : adj) {
    path = {start};
    dfs(false);
  }
  return out;
}

//===----------------------------------------------------------------------===//
// JSON
//===----------------------------------------------------------------------===//

inline nlohmann::json witness_json(const Witness& w) {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& [k, v] : w) j[k] = value_json(v);
  return j;
}

inline nlohmann::json to_json(const Finding& f) {
  nlohmann::json j;
  j["kind"] = kind_name(f.kind);
  j["rules"] = f.rules;
  j["apps"] = f.apps;
  if (f.directed())
    j["direction"] = {{"from", f.rules[0]}, {"to", f.rules[1]}};
  else
    j["direction"] = nullptr;
  j["witness"] = f.witness ? witness_json(*f.witness) : nlohmann::json(nullptr);
  j["channel"] = f.channel.empty() ? nlohmann::json(nullptr) : nlohmann::json(f.channel);
  j["explanation"] = f.explanation;
  if (f.kind == FindingKind::CHAIN) j["covertRule"] = f.covertRule;
  return j;
}

inline Finding finding_from_json(const nlohmann::json& j) {
  try {
    Finding f;
    f.kind = parse_kind(j.at("kind").get<std::string>());
    f.rules = j.at("rules").get<std::vector<std::string>>();
    f.apps = j.value("apps", std::vector<std::string>{});
    if (j.contains("witness") && !j.at("witness").is_null()) {
      Witness w;
      for (const auto& [k, v] : j.at("witness").items()) w[k] = json_to_value(v);
      f.witness = std::move(w);
    }
    if (j.contains("channel") && !j.at("channel").is_null()) f.channel = j.at("channel").get<std::string>();
    f.explanation = j.value("explanation", "");
    f.covertRule = j.value("covertRule", "");
    return f;
  } catch (const nlohmann::json::exception& e) {
    throw Error("SchemaViolation", std::string("finding: ") + e.what());
  }
}

}  // namespace hg
