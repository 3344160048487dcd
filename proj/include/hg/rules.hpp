//===-- rules.hpp - Trigger-condition-action rules --------------*- C++ -*-===//
//
// Rule model, configuration binding, prose rendering and the "hgrule/1"
// rule file. Rule ids are the first 16 hex digits of the SHA-256 of the
// rule's canonical JSON, so identical content always gets the same id.
//
//===----------------------------------------------------------------------===//
#pragma once

#include "hg/ast.hpp"
#include "hg/error.hpp"
#include "hg/term.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>
#include <openssl/evp.h>

namespace hg {

inline std::string sha256_hex(std::string_view data) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr) != 1)
    throw Error("HashFailure", "SHA-256 computation failed");
  static constexpr char hex[] = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[md[i] >> 4];
    out += hex[md[i] & 15];
  }
  return out;
}

/// Values a user supplied when installing an app.
struct Configuration {
  std::string appName;
  std::map<std::string, std::string> devices;  // variable -> 32 lowercase hex digits
  std::map<std::string, Value> values;

  friend bool operator==(const Configuration&, const Configuration&) = default;
};

inline nlohmann::json to_json(const Configuration& c) {
  nlohmann::json j;
  j["appName"] = c.appName;
  j["devices"] = c.devices;
  j["values"] = nlohmann::json::object();
  for (const auto& [k, v] : c.values) j["values"][k] = value_json(v);
  return j;
}

inline Value json_to_value(const nlohmann::json& j) {
  if (j.is_boolean()) return Value{j.get<bool>()};
  if (j.is_number_integer()) return Value{j.get<std::int64_t>()};
  if (j.is_string()) return Value{j.get<std::string>()};
  throw Error("SchemaViolation", "unsupported value " + j.dump());
}

inline Configuration configuration_from_json(const nlohmann::json& j) {
  try {
    Configuration c;
    c.appName = j.at("appName").get<std::string>();
    if (j.contains("devices")) c.devices = j.at("devices").get<std::map<std::string, std::string>>();
    if (j.contains("values"))
      for (const auto& [k, v] : j.at("values").items()) c.values[k] = json_to_value(v);
    return c;
  } catch (const nlohmann::json::exception& e) {
    throw Error("SchemaViolation", std::string("configuration: ") + e.what());
  }
}

struct Trigger {
  std::string subject;
  std::string capability;
  std::string attribute;
  std::vector<ConstraintLit> constraint;  // empty: fires on any change

  bool any_change() const { return constraint.empty(); }
  friend bool operator==(const Trigger&, const Trigger&) = default;
};

struct Condition {
  std::vector<DataConstraint> data;
  std::vector<ConstraintLit> predicates;
  friend bool operator==(const Condition&, const Condition&) = default;
};

struct Action {
  std::string subject;
  std::string capability;
  std::string command;
  std::vector<Term> params;
  std::vector<DataConstraint> data;
  Term when = Term::integer(0);
  Term period = Term::integer(0);
  friend bool operator==(const Action&, const Action&) = default;
};

inline constexpr const char* kFlagOnUninstall = "onUninstall";
inline constexpr const char* kFlagUnsatisfiable = "unsatisfiable";

// Trigger subjects of rules that do not start from a device event.
inline constexpr const char* kLifecycleSubject = "app";
inline constexpr const char* kTimerSubject = "timer";

struct Rule {
  std::string id;
  std::string app;
  Trigger trigger;
  Condition condition;
  Action action;
  std::set<std::string> flags;
  std::map<std::string, std::string> capabilities;  // device variable -> capability
  std::map<std::string, std::string> devices;       // device variable -> DeviceId, once bound

  bool has_flag(const char* f) const { return flags.count(f) != 0; }
  std::string device_id(const std::string& var) const {
    auto it = devices.find(var);
    return it == devices.end() ? std::string() : it->second;
  }
  friend bool operator==(const Rule&, const Rule&) = default;
};

/// Input declaration as recorded in rule files.
struct InputSpec {
  std::string name;
  std::string kind;  // device | number | string | bool | enum
  std::string capability;
  std::vector<std::string> values;
  std::string title;
  friend bool operator==(const InputSpec&, const InputSpec&) = default;
};

inline InputSpec input_spec(const InputDecl& d) {
  static const char* names[] = {"device", "number", "string", "bool", "enum"};
  return {d.name, names[static_cast<int>(d.kind)], d.capability, d.values, d.title.value_or("")};
}

struct RuleSet {
  std::string app;
  std::vector<InputSpec> inputs;
  std::vector<Rule> rules;
  std::optional<Configuration> binding;

  const InputSpec* input(std::string_view n) const {
    for (const auto& i : inputs)
      if (i.name == n) return &i;
    return nullptr;
  }
  const Rule* rule(std::string_view id) const {
    for (const auto& r : rules)
      if (r.id == id) return &r;
    return nullptr;
  }
  friend bool operator==(const RuleSet&, const RuleSet&) = default;
};

//===----------------------------------------------------------------------===//
// Canonical form and serialization
//===----------------------------------------------------------------------===//

namespace detail {

template <class T>
void sort_unique_by_sexpr(std::vector<T>& xs) {
  std::vector<std::pair<std::string, T>> keyed;
  for (auto& x : xs) keyed.emplace_back(to_sexpr(x), std::move(x));
  std::sort(keyed.begin(), keyed.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  keyed.erase(std::unique(keyed.begin(), keyed.end(), [](const auto& a, const auto& b) { return a.first == b.first; }),
              keyed.end());
  xs.clear();
  for (auto& [k, x] : keyed) xs.push_back(std::move(x));
}

inline void add_symbols(const Term& t, std::map<std::string, std::string>& out) {
  std::vector<Term> vars;
  collect_vars(t, vars);
  for (const auto& v : vars) out[v.symbol()] = sort_name(v.sort);
}

inline void add_symbols(const ConstraintLit& l, std::map<std::string, std::string>& out) {
  add_symbols(l.lhs, out);
  add_symbols(l.rhs, out);
}

inline void add_symbols(const DataConstraint& d, std::map<std::string, std::string>& out) {
  add_symbols(d.target, out);
  add_symbols(d.source, out);
}

inline nlohmann::json schedule_json(const Term& t) {
  if (t.kind == Term::Kind::IntConst) return t.ival;
  return to_sexpr(t);
}

template <class T>
nlohmann::json sexprs(const std::vector<T>& xs) {
  nlohmann::json a = nlohmann::json::array();
  for (const auto& x : xs) a.push_back(to_sexpr(x));
  return a;
}

}  // namespace detail

/// Sorts literal lists and drops duplicates so equivalent rules compare equal.
inline void canonicalize(Rule& r) {
  detail::sort_unique_by_sexpr(r.trigger.constraint);
  detail::sort_unique_by_sexpr(r.condition.data);
  detail::sort_unique_by_sexpr(r.condition.predicates);
  detail::sort_unique_by_sexpr(r.action.data);
}

inline nlohmann::json rule_to_json(const Rule& r) {
  std::map<std::string, std::string> symbols;
  for (const auto& l : r.trigger.constraint) detail::add_symbols(l, symbols);
  for (const auto& d : r.condition.data) detail::add_symbols(d, symbols);
  for (const auto& l : r.condition.predicates) detail::add_symbols(l, symbols);
  for (const auto& p : r.action.params) detail::add_symbols(p, symbols);
  for (const auto& d : r.action.data) detail::add_symbols(d, symbols);
  detail::add_symbols(r.action.when, symbols);
  detail::add_symbols(r.action.period, symbols);

  nlohmann::json j;
  j["id"] = r.id;
  j["flags"] = r.flags;
  j["symbols"] = symbols;
  j["capabilities"] = r.capabilities;
  if (!r.devices.empty()) j["devices"] = r.devices;
  j["trigger"] = {{"subject", r.trigger.subject},
                  {"capability", r.trigger.capability},
                  {"attribute", r.trigger.attribute},
                  {"constraint", detail::sexprs(r.trigger.constraint)}};
  j["condition"] = {{"data", detail::sexprs(r.condition.data)},
                    {"predicates", detail::sexprs(r.condition.predicates)}};
  nlohmann::json paras = nlohmann::json::array();
  for (const auto& p : r.action.params) paras.push_back(to_sexpr(p));
  j["action"] = {{"subject", r.action.subject},
                 {"capability", r.action.capability},
                 {"command", r.action.command},
                 {"paras", paras},
                 {"data", detail::sexprs(r.action.data)},
                 {"when", detail::schedule_json(r.action.when)},
                 {"period", detail::schedule_json(r.action.period)}};
  return j;
}

/// Content hash over (app, trigger, condition, action, flags, devices).
inline std::string compute_rule_id(const Rule& r) {
  nlohmann::json j = rule_to_json(r);
  j.erase("id");
  j["app"] = r.app;
  return sha256_hex(j.dump()).substr(0, 16);
}

inline void finalize(Rule& r) {
  canonicalize(r);
  r.id = compute_rule_id(r);
}

inline Rule rule_from_json(const nlohmann::json& j, const std::string& app) {
  try {
    std::map<std::string, std::string> symbols = j.at("symbols").get<std::map<std::string, std::string>>();
    SortLookup sorts = [&symbols](const std::string& s) -> std::optional<Sort> {
      auto it = symbols.find(s);
      if (it == symbols.end()) return std::nullopt;
      return parse_sort(it->second);
    };
    auto term = [&](const nlohmann::json& x) { return parse_term_sexpr(x.get<std::string>(), sorts); };
    auto schedule = [&](const nlohmann::json& x) {
      if (x.is_number_integer()) return Term::integer(x.get<std::int64_t>());
      return term(x);
    };
    Rule r;
    r.app = app;
    r.id = j.at("id").get<std::string>();
    r.flags = j.at("flags").get<std::set<std::string>>();
    for (const auto& f : r.flags)
      if (f != kFlagOnUninstall && f != kFlagUnsatisfiable) throw Error("SchemaViolation", "unknown rule flag '" + f + "'");
    r.capabilities = j.at("capabilities").get<std::map<std::string, std::string>>();
    if (j.contains("devices")) r.devices = j.at("devices").get<std::map<std::string, std::string>>();
    const auto& t = j.at("trigger");
    r.trigger.subject = t.at("subject").get<std::string>();
    r.trigger.capability = t.at("capability").get<std::string>();
    r.trigger.attribute = t.at("attribute").get<std::string>();
    for (const auto& l : t.at("constraint")) r.trigger.constraint.push_back(parse_literal_sexpr(l.get<std::string>(), sorts));
    const auto& c = j.at("condition");
    for (const auto& d : c.at("data")) r.condition.data.push_back(parse_data_sexpr(d.get<std::string>(), sorts));
    for (const auto& l : c.at("predicates")) r.condition.predicates.push_back(parse_literal_sexpr(l.get<std::string>(), sorts));
    const auto& a = j.at("action");
    r.action.subject = a.at("subject").get<std::string>();
    r.action.capability = a.at("capability").get<std::string>();
    r.action.command = a.at("command").get<std::string>();
    for (const auto& p : a.at("paras")) r.action.params.push_back(term(p));
    for (const auto& d : a.at("data")) r.action.data.push_back(parse_data_sexpr(d.get<std::string>(), sorts));
    r.action.when = schedule(a.at("when"));
    r.action.period = schedule(a.at("period"));
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw Error("SchemaViolation", std::string("rule: ") + e.what());
  }
}

inline nlohmann::json to_json(const RuleSet& rs) {
  nlohmann::json j;
  j["schema"] = "hgrule/1";
  j["app"] = rs.app;
  j["inputs"] = nlohmann::json::array();
  for (const auto& i : rs.inputs) {
    nlohmann::json x = {{"name", i.name}, {"kind", i.kind}};
    if (!i.capability.empty()) x["capability"] = i.capability;
    if (!i.values.empty()) x["values"] = i.values;
    if (!i.title.empty()) x["title"] = i.title;
    j["inputs"].push_back(x);
  }
  if (rs.binding) j["binding"] = to_json(*rs.binding);
  j["rules"] = nlohmann::json::array();
  for (const auto& r : rs.rules) j["rules"].push_back(rule_to_json(r));
  return j;
}

inline std::string serialize(const RuleSet& rs) { return to_json(rs).dump(2) + "\n"; }

inline RuleSet ruleset_from_json(const nlohmann::json& j) {
  try {
    if (!j.is_object() || j.value("schema", "") != "hgrule/1")
      throw Error("SchemaViolation", "rule file schema must be \"hgrule/1\"");
    RuleSet rs;
    rs.app = j.at("app").get<std::string>();
    for (const auto& x : j.at("inputs")) {
      InputSpec i;
      i.name = x.at("name").get<std::string>();
      i.kind = x.at("kind").get<std::string>();
      static const std::set<std::string> kinds = {"device", "number", "string", "bool", "enum"};
      if (!kinds.count(i.kind)) throw Error("SchemaViolation", "unknown input kind '" + i.kind + "'");
      i.capability = x.value("capability", "");
      if (x.contains("values")) i.values = x.at("values").get<std::vector<std::string>>();
      i.title = x.value("title", "");
      rs.inputs.push_back(std::move(i));
    }
    if (j.contains("binding")) rs.binding = configuration_from_json(j.at("binding"));
    for (const auto& r : j.at("rules")) rs.rules.push_back(rule_from_json(r, rs.app));
    return rs;
  } catch (const nlohmann::json::exception& e) {
    throw Error("SchemaViolation", std::string("rule file: ") + e.what());
  }
}

inline RuleSet deserialize(std::string_view bytes) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(bytes);
  } catch (const nlohmann::json::exception& e) {
    throw Error("SchemaViolation", std::string("rule file is not valid JSON: ") + e.what());
  }
  return ruleset_from_json(j);
}

//===----------------------------------------------------------------------===//
// Binding
//===----------------------------------------------------------------------===//

/// A DeviceId is 128 bits written as 32 hex digits; dashes are ignored.
inline std::optional<std::string> normalize_device_id(std::string_view s) {
  std::string out;
  for (char c : s) {
    if (c == '-') continue;
    if (c >= 'A' && c <= 'F') c = static_cast<char>(c - 'A' + 'a');
    if (!((c >= '0' && c <= '9') || (c >= 'a' && c <= 'f'))) return std::nullopt;
    out += c;
  }
  if (out.size() != 32) return std::nullopt;
  return out;
}

namespace detail {

inline void collect_inputs(const Term& t, std::set<std::string>& out) {
  std::vector<Term> vars;
  collect_vars(t, vars);
  for (const auto& v : vars)
    if (v.kind == Term::Kind::Input) out.insert(v.text);
}

inline void collect_inputs(const ConstraintLit& l, std::set<std::string>& out) {
  collect_inputs(l.lhs, out);
  collect_inputs(l.rhs, out);
}

inline void collect_inputs(const DataConstraint& d, std::set<std::string>& out) {
  collect_inputs(d.target, out);
  collect_inputs(d.source, out);
}

inline void collect_devices(const Term& t, std::set<std::string>& out) {
  std::vector<Term> vars;
  collect_vars(t, vars);
  for (const auto& v : vars)
    if (v.kind == Term::Kind::Attr) out.insert(v.text);
}

}  // namespace detail

/// Device variables a rule mentions: trigger and action subjects plus every
/// attribute read.
inline std::set<std::string> rule_device_vars(const Rule& r) {
  std::set<std::string> out;
  if (r.trigger.subject != kLifecycleSubject && r.trigger.subject != kTimerSubject) out.insert(r.trigger.subject);
  out.insert(r.action.subject);
  auto lit = [&](const ConstraintLit& l) {
    detail::collect_devices(l.lhs, out);
    detail::collect_devices(l.rhs, out);
  };
  auto data = [&](const DataConstraint& d) {
    detail::collect_devices(d.target, out);
    detail::collect_devices(d.source, out);
  };
  for (const auto& l : r.trigger.constraint) lit(l);
  for (const auto& l : r.condition.predicates) lit(l);
  for (const auto& d : r.condition.data) data(d);
  for (const auto& d : r.action.data) data(d);
  for (const auto& p : r.action.params) detail::collect_devices(p, out);
  return out;
}

/// Checks `config` against the declared inputs and returns the value each
/// non-device input is bound to.
inline std::map<std::string, Value> check_configuration(const RuleSet& rs, const Configuration& config) {
  if (config.appName != rs.app)
    throw Error("AppMismatch", "configuration is for '" + config.appName + "', rules are for '" + rs.app + "'");
  std::map<std::string, Value> values;
  for (const auto& in : rs.inputs) {
    auto dev = config.devices.find(in.name);
    auto val = config.values.find(in.name);
    if (in.kind == "device") {
      if (dev != config.devices.end()) {
        if (!normalize_device_id(dev->second))
          throw Error("SortMismatch", "'" + in.name + "' must be bound to a 128-bit device id");
        continue;
      }
      if (val != config.values.end())
        throw Error("SortMismatch", "'" + in.name + "' is a device input but is bound to a value");
      throw Error("MissingBinding", in.name);
    }
    std::optional<Value> v;
    if (val != config.values.end())
      v = val->second;
    else if (dev != config.devices.end() && (in.kind == "string" || in.kind == "enum"))
      v = Value{dev->second};  // a string value that happens to look like a device id
    if (!v) throw Error("MissingBinding", in.name);
    Sort want = in.kind == "number" ? Sort::Int : in.kind == "bool" ? Sort::Bool : Sort::Str;
    if (sort_of(*v) != want)
      throw Error("SortMismatch", "'" + in.name + "' expects " + sort_name(want) + ", got " + value_text(*v));
    if (in.kind == "enum" &&
        std::find(in.values.begin(), in.values.end(), std::get<std::string>(*v)) == in.values.end())
      throw Error("SortMismatch", "\"" + value_text(*v) + "\" is not an option of '" + in.name + "'");
    values[in.name] = *v;
  }
  return values;
}

/// Attaches device ids and input values to every rule. Each referenced
/// input gains a data constraint `input = value`; predicates keep the input
/// symbol. Ids are recomputed over the bound content.
inline RuleSet bind_configuration(const RuleSet& rs, const Configuration& config,
                                  const std::map<std::string, std::string>& builtins = {{"location", "location"}}) {
  auto values = check_configuration(rs, config);
  RuleSet out = rs;
  out.binding = config;
  for (auto& r : out.rules) {
    r.devices.clear();
    for (const auto& var : rule_device_vars(r)) {
      if (auto b = builtins.find(var); b != builtins.end()) {
        r.devices[var] = b->second;
      } else if (auto d = config.devices.find(var); d != config.devices.end()) {
        r.devices[var] = *normalize_device_id(d->second);
      } else if (var != "api") {
        throw Error("MissingBinding", var);
      }
    }
    std::set<std::string> cond_inputs, act_inputs;
    for (const auto& l : r.trigger.constraint) detail::collect_inputs(l, cond_inputs);
    for (const auto& l : r.condition.predicates) detail::collect_inputs(l, cond_inputs);
    for (const auto& d : r.condition.data) detail::collect_inputs(d, cond_inputs);
    for (const auto& p : r.action.params) detail::collect_inputs(p, act_inputs);
    for (const auto& d : r.action.data) detail::collect_inputs(d, act_inputs);
    detail::collect_inputs(r.action.when, act_inputs);
    detail::collect_inputs(r.action.period, act_inputs);
    auto bind_into = [&](const std::set<std::string>& names, std::vector<DataConstraint>& data) {
      for (const auto& n : names) {
        auto v = values.find(n);
        if (v == values.end()) continue;  // persistent state stays symbolic
        data.push_back({Term::input(n, sort_of(v->second)), Term::constant(v->second)});
      }
    };
    bind_into(cond_inputs, r.condition.data);
    bind_into(act_inputs, r.action.data);
    finalize(r);
  }
  std::sort(out.rules.begin(), out.rules.end(), [](const Rule& a, const Rule& b) { return a.id < b.id; });
  return out;
}

//===----------------------------------------------------------------------===//
// Rendering
//===----------------------------------------------------------------------===//

/// Replaces locals by their defining expressions and bound inputs by their
/// values, using the rule's data constraints (and `config`, if given).
inline Term resolve_term(const Rule& r, const Term& t, const Configuration* config = nullptr, int depth = 0) {
  if (depth > 64) return t;
  return substitute(t, [&](const Term& v) -> std::optional<Term> {
    if (v.kind != Term::Kind::Local && v.kind != Term::Kind::Input) return std::nullopt;
    for (const auto* data : {&r.condition.data, &r.action.data})
      for (const auto& d : *data)
        if (d.target == v) return resolve_term(r, d.source, config, depth + 1);
    if (v.kind == Term::Kind::Input && config) {
      auto it = config->values.find(v.text);
      if (it != config->values.end()) return Term::constant(it->second);
    }
    return std::nullopt;
  });
}

inline ConstraintLit resolve_literal(const Rule& r, const ConstraintLit& l, const Configuration* config = nullptr) {
  return {resolve_term(r, l.lhs, config), l.op, resolve_term(r, l.rhs, config)};
}

inline std::string render_trigger(const Rule& r, const Configuration* config = nullptr) {
  const auto& t = r.trigger;
  if (t.subject == kLifecycleSubject) return "WHEN the app is installed";
  if (t.subject == kTimerSubject) return "WHEN the schedule fires";
  std::string out = "WHEN " + t.subject + "." + t.attribute + " ";
  if (t.any_change()) return out + "changes";
  Term self = Term::attribute(t.subject, t.attribute, Sort::Str);
  std::vector<std::string> parts;
  for (const auto& raw : t.constraint) {
    ConstraintLit l = resolve_literal(r, raw, config);
    auto is_self = [&](const Term& x) { return x.kind == Term::Kind::Attr && x.text == t.subject && x.attr == t.attribute; };
    if (is_self(l.rhs) && !is_self(l.lhs)) l = {l.rhs, mirror(l.op), l.lhs};
    if (is_self(l.lhs))
      parts.push_back(l.op == CmpOp::Eq ? render(l.rhs) : std::string(op_symbol(l.op)) + " " + render(l.rhs));
    else
      parts.push_back(render(l));
  }
  std::sort(parts.begin(), parts.end());
  out += "becomes ";
  for (std::size_t i = 0; i < parts.size(); ++i) out += (i ? " AND " : "") + parts[i];
  return out;
}

/// One-line prose form: WHEN ... [IF ...] THEN subject.command(params).
inline std::string render_rule(const Rule& r, const std::optional<Configuration>& binding = std::nullopt) {
  const Configuration* config = binding ? &*binding : nullptr;
  std::string out = render_trigger(r, config);
  std::vector<std::string> preds;
  for (const auto& l : r.condition.predicates) preds.push_back(render(resolve_literal(r, l, config)));
  std::sort(preds.begin(), preds.end());
  if (!preds.empty()) {
    out += " IF ";
    for (std::size_t i = 0; i < preds.size(); ++i) out += (i ? " AND " : "") + preds[i];
  }
  out += " THEN " + r.action.subject + "." + r.action.command + "(";
  for (std::size_t i = 0; i < r.action.params.size(); ++i)
    out += (i ? ", " : "") + render(resolve_term(r, r.action.params[i], config), true);
  out += ")";
  Term when = resolve_term(r, r.action.when, config);
  Term period = resolve_term(r, r.action.period, config);
  if (!(when.kind == Term::Kind::IntConst && when.ival == 0)) out += " after " + render(when) + "s";
  if (!(period.kind == Term::Kind::IntConst && period.ival == 0)) out += " every " + render(period) + "s";
  if (r.has_flag(kFlagUnsatisfiable)) out += " [never fires]";
  return out;
}

}  // namespace hg
