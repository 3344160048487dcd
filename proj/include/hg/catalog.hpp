//===-- catalog.hpp - Device capability knowledge base ----------*- C++ -*-===//
//
// The catalog lists, per capability, the attributes a device reports and the
// commands it accepts. Commands carry their effects: the attribute value they
// set on the device itself, the environment features they push up or down
// (channels), and their goal-feature signs. Everything is data; a home can
// ship its own catalog file (JSON or TOML, schema "hgcat/1").
//
//===----------------------------------------------------------------------===//
#pragma once

#include "hg/default_catalog.hpp"
#include "hg/error.hpp"
#include "hg/term.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>
#include <toml.hpp>

namespace hg {

enum class Direction { Up, Down };
enum class GoalSign { Up, Down, None };

inline char sign_char(GoalSign s) { return s == GoalSign::Up ? '+' : s == GoalSign::Down ? '-' : '#'; }

struct FeatureSpec {
  std::string name;
  bool goal = false;
  std::int64_t lo = 0;
  std::int64_t hi = 0;
  std::vector<std::string> values;  // non-empty for enumerated features

  bool numeric() const { return values.empty(); }
  friend bool operator==(const FeatureSpec&, const FeatureSpec&) = default;
};

struct AttributeSpec {
  std::string name;
  Sort sort = Sort::Str;
  std::vector<std::string> values;  // closed enum domain; empty means open
  std::optional<std::pair<std::int64_t, std::int64_t>> range;
  std::string feature;  // environment feature this reading observes, if any
  std::map<std::string, std::string> phrases;  // value -> event description

  friend bool operator==(const AttributeSpec&, const AttributeSpec&) = default;
};

struct ParamSpec {
  std::string name;
  Sort sort = Sort::Str;
  friend bool operator==(const ParamSpec&, const ParamSpec&) = default;
};

struct SelfEffect {
  std::string attribute;
  std::optional<Value> value;  // fixed value, or
  std::string param;           // name of the parameter carrying the value
  friend bool operator==(const SelfEffect&, const SelfEffect&) = default;
};

struct ChannelSpec {
  std::string feature;
  Direction direction = Direction::Up;
  std::string setpointParam;
  friend bool operator==(const ChannelSpec&, const ChannelSpec&) = default;
};

struct CommandSpec {
  std::string name;
  std::vector<ParamSpec> params;
  std::optional<SelfEffect> selfEffect;
  std::vector<ChannelSpec> channels;
  std::map<std::string, GoalSign> goalEffects;
  std::string phrase;

  int param_index(const std::string& p) const {
    for (std::size_t i = 0; i < params.size(); ++i)
      if (params[i].name == p) return static_cast<int>(i);
    return -1;
  }
  friend bool operator==(const CommandSpec&, const CommandSpec&) = default;
};

struct CapabilityEntry {
  std::string name;
  std::vector<AttributeSpec> attributes;
  std::vector<CommandSpec> commands;
  bool isVirtual = false;

  const AttributeSpec* attribute(std::string_view n) const {
    for (const auto& a : attributes)
      if (a.name == n) return &a;
    return nullptr;
  }
  const CommandSpec* command(std::string_view n) const {
    for (const auto& c : commands)
      if (c.name == n) return &c;
    return nullptr;
  }
  friend bool operator==(const CapabilityEntry&, const CapabilityEntry&) = default;
};

struct ContradictionRule {
  enum class Kind { OppositeCommands, SameCommandParamClash };
  std::string capability;
  Kind kind = Kind::OppositeCommands;
  std::string first;   // command (both kinds)
  std::string second;  // opposite command (OppositeCommands only)
  friend bool operator==(const ContradictionRule&, const ContradictionRule&) = default;
};

/// A platform API that counts as a sink; `subject`/`capability`/`command`
/// name the catalog command it is equivalent to.
struct ApiSink {
  std::string name;
  std::vector<ParamSpec> params;
  std::string subject;
  std::string capability;
  std::string command;
  friend bool operator==(const ApiSink&, const ApiSink&) = default;
};

/// Implicit device variable every app may use without declaring it.
struct BuiltinDevice {
  std::string name;
  std::string capability;
  std::string deviceId;
  friend bool operator==(const BuiltinDevice&, const BuiltinDevice&) = default;
};

struct ChannelEffect {
  std::string feature;
  Direction direction = Direction::Up;
  std::optional<Term> setpoint;
};

struct Catalog {
  std::vector<FeatureSpec> features;
  std::vector<CapabilityEntry> capabilities;
  std::vector<ContradictionRule> contradictions;
  std::vector<ApiSink> apiSinks;
  std::vector<BuiltinDevice> builtins;

  const CapabilityEntry* capability(std::string_view n) const {
    for (const auto& c : capabilities)
      if (c.name == n) return &c;
    return nullptr;
  }
  const FeatureSpec* feature(std::string_view n) const {
    for (const auto& f : features)
      if (f.name == n) return &f;
    return nullptr;
  }
  const ApiSink* api(std::string_view n) const {
    for (const auto& a : apiSinks)
      if (a.name == n) return &a;
    return nullptr;
  }
  const BuiltinDevice* builtin(std::string_view n) const {
    for (const auto& b : builtins)
      if (b.name == n) return &b;
    return nullptr;
  }
  std::vector<std::string> goalFeatures() const {
    std::vector<std::string> out;
    for (const auto& f : features)
      if (f.goal) out.push_back(f.name);
    return out;
  }
  const CommandSpec& command(std::string_view cap, std::string_view cmd) const {
    const auto* c = capability(cap);
    if (!c) throw Error("UnknownCapability", "unknown capability '" + std::string(cap) + "'");
    const auto* s = c->command(cmd);
    if (!s)
      throw Error("UnknownCommand",
                  "capability '" + std::string(cap) + "' has no command '" + std::string(cmd) + "'");
    return *s;
  }

  friend bool operator==(const Catalog&, const Catalog&) = default;
};

//===----------------------------------------------------------------------===//
// Loading
//===----------------------------------------------------------------------===//

namespace detail {

inline Sort attribute_sort(const std::string& s) {
  if (s == "enum" || s == "str" || s == "string") return Sort::Str;
  if (s == "int" || s == "number") return Sort::Int;
  if (s == "bool") return Sort::Bool;
  throw Error("SchemaViolation", "unknown attribute sort '" + s + "'");
}

inline Direction parse_direction(const std::string& s) {
  if (s == "+") return Direction::Up;
  if (s == "-") return Direction::Down;
  throw Error("SchemaViolation", "direction must be '+' or '-', got '" + s + "'");
}

inline GoalSign parse_sign(const std::string& s) {
  if (s == "+") return GoalSign::Up;
  if (s == "-") return GoalSign::Down;
  if (s == "#") return GoalSign::None;
  throw Error("SchemaViolation", "goal sign must be '+', '-' or '#', got '" + s + "'");
}

inline std::vector<ParamSpec> parse_params(const nlohmann::json& j) {
  std::vector<ParamSpec> out;
  for (const auto& p : j) out.push_back({p.at("name").get<std::string>(), attribute_sort(p.at("sort"))});
  return out;
}

inline Value json_value(const nlohmann::json& j) {
  if (j.is_number_integer()) return Value{j.get<std::int64_t>()};
  if (j.is_boolean()) return Value{j.get<bool>()};
  if (j.is_string()) return Value{j.get<std::string>()};
  throw Error("SchemaViolation", "unsupported value " + j.dump());
}

inline void validate_catalog(const Catalog& cat) {
  std::set<std::string> names;
  for (const auto& c : cat.capabilities) {
    if (!names.insert(c.name).second)
      throw Error("SchemaViolation", "duplicate capability '" + c.name + "'");
    for (const auto& a : c.attributes) {
      if (!a.feature.empty() && !cat.feature(a.feature))
        throw Error("DanglingFeature", c.name + "." + a.name + " observes undeclared feature '" +
                                           a.feature + "'");
    }
    for (const auto& cmd : c.commands) {
      if (cmd.selfEffect) {
        if (!c.attribute(cmd.selfEffect->attribute))
          throw Error("SchemaViolation", c.name + "." + cmd.name + " sets unknown attribute '" +
                                             cmd.selfEffect->attribute + "'");
        if (!cmd.selfEffect->value && cmd.param_index(cmd.selfEffect->param) < 0)
          throw Error("SchemaViolation",
                      c.name + "." + cmd.name + " self effect names unknown parameter");
      }
      for (const auto& ch : cmd.channels) {
        const auto* f = cat.feature(ch.feature);
        if (!f || !f->goal)
          throw Error("DanglingFeature", c.name + "." + cmd.name + " channel names feature '" +
                                             ch.feature + "' which is not a goal feature");
        if (!ch.setpointParam.empty() && cmd.param_index(ch.setpointParam) < 0)
          throw Error("SchemaViolation", c.name + "." + cmd.name + " setpoint names unknown parameter");
        auto g = cmd.goalEffects.find(ch.feature);
        GoalSign expect = ch.direction == Direction::Up ? GoalSign::Up : GoalSign::Down;
        if (g != cmd.goalEffects.end() && g->second != GoalSign::None && g->second != expect)
          throw Error("SchemaViolation", c.name + "." + cmd.name + " channel and goal effect disagree on '" +
                                             ch.feature + "'");
      }
      for (const auto& [f, s] : cmd.goalEffects) {
        const auto* spec = cat.feature(f);
        if (!spec || !spec->goal)
          throw Error("DanglingFeature", c.name + "." + cmd.name + " goal effect names '" + f +
                                             "' which is not a goal feature");
        if (c.isVirtual && s != GoalSign::None)
          throw Error("SchemaViolation", "virtual capability '" + c.name + "' carries goal effects");
      }
      if (c.isVirtual && !cmd.channels.empty())
        throw Error("SchemaViolation", "virtual capability '" + c.name + "' carries channels");
    }
  }
  for (const auto& r : cat.contradictions) {
    const auto* c = cat.capability(r.capability);
    if (!c) throw Error("SchemaViolation", "contradiction names unknown capability '" + r.capability + "'");
    if (!c->command(r.first) ||
        (r.kind == ContradictionRule::Kind::OppositeCommands && !c->command(r.second)))
      throw Error("SchemaViolation", "contradiction on '" + r.capability + "' names unknown command");
    if (r.kind == ContradictionRule::Kind::OppositeCommands && r.first == r.second)
      throw Error("SchemaViolation", "opposite commands must differ");
  }
  for (const auto& a : cat.apiSinks) {
    const auto* c = cat.capability(a.capability);
    if (!c || !c->command(a.command))
      throw Error("SchemaViolation", "api sink '" + a.name + "' maps to unknown command");
  }
  for (const auto& b : cat.builtins)
    if (!cat.capability(b.capability))
      throw Error("SchemaViolation", "builtin '" + b.name + "' has unknown capability");
}

}  // namespace detail

/// Builds a catalog from an "hgcat/1" JSON document and validates it.
inline Catalog parse_catalog(const nlohmann::json& j) {
  using detail::attribute_sort;
  try {
    if (j.value("schema", "") != "hgcat/1")
      throw Error("SchemaViolation", "catalog schema must be \"hgcat/1\"");
    Catalog cat;
    for (const auto& f : j.at("features")) {
      FeatureSpec spec;
      spec.name = f.at("name").get<std::string>();
      spec.goal = f.value("goal", false);
      if (f.contains("values")) {
        spec.values = f.at("values").get<std::vector<std::string>>();
        if (spec.values.empty()) throw Error("SchemaViolation", "feature '" + spec.name + "' has no values");
      } else {
        spec.lo = f.at("lo").get<std::int64_t>();
        spec.hi = f.at("hi").get<std::int64_t>();
        if (spec.lo > spec.hi) throw Error("SchemaViolation", "feature '" + spec.name + "' has lo > hi");
      }
      cat.features.push_back(std::move(spec));
    }
    for (const auto& c : j.at("capabilities")) {
      CapabilityEntry cap;
      cap.name = c.at("name").get<std::string>();
      cap.isVirtual = c.value("virtual", false);
      for (const auto& a : c.value("attributes", nlohmann::json::array())) {
        AttributeSpec at;
        at.name = a.at("name").get<std::string>();
        std::string sort = a.at("sort").get<std::string>();
        at.sort = attribute_sort(sort);
        if (a.contains("values")) at.values = a.at("values").get<std::vector<std::string>>();
        if (sort == "enum" && at.values.empty())
          throw Error("SchemaViolation", cap.name + "." + at.name + " is an enum without values");
        if (a.contains("range"))
          at.range = std::pair{a.at("range").at(0).get<std::int64_t>(), a.at("range").at(1).get<std::int64_t>()};
        at.feature = a.value("feature", "");
        if (a.contains("phrases")) at.phrases = a.at("phrases").get<std::map<std::string, std::string>>();
        cap.attributes.push_back(std::move(at));
      }
      for (const auto& m : c.value("commands", nlohmann::json::array())) {
        CommandSpec cmd;
        cmd.name = m.at("name").get<std::string>();
        cmd.params = detail::parse_params(m.value("params", nlohmann::json::array()));
        if (m.contains("selfEffect")) {
          const auto& se = m.at("selfEffect");
          SelfEffect eff;
          eff.attribute = se.at("attribute").get<std::string>();
          if (se.contains("value")) eff.value = detail::json_value(se.at("value"));
          eff.param = se.value("param", "");
          if (!eff.value && eff.param.empty())
            throw Error("SchemaViolation", cap.name + "." + cmd.name + " self effect needs value or param");
          cmd.selfEffect = std::move(eff);
        }
        for (const auto& ch : m.value("channels", nlohmann::json::array()))
          cmd.channels.push_back({ch.at("feature").get<std::string>(),
                                  detail::parse_direction(ch.at("direction").get<std::string>()),
                                  ch.value("setpoint", "")});
        const nlohmann::json goal = m.value("goal", nlohmann::json::object());
        for (const auto& [f, s] : goal.items()) cmd.goalEffects[f] = detail::parse_sign(s.get<std::string>());
        cmd.phrase = m.value("phrase", "");
        cap.commands.push_back(std::move(cmd));
      }
      cat.capabilities.push_back(std::move(cap));
    }
    for (const auto& r : j.value("contradictions", nlohmann::json::array())) {
      ContradictionRule rule;
      rule.capability = r.at("capability").get<std::string>();
      if (r.contains("opposite")) {
        rule.kind = ContradictionRule::Kind::OppositeCommands;
        rule.first = r.at("opposite").at(0).get<std::string>();
        rule.second = r.at("opposite").at(1).get<std::string>();
      } else {
        rule.kind = ContradictionRule::Kind::SameCommandParamClash;
        rule.first = r.at("paramClash").get<std::string>();
      }
      cat.contradictions.push_back(std::move(rule));
    }
    for (const auto& a : j.value("apiSinks", nlohmann::json::array()))
      cat.apiSinks.push_back({a.at("name").get<std::string>(),
                              detail::parse_params(a.value("params", nlohmann::json::array())),
                              a.at("subject").get<std::string>(), a.at("capability").get<std::string>(),
                              a.at("command").get<std::string>()});
    for (const auto& b : j.value("builtins", nlohmann::json::array()))
      cat.builtins.push_back({b.at("name").get<std::string>(), b.at("capability").get<std::string>(),
                              b.at("deviceId").get<std::string>()});
    detail::validate_catalog(cat);
    return cat;
  } catch (const nlohmann::json::exception& e) {
    throw Error("SchemaViolation", std::string("catalog: ") + e.what());
  }
}

inline Catalog parse_catalog_text(std::string_view text, bool toml_syntax = false) {
  nlohmann::json j;
  if (toml_syntax) {
    try {
      toml::table tbl = toml::parse(text);
      std::ostringstream os;
      os << toml::json_formatter{tbl};
      j = nlohmann::json::parse(os.str());
    } catch (const toml::parse_error& e) {
      throw Error("SchemaViolation", std::string("catalog TOML: ") + std::string(e.description()));
    }
  } else {
    try {
      j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
      throw Error("SchemaViolation", std::string("catalog JSON: ") + e.what());
    }
  }
  return parse_catalog(j);
}

/// Loads a catalog file; ".toml" files are read as TOML, anything else as JSON.
inline Catalog load_catalog(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("IoError", "cannot open catalog '" + path.string() + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_catalog_text(ss.str(), path.extension() == ".toml");
}

inline const Catalog& default_catalog() {
  static const Catalog cat = parse_catalog_text(kDefaultCatalogJson);
  return cat;
}

//===----------------------------------------------------------------------===//
// Queries
//===----------------------------------------------------------------------===//

/// True iff issuing (cmdA, paramsA) and (cmdB, paramsB) to one device of the
/// given capability contradicts. Symmetric in its two commands.
inline bool contradicts(const Catalog& cat, std::string_view capability, std::string_view cmdA,
                        std::span<const Term> paramsA, std::string_view cmdB,
                        std::span<const Term> paramsB) {
  for (const auto& r : cat.contradictions) {
    if (r.capability != capability) continue;
    if (r.kind == ContradictionRule::Kind::OppositeCommands) {
      if ((r.first == cmdA && r.second == cmdB) || (r.first == cmdB && r.second == cmdA)) return true;
    } else if (cmdA == r.first && cmdB == r.first) {
      if (!std::equal(paramsA.begin(), paramsA.end(), paramsB.begin(), paramsB.end())) return true;
    }
  }
  return false;
}

/// Goal-feature signs of a command, total over the catalog's goal features.
inline std::map<std::string, GoalSign> goal_effect(const Catalog& cat, std::string_view capability,
                                                   std::string_view command) {
  const auto& spec = cat.command(capability, command);
  const auto* cap = cat.capability(capability);
  std::map<std::string, GoalSign> out;
  for (const auto& f : cat.goalFeatures()) {
    auto it = spec.goalEffects.find(f);
    out[f] = (it == spec.goalEffects.end() || cap->isVirtual) ? GoalSign::None : it->second;
  }
  return out;
}

/// Environment effects of a command; setpoints are taken from the parameter
/// the channel declares.
inline std::vector<ChannelEffect> channel_effects(const Catalog& cat, std::string_view capability,
                                                  std::string_view command, std::span<const Term> params) {
  const auto& spec = cat.command(capability, command);
  std::vector<ChannelEffect> out;
  for (const auto& ch : spec.channels) {
    ChannelEffect e{ch.feature, ch.direction, std::nullopt};
    if (!ch.setpointParam.empty()) {
      int idx = spec.param_index(ch.setpointParam);
      if (idx >= 0 && static_cast<std::size_t>(idx) < params.size()) e.setpoint = params[idx];
    }
    out.push_back(std::move(e));
  }
  return out;
}

/// The feature an attribute observes: explicit in the catalog, or the
/// attribute's own name when that names a declared feature.
inline std::string attribute_feature(const Catalog& cat, std::string_view capability,
                                     std::string_view attribute) {
  const auto* cap = cat.capability(capability);
  if (!cap) return {};
  const auto* a = cap->attribute(attribute);
  if (!a) return {};
  return a->feature;
}

}  // namespace hg
