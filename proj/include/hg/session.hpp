//===-- session.hpp - Configuration URIs and the home state file -*- C++ -*-===//
//
// A home is one JSON document ("hgstate/1"): installed apps with their bound
// rules, the pairs the user chose to keep, and installs awaiting a decision.
// Writes go to a temporary file that is then renamed over the original.
//
//===----------------------------------------------------------------------===//
#pragma once

#include "hg/detector.hpp"
#include "hg/error.hpp"
#include "hg/rules.hpp"

#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace hg {

//===----------------------------------------------------------------------===//
// Configuration URIs: http://host/appname:<app>/<key>:<value>/.../
//===----------------------------------------------------------------------===//

namespace detail {

inline std::optional<std::string> percent_decode(std::string_view s) {
  std::string out;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] != '%') {
      out += s[i];
      continue;
    }
    if (i + 2 >= s.size()) return std::nullopt;
    auto hex = [](char c) -> int {
      if (c >= '0' && c <= '9') return c - '0';
      if (c >= 'a' && c <= 'f') return c - 'a' + 10;
      if (c >= 'A' && c <= 'F') return c - 'A' + 10;
      return -1;
    };
    int hi = hex(s[i + 1]);
    int lo = hex(s[i + 2]);
    if (hi < 0 || lo < 0) return std::nullopt;
    out += static_cast<char>(hi * 16 + lo);
    i += 2;
  }
  return out;
}

inline bool is_identifier(std::string_view s) {
  if (s.empty() || !(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) return false;
  for (char c : s)
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_')) return false;
  return true;
}

inline std::optional<std::int64_t> parse_int(std::string_view s) {
  if (s.empty()) return std::nullopt;
  std::size_t i = s[0] == '-' ? 1 : 0;
  if (i == s.size()) return std::nullopt;
  for (std::size_t k = i; k < s.size(); ++k)
    if (!std::isdigit(static_cast<unsigned char>(s[k]))) return std::nullopt;
  try {
    std::size_t used = 0;
    long long v = std::stoll(std::string(s), &used);
    if (used != s.size()) return std::nullopt;
    return v;
  } catch (const std::out_of_range&) {
    return std::nullopt;
  }
}

}  // namespace detail

/// Parses a configuration URI. Values of 32 hex digits (dashes allowed)
/// bind devices; integers, true / false and anything else bind inputs.
inline Configuration parse_config_uri(std::string_view uri) {
  auto bad = [&](const std::string& why) { return Error("MalformedUri", why); };
  if (uri.find_first_of("?#") != std::string_view::npos) throw bad("query strings and fragments are not allowed");
  std::string_view rest;
  if (uri.rfind("http://", 0) == 0)
    rest = uri.substr(7);
  else if (uri.rfind("https://", 0) == 0)
    rest = uri.substr(8);
  else
    throw bad("expected an http:// or https:// URI");
  auto slash = rest.find('/');
  if (slash == std::string_view::npos || slash == 0) throw bad("missing host or path");
  for (char c : rest.substr(0, slash))
    if (std::isspace(static_cast<unsigned char>(c))) throw bad("invalid host");
  std::string_view path = rest.substr(slash + 1);
  if (path.empty()) throw Error("MissingAppName", "no appname segment");
  if (path.back() != '/') throw bad("every segment must end with '/'");
  path.remove_suffix(1);

  std::vector<std::string_view> segments;
  std::size_t start = 0;
  while (true) {
    auto next = path.find('/', start);
    segments.push_back(path.substr(start, next == std::string_view::npos ? std::string_view::npos : next - start));
    if (next == std::string_view::npos) break;
    start = next + 1;
  }

  Configuration c;
  bool sawApp = false;
  std::set<std::string> keys;
  for (std::size_t i = 0; i < segments.size(); ++i) {
    auto seg = segments[i];
    if (seg.empty()) throw bad("empty path segment");
    auto colon = seg.find(':');
    if (colon == std::string_view::npos) throw bad("segment '" + std::string(seg) + "' is not key:value");
    std::string key(seg.substr(0, colon));
    std::string_view raw = seg.substr(colon + 1);
    if (raw.find(':') != std::string_view::npos) throw bad("segment '" + std::string(seg) + "' has more than one ':'");
    auto value = detail::percent_decode(raw);
    if (!value) throw bad("bad percent escape in '" + std::string(seg) + "'");
    if (key == "appname") {
      if (i != 0) throw bad("appname must be the first segment");
      if (value->find_first_not_of(" \t") == std::string::npos) throw Error("MissingAppName", "empty app name");
      c.appName = *value;
      sawApp = true;
      continue;
    }
    if (!sawApp) {
      for (auto later : segments)
        if (later.rfind("appname:", 0) == 0) throw bad("appname must be the first segment");
      throw Error("MissingAppName", "the first segment must be appname:<name>");
    }
    if (!detail::is_identifier(key)) throw bad("invalid key '" + key + "'");
    if (value->empty()) throw bad("empty value for '" + key + "'");
    if (!keys.insert(key).second) throw bad("duplicate key '" + key + "'");
    if (auto id = normalize_device_id(*value)) {
      c.devices[key] = *id;
    } else if (auto n = detail::parse_int(*value)) {
      c.values[key] = Value{*n};
    } else if (*value == "true" || *value == "false") {
      c.values[key] = Value{*value == "true"};
    } else {
      c.values[key] = Value{*value};
    }
  }
  if (!sawApp) throw Error("MissingAppName", "no appname segment");
  return c;
}

/// Builds the URI for a configuration; parse_config_uri inverts it.
inline std::string config_uri(const Configuration& c, std::string_view host = "my.com") {
  auto enc = [](const std::string& s) {
    std::string out;
    static constexpr char hex[] = "0123456789ABCDEF";
    for (unsigned char ch : s) {
      if (std::isalnum(ch) || ch == '-' || ch == '_' || ch == '.' || ch == '~') {
        out += static_cast<char>(ch);
      } else {
        out += '%';
        out += hex[ch >> 4];
        out += hex[ch & 15];
      }
    }
    return out;
  };
  std::string out = "http://" + std::string(host) + "/appname:" + enc(c.appName) + "/";
  for (const auto& [k, v] : c.devices) out += k + ":" + v + "/";
  for (const auto& [k, v] : c.values) out += k + ":" + enc(value_text(v)) + "/";
  return out;
}

//===----------------------------------------------------------------------===//
// Home state
//===----------------------------------------------------------------------===//

struct InstalledApp {
  std::string source;
  std::string hash;  // SHA-256 of the source text
  Configuration config;
  RuleSet rules;     // bound
  friend bool operator==(const InstalledApp&, const InstalledApp&) = default;
};

struct PendingInstall {
  std::string app;
  InstalledApp entry;
  std::vector<Finding> findings;
  friend bool operator==(const PendingInstall&, const PendingInstall&) = default;
};

struct HomeState {
  std::map<std::string, InstalledApp> apps;
  std::vector<AllowedPair> allowed;
  std::map<std::string, PendingInstall> pending;    // decision id -> install
  std::map<std::string, nlohmann::json> reports;  // decision id -> report
  friend bool operator==(const HomeState&, const HomeState&) = default;

  /// Installed rules by id.
  std::map<std::string, const Rule*> rule_index() const {
    std::map<std::string, const Rule*> out;
    for (const auto& [name, app] : apps)
      for (const auto& r : app.rules.rules) out[r.id] = &r;
    return out;
  }
};

using Clock = std::function<std::string()>;

inline std::string utc_now() {
  auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

/// Every kept pair must name installed rules.
inline void check_integrity(const HomeState& s) {
  auto rules = s.rule_index();
  for (const auto& a : s.allowed)
    if (!rules.count(a.ruleA) || !rules.count(a.ruleB))
      throw Error("IntegrityViolation", "allowed pair " + a.ruleA + "/" + a.ruleB + " references a rule that is not installed");
}

/// Installs or replaces an app. Kept pairs whose rules disappeared are dropped.
inline HomeState record_install(HomeState s, const std::string& app, InstalledApp entry) {
  s.apps[app] = std::move(entry);
  auto rules = s.rule_index();
  std::erase_if(s.allowed, [&](const AllowedPair& a) { return !rules.count(a.ruleA) || !rules.count(a.ruleB); });
  check_integrity(s);
  return s;
}

enum class Choice { Keep, Reject };

inline Choice parse_choice(std::string_view s) {
  if (s == "keep") return Choice::Keep;
  if (s == "reject") return Choice::Reject;
  throw Error("InvalidChoice", "decision must be 'keep' or 'reject', got '" + std::string(s) + "'");
}

/// Applies the user's decision on a pending install. Keeping installs the app
/// and records every pairwise finding as allowed; rejecting changes nothing.
inline HomeState record_decision(HomeState s, const std::string& decisionId, Choice choice,
                                 const std::string& decidedBy, const Clock& clock = utc_now) {
  auto it = s.pending.find(decisionId);
  if (it == s.pending.end()) throw Error("UnknownDecisionId", decisionId);
  PendingInstall p = std::move(it->second);
  s.pending.erase(it);
  if (choice == Choice::Reject) return s;

  HomeState next = record_install(s, p.app, p.entry);
  auto rules = next.rule_index();
  std::string now = clock();
  for (const auto& f : p.findings) {
    if (f.rules.size() != 2 || f.kind == FindingKind::CHAIN || f.kind == FindingKind::Indeterminate) continue;
    if (!rules.count(f.rules[0]) || !rules.count(f.rules[1]))
      throw Error("StaleFinding", std::string(kind_name(f.kind)) + " " + f.rules[0] + "/" + f.rules[1] +
                                      " references a rule that is no longer installed");
    AllowedPair a{f.rules[0], f.rules[1], kind_name(f.kind), now, decidedBy};
    bool dup = std::any_of(next.allowed.begin(), next.allowed.end(), [&](const AllowedPair& x) {
      return x.ruleA == a.ruleA && x.ruleB == a.ruleB && x.kind == a.kind;
    });
    if (!dup) next.allowed.push_back(std::move(a));
  }
  check_integrity(next);
  return next;
}

//===----------------------------------------------------------------------===//
// Persistence
//===----------------------------------------------------------------------===//

inline nlohmann::json to_json(const InstalledApp& a) {
  return {{"source", a.source}, {"hash", a.hash}, {"config", to_json(a.config)}, {"rules", to_json(a.rules)}};
}

inline InstalledApp installed_from_json(const nlohmann::json& j) {
  return {j.at("source").get<std::string>(), j.at("hash").get<std::string>(), configuration_from_json(j.at("config")),
          ruleset_from_json(j.at("rules"))};
}

inline nlohmann::json to_json(const HomeState& s) {
  nlohmann::json j;
  j["schema"] = "hgstate/1";
  j["apps"] = nlohmann::json::object();
  for (const auto& [name, app] : s.apps) j["apps"][name] = to_json(app);
  j["allowed"] = nlohmann::json::array();
  for (const auto& a : s.allowed)
    j["allowed"].push_back(
        {{"ruleA", a.ruleA}, {"ruleB", a.ruleB}, {"kind", a.kind}, {"decidedAt", a.decidedAt}, {"decidedBy", a.decidedBy}});
  j["pending"] = nlohmann::json::object();
  for (const auto& [id, p] : s.pending) {
    nlohmann::json x = to_json(p.entry);
    x["app"] = p.app;
    x["findings"] = nlohmann::json::array();
    for (const auto& f : p.findings) x["findings"].push_back(to_json(f));
    j["pending"][id] = x;
  }
  j["reports"] = nlohmann::json::object();
  for (const auto& [id, r] : s.reports) j["reports"][id] = r;
  return j;
}

inline HomeState home_from_json(const nlohmann::json& j) {
  try {
    if (!j.is_object() || j.value("schema", "") != "hgstate/1")
      throw Error("SchemaViolation", "home state schema must be \"hgstate/1\"");
    HomeState s;
    for (const auto& [name, app] : j.at("apps").items()) s.apps[name] = installed_from_json(app);
    for (const auto& a : j.at("allowed"))
      s.allowed.push_back({a.at("ruleA").get<std::string>(), a.at("ruleB").get<std::string>(), a.at("kind").get<std::string>(),
                           a.at("decidedAt").get<std::string>(), a.at("decidedBy").get<std::string>()});
    for (const auto& [id, x] : j.at("pending").items()) {
      PendingInstall p;
      p.app = x.at("app").get<std::string>();
      p.entry = installed_from_json(x);
      for (const auto& f : x.at("findings")) p.findings.push_back(finding_from_json(f));
      s.pending[id] = std::move(p);
    }
    if (j.contains("reports"))
      for (const auto& [id, r] : j.at("reports").items()) s.reports[id] = r;
    check_integrity(s);
    return s;
  } catch (const nlohmann::json::exception& e) {
    throw Error("SchemaViolation", std::string("home state: ") + e.what());
  }
}

inline std::string serialize(const HomeState& s) { return to_json(s).dump(2) + "\n"; }

inline HomeState load_home(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) return {};
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(ss.str());
  } catch (const nlohmann::json::exception& e) {
    throw Error("SchemaViolation", path.string() + ": " + e.what());
  }
  return home_from_json(j);
}

inline void write_atomically(const std::filesystem::path& path, const std::string& bytes) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("IoError", "cannot write " + tmp.string());
    out << bytes;
    out.flush();
    if (!out) throw Error("IoError", "short write to " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

inline void save_home(const std::filesystem::path& path, const HomeState& s) { write_atomically(path, serialize(s)); }

}  // namespace hg
