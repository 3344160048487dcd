//===-- service.hpp - Install pipeline and threat reports -------*- C++ -*-===//
//
// parse -> validate -> extract -> bind -> detect -> chains. Every failure is
// reported in the "errors" section of the report with the stage it came
// from. A successful run leaves the install pending until the user keeps or
// rejects it.
//
//===----------------------------------------------------------------------===//
#pragma once

#include "hg/catalog.hpp"
#include "hg/detector.hpp"
#include "hg/parser.hpp"
#include "hg/rules.hpp"
#include "hg/session.hpp"
#include "hg/symex.hpp"
#include "hg/validate.hpp"

#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace hg {

/// Extracted (unbound) rule sets keyed by the hash of source and catalog.
/// With a directory, entries persist as rule files across runs.
class RuleCache {
 public:
  explicit RuleCache(std::optional<std::filesystem::path> dir = std::nullopt) : dir_(std::move(dir)) {
    if (dir_) std::filesystem::create_directories(*dir_);
  }

  std::optional<RuleSet> get(const std::string& key) {
    std::lock_guard lock(mu_);
    if (auto it = mem_.find(key); it != mem_.end()) {
      ++hits_;
      return it->second;
    }
    if (dir_) {
      auto path = *dir_ / (key + ".json");
      if (std::filesystem::exists(path)) {
        std::ifstream in(path, std::ios::binary);
        std::stringstream ss;
        ss << in.rdbuf();
        try {
          RuleSet rs = deserialize(ss.str());
          mem_[key] = rs;
          ++hits_;
          return rs;
        } catch (const Error&) {
          // A corrupt entry is re-extracted and overwritten.
        }
      }
    }
    return std::nullopt;
  }

  void put(const std::string& key, const RuleSet& rs) {
    std::lock_guard lock(mu_);
    mem_[key] = rs;
    if (dir_) write_atomically(*dir_ / (key + ".json"), serialize(rs));
  }

  std::size_t hits() const { return hits_; }

 private:
  std::optional<std::filesystem::path> dir_;
  std::map<std::string, RuleSet> mem_;
  std::mutex mu_;
  std::size_t hits_ = 0;
};

struct ServiceOptions {
  std::filesystem::path home;  // empty: in memory only
  std::optional<std::filesystem::path> cacheDir;
  DetectOptions detect;
  Clock clock = utc_now;
  std::string decidedBy = "homeowner";
};

class Service {
 public:
  Service(const Catalog& cat, std::string catalogFingerprint, ServiceOptions opts)
      : cat_(cat), catalogHash_(std::move(catalogFingerprint)), opts_(std::move(opts)), cache_(opts_.cacheDir) {
    if (!opts_.home.empty()) state_ = load_home(opts_.home);
  }

  /// Runs the pipeline for {"source", "configUri" | "config"}.
  nlohmann::json install(const nlohmann::json& request) {
    std::lock_guard lock(mu_);
    Report rep;
    std::string source;
    std::optional<Configuration> config;
    try {
      if (!request.is_object() || !request.contains("source") || !request.at("source").is_string())
        throw Error("InvalidRequest", "request needs a string 'source'");
      bool hasUri = request.contains("configUri");
      bool hasConfig = request.contains("config");
      if (hasUri == hasConfig) throw Error("InvalidRequest", "exactly one of 'configUri' and 'config' is required");
      source = request.at("source").get<std::string>();
      config = hasUri ? parse_config_uri(request.at("configUri").get<std::string>())
                      : configuration_from_json(request.at("config"));
    } catch (const Error& e) {
      rep.error("request", e.code(), e.what());
      return rep.json;
    } catch (const nlohmann::json::exception& e) {
      rep.error("request", "InvalidRequest", e.what());
      return rep.json;
    }
    return run(source, *config, rep);
  }

  nlohmann::json install(const std::string& source, const Configuration& config) {
    std::lock_guard lock(mu_);
    Report rep;
    return run(source, config, rep);
  }

  /// Applies keep / reject to a pending install.
  nlohmann::json decide(const std::string& decisionId, const std::string& choice) {
    std::lock_guard lock(mu_);
    Choice c = parse_choice(choice);
    auto it = state_.pending.find(decisionId);
    if (it == state_.pending.end()) throw Error("UnknownDecisionId", decisionId);
    std::string app = it->second.app;
    HomeState next = record_decision(state_, decisionId, c, opts_.decidedBy, opts_.clock);
    commit(std::move(next));
    return {{"decisionId", decisionId}, {"choice", choice}, {"app", app},
            {"installed", state_.apps.count(app) != 0}, {"allowed", state_.allowed.size()}};
  }

  nlohmann::json home_summary() {
    std::lock_guard lock(mu_);
    nlohmann::json j;
    j["schema"] = "hgstate/1";
    j["apps"] = nlohmann::json::array();
    for (const auto& [name, app] : state_.apps) {
      nlohmann::json rules = nlohmann::json::array();
      for (const auto& r : app.rules.rules) rules.push_back({{"id", r.id}, {"text", render_rule(r, app.rules.binding)}});
      j["apps"].push_back({{"name", name}, {"hash", app.hash}, {"rules", rules}});
    }
    j["allowed"] = nlohmann::json::array();
    for (const auto& a : state_.allowed) j["allowed"].push_back({{"ruleA", a.ruleA}, {"ruleB", a.ruleB}, {"kind", a.kind}});
    j["pending"] = nlohmann::json::array();
    for (const auto& [id, p] : state_.pending) j["pending"].push_back({{"decisionId", id}, {"app", p.app}});
    return j;
  }

  std::optional<nlohmann::json> rules(const std::string& app) {
    std::lock_guard lock(mu_);
    auto it = state_.apps.find(app);
    if (it == state_.apps.end()) return std::nullopt;
    return to_json(it->second.rules);
  }

  std::optional<nlohmann::json> report(const std::string& decisionId) {
    std::lock_guard lock(mu_);
    auto it = state_.reports.find(decisionId);
    if (it == state_.reports.end()) return std::nullopt;
    return it->second;
  }

  HomeState state() {
    std::lock_guard lock(mu_);
    return state_;
  }

  /// Replaces the home state (used by tests and tools that edit the ledger).
  void reset(HomeState s) {
    std::lock_guard lock(mu_);
    commit(std::move(s));
  }

  RuleCache& cache() { return cache_; }

  /// Rules of `source`, from the cache when possible. Throws on invalid source.
  RuleSet extract(const std::string& source, std::vector<Diagnostic>* diags = nullptr) {
    std::string key = sha256_hex(catalogHash_ + "\n" + source);
    if (auto hit = cache_.get(key)) return *hit;
    auto parsed = parse(source);
    if (!parsed.ok()) {
      if (diags) *diags = parsed.diagnostics;
      throw Error("SyntaxError", "parse failed");
    }
    auto v = validate(*parsed.unit, cat_);
    if (has_errors(v)) {
      if (diags) *diags = v;
      throw Error("ValidationFailed", "validation failed");
    }
    RuleSet rs = extract_rules(*parsed.unit, cat_);
    cache_.put(key, rs);
    return rs;
  }

 private:
  struct Report {
    nlohmann::json json = {{"schema", "hgthreat/1"},
                           {"app", nullptr},
                           {"decisionId", nullptr},
                           {"rules", nlohmann::json::array()},
                           {"renderedRules", nlohmann::json::array()},
                           {"findings", nlohmann::json::array()},
                           {"chains", nlohmann::json::array()},
                           {"errors", nlohmann::json::array()},
                           {"pendingDecisionIds", nlohmann::json::array()}};

    void error(const std::string& stage, const std::string& code, const std::string& msg, int line = 0, int col = 0) {
      nlohmann::json e = {{"stage", stage}, {"code", code}, {"message", msg}};
      e["line"] = line ? nlohmann::json(line) : nlohmann::json(nullptr);
      e["column"] = col ? nlohmann::json(col) : nlohmann::json(nullptr);
      json["errors"].push_back(std::move(e));
    }
  };

  void commit(HomeState next) {
    state_ = std::move(next);
    if (!opts_.home.empty()) save_home(opts_.home, state_);
  }

  nlohmann::json run(const std::string& source, const Configuration& config, Report& rep) {
    rep.json["app"] = config.appName;
    std::vector<Diagnostic> diags;
    RuleSet unbound;
    try {
      unbound = extract(source, &diags);
    } catch (const Error& e) {
      std::string stage = e.code() == "SyntaxError" ? "parse" : e.code() == "ValidationFailed" ? "validate" : "extract";
      if (diags.empty()) rep.error(stage, e.code(), e.what());
      for (const auto& d : diags)
        if (d.is_error()) rep.error(stage, d.code, d.message, d.location.begin.line, d.location.begin.column);
      return finish(rep);
    }
    RuleSet bound;
    try {
      bound = bind_configuration(unbound, config);
    } catch (const Error& e) {
      rep.error("bind", e.code(), e.what());
      return finish(rep);
    }
    for (const auto& r : bound.rules) {
      std::string text = render_rule(r, bound.binding);
      rep.json["rules"].push_back({{"id", r.id}, {"text", text}});
      rep.json["renderedRules"].push_back(text);
    }

    // Pairs: new x installed (other apps) and new x new.
    std::vector<const Rule*> installed;
    for (const auto& [name, app] : state_.apps)
      if (name != bound.app)
        for (const auto& r : app.rules.rules) installed.push_back(&r);
    std::vector<Finding> findings;
    // A failing pair is reported and the rest still run.
    auto check = [&](const Rule& a, const Rule& b) {
      try {
        for (auto& f : detect_pair(a, b, cat_, opts_.detect)) findings.push_back(std::move(f));
      } catch (const Error& e) {
        rep.error("detect", e.code(), a.id + " x " + b.id + ": " + e.what());
      }
    };
    for (std::size_t i = 0; i < bound.rules.size(); ++i) {
      for (const Rule* o : installed) check(bound.rules[i], *o);
      for (std::size_t k = i + 1; k < bound.rules.size(); ++k) check(bound.rules[i], bound.rules[k]);
    }
    std::stable_sort(findings.begin(), findings.end(), [](const Finding& a, const Finding& b) {
      if (a.kind != b.kind) return a.kind < b.kind;
      return a.rules < b.rules;
    });
    for (const auto& f : findings) rep.json["findings"].push_back(to_json(f));

    std::map<std::string, const Rule*> all;
    for (const Rule* r : installed) all[r->id] = r;
    for (const auto& r : bound.rules) all[r.id] = &r;
    std::vector<AllowedPair> allowed;
    for (const auto& a : state_.allowed)
      if (all.count(a.ruleA) && all.count(a.ruleB)) allowed.push_back(a);
    try {
      for (const auto& c : detect_chains(findings, allowed, all, cat_, opts_.detect.maxChainLen))
        rep.json["chains"].push_back(to_json(c));
    } catch (const Error& e) {
      rep.error("chains", e.code(), e.what());
    }

    InstalledApp entry{source, sha256_hex(source), config, bound};
    std::string id = decision_id(entry);
    rep.json["decisionId"] = id;
    HomeState next = state_;
    next.pending[id] = {bound.app, entry, findings};
    nlohmann::json out = finish(rep, &next);
    next.reports[id] = out;
    commit(std::move(next));
    return out;
  }

  nlohmann::json finish(Report& rep, const HomeState* next = nullptr) {
    const HomeState& s = next ? *next : state_;
    for (const auto& [pid, p] : s.pending) rep.json["pendingDecisionIds"].push_back(pid);
    return rep.json;
  }

  // Same request against the same home gives the same id.
  std::string decision_id(const InstalledApp& entry) const {
    nlohmann::json basis = {{"app", entry.rules.app}, {"hash", entry.hash}, {"config", to_json(entry.config)}};
    for (const auto& [name, app] : state_.apps) basis["home"][name] = app.hash + ":" + to_json(app.config).dump();
    return sha256_hex(basis.dump()).substr(0, 16);
  }

  const Catalog& cat_;
  std::string catalogHash_;
  ServiceOptions opts_;
  RuleCache cache_;
  HomeState state_;
  std::mutex mu_;
};

}  // namespace hg
