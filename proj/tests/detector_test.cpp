#include "support.hpp"

#include <random>

using namespace hg;

namespace {

using Key = std::tuple<std::string, std::vector<std::string>>;

struct Installed {
  std::vector<RuleSet> sets;

  const Rule& rule(const std::string& app, std::size_t i = 0) const {
    for (const auto& rs : sets)
      if (rs.app == app) return rs.rules.at(i);
    throw std::out_of_range(app);
  }

  std::vector<const Rule*> all() const {
    std::vector<const Rule*> out;
    for (const auto& rs : sets)
      for (const auto& r : rs.rules) out.push_back(&r);
    return out;
  }
};

Installed load(const std::string& dir, const std::vector<std::string>& apps) {
  Installed h;
  for (const auto& a : apps) h.sets.push_back(hgtest::fixture(dir, a));
  return h;
}

// Every cross-app pair once; problems are captured so witnesses can be rechecked.
std::vector<Finding> detect_all(const Installed& h, std::vector<Problem>* problems = nullptr) {
  DetectOptions opts;
  if (problems) opts.onProblem = [&](const std::string&, const Problem& p) { problems->push_back(p); };
  auto rules = h.all();
  std::vector<Finding> out;
  for (std::size_t i = 0; i < rules.size(); ++i)
    for (std::size_t j = i + 1; j < rules.size(); ++j) {
      if (rules[i]->app == rules[j]->app) continue;
      auto fs = detect_pair(*rules[i], *rules[j], default_catalog(), opts);
      out.insert(out.end(), fs.begin(), fs.end());
    }
  return out;
}

std::set<std::tuple<std::string, std::vector<std::string>>> by_app(const std::vector<Finding>& fs) {
  std::set<std::tuple<std::string, std::vector<std::string>>> out;
  for (const auto& f : fs) out.insert({kind_name(f.kind), f.apps});
  return out;
}

bool witnessed(const Finding& f, const std::vector<Problem>& problems) {
  if (!f.witness) return false;
  return std::any_of(problems.begin(), problems.end(), [&](const Problem& p) {
    for (const auto& [k, v] : *f.witness)
      if (std::none_of(p.vars.begin(), p.vars.end(), [&](const auto& var) { return var.name == k; })) return false;
    return f.witness->size() == p.vars.size() && check_witness(p, *f.witness);
  });
}

void expect_containment(const std::vector<Finding>& fs) {
  auto keys = hgtest::kinds_of(fs);
  for (const auto& f : fs) {
    if (f.kind == FindingKind::SD) EXPECT_TRUE(keys.count({"CT", f.rules})) << f.explanation;
    if (f.kind == FindingKind::LT) {
      EXPECT_TRUE(keys.count({"CT", {f.rules[0], f.rules[1]}}));
      EXPECT_TRUE(keys.count({"CT", {f.rules[1], f.rules[0]}}));
    }
  }
}

}  // namespace

TEST(Detector, CanonicalHomeFindsExactlyTheExpectedSet) {
  auto h = load("canonical", {"ColdDefender", "CatchLiveShow", "ComfortTV", "BurglarFinder", "NightCare"});
  std::vector<Problem> problems;
  auto fs = detect_all(h, &problems);
  using S = std::vector<std::string>;
  std::set<std::tuple<std::string, S>> want = {
      {"AR", S{"ColdDefender", "ComfortTV"}},
      {"CT", S{"CatchLiveShow", "ColdDefender"}},
      {"CT", S{"CatchLiveShow", "ComfortTV"}},
      {"DC", S{"NightCare", "BurglarFinder"}},
  };
  EXPECT_EQ(by_app(fs), want);
  EXPECT_EQ(fs.size(), want.size());
  for (const auto& f : fs) EXPECT_EQ(witnessed(f, problems), f.kind != FindingKind::DC) << f.explanation;

  const Finding& ar = *std::find_if(fs.begin(), fs.end(), [](const Finding& f) { return f.kind == FindingKind::AR; });
  EXPECT_EQ(ar.witness->at("env.temperature"), Value{std::int64_t{31}});
}

TEST(Detector, CategoryFixtures) {
  struct Case {
    std::vector<std::string> apps;
    std::set<std::string> kinds;
  };
  std::vector<Case> cases = {
      {{"WarmWelcome", "DaylightShade"}, {"GC"}},
      {{"CoolOnMotion", "PowerSaver"}, {"CT", "SD"}},
      {{"LightsOnWhenDark", "LightsOffWhenBright"}, {"CT", "SD", "LT"}},
      {{"BurglarFinder", "NightPath"}, {"EC"}},
  };
  for (const auto& c : cases) {
    auto h = load("categories", c.apps);
    std::vector<Problem> problems;
    auto fs = detect_all(h, &problems);
    std::set<std::string> kinds;
    for (const auto& f : fs) {
      kinds.insert(kind_name(f.kind));
      EXPECT_EQ(witnessed(f, problems), f.kind != FindingKind::DC) << kind_name(f.kind) << " " << f.explanation;
    }
    EXPECT_EQ(kinds, c.kinds) << c.apps[0] << " + " << c.apps[1];
    expect_containment(fs);
  }
}

TEST(Detector, EnablingConditionPointsFromTheEnabler) {
  auto h = load("categories", {"BurglarFinder", "NightPath"});
  auto fs = detect_all(h);
  ASSERT_EQ(fs.size(), 1u);
  EXPECT_EQ(fs[0].apps, (std::vector<std::string>{"NightPath", "BurglarFinder"}));
  EXPECT_TRUE(fs[0].directed());
}

TEST(Detector, LoopNeedsBothDirections) {
  auto h = load("categories", {"LightsOnWhenDark", "LightsOffWhenBright"});
  auto fs = detect_all(h);
  int ct = 0, sd = 0, lt = 0;
  for (const auto& f : fs) {
    ct += f.kind == FindingKind::CT;
    sd += f.kind == FindingKind::SD;
    lt += f.kind == FindingKind::LT;
  }
  EXPECT_EQ(ct, 2);
  EXPECT_EQ(sd, 2);
  EXPECT_EQ(lt, 1);
}

TEST(Detector, SkippedRulesProduceNothing) {
  auto h = load("canonical", {"ColdDefender", "ComfortTV"});
  Rule a = h.rule("ColdDefender");
  Rule b = h.rule("ComfortTV");
  ASSERT_FALSE(detect_pair(a, b, default_catalog()).empty());
  a.flags.insert(kFlagUnsatisfiable);
  EXPECT_TRUE(detect_pair(a, b, default_catalog()).empty());
  a.flags = {kFlagOnUninstall};
  EXPECT_TRUE(detect_pair(a, b, default_catalog()).empty());
  EXPECT_TRUE(detect_pair(b, b, default_catalog()).empty());
}

TEST(Detector, BudgetExhaustionIsIndeterminate) {
  auto h = load("canonical", {"ColdDefender", "ComfortTV"});
  DetectOptions opts;
  opts.budget = 0;
  auto fs = detect_pair(h.rule("ColdDefender"), h.rule("ComfortTV"), default_catalog(), opts);
  ASSERT_FALSE(fs.empty());
  for (const auto& f : fs) EXPECT_EQ(f.kind, FindingKind::Indeterminate);
}

TEST(Detector, ChainsUseKeptEdges) {
  auto h = load("chain", {"CurlingIron", "SwitchChangesMode", "MakeItSo"});
  std::map<std::string, const Rule*> rules;
  for (const Rule* r : h.all()) rules[r->id] = r;
  const Rule& iron = h.rule("CurlingIron");
  const Rule& mode = h.rule("SwitchChangesMode");
  const Rule& door = h.rule("MakeItSo");

  auto e1 = detect_pair(iron, mode, default_catalog());
  auto e2 = detect_pair(mode, door, default_catalog());
  ASSERT_TRUE(hgtest::kinds_of(e1).count({"CT", {iron.id, mode.id}}));
  ASSERT_TRUE(hgtest::kinds_of(e2).count({"CT", {mode.id, door.id}}));

  // Nothing kept yet: the older edge is unknown, so no chain.
  EXPECT_TRUE(detect_chains(e2, {}, rules, default_catalog()).empty());

  std::vector<AllowedPair> kept = {{iron.id, mode.id, "CT", "2026-01-01T00:00:00Z", "homeowner"}};
  auto chains = detect_chains(e2, kept, rules, default_catalog());
  ASSERT_EQ(chains.size(), 1u);
  EXPECT_EQ(chains[0].rules, (std::vector<std::string>{iron.id, mode.id, door.id}));
  EXPECT_EQ(chains[0].covertRule, "unlocks a door when motion is detected");

  // Only old edges: nothing new to report.
  kept.push_back({mode.id, door.id, "CT", "2026-01-01T00:00:00Z", "homeowner"});
  EXPECT_TRUE(detect_chains({}, kept, rules, default_catalog()).empty());

  EXPECT_THROW(detect_chains(e2, kept, rules, default_catalog(), 2), Error);
}

TEST(Detector, ChainSearchIsBounded) {
  // A complete graph on 40 rules has far more than 10000 short paths.
  auto h = load("canonical", {"ComfortTV"});
  std::vector<Rule> copies(40, h.rule("ComfortTV"));
  std::map<std::string, const Rule*> rules;
  for (std::size_t i = 0; i < copies.size(); ++i) {
    copies[i].id = "r" + std::to_string(i);
    rules[copies[i].id] = &copies[i];
  }
  std::vector<AllowedPair> kept;
  for (const auto& a : copies)
    for (const auto& b : copies)
      if (a.id != b.id) kept.push_back({a.id, b.id, "CT", "", ""});
  Finding fresh;
  fresh.kind = FindingKind::CT;
  fresh.rules = {"r0", "r1"};
  try {
    detect_chains({fresh}, kept, rules, default_catalog());
    ADD_FAILURE() << "no budget error";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), "ChainBudgetExceeded");
  }
}

TEST(Detector, FindingJsonRoundTrip) {
  auto h = load("canonical", {"ColdDefender", "CatchLiveShow", "ComfortTV", "BurglarFinder", "NightCare"});
  auto fs = detect_all(h);
  ASSERT_FALSE(fs.empty());
  for (const auto& f : fs) {
    auto j = to_json(f);
    EXPECT_EQ(finding_from_json(j), f) << j.dump();
    EXPECT_EQ(j["direction"].is_null(), !f.directed());
  }
  EXPECT_THROW(finding_from_json(nlohmann::json{{"kind", "XX"}, {"rules", nlohmann::json::array()}}), Error);
}

// Properties over random bound programs whose devices overlap: findings do
// not depend on argument order, SD / LT sit inside CT, and every witness
// satisfies the problem that produced it.
TEST(DetectorProperty, SymmetryContainmentWitnesses) {
  const std::vector<std::string> switches = {"5a000000000000000000000000000001", "5a000000000000000000000000000002"};
  std::mt19937 rng(99);
  auto pick = [&](int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng); };
  std::vector<RuleSet> sets;
  for (std::uint32_t seed = 1; sets.size() < 40 && seed < 400; ++seed) {
    hgtest::ProgramGen gen(seed);
    RuleSet rs;
    try {
      rs = hgtest::extract(gen.program(seed % 3 == 0));
    } catch (const Error&) {
      continue;
    }
    Configuration cfg;
    cfg.appName = "Random";
    cfg.devices = {{"sw1", switches[pick(2)]},
                   {"sw2", switches[pick(2)]},
                   {"temp", "7e000000000000000000000000000001"},
                   {"lvl", "1e000000000000000000000000000001"}};
    cfg.values = {{"n1", Value{std::int64_t(pick(10))}},
                  {"s1", Value{std::string("home")}},
                  {"b1", Value{pick(2) == 1}},
                  {"e1", Value{std::string("a")}}};
    rs = bind_configuration(rs, cfg);
    rs.app = "Random" + std::to_string(seed);
    for (auto& r : rs.rules) r.app = rs.app;
    sets.push_back(std::move(rs));
  }
  ASSERT_GE(sets.size(), 30u);

  std::size_t pairs = 0, findings = 0;
  for (std::size_t i = 0; i < sets.size(); ++i)
    for (std::size_t j = i + 1; j < sets.size(); ++j)
      for (const auto& a : sets[i].rules)
        for (const auto& b : sets[j].rules) {
          std::vector<Problem> problems;
          DetectOptions opts;
          opts.onProblem = [&](const std::string&, const Problem& p) { problems.push_back(p); };
          auto ab = detect_pair(a, b, default_catalog(), opts);
          auto ba = detect_pair(b, a, default_catalog());
          ASSERT_EQ(ab, ba);
          expect_containment(ab);
          for (const auto& f : ab)
            if (f.kind == FindingKind::DC)
              EXPECT_FALSE(f.witness);
            else if (f.kind != FindingKind::Indeterminate)
              EXPECT_TRUE(witnessed(f, problems)) << f.explanation;
          ++pairs;
          findings += ab.size();
        }
  EXPECT_GT(pairs, 500u);
  EXPECT_GT(findings, 20u);
}
