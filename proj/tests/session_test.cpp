#include "support.hpp"

#include <fstream>

using namespace hg;

namespace {

std::string error_code(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return "no error";
}

struct MalformedUri {
  std::string code;
  std::string uri;
};

std::vector<MalformedUri> malformed_uris() {
  std::vector<MalformedUri> out;
  std::istringstream in(hgtest::read_file(hgtest::corpus("malformed/uris.txt")));
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    auto tab = line.find('\t');
    std::string uri = line.substr(tab + 1);
    out.push_back({line.substr(0, tab), uri == "\"\"" ? "" : uri});
  }
  return out;
}

InstalledApp entry(const RuleSet& rs, const std::string& hash) {
  Configuration cfg;
  cfg.appName = rs.app;
  return {"source of " + rs.app, hash, cfg, rs};
}

const Clock kFixedClock = [] { return std::string("2026-03-01T12:00:00Z"); };

// ComfortTV pending against an installed ColdDefender, with the AR finding between them.
HomeState pending_comfort_tv() {
  auto cold = hgtest::fixture("canonical", "ColdDefender");
  auto tv = hgtest::fixture("canonical", "ComfortTV");
  HomeState s = record_install({}, "ColdDefender", entry(cold, "h1"));
  PendingInstall p{"ComfortTV", entry(tv, "h2"), detect_pair(cold.rules[0], tv.rules[0], default_catalog())};
  EXPECT_FALSE(p.findings.empty());
  s.pending["d1"] = std::move(p);
  return s;
}

std::filesystem::path temp_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("hg-session-" + name + "-" + std::to_string(::getpid()));
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace

TEST(ConfigUri, CanonicalFixturesParse) {
  for (const char* app : {"ColdDefender", "CatchLiveShow", "ComfortTV", "BurglarFinder", "NightCare"}) {
    auto uri = hgtest::trim(hgtest::read_file(hgtest::corpus(std::string("canonical/") + app + ".uri")));
    auto cfg = parse_config_uri(uri);
    EXPECT_EQ(cfg.appName, app);
    EXPECT_FALSE(cfg.devices.empty());
  }
  auto cfg = parse_config_uri(hgtest::trim(hgtest::read_file(hgtest::corpus("canonical/ComfortTV.uri"))));
  EXPECT_EQ(cfg.devices.at("tv1"), "0e0b6f3c9a2d4e51b7c8d9e0f1a2741b");
  EXPECT_EQ(cfg.values.at("threshold1"), Value{std::int64_t{30}});
}

TEST(ConfigUri, MalformedCorpus) {
  auto cases = malformed_uris();
  ASSERT_GE(cases.size(), 20u);
  for (const auto& c : cases) EXPECT_EQ(error_code([&] { parse_config_uri(c.uri); }), c.code) << "'" << c.uri << "'";
}

TEST(ConfigUri, ValueKinds) {
  auto cfg = parse_config_uri("http://my.com/appname:X/n:-7/b:true/s:hello%20world/d:0E0B6F3C-9A2D-4E51-B7C8-D9E0F1A2741B/");
  EXPECT_EQ(cfg.values.at("n"), Value{std::int64_t{-7}});
  EXPECT_EQ(cfg.values.at("b"), Value{true});
  EXPECT_EQ(cfg.values.at("s"), Value{std::string("hello world")});
  EXPECT_EQ(cfg.devices.at("d"), "0e0b6f3c9a2d4e51b7c8d9e0f1a2741b");
}

// Property: printing a configuration and reading it back is lossless.
TEST(ConfigUriProperty, RoundTrip) {
  std::vector<Configuration> cfgs;
  for (const auto& e : std::filesystem::recursive_directory_iterator(hgtest::corpus("")))
    if (e.path().extension() == ".uri") cfgs.push_back(parse_config_uri(hgtest::trim(hgtest::read_file(e.path()))));
  Configuration odd;
  odd.appName = "Odd";
  odd.values = {{"msg", Value{std::string("a/b:c %d é")}}, {"neg", Value{std::int64_t{-12}}}, {"flag", Value{false}}};
  cfgs.push_back(odd);
  ASSERT_GE(cfgs.size(), 15u);
  for (const auto& c : cfgs) {
    std::string uri = config_uri(c);
    EXPECT_EQ(parse_config_uri(uri), c) << uri;
    EXPECT_EQ(config_uri(parse_config_uri(uri)), uri);
  }
}

TEST(Session, KeepInstallsAndRecordsPairs) {
  HomeState s = pending_comfort_tv();
  HomeState next = record_decision(s, "d1", Choice::Keep, "homeowner", kFixedClock);
  EXPECT_TRUE(next.apps.count("ComfortTV"));
  EXPECT_TRUE(next.pending.empty());
  ASSERT_FALSE(next.allowed.empty());
  for (const auto& a : next.allowed) {
    EXPECT_EQ(a.decidedAt, "2026-03-01T12:00:00Z");
    EXPECT_EQ(a.decidedBy, "homeowner");
  }
  // The input state is untouched.
  EXPECT_EQ(s.pending.size(), 1u);
}

TEST(Session, RejectChangesNothingButThePendingEntry) {
  HomeState s = pending_comfort_tv();
  HomeState next = record_decision(s, "d1", Choice::Reject, "homeowner", kFixedClock);
  EXPECT_FALSE(next.apps.count("ComfortTV"));
  EXPECT_TRUE(next.allowed.empty());
  EXPECT_TRUE(next.pending.empty());
  EXPECT_EQ(error_code([&] { record_decision(next, "d1", Choice::Keep, "homeowner"); }), "UnknownDecisionId");
  EXPECT_EQ(error_code([] { parse_choice("maybe"); }), "InvalidChoice");
}

TEST(Session, FindingsAgainstReplacedRulesAreStale) {
  HomeState s = pending_comfort_tv();
  // ColdDefender is reinstalled with different content before the decision.
  auto cold = hgtest::fixture("canonical", "ColdDefender");
  cold.rules[0].action.command = "on";
  finalize(cold.rules[0]);
  s = record_install(s, "ColdDefender", entry(cold, "h3"));
  EXPECT_EQ(error_code([&] { record_decision(s, "d1", Choice::Keep, "homeowner"); }), "StaleFinding");
}

TEST(Session, ReplacingAnAppDropsItsKeptPairs) {
  HomeState s = record_decision(pending_comfort_tv(), "d1", Choice::Keep, "homeowner", kFixedClock);
  ASSERT_FALSE(s.allowed.empty());
  auto tv = hgtest::fixture("canonical", "ComfortTV");
  tv.rules[0].action.command = "off";
  finalize(tv.rules[0]);
  s = record_install(s, "ComfortTV", entry(tv, "h4"));
  EXPECT_TRUE(s.allowed.empty());
}

TEST(Session, IntegrityIsChecked) {
  HomeState s;
  s.allowed.push_back({"aaaa", "bbbb", "CT", "", ""});
  EXPECT_EQ(error_code([&] { check_integrity(s); }), "IntegrityViolation");
  EXPECT_EQ(error_code([&] { home_from_json(to_json(s)); }), "IntegrityViolation");
}

// Property: the state file round-trips through disk byte for byte.
TEST(SessionProperty, StateFileRoundTrip) {
  auto dir = temp_dir("roundtrip");
  auto path = dir / "home.json";
  EXPECT_EQ(load_home(path), HomeState{});

  std::vector<HomeState> states = {HomeState{}, pending_comfort_tv()};
  states.push_back(record_decision(states.back(), "d1", Choice::Keep, "homeowner", kFixedClock));
  states.back().reports["d1"] = {{"schema", "hgthreat/1"}, {"app", "ComfortTV"}};
  for (const auto& s : states) {
    save_home(path, s);
    EXPECT_FALSE(std::filesystem::exists(dir / "home.json.tmp"));
    HomeState back = load_home(path);
    EXPECT_EQ(back, s);
    EXPECT_EQ(serialize(back), hgtest::read_file(path));
  }
  std::filesystem::remove_all(dir);
}

TEST(Session, BadStateFilesAreRejected) {
  auto dir = temp_dir("bad");
  auto path = dir / "home.json";
  for (std::string bytes : {"{", "[]", R"({"schema": "hgstate/2"})", R"({"schema": "hgstate/1", "apps": 3})"}) {
    std::ofstream(path) << bytes;
    EXPECT_EQ(error_code([&] { load_home(path); }), "SchemaViolation") << bytes;
  }
  std::filesystem::remove_all(dir);
}

TEST(Session, AtomicWriteLeavesTheOldFileOnFailure) {
  auto dir = temp_dir("atomic");
  auto path = dir / "home.json";
  save_home(path, pending_comfort_tv());
  std::string before = hgtest::read_file(path);
  // A directory where the temp file should go makes the write fail.
  std::filesystem::create_directory(dir / "home.json.tmp");
  EXPECT_ANY_THROW(save_home(path, HomeState{}));
  EXPECT_EQ(hgtest::read_file(path), before);
  std::filesystem::remove_all(dir);
}
