#include "support.hpp"

#include "hg/http.hpp"
#include "hg/service.hpp"

#include <thread>

using namespace hg;

namespace {

const Clock kFixedClock = [] { return std::string("2026-03-01T12:00:00Z"); };

nlohmann::json request(const std::string& dir, const std::string& app) {
  return {{"source", hgtest::read_file(hgtest::corpus(dir + "/" + app + ".hgl"))},
          {"configUri", hgtest::trim(hgtest::read_file(hgtest::corpus(dir + "/" + app + ".uri")))}};
}

ServiceOptions options() {
  ServiceOptions o;
  o.clock = kFixedClock;
  return o;
}

std::filesystem::path temp_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("hg-service-" + name + "-" + std::to_string(::getpid()));
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

std::set<std::string> kinds(const nlohmann::json& rep) {
  std::set<std::string> out;
  for (const auto& f : rep["findings"]) out.insert(f["kind"].get<std::string>());
  return out;
}

}  // namespace

TEST(Service, ReportShape) {
  Service svc(default_catalog(), "test", options());
  auto rep = svc.install(request("canonical", "ComfortTV"));
  EXPECT_EQ(rep["schema"], "hgthreat/1");
  EXPECT_EQ(rep["app"], "ComfortTV");
  EXPECT_TRUE(rep["errors"].empty());
  ASSERT_EQ(rep["rules"].size(), 1u);
  EXPECT_EQ(rep["rules"][0]["id"], "3ad11c9df06b5b9d");
  EXPECT_EQ(rep["renderedRules"][0],
            "WHEN tv1.switch becomes on IF tSensor.temperature > 30 AND window1.switch == off THEN window1.on()");
  // Nothing installed yet: nothing to interfere with.
  EXPECT_TRUE(rep["findings"].empty());
  EXPECT_TRUE(rep["chains"].empty());
  ASSERT_TRUE(rep["decisionId"].is_string());
  EXPECT_EQ(rep["pendingDecisionIds"], nlohmann::json::array({rep["decisionId"]}));
  EXPECT_EQ(svc.report(rep["decisionId"]), rep);
}

TEST(Service, CanonicalSequence) {
  Service svc(default_catalog(), "test", options());
  std::vector<nlohmann::json> reps;
  for (const char* app : {"ColdDefender", "CatchLiveShow", "ComfortTV", "BurglarFinder", "NightCare"}) {
    reps.push_back(svc.install(request("canonical", app)));
    svc.decide(reps.back()["decisionId"], "keep");
  }
  EXPECT_EQ(kinds(reps[0]), std::set<std::string>{});
  EXPECT_EQ(kinds(reps[1]), std::set<std::string>{"CT"});
  EXPECT_EQ(kinds(reps[2]), (std::set<std::string>{"AR", "CT"}));
  EXPECT_EQ(kinds(reps[3]), std::set<std::string>{});
  EXPECT_EQ(kinds(reps[4]), std::set<std::string>{"DC"});
  auto home = svc.home_summary();
  EXPECT_EQ(home["schema"], "hgstate/1");
  EXPECT_EQ(home["apps"].size(), 5u);
  EXPECT_EQ(home["allowed"].size(), 4u);
  EXPECT_TRUE(home["pending"].empty());
}

TEST(Service, ErrorsNameTheStage) {
  Service svc(default_catalog(), "test", options());
  auto rep = svc.install({{"source", "app \"X\"\ndef installed() {\n  subscribe(\n}\n"}, {"configUri", "http://my.com/appname:X/"}});
  ASSERT_FALSE(rep["errors"].empty());
  EXPECT_EQ(rep["errors"][0]["stage"], "parse");
  EXPECT_TRUE(rep["errors"][0]["line"].is_number());
  EXPECT_TRUE(rep["decisionId"].is_null());

  rep = svc.install({{"source", "app \"X\"\ndef installed() { subscribe(nope, \"switch\", h) }\ndef h(evt) { }\n"},
                     {"configUri", "http://my.com/appname:X/"}});
  EXPECT_EQ(rep["errors"][0]["stage"], "validate");

  auto req = request("canonical", "ComfortTV");
  req["configUri"] = "http://my.com/appname:ComfortTV/";
  rep = svc.install(req);
  EXPECT_EQ(rep["errors"][0]["stage"], "bind");
  EXPECT_EQ(rep["errors"][0]["code"], "MissingBinding");

  req["config"] = nlohmann::json::object();
  rep = svc.install(req);
  EXPECT_EQ(rep["errors"][0]["stage"], "request");
  req.erase("configUri");
  req["config"] = "not an object";
  EXPECT_EQ(svc.install(req)["errors"][0]["stage"], "request");
  EXPECT_TRUE(svc.state().pending.empty());
}

TEST(Service, DecideErrors) {
  Service svc(default_catalog(), "test", options());
  EXPECT_THROW(svc.decide("0000000000000000", "keep"), Error);
  auto rep = svc.install(request("canonical", "ComfortTV"));
  try {
    svc.decide(rep["decisionId"], "later");
    ADD_FAILURE();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), "InvalidChoice");
  }
  auto d = svc.decide(rep["decisionId"], "reject");
  EXPECT_EQ(d["installed"], false);
  EXPECT_FALSE(svc.rules("ComfortTV"));
}

// Property: the same request against the same home gives a byte-identical report.
TEST(ServiceProperty, Deterministic) {
  auto run = [] {
    Service svc(default_catalog(), "test", options());
    std::string out;
    for (const char* app : {"ColdDefender", "CatchLiveShow", "ComfortTV"}) {
      auto rep = svc.install(request("canonical", app));
      out += rep.dump() + "\n";
      svc.decide(rep["decisionId"], "keep");
    }
    return out;
  };
  EXPECT_EQ(run(), run());

  Service svc(default_catalog(), "test", options());
  svc.decide(svc.install(request("canonical", "ColdDefender"))["decisionId"], "keep");
  auto a = svc.install(request("canonical", "ComfortTV"));
  auto b = svc.install(request("canonical", "ComfortTV"));
  EXPECT_EQ(a.dump(), b.dump());
}

TEST(Service, RuleCacheSkipsReextraction) {
  auto dir = temp_dir("cache");
  auto src = hgtest::read_file(hgtest::corpus("canonical/ComfortTV.hgl"));
  {
    ServiceOptions o = options();
    o.cacheDir = dir / "cache";
    Service svc(default_catalog(), "test", o);
    auto first = svc.extract(src);
    EXPECT_EQ(svc.cache().hits(), 0u);
    EXPECT_EQ(svc.extract(src), first);
    EXPECT_EQ(svc.cache().hits(), 1u);
  }
  // A fresh service reads the entry back from disk.
  ServiceOptions o = options();
  o.cacheDir = dir / "cache";
  Service again(default_catalog(), "test", o);
  again.extract(src);
  EXPECT_EQ(again.cache().hits(), 1u);
  // A different catalog fingerprint is a different key.
  Service other(default_catalog(), "other", o);
  other.extract(src);
  EXPECT_EQ(other.cache().hits(), 0u);
  std::filesystem::remove_all(dir);
}

TEST(Service, HomePersistsAcrossRestarts) {
  auto dir = temp_dir("persist");
  ServiceOptions o = options();
  o.home = dir / "home.json";
  std::string id;
  {
    Service svc(default_catalog(), "test", o);
    svc.decide(svc.install(request("canonical", "ColdDefender"))["decisionId"], "keep");
    id = svc.install(request("canonical", "ComfortTV"))["decisionId"];
  }
  Service svc(default_catalog(), "test", o);
  EXPECT_TRUE(svc.rules("ColdDefender"));
  ASSERT_TRUE(svc.report(id));
  EXPECT_EQ(svc.decide(id, "keep")["installed"], true);
  EXPECT_EQ(load_home(o.home).apps.size(), 2u);
  std::filesystem::remove_all(dir);
}

class Http : public ::testing::Test {
 protected:
  void SetUp() override {
    mount(server_, svc_);
    port_ = server_.bind_to_any_port("127.0.0.1");
    ASSERT_GT(port_, 0);
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }

  void TearDown() override {
    server_.stop();
    if (thread_.joinable()) thread_.join();
  }

  httplib::Client client() { return httplib::Client("127.0.0.1", port_); }

  Service svc_{default_catalog(), "test", options()};
  httplib::Server server_;
  std::thread thread_;
  int port_ = 0;
};

TEST_F(Http, InstallDecideAndInspect) {
  auto c = client();
  auto res = c.Post("/install", request("canonical", "ColdDefender").dump(), "application/json");
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 200);
  auto rep = nlohmann::json::parse(res->body);
  std::string id = rep["decisionId"];

  res = c.Get("/report/" + id);
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 200);
  EXPECT_EQ(nlohmann::json::parse(res->body), rep);

  res = c.Post("/decision", nlohmann::json{{"decisionId", id}, {"choice", "keep"}}.dump(), "application/json");
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 200);
  EXPECT_EQ(nlohmann::json::parse(res->body)["installed"], true);

  res = c.Post("/install", request("canonical", "ComfortTV").dump(), "application/json");
  rep = nlohmann::json::parse(res->body);
  EXPECT_EQ(kinds(rep), std::set<std::string>{"AR"});

  res = c.Get("/home");
  ASSERT_TRUE(res);
  auto home = nlohmann::json::parse(res->body);
  EXPECT_EQ(home["schema"], "hgstate/1");
  EXPECT_EQ(home["pending"].size(), 1u);

  res = c.Get("/rules/ColdDefender");
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 200);
  EXPECT_EQ(deserialize(res->body).app, "ColdDefender");
}

TEST_F(Http, ErrorStatuses) {
  auto c = client();
  auto code = [](const httplib::Result& r) { return nlohmann::json::parse(r->body)["error"]["code"].get<std::string>(); };

  auto res = c.Get("/rules/Nope");
  EXPECT_EQ(res->status, 404);
  EXPECT_EQ(code(res), "UnknownApp");
  res = c.Get("/report/ffffffffffffffff");
  EXPECT_EQ(res->status, 404);
  EXPECT_EQ(code(res), "UnknownDecisionId");
  res = c.Post("/decision", R"({"decisionId": "ffffffffffffffff", "choice": "keep"})", "application/json");
  EXPECT_EQ(res->status, 404);
  res = c.Post("/decision", R"({"decisionId": 5})", "application/json");
  EXPECT_EQ(res->status, 400);
  res = c.Post("/install", "{", "application/json");
  EXPECT_EQ(res->status, 400);
  EXPECT_EQ(code(res), "InvalidRequest");
  res = c.Post("/install", R"({"source": "app \"X\"\n"})", "application/json");
  EXPECT_EQ(res->status, 400);
  EXPECT_EQ(nlohmann::json::parse(res->body)["errors"][0]["stage"], "request");
}
