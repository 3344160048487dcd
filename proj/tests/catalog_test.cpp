#include "support.hpp"

using namespace hg;

TEST(Catalog, EmbeddedCopyMatchesDocs) {
  Catalog onDisk = load_catalog(hgtest::source_dir() / "docs" / "catalog.json");
  EXPECT_EQ(onDisk, default_catalog());
}

TEST(Catalog, TomlSyntaxLoadsTheSameModel) {
  std::string toml = R"(
schema = "hgcat/1"

[[features]]
name = "temperature"
goal = true
lo = -50
hi = 150

[[capabilities]]
name = "heater"

[[capabilities.attributes]]
name = "switch"
sort = "enum"
values = ["off", "on"]

[[capabilities.commands]]
name = "on"
selfEffect = { attribute = "switch", value = "on" }
channels = [{ feature = "temperature", direction = "+" }]

[[capabilities.commands]]
name = "off"
selfEffect = { attribute = "switch", value = "off" }

[[contradictions]]
capability = "heater"
opposite = ["on", "off"]
)";
  std::string json = R"({
  "schema": "hgcat/1",
  "features": [{"name": "temperature", "goal": true, "lo": -50, "hi": 150}],
  "capabilities": [{"name": "heater",
    "attributes": [{"name": "switch", "sort": "enum", "values": ["off", "on"]}],
    "commands": [
      {"name": "on", "selfEffect": {"attribute": "switch", "value": "on"},
       "channels": [{"feature": "temperature", "direction": "+"}]},
      {"name": "off", "selfEffect": {"attribute": "switch", "value": "off"}}]}],
  "contradictions": [{"capability": "heater", "opposite": ["on", "off"]}]
})";
  EXPECT_EQ(parse_catalog_text(toml, true), parse_catalog_text(json));
}

TEST(Catalog, ContradictionsAreSymmetric) {
  const Catalog& cat = default_catalog();
  std::vector<Term> none;
  EXPECT_TRUE(contradicts(cat, "switch", "on", none, "off", none));
  EXPECT_TRUE(contradicts(cat, "switch", "off", none, "on", none));
  EXPECT_FALSE(contradicts(cat, "switch", "on", none, "on", none));

  std::vector<Term> fifty = {Term::integer(50)}, eighty = {Term::integer(80)};
  EXPECT_TRUE(contradicts(cat, "switchLevel", "setLevel", fifty, "setLevel", eighty));
  EXPECT_FALSE(contradicts(cat, "switchLevel", "setLevel", fifty, "setLevel", fifty));
}

TEST(Catalog, GoalEffectsFollowChannels) {
  const Catalog& cat = default_catalog();
  auto heat = goal_effect(cat, "heater", "on");
  EXPECT_EQ(heat.at("temperature"), GoalSign::Up);
  EXPECT_EQ(heat.at("illuminance"), GoalSign::None);
  auto shade = goal_effect(cat, "windowShade", "open");
  EXPECT_EQ(shade.at("temperature"), GoalSign::Down);
  EXPECT_EQ(shade.at("illuminance"), GoalSign::Up);
  // Total over goal features.
  EXPECT_EQ(goal_effect(cat, "lock", "unlock").size(), cat.goalFeatures().size());
}

TEST(Catalog, SetpointComesFromTheDeclaredParameter) {
  std::vector<Term> p = {Term::integer(72)};
  auto eff = channel_effects(default_catalog(), "thermostat", "setHeatingSetpoint", p);
  ASSERT_EQ(eff.size(), 1u);
  EXPECT_EQ(eff[0].feature, "temperature");
  EXPECT_EQ(eff[0].direction, Direction::Up);
  EXPECT_EQ(eff[0].setpoint, Term::integer(72));
}

TEST(Catalog, RejectsDanglingFeature) {
  auto j = nlohmann::json::parse(std::string(kDefaultCatalogJson));
  j["capabilities"][0]["attributes"][0]["feature"] = "humidityOfTheMoon";
  try {
    parse_catalog(j);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), "DanglingFeature");
  }
}

TEST(Catalog, RejectsDuplicateCapability) {
  auto j = nlohmann::json::parse(std::string(kDefaultCatalogJson));
  j["capabilities"].push_back(j["capabilities"][0]);
  try {
    parse_catalog(j);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), "SchemaViolation");
  }
}

TEST(Catalog, UnknownCommandIsReported) {
  try {
    default_catalog().command("switch", "explode");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), "UnknownCommand");
  }
}
