//===-- default_catalog.hpp - Shipped capability catalog --------*- C++ -*-===//
//
// Byte-identical copy of docs/catalog.json (a test keeps them in sync).
//
//===----------------------------------------------------------------------===//
#pragma once

#include <string_view>

namespace hg {

inline constexpr std::string_view kDefaultCatalogJson = R"hgcat({
  "schema": "hgcat/1",
  "features": [
    {"name": "temperature", "lo": -50, "hi": 150, "goal": true},
    {"name": "illuminance", "lo": 0, "hi": 100000, "goal": true},
    {"name": "humidity", "lo": 0, "hi": 100, "goal": true},
    {"name": "power", "lo": 0, "hi": 100000, "goal": true},
    {"name": "noise", "lo": 0, "hi": 150, "goal": true},
    {"name": "timeOfDay", "lo": 0, "hi": 1439},
    {"name": "dayOfWeek", "values": ["Friday", "Monday", "Saturday", "Sunday", "Thursday", "Tuesday", "Wednesday"]},
    {"name": "weather", "values": ["clear", "cloudy", "raining", "snowing"]}
  ],
  "capabilities": [
    {
      "name": "switch",
      "attributes": [
        {"name": "switch", "sort": "enum", "values": ["off", "on"],
         "phrases": {"on": "a switch turns on", "off": "a switch turns off"}}
      ],
      "commands": [
        {"name": "on", "selfEffect": {"attribute": "switch", "value": "on"}, "phrase": "turns on a switch"},
        {"name": "off", "selfEffect": {"attribute": "switch", "value": "off"}, "phrase": "turns off a switch"}
      ]
    },
    {
      "name": "light",
      "attributes": [
        {"name": "switch", "sort": "enum", "values": ["off", "on"],
         "phrases": {"on": "the lights turn on", "off": "the lights turn off"}}
      ],
      "commands": [
        {"name": "on", "selfEffect": {"attribute": "switch", "value": "on"},
         "channels": [{"feature": "illuminance", "direction": "+"}, {"feature": "power", "direction": "+"}],
         "goal": {"illuminance": "+", "power": "+"}, "phrase": "turns on the lights"},
        {"name": "off", "selfEffect": {"attribute": "switch", "value": "off"},
         "channels": [{"feature": "illuminance", "direction": "-"}, {"feature": "power", "direction": "-"}],
         "goal": {"illuminance": "-", "power": "-"}, "phrase": "turns off the lights"}
      ]
    },
    {
      "name": "heater",
      "attributes": [
        {"name": "switch", "sort": "enum", "values": ["off", "on"],
         "phrases": {"on": "the heater turns on", "off": "the heater turns off"}}
      ],
      "commands": [
        {"name": "on", "selfEffect": {"attribute": "switch", "value": "on"},
         "channels": [{"feature": "temperature", "direction": "+"}, {"feature": "power", "direction": "+"}],
         "goal": {"temperature": "+", "power": "+"}, "phrase": "turns on the heater"},
        {"name": "off", "selfEffect": {"attribute": "switch", "value": "off"},
         "channels": [{"feature": "power", "direction": "-"}],
         "goal": {"power": "-"}, "phrase": "turns off the heater"}
      ]
    },
    {
      "name": "airConditioner",
      "attributes": [
        {"name": "switch", "sort": "enum", "values": ["off", "on"],
         "phrases": {"on": "the air conditioner turns on", "off": "the air conditioner turns off"}}
      ],
      "commands": [
        {"name": "on", "selfEffect": {"attribute": "switch", "value": "on"},
         "channels": [{"feature": "temperature", "direction": "-"}, {"feature": "power", "direction": "+"}],
         "goal": {"temperature": "-", "power": "+"}, "phrase": "turns on the air conditioner"},
        {"name": "off", "selfEffect": {"attribute": "switch", "value": "off"},
         "channels": [{"feature": "power", "direction": "-"}],
         "goal": {"power": "-"}, "phrase": "turns off the air conditioner"}
      ]
    },
    {
      "name": "switchLevel",
      "attributes": [
        {"name": "level", "sort": "int", "range": [0, 100]}
      ],
      "commands": [
        {"name": "setLevel", "params": [{"name": "level", "sort": "int"}],
         "selfEffect": {"attribute": "level", "param": "level"}, "phrase": "sets a dimmer level"}
      ]
    },
    {
      "name": "lock",
      "attributes": [
        {"name": "lock", "sort": "enum", "values": ["locked", "unlocked"],
         "phrases": {"locked": "a door is locked", "unlocked": "a door is unlocked"}}
      ],
      "commands": [
        {"name": "lock", "selfEffect": {"attribute": "lock", "value": "locked"}, "phrase": "locks a door"},
        {"name": "unlock", "selfEffect": {"attribute": "lock", "value": "unlocked"}, "phrase": "unlocks a door"}
      ]
    },
    {
      "name": "doorControl",
      "attributes": [
        {"name": "door", "sort": "enum", "values": ["closed", "open"],
         "phrases": {"open": "a door opens", "closed": "a door closes"}}
      ],
      "commands": [
        {"name": "open", "selfEffect": {"attribute": "door", "value": "open"}, "phrase": "opens a door"},
        {"name": "close", "selfEffect": {"attribute": "door", "value": "closed"}, "phrase": "closes a door"}
      ]
    },
    {
      "name": "windowShade",
      "attributes": [
        {"name": "windowShade", "sort": "enum", "values": ["closed", "open"],
         "phrases": {"open": "a window opens", "closed": "a window closes"}}
      ],
      "commands": [
        {"name": "open", "selfEffect": {"attribute": "windowShade", "value": "open"},
         "channels": [{"feature": "temperature", "direction": "-"}, {"feature": "illuminance", "direction": "+"}],
         "goal": {"temperature": "-", "illuminance": "+"}, "phrase": "opens a window"},
        {"name": "close", "selfEffect": {"attribute": "windowShade", "value": "closed"},
         "channels": [{"feature": "illuminance", "direction": "-"}],
         "goal": {"illuminance": "-"}, "phrase": "closes a window"}
      ]
    },
    {
      "name": "thermostat",
      "attributes": [
        {"name": "switch", "sort": "enum", "values": ["off", "on"],
         "phrases": {"on": "the thermostat turns on", "off": "the thermostat turns off"}},
        {"name": "heatingSetpoint", "sort": "int", "range": [-50, 150]},
        {"name": "coolingSetpoint", "sort": "int", "range": [-50, 150]}
      ],
      "commands": [
        {"name": "setHeatingSetpoint", "params": [{"name": "setpoint", "sort": "int"}],
         "selfEffect": {"attribute": "heatingSetpoint", "param": "setpoint"},
         "channels": [{"feature": "temperature", "direction": "+", "setpoint": "setpoint"}],
         "goal": {"temperature": "+"}, "phrase": "heats the home"},
        {"name": "setCoolingSetpoint", "params": [{"name": "setpoint", "sort": "int"}],
         "selfEffect": {"attribute": "coolingSetpoint", "param": "setpoint"},
         "channels": [{"feature": "temperature", "direction": "-", "setpoint": "setpoint"}],
         "goal": {"temperature": "-"}, "phrase": "cools the home"},
        {"name": "on", "selfEffect": {"attribute": "switch", "value": "on"},
         "channels": [{"feature": "power", "direction": "+"}],
         "goal": {"power": "+"}, "phrase": "turns on the thermostat"},
        {"name": "off", "selfEffect": {"attribute": "switch", "value": "off"},
         "channels": [{"feature": "power", "direction": "-"}],
         "goal": {"power": "-"}, "phrase": "turns off the thermostat"}
      ]
    },
    {
      "name": "valve",
      "attributes": [
        {"name": "valve", "sort": "enum", "values": ["closed", "open"],
         "phrases": {"open": "a valve opens", "closed": "a valve closes"}}
      ],
      "commands": [
        {"name": "open", "selfEffect": {"attribute": "valve", "value": "open"}, "phrase": "opens a valve"},
        {"name": "close", "selfEffect": {"attribute": "valve", "value": "closed"}, "phrase": "closes a valve"}
      ]
    },
    {
      "name": "alarm",
      "attributes": [
        {"name": "alarm", "sort": "enum", "values": ["both", "off", "siren", "strobe"],
         "phrases": {"siren": "the alarm sounds", "off": "the alarm stops"}}
      ],
      "commands": [
        {"name": "siren", "selfEffect": {"attribute": "alarm", "value": "siren"},
         "channels": [{"feature": "noise", "direction": "+"}],
         "goal": {"noise": "+"}, "phrase": "sounds the alarm"},
        {"name": "off", "selfEffect": {"attribute": "alarm", "value": "off"},
         "channels": [{"feature": "noise", "direction": "-"}],
         "goal": {"noise": "-"}, "phrase": "silences the alarm"}
      ]
    },
    {
      "name": "location",
      "virtual": true,
      "attributes": [
        {"name": "mode", "sort": "str",
         "phrases": {"*": "the location mode changes"}},
        {"name": "timeOfDay", "sort": "int", "feature": "timeOfDay"},
        {"name": "dayOfWeek", "sort": "enum", "feature": "dayOfWeek",
         "values": ["Friday", "Monday", "Saturday", "Sunday", "Thursday", "Tuesday", "Wednesday"]}
      ],
      "commands": [
        {"name": "setMode", "params": [{"name": "mode", "sort": "str"}],
         "selfEffect": {"attribute": "mode", "param": "mode"}, "phrase": "changes the location mode"}
      ]
    },
    {
      "name": "api",
      "virtual": true,
      "commands": [
        {"name": "sendSms", "params": [{"name": "phone", "sort": "str"}, {"name": "message", "sort": "str"}],
         "phrase": "sends a text message"},
        {"name": "httpPost", "params": [{"name": "url", "sort": "str"}, {"name": "body", "sort": "str"}],
         "phrase": "posts data to a web server"}
      ]
    },
    {
      "name": "temperatureMeasurement",
      "attributes": [{"name": "temperature", "sort": "int", "feature": "temperature"}]
    },
    {
      "name": "illuminanceMeasurement",
      "attributes": [{"name": "illuminance", "sort": "int", "feature": "illuminance"}]
    },
    {
      "name": "relativeHumidityMeasurement",
      "attributes": [{"name": "humidity", "sort": "int", "feature": "humidity"}]
    },
    {
      "name": "powerMeter",
      "attributes": [{"name": "power", "sort": "int", "feature": "power"}]
    },
    {
      "name": "soundSensor",
      "attributes": [{"name": "noise", "sort": "int", "feature": "noise"}]
    },
    {
      "name": "weatherSensor",
      "attributes": [{"name": "weather", "sort": "enum", "feature": "weather",
                      "values": ["clear", "cloudy", "raining", "snowing"]}]
    },
    {
      "name": "motionSensor",
      "attributes": [
        {"name": "motion", "sort": "enum", "values": ["active", "inactive"],
         "phrases": {"active": "motion is detected", "inactive": "motion stops"}}
      ]
    },
    {
      "name": "presenceSensor",
      "attributes": [
        {"name": "presence", "sort": "enum", "values": ["not present", "present"],
         "phrases": {"present": "someone arrives home", "not present": "everyone leaves home"}}
      ]
    },
    {
      "name": "contactSensor",
      "attributes": [
        {"name": "contact", "sort": "enum", "values": ["closed", "open"],
         "phrases": {"open": "a door or window opens", "closed": "a door or window closes"}}
      ]
    },
    {
      "name": "waterSensor",
      "attributes": [
        {"name": "water", "sort": "enum", "values": ["dry", "wet"],
         "phrases": {"wet": "a water leak is detected", "dry": "the floor is dry"}}
      ]
    },
    {
      "name": "speechRecognition",
      "attributes": [
        {"name": "phrase", "sort": "str", "phrases": {"*": "a voice command is heard"}}
      ]
    }
  ],
  "contradictions": [
    {"capability": "switch", "opposite": ["on", "off"]},
    {"capability": "light", "opposite": ["on", "off"]},
    {"capability": "heater", "opposite": ["on", "off"]},
    {"capability": "airConditioner", "opposite": ["on", "off"]},
    {"capability": "switchLevel", "paramClash": "setLevel"},
    {"capability": "lock", "opposite": ["lock", "unlock"]},
    {"capability": "doorControl", "opposite": ["open", "close"]},
    {"capability": "windowShade", "opposite": ["open", "close"]},
    {"capability": "thermostat", "opposite": ["on", "off"]},
    {"capability": "thermostat", "paramClash": "setHeatingSetpoint"},
    {"capability": "thermostat", "paramClash": "setCoolingSetpoint"},
    {"capability": "valve", "opposite": ["open", "close"]},
    {"capability": "alarm", "opposite": ["siren", "off"]},
    {"capability": "location", "paramClash": "setMode"}
  ],
  "apiSinks": [
    {"name": "setLocationMode", "params": [{"name": "mode", "sort": "str"}],
     "subject": "location", "capability": "location", "command": "setMode"},
    {"name": "sendSms", "params": [{"name": "phone", "sort": "str"}, {"name": "message", "sort": "str"}],
     "subject": "api", "capability": "api", "command": "sendSms"},
    {"name": "httpPost", "params": [{"name": "url", "sort": "str"}, {"name": "body", "sort": "str"}],
     "subject": "api", "capability": "api", "command": "httpPost"}
  ],
  "builtins": [
    {"name": "location", "capability": "location", "deviceId": "location"}
  ]
}
)hgcat";

}  // namespace hg
