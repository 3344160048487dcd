//===-- http.hpp - HTTP endpoints for the companion UI ----------*- C++ -*-===//
//
//   POST /install            {"source", "configUri"|"config"} -> hgthreat/1
//   POST /decision           {"decisionId", "choice"}
//   GET  /home               installed apps, allowed pairs, pending installs
//   GET  /rules/{app}        rule file of an installed app
//   GET  /report/{decisionId}
//
//===----------------------------------------------------------------------===//
#pragma once

#include "hg/service.hpp"

#include <httplib.h>

#include <string>

namespace hg {

namespace detail {

inline void send_json(httplib::Response& res, int status, const nlohmann::json& j) {
  res.status = status;
  res.set_content(j.dump(2), "application/json");
}

inline void send_error(httplib::Response& res, int status, const std::string& code, const std::string& msg) {
  send_json(res, status, {{"error", {{"code", code}, {"message", msg}}}});
}

inline int status_for(const std::string& code) {
  if (code == "UnknownDecisionId" || code == "UnknownApp") return 404;
  if (code == "StaleFinding") return 409;
  return 400;
}

}  // namespace detail

/// Registers the routes on `server`. `svc` must outlive it.
inline void mount(httplib::Server& server, Service& svc) {
  using detail::send_error;
  using detail::send_json;

  server.Post("/install", [&](const httplib::Request& req, httplib::Response& res) {
    nlohmann::json body;
    try {
      body = nlohmann::json::parse(req.body);
    } catch (const nlohmann::json::exception& e) {
      return send_error(res, 400, "InvalidRequest", e.what());
    }
    nlohmann::json rep = svc.install(body);
    bool requestError = !rep["errors"].empty() && rep["errors"][0]["stage"] == "request";
    send_json(res, requestError ? 400 : 200, rep);
  });

  server.Post("/decision", [&](const httplib::Request& req, httplib::Response& res) {
    try {
      auto body = nlohmann::json::parse(req.body);
      send_json(res, 200, svc.decide(body.at("decisionId").get<std::string>(), body.at("choice").get<std::string>()));
    } catch (const nlohmann::json::exception& e) {
      send_error(res, 400, "InvalidRequest", e.what());
    } catch (const Error& e) {
      send_error(res, detail::status_for(e.code()), e.code(), e.what());
    }
  });

  server.Get("/home", [&](const httplib::Request&, httplib::Response& res) { send_json(res, 200, svc.home_summary()); });

  server.Get(R"(/rules/([^/]+))", [&](const httplib::Request& req, httplib::Response& res) {
    std::string app = req.matches[1];
    if (auto j = svc.rules(app)) return send_json(res, 200, *j);
    send_error(res, 404, "UnknownApp", "no installed app '" + app + "'");
  });

  server.Get(R"(/report/([^/]+))", [&](const httplib::Request& req, httplib::Response& res) {
    std::string id = req.matches[1];
    if (auto j = svc.report(id)) return send_json(res, 200, *j);
    send_error(res, 404, "UnknownDecisionId", "no report '" + id + "'");
  });

  server.set_exception_handler([](const httplib::Request&, httplib::Response& res, std::exception_ptr ep) {
    try {
      std::rethrow_exception(ep);
    } catch (const Error& e) {
      send_error(res, detail::status_for(e.code()), e.code(), e.what());
    } catch (const std::exception& e) {
      send_error(res, 500, "Internal", e.what());
    }
  });
}

}  // namespace hg
