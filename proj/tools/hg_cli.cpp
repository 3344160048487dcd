// hg: rule extraction, install analysis and the install-review service.
//
// Exit status: 0 no findings, 2 findings present, 1 error.

#include "hg/hg.hpp"
#include "hg/http.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw hg::Error("IoError", "cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string trim(std::string s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.pop_back();
  std::size_t i = 0;
  while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
  return s.substr(i);
}

// --config takes a URI, a file holding a URI, or a JSON configuration file.
hg::Configuration load_config(const std::string& arg) {
  if (arg.rfind("http://", 0) == 0 || arg.rfind("https://", 0) == 0) return hg::parse_config_uri(arg);
  std::string text = trim(read_file(arg));
  if (!text.empty() && text.front() == '{') {
    try {
      return hg::configuration_from_json(nlohmann::json::parse(text));
    } catch (const nlohmann::json::exception& e) {
      throw hg::Error("SchemaViolation", std::string("configuration file: ") + e.what());
    }
  }
  return hg::parse_config_uri(text);
}

struct Global {
  std::string catalogPath;
  std::size_t maxChainLen = 4;
  bool noEnvUnification = false;

  hg::Catalog catalog;
  std::string fingerprint;

  void load() {
    if (catalogPath.empty())
      if (const char* env = std::getenv("HG_CATALOG")) catalogPath = env;
    std::string text = catalogPath.empty() ? std::string(hg::kDefaultCatalogJson) : read_file(catalogPath);
    catalog = catalogPath.empty() ? hg::default_catalog() : hg::load_catalog(catalogPath);
    fingerprint = hg::sha256_hex(text);
  }

  hg::ServiceOptions service_options(const std::string& home) const {
    hg::ServiceOptions o;
    o.home = home;
    o.detect.maxChainLen = maxChainLen;
    o.detect.merge.unifyEnvironment = !noEnvUnification;
    return o;
  }
};

void print_summary(const nlohmann::json& rep) {
  for (const auto& r : rep["renderedRules"]) std::cout << "rule: " << r.get<std::string>() << "\n";
  for (const auto& f : rep["findings"])
    std::cout << f["kind"].get<std::string>() << " " << f["rules"].dump() << ": " << f["explanation"].get<std::string>()
              << "\n";
  for (const auto& c : rep["chains"]) std::cout << "CHAIN " << c["rules"].dump() << ": " << c["covertRule"].get<std::string>() << "\n";
  for (const auto& e : rep["errors"])
    std::cerr << e["stage"].get<std::string>() << ": [" << e["code"].get<std::string>() << "] "
              << e["message"].get<std::string>() << "\n";
  if (!rep["decisionId"].is_null()) std::cout << "decision id: " << rep["decisionId"].get<std::string>() << "\n";
}

int report_status(const nlohmann::json& rep) {
  if (rep["decisionId"].is_null()) return 1;
  return rep["findings"].empty() && rep["chains"].empty() ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cross-app interference analysis for home automation apps"};
  app.require_subcommand(1);
  Global g;
  app.add_option("--catalog", g.catalogPath, "capability catalog (JSON or TOML); defaults to $HG_CATALOG");
  app.add_option("--max-chain-len", g.maxChainLen, "longest rule chain reported")->capture_default_str();
  app.add_flag("--no-env-unification", g.noEnvUnification, "keep per-device attribute variables apart");

  std::string source, output, config, home, reportPath, listen = "127.0.0.1:8080", decisionId, choice;

  auto* extract = app.add_subcommand("extract", "print the rule file of an app");
  extract->add_option("app", source, "HGL source")->required();
  extract->add_option("-o,--output", output, "write the rule file here");

  auto* analyze = app.add_subcommand("analyze", "check an app against a home before installing it");
  analyze->add_option("app", source, "HGL source")->required();
  analyze->add_option("--config", config, "configuration URI, or a file holding one")->required();
  analyze->add_option("--home", home, "home state file")->required();
  analyze->add_option("--report", reportPath, "write the threat report here");

  auto* session = app.add_subcommand("session", "install-review service");
  session->require_subcommand(1);
  auto* serve = session->add_subcommand("serve", "serve the HTTP endpoints");
  serve->add_option("--home", home, "home state file")->required();
  serve->add_option("--listen", listen, "host:port")->capture_default_str();

  auto* decide = app.add_subcommand("decide", "keep or reject a pending install");
  decide->add_option("decisionId", decisionId)->required();
  decide->add_option("choice", choice, "keep | reject")->required()->check(CLI::IsMember({"keep", "reject"}));
  decide->add_option("--home", home, "home state file")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    g.load();

    if (*extract) {
      hg::Service svc(g.catalog, g.fingerprint, g.service_options(""));
      std::vector<hg::Diagnostic> diags;
      hg::RuleSet rs;
      try {
        rs = svc.extract(read_file(source), &diags);
      } catch (const hg::Error&) {
        for (const auto& d : diags) std::cerr << source << ":" << d << "\n";
        throw;
      }
      std::string bytes = hg::serialize(rs);
      if (output.empty())
        std::cout << bytes;
      else
        hg::write_atomically(output, bytes);
      return 0;
    }

    if (*analyze) {
      hg::Service svc(g.catalog, g.fingerprint, g.service_options(home));
      auto rep = svc.install(read_file(source), load_config(config));
      if (!reportPath.empty()) hg::write_atomically(reportPath, rep.dump(2) + "\n");
      print_summary(rep);
      return report_status(rep);
    }

    if (*decide) {
      hg::Service svc(g.catalog, g.fingerprint, g.service_options(home));
      std::cout << svc.decide(decisionId, choice).dump(2) << "\n";
      return 0;
    }

    if (*serve) {
      auto colon = listen.rfind(':');
      if (colon == std::string::npos) throw hg::Error("InvalidArgument", "--listen wants host:port");
      std::string host = colon ? listen.substr(0, colon) : "0.0.0.0";
      int port = std::stoi(listen.substr(colon + 1));
      hg::Service svc(g.catalog, g.fingerprint, g.service_options(home));
      httplib::Server server;
      hg::mount(server, svc);
      std::cerr << "listening on " << host << ":" << port << "\n";
      if (!server.listen(host, port)) throw hg::Error("IoError", "cannot listen on " + listen);
      return 0;
    }
  } catch (const hg::Error& e) {
    std::cerr << "error [" << e.code() << "]: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
