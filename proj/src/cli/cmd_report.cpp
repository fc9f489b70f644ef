#include <filesystem>
#include <fstream>
#include <sstream>

#include "blowup/cli/commands.hpp"

namespace blowup::cli {

namespace {

std::optional<std::string> slurp(const std::filesystem::path& p) {
  std::ifstream f(p, std::ios::binary);
  if (!f) return std::nullopt;
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

// Recomputes every hash listed in a bundle manifest.
std::string manifest_problem(const std::filesystem::path& dir) {
  const auto text = slurp(dir / "manifest.json");
  if (!text) return "manifest.json missing";
  try {
    const Json m = Json::parse(*text);
    for (const auto& e : m.at("files")) {
      const auto path = e.at("path").get<std::string>();
      const auto data = slurp(dir / path);
      if (!data) return path + " missing";
      if (sha256_hex(*data) != e.at("sha256").get<std::string>()) return path + " hash mismatch";
    }
  } catch (const Json::exception& e) {
    return std::string("manifest.json unreadable: ") + e.what();
  }
  return "";
}

}  // namespace

void cmd_report(const RunConfig& cfg, Bundle& b) {
  if (cfg.report.inputs.empty()) throw ConfigError("config: report.inputs must list at least one bundle");
  Json report;
  report["format"] = "blowup-report";
  report["version"] = 1;
  report["seed"] = b.seed();
  Json bundles = Json::array();
  Csv csv({"bundle", "subcommand", "check", "passed", "value", "threshold", "seed"});
  const std::string seed = cell(static_cast<std::size_t>(b.seed()));
  bool all = true;
  for (std::size_t i = 0; i < cfg.report.inputs.size(); ++i) {
    const std::filesystem::path dir(cfg.report.inputs[i]);
    const std::string name = "bundle" + std::to_string(i);
    Json entry;
    entry["path"] = dir.string();
    const auto text = slurp(dir / "summary.json");
    if (!text) {
      entry["status"] = "missing";
      b.check(Check{name, false, "", "", "no summary.json in " + dir.string()});
      all = false;
      bundles.push_back(entry);
      continue;
    }
    try {
      const Json s = Json::parse(*text);
      const std::string sub = s.at("subcommand").get<std::string>();
      const bool passed = s.at("passed").get<bool>();
      entry["subcommand"] = sub;
      entry["status"] = s.at("status");
      entry["passed"] = passed;
      entry["checks"] = s.at("checks");
      for (const auto& c : s.at("checks"))
        csv.row({dir.string(), sub, c.at("name").get<std::string>(), cell(c.at("passed").get<bool>()),
                 c.at("value").get<std::string>(), c.at("threshold").get<std::string>(), seed});
      const std::string problem = manifest_problem(dir);
      entry["manifest_ok"] = problem.empty();
      b.check(Check{name, passed, cell(passed), cell(true), sub + " at " + dir.string()});
      b.check(Check{name + "_manifest", problem.empty(), problem.empty() ? "ok" : problem, "ok",
                    "recomputed file hashes"});
      all = all && passed && problem.empty();
    } catch (const Json::exception& e) {
      entry["status"] = "unreadable";
      b.check(Check{name, false, "", "", std::string("summary.json unreadable: ") + e.what()});
      all = false;
    }
    bundles.push_back(entry);
  }
  report["bundles"] = bundles;
  report["passed"] = all;
  b.write("report.json", dump(report));
  b.write("report.csv", csv.str());
}

}  // namespace blowup::cli
