#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <CLI11.hpp>
#ifdef _OPENMP
#include <omp.h>
#endif

#include "blowup/cli/commands.hpp"
#include "blowup/format.hpp"

namespace blowup::cli {

namespace {

using Command = void (*)(const RunConfig&, Bundle&);

struct Flags {
  std::string config;
  std::string out;
  std::uint64_t seed = 0;
  std::string tol;
};

void apply_threads() {
  const char* v = std::getenv(kThreadsVariable);
  if (!v || !*v) return;
  char* end = nullptr;
  const long n = std::strtol(v, &end, 10);
  if (*end != '\0' || n < 1 || n > 4096)
    throw ConfigError(std::string(kThreadsVariable) + " must be a positive integer");
#ifdef _OPENMP
  omp_set_num_threads(static_cast<int>(n));
#endif
}

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot read config file " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

void print_checks(const Bundle& b, std::ostream& out) {
  for (const auto& c : b.checks())
    out << (c.passed ? "[PASS] " : "[FAIL] ") << c.name << " value=" << c.value << " threshold=" << c.threshold
        << (c.detail.empty() ? "" : " (" + c.detail + ")") << "\n";
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app("Blow-up solutions of the prescribed scalar curvature equation: construction and verification",
               "blowup");
  app.require_subcommand(1);
  Flags flags;
  const std::vector<std::pair<std::string, Command>> table{{"delaunay", cmd_delaunay},
                                                           {"glue", cmd_glue},
                                                           {"construct", cmd_construct},
                                                           {"verify", cmd_verify},
                                                           {"report", cmd_report}};
  const std::map<std::string, std::string> help{
      {"delaunay", "periodic profiles: neck size against period, energy drift"},
      {"glue", "cut-and-glue profiles: K series, sup and Lipschitz scaling, epsilon scans"},
      {"construct", "iterated stage plan, blow-up diagnostic and ray trace"},
      {"verify", "residual, Lipschitz, Hoelder and critical-order suites"},
      {"report", "aggregate summaries of existing bundles"}};
  std::vector<CLI::App*> subs;
  for (const auto& [name, fn] : table) {
    auto* s = app.add_subcommand(name, help.at(name));
    s->add_option("--config", flags.config, "JSON config file");
    s->add_option("--out", flags.out, "output directory");
    s->add_option("--seed", flags.seed, "random seed (u64)");
    s->add_option("--tol", flags.tol, "integration tolerance");
    subs.push_back(s);
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitPass;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n" << app.help();
    return kExitUsage;
  }

  std::size_t which = 0;
  while (!subs[which]->parsed()) ++which;
  const std::string sub = table[which].first;
  const auto* s = subs[which];

  RunConfig cfg;
  std::optional<std::filesystem::path> out_dir;
  if (!flags.out.empty()) out_dir = flags.out;
  try {
    apply_threads();
    if (!flags.config.empty()) {
      const auto base = std::filesystem::path(flags.config).parent_path();
      cfg = parse_config(read_file(flags.config), base.empty() ? "." : base.string());
    }
    if (s->count("--seed")) cfg.seed = flags.seed;
    if (s->count("--tol")) {
      try {
        cfg.tol = parse_real(flags.tol);
      } catch (const InvalidArgument&) {
        throw ConfigError("--tol is not a decimal real");
      }
      if (!(cfg.tol > 0.0 && cfg.tol < 1e-2)) throw ConfigError("--tol must lie in (0, 1e-2)");
    }
    if (!out_dir && cfg.out) out_dir = *cfg.out;
    if (!out_dir) throw ConfigError("no output directory: pass --out or set \"out\" in the config");
  } catch (const InvalidArgument& e) {
    err << "error: " << e.what() << "\n";
    if (out_dir) {
      try {
        Bundle b(*out_dir, sub, "", cfg.seed);
        b.error(e.what());
        b.finish("error");
      } catch (const std::exception&) {
      }
    }
    return kExitUsage;
  }

  const std::string command = "blowup " + sub + " --config config.json --seed " + std::to_string(cfg.seed) +
                              " --tol " + format_real(cfg.tol) + " --out .";
  std::unique_ptr<Bundle> bundle;
  try {
    bundle = std::make_unique<Bundle>(*out_dir, sub, command, cfg.seed);
    bundle->write("config.json", dump(normalized_config(cfg, sub)));
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }

  int code = kExitPass;
  std::string status;
  try {
    table[which].second(cfg, *bundle);
  } catch (const ConfigError& e) {
    bundle->error(e.what());
    status = "error";
    code = kExitUsage;
  } catch (const std::exception& e) {
    bundle->error(e.what());
    code = kExitCheckFailed;
  }
  try {
    bundle->finish(status);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitCheckFailed;
  }
  print_checks(*bundle, out);
  if (code == kExitPass && !bundle->passed()) code = kExitCheckFailed;
  if (code != kExitPass)
    err << sub << ": " << (code == kExitUsage ? "configuration error" : "checks failed") << "; summary in "
        << (bundle->dir() / "summary.json").string() << "\n";
  return code;
}

}  // namespace blowup::cli
