#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "blowup/error.hpp"

namespace blowup::cli {

using Json = nlohmann::ordered_json;

/// Malformed or out-of-range configuration; maps to exit code 2.
class ConfigError : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

struct DelaunaySection {
  std::vector<int> n{3, 4, 5, 6};
  std::vector<double> T{15, 20, 25, 30, 35};
  /// Neck sizes for the energy test as fractions of the cylinder value.
  std::vector<double> energy_fractions{0.1, 0.5, 0.9};
  int energy_periods = 10;
  double energy_threshold = 1e-9;
  double slope_tolerance = 0.03;
  double law_residual_max = 0.1;
};

struct GlueSection {
  std::vector<int> n{3};
  double D = 3.0;
  int m = 2;
  std::vector<double> T{15, 20, 25, 30, 35};
  double band_factor = 3.0;
  double identity_max = 1e-10;
  double series_T = 25.0;
  int series_points = 2001;
  std::vector<double> epsilon{1e-2, 1e-3};
  std::vector<double> fd_h{1e-2, 5e-3, 2.5e-3};
  int fd_points = 2001;
  int samples_per_window = 4096;
  double profile_tol = 1e-13;
};

struct ConstructSection {
  std::vector<int> n{3};
  int stages = 5;
  double epsilon = 0.1;
  double growth = 10.0;
  double xi0 = 2.0;
  std::vector<double> direction;
  int m = 2;
  double D_min = 3.0;
  double margin = 10.0;
  double measure_budget = 1e-2;
  int trace_points = 2001;
  /// Random points per stage ball for the sampled |K - 1| and exterior checks.
  int probe_points = 2000;
  int samples_per_window = 4096;
  double profile_tol = 1e-13;
};

struct ResidualSuite {
  std::vector<int> n{3};
  double D = 3.0;
  double T = 25.0;
  int m = 2;
  std::vector<double> h{4e-3, 2e-3, 1e-3};
  double bubble_h = 1e-3;
  double bubble_max = 1e-6;
  int points = 400;
  int stages = 2;
  double epsilon = 0.1;
  double growth = 10.0;
};

struct LipschitzSuite {
  std::vector<int> n{5};
  double D = 3.0;
  double T_start = 0.0;
  std::uint64_t pairs = 100000;
  std::uint64_t scan_pairs = 10000;
  int shards = 64;
};

struct HolderSuite {
  std::vector<double> alpha{0.25, 0.5, 1.0};
  std::uint64_t pairs = 100000;
};

struct CriticalSuite {
  std::vector<int> n{3};
  std::vector<double> beta{0.25};
  double D = 3.0;
  double T_start = 0.0;
};

struct VerifySection {
  std::vector<std::string> suites{"residual", "lipschitz", "holder", "critical"};
  double profile_tol = 1e-13;
  ResidualSuite residual;
  LipschitzSuite lipschitz;
  HolderSuite holder;
  CriticalSuite critical;

  bool wants(const std::string& suite) const;
};

struct ReportSection {
  /// Bundle directories, resolved against the config file location.
  std::vector<std::string> inputs;
};

struct RunConfig {
  double tol = 1e-10;
  std::uint64_t seed = 1;
  std::optional<std::string> out;
  DelaunaySection delaunay;
  GlueSection glue;
  ConstructSection construct;
  VerifySection verify;
  ReportSection report;
};

/// Parses a config document. Reals may be numbers or decimal strings; unknown
/// keys, empty grids and out-of-range values throw ConfigError. Relative report
/// inputs are resolved against base_dir.
RunConfig parse_config(const std::string& text, const std::string& base_dir = ".");
RunConfig default_config();

/// Fully resolved config for one subcommand; parsing it back gives the same run.
Json normalized_config(const RunConfig& config, const std::string& subcommand);

}  // namespace blowup::cli
