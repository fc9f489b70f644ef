#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "blowup/cli/config.hpp"

namespace blowup::cli {

std::string sha256_hex(std::string_view data);

/// Comma-separated table with a header row and LF line endings.
class Csv {
 public:
  explicit Csv(std::vector<std::string> header);
  void row(const std::vector<std::string>& cells);
  std::string str() const { return text_; }

 private:
  std::size_t width_;
  std::string text_;
};

std::string cell(double x);
std::string cell(long long x);
std::string cell(int x);
std::string cell(std::size_t x);
std::string cell(bool x);

/// Two-column series with a one-line header naming the columns and the seed.
std::string plot_data(const std::string& x_name, const std::string& y_name, std::uint64_t seed,
                      const std::vector<double>& xs, const std::vector<double>& ys);

std::string dump(const Json& j);

struct Check {
  std::string name;
  bool passed = false;
  std::string value;
  std::string threshold;
  std::string detail;
};

/// Output directory of one subcommand run. Every written file is hashed and
/// listed in manifest.json with the command that regenerates it.
class Bundle {
 public:
  Bundle(std::filesystem::path dir, std::string subcommand, std::string command, std::uint64_t seed);

  const std::filesystem::path& dir() const { return dir_; }
  std::uint64_t seed() const { return seed_; }

  void write(const std::string& name, const std::string& content);
  void check(Check c);
  void check(const std::string& name, bool passed, double value, double threshold, const std::string& detail = "");
  /// Records a fatal error; the run is reported as failed.
  void error(const std::string& message);

  bool passed() const;
  const std::vector<Check>& checks() const { return checks_; }

  /// Writes summary.json and manifest.json.
  void finish(const std::string& status_override = "");

 private:
  std::filesystem::path dir_;
  std::string subcommand_;
  std::string command_;
  std::uint64_t seed_;
  std::vector<Check> checks_;
  std::vector<std::string> errors_;
  struct Entry {
    std::string path;
    std::string sha256;
    std::size_t bytes;
  };
  std::vector<Entry> files_;
};

}  // namespace blowup::cli
