#include "blowup/cli/bundle.hpp"

#include <fstream>

#include <openssl/evp.h>

#include "blowup/format.hpp"

namespace blowup::cli {

std::string sha256_hex(std::string_view data) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr) != 1)
    throw Error("sha256 digest failed");
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(hex[md[i] >> 4]);
    out.push_back(hex[md[i] & 15]);
  }
  return out;
}

namespace {

std::string escape(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

void append_row(std::string& text, const std::vector<std::string>& cells) {
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) text.push_back(',');
    text += escape(cells[i]);
  }
  text.push_back('\n');
}

}  // namespace

Csv::Csv(std::vector<std::string> header) : width_(header.size()) { append_row(text_, header); }

void Csv::row(const std::vector<std::string>& cells) {
  if (cells.size() != width_) throw Error("csv row width does not match the header");
  append_row(text_, cells);
}

std::string cell(double x) { return format_real(x); }
std::string cell(long long x) { return std::to_string(x); }
std::string cell(int x) { return std::to_string(x); }
std::string cell(std::size_t x) { return std::to_string(x); }
std::string cell(bool x) { return x ? "true" : "false"; }

std::string plot_data(const std::string& x_name, const std::string& y_name, std::uint64_t seed,
                      const std::vector<double>& xs, const std::vector<double>& ys) {
  if (xs.size() != ys.size()) throw Error("plot columns differ in length");
  std::string out = "# " + x_name + " " + y_name + " seed=" + std::to_string(seed) + "\n";
  for (std::size_t i = 0; i < xs.size(); ++i) out += format_real(xs[i]) + " " + format_real(ys[i]) + "\n";
  return out;
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

Bundle::Bundle(std::filesystem::path dir, std::string subcommand, std::string command, std::uint64_t seed)
    : dir_(std::move(dir)), subcommand_(std::move(subcommand)), command_(std::move(command)), seed_(seed) {
  std::filesystem::create_directories(dir_);
}

void Bundle::write(const std::string& name, const std::string& content) {
  const auto path = dir_ / name;
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  f.write(content.data(), static_cast<std::streamsize>(content.size()));
  f.close();
  if (!f) throw Error("cannot write " + path.string());
  for (auto& e : files_)
    if (e.path == name) {
      e = Entry{name, sha256_hex(content), content.size()};
      return;
    }
  files_.push_back(Entry{name, sha256_hex(content), content.size()});
}

void Bundle::check(Check c) { checks_.push_back(std::move(c)); }

void Bundle::check(const std::string& name, bool passed, double value, double threshold, const std::string& detail) {
  checks_.push_back(Check{name, passed, format_real(value), format_real(threshold), detail});
}

void Bundle::error(const std::string& message) { errors_.push_back(message); }

bool Bundle::passed() const {
  if (!errors_.empty()) return false;
  for (const auto& c : checks_)
    if (!c.passed) return false;
  return true;
}

void Bundle::finish(const std::string& status_override) {
  Json s;
  s["format"] = "blowup-summary";
  s["version"] = 1;
  s["subcommand"] = subcommand_;
  s["seed"] = seed_;
  s["status"] = !status_override.empty() ? status_override : (passed() ? "pass" : "fail");
  s["passed"] = passed();
  Json checks = Json::array();
  for (const auto& c : checks_)
    checks.push_back(Json{{"name", c.name},
                          {"passed", c.passed},
                          {"value", c.value},
                          {"threshold", c.threshold},
                          {"detail", c.detail}});
  s["checks"] = checks;
  s["errors"] = errors_;
  Json files = Json::array();
  for (const auto& e : files_) files.push_back(e.path);
  s["files"] = files;
  write("summary.json", dump(s));

  Json m;
  m["format"] = "blowup-manifest";
  m["version"] = 1;
  m["subcommand"] = subcommand_;
  m["seed"] = seed_;
  Json entries = Json::array();
  for (const auto& e : files_)
    entries.push_back(Json{{"path", e.path}, {"command", command_}, {"sha256", e.sha256}, {"bytes", e.bytes}});
  m["files"] = entries;
  const std::string text = dump(m);
  std::ofstream f(dir_ / "manifest.json", std::ios::binary | std::ios::trunc);
  f.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!f) throw Error("cannot write manifest.json");
}

}  // namespace blowup::cli
