#include "blowup/cli/config.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <limits>
#include <set>

#include "blowup/format.hpp"

namespace blowup::cli {

namespace {

// Reads one JSON object, remembering which keys were consumed.
class Reader {
 public:
  Reader(const Json& obj, std::string path) : obj_(obj), path_(std::move(path)) {
    if (!obj_.is_object()) fail("", "must be an object");
  }

  bool has(const std::string& key) const { return obj_.contains(key); }

  double real(const std::string& key, double def) {
    if (!take(key)) return def;
    return to_real(obj_.at(key), key);
  }

  std::vector<double> reals(const std::string& key, std::vector<double> def) {
    if (!take(key)) return def;
    const Json& v = obj_.at(key);
    if (!v.is_array()) fail(key, "must be a list of reals");
    std::vector<double> out;
    for (const auto& x : v) out.push_back(to_real(x, key));
    if (out.empty()) fail(key, "must not be empty");
    return out;
  }

  long long integer(const std::string& key, long long def) {
    if (!take(key)) return def;
    return to_integer(obj_.at(key), key);
  }

  std::uint64_t u64(const std::string& key, std::uint64_t def) {
    if (!take(key)) return def;
    const Json& v = obj_.at(key);
    if (v.is_number_unsigned()) return v.get<std::uint64_t>();
    if (v.is_string()) {
      const std::string s = v.get<std::string>();
      std::size_t used = 0;
      try {
        if (!s.empty() && s[0] != '-') {
          const unsigned long long x = std::stoull(s, &used, 10);
          if (used == s.size()) return x;
        }
      } catch (const std::exception&) {
      }
    }
    fail(key, "must be an unsigned 64-bit integer");
  }

  /// An integer or a non-empty list of integers.
  std::optional<std::vector<int>> ints(const std::string& key) {
    if (!take(key)) return std::nullopt;
    const Json& v = obj_.at(key);
    std::vector<int> out;
    if (v.is_array()) {
      for (const auto& x : v) out.push_back(static_cast<int>(to_integer(x, key)));
      if (out.empty()) fail(key, "must not be empty");
    } else {
      out.push_back(static_cast<int>(to_integer(v, key)));
    }
    return out;
  }

  std::optional<std::string> str(const std::string& key) {
    if (!take(key)) return std::nullopt;
    const Json& v = obj_.at(key);
    if (!v.is_string()) fail(key, "must be a string");
    return v.get<std::string>();
  }

  std::vector<std::string> strings(const std::string& key, std::vector<std::string> def) {
    if (!take(key)) return def;
    const Json& v = obj_.at(key);
    if (!v.is_array()) fail(key, "must be a list of strings");
    std::vector<std::string> out;
    for (const auto& x : v) {
      if (!x.is_string()) fail(key, "must be a list of strings");
      out.push_back(x.get<std::string>());
    }
    if (out.empty()) fail(key, "must not be empty");
    return out;
  }

  std::optional<Reader> section(const std::string& key) {
    if (!take(key)) return std::nullopt;
    return Reader(obj_.at(key), child(key));
  }

  /// Rejects every key that was not consumed.
  void finish() const {
    for (auto it = obj_.begin(); it != obj_.end(); ++it)
      if (!used_.count(it.key())) fail(it.key(), "unknown key");
  }

  [[noreturn]] void fail(const std::string& key, const std::string& what) const {
    const std::string where = key.empty() ? path_ : child(key);
    throw ConfigError("config: " + (where.empty() ? std::string("document") : where) + ": " + what);
  }

 private:
  bool take(const std::string& key) {
    if (!obj_.contains(key)) return false;
    used_.insert(key);
    return true;
  }

  std::string child(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

  double to_real(const Json& v, const std::string& key) const {
    double x = 0.0;
    if (v.is_number()) {
      x = v.get<double>();
    } else if (v.is_string()) {
      try {
        x = parse_real(v.get<std::string>());
      } catch (const InvalidArgument&) {
        fail(key, "is not a decimal real");
      }
    } else {
      fail(key, "must be a real");
    }
    if (!std::isfinite(x)) fail(key, "must be finite");
    return x;
  }

  long long to_integer(const Json& v, const std::string& key) const {
    if (v.is_number_integer()) return v.get<long long>();
    fail(key, "must be an integer");
  }

  const Json& obj_;
  std::string path_;
  std::set<std::string> used_;
};

void require(bool ok, const std::string& what) {
  if (!ok) throw ConfigError("config: " + what);
}

void check_dims(const std::vector<int>& ns, const std::string& where) {
  for (int n : ns) require(n >= 3, where + ".n: dimension must be >= 3");
}

void check_positive(const std::vector<double>& xs, const std::string& where) {
  for (double x : xs) require(x > 0.0, where + ": values must be positive");
}

std::vector<int> dims(Reader& r, const std::optional<std::vector<int>>& top, std::vector<int> def) {
  if (auto own = r.ints("n")) return *own;
  return top ? *top : def;
}

void read_delaunay(Reader& r, const std::optional<std::vector<int>>& top, DelaunaySection& s) {
  s.n = dims(r, top, s.n);
  s.T = r.reals("T", s.T);
  s.energy_fractions = r.reals("energy_fractions", s.energy_fractions);
  s.energy_periods = static_cast<int>(r.integer("energy_periods", s.energy_periods));
  s.energy_threshold = r.real("energy_threshold", s.energy_threshold);
  s.slope_tolerance = r.real("slope_tolerance", s.slope_tolerance);
  s.law_residual_max = r.real("law_residual_max", s.law_residual_max);
  r.finish();
}

void read_glue(Reader& r, const std::optional<std::vector<int>>& top, GlueSection& s) {
  s.n = dims(r, top, s.n);
  s.D = r.real("D", s.D);
  s.m = static_cast<int>(r.integer("m", s.m));
  s.T = r.reals("T", s.T);
  s.band_factor = r.real("band_factor", s.band_factor);
  s.identity_max = r.real("identity_max", s.identity_max);
  s.series_T = r.real("series_T", s.series_T);
  s.series_points = static_cast<int>(r.integer("series_points", s.series_points));
  s.epsilon = r.reals("epsilon", s.epsilon);
  s.fd_h = r.reals("fd_h", s.fd_h);
  s.fd_points = static_cast<int>(r.integer("fd_points", s.fd_points));
  s.samples_per_window = static_cast<int>(r.integer("samples_per_window", s.samples_per_window));
  s.profile_tol = r.real("profile_tol", s.profile_tol);
  r.finish();
}

void read_construct(Reader& r, const std::optional<std::vector<int>>& top, ConstructSection& s) {
  s.n = dims(r, top, s.n);
  s.stages = static_cast<int>(r.integer("stages", s.stages));
  s.epsilon = r.real("epsilon", s.epsilon);
  s.growth = r.real("growth", s.growth);
  s.xi0 = r.real("xi0", s.xi0);
  if (r.has("direction")) s.direction = r.reals("direction", {});
  s.m = static_cast<int>(r.integer("m", s.m));
  s.D_min = r.real("D_min", s.D_min);
  s.margin = r.real("margin", s.margin);
  s.measure_budget = r.real("measure_budget", s.measure_budget);
  s.trace_points = static_cast<int>(r.integer("trace_points", s.trace_points));
  s.probe_points = static_cast<int>(r.integer("probe_points", s.probe_points));
  s.samples_per_window = static_cast<int>(r.integer("samples_per_window", s.samples_per_window));
  s.profile_tol = r.real("profile_tol", s.profile_tol);
  r.finish();
}

void read_verify(Reader& r, const std::optional<std::vector<int>>& top, VerifySection& s) {
  s.suites = r.strings("suites", s.suites);
  s.profile_tol = r.real("profile_tol", s.profile_tol);
  if (auto q = r.section("residual")) {
    auto& x = s.residual;
    x.n = dims(*q, top, x.n);
    x.D = q->real("D", x.D);
    x.T = q->real("T", x.T);
    x.m = static_cast<int>(q->integer("m", x.m));
    x.h = q->reals("h", x.h);
    x.bubble_h = q->real("bubble_h", x.bubble_h);
    x.bubble_max = q->real("bubble_max", x.bubble_max);
    x.points = static_cast<int>(q->integer("points", x.points));
    x.stages = static_cast<int>(q->integer("stages", x.stages));
    x.epsilon = q->real("epsilon", x.epsilon);
    x.growth = q->real("growth", x.growth);
    q->finish();
  } else if (top) {
    s.residual.n = *top;
  }
  if (auto q = r.section("lipschitz")) {
    auto& x = s.lipschitz;
    x.n = dims(*q, top, x.n);
    x.D = q->real("D", x.D);
    x.T_start = q->real("T_start", x.T_start);
    x.pairs = q->u64("pairs", x.pairs);
    x.scan_pairs = q->u64("scan_pairs", x.scan_pairs);
    x.shards = static_cast<int>(q->integer("shards", x.shards));
    q->finish();
  } else if (top) {
    s.lipschitz.n = *top;
  }
  if (auto q = r.section("holder")) {
    s.holder.alpha = q->reals("alpha", s.holder.alpha);
    s.holder.pairs = q->u64("pairs", s.holder.pairs);
    q->finish();
  }
  if (auto q = r.section("critical")) {
    auto& x = s.critical;
    x.n = dims(*q, top, x.n);
    x.beta = q->reals("beta", x.beta);
    x.D = q->real("D", x.D);
    x.T_start = q->real("T_start", x.T_start);
    q->finish();
  } else if (top) {
    s.critical.n = *top;
  }
  r.finish();
}

void validate(const RunConfig& c) {
  require(c.tol > 0.0 && c.tol < 1e-2, "tol must lie in (0, 1e-2)");

  const auto& d = c.delaunay;
  check_dims(d.n, "delaunay");
  check_positive(d.T, "delaunay.T");
  for (double f : d.energy_fractions) require(f > 0.0 && f < 1.0, "delaunay.energy_fractions must lie in (0, 1)");
  require(d.energy_periods >= 1, "delaunay.energy_periods must be >= 1");
  require(d.energy_threshold > 0.0 && d.slope_tolerance > 0.0 && d.law_residual_max > 0.0,
          "delaunay thresholds must be positive");

  const auto& g = c.glue;
  check_dims(g.n, "glue");
  require(g.D >= 1.0, "glue.D must be >= 1");
  require(g.m >= 2, "glue.m must be >= 2");
  check_positive(g.T, "glue.T");
  check_positive(g.epsilon, "glue.epsilon");
  check_positive(g.fd_h, "glue.fd_h");
  require(g.fd_h.size() >= 2, "glue.fd_h needs at least two steps");
  require(g.band_factor > 1.0, "glue.band_factor must exceed 1");
  require(g.identity_max > 0.0, "glue.identity_max must be positive");
  require(g.series_points >= 2 && g.fd_points >= 2, "glue point counts must be >= 2");
  require(g.samples_per_window >= 16, "glue.samples_per_window must be >= 16");
  require(g.profile_tol > 0.0, "glue.profile_tol must be positive");

  const auto& k = c.construct;
  check_dims(k.n, "construct");
  require(k.stages >= 1, "construct.stages must be >= 1");
  require(k.epsilon > 0.0 && k.growth > 1.0 && k.xi0 > 0.0, "construct: epsilon > 0, growth > 1, xi0 > 0");
  require(k.m >= 2, "construct.m must be >= 2");
  require(k.D_min >= 1.0 && k.margin > 0.0 && k.measure_budget > 0.0, "construct: D_min >= 1, margin and budget > 0");
  require(k.trace_points >= 2 && k.probe_points >= 1, "construct point counts must be positive");
  require(k.samples_per_window >= 16, "construct.samples_per_window must be >= 16");
  require(k.profile_tol > 0.0, "construct.profile_tol must be positive");

  const auto& v = c.verify;
  static const std::set<std::string> known{"residual", "lipschitz", "holder", "critical"};
  for (const auto& s : v.suites) require(known.count(s) == 1, "verify.suites: unknown suite '" + s + "'");
  require(v.profile_tol > 0.0, "verify.profile_tol must be positive");
  check_dims(v.residual.n, "verify.residual");
  check_positive(v.residual.h, "verify.residual.h");
  require(v.residual.h.size() >= 2, "verify.residual.h needs at least two steps");
  require(v.residual.D >= 1.0 && v.residual.T > 4.0 * v.residual.D && v.residual.m >= 2,
          "verify.residual: D >= 1, T > 4D, m >= 2");
  require(v.residual.bubble_h > 0.0 && v.residual.bubble_max > 0.0 && v.residual.points >= 2,
          "verify.residual: bubble_h, bubble_max and points must be positive");
  require(v.residual.stages >= 1 && v.residual.epsilon > 0.0 && v.residual.growth > 1.0,
          "verify.residual: stages >= 1, epsilon > 0, growth > 1");
  check_dims(v.lipschitz.n, "verify.lipschitz");
  require(v.lipschitz.D >= 1.0 && v.lipschitz.T_start >= 0.0, "verify.lipschitz: D >= 1, T_start >= 0");
  require(v.lipschitz.pairs >= 1 && v.lipschitz.scan_pairs >= 1 && v.lipschitz.shards >= 1,
          "verify.lipschitz: pair and shard counts must be positive");
  for (double a : v.holder.alpha) require(a > 0.0 && a <= 1.0, "verify.holder.alpha must lie in (0, 1]");
  require(v.holder.pairs >= 1, "verify.holder.pairs must be positive");
  check_dims(v.critical.n, "verify.critical");
  check_positive(v.critical.beta, "verify.critical.beta");
  require(v.critical.D >= 1.0 && v.critical.T_start >= 0.0, "verify.critical: D >= 1, T_start >= 0");
}

Json reals_json(const std::vector<double>& xs) {
  Json a = Json::array();
  for (double x : xs) a.push_back(format_real(x));
  return a;
}

Json ints_json(const std::vector<int>& xs) {
  Json a = Json::array();
  for (int x : xs) a.push_back(x);
  return a;
}

}  // namespace

bool VerifySection::wants(const std::string& suite) const {
  return std::find(suites.begin(), suites.end(), suite) != suites.end();
}

RunConfig default_config() { return RunConfig{}; }

RunConfig parse_config(const std::string& text, const std::string& base_dir) {
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ConfigError(std::string("config: not valid JSON: ") + e.what());
  }
  RunConfig c;
  Reader r(doc, "");
  c.tol = r.real("tol", c.tol);
  c.seed = r.u64("seed", c.seed);
  c.out = r.str("out");
  const auto top = r.ints("n");
  if (auto s = r.section("delaunay")) read_delaunay(*s, top, c.delaunay);
  else if (top) c.delaunay.n = *top;
  if (auto s = r.section("glue")) read_glue(*s, top, c.glue);
  else if (top) c.glue.n = *top;
  if (auto s = r.section("construct")) read_construct(*s, top, c.construct);
  else if (top) c.construct.n = *top;
  if (auto s = r.section("verify")) {
    read_verify(*s, top, c.verify);
  } else if (top) {
    c.verify.residual.n = *top;
    c.verify.lipschitz.n = *top;
    c.verify.critical.n = *top;
  }
  if (auto s = r.section("report")) {
    for (const auto& p : s->strings("inputs", {})) {
      std::filesystem::path path(p);
      if (path.is_relative()) path = std::filesystem::absolute(std::filesystem::path(base_dir) / path);
      c.report.inputs.push_back(path.lexically_normal().string());
    }
    s->finish();
  }
  r.finish();
  validate(c);
  return c;
}

Json normalized_config(const RunConfig& c, const std::string& sub) {
  Json j;
  j["tol"] = format_real(c.tol);
  j["seed"] = c.seed;
  if (sub == "delaunay") {
    const auto& d = c.delaunay;
    Json s;
    s["n"] = ints_json(d.n);
    s["T"] = reals_json(d.T);
    s["energy_fractions"] = reals_json(d.energy_fractions);
    s["energy_periods"] = d.energy_periods;
    s["energy_threshold"] = format_real(d.energy_threshold);
    s["slope_tolerance"] = format_real(d.slope_tolerance);
    s["law_residual_max"] = format_real(d.law_residual_max);
    j["delaunay"] = s;
  } else if (sub == "glue") {
    const auto& g = c.glue;
    Json s;
    s["n"] = ints_json(g.n);
    s["D"] = format_real(g.D);
    s["m"] = g.m;
    s["T"] = reals_json(g.T);
    s["band_factor"] = format_real(g.band_factor);
    s["identity_max"] = format_real(g.identity_max);
    s["series_T"] = format_real(g.series_T);
    s["series_points"] = g.series_points;
    s["epsilon"] = reals_json(g.epsilon);
    s["fd_h"] = reals_json(g.fd_h);
    s["fd_points"] = g.fd_points;
    s["samples_per_window"] = g.samples_per_window;
    s["profile_tol"] = format_real(g.profile_tol);
    j["glue"] = s;
  } else if (sub == "construct") {
    const auto& k = c.construct;
    Json s;
    s["n"] = ints_json(k.n);
    s["stages"] = k.stages;
    s["epsilon"] = format_real(k.epsilon);
    s["growth"] = format_real(k.growth);
    s["xi0"] = format_real(k.xi0);
    if (!k.direction.empty()) s["direction"] = reals_json(k.direction);
    s["m"] = k.m;
    s["D_min"] = format_real(k.D_min);
    s["margin"] = format_real(k.margin);
    s["measure_budget"] = format_real(k.measure_budget);
    s["trace_points"] = k.trace_points;
    s["probe_points"] = k.probe_points;
    s["samples_per_window"] = k.samples_per_window;
    s["profile_tol"] = format_real(k.profile_tol);
    j["construct"] = s;
  } else if (sub == "verify") {
    const auto& v = c.verify;
    Json s;
    s["suites"] = v.suites;
    s["profile_tol"] = format_real(v.profile_tol);
    const auto& r = v.residual;
    s["residual"] = Json{{"n", ints_json(r.n)},
                         {"D", format_real(r.D)},
                         {"T", format_real(r.T)},
                         {"m", r.m},
                         {"h", reals_json(r.h)},
                         {"bubble_h", format_real(r.bubble_h)},
                         {"bubble_max", format_real(r.bubble_max)},
                         {"points", r.points},
                         {"stages", r.stages},
                         {"epsilon", format_real(r.epsilon)},
                         {"growth", format_real(r.growth)}};
    const auto& l = v.lipschitz;
    s["lipschitz"] = Json{{"n", ints_json(l.n)},
                          {"D", format_real(l.D)},
                          {"T_start", format_real(l.T_start)},
                          {"pairs", l.pairs},
                          {"scan_pairs", l.scan_pairs},
                          {"shards", l.shards}};
    s["holder"] = Json{{"alpha", reals_json(v.holder.alpha)}, {"pairs", v.holder.pairs}};
    const auto& k = v.critical;
    s["critical"] = Json{{"n", ints_json(k.n)},
                         {"beta", reals_json(k.beta)},
                         {"D", format_real(k.D)},
                         {"T_start", format_real(k.T_start)}};
    j["verify"] = s;
  } else if (sub == "report") {
    j["report"] = Json{{"inputs", c.report.inputs}};
  }
  return j;
}

}  // namespace blowup::cli
