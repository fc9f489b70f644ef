#include "blowup/verify/lipschitz.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <sstream>

#include "blowup/verify/rng.hpp"

namespace blowup::verify {

using conformal::Point;

RadialKField::RadialKField(std::shared_ptr<const glue::KRadialProfile> k) : k_(std::move(k)) {
  if (!k_) throw InvalidArgument("missing K profile");
  if (k_->modified().cycles() != 2) throw InvalidArgument("radial field checks need a two-cycle construction");
}

double RadialKField::K_r(double r) const {
  if (!(r > 0.0)) return 1.0;
  return 1.0 + k_->jet(-std::log(r)).km1;
}

namespace {

double km1_r(const RadialKField& K, double r) {
  if (!(r > 0.0)) return 0.0;
  return K.profile().jet(-std::log(r)).km1;
}

// Dense maximum of f over the windows with one Chebyshev refinement pass.
template <class F>
std::pair<double, double> window_max(const std::vector<glue::Interval>& windows, int per, F&& f) {
  double best = 0.0;
  double best_t = windows.front().lo;
  for (const auto& w : windows) {
    const double h = (w.hi - w.lo) / per;
    auto vals = par::map_index<double>(static_cast<std::size_t>(per) + 1,
                                       [&](std::size_t i) { return f(w.lo + h * static_cast<double>(i)); });
    for (std::size_t i = 0; i < vals.size(); ++i) {
      if (vals[i] > best) {
        best = vals[i];
        best_t = w.lo + h * static_cast<double>(i);
      }
    }
  }
  for (int round = 0; round < 3; ++round) {
    const double h = (windows.front().hi - windows.front().lo) / per / std::pow(32.0, round);
    const double lo = best_t - h;
    const double hi = best_t + h;
    for (int i = 0; i < 64; ++i) {
      const double t = 0.5 * (lo + hi) + 0.5 * (hi - lo) * std::cos(std::numbers::pi * (2.0 * i + 1.0) / 128.0);
      const double v = f(t);
      if (v > best) {
        best = v;
        best_t = t;
      }
    }
  }
  return {best, best_t};
}

}  // namespace

double RadialKField::gradient_bound() const {
  const auto& prof = *k_;
  return window_max(prof.support(), 4096, [&](double t) { return std::abs(prof.jet(t).dk) * std::exp(t); }).first;
}

RadialKField two_cycle_field(const Dimension& dim, double D, double T, double profile_tol,
                             const glue::KSamplingOptions& sampling) {
  auto base = ode::solve_by_period(dim, T, profile_tol);
  auto k = std::make_shared<glue::KRadialProfile>(glue::splice(base, D, 2), sampling);
  return RadialKField(std::move(k));
}

double pair_ratio(const RadialKField& K, const Point& x, const Point& y, double alpha) {
  const double d = distance(x, y);
  const double num = std::abs(km1_r(K, x.norm()) - km1_r(K, y.norm()));
  if (num == 0.0) return 0.0;
  return num / std::pow(d, alpha);
}

namespace {

enum class Case { y0_outer_zone, y0_annulus, y0_core, annulus, cross, collinear, local, outside, ball, count };

const char* case_name(Case c) {
  switch (c) {
    case Case::y0_outer_zone: return "y0_outer_zone";
    case Case::y0_annulus: return "y0_annulus";
    case Case::y0_core: return "y0_core";
    case Case::annulus: return "annulus";
    case Case::cross: return "cross_zone";
    case Case::collinear: return "collinear";
    case Case::local: return "local";
    case Case::outside: return "outside_support";
    case Case::ball: return "ball";
    default: return "?";
  }
}

// t-ranges of the three zones: [-ln 2, D], [D, T - D], [T - D, T - D + 8].
struct Zones {
  double D, T;
  double z1_lo() const { return -std::log(2.0); }
  double z3_hi() const { return T - D + 8.0; }
};

class PairSampler {
 public:
  PairSampler(const RadialKField& K, std::uint64_t seed, std::uint64_t shard)
      : n_(static_cast<std::size_t>(K.dim().n())), z_{K.D(), K.T()}, rng_(seed, shard) {
    for (const auto& w : K.profile().support()) windows_.push_back(w);
  }

  Point direction() {
    std::vector<double> c(n_);
    double len = 0.0;
    while (!(len > 1e-8)) {
      len = 0.0;
      for (double& x : c) {
        x = rng_.normal();
        len += x * x;
      }
      len = std::sqrt(len);
    }
    return (1.0 / len) * Point(std::move(c));
  }

  double t_zone(int zone) {
    switch (zone) {
      case 1: return rng_.uniform(z_.z1_lo(), z_.D);
      case 3: return rng_.uniform(z_.T - z_.D, z_.z3_hi());
      default:
        if (rng_.uniform() < 0.5) return t_window();
        return rng_.uniform(z_.D, z_.T - z_.D);
    }
  }
  double t_window() {
    const auto& w = windows_[static_cast<std::size_t>(rng_.bits() % windows_.size())];
    return rng_.uniform(w.lo, w.hi);
  }
  double t_outside() {
    return rng_.uniform() < 0.5 ? rng_.uniform(z_.z1_lo(), z_.D) : rng_.uniform(z_.T - z_.D, z_.z3_hi());
  }
  Point at(double t) { return std::exp(-t) * direction(); }
  Point in_ball(double radius) {
    const double r = radius * std::pow(rng_.uniform(), 1.0 / static_cast<double>(n_));
    return r * direction();
  }

  std::pair<Point, Point> pair(Case c) {
    switch (c) {
      case Case::y0_outer_zone: return {at(t_zone(1)), Point::zero(n_)};
      case Case::y0_annulus: return {at(t_zone(2)), Point::zero(n_)};
      case Case::y0_core: return {at(t_zone(3)), Point::zero(n_)};
      case Case::annulus: return {at(t_zone(2)), at(t_zone(2))};
      case Case::cross: {
        const int other = rng_.uniform() < 0.5 ? 1 : 3;
        return {at(t_zone(2)), at(t_zone(other))};
      }
      case Case::collinear: {
        const Point d = direction();
        const int za = 1 + static_cast<int>(rng_.bits() % 3);
        const int zb = 1 + static_cast<int>(rng_.bits() % 3);
        return {std::exp(-t_zone(za)) * d, std::exp(-t_zone(zb)) * d};
      }
      case Case::local: {
        const double t = t_window();
        const double delta = std::exp(rng_.uniform(std::log(1e-4), std::log(1e-1)));
        const Point d = direction();
        const Point x = std::exp(-t) * d;
        Point y = std::exp(-t - (rng_.uniform() < 0.5 ? delta : -delta)) * d;
        if (rng_.uniform() < 0.5) y = y + (delta * std::exp(-t)) * direction();
        return {x, y};
      }
      case Case::outside: return {at(t_outside()), at(t_outside())};
      default: return {in_ball(2.0), in_ball(2.0)};
    }
  }

 private:
  std::size_t n_;
  Zones z_;
  Rng rng_;
  std::vector<glue::Interval> windows_;
};

Point rotate(const std::vector<double>& Q, const Point& x) {
  if (Q.empty()) return x;
  const std::size_t n = x.size();
  if (Q.size() != n * n) throw InvalidArgument("rotation must be n x n");
  Point out = Point::zero(n);
  for (std::size_t i = 0; i < n; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < n; ++j) s += Q[i * n + j] * x[j];
    out[i] = s;
  }
  return out;
}

struct ShardResult {
  std::vector<CaseStats> cases;
  PairWitness worst;
  double y0_max = 0.0;
  double near_max = 0.0;  // |x - y| <= 1
  double far_max = 0.0;
};

// Slot pattern per 20 pairs: fixed fractions of each case.
constexpr Case kLipschitzPattern[20] = {
    Case::y0_outer_zone, Case::y0_annulus, Case::y0_core, Case::annulus,   Case::annulus,
    Case::annulus,       Case::annulus,    Case::cross,   Case::cross,     Case::cross,
    Case::collinear,     Case::collinear,  Case::collinear, Case::local,   Case::local,
    Case::local,         Case::local,      Case::local,   Case::outside,   Case::outside};

constexpr Case kHolderPattern[20] = {
    Case::y0_annulus, Case::y0_core,  Case::annulus, Case::annulus, Case::cross, Case::cross, Case::local,
    Case::local,      Case::local,    Case::local,   Case::local,   Case::local, Case::ball,  Case::ball,
    Case::ball,       Case::ball,     Case::ball,    Case::collinear, Case::collinear, Case::y0_outer_zone};

bool in_closed_ball(const Point& x, double r) { return x.norm() <= r; }

template <class Accept>
std::vector<ShardResult> sample_pairs(const RadialKField& K, const PairSamplingOptions& opt, const Case* pattern,
                                      double alpha, Accept&& accept) {
  if (opt.shards < 1) throw InvalidArgument("need at least one shard");
  const std::size_t shards = static_cast<std::size_t>(opt.shards);
  const std::size_t per = (opt.pairs + shards - 1) / shards;
  return par::map_index<ShardResult>(
      shards,
      [&](std::size_t s) {
        ShardResult res;
        res.cases.resize(static_cast<std::size_t>(Case::count));
        for (std::size_t c = 0; c < res.cases.size(); ++c) res.cases[c].name = case_name(static_cast<Case>(c));
        PairSampler sampler(K, opt.seed, s);
        const std::size_t begin = s * per;
        const std::size_t end = std::min(opt.pairs, begin + per);
        for (std::size_t i = begin; i < end; ++i) {
          const Case c = pattern[i % 20];
          auto [x, y] = sampler.pair(c);
          while (!accept(x, y)) std::tie(x, y) = sampler.pair(c);
          x = rotate(opt.rotation, x);
          y = rotate(opt.rotation, y);
          if (x == y) continue;
          const double ratio = pair_ratio(K, x, y, alpha);
          auto& st = res.cases[static_cast<std::size_t>(c)];
          ++st.count;
          st.max_ratio = std::max(st.max_ratio, ratio);
          if (c == Case::y0_outer_zone || c == Case::y0_annulus || c == Case::y0_core)
            res.y0_max = std::max(res.y0_max, std::abs(km1_r(K, x.norm())) / x.norm());
          if (distance(x, y) <= 1.0) res.near_max = std::max(res.near_max, ratio);
          else res.far_max = std::max(res.far_max, ratio);
          if (ratio > res.worst.ratio) res.worst = {x, y, ratio, case_name(c)};
        }
        return res;
      },
      opt.exec);
}

void merge(const std::vector<ShardResult>& shards, std::vector<CaseStats>& cases, PairWitness& worst, double& y0) {
  for (const auto& s : shards) {
    if (cases.empty()) cases = std::vector<CaseStats>(s.cases.size());
    for (std::size_t c = 0; c < s.cases.size(); ++c) {
      cases[c].name = s.cases[c].name;
      cases[c].count += s.cases[c].count;
      cases[c].max_ratio = std::max(cases[c].max_ratio, s.cases[c].max_ratio);
    }
    if (s.worst.ratio > worst.ratio) worst = s.worst;
    y0 = std::max(y0, s.y0_max);
  }
  cases.erase(std::remove_if(cases.begin(), cases.end(), [](const CaseStats& c) { return c.count == 0; }),
              cases.end());
}

}  // namespace

LipschitzReport lipschitz_extension_check(const RadialKField& K, const PairSamplingOptions& opt) {
  if (K.dim().n() <= 4) {
    std::ostringstream msg;
    msg << "the Lipschitz extension of K to the origin requires n > 4 (got n = " << K.dim().n() << ")";
    throw InvalidArgument(msg.str());
  }
  LipschitzReport rep;
  rep.T = K.T();
  rep.D = K.D();
  rep.seed = opt.seed;
  rep.shards = opt.shards;
  auto shards = sample_pairs(K, opt, kLipschitzPattern, 1.0, [](const Point&, const Point&) { return true; });
  merge(shards, rep.cases, rep.worst, rep.y0_max);
  for (const auto& c : rep.cases) rep.pairs += c.count;
  rep.max_ratio = rep.worst.ratio;
  rep.gradient_bound = K.gradient_bound();
  rep.passed = rep.max_ratio <= 1.0 && rep.y0_max <= 1.0 && rep.gradient_bound <= 1.0;
  return rep;
}

HolderReport holder_check(const RadialKField& K, double alpha, double C, const PairSamplingOptions& opt) {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw InvalidArgument("Hoelder exponent must lie in (0, 1]");
  if (!(C > 0.0)) throw InvalidArgument("Lipschitz constant must be positive");
  HolderReport rep;
  rep.alpha = alpha;
  rep.C = C;
  rep.bound = 4.0 * C;
  auto accept = [](const Point& x, const Point& y) { return in_closed_ball(x, 2.0) && in_closed_ball(y, 2.0); };
  auto shards = sample_pairs(K, opt, kHolderPattern, alpha, accept);
  std::vector<CaseStats> cases;
  double unused = 0.0;
  merge(shards, cases, rep.worst, unused);
  for (const auto& c : cases) rep.pairs += c.count;
  rep.max_ratio = rep.worst.ratio;
  for (const auto& s : shards) {
    rep.max_ratio_near = std::max(rep.max_ratio_near, s.near_max);
    rep.max_ratio_far = std::max(rep.max_ratio_far, s.far_max);
  }
  rep.passed = rep.max_ratio <= rep.bound;
  return rep;
}

CriticalOrderReport critical_order_check(const RadialKField& K, double beta, int samples_per_window) {
  const double k = K.dim().weight();
  if (!(beta > 0.0 && beta < k)) throw InvalidArgument("beta must satisfy 0 < beta < (n-2)/2");
  CriticalOrderReport rep;
  rep.beta = beta;
  rep.exponent = k - beta;
  const auto& prof = K.profile();
  auto [best, t] = window_max(prof.support(), samples_per_window,
                              [&](double s) { return std::abs(prof.jet(s).km1) * std::exp(rep.exponent * s); });
  rep.max_ratio = best;
  rep.witness_t = t;
  rep.samples = prof.support().size() * static_cast<std::size_t>(samples_per_window + 1);
  rep.passed = best <= 1.0;
  return rep;
}

double scan_period(const std::function<bool(double)>& check, double T_start, double T_max) {
  double T = std::ceil(T_start);
  if (check(T)) return T;
  double lo = T;
  for (;;) {
    double next = 2.0 * T;
    if (next > T_max) {
      if (T >= std::floor(T_max)) {
        std::ostringstream msg;
        msg << "no period up to " << T_max << " passes the check";
        throw Infeasible(msg.str());
      }
      next = std::floor(T_max);
    }
    T = next;
    if (check(T)) break;
    lo = T;
  }
  double hi = T;
  while (hi - lo > 1.0) {
    const double mid = std::floor(0.5 * (lo + hi));
    if (check(mid)) hi = mid;
    else lo = mid;
  }
  return hi;
}

LipschitzScanResult lipschitz_T_scan(const Dimension& dim, const LipschitzScanOptions& opt) {
  if (dim.n() <= 4) {
    std::ostringstream msg;
    msg << "the Lipschitz extension of K to the origin requires n > 4 (got n = " << dim.n() << ")";
    throw InvalidArgument(msg.str());
  }
  const double T0 = opt.T_start > 0.0 ? opt.T_start : std::floor(4.0 * opt.D + 1.0) + 1.0;
  std::map<double, std::shared_ptr<RadialKField>> fields;
  auto field = [&](double T) {
    auto& f = fields[T];
    if (!f) f = std::make_shared<RadialKField>(two_cycle_field(dim, opt.D, T, opt.profile_tol));
    return f;
  };
  LipschitzScanResult out;
  PairSamplingOptions scan = opt.certify;
  scan.pairs = opt.scan_pairs;
  auto check = [&](double T) {
    const auto rep = lipschitz_extension_check(*field(T), scan);
    out.history.push_back({T, std::max(rep.max_ratio, rep.gradient_bound), rep.passed});
    return rep.passed;
  };
  double T = scan_period(check, T0, dim.max_period());
  PairSamplingOptions cert = opt.certify;
  cert.seed = splitmix64(opt.certify.seed + 1);
  for (int attempt = 0; attempt < 32; ++attempt, T += 1.0) {
    out.report = lipschitz_extension_check(*field(T), cert);
    out.history.push_back({T, std::max(out.report.max_ratio, out.report.gradient_bound), out.report.passed});
    if (out.report.passed) break;
  }
  out.T = T;
  out.field = field(T);
  return out;
}

CriticalScanResult critical_T_scan(const Dimension& dim, double beta, double D, double T_start, double profile_tol) {
  const double T0 = T_start > 0.0 ? T_start : std::floor(4.0 * D + 1.0) + 1.0;
  std::map<double, std::shared_ptr<RadialKField>> fields;
  auto field = [&](double T) {
    auto& f = fields[T];
    if (!f) f = std::make_shared<RadialKField>(two_cycle_field(dim, D, T, profile_tol));
    return f;
  };
  CriticalScanResult out;
  auto check = [&](double T) {
    const auto rep = critical_order_check(*field(T), beta);
    out.history.push_back({T, rep.max_ratio, rep.passed});
    return rep.passed;
  };
  double T = scan_period(check, T0, dim.max_period());
  // Certification at double the sampling density.
  for (int attempt = 0; attempt < 32; ++attempt, T += 1.0) {
    out.report = critical_order_check(*field(T), beta, 8192);
    out.history.push_back({T, out.report.max_ratio, out.report.passed});
    if (out.report.passed) break;
  }
  out.T = T;
  out.field = field(T);
  return out;
}

}  // namespace blowup::verify
