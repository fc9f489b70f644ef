// Acceptance run: one [PASS]/[FAIL] line per criterion, exit status 1 if any fails.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "blowup/assembly/plan.hpp"
#include "blowup/cli/commands.hpp"
#include "blowup/conformal/kelvin.hpp"
#include "blowup/format.hpp"
#include "blowup/glue/kfield.hpp"
#include "blowup/verify/lipschitz.hpp"
#include "blowup/verify/residual.hpp"
#include "blowup/verify/rng.hpp"

#ifndef BLOWUP_SOURCE_DIR
#define BLOWUP_SOURCE_DIR "."
#endif

using namespace blowup;
using conformal::Point;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.4g", x);
  return buf;
}

struct Outcome {
  bool passed = false;
  std::string detail;
};

int failures = 0;

void criterion(int id, const std::string& title, const std::function<Outcome()>& body) {
  Outcome o;
  const auto t0 = Clock::now();
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  if (!o.passed) ++failures;
  std::printf("[%s] %2d %s: %s (%.1f s)\n", o.passed ? "PASS" : "FAIL", id, title.c_str(), o.detail.c_str(),
              seconds_since(t0));
  std::fflush(stdout);
}

Point random_point(verify::Rng& rng, int n, double scale) {
  std::vector<double> c(static_cast<std::size_t>(n));
  for (auto& x : c) x = rng.uniform(-scale, scale);
  return Point(std::move(c));
}

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(a), std::abs(b)); }

struct SweepRow {
  double eta, sup, lip, c2v, c2dv, identity;
};

// Glue sweep at (n = 3, D = 3, m = 2) shared by criteria 4, 5 and 7.
const std::vector<SweepRow>& glue_sweep() {
  static const std::vector<SweepRow> rows = [] {
    std::vector<SweepRow> out;
    const Dimension d(3);
    for (double T : {15.0, 20.0, 25.0, 30.0, 35.0}) {
      const auto base = ode::solve_by_period(d, T, 1e-13);
      const auto k = glue::compute_K(glue::splice(base, 3.0, 2));
      SweepRow r{base.neck(), k.sup_deviation(), k.lipschitz_estimate(), 0.0, 0.0, k.max_identity_residual()};
      for (int i = 0; i <= 4000; ++i) {
        const auto dv = base.deviation(-6.0 + 12.0 * i / 4000.0);
        r.c2v = std::max(r.c2v, std::abs(dv.d0));
        r.c2dv = std::max(r.c2dv, std::abs(dv.d1));
      }
      out.push_back(r);
    }
    return out;
  }();
  return rows;
}

double band(const std::vector<SweepRow>& rows, double (*f)(const SweepRow&)) {
  double lo = INFINITY, hi = 0.0;
  for (const auto& r : rows) {
    lo = std::min(lo, f(r));
    hi = std::max(hi, f(r));
  }
  return hi / lo;
}

const assembly::PlanResult& five_stage_plan() {
  static const assembly::PlanResult p = assembly::plan_stages(Dimension(3), 0.1, 5, 10.0);
  return p;
}

const verify::LipschitzScanResult& lipschitz_run() {
  static const verify::LipschitzScanResult r = verify::lipschitz_T_scan(Dimension(5));
  return r;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

}  // namespace

int main() {
  criterion(1, "neck-size/period law", [] {
    const auto t0 = Clock::now();
    const std::vector<double> Ts{15, 20, 25, 30, 35};
    bool ok = true;
    std::string d;
    for (int n = 3; n <= 6; ++n) {
      const auto fit = ode::fit_neck_period_law(Dimension(n), Ts);
      const double relerr = std::abs(fit.slope / (-0.25 * (n - 2)) - 1.0);
      ok = ok && relerr <= 0.03 && fit.law_residual < 0.1;
      d += "n=" + std::to_string(n) + " slope " + fmt(fit.slope) + " resid " + fmt(fit.law_residual) + "; ";
    }
    const double t = seconds_since(t0);
    return Outcome{ok && t < 120.0, d + "runtime " + fmt(t) + " s"};
  });

  criterion(2, "energy conservation over 10 periods", [] {
    double worst = 0.0;
    for (int n = 3; n <= 6; ++n) {
      const Dimension d(n);
      for (double f : {0.1, 0.5, 0.9}) {
        const auto p = ode::solve_by_neck(d, f * d.cylinder_value(), 1e-10);
        const auto tr = ode::integrate(d, {0.0, p.max_value(), 0.0}, {0.0, 10.0 * p.period()}, 1e-10);
        const double h0 = ode::energy(d, p.max_value(), 0.0);
        for (const auto& s : tr.samples())
          worst = std::max(worst, std::abs(ode::energy(d, s.v, s.vprime) - h0) / std::abs(h0));
      }
    }
    return Outcome{worst < 1e-9, "max |dH|/|H| = " + fmt(worst) + " over n = 3..6, eta/v_cyl in {0.1, 0.5, 0.9}"};
  });

  criterion(3, "canonical profile exactness", [] {
    double worst = 0.0;
    for (int n = 3; n <= 8; ++n) {
      const Dimension d(n);
      for (int i = 0; i <= 60000; ++i) {
        const auto j = ode::canonical_profile(d, -30.0 + 0.001 * i);
        worst = std::max(worst, std::abs(j.vsecond - d.linear_coeff() * j.v +
                                         d.nonlinear_coeff() * std::pow(j.v, d.exponent())));
      }
    }
    return Outcome{worst < 1e-12, "max ODE residual " + fmt(worst) + " on |t| <= 30, n = 3..8"};
  });

  criterion(4, "C2-closeness scaling", [] {
    const auto& rows = glue_sweep();
    const double bv = band(rows, [](const SweepRow& r) { return r.c2v / (r.eta * r.eta); });
    const double bd = band(rows, [](const SweepRow& r) { return r.c2dv / (r.eta * r.eta); });
    return Outcome{bv < 3.0 && bd < 3.0, "v band " + fmt(bv) + ", v' band " + fmt(bd) + " over T = 15..35"};
  });

  criterion(5, "glue correctness", [] {
    double identity = 0.0;
    for (const auto& r : glue_sweep()) identity = std::max(identity, r.identity);
    const auto base = ode::solve_by_period(Dimension(3), 25.0, 1e-13);
    const auto mod = glue::splice(base, 3.0, 2);
    const double hs[3] = {1e-2, 5e-3, 2.5e-3};
    double err[3] = {0, 0, 0};
    for (int j = 0; j < 3; ++j)
      for (int i = 0; i <= 2000; ++i) {
        const double t = -6.0 + (mod.last_center() + 12.0) * i / 2000.0;
        const double fd = (mod.eval(t + hs[j]).v - 2.0 * mod.eval(t).v + mod.eval(t - hs[j]).v) / (hs[j] * hs[j]);
        err[j] = std::max(err[j], std::abs(fd - mod.eval(t).vsecond));
      }
    const double o1 = std::log2(err[0] / err[1]), o2 = std::log2(err[1] / err[2]);
    const bool ok = identity < 1e-10 && std::abs(o1 - 2.0) <= 0.3 && std::abs(o2 - 2.0) <= 0.3;
    return Outcome{ok, "identity residual " + fmt(identity) + ", FD orders " + fmt(o1) + ", " + fmt(o2)};
  });

  criterion(6, "epsilon attainability", [] {
    const auto t0 = Clock::now();
    bool ok = true;
    std::string d;
    for (double eps : {1e-2, 1e-3}) {
      const auto r = glue::choose_T_for_epsilon(Dimension(3), 3.0, 2, eps);
      bool dec = true;
      for (std::size_t i = 1; i < r.history.size(); ++i)
        dec = dec && r.history[i].sup_deviation < r.history[i - 1].sup_deviation;
      ok = ok && std::isfinite(r.T) && r.profile.sup_deviation() <= eps && dec;
      d += "eps " + fmt(eps) + " -> T " + fmt(r.T) + " (sup " + fmt(r.profile.sup_deviation()) + ")" +
           (dec ? "" : " non-monotone") + "; ";
    }
    const double t = seconds_since(t0);
    return Outcome{ok && t < 60.0, d + "runtime " + fmt(t) + " s"};
  });

  criterion(7, "Lipschitz scaling of K", [] {
    const double b = band(glue_sweep(), [](const SweepRow& r) { return r.lip / (r.eta * r.eta); });
    return Outcome{b < 3.0, "Lip/eta^2 band " + fmt(b) + " over T = 15..35"};
  });

  criterion(8, "Kelvin involution", [] {
    verify::Rng rng(2024, 8);
    double wr = 0.0, wu = 0.0;
    const Dimension dim(3);
    for (int k = 0; k < 10; ++k) {
      const conformal::KelvinMap m(random_point(rng, 3, 2.0), rng.uniform(0.3, 3.0));
      const conformal::Bubble b{rng.uniform(0.5, 2.0), random_point(rng, 3, 1.0)};
      const conformal::Field u = [&](const Point& x) { return b(dim, x); };
      const auto tt = conformal::kelvin_transform(dim, m, conformal::kelvin_transform(dim, m, u));
      for (int i = 0; i < 1000; ++i) {
        const Point x = m.center() + random_point(rng, 3, 4.0);
        if (distance(x, m.center()) < 1e-3) continue;
        wr = std::max(wr, distance(m.reflect(m.reflect(x)), x) / x.norm());
        wu = std::max(wu, rel(tt(x), u(x)));
      }
    }
    return Outcome{wr < 1e-12 && wu < 1e-12, "double reflect " + fmt(wr) + ", double transform " + fmt(wu)};
  });

  criterion(9, "bubble transformation law", [] {
    verify::Rng rng(2024, 9);
    double law = 0.0, fixed = 0.0, offset = 0.0;
    for (int n : {3, 5}) {
      const Dimension dim(n);
      for (int k = 0; k < 10; ++k) {
        const conformal::KelvinMap m(random_point(rng, n, 2.0), rng.uniform(0.3, 3.0));
        const conformal::Bubble b{rng.uniform(0.1, 3.0), random_point(rng, n, 2.0)};
        const auto closed = conformal::kelvin_of_bubble(m, b);
        const auto direct = conformal::kelvin_transform(dim, m, [&](const Point& x) { return b(dim, x); });
        for (int i = 0; i < 200; ++i) {
          const Point x = random_point(rng, n, 4.0);
          if (distance(x, m.center()) < 1e-3) continue;
          law = std::max(law, rel(closed(dim, x), direct(x)));
        }
        const Point c = random_point(rng, n, 3.0);
        const auto f = conformal::kelvin_of_bubble(conformal::KelvinMap(c, conformal::symmetric_radius(b, c)), b);
        fixed = std::max({fixed, rel(f.lambda, b.lambda), distance(f.center, b.center) / (1.0 + b.center.norm())});
        const Point xi = random_point(rng, n, 10.0);
        const Point xc = conformal::offset_source(xi);
        const conformal::KelvinMap mk(xi, std::sqrt(1.0 + xi.norm2()));
        offset = std::max({offset, rel(xc.norm(), 1.0 / xi.norm()), mk.reflect(xc).norm() / (1.0 + xi.norm())});
      }
    }
    return Outcome{law < 1e-12 && fixed < 1e-13 && offset < 1e-13,
                   "closed vs direct " + fmt(law) + ", fixed point " + fmt(fixed) + ", offset " + fmt(offset)};
  });

  criterion(10, "translation lemma", [] {
    verify::Rng rng(2024, 10);
    double worst = 0.0;
    for (int k = 0; k < 20; ++k) {
      const double l1 = std::exp(rng.uniform(-8.0, 8.0)), l2 = std::exp(rng.uniform(-8.0, 8.0));
      worst = std::max(worst, conformal::translation_lemma_check(Dimension(3 + k % 4), l1, l2).max_relative_deviation);
    }
    return Outcome{worst < 1e-13, "max deviation " + fmt(worst) + " over 20 pairs"};
  });

  criterion(11, "five-stage construction", [] {
    const auto t0 = Clock::now();
    const auto& p = five_stage_plan();
    const auto& sol = p.solution;
    double sampled = 0.0;
    std::size_t mismatched = 0, exterior = 0;
    verify::Rng rng(2024, 11);
    for (std::size_t i = 0; i < sol.stages().size(); ++i) {
      const auto& s = sol.stages()[i];
      for (int j = 0; j < 4000; ++j) {
        Point u = random_point(rng, 3, 1.0);
        if (u.norm() < 1e-3) continue;
        u = (1.0 / u.norm()) * u;
        sampled = std::max(sampled, std::abs(sol.stage_K_offset(i, (s.U.radius * std::cbrt(rng.uniform())) * u) - 1.0));
        const Point x = s.U.center + (s.U.radius * (1.0 + 1e-9 + rng.uniform())) * u;
        if (sol.stage_of(x) >= 0) continue;
        ++exterior;
        if (sol.eval_u(x) != sol.u_s(x) || sol.eval_K(x) != 1.0) ++mismatched;
      }
    }
    const auto diag = assembly::blowup_diagnostic(sol);
    const double t = seconds_since(t0);
    const bool ok = p.complete && sol.stages().size() == 5 && sol.disjoint() && sampled <= 0.1 && mismatched == 0 &&
                    diag.strictly_increasing() && diag.min_ratio() >= 10.0 && t < 300.0;
    return Outcome{ok, "disjoint " + std::string(sol.disjoint() ? "yes" : "no") + ", sampled max |K-1| " +
                           fmt(sampled) + ", exterior mismatches " + std::to_string(mismatched) + "/" +
                           std::to_string(exterior) + ", min ratio " + fmt(diag.min_ratio()) + ", runtime " + fmt(t) +
                           " s"};
  });

  criterion(12, "PDE residuals", [] {
    const Dimension d(3);
    const double k = d.weight();
    const conformal::RadialEuclidFunction us(Point::zero(3), [k](double r) {
      const double q = 1.0 + r * r;
      const double u = std::pow(q, -k);
      return conformal::RadialJet{u, -2.0 * k * r * u / q, -2.0 * k * u / q + 4.0 * k * (k + 1.0) * r * r * u / (q * q)};
    });
    const std::vector<double> hb{4e-3, 2e-3, 1e-3};
    const auto rb = verify::euclid_residual(d, us, [](double) { return 1.0; }, 0.5, 2.0, hb);
    const auto base = ode::solve_by_period(d, 25.0, 1e-13);
    const auto mod = glue::splice(base, 3.0, 2);
    const auto kp = glue::compute_K(mod);
    const auto rc = verify::cylindrical_residual(mod, kp, hb);
    bool asm_ok = true;
    std::string orders;
    const auto& sol = five_stage_plan().solution;
    for (std::size_t i = 0; i < sol.stages().size(); ++i) {
      const auto& s = sol.stages()[i];
      std::vector<double> ts;
      for (int j = 0; j < 24; ++j) ts.push_back(s.D + (s.T_actual - 2.0 * s.D) * (j + 0.5) / 24.0);
      const auto pts = verify::stage_points(sol, i, ts, 4, 12 + i);
      const auto ra = verify::assembled_residual(sol, i, pts.offsets, pts.scales, hb);
      asm_ok = asm_ok && ra.order_in_band();
      orders += fmt(ra.order()) + " ";
    }
    const bool ok = rb.max_residual.back() < 1e-6 && rb.order_in_band() && rc.order_in_band() && asm_ok;
    return Outcome{ok, "u_s residual " + fmt(rb.max_residual.back()) + " at h = 1e-3 (order " + fmt(rb.order()) +
                           "), modified order " + fmt(rc.order()) + ", assembled orders " + orders};
  });

  criterion(13, "Lipschitz extension, n = 5", [] {
    const auto& r = lipschitz_run();
    std::size_t y0 = 0;
    for (const auto& c : r.report.cases)
      if (c.name.rfind("y0", 0) == 0) y0 += c.count;
    bool refused = false;
    try {
      verify::lipschitz_T_scan(Dimension(3));
    } catch (const InvalidArgument& e) {
      refused = std::string(e.what()).find("n > 4") != std::string::npos;
    }
    const bool ok = r.report.pairs >= 100000 && y0 > 0 && r.report.max_ratio <= 1.0 && refused;
    return Outcome{ok, "T = " + fmt(r.T) + ", max ratio " + fmt(r.report.max_ratio) + " over " +
                           std::to_string(r.report.pairs) + " pairs (" + std::to_string(y0) + " with y = 0), n = 3 " +
                           (refused ? "refused" : "NOT refused")};
  });

  criterion(14, "Hoelder corollary", [] {
    const auto& r = lipschitz_run();
    bool ok = true;
    std::string d = "C = " + fmt(r.report.max_ratio) + ";";
    for (double a : {0.25, 0.5, 1.0}) {
      const auto h = verify::holder_check(*r.field, a, r.report.max_ratio);
      ok = ok && h.passed;
      d += " alpha " + fmt(a) + ": " + fmt(h.max_ratio) + " <= " + fmt(h.bound);
    }
    return Outcome{ok, d};
  });

  criterion(15, "critical-order bound", [] {
    const auto r = verify::critical_T_scan(Dimension(3), 0.25);
    return Outcome{r.report.passed, "T = " + fmt(r.T) + ", max |K-1|/|x|^(1/4) = " + fmt(r.report.max_ratio)};
  });

  criterion(16, "CLI determinism", [] {
    const fs::path root = fs::temp_directory_path() / "blowup_acceptance";
    fs::remove_all(root);
    const fs::path cfg = fs::path(BLOWUP_SOURCE_DIR) / "configs";
    std::size_t compared = 0, differing = 0;
    for (const std::string sub : {"delaunay", "glue", "construct", "verify"}) {
      for (const std::string run : {"a", "b"}) {
        std::ostringstream out, err;
        cli::run({sub, "--config", (cfg / (sub + ".json")).string(), "--out", (root / run / sub).string(), "--seed",
                  "11"},
                 out, err);
      }
    }
    // Report over the first set of bundles, twice.
    fs::create_directories(root / "cfg");
    {
      std::ofstream f(root / "cfg" / "report.json");
      f << R"({"report": {"inputs": ["../a/delaunay", "../a/glue", "../a/construct", "../a/verify"]}})";
    }
    for (const std::string run : {"a", "b"}) {
      std::ostringstream out, err;
      cli::run({"report", "--config", (root / "cfg" / "report.json").string(), "--out", (root / run / "report").string(),
                "--seed", "11"},
               out, err);
    }
    for (const std::string sub : {"delaunay", "glue", "construct", "verify", "report"}) {
      for (const auto& e : fs::directory_iterator(root / "a" / sub)) {
        ++compared;
        if (slurp(e.path()) != slurp(root / "b" / sub / e.path().filename())) ++differing;
      }
    }
    return Outcome{compared > 20 && differing == 0,
                   std::to_string(compared) + " files compared across 5 subcommands, " + std::to_string(differing) +
                       " differ"};
  });

  std::printf("%d of 16 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
