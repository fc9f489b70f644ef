#include <cmath>
#include <map>
#include <memory>

#include "blowup/assembly/plan.hpp"
#include "blowup/cli/commands.hpp"
#include "blowup/format.hpp"
#include "blowup/verify/report_json.hpp"
#include "blowup/verify/rng.hpp"

namespace blowup::cli {

namespace {

using verify::to_json;

// Standard bubble (1 + r^2)^(-k) with its radial derivatives.
conformal::RadialEuclidFunction standard_bubble(const Dimension& dim) {
  const double k = dim.weight();
  return conformal::RadialEuclidFunction(
      conformal::Point::zero(static_cast<std::size_t>(dim.n())),
      [k](double r) {
        const double q = 1.0 + r * r;
        const double u = std::pow(q, -k);
        return conformal::RadialJet{u, -2.0 * k * r * u / q,
                                    -2.0 * k * u / q + 4.0 * k * (k + 1.0) * r * r * u / (q * q)};
      },
      1.0);
}

void order_check(Bundle& b, const std::string& name, const verify::ResidualReport& r) {
  b.check(name, r.order_in_band(), r.order(), 2.0, "observed order, band [1.7, 2.3]");
}

void residual_suite(const RunConfig& cfg, int n, Bundle& b) {
  const auto& s = cfg.verify.residual;
  const Dimension dim(n);
  const std::string tag = "n" + std::to_string(n);
  Json out;
  out["n"] = n;
  out["seed"] = b.seed();

  const auto bubble = standard_bubble(dim);
  const std::vector<double> hb{4.0 * s.bubble_h, 2.0 * s.bubble_h, s.bubble_h};
  verify::EuclidResidualOptions eo;
  eo.points = s.points;
  const auto rb = verify::euclid_residual(dim, bubble, [](double) { return 1.0; }, 0.5, 2.0, hb, eo);
  out["bubble"] = to_json(rb);
  b.check("bubble_residual_" + tag, rb.max_residual.back() < s.bubble_max, rb.max_residual.back(), s.bubble_max,
          "standard bubble with K = 1 at h = " + format_real(s.bubble_h));

  std::vector<double> ts;
  for (int i = 0; i < s.points; ++i) ts.push_back(-30.0 + 60.0 * i / (s.points - 1));
  const auto rs = verify::cylindrical_residual(
      dim, [&](double t) { return ode::canonical_profile(dim, t).v; }, [](double) { return 1.0; }, ts, hb);
  out["canonical_cylindrical"] = to_json(rs);
  b.check("canonical_residual_" + tag, rs.richardson < 1e-8, rs.richardson, 1e-8,
          "Richardson-extrapolated residual of v_s with K = 1 on |t| <= 30; raw at h = " + format_real(s.bubble_h) +
              ": " + format_real(rs.max_residual.back()));

  const auto base = ode::solve_by_period(dim, s.T, cfg.verify.profile_tol);
  const auto mod = glue::splice(base, s.D, s.m);
  const auto kp = glue::compute_K(mod);
  const auto rc = verify::cylindrical_residual(mod, kp, s.h, s.points);
  out["modified_cylindrical"] = to_json(rc);
  order_check(b, "modified_cylindrical_order_" + tag, rc);

  const auto ue = conformal::modified_to_euclid(mod);
  verify::EuclidResidualOptions rel;
  rel.points = s.points;
  rel.relative_steps = true;
  const auto re = verify::euclid_residual(
      dim, ue, [&](double r) { return kp.K(-std::log(r)); }, std::exp(-s.T + s.D), std::exp(-s.D), s.h, rel);
  out["modified_euclidean"] = to_json(re);
  order_check(b, "modified_euclidean_order_" + tag, re);

  assembly::PlanOptions po;
  po.profile_tol = cfg.verify.profile_tol;
  const auto plan = assembly::plan_stages(dim, s.epsilon, s.stages, s.growth, po);
  Json stages = Json::array();
  for (std::size_t i = 0; i < plan.solution.stages().size(); ++i) {
    const auto& st = plan.solution.stages()[i];
    std::vector<double> ts;
    constexpr int kLevels = 24;
    for (int j = 0; j < kLevels; ++j) ts.push_back(st.D + (st.T_actual - 2.0 * st.D) * (j + 0.5) / kLevels);
    const auto pts = verify::stage_points(plan.solution, i, ts, 4, verify::splitmix64(b.seed() + i));
    const auto ra = verify::assembled_residual(plan.solution, i, pts.offsets, pts.scales, s.h);
    stages.push_back(to_json(ra));
    order_check(b, "assembled_order_" + tag + "_stage" + std::to_string(i), ra);
  }
  out["assembled"] = stages;
  b.write("residuals_" + tag + ".json", dump(out));
}

struct LipschitzRun {
  bool ok = false;
  verify::LipschitzScanResult result;
  std::string message;
};

LipschitzRun lipschitz_suite(const RunConfig& cfg, int n, Bundle& b, bool record) {
  const auto& s = cfg.verify.lipschitz;
  const std::string tag = "n" + std::to_string(n);
  verify::LipschitzScanOptions o;
  o.D = s.D;
  o.T_start = s.T_start;
  o.scan_pairs = s.scan_pairs;
  o.certify.pairs = s.pairs;
  o.certify.seed = b.seed();
  o.certify.shards = s.shards;
  o.profile_tol = cfg.verify.profile_tol;
  LipschitzRun run;
  Json out;
  out["n"] = n;
  out["seed"] = b.seed();
  try {
    run.result = verify::lipschitz_T_scan(Dimension(n), o);
    run.ok = true;
    out["status"] = "ok";
    out["T"] = format_real(run.result.T);
    out["report"] = to_json(run.result.report);
    out["history"] = to_json(run.result.history);
  } catch (const InvalidArgument& e) {
    run.message = e.what();
    out["status"] = "refused";
    out["message"] = run.message;
  } catch (const Error& e) {
    run.message = e.what();
    out["status"] = "failed";
    out["message"] = run.message;
  }
  if (record) {
    b.write("lipschitz_" + tag + ".json", dump(out));
    if (run.ok) {
      const auto& r = run.result.report;
      b.check("lipschitz_" + tag, r.passed, r.max_ratio, 1.0,
              std::to_string(r.pairs) + " pairs at T = " + format_real(run.result.T) +
                  "; y = 0 ratio " + format_real(r.y0_max) + ", gradient bound " + format_real(r.gradient_bound));
    } else {
      b.check(Check{"lipschitz_" + tag, false, "", "1", run.message});
    }
  }
  return run;
}

void holder_suite(const RunConfig& cfg, int n, const LipschitzRun& lip, Bundle& b) {
  const std::string tag = "n" + std::to_string(n);
  Json out;
  out["n"] = n;
  out["seed"] = b.seed();
  if (!lip.ok) {
    out["status"] = "skipped";
    out["message"] = "requires a completed Lipschitz run: " + lip.message;
    b.write("holder_" + tag + ".json", dump(out));
    b.check(Check{"holder_" + tag, false, "", "", out["message"].get<std::string>()});
    return;
  }
  const double C = lip.result.report.max_ratio;
  out["status"] = "ok";
  out["T"] = format_real(lip.result.T);
  out["C"] = format_real(C);
  Json reports = Json::array();
  for (double alpha : cfg.verify.holder.alpha) {
    verify::PairSamplingOptions o;
    o.pairs = cfg.verify.holder.pairs;
    o.seed = verify::splitmix64(b.seed() + 2);
    o.shards = cfg.verify.lipschitz.shards;
    const auto r = verify::holder_check(*lip.result.field, alpha, C, o);
    reports.push_back(to_json(r));
    b.check("holder_" + tag + "_alpha" + format_real(alpha), r.passed, r.max_ratio, r.bound,
            "max |K(x) - K(y)| / |x - y|^alpha on the closed ball of radius 2");
  }
  out["reports"] = reports;
  b.write("holder_" + tag + ".json", dump(out));
}

void critical_suite(const RunConfig& cfg, int n, Bundle& b) {
  const auto& s = cfg.verify.critical;
  for (double beta : s.beta) {
    const std::string stem = "n" + std::to_string(n) + "_beta" + format_real(beta);
    Json out;
    out["n"] = n;
    out["seed"] = b.seed();
    try {
      const auto r = verify::critical_T_scan(Dimension(n), beta, s.D, s.T_start, cfg.verify.profile_tol);
      out["status"] = "ok";
      out["T"] = format_real(r.T);
      out["report"] = to_json(r.report);
      out["history"] = to_json(r.history);
      b.check("critical_" + stem, r.report.passed, r.report.max_ratio, 1.0,
              "max |K - 1| / |x|^((n-2)/2 - beta) at T = " + format_real(r.T));
    } catch (const Error& e) {
      out["status"] = "failed";
      out["message"] = e.what();
      b.check(Check{"critical_" + stem, false, "", "1", e.what()});
    }
    b.write("critical_" + stem + ".json", dump(out));
  }
}

}  // namespace

void cmd_verify(const RunConfig& cfg, Bundle& b) {
  const auto& v = cfg.verify;
  if (v.wants("residual"))
    for (int n : v.residual.n) residual_suite(cfg, n, b);
  if (v.wants("lipschitz") || v.wants("holder")) {
    for (int n : v.lipschitz.n) {
      const auto run = lipschitz_suite(cfg, n, b, v.wants("lipschitz"));
      if (v.wants("holder")) holder_suite(cfg, n, run, b);
    }
  }
  if (v.wants("critical"))
    for (int n : v.critical.n) critical_suite(cfg, n, b);
}

}  // namespace blowup::cli
