#include <cmath>

#include "blowup/cli/commands.hpp"
#include "blowup/format.hpp"
#include "blowup/ode/profile.hpp"

namespace blowup::cli {

namespace {

struct Row {
  double T = 0.0;
  double eta = 0.0;
  double drift = 0.0;
  std::string status;
};

// Drift of H along a plain integration over several periods from the maximum.
double long_run_drift(const Dimension& dim, const ode::DelaunayProfile& p, int periods, double tol) {
  const ode::CylState start{0.0, p.max_value(), 0.0};
  const auto traj = ode::integrate(dim, start, {0.0, periods * p.period()}, tol);
  const double h0 = ode::energy(dim, start.v, start.vprime);
  double worst = 0.0;
  for (const auto& s : traj.samples())
    worst = std::max(worst, std::abs(ode::energy(dim, s.v, s.vprime) - h0) / std::abs(h0));
  return worst;
}

void one_dimension(const RunConfig& cfg, int n, Bundle& b) {
  const auto& sec = cfg.delaunay;
  const Dimension dim(n);
  const std::string tag = "n" + std::to_string(n);

  std::vector<Row> rows(sec.T.size());
  par::for_each_index(rows.size(), [&](std::size_t i) {
    Row& r = rows[i];
    r.T = sec.T[i];
    try {
      const auto p = ode::solve_by_period(dim, r.T, cfg.tol);
      r.eta = p.neck();
      r.drift = p.energy_drift();
      r.status = "ok";
    } catch (const Error& e) {
      r.status = e.what();
    }
  });

  Csv csv({"n", "T", "eta", "ln_eta", "H_drift", "status", "seed"});
  std::vector<double> ok_T, ok_ln;
  for (const auto& r : rows) {
    const bool ok = r.status == "ok";
    csv.row({cell(n), cell(r.T), ok ? cell(r.eta) : "", ok ? cell(std::log(r.eta)) : "", ok ? cell(r.drift) : "",
             r.status, cell(static_cast<std::size_t>(b.seed()))});
    if (ok) {
      ok_T.push_back(r.T);
      ok_ln.push_back(std::log(r.eta));
    }
  }
  b.write("delaunay_" + tag + ".csv", csv.str());
  b.write("ln_eta_vs_T_" + tag + ".dat", plot_data("T", "ln_eta", b.seed(), ok_T, ok_ln));
  b.check("rows_ok_" + tag, ok_T.size() == rows.size(), static_cast<double>(ok_T.size()),
          static_cast<double>(rows.size()), "successful period solves");

  const double expected = -0.25 * (n - 2.0);
  Json fit_json;
  fit_json["n"] = n;
  fit_json["seed"] = b.seed();
  fit_json["tol"] = format_real(cfg.tol);
  fit_json["expected_slope"] = format_real(expected);
  if (ok_T.size() >= 3) {
    try {
      const auto fit = ode::fit_neck_period_law(dim, ok_T, {cfg.tol, 0.0, par::Exec::parallel});
      const double rel = std::abs(fit.slope / expected - 1.0);
      fit_json["slope"] = format_real(fit.slope);
      fit_json["slope_relative_error"] = format_real(rel);
      fit_json["intercept"] = format_real(fit.intercept);
      fit_json["fit_residual"] = format_real(fit.fit_residual);
      fit_json["law_residual"] = format_real(fit.law_residual);
      fit_json["implied_C"] = format_real(fit.implied_C);
      Json pts = Json::array();
      for (const auto& p : fit.points)
        pts.push_back(Json{{"T", format_real(p.T)}, {"eta", format_real(p.eta)}, {"ln_eta", format_real(p.log_eta)}});
      fit_json["points"] = pts;
      b.check("slope_" + tag, rel <= sec.slope_tolerance, rel, sec.slope_tolerance,
              "relative error of the fitted slope against -(n-2)/4");
      b.check("law_residual_" + tag, fit.law_residual < sec.law_residual_max, fit.law_residual, sec.law_residual_max,
              "max |ln eta + (n-2)T/4 - intercept|");
    } catch (const Error& e) {
      fit_json["error"] = e.what();
      b.check(Check{"slope_" + tag, false, "", format_real(sec.slope_tolerance), e.what()});
    }
  } else {
    fit_json["error"] = "fewer than three successful periods";
    b.check(Check{"slope_" + tag, false, "", format_real(sec.slope_tolerance), "fewer than three successful periods"});
  }
  b.write("delaunay_fit_" + tag + ".json", dump(fit_json));

  Csv energy({"n", "eta_fraction", "eta", "T", "periods", "H", "drift_profile", "drift_long_run", "passed", "status",
              "seed"});
  double worst = 0.0;
  bool all_ok = true;
  for (double f : sec.energy_fractions) {
    const double eta = f * dim.cylinder_value();
    try {
      const auto p = ode::solve_by_neck(dim, eta, cfg.tol);
      const double d = long_run_drift(dim, p, sec.energy_periods, cfg.tol);
      const double dp = p.energy_drift();
      const bool pass = std::max(d, dp) < sec.energy_threshold;
      worst = std::max({worst, d, dp});
      all_ok = all_ok && pass;
      energy.row({cell(n), cell(f), cell(eta), cell(p.period()), cell(sec.energy_periods), cell(p.energy()), cell(dp),
                  cell(d), cell(pass), "ok", cell(static_cast<std::size_t>(b.seed()))});
    } catch (const Error& e) {
      all_ok = false;
      energy.row({cell(n), cell(f), cell(eta), "", cell(sec.energy_periods), "", "", "", cell(false), e.what(),
                  cell(static_cast<std::size_t>(b.seed()))});
    }
  }
  b.write("energy_" + tag + ".csv", energy.str());
  b.check("energy_" + tag, all_ok, worst, sec.energy_threshold, "max relative drift of H");
}

}  // namespace

void cmd_delaunay(const RunConfig& cfg, Bundle& b) {
  for (int n : cfg.delaunay.n) one_dimension(cfg, n, b);
}

}  // namespace blowup::cli
