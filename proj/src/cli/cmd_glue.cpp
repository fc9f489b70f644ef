#include <algorithm>
#include <cmath>
#include <optional>

#include "blowup/cli/commands.hpp"
#include "blowup/format.hpp"
#include "blowup/glue/kfield.hpp"
#include "blowup/verify/residual.hpp"

namespace blowup::cli {

namespace {

struct SweepRow {
  double T = 0.0;
  double eta = 0.0;
  double sup = 0.0;
  double lip = 0.0;
  double c2_v = 0.0;   // sup over [-2D, 2D] of |v_T - v_s|
  double c2_dv = 0.0;  // same for the derivative
  double identity = 0.0;
  double min_K = 0.0;
  std::string status;
  bool ok() const { return status == "ok"; }
};

glue::KSamplingOptions sampling(const GlueSection& s) {
  glue::KSamplingOptions o;
  o.samples_per_window = s.samples_per_window;
  return o;
}

SweepRow sweep_row(const Dimension& dim, const GlueSection& s, double T) {
  SweepRow r;
  r.T = T;
  try {
    const auto base = ode::solve_by_period(dim, T, s.profile_tol);
    const auto mod = glue::splice(base, s.D, s.m);
    glue::KSamplingOptions o = sampling(s);
    o.exec = par::Exec::serial;
    const auto k = glue::compute_K(mod, o);
    r.eta = base.neck();
    r.sup = k.sup_deviation();
    r.lip = k.lipschitz_estimate();
    r.identity = k.max_identity_residual();
    r.min_K = k.min_K();
    constexpr int kPoints = 4001;
    for (int i = 0; i < kPoints; ++i) {
      const double t = -2.0 * s.D + 4.0 * s.D * i / (kPoints - 1);
      const auto d = base.deviation(t);
      r.c2_v = std::max(r.c2_v, std::abs(d.d0));
      r.c2_dv = std::max(r.c2_dv, std::abs(d.d1));
    }
    r.status = "ok";
  } catch (const Error& e) {
    r.status = e.what();
  }
  return r;
}

struct Band {
  double lo = 0.0;
  double hi = 0.0;
  double factor() const { return lo > 0.0 ? hi / lo : INFINITY; }
};

Band band(const std::vector<SweepRow>& rows, double (*f)(const SweepRow&)) {
  Band b{INFINITY, 0.0};
  for (const auto& r : rows)
    if (r.ok()) {
      b.lo = std::min(b.lo, f(r));
      b.hi = std::max(b.hi, f(r));
    }
  return b;
}

void band_check(Bundle& b, Json& js, const std::string& name, const std::string& tag, const Band& band,
                double factor, std::size_t ok_rows) {
  const bool pass = ok_rows >= 2 && band.factor() < factor;
  js[name] = Json{{"min", format_real(band.lo)},
                  {"max", format_real(band.hi)},
                  {"factor", format_real(band.factor())},
                  {"passed", pass}};
  b.check(name + "_band_" + tag, pass, band.factor(), factor, "max/min across the T sweep");
}

// Series, the K = 1 exterior property and the second-derivative convergence at one T.
void series(const Dimension& dim, const GlueSection& s, const std::string& tag, Bundle& b) {
  const auto base = ode::solve_by_period(dim, s.series_T, s.profile_tol);
  const auto mod = glue::splice(base, s.D, s.m);
  const double lo = -0.5 * mod.period();
  const double hi = mod.last_center() + 0.5 * mod.period();
  const std::string stem = tag + "_T" + format_real(s.series_T);

  std::vector<double> ts(static_cast<std::size_t>(s.series_points)), ks(ts.size()), vs(ts.size());
  for (std::size_t i = 0; i < ts.size(); ++i) ts[i] = lo + (hi - lo) * static_cast<double>(i) / (ts.size() - 1);
  par::for_each_index(ts.size(), [&](std::size_t i) {
    ks[i] = mod.K(ts[i]);
    vs[i] = mod.eval(ts[i]).v;
  });
  b.write("K_" + stem + ".dat", plot_data("t", "K", b.seed(), ts, ks));
  b.write("v_" + stem + ".dat", plot_data("t", "v", b.seed(), ts, vs));

  std::size_t outside = 0, off = 0;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    bool in = false;
    for (const auto& w : mod.windows()) in = in || w.contains(ts[i]);
    if (in) continue;
    ++outside;
    if (ks[i] != 1.0) ++off;
  }
  b.check("K_exterior_exact_" + tag, off == 0 && outside > 0, static_cast<double>(off), 0.0,
          "series samples outside the splice windows with K != 1");

  std::vector<double> grid(static_cast<std::size_t>(s.fd_points));
  const double glo = -2.0 * s.D, ghi = mod.last_center() + 2.0 * s.D;
  for (std::size_t i = 0; i < grid.size(); ++i)
    grid[i] = glo + (ghi - glo) * static_cast<double>(i) / (grid.size() - 1);
  std::vector<double> h = s.fd_h;
  std::sort(h.begin(), h.end(), std::greater<>());
  std::vector<double> err(h.size(), 0.0);
  for (std::size_t j = 0; j < h.size(); ++j) {
    const auto e = par::map_index<double>(grid.size(), [&](std::size_t i) {
      const double t = grid[i];
      const double fd = (mod.eval(t + h[j]).v - 2.0 * mod.eval(t).v + mod.eval(t - h[j]).v) / (h[j] * h[j]);
      return std::abs(fd - mod.eval(t).vsecond);
    });
    err[j] = *std::max_element(e.begin(), e.end());
  }
  Csv csv({"h", "max_error", "order", "seed"});
  double last_order = 0.0;
  for (std::size_t j = 0; j < h.size(); ++j) {
    std::string order;
    if (j > 0) {
      last_order = std::log(err[j - 1] / err[j]) / std::log(h[j - 1] / h[j]);
      order = cell(last_order);
    }
    csv.row({cell(h[j]), cell(err[j]), order, cell(static_cast<std::size_t>(b.seed()))});
  }
  b.write("fd_second_derivative_" + stem + ".csv", csv.str());
  b.check("fd_order_" + tag, last_order >= verify::kOrderLow && last_order <= verify::kOrderHigh, last_order, 2.0,
          "order of the finite-difference second derivative, band [1.7, 2.3]");
}

void epsilon_scans(const Dimension& dim, const GlueSection& s, const std::string& tag, Bundle& b) {
  Csv csv({"epsilon", "T", "eta", "sup_deviation", "accepted", "seed"});
  for (double eps : s.epsilon) {
    glue::EpsilonScanOptions o;
    o.profile_tol = s.profile_tol;
    o.sampling = sampling(s);
    const std::string name = "epsilon_" + format_real(eps) + "_" + tag;
    try {
      const auto r = glue::choose_T_for_epsilon(dim, s.D, s.m, eps, o);
      bool decreasing = true;
      for (std::size_t i = 0; i < r.history.size(); ++i) {
        const auto& h = r.history[i];
        if (i > 0 && !(h.sup_deviation < r.history[i - 1].sup_deviation)) decreasing = false;
        csv.row({cell(eps), cell(h.T), cell(h.eta), cell(h.sup_deviation), cell(h.T == r.T),
                 cell(static_cast<std::size_t>(b.seed()))});
      }
      const double sup = r.profile.sup_deviation();
      b.check(name, sup <= eps && std::isfinite(r.T), r.T, eps, "accepted T; sup |K - 1| = " + format_real(sup));
      b.check("epsilon_monotone_" + format_real(eps) + "_" + tag, decreasing, static_cast<double>(r.history.size()),
              0.0, "sup |K - 1| strictly decreasing along the sweep");
    } catch (const Error& e) {
      b.check(Check{name, false, "", format_real(eps), e.what()});
    }
  }
  b.write("epsilon_scan_" + tag + ".csv", csv.str());
}

void one_dimension(const RunConfig& cfg, int n, Bundle& b) {
  const auto& s = cfg.glue;
  const Dimension dim(n);
  const std::string tag = "n" + std::to_string(n);

  std::vector<SweepRow> rows(s.T.size());
  par::for_each_index(rows.size(), [&](std::size_t i) { rows[i] = sweep_row(dim, s, s.T[i]); });

  Csv csv({"n", "D", "m", "T", "eta", "sup_dev", "sup_dev_over_eta2", "lipschitz", "lipschitz_over_eta2",
           "c2_v_over_eta2", "c2_dv_over_eta2", "identity_residual", "min_K", "status", "seed"});
  std::size_t ok_rows = 0;
  double identity = 0.0;
  for (const auto& r : rows) {
    const double e2 = r.eta * r.eta;
    if (r.ok()) {
      ++ok_rows;
      identity = std::max(identity, r.identity);
      csv.row({cell(n), cell(s.D), cell(s.m), cell(r.T), cell(r.eta), cell(r.sup), cell(r.sup / e2), cell(r.lip),
               cell(r.lip / e2), cell(r.c2_v / e2), cell(r.c2_dv / e2), cell(r.identity), cell(r.min_K), r.status,
               cell(static_cast<std::size_t>(b.seed()))});
    } else {
      csv.row({cell(n), cell(s.D), cell(s.m), cell(r.T), "", "", "", "", "", "", "", "", "", r.status,
               cell(static_cast<std::size_t>(b.seed()))});
    }
  }
  b.write("glue_" + tag + ".csv", csv.str());
  b.check("rows_" + tag, ok_rows > 0, static_cast<double>(ok_rows), static_cast<double>(rows.size()),
          "successful sweep rows; fails only if every row fails");
  if (ok_rows > 0)
    b.check("identity_residual_" + tag, identity < s.identity_max, identity, s.identity_max,
            "max algebraic identity residual over dense samples");

  Json bands;
  bands["n"] = n;
  bands["seed"] = b.seed();
  bands["band_factor"] = format_real(s.band_factor);
  band_check(b, bands, "sup_dev_over_eta2", tag, band(rows, [](const SweepRow& r) { return r.sup / (r.eta * r.eta); }),
             s.band_factor, ok_rows);
  band_check(b, bands, "lipschitz_over_eta2", tag,
             band(rows, [](const SweepRow& r) { return r.lip / (r.eta * r.eta); }), s.band_factor, ok_rows);
  band_check(b, bands, "c2_v_over_eta2", tag, band(rows, [](const SweepRow& r) { return r.c2_v / (r.eta * r.eta); }),
             s.band_factor, ok_rows);
  band_check(b, bands, "c2_dv_over_eta2", tag,
             band(rows, [](const SweepRow& r) { return r.c2_dv / (r.eta * r.eta); }), s.band_factor, ok_rows);
  b.write("glue_bands_" + tag + ".json", dump(bands));

  try {
    series(dim, s, tag, b);
  } catch (const Error& e) {
    b.check(Check{"series_" + tag, false, "", "", e.what()});
  }
  epsilon_scans(dim, s, tag, b);
}

}  // namespace

void cmd_glue(const RunConfig& cfg, Bundle& b) {
  for (int n : cfg.glue.n) one_dimension(cfg, n, b);
}

}  // namespace blowup::cli
