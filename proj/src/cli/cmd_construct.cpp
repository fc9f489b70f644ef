#include <algorithm>
#include <cmath>

#include "blowup/assembly/plan.hpp"
#include "blowup/cli/commands.hpp"
#include "blowup/format.hpp"
#include "blowup/verify/rng.hpp"

namespace blowup::cli {

namespace {

using conformal::Point;

Point random_direction(verify::Rng& rng, int n) {
  std::vector<double> c(static_cast<std::size_t>(n));
  double r2 = 0.0;
  do {
    r2 = 0.0;
    for (auto& x : c) {
      x = rng.normal();
      r2 += x * x;
    }
  } while (!(r2 > 1e-20));
  const double s = 1.0 / std::sqrt(r2);
  for (auto& x : c) x *= s;
  return Point(std::move(c));
}

struct TraceRow {
  double s = 0.0;
  int stage = -1;
  double u_b = 0.0;
  double u_s = 0.0;
  double K = 0.0;
};

void one_dimension(const RunConfig& cfg, int n, Bundle& b) {
  const auto& s = cfg.construct;
  const Dimension dim(n);
  const std::string tag = "n" + std::to_string(n);

  assembly::PlanOptions o;
  o.xi0 = s.xi0;
  o.direction = s.direction;
  o.m = s.m;
  o.D_min = s.D_min;
  o.margin = s.margin;
  o.measure_budget = s.measure_budget;
  o.profile_tol = s.profile_tol;
  o.sampling.samples_per_window = s.samples_per_window;
  const auto plan = assembly::plan_stages(dim, s.epsilon, s.stages, s.growth, o);
  const auto& sol = plan.solution;

  Json pj = Json::parse(assembly::plan_to_json(plan));
  pj["seed"] = b.seed();
  b.write("plan_" + tag + ".json", dump(pj));

  b.check(Check{"plan_complete_" + tag, plan.complete && static_cast<int>(sol.stages().size()) == s.stages,
                cell(sol.stages().size()), cell(s.stages), plan.diagnostic});
  b.check("disjoint_" + tag, sol.disjoint(), static_cast<double>(sol.stages().size()), 0.0,
          "stage balls pairwise separated and away from the origin");
  b.check("measure_" + tag, sol.total_measure() <= s.measure_budget, sol.total_measure(), s.measure_budget,
          "sum of stage ball volumes");

  const auto diag = assembly::blowup_diagnostic(sol);
  Csv csv({"stage", "xi_norm", "a", "D", "T", "T_actual", "eta", "center_radius", "U_radius", "value", "predicted",
           "ratio", "sup_deviation", "seed"});
  double prev = diag.baseline, sup = 0.0;
  for (std::size_t i = 0; i < sol.stages().size(); ++i) {
    const auto& st = sol.stages()[i];
    const auto& e = diag.entries[i];
    csv.row({cell(i), cell(st.xi.norm()), cell(st.a), cell(st.D), cell(st.T), cell(st.T_actual), cell(st.eta),
             cell(e.radius), cell(st.U.radius), cell(e.value), cell(e.predicted), cell(e.value / prev),
             cell(st.sup_deviation), cell(static_cast<std::size_t>(b.seed()))});
    prev = e.value;
    sup = std::max(sup, st.sup_deviation);
  }
  b.write("diagnostic_" + tag + ".csv", csv.str());
  if (!sol.stages().empty()) {
    b.check("diagnostic_ratio_" + tag, diag.strictly_increasing() && diag.min_ratio() >= s.growth, diag.min_ratio(),
            s.growth, "minimum per-stage growth of u_b(x_c)|x_c|^((n-2)/2)");
  }
  b.check("profile_sup_" + tag, sup <= s.epsilon, sup, s.epsilon, "max over stages of dense-sampled sup |K - 1|");

  // Random probes inside every ball and in a box around them.
  double sampled = 0.0;
  std::size_t exterior = 0, mismatched = 0;
  for (std::size_t i = 0; i < sol.stages().size(); ++i) {
    const auto& st = sol.stages()[i];
    verify::Rng rng(b.seed(), 1000 + i);
    for (int j = 0; j < s.probe_points; ++j) {
      const Point u = random_direction(rng, n);
      const double rho = st.U.radius * std::pow(rng.uniform(), 1.0 / n);
      sampled = std::max(sampled, std::abs(sol.stage_K_offset(i, rho * u) - 1.0));
      // Just outside the ball.
      const Point x = st.U.center + (st.U.radius * (1.0 + 1e-9 + rng.uniform())) * u;
      if (sol.stage_of(x) >= 0 || !(x.norm2() > 0.0)) continue;
      ++exterior;
      if (sol.eval_u(x) != sol.u_s(x) || sol.eval_K(x) != 1.0) ++mismatched;
    }
  }
  verify::Rng rng(b.seed(), 999);
  for (int j = 0; j < s.probe_points; ++j) {
    std::vector<double> c(static_cast<std::size_t>(n));
    for (auto& x : c) x = rng.uniform(-2.0, 2.0);
    const Point x(std::move(c));
    if (sol.stage_of(x) >= 0 || !(x.norm2() > 0.0)) continue;
    ++exterior;
    if (sol.eval_u(x) != sol.u_s(x) || sol.eval_K(x) != 1.0) ++mismatched;
  }
  b.check("sampled_K_" + tag, sampled <= s.epsilon, sampled, s.epsilon, "max |K - 1| at random points in the balls");

  // Ray through the stage centers: log-spaced plus dense chords through each ball.
  Point dir = s.direction.empty() ? Point::axis(static_cast<std::size_t>(n), 0) : Point(s.direction);
  dir = (1.0 / dir.norm()) * dir;
  std::vector<double> ss;
  if (!sol.stages().empty()) {
    const double r_lo = 0.5 * sol.stages().back().x_c.norm();
    const double r_hi = 2.0 * sol.stages().front().x_c.norm();
    for (int i = 0; i < s.trace_points; ++i)
      ss.push_back(r_lo * std::pow(r_hi / r_lo, static_cast<double>(i) / (s.trace_points - 1)));
    for (const auto& st : sol.stages()) {
      const double c = st.x_c.norm();
      for (int i = 0; i <= 200; ++i) ss.push_back(c + st.U.radius * (-1.2 + 2.4 * i / 200.0));
    }
    std::sort(ss.begin(), ss.end());
    ss.erase(std::unique(ss.begin(), ss.end()), ss.end());
  }
  const auto rows = par::map_index<TraceRow>(ss.size(), [&](std::size_t i) {
    const Point x = (-ss[i]) * dir;
    TraceRow r;
    r.s = ss[i];
    r.stage = sol.stage_of(x);
    r.u_b = sol.eval_u(x);
    r.u_s = sol.u_s(x);
    r.K = sol.eval_K(x);
    return r;
  });
  Csv trace({"s", "stage", "u_b", "u_s", "K", "equal", "seed"});
  std::vector<double> xs, ys;
  for (const auto& r : rows) {
    trace.row({cell(r.s), cell(r.stage), cell(r.u_b), cell(r.u_s), cell(r.K), cell(r.u_b == r.u_s),
               cell(static_cast<std::size_t>(b.seed()))});
    xs.push_back(r.s);
    ys.push_back(r.u_b);
    if (r.stage < 0) {
      ++exterior;
      if (r.u_b != r.u_s || r.K != 1.0) ++mismatched;
    }
  }
  b.write("trace_" + tag + ".csv", trace.str());
  b.write("u_b_trace_" + tag + ".dat", plot_data("s", "u_b", b.seed(), xs, ys));
  b.check("exterior_exact_" + tag, mismatched == 0 && exterior > 0, static_cast<double>(mismatched), 0.0,
          "points outside all balls with u_b != u_s or K != 1 among " + std::to_string(exterior));
}

}  // namespace

void cmd_construct(const RunConfig& cfg, Bundle& b) {
  for (int n : cfg.construct.n) one_dimension(cfg, n, b);
}

}  // namespace blowup::cli
