#include "blowup/assembly/plan.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "blowup/format.hpp"

namespace blowup::assembly {

using conformal::Point;

double ball_volume(int n, double r) {
  const double h = 0.5 * n;
  return std::exp(h * std::log(std::numbers::pi) - std::lgamma(h + 1.0)) * std::pow(r, n);
}

bool BlowupDiagnostic::strictly_increasing() const {
  for (std::size_t i = 1; i < entries.size(); ++i)
    if (!(entries[i].value > entries[i - 1].value)) return false;
  return !entries.empty();
}

double BlowupDiagnostic::min_ratio() const {
  double out = std::numeric_limits<double>::infinity();
  double prev = baseline;
  for (const auto& e : entries) {
    out = std::min(out, e.value / prev);
    prev = e.value;
  }
  return out;
}

BlowupSolution::BlowupSolution(Dimension dim, double eps, std::vector<Stage> stages)
    : dim_(dim), eps_(eps), stages_(std::move(stages)) {
  for (const Stage& s : stages_) {
    conformal::require_dimension(dim_, s.xi);
    if (!s.k_profile || !s.u_modified) throw InvalidArgument("stage is missing its profile");
  }
}

int BlowupSolution::stage_of(const Point& x) const {
  for (std::size_t i = 0; i < stages_.size(); ++i)
    if (stages_[i].U.contains(x)) return static_cast<int>(i);
  return -1;
}

double BlowupSolution::u_s(const Point& x) const {
  return std::pow(1.0 / (1.0 + x.norm2()), dim_.weight());
}

namespace {

// R(p + w) - R(p) = a^2 (|z|^2 w - (2 z.w + |w|^2) z) / (|z|^2 |z + w|^2), z = p - xi.
Point reflection_increment(const Point& z, const Point& w, double a2) {
  const double z2 = z.norm2();
  const double zw = dot(z, w);
  const double w2 = w.norm2();
  const double zw2 = (z + w).norm2();
  if (!(zw2 > 0.0)) throw InvalidArgument("reflection is undefined at the sphere center");
  return (a2 / (z2 * zw2)) * (z2 * w - (2.0 * zw + w2) * z);
}

}  // namespace

Point Stage::pullback_offset(const Point& w) const { return reflection_increment(x_c - xi, w, a * a); }

Point Stage::pushforward_offset(const Point& y) const { return reflection_increment(-1.0 * xi, y, a * a); }

double BlowupSolution::stage_u_offset(std::size_t i, const Point& w) const {
  const Stage& s = stages_.at(i);
  const double r = (s.x_c - s.xi + w).norm();
  if (!(r > 0.0)) throw InvalidArgument("Kelvin kernel is undefined at the sphere center");
  const double kernel = std::pow(s.a / r, dim_.nd() - 2.0);
  return kernel * s.u_modified->radial(s.pullback_offset(w).norm()).u;
}

double BlowupSolution::stage_K_offset(std::size_t i, const Point& w) const {
  const Stage& s = stages_.at(i);
  const double r = s.pullback_offset(w).norm();
  if (!(r > 0.0)) return 1.0;
  return s.k_profile->K(-std::log(r));
}

double BlowupSolution::stage_u(std::size_t i, const Point& x) const {
  return stage_u_offset(i, x - stages_.at(i).x_c);
}

double BlowupSolution::stage_K(std::size_t i, const Point& x) const {
  return stage_K_offset(i, x - stages_.at(i).x_c);
}

double BlowupSolution::eval_u(const Point& x) const {
  conformal::require_dimension(dim_, x);
  if (!(x.norm2() > 0.0)) throw InvalidArgument("u_b is undefined at the origin");
  const int i = stage_of(x);
  return i < 0 ? u_s(x) : stage_u(static_cast<std::size_t>(i), x);
}

double BlowupSolution::eval_K(const Point& x) const {
  conformal::require_dimension(dim_, x);
  if (!(x.norm2() > 0.0)) throw InvalidArgument("K is evaluated on punctured space only");
  const int i = stage_of(x);
  return i < 0 ? 1.0 : stage_K(static_cast<std::size_t>(i), x);
}

double BlowupSolution::total_measure() const {
  double sum = 0.0;
  for (const Stage& s : stages_) sum += ball_volume(dim_.n(), s.U.radius);
  return sum;
}

bool BlowupSolution::disjoint() const {
  for (std::size_t i = 0; i < stages_.size(); ++i) {
    const auto& Ui = stages_[i].U;
    if (!(Ui.center.norm() > Ui.radius)) return false;  // 0 outside the closure
    for (std::size_t j = i + 1; j < stages_.size(); ++j) {
      const auto& Uj = stages_[j].U;
      const double gap = distance(Ui.center, Uj.center) - Ui.radius - Uj.radius;
      if (!(gap >= std::max(Ui.radius, Uj.radius))) return false;
    }
  }
  return true;
}

namespace {

Point unit_direction(const Dimension& dim, const std::vector<double>& dir) {
  if (dir.empty()) return Point::axis(static_cast<std::size_t>(dim.n()), 0);
  Point p(dir);
  conformal::require_dimension(dim, p);
  const double len = p.norm();
  if (!(len > 0.0)) throw InvalidArgument("stage direction must be nonzero");
  return (1.0 / len) * p;
}

// Closed-form u_b(x_c): the Kelvin kernel (|xi|/a)^(n-2) times the removable
// value e^{k (m-1) T} of the modified profile at the origin.
double stage_peak(const Dimension& dim, double L, double a, double T, int m) {
  return std::pow(L / a, dim.nd() - 2.0) * std::exp(dim.weight() * (m - 1) * T);
}

}  // namespace

Stage make_stage(const Dimension& dim, const Point& xi, double D, double T, int m, const PlanOptions& options) {
  conformal::require_dimension(dim, xi);
  Stage s;
  s.xi = xi;
  const double L = xi.norm();
  s.a = std::sqrt(1.0 + L * L);
  s.D = D;
  s.T = T;
  s.m = m;
  auto base = ode::solve_by_period(dim, T, options.profile_tol);
  s.eta = base.neck();
  s.T_actual = base.period();
  auto k = std::make_shared<glue::KRadialProfile>(glue::splice(base, D, m), options.sampling);
  s.sup_deviation = k->sup_deviation();
  s.u_modified = std::make_shared<conformal::RadialEuclidFunction>(conformal::modified_to_euclid(k->modified()));
  s.k_profile = std::move(k);
  s.x_c = conformal::offset_source(xi);
  s.U = conformal::ball_image_ball(s.map(), std::exp(-D));
  s.peak = stage_peak(dim, L, s.a, s.T_actual, m);
  return s;
}

PlanResult plan_stages(const Dimension& dim, double eps, int count, double growth, const PlanOptions& options) {
  if (!(eps > 0.0)) throw InvalidArgument("epsilon must be positive");
  if (count < 1) throw InvalidArgument("stage count must be at least 1");
  if (!(growth > 1.0)) throw InvalidArgument("growth factor must exceed 1");
  if (!(options.xi0 > 0.0)) throw InvalidArgument("xi0 must be positive");
  if (!(options.margin >= 1.0)) throw InvalidArgument("margin must be at least 1");
  const Point dir = unit_direction(dim, options.direction);
  const double k = dim.weight();

  std::vector<Stage> stages;
  std::string diagnostic;
  // Baseline at the first offset point: u_s(x_c) |x_c|^k.
  const double r0 = 1.0 / options.xi0;
  double previous = std::pow(1.0 / (1.0 + r0 * r0), k) * std::pow(r0, k);
  double measure = 0.0;

  for (int i = 0; i < count; ++i) {
    const double L = options.xi0 * std::ldexp(1.0, i);
    const Point xi = L * dir;
    const double a = std::sqrt(1.0 + L * L);
    const double D = std::max(options.D_min, std::log(options.margin * L));
    // peak |x_c|^k >= growth * previous
    const double target = growth * previous;
    const double T_growth =
        (std::log(target) + k * std::log(L) - (dim.nd() - 2.0) * std::log(L / a)) / (k * (options.m - 1));
    glue::EpsilonScanOptions scan;
    scan.T_step = options.T_step;
    scan.profile_tol = options.profile_tol;
    scan.sampling = options.sampling;
    const double T_floor = std::floor(4.0 * D + 1.0) + 1.0;
    scan.T_start = std::max(T_floor, T_floor + options.T_step * std::ceil((T_growth - T_floor) / options.T_step));
    std::ostringstream why;
    if (scan.T_start > dim.max_period()) {
      why << "stage " << i << ": growth needs T = " << T_growth << " beyond the ceiling " << dim.max_period();
      diagnostic = why.str();
      break;
    }
    try {
      auto found = glue::choose_T_for_epsilon(dim, D, options.m, eps, scan);
      Stage s = make_stage(dim, xi, D, found.T, options.m, options);
      const double value = s.peak * std::pow(s.x_c.norm(), k);
      if (!(value >= target)) {
        why << "stage " << i << ": diagnostic " << value << " below target " << target;
        diagnostic = why.str();
        break;
      }
      const double vol = ball_volume(dim.n(), s.U.radius);
      if (measure + vol > options.measure_budget) {
        why << "stage " << i << ": measure budget " << options.measure_budget << " exceeded";
        diagnostic = why.str();
        break;
      }
      stages.push_back(std::move(s));
      if (!BlowupSolution(dim, eps, stages).disjoint()) {
        stages.pop_back();
        why << "stage " << i << ": neighborhood not separated from earlier stages";
        diagnostic = why.str();
        break;
      }
      measure += vol;
      previous = value;
    } catch (const Infeasible& e) {
      why << "stage " << i << ": " << e.what();
      diagnostic = why.str();
      break;
    }
  }
  const bool complete = static_cast<int>(stages.size()) == count;
  return PlanResult{BlowupSolution(dim, eps, std::move(stages)), complete, diagnostic, growth, options};
}

BlowupDiagnostic blowup_diagnostic(const BlowupSolution& sol) {
  BlowupDiagnostic out;
  const double k = sol.dim().weight();
  if (sol.stages().empty()) return out;
  const Point& x0 = sol.stages().front().x_c;
  out.baseline = sol.u_s(x0) * std::pow(x0.norm(), k);
  for (const Stage& s : sol.stages()) {
    const double r = s.x_c.norm();
    out.entries.push_back({r, sol.eval_u(s.x_c) * std::pow(r, k), s.peak * std::pow(r, k)});
  }
  return out;
}

}  // namespace blowup::assembly
