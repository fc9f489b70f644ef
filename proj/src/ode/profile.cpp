#include "blowup/ode/profile.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <sstream>
#include <string>

#include "blowup/log.hpp"

namespace blowup::ode {
namespace {

// y = (Delta, Delta') with v_T = v_s + Delta; the equation for Delta subtracts
// the canonical one exactly: Delta'' = a Delta - b v_s^p ((1 + Delta/v_s)^p - 1).
struct DeviationRhs {
  Dimension dim;
  State operator()(double t, const State& y) const {
    const double vs = canonical_profile(dim, t).v;
    const double p = dim.exponent();
    const double forcing = std::pow(vs, p) * pow1pm1(y.v / vs, p);
    return {y.w, dim.linear_coeff() * y.v - dim.nonlinear_coeff() * forcing};
  }
};

double orbit_energy(const Dimension& dim, double eta) {
  return -0.5 * dim.linear_coeff() * eta * eta + dim.energy_coeff() * std::pow(eta, dim.energy_exponent());
}

// Delta(0) such that (v_s(0) + Delta(0), 0) lies on the energy level of the
// orbit through (eta, 0). Safeguarded Newton on x = Delta(0)/v_s(0).
double initial_deviation(const Dimension& dim, double eta) {
  const double v0 = dim.canonical_peak();
  const double q = dim.energy_exponent();
  const double scale = 0.5 * dim.linear_coeff() * v0 * v0;
  const double target = orbit_energy(dim, eta);
  auto g = [&](double x) { return scale * (std::expm1(q * std::log1p(x)) - 2.0 * x - x * x) - target; };
  auto dg = [&](double x) { return scale * (q * std::pow(1.0 + x, q - 1.0) - 2.0 - 2.0 * x); };

  double lo = dim.cylinder_value() / v0 - 1.0;  // g(lo) < 0
  double hi = 0.0;                                // g(hi) > 0
  double x = std::max(target / (scale * (q - 2.0)), 0.5 * lo);
  if (!(x > lo && x < hi)) x = 0.5 * (lo + hi);
  for (int it = 0; it < 200; ++it) {
    const double gx = g(x);
    if (gx == 0.0) break;
    if (gx < 0.0) lo = x; else hi = x;
    double next = x - gx / dg(x);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - x) <= 4.0 * std::numeric_limits<double>::epsilon() * std::abs(x)) {
      x = next;
      break;
    }
    x = next;
  }
  return x * v0;
}

MarchResult shoot_half_orbit(const Dimension& dim, double eta, double delta0, double tol) {
  MarchOptions opt;
  opt.tol = tol;
  opt.initial_step = 0.02;
  const DeviationRhs rhs{dim};
  EventSpec neck_event{[dim](double t, const State& y) { return canonical_profile(dim, t).vprime + y.w; }, +1};
  const double t_end = 0.5 * dim.max_period() + 20.0;
  auto result = march(
      rhs, 0.0, State{delta0, 0.0}, t_end, opt,
      [&](const State& y) { return std::isfinite(y.v) && std::isfinite(y.w); }, &neck_event);
  if (!result.event_hit) {
    std::ostringstream msg;
    msg << "no neck found for eta = " << eta << " before t = " << t_end
        << " (period above the precision ceiling " << dim.max_period() << ")";
    throw Infeasible(msg.str());
  }
  return result;
}

void check_period_ceiling(const Dimension& dim, double T) {
  if (T > dim.warn_period()) {
    std::ostringstream msg;
    msg << "period " << T << " exceeds " << dim.warn_period() << " for n = " << dim.n()
        << "; neck size is near the floating point floor";
    log::warn(msg.str());
  }
}

}  // namespace

DelaunayProfile::DelaunayProfile(Dimension dim, double eta, double delta0, std::vector<Node> half_orbit,
                                 double tol)
    : dim_(dim), eta_(eta), delta0_(delta0), tol_(tol), nodes_(std::move(half_orbit)) {
  if (nodes_.size() < 2) throw InvalidArgument("half orbit needs at least two nodes");
  period_ = 2.0 * nodes_.back().t;
}

double DelaunayProfile::measured_neck() const {
  const Node& last = nodes_.back();
  return canonical_profile(dim_, last.t).v + last.y.v;
}

double DelaunayProfile::energy() const { return orbit_energy(dim_, eta_); }

double DelaunayProfile::energy_drift() const {
  const double a = dim_.linear_coeff();
  const double q = dim_.energy_exponent();
  const double c = dim_.energy_coeff();
  const double H = energy();
  double worst = 0.0;
  for (const Node& node : nodes_) {
    const CanonicalJet s = canonical_profile(dim_, node.t);
    const double d = node.y.v;
    const double dw = node.y.w;
    // H(v_s + d, v_s' + dw) - H(v_s, v_s'), with H(v_s, v_s') = 0
    const double h = s.vprime * dw + 0.5 * dw * dw - a * s.v * d - 0.5 * a * d * d +
                     c * std::pow(s.v, q) * pow1pm1(d / s.v, q);
    worst = std::max(worst, std::abs(h - H));
  }
  return worst / std::abs(H);
}

double DelaunayProfile::reduce(double t) const { return t - period_ * std::nearbyint(t / period_); }

DeviationJet DelaunayProfile::deviation(double r) const {
  const double s = std::min(std::abs(r), nodes_.back().t);
  const double sign = r < 0.0 ? -1.0 : 1.0;
  const DeviationRhs rhs{dim_};
  const State y = step_dense(rhs, nodes_, s);
  const CanonicalJet c = canonical_profile(dim_, s);
  const double p = dim_.exponent();
  const double b = dim_.nonlinear_coeff();
  const double a = dim_.linear_coeff();
  const double x = y.v / c.v;
  const double vT = c.v + y.v;
  DeviationJet d;
  d.d0 = y.v;
  d.d1 = sign * y.w;
  d.d2 = a * y.v - b * std::pow(c.v, p) * pow1pm1(x, p);
  const double d3 = a * y.w - b * p * (std::pow(c.v, p - 1.0) * pow1pm1(x, p - 1.0) * c.vprime +
                                       std::pow(vT, p - 1.0) * y.w);
  d.d3 = sign * d3;
  return d;
}

CylState DelaunayProfile::state(double t) const {
  const double r = reduce(t);
  const CanonicalJet c = canonical_profile(dim_, r);
  const DeviationJet d = deviation(r);
  return {t, c.v + d.d0, c.vprime + d.d1};
}

ProfileJet DelaunayProfile::jet(double t) const {
  const double r = reduce(t);
  const CanonicalJet c = canonical_profile(dim_, r);
  const DeviationJet d = deviation(r);
  return {c.v + d.d0, c.vprime + d.d1, c.vsecond + d.d2, c.vthird + d.d3};
}

std::vector<CylState> DelaunayProfile::samples() const {
  std::vector<CylState> out;
  out.reserve(2 * nodes_.size() - 1);
  auto push = [&](const Node& node, double sign) {
    const CanonicalJet c = canonical_profile(dim_, node.t);
    out.push_back({sign * node.t, c.v + node.y.v, sign * (c.vprime + node.y.w)});
  };
  for (std::size_t i = nodes_.size(); i-- > 1;) push(nodes_[i], -1.0);
  for (const auto& node : nodes_) push(node, 1.0);
  return out;
}

Trajectory DelaunayProfile::trajectory() const {
  std::vector<Node> nodes;
  for (const auto& s : samples()) nodes.push_back({s.t, {s.v, s.vprime}});
  return Trajectory(dim_, std::move(nodes));
}

DelaunayProfile solve_by_neck(const Dimension& dim, double eta, double tol) {
  if (!(eta > 0.0)) throw InvalidArgument("neck size must be positive");
  if (!(eta < dim.cylinder_value())) {
    std::ostringstream msg;
    msg << "neck size " << eta << " must be below the constant solution " << dim.cylinder_value();
    throw InvalidArgument(msg.str());
  }
  if (!(tol > 0.0)) throw InvalidArgument("tolerance must be positive");
  const double delta0 = initial_deviation(dim, eta);
  auto orbit = shoot_half_orbit(dim, eta, delta0, tol);
  DelaunayProfile profile(dim, eta, delta0, std::move(orbit.nodes), tol);
  check_period_ceiling(dim, profile.period());
  return profile;
}

DelaunayProfile solve_by_period(const Dimension& dim, double T, double tol) {
  if (!(tol > 0.0)) throw InvalidArgument("tolerance must be positive");
  if (!std::isfinite(T) || T > dim.max_period()) {
    std::ostringstream msg;
    msg << "period " << T << " exceeds the precision ceiling " << dim.max_period() << " for n = " << dim.n();
    throw InvalidArgument(msg.str());
  }
  const double period_tol = std::max(tol, 1e-12 * T);
  auto period_of = [&](double u) {
    const double eta = std::exp(u);
    return 2.0 * shoot_half_orbit(dim, eta, initial_deviation(dim, eta), tol).nodes.back().t;
  };

  // T(u) decreases in u = ln eta; near v_cyl it tends to the minimal period.
  const double u_top = std::log(dim.cylinder_value()) + std::log1p(-1e-12);
  const double T_top = period_of(u_top);
  if (!(T > T_top)) {
    std::ostringstream msg;
    msg << "period " << T << " is below the minimal period " << T_top << " (linearization 2pi/sqrt(n-2) = "
        << dim.minimal_period() << ") for n = " << dim.n();
    throw InvalidArgument(msg.str());
  }

  const double slope = -0.25 * (dim.nd() - 2.0);
  double u = std::min(slope * T, u_top - 1e-3);
  double f = period_of(u) - T;
  double u_lo, f_lo, u_hi, f_hi;  // f_lo > 0 > f_hi
  if (f > 0.0) {
    u_lo = u; f_lo = f;
    u_hi = u_top; f_hi = T_top - T;
    for (double step = 1.0; u + step < u_top; step *= 2.0) {
      const double fu = period_of(u + step) - T;
      if (fu <= 0.0) { u_hi = u + step; f_hi = fu; break; }
      u_lo = u + step; f_lo = fu;
    }
  } else {
    u_hi = u; f_hi = f;
    u_lo = u; f_lo = f;
    for (double step = 1.0;; step *= 2.0) {
      const double uu = u - step;
      const double fu = period_of(uu) - T;
      if (fu > 0.0) { u_lo = uu; f_lo = fu; break; }
      u_hi = uu; f_hi = fu;
      if (step > 1e4) throw IntegrationFailure("failed to bracket the period");
    }
  }

  // Illinois variant of regula falsi.
  double best_u = std::abs(f_lo) < std::abs(f_hi) ? u_lo : u_hi;
  double best_f = std::min(std::abs(f_lo), std::abs(f_hi));
  int side = 0;
  for (int it = 0; it < 200 && best_f > period_tol; ++it) {
    double um = (u_lo * f_hi - u_hi * f_lo) / (f_hi - f_lo);
    if (!(um > u_lo && um < u_hi)) um = 0.5 * (u_lo + u_hi);
    const double fm = period_of(um) - T;
    if (std::abs(fm) < best_f) { best_f = std::abs(fm); best_u = um; }
    if (fm > 0.0) {
      u_lo = um; f_lo = fm;
      if (side == -1) f_hi *= 0.5;
      side = -1;
    } else {
      u_hi = um; f_hi = fm;
      if (side == +1) f_lo *= 0.5;
      side = +1;
    }
    if (u_hi - u_lo <= 4.0 * std::numeric_limits<double>::epsilon() * std::abs(u_lo)) break;
  }
  if (best_f > 10.0 * period_tol) {
    std::ostringstream msg;
    msg << "period solve for T = " << T << " stalled at |T(eta) - T| = " << best_f;
    throw IntegrationFailure(msg.str());
  }
  return solve_by_neck(dim, std::exp(best_u), tol);
}

NeckPeriodFit fit_neck_period_law(const Dimension& dim, std::span<const double> periods,
                                  const FitOptions& options) {
  if (periods.size() < 3) throw InvalidArgument("the neck-period fit needs at least 3 periods");
  for (double T : periods) {
    if (!(T >= options.min_period)) {
      std::ostringstream msg;
      msg << "period " << T << " is below the fit threshold " << options.min_period;
      throw InvalidArgument(msg.str());
    }
  }
  const std::size_t count = periods.size();
  double mean_T = 0.0;
  for (double T : periods) mean_T += T;
  mean_T /= static_cast<double>(count);
  double sxx = 0.0;
  for (double T : periods) sxx += (T - mean_T) * (T - mean_T);
  if (!(sxx > 1e-12 * mean_T * mean_T)) throw InvalidArgument("degenerate fit: identical periods");

  auto etas = par::map_index<double>(
      count, [&](std::size_t i) { return solve_by_period(dim, periods[i], options.tol).neck(); },
      options.exec);

  NeckPeriodFit fit;
  double mean_y = 0.0;
  for (std::size_t i = 0; i < count; ++i) {
    fit.points.push_back({periods[i], etas[i], std::log(etas[i])});
    mean_y += fit.points.back().log_eta;
  }
  mean_y /= static_cast<double>(count);
  double sxy = 0.0;
  for (const auto& pt : fit.points) sxy += (pt.T - mean_T) * (pt.log_eta - mean_y);
  fit.slope = sxy / sxx;
  fit.intercept = mean_y - fit.slope * mean_T;
  const double law = 0.25 * (dim.nd() - 2.0);
  double max_dev = 0.0;
  for (const auto& pt : fit.points) {
    fit.fit_residual = std::max(fit.fit_residual, std::abs(pt.log_eta - fit.slope * pt.T - fit.intercept));
    fit.law_residual = std::max(fit.law_residual, std::abs(pt.log_eta + law * pt.T - fit.intercept));
    max_dev = std::max(max_dev, std::abs(pt.log_eta + law * pt.T));
  }
  fit.implied_C = std::exp(max_dev);
  return fit;
}

}  // namespace blowup::ode
