#pragma once

// Adaptive Gragg-Bulirsch-Stoer integration for two-component first order
// systems y' = f(t, y). The step is the modified midpoint rule extrapolated in
// h^2 over the substep sequence 2, 4, ..., 2K; the result has order 2K and the
// embedded estimate is the difference to the order 2K-2 diagonal entry.
//
// A single step is an analytic function of its length, so re-stepping from a
// stored node gives a smooth dense output whose accuracy is that of the
// accepted step (see StepDense below).

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "blowup/error.hpp"

namespace blowup::ode {

struct State {
  double v = 0.0;
  double w = 0.0;  // dv/dt

  friend State operator+(State a, const State& b) { return {a.v + b.v, a.w + b.w}; }
  friend State operator-(State a, const State& b) { return {a.v - b.v, a.w - b.w}; }
  friend State operator*(double s, const State& a) { return {s * a.v, s * a.w}; }
};

struct Node {
  double t = 0.0;
  State y;
};

inline constexpr int kExtrapolationColumns = 8;

/// One extrapolated step of length h (h may be negative). If error is given it
/// receives the embedded error estimate.
template <class Rhs>
State extrapolated_step(const Rhs& f, double t, const State& y, double h, State* error = nullptr) {
  constexpr int K = kExtrapolationColumns;
  std::array<State, K> prev{};
  std::array<State, K> cur{};
  const State f0 = f(t, y);
  for (int j = 0; j < K; ++j) {
    const int substeps = 2 * (j + 1);
    const double s = h / substeps;
    State z0 = y;
    State z1 = y + s * f0;
    for (int m = 1; m < substeps; ++m) {
      State z2 = z0 + (2.0 * s) * f(t + m * s, z1);
      z0 = z1;
      z1 = z2;
    }
    cur[0] = 0.5 * (z1 + z0 + s * f(t + h, z1));
    for (int i = 1; i <= j; ++i) {
      const double ratio = static_cast<double>(j + 1) / static_cast<double>(j + 1 - i);
      cur[i] = cur[i - 1] + (1.0 / (ratio * ratio - 1.0)) * (cur[i - 1] - prev[i - 1]);
    }
    prev = cur;
  }
  if (error != nullptr) *error = cur[K - 1] - cur[K - 2];
  return cur[K - 1];
}

struct MarchOptions {
  double tol = 1e-10;
  double initial_step = 0.05;
  // Beyond a few tenths of the natural time scale the extrapolation tableau is
  // not yet asymptotic and the embedded estimate under-reports the error.
  double max_step = 0.25;
  double min_step = 1e-13;
  std::size_t max_steps = 2'000'000;
  double event_tol = 1e-13;
};

/// Zero crossing of g along the trajectory. direction > 0 accepts only
/// crossings from g < 0 to g >= 0, direction < 0 only g > 0 to g <= 0.
struct EventSpec {
  std::function<double(double, const State&)> g;
  int direction = 0;
};

struct MarchResult {
  std::vector<Node> nodes;
  bool event_hit = false;
  std::size_t rejected = 0;
};

namespace detail {

inline double error_ratio(const State& err, const State& y0, const State& y1, double tol) {
  const double scale =
      tol * std::max({std::abs(y0.v), std::abs(y0.w), std::abs(y1.v), std::abs(y1.w)});
  const double e = std::max(std::abs(err.v), std::abs(err.w));
  if (!std::isfinite(e)) return std::numeric_limits<double>::infinity();
  if (scale <= 0.0) return e > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
  return e / scale;
}

inline bool crossed(double g0, double g1, int direction) {
  if (direction >= 0 && g0 < 0.0 && g1 >= 0.0) return true;
  if (direction <= 0 && g0 > 0.0 && g1 <= 0.0) return true;
  return false;
}

}  // namespace detail

/// Integrates from (t0, y0) toward t_end, storing every accepted node. `valid`
/// rejects states outside the domain (the step is shrunk; persistent rejection
/// is reported as an IntegrationFailure). Stops early at the first event.
template <class Rhs, class Valid>
MarchResult march(const Rhs& f, double t0, const State& y0, double t_end, const MarchOptions& opt,
                  const Valid& valid, const EventSpec* event = nullptr) {
  if (!(opt.tol > 0.0)) throw InvalidArgument("integration tolerance must be positive");
  MarchResult out;
  out.nodes.push_back({t0, y0});
  if (t_end == t0) return out;
  const double dir = t_end > t0 ? 1.0 : -1.0;
  constexpr int K = kExtrapolationColumns;
  const double order_exp = 1.0 / (2.0 * K - 1.0);

  double t = t0;
  State y = y0;
  double h = std::min(opt.initial_step, opt.max_step);
  double g_prev = event ? event->g(t, y) : 0.0;

  while (dir * (t_end - t) > 0.0) {
    if (out.nodes.size() > opt.max_steps) throw IntegrationFailure("step budget exhausted");
    const double remaining = std::abs(t_end - t);
    bool last = false;
    if (h >= remaining) {
      h = remaining;
      last = true;
    }
    State err;
    const State y1 = extrapolated_step(f, t, y, dir * h, &err);
    const bool ok_domain = valid(y1);
    const double ratio = ok_domain ? detail::error_ratio(err, y, y1, opt.tol)
                                   : std::numeric_limits<double>::infinity();
    if (ratio > 1.0) {
      ++out.rejected;
      const double shrink =
          std::isfinite(ratio) ? std::clamp(0.9 * std::pow(ratio, -order_exp), 0.1, 0.7) : 0.25;
      h *= shrink;
      if (h < opt.min_step * std::max(1.0, std::abs(t))) {
        throw IntegrationFailure(ok_domain
                                     ? "step size underflow near t = " + std::to_string(t)
                                     : "solution left the domain (v <= 0) near t = " +
                                           std::to_string(t));
      }
      continue;
    }
    const double t1 = last ? t_end : t + dir * h;
    if (event) {
      const double g1 = event->g(t1, y1);
      if (detail::crossed(g_prev, g1, event->direction)) {
        double lo = 0.0;
        double hi = h;
        const double glo = g_prev;
        while (hi - lo > opt.event_tol * std::max(1.0, std::abs(t))) {
          const double mid = 0.5 * (lo + hi);
          const State ym = extrapolated_step(f, t, y, dir * mid);
          const double gm = event->g(t + dir * mid, ym);
          if (detail::crossed(glo, gm, event->direction)) {
            hi = mid;
          } else {
            lo = mid;
          }
        }
        const double tau = 0.5 * (lo + hi);
        out.nodes.push_back({t + dir * tau, extrapolated_step(f, t, y, dir * tau)});
        out.event_hit = true;
        return out;
      }
      g_prev = g1;
    }
    t = t1;
    y = y1;
    out.nodes.push_back({t, y});
    const double grow = ratio > 0.0 ? std::clamp(0.9 * std::pow(ratio, -order_exp), 0.2, 4.0) : 4.0;
    h = std::min(h * grow, opt.max_step);
  }
  return out;
}

/// Smooth evaluation between stored nodes: steps forward from the last node at
/// or before t. Nodes must be sorted by increasing t.
template <class Rhs>
State step_dense(const Rhs& f, const std::vector<Node>& nodes, double t) {
  auto it = std::upper_bound(nodes.begin(), nodes.end(), t,
                             [](double value, const Node& n) { return value < n.t; });
  if (it == nodes.begin()) it = nodes.begin() + 1;
  const Node& base = *(it - 1);
  const double h = t - base.t;
  if (h == 0.0) return base.y;
  return extrapolated_step(f, base.t, base.y, h);
}

}  // namespace blowup::ode
