#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "blowup/assembly/plan.hpp"
#include "blowup/conformal/radial.hpp"
#include "blowup/glue/kfield.hpp"

namespace blowup::verify {

inline constexpr double kOrderLow = 1.7;
inline constexpr double kOrderHigh = 2.3;

/// Max finite-difference residual per step size with observed orders.
struct ResidualReport {
  std::string label;
  std::vector<double> h;
  std::vector<double> max_residual;
  /// Residual divided by the largest term of the equation at the point.
  std::vector<double> max_relative;
  /// Location (t, r or point index) of each maximum.
  std::vector<double> witness;
  /// orders[i] from h[i] to h[i+1].
  std::vector<double> orders;
  /// max over points of |(4 R_{h/2} - R_h)/3| for the two finest steps.
  double richardson = 0.0;
  std::size_t points = 0;

  double order() const { return orders.empty() ? 0.0 : orders.back(); }
  bool order_in_band() const;
  /// True if some order falls outside [1.7, 2.3] (a non-smooth region is sampled).
  bool smoothness_flag() const { return !order_in_band(); }
};

using ScalarFunction = std::function<double(double)>;

/// Residual (v(t+h) - 2v(t) + v(t-h))/h^2 - a v + b K v^p at the points ts.
ResidualReport cylindrical_residual(const Dimension& dim, const ScalarFunction& v, const ScalarFunction& K,
                                    std::span<const double> ts, std::span<const double> h_list,
                                    par::Exec exec = par::Exec::parallel);

/// Modified profile against its induced K, on an even grid covering every bump and window.
ResidualReport cylindrical_residual(const glue::ModifiedProfile& mod, const glue::KRadialProfile& K,
                                    std::span<const double> h_list, int points = 2000,
                                    par::Exec exec = par::Exec::parallel);

struct EuclidResidualOptions {
  int points = 200;
  /// Steps scale with r (h r) and radii are log-spaced; for windows spanning decades.
  bool relative_steps = false;
  par::Exec exec = par::Exec::parallel;
};

/// Radial residual u'' + (n-1)u'/r + b K u^p by central differences on [r_lo, r_hi].
ResidualReport euclid_residual(const Dimension& dim, const conformal::RadialEuclidFunction& u,
                               const ScalarFunction& K_of_r, double r_lo, double r_hi,
                               std::span<const double> h_list, const EuclidResidualOptions& options = {});

/// Axis-stencil n-D residual of the assembled solution at stage-local offsets
/// w = x - x_c of stage i, with step h_j = rho_k * h_list[j] per point.
ResidualReport assembled_residual(const assembly::BlowupSolution& sol, std::size_t stage,
                                  std::span<const conformal::Point> offsets, std::span<const double> scales,
                                  std::span<const double> h_list, par::Exec exec = par::Exec::parallel);

/// Offsets whose pullback has |y| = e^{-t} for each t, in deterministic pseudo-random
/// directions, with the local length scale of the map at that point.
struct StagePoints {
  std::vector<conformal::Point> offsets;
  std::vector<double> scales;
};
StagePoints stage_points(const assembly::BlowupSolution& sol, std::size_t stage, std::span<const double> ts,
                         int per_t, std::uint64_t seed);

}  // namespace blowup::verify
