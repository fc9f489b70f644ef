#pragma once

#include <span>
#include <vector>

#include "blowup/dimension.hpp"
#include "blowup/ode/fowler.hpp"
#include "blowup/parallel/kernels.hpp"

namespace blowup::ode {

/// Value and derivatives of a profile at one point.
struct ProfileJet {
  double v = 0.0;
  double vprime = 0.0;
  double vsecond = 0.0;
  double vthird = 0.0;
};

/// Delta = v_T - v_s about the nearest maximum, with derivatives in the local
/// coordinate. Kept separately because Delta is far below the rounding level of v.
struct DeviationJet {
  double d0 = 0.0;
  double d1 = 0.0;
  double d2 = 0.0;
  double d3 = 0.0;
};

/// Standardized periodic solution: v(0) is the maximum, period T, minimum eta.
///
/// Internally the half orbit on [0, T/2] is stored as the difference to the
/// canonical profile, which keeps v_T - v_s accurate to relative precision even
/// when it is of order eta^2.
class DelaunayProfile {
 public:
  DelaunayProfile(Dimension dim, double eta, double delta0, std::vector<Node> half_orbit, double tol);

  const Dimension& dim() const { return dim_; }
  double period() const { return period_; }
  /// Requested neck size (the minimum v over a period).
  double neck() const { return eta_; }
  /// v at the located minimum; agrees with neck() to integration accuracy.
  double measured_neck() const;
  double max_value() const { return dim_.canonical_peak() + delta0_; }
  /// First integral on this orbit, computed from eta without cancellation.
  double energy() const;
  /// max over the stored nodes of |H - H_eta| / |H_eta|, with H - H(v_s) formed
  /// from the deviation so the value is not limited by |H| << 1.
  double energy_drift() const;
  double tolerance() const { return tol_; }

  CylState state(double t) const;
  ProfileJet jet(double t) const;
  /// Deviation from v_s(r) at local coordinate r, |r| <= T/2.
  DeviationJet deviation(double r) const;

  /// One full period on [-T/2, T/2] at the adaptive node resolution.
  std::vector<CylState> samples() const;
  /// Samples wrapped as a trajectory for cubic Hermite interpolation.
  Trajectory trajectory() const;

 private:
  double reduce(double t) const;

  Dimension dim_;
  double eta_;
  double delta0_;
  double tol_;
  double period_;
  std::vector<Node> nodes_;  // (r, Delta, Delta') for r in [0, T/2]
};

/// Periodic profile with minimum eta, 0 < eta < v_cyl.
DelaunayProfile solve_by_neck(const Dimension& dim, double eta, double tol = 1e-10);

/// Periodic profile with period T, T_min < T <= max_period.
/// The measured period matches T within max(tol, 1e-12 T).
DelaunayProfile solve_by_period(const Dimension& dim, double T, double tol = 1e-10);

struct NeckPeriodPoint {
  double T = 0.0;
  double eta = 0.0;
  double log_eta = 0.0;
};

struct NeckPeriodFit {
  double slope = 0.0;
  double intercept = 0.0;
  /// max |ln eta - slope T - intercept|
  double fit_residual = 0.0;
  /// max |ln eta + (n-2)T/4 - intercept|
  double law_residual = 0.0;
  /// exp(max |ln eta + (n-2)T/4|)
  double implied_C = 0.0;
  std::vector<NeckPeriodPoint> points;
};

struct FitOptions {
  double tol = 1e-10;
  double min_period = 10.0;
  par::Exec exec = par::Exec::parallel;
};

/// Least-squares fit of ln eta against T.
NeckPeriodFit fit_neck_period_law(const Dimension& dim, std::span<const double> periods,
                                  const FitOptions& options = {});

}  // namespace blowup::ode
