#pragma once

#include <span>
#include <vector>

#include "blowup/dimension.hpp"
#include "blowup/ode/extrapolation.hpp"

namespace blowup::ode {

/// A point (t, v, v') of a radial solution in cylindrical coordinates.
struct CylState {
  double t = 0.0;
  double v = 0.0;
  double vprime = 0.0;
};

struct TimeSpan {
  double begin = 0.0;
  double end = 0.0;
};

/// v_s and its first three derivatives.
struct CanonicalJet {
  double v = 0.0;
  double vprime = 0.0;
  double vsecond = 0.0;
  double vthird = 0.0;
};

/// v_s(t) = (2 cosh t)^((2-n)/2), evaluated without overflow for large |t|.
CanonicalJet canonical_profile(const Dimension& dim, double t);

/// Right-hand side of v'' = ((n-2)^2/4) v - n(n-2) v^p.
double fowler_acceleration(const Dimension& dim, double v);

/// First integral H = v'^2/2 - ((n-2)^2/8) v^2 + ((n-2)^2/2) v^(2n/(n-2)).
double energy(const Dimension& dim, double v, double vprime);

/// (1+x)^p - 1 without cancellation for small x; x > -1.
double pow1pm1(double x, double p);

/// Dense trajectory of the autonomous equation for (v, v').
class Trajectory {
 public:
  Trajectory(Dimension dim, std::vector<Node> nodes);

  const Dimension& dim() const { return dim_; }
  std::vector<CylState> samples() const;
  std::size_t size() const { return nodes_.size(); }
  double begin() const { return nodes_.front().t; }
  double end() const { return nodes_.back().t; }

  /// Cubic Hermite interpolation on (v, v') with derivatives (v', v'').
  CylState interpolate(double t) const;
  /// Re-steps from the nearest preceding node; accurate to the step tolerance.
  CylState evaluate(double t) const;

  /// max_i |H_{i+1} - H_i| / |H_0| over consecutive samples.
  double max_energy_jump() const;
  /// |H_end - H_begin| / |H_begin|.
  double energy_drift() const;

 private:
  Dimension dim_;
  std::vector<Node> nodes_;  // ordered by increasing t
};

/// Adaptive integration of the autonomous equation over span (either direction).
/// Throws IntegrationFailure if v reaches 0 or the step underflows.
Trajectory integrate(const Dimension& dim, const CylState& initial, TimeSpan span,
                     double tol = 1e-10);

}  // namespace blowup::ode
