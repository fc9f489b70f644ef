#pragma once

#include <memory>
#include <string>
#include <vector>

#include "blowup/conformal/kelvin.hpp"
#include "blowup/conformal/radial.hpp"
#include "blowup/glue/kfield.hpp"

namespace blowup::assembly {

/// One Kelvin-conjugated modified profile planted at x_c = -xi/|xi|^2.
struct Stage {
  conformal::Point xi;
  double a = 0.0;  // a^2 = 1 + |xi|^2
  double D = 0.0;
  double T = 0.0;         // grid value requested from the period solver
  double T_actual = 0.0;  // measured period of the profile
  int m = 2;
  double eta = 0.0;
  conformal::Point x_c;
  conformal::Ball U;  // image of |y| < e^{-D} under the reflection
  double peak = 0.0;  // u_b(x_c) in closed form
  double sup_deviation = 0.0;

  conformal::KelvinMap map() const { return conformal::KelvinMap(xi, a); }
  /// Reflection of x written as R(x) - R(x_c) with R(x_c) = 0, so the result is
  /// accurate relative to |x - x_c| on the scale of the tall peak.
  conformal::Point pullback(const conformal::Point& x) const { return pullback_offset(x - x_c); }
  /// Same with the offset w = x - x_c given directly.
  conformal::Point pullback_offset(const conformal::Point& w) const;
  /// Inverse direction: w = R(y) - x_c for a point y near the origin.
  conformal::Point pushforward_offset(const conformal::Point& y) const;

  std::shared_ptr<const glue::KRadialProfile> k_profile;
  std::shared_ptr<const conformal::RadialEuclidFunction> u_modified;
};

struct PlanOptions {
  double xi0 = 2.0;
  /// Unit direction of all xi_i; empty selects the first axis.
  std::vector<double> direction;
  int m = 2;
  double D_min = 3.0;
  /// e^D >= margin |xi|.
  double margin = 10.0;
  double measure_budget = 1e-2;
  double T_step = 1.0;
  double profile_tol = 1e-13;
  glue::KSamplingOptions sampling;
};

struct DiagnosticEntry {
  double radius = 0.0;  // |x_c|
  double value = 0.0;   // u_b(x_c) |x_c|^((n-2)/2), evaluated
  double predicted = 0.0;
};

struct BlowupDiagnostic {
  double baseline = 0.0;  // u_s(x_c) |x_c|^((n-2)/2) at the first stage
  std::vector<DiagnosticEntry> entries;
  bool strictly_increasing() const;
  /// min over i of entries[i] / entries[i-1] (entries[0] / baseline for i = 0).
  double min_ratio() const;
};

class BlowupSolution {
 public:
  BlowupSolution(Dimension dim, double eps, std::vector<Stage> stages);

  const Dimension& dim() const { return dim_; }
  double epsilon() const { return eps_; }
  const std::vector<Stage>& stages() const { return stages_; }

  /// Index of the stage whose U contains x, or -1.
  int stage_of(const conformal::Point& x) const;
  double u_s(const conformal::Point& x) const;
  double eval_u(const conformal::Point& x) const;
  double eval_K(const conformal::Point& x) const;
  /// Stage value kernel(x) u_modified(R(x)) without the containment test.
  double stage_u(std::size_t i, const conformal::Point& x) const;
  double stage_K(std::size_t i, const conformal::Point& x) const;
  /// Stage values at x = x_c + w with the offset kept at full precision.
  double stage_u_offset(std::size_t i, const conformal::Point& w) const;
  double stage_K_offset(std::size_t i, const conformal::Point& w) const;
  double total_measure() const;
  bool disjoint() const;

 private:
  Dimension dim_;
  double eps_;
  std::vector<Stage> stages_;
};

struct PlanResult {
  BlowupSolution solution;
  bool complete = true;
  std::string diagnostic;
  double growth = 0.0;
  PlanOptions options;
};

/// Plans `count` stages with |xi_i| = xi0 2^i. Each T_i is the smallest grid
/// period with sup|K - 1| <= eps that also lifts the diagnostic by `growth`.
/// An infeasible stage ends the plan early (complete = false).
PlanResult plan_stages(const Dimension& dim, double eps, int count, double growth,
                       const PlanOptions& options = {});

/// Builds a stage for fixed (xi, D, T, m).
Stage make_stage(const Dimension& dim, const conformal::Point& xi, double D, double T, int m,
                 const PlanOptions& options);

BlowupDiagnostic blowup_diagnostic(const BlowupSolution& sol);

/// n-ball volume pi^(n/2) r^n / Gamma(n/2 + 1).
double ball_volume(int n, double r);

/// Versioned plan document; reals are decimal strings.
std::string plan_to_json(const PlanResult& plan);
/// Rebuilds the stages from the stored (xi, D, T, m) and checks the stored values.
PlanResult plan_from_json(const std::string& text);

}  // namespace blowup::assembly
