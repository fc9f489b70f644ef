#pragma once

#include <vector>

#include "blowup/glue/cutoff.hpp"
#include "blowup/ode/profile.hpp"

namespace blowup::glue {

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  bool contains(double t) const { return t > lo && t < hi; }
};

enum class Region { bubble, window, delaunay };

/// Position of t relative to the splice layout: nearest center index j (center
/// jT), local coordinate s = t - jT and the weight chi of v_s(s) in the blend.
struct SpliceLocation {
  int center = 0;
  double s = 0.0;
  Region region = Region::delaunay;
  double chi = 0.0;
  double chi1 = 0.0;  // d/ds
  double chi2 = 0.0;
  double chi3 = 0.0;
};

struct ModifiedJet {
  double v = 0.0;
  double vprime = 0.0;
  double vsecond = 0.0;
};

/// K - 1 and K' for the induced coefficient.
struct KJet {
  double km1 = 0.0;
  double dk = 0.0;
};

/// m-cycle cut-and-glue profile: v_s translates on [jT - D, jT + D] for
/// j = 0..m-1, v_s for t <= D and for t >= (m-1)T - D, v_T away from the
/// windows, phi_1 v_s + phi_2 v_T blends on the 2(m-1) windows.
class ModifiedProfile {
 public:
  ModifiedProfile(ode::DelaunayProfile base, CutoffSpec cutoff, int m);

  const ode::DelaunayProfile& base() const { return base_; }
  const Dimension& dim() const { return base_.dim(); }
  const CutoffSpec& cutoff() const { return cutoff_; }
  double D() const { return cutoff_.D(); }
  int cycles() const { return m_; }
  double period() const { return base_.period(); }
  /// Splice windows in increasing order (glue-out, glue-in, ...).
  const std::vector<Interval>& windows() const { return windows_; }
  /// Center of the last canonical bubble, (m-1)T.
  double last_center() const { return (m_ - 1) * period(); }

  SpliceLocation locate(double t) const;
  ModifiedJet eval(double t) const;
  /// K - 1 and K' in closed form; exactly (0, 0) outside the windows.
  KJet k_jet(double t) const;
  double K(double t) const { return 1.0 + k_jet(t).km1; }

  /// Residual v'' - a v + b K v^p with all terms from closed forms.
  double identity_residual(double t) const;

 private:
  ode::DelaunayProfile base_;
  CutoffSpec cutoff_;
  int m_;
  std::vector<Interval> windows_;
};

/// Validates m >= 2 and T > 4D, builds the cutoff for D.
ModifiedProfile splice(const ode::DelaunayProfile& base, double D, int m);

}  // namespace blowup::glue
