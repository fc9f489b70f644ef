#pragma once

namespace blowup::glue {

/// phi_1 and its first three derivatives at one point.
struct CutoffJet {
  double value = 0.0;
  double d1 = 0.0;
  double d2 = 0.0;
  double d3 = 0.0;
};

/// Degree-7 smoothstep transition: phi_1 = 1 on (-inf, D], 0 on [2D, inf),
/// phi_1(t) = 1 - S((t - D)/D), S(x) = 35x^4 - 84x^5 + 70x^6 - 20x^7. phi_2 = 1 - phi_1.
class CutoffSpec;
CutoffSpec build_cutoff(double D, int samples);

class CutoffSpec {
 public:
  static constexpr int kDegree = 7;

  explicit CutoffSpec(double D);

  double D() const { return D_; }
  double window_begin() const { return D_; }
  double window_end() const { return 2.0 * D_; }

  CutoffJet phi1(double t) const;
  double phi2(double t) const { return 1.0 - phi1(t).value; }

  /// Sampled maxima of |phi_1'|, |phi_1''|, |phi_1'''| over the window.
  double max_d1() const { return max_[0]; }
  double max_d2() const { return max_[1]; }
  double max_d3() const { return max_[2]; }

 private:
  friend CutoffSpec build_cutoff(double D, int samples);

  double D_;
  double max_[3] = {0.0, 0.0, 0.0};
};

/// Smallest D with max|S'''|/D^3 <= 2D, i.e. (52.5/2)^(1/4).
double minimal_cutoff_width();

/// Builds the cutoff and checks 0 <= phi_1 <= 1, monotonicity and
/// |phi_1^(j)| <= 2D (j = 1, 2, 3) on a dense grid. Throws InvalidArgument otherwise.
CutoffSpec build_cutoff(double D, int samples);
inline CutoffSpec build_cutoff(double D) { return build_cutoff(D, 4096); }

}  // namespace blowup::glue
