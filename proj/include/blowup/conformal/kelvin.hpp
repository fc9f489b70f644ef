#pragma once

#include <functional>

#include "blowup/conformal/point.hpp"

namespace blowup::conformal {

using Field = std::function<double(const Point&)>;

/// Standard bubble (lambda / (lambda^2 + |x - center|^2))^((n-2)/2).
struct Bubble {
  double lambda = 1.0;
  Point center;

  double operator()(const Dimension& dim, const Point& x) const;
  /// lambda^((2-n)/2), attained at the center.
  double peak(const Dimension& dim) const { return std::pow(lambda, -dim.weight()); }
};

/// Reflection in the sphere of center `center` and radius `radius`.
class KelvinMap {
 public:
  KelvinMap(Point center, double radius);

  const Point& center() const { return center_; }
  double radius() const { return radius_; }
  double radius2() const { return radius_ * radius_; }

  /// center + a^2 (x - center) / |x - center|^2; throws at the center.
  Point reflect(const Point& x) const;
  /// (a / |x - center|)^(n-2).
  double kernel(const Dimension& dim, const Point& x) const;

 private:
  Point center_;
  double radius_;
};

inline Point reflect(const KelvinMap& map, const Point& x) { return map.reflect(x); }

/// x -> kernel(x) u(reflect(x)), composed lazily.
Field kelvin_transform(const Dimension& dim, const KelvinMap& map, Field u);

/// Closed form of the Kelvin transform of a bubble:
/// lambda' = a^2 lambda / L, center' = c + a^2 (center - c) / L, L = lambda^2 + |center - c|^2.
Bubble kelvin_of_bubble(const KelvinMap& map, const Bubble& b);

/// Radius about `map_center` for which the Kelvin map fixes b: sqrt(lambda^2 + |center - map_center|^2).
double symmetric_radius(const Bubble& b, const Point& map_center);
/// Same with the map centered at the origin.
double symmetric_radius(const Bubble& b);

/// -xi / |xi|^2: the point sent to the origin by the map about xi with a^2 = 1 + |xi|^2.
Point offset_source(const Point& xi);

struct Ball {
  Point center;
  double radius = 0.0;
  bool contains(const Point& x) const { return distance(x, center) < radius; }
};

/// Radius a^2 delta / (|xi|^2 - delta^2) of the image of the ball |x| < delta.
double ball_image(const KelvinMap& map, double delta);
/// Full image ball, center xi - xi_hat a^2 |xi| / (|xi|^2 - delta^2).
Ball ball_image_ball(const KelvinMap& map, double delta);

struct TranslationCheck {
  double t_bar = 0.0;
  double max_relative_deviation = 0.0;
};

/// t_bar = ln(lambda2/lambda1) and the sampled max of |v1(t) - v2(t - t_bar)| / v1(t)
/// on an even grid over [t_lo, t_hi], v_i the cylindrical transforms of origin bubbles.
TranslationCheck translation_lemma_check(const Dimension& dim, double lambda1, double lambda2,
                                         double t_lo = -10.0, double t_hi = 10.0, int samples = 2001);

}  // namespace blowup::conformal
