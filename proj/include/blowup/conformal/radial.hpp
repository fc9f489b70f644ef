#pragma once

#include <functional>
#include <optional>

#include "blowup/conformal/point.hpp"
#include "blowup/glue/modified.hpp"

namespace blowup::conformal {

struct RadialJet {
  double u = 0.0;
  double du = 0.0;   // d/dr
  double d2u = 0.0;  // d^2/dr^2
};

struct CylJet {
  double v = 0.0;
  double dv = 0.0;
  double d2v = 0.0;
};

using CylFunction = std::function<CylJet(double)>;

/// Radial function about a center, with first and second radial derivatives.
class RadialEuclidFunction {
 public:
  using Evaluator = std::function<RadialJet(double)>;

  RadialEuclidFunction(Point center, Evaluator f, std::optional<double> value_at_center = std::nullopt);

  const Point& center() const { return center_; }
  RadialJet radial(double r) const;
  /// u(x); at the center only if a removable value was supplied.
  double operator()(const Point& x) const;

 private:
  Point center_;
  Evaluator f_;
  std::optional<double> center_value_;
};

/// u(x) = |x|^(-(n-2)/2) v(-ln|x|) about the origin of R^n.
RadialEuclidFunction cyl_to_euclid(const Dimension& dim, CylFunction v,
                                   std::optional<double> value_at_origin = std::nullopt);
/// v(t) = e^(-(n-2)t/2) u(e^(-t)).
CylFunction euclid_to_cyl(const Dimension& dim, const RadialEuclidFunction& u);

/// Euclidean form of a modified profile. Inside |x| <= e^(-(m-1)T + D) the last
/// bubble lambda_m = e^(-(m-1)T) is evaluated in closed form, so the origin is
/// a removable point with value lambda_m^((2-n)/2).
RadialEuclidFunction modified_to_euclid(const glue::ModifiedProfile& mod);

}  // namespace blowup::conformal
