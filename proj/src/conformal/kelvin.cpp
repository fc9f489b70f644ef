#include "blowup/conformal/kelvin.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace blowup::conformal {

double Bubble::operator()(const Dimension& dim, const Point& x) const {
  require_dimension(dim, x);
  const double r2 = (x - center).norm2();
  return std::pow(lambda / (lambda * lambda + r2), dim.weight());
}

KelvinMap::KelvinMap(Point center, double radius) : center_(std::move(center)), radius_(radius) {
  if (!(radius > 0.0) || !std::isfinite(radius)) throw InvalidArgument("Kelvin radius must be positive");
}

Point KelvinMap::reflect(const Point& x) const {
  const Point y = x - center_;
  const double r2 = y.norm2();
  if (!(r2 > 0.0)) throw InvalidArgument("reflection is undefined at the sphere center");
  return center_ + (radius2() / r2) * y;
}

double KelvinMap::kernel(const Dimension& dim, const Point& x) const {
  require_dimension(dim, x);
  const double r = distance(x, center_);
  if (!(r > 0.0)) throw InvalidArgument("Kelvin kernel is undefined at the sphere center");
  return std::pow(radius_ / r, dim.nd() - 2.0);
}

Field kelvin_transform(const Dimension& dim, const KelvinMap& map, Field u) {
  return [dim, map, u = std::move(u)](const Point& x) { return map.kernel(dim, x) * u(map.reflect(x)); };
}

Bubble kelvin_of_bubble(const KelvinMap& map, const Bubble& b) {
  if (!(b.lambda > 0.0)) throw InvalidArgument("bubble scale must be positive");
  const Point d = b.center - map.center();
  const double L = b.lambda * b.lambda + d.norm2();
  return {map.radius2() * b.lambda / L, map.center() + (map.radius2() / L) * d};
}

double symmetric_radius(const Bubble& b, const Point& map_center) {
  return std::sqrt(b.lambda * b.lambda + (b.center - map_center).norm2());
}

double symmetric_radius(const Bubble& b) {
  return std::sqrt(b.lambda * b.lambda + b.center.norm2());
}

Point offset_source(const Point& xi) {
  const double r2 = xi.norm2();
  if (!(r2 > 0.0)) throw InvalidArgument("offset source needs a nonzero center");
  return (-1.0 / r2) * xi;
}

double ball_image(const KelvinMap& map, double delta) {
  const double r = map.center().norm();
  if (!(delta > 0.0)) throw InvalidArgument("ball radius must be positive");
  if (!(delta < r)) {
    std::ostringstream msg;
    msg << "ball radius " << delta << " must be below |xi| = " << r;
    throw InvalidArgument(msg.str());
  }
  return map.radius2() * delta / ((r - delta) * (r + delta));
}

Ball ball_image_ball(const KelvinMap& map, double delta) {
  const double rad = ball_image(map, delta);
  const double r = map.center().norm();
  const double shift = map.radius2() / ((r - delta) * (r + delta));  // times |xi| / |xi|
  return {map.center() - shift * map.center(), rad};
}

TranslationCheck translation_lemma_check(const Dimension& dim, double lambda1, double lambda2, double t_lo,
                                         double t_hi, int samples) {
  if (!(lambda1 > 0.0) || !(lambda2 > 0.0)) throw InvalidArgument("bubble scales must be positive");
  if (samples < 2 || !(t_hi > t_lo)) throw InvalidArgument("invalid sample grid");
  const double k = dim.weight();
  // v(t) = r^k u(r) at r = e^{-t} for the origin bubble of scale lambda.
  auto v = [k](double lambda, double t) {
    const double r = std::exp(-t);
    return std::pow(lambda * r / (lambda * lambda + r * r), k);
  };
  TranslationCheck out;
  out.t_bar = std::log(lambda2 / lambda1);
  for (int i = 0; i < samples; ++i) {
    const double t = t_lo + (t_hi - t_lo) * i / (samples - 1);
    const double v1 = v(lambda1, t);
    const double v2 = v(lambda2, t - out.t_bar);
    out.max_relative_deviation = std::max(out.max_relative_deviation, std::abs(v1 - v2) / v1);
  }
  return out;
}

}  // namespace blowup::conformal
