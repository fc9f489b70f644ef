#include "blowup/conformal/radial.hpp"

#include <cmath>

#include "blowup/ode/fowler.hpp"

namespace blowup::conformal {

RadialEuclidFunction::RadialEuclidFunction(Point center, Evaluator f, std::optional<double> value_at_center)
    : center_(std::move(center)), f_(std::move(f)), center_value_(value_at_center) {}

RadialJet RadialEuclidFunction::radial(double r) const {
  if (!(r > 0.0)) {
    if (r == 0.0 && center_value_) return {*center_value_, 0.0, 0.0};
    throw InvalidArgument("radial function evaluated at its singular center");
  }
  return f_(r);
}

double RadialEuclidFunction::operator()(const Point& x) const { return radial(distance(x, center_)).u; }

RadialEuclidFunction cyl_to_euclid(const Dimension& dim, CylFunction v, std::optional<double> value_at_origin) {
  const double k = dim.weight();
  auto f = [k, v = std::move(v)](double r) {
    const CylJet c = v(-std::log(r));
    const double rk = std::pow(r, -k);
    return RadialJet{rk * c.v, -rk / r * (k * c.v + c.dv),
                     rk / (r * r) * (k * (k + 1.0) * c.v + (2.0 * k + 1.0) * c.dv + c.d2v)};
  };
  return RadialEuclidFunction(Point::zero(static_cast<std::size_t>(dim.n())), f, value_at_origin);
}

CylFunction euclid_to_cyl(const Dimension& dim, const RadialEuclidFunction& u) {
  const double k = dim.weight();
  return [k, u](double t) {
    const double r = std::exp(-t);
    const RadialJet j = u.radial(r);
    const double rk = std::pow(r, k);
    return CylJet{rk * j.u, -rk * (k * j.u + r * j.du),
                  rk * (k * k * j.u + (2.0 * k + 1.0) * r * j.du + r * r * j.d2u)};
  };
}

RadialEuclidFunction modified_to_euclid(const glue::ModifiedProfile& mod) {
  const Dimension dim = mod.dim();
  const double k = dim.weight();
  const double shift = mod.last_center();
  const double lambda = std::exp(-shift);
  const double inner = std::exp(-shift + mod.D());
  auto f = [mod, k, lambda, inner](double r) {
    if (r <= inner) {
      // (lambda / (lambda^2 + r^2))^k and its radial derivatives
      const double L = lambda * lambda + r * r;
      const double u = std::pow(lambda / L, k);
      const double du = -2.0 * k * r * u / L;
      const double d2u = -2.0 * k * u / L + 4.0 * k * (k + 1.0) * r * r * u / (L * L);
      return RadialJet{u, du, d2u};
    }
    const glue::ModifiedJet c = mod.eval(-std::log(r));
    const double rk = std::pow(r, -k);
    return RadialJet{rk * c.v, -rk / r * (k * c.v + c.vprime),
                     rk / (r * r) * (k * (k + 1.0) * c.v + (2.0 * k + 1.0) * c.vprime + c.vsecond)};
  };
  return RadialEuclidFunction(Point::zero(static_cast<std::size_t>(dim.n())), f, std::pow(lambda, -k));
}

}  // namespace blowup::conformal
