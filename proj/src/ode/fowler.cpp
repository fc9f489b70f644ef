#include "blowup/ode/fowler.hpp"

#include <algorithm>
#include <cmath>

namespace blowup::ode {

CanonicalJet canonical_profile(const Dimension& dim, double t) {
  const double k = dim.weight();
  const double at = std::abs(t);
  const double e = std::exp(-2.0 * at);
  // (2 cosh t)^-k = e^{-k|t|} (1 + e^{-2|t|})^{-k}
  const double v = std::exp(-k * at) * std::pow(1.0 + e, -k);
  const double th = std::tanh(t);
  const double sech2 = 4.0 * e / ((1.0 + e) * (1.0 + e));
  CanonicalJet j;
  j.v = v;
  j.vprime = -k * th * v;
  // v'' = v (k^2 tanh^2 - k sech^2);  v''' = (a - b p v^{p-1}) v', b v^{p-1} = 4 k(k+1) sech^2 / 4
  j.vsecond = v * (k * k * th * th - k * sech2);
  const double a = dim.linear_coeff();
  const double bvp1 = k * (k + 1.0) * sech2;  // n(n-2) v_s^{p-1}
  j.vthird = (a - dim.exponent() * bvp1) * j.vprime;
  return j;
}

double fowler_acceleration(const Dimension& dim, double v) {
  return dim.linear_coeff() * v - dim.nonlinear_coeff() * std::pow(v, dim.exponent());
}

double energy(const Dimension& dim, double v, double vprime) {
  return 0.5 * vprime * vprime - 0.5 * dim.linear_coeff() * v * v +
         dim.energy_coeff() * std::pow(v, dim.energy_exponent());
}

double pow1pm1(double x, double p) { return std::expm1(p * std::log1p(x)); }

namespace {

struct AutonomousRhs {
  Dimension dim;
  State operator()(double, const State& y) const {
    return {y.w, fowler_acceleration(dim, y.v)};
  }
};

}  // namespace

Trajectory::Trajectory(Dimension dim, std::vector<Node> nodes) : dim_(dim), nodes_(std::move(nodes)) {
  if (nodes_.empty()) throw InvalidArgument("trajectory needs at least one node");
  if (nodes_.size() > 1 && nodes_.front().t > nodes_.back().t) std::reverse(nodes_.begin(), nodes_.end());
}

std::vector<CylState> Trajectory::samples() const {
  std::vector<CylState> out;
  out.reserve(nodes_.size());
  for (const auto& n : nodes_) out.push_back({n.t, n.y.v, n.y.w});
  return out;
}

CylState Trajectory::interpolate(double t) const {
  if (nodes_.size() == 1) return {t, nodes_[0].y.v, nodes_[0].y.w};
  auto it = std::upper_bound(nodes_.begin(), nodes_.end(), t,
                             [](double value, const Node& n) { return value < n.t; });
  if (it == nodes_.begin()) ++it;
  if (it == nodes_.end()) --it;
  const Node& n0 = *(it - 1);
  const Node& n1 = *it;
  const double h = n1.t - n0.t;
  const double s = (t - n0.t) / h;
  const double a0 = fowler_acceleration(dim_, n0.y.v);
  const double a1 = fowler_acceleration(dim_, n1.y.v);
  auto hermite = [&](double p0, double m0, double p1, double m1) {
    const double s2 = s * s;
    const double s3 = s2 * s;
    return (2 * s3 - 3 * s2 + 1) * p0 + (s3 - 2 * s2 + s) * h * m0 + (-2 * s3 + 3 * s2) * p1 +
           (s3 - s2) * h * m1;
  };
  return {t, hermite(n0.y.v, n0.y.w, n1.y.v, n1.y.w), hermite(n0.y.w, a0, n1.y.w, a1)};
}

CylState Trajectory::evaluate(double t) const {
  if (nodes_.size() == 1) return interpolate(t);
  const State y = step_dense(AutonomousRhs{dim_}, nodes_, t);
  return {t, y.v, y.w};
}

double Trajectory::max_energy_jump() const {
  const double h0 = std::abs(energy(dim_, nodes_.front().y.v, nodes_.front().y.w));
  double worst = 0.0;
  double prev = energy(dim_, nodes_.front().y.v, nodes_.front().y.w);
  for (std::size_t i = 1; i < nodes_.size(); ++i) {
    const double h = energy(dim_, nodes_[i].y.v, nodes_[i].y.w);
    worst = std::max(worst, std::abs(h - prev));
    prev = h;
  }
  return worst / h0;
}

double Trajectory::energy_drift() const {
  const double h0 = energy(dim_, nodes_.front().y.v, nodes_.front().y.w);
  const double h1 = energy(dim_, nodes_.back().y.v, nodes_.back().y.w);
  return std::abs(h1 - h0) / std::abs(h0);
}

Trajectory integrate(const Dimension& dim, const CylState& initial, TimeSpan span, double tol) {
  if (!(initial.v > 0.0)) throw InvalidArgument("initial v must be positive");
  if (!(tol > 0.0)) throw InvalidArgument("tolerance must be positive");
  MarchOptions opt;
  opt.tol = tol;
  const State y0{initial.v, initial.vprime};
  auto result = march(AutonomousRhs{dim}, span.begin, y0, span.end, opt,
                      [](const State& y) { return y.v > 0.0 && std::isfinite(y.w); });
  return Trajectory(dim, std::move(result.nodes));
}

}  // namespace blowup::ode
