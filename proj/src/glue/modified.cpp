#include "blowup/glue/modified.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "blowup/error.hpp"

namespace blowup::glue {

ModifiedProfile::ModifiedProfile(ode::DelaunayProfile base, CutoffSpec cutoff, int m)
    : base_(std::move(base)), cutoff_(cutoff), m_(m) {
  if (m_ < 2) throw InvalidArgument("cycle count m must be at least 2");
  const double T = base_.period();
  const double D = cutoff_.D();
  if (!(T > 4.0 * D)) {
    std::ostringstream msg;
    msg << "splice windows overlap: period " << T << " must exceed 4D = " << 4.0 * D;
    throw InvalidArgument(msg.str());
  }
  for (int j = 0; j + 1 < m_; ++j) {
    windows_.push_back({j * T + D, j * T + 2.0 * D});
    windows_.push_back({(j + 1) * T - 2.0 * D, (j + 1) * T - D});
  }
}

SpliceLocation ModifiedProfile::locate(double t) const {
  const double T = period();
  const double D = cutoff_.D();
  SpliceLocation loc;
  const double j = std::clamp(std::nearbyint(t / T), 0.0, static_cast<double>(m_ - 1));
  loc.center = static_cast<int>(j);
  loc.s = t - j * T;
  const double a = std::abs(loc.s);
  const bool outer = (loc.center == 0 && loc.s < 0.0) || (loc.center == m_ - 1 && loc.s > 0.0);
  if (a <= D || outer) {
    loc.region = Region::bubble;
    loc.chi = 1.0;
  } else if (a < 2.0 * D) {
    loc.region = Region::window;
    const CutoffJet c = cutoff_.phi1(a);
    const double sign = loc.s < 0.0 ? -1.0 : 1.0;
    loc.chi = c.value;
    loc.chi1 = sign * c.d1;
    loc.chi2 = c.d2;
    loc.chi3 = sign * c.d3;
  }
  return loc;
}

ModifiedJet ModifiedProfile::eval(double t) const {
  const SpliceLocation loc = locate(t);
  const ode::CanonicalJet c = ode::canonical_profile(dim(), loc.s);
  if (loc.region == Region::bubble) return {c.v, c.vprime, c.vsecond};
  const ode::DeviationJet d = base_.deviation(loc.s);
  const double w = 1.0 - loc.chi;
  return {c.v + w * d.d0, c.vprime + w * d.d1 - loc.chi1 * d.d0,
          c.vsecond + w * d.d2 - 2.0 * loc.chi1 * d.d1 - loc.chi2 * d.d0};
}

KJet ModifiedProfile::k_jet(double t) const {
  const SpliceLocation loc = locate(t);
  if (loc.region != Region::window) return {};
  const Dimension& dm = dim();
  const double p = dm.exponent();
  const double b = dm.nonlinear_coeff();
  const ode::CanonicalJet c = ode::canonical_profile(dm, loc.s);
  const ode::DeviationJet d = base_.deviation(loc.s);
  const double chi = loc.chi;
  const double w = 1.0 - chi;

  const double v = c.v + w * d.d0;
  const double v1 = c.vprime + w * d.d1 - loc.chi1 * d.d0;
  const double vT = c.v + d.d0;

  // K - 1 = chi ((v_s/v)^p - 1) + (1 - chi) ((v_T/v)^p - 1) + Q / (b v^p)
  const double ds = -w * d.d0 / v;   // v_s/v - 1
  const double dT = chi * d.d0 / v;  // v_T/v - 1
  const double P = chi * ode::pow1pm1(ds, p) + w * ode::pow1pm1(dT, p);
  const double Q = loc.chi2 * d.d0 + 2.0 * loc.chi1 * d.d1;
  const double bvp = b * std::pow(v, p);
  KJet out;
  out.km1 = P + Q / bvp;

  const double ds1 = (loc.chi1 * d.d0 - w * d.d1) / v + w * d.d0 * v1 / (v * v);
  const double dT1 = (loc.chi1 * d.d0 + chi * d.d1) / v - chi * d.d0 * v1 / (v * v);
  const double P1 = loc.chi1 * (ode::pow1pm1(ds, p) - ode::pow1pm1(dT, p)) +
                    p * (chi * std::pow(c.v / v, p - 1.0) * ds1 + w * std::pow(vT / v, p - 1.0) * dT1);
  const double Q1 = loc.chi3 * d.d0 + 3.0 * loc.chi2 * d.d1 + 2.0 * loc.chi1 * d.d2;
  out.dk = P1 + Q1 / bvp - p * Q * v1 / (bvp * v);
  return out;
}

double ModifiedProfile::identity_residual(double t) const {
  const ModifiedJet j = eval(t);
  const KJet k = k_jet(t);
  const Dimension& dm = dim();
  const double bvp = dm.nonlinear_coeff() * std::pow(j.v, dm.exponent());
  return j.vsecond - dm.linear_coeff() * j.v + bvp + k.km1 * bvp;
}

ModifiedProfile splice(const ode::DelaunayProfile& base, double D, int m) {
  return ModifiedProfile(base, build_cutoff(D), m);
}

}  // namespace blowup::glue
