#include "blowup/glue/cutoff.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "blowup/error.hpp"

namespace blowup::glue {
namespace {

struct Smoothstep {
  double s, d1, d2, d3;
};

Smoothstep smoothstep(double x) {
  const double x2 = x * x;
  const double x3 = x2 * x;
  // S = x^4 (35 - 84x + 70x^2 - 20x^3)
  return {x2 * x2 * (35.0 + x * (-84.0 + x * (70.0 - 20.0 * x))),
          140.0 * x3 * (1.0 - x) * (1.0 - x) * (1.0 - x),
          420.0 * x2 * (1.0 - x) * (1.0 - x) * (1.0 - 2.0 * x),
          840.0 * x * (1.0 - x) * (1.0 - 5.0 * x + 5.0 * x2)};
}

}  // namespace

CutoffSpec::CutoffSpec(double D) : D_(D) {
  if (!(D > 0.0) || !std::isfinite(D)) throw InvalidArgument("cutoff half-width must be positive");
}

CutoffJet CutoffSpec::phi1(double t) const {
  if (t <= D_) return {1.0, 0.0, 0.0, 0.0};
  if (t >= 2.0 * D_) return {0.0, 0.0, 0.0, 0.0};
  const Smoothstep s = smoothstep((t - D_) / D_);
  const double inv = 1.0 / D_;
  return {1.0 - s.s, -s.d1 * inv, -s.d2 * inv * inv, -s.d3 * inv * inv * inv};
}

double minimal_cutoff_width() { return std::pow(52.5 / 2.0, 0.25); }

CutoffSpec build_cutoff(double D, int samples) {
  if (!(D >= 1.0)) throw InvalidArgument("cutoff requires D >= 1");
  if (samples < 16) throw InvalidArgument("cutoff verification needs at least 16 samples");
  CutoffSpec spec(D);
  double prev = 1.0;
  double max[3] = {0.0, 0.0, 0.0};
  for (int i = 0; i <= samples; ++i) {
    const double t = D + D * static_cast<double>(i) / samples;
    const CutoffJet j = spec.phi1(t);
    if (j.value < 0.0 || j.value > 1.0 || j.value > prev) {
      throw InvalidArgument("cutoff is not a monotone transition from 1 to 0");
    }
    prev = j.value;
    max[0] = std::max(max[0], std::abs(j.d1));
    max[1] = std::max(max[1], std::abs(j.d2));
    max[2] = std::max(max[2], std::abs(j.d3));
  }
  for (int k = 0; k < 3; ++k) {
    if (max[k] > 2.0 * D) {
      std::ostringstream msg;
      msg << "cutoff derivative of order " << (k + 1) << " reaches " << max[k] << " > 2D = " << 2.0 * D
          << "; the effective lower bound is D >= " << minimal_cutoff_width();
      throw InvalidArgument(msg.str());
    }
  }
  CutoffSpec out(D);
  std::copy(std::begin(max), std::end(max), out.max_);
  return out;
}

}  // namespace blowup::glue
