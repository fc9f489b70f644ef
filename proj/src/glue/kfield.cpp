#include "blowup/glue/kfield.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <sstream>

#include "blowup/error.hpp"

namespace blowup::glue {
namespace {

struct Sample {
  double t, v, km1, dk, residual;
};

// Chebyshev-clustered nodes on [lo, hi].
std::vector<double> chebyshev_nodes(double lo, double hi, int count) {
  std::vector<double> out(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    const double x = std::cos(std::numbers::pi * (2.0 * i + 1.0) / (2.0 * count));
    out[static_cast<std::size_t>(i)] = 0.5 * (lo + hi) + 0.5 * (hi - lo) * x;
  }
  return out;
}

// Refines a sampled maximum of f around t0 with spacing h.
template <class F>
std::pair<double, double> refine_max(F&& f, double t0, double f0, double h, const Interval& w,
                                     const KSamplingOptions& opt) {
  double best_t = t0;
  double best = f0;
  for (int round = 0; round < opt.refine_rounds; ++round) {
    const double lo = std::max(w.lo, best_t - h);
    const double hi = std::min(w.hi, best_t + h);
    for (double t : chebyshev_nodes(lo, hi, opt.refine_points)) {
      const double val = f(t);
      if (val > best) {
        best = val;
        best_t = t;
      }
    }
    h = (hi - lo) / opt.refine_points;
  }
  return {best_t, best};
}

}  // namespace

KRadialProfile::KRadialProfile(ModifiedProfile mod, const KSamplingOptions& opt) : mod_(std::move(mod)) {
  if (opt.samples_per_window < 4) throw InvalidArgument("need at least 4 samples per window");
  const Dimension& dm = mod_.dim();
  const std::size_t per = static_cast<std::size_t>(opt.samples_per_window);
  min_v_ = std::numeric_limits<double>::infinity();
  min_K_ = std::numeric_limits<double>::infinity();
  for (const Interval& w : mod_.windows()) {
    const double h = (w.hi - w.lo) / static_cast<double>(per);
    // Endpoints included: K = 1 there, so adjacent ratios also cover the joins.
    auto samples = par::map_index<Sample>(
        per + 1,
        [&](std::size_t i) {
          const double t = i == per ? w.hi : w.lo + h * static_cast<double>(i);
          const ModifiedJet j = mod_.eval(t);
          const KJet k = mod_.k_jet(t);
          const double bvp = dm.nonlinear_coeff() * std::pow(j.v, dm.exponent());
          const double res = j.vsecond - dm.linear_coeff() * j.v + bvp + k.km1 * bvp;
          return Sample{t, j.v, k.km1, k.dk, res};
        },
        opt.exec);
    sample_count_ += samples.size();
    for (std::size_t i = 0; i < samples.size(); ++i) {
      const Sample& s = samples[i];
      if (!(s.v > 0.0)) {
        std::ostringstream msg;
        msg << "modified profile is not positive at t = " << s.t;
        throw Error(msg.str());
      }
      min_v_ = std::min(min_v_, s.v);
      min_K_ = std::min(min_K_, 1.0 + s.km1);
      max_res_ = std::max(max_res_, std::abs(s.residual));
      if (std::abs(s.km1) > sup_dev_) {
        sup_dev_ = std::abs(s.km1);
        sup_dev_t_ = s.t;
      }
      if (std::abs(s.dk) > max_dk_) {
        max_dk_ = std::abs(s.dk);
        max_dk_t_ = s.t;
      }
      if (i > 0) {
        const double ratio = std::abs(s.km1 - samples[i - 1].km1) / (s.t - samples[i - 1].t);
        if (ratio > lip_) {
          lip_ = ratio;
          lip_t_ = 0.5 * (s.t + samples[i - 1].t);
        }
      }
    }
  }

  // Local refinement of both maxima inside the window holding them.
  auto window_of = [&](double t) {
    for (const Interval& w : mod_.windows())
      if (t >= w.lo && t <= w.hi) return w;
    return mod_.windows().front();
  };
  if (sup_dev_ > 0.0) {
    const Interval w = window_of(sup_dev_t_);
    const double h = (w.hi - w.lo) / static_cast<double>(per);
    auto r = refine_max([&](double t) { return std::abs(mod_.k_jet(t).km1); }, sup_dev_t_, sup_dev_, h, w, opt);
    sup_dev_t_ = r.first;
    sup_dev_ = r.second;
  }
  if (max_dk_ > 0.0) {
    const Interval w = window_of(max_dk_t_);
    const double h = (w.hi - w.lo) / static_cast<double>(per);
    auto r = refine_max([&](double t) { return std::abs(mod_.k_jet(t).dk); }, max_dk_t_, max_dk_, h, w, opt);
    max_dk_t_ = r.first;
    max_dk_ = r.second;
  }
}

KRadialProfile compute_K(const ModifiedProfile& mod, const KSamplingOptions& options) {
  return KRadialProfile(mod, options);
}

EpsilonScanResult choose_T_for_epsilon(const Dimension& dim, double D, int m, double eps,
                                       const EpsilonScanOptions& options) {
  if (!(eps > 0.0)) throw InvalidArgument("epsilon must be positive");
  if (!(options.T_step > 0.0)) throw InvalidArgument("scan step must be positive");
  const CutoffSpec cutoff = build_cutoff(D);
  double T = options.T_start > 0.0 ? options.T_start : std::floor(4.0 * D + 1.0) + 1.0;
  if (!(T > 4.0 * D)) throw InvalidArgument("scan must start above 4D");
  std::vector<EpsilonScanStep> history;
  for (; T <= dim.max_period(); T += options.T_step) {
    auto base = ode::solve_by_period(dim, T, options.profile_tol);
    const double eta = base.neck();
    KRadialProfile k(ModifiedProfile(std::move(base), cutoff, m), options.sampling);
    history.push_back({T, eta, k.sup_deviation()});
    if (k.sup_deviation() <= eps) return {T, std::move(k), std::move(history)};
  }
  std::ostringstream msg;
  msg << "sup|K-1| <= " << eps << " not reached below the period ceiling " << dim.max_period();
  throw Infeasible(msg.str());
}

}  // namespace blowup::glue
