#pragma once

#include <vector>

#include "blowup/glue/modified.hpp"
#include "blowup/parallel/kernels.hpp"

namespace blowup::glue {

struct KSamplingOptions {
  int samples_per_window = 4096;
  /// Rounds of Chebyshev-clustered refinement around each sampled maximum.
  int refine_rounds = 3;
  int refine_points = 64;
  par::Exec exec = par::Exec::parallel;
};

/// Radial coefficient K(t) of a modified profile with sampled diagnostics.
class KRadialProfile {
 public:
  KRadialProfile(ModifiedProfile mod, const KSamplingOptions& options = {});

  const ModifiedProfile& modified() const { return mod_; }
  const std::vector<Interval>& support() const { return mod_.windows(); }
  double K(double t) const { return mod_.K(t); }
  KJet jet(double t) const { return mod_.k_jet(t); }

  /// sup |K - 1| and its location.
  double sup_deviation() const { return sup_dev_; }
  double sup_deviation_at() const { return sup_dev_t_; }
  /// max |K(t_i) - K(t_{i+1})| / |t_i - t_{i+1}| over adjacent dense samples.
  double lipschitz_estimate() const { return lip_; }
  double lipschitz_at() const { return lip_t_; }
  /// max |K'| from the closed-form derivative.
  double max_abs_derivative() const { return max_dk_; }
  double max_abs_derivative_at() const { return max_dk_t_; }
  /// Sampled minimum of K; K > 0 is needed for a curvature interpretation.
  double min_K() const { return min_K_; }
  bool positive() const { return min_K_ > 0.0; }
  double min_v() const { return min_v_; }
  /// max |v'' - a v + b K v^p| over the dense samples.
  double max_identity_residual() const { return max_res_; }
  std::size_t sample_count() const { return sample_count_; }

 private:
  ModifiedProfile mod_;
  double sup_dev_ = 0.0, sup_dev_t_ = 0.0;
  double lip_ = 0.0, lip_t_ = 0.0;
  double max_dk_ = 0.0, max_dk_t_ = 0.0;
  double min_K_ = 1.0, min_v_ = 0.0, max_res_ = 0.0;
  std::size_t sample_count_ = 0;
};

/// Dense-sampled K for a modified profile. Throws Error if v is not positive.
KRadialProfile compute_K(const ModifiedProfile& mod, const KSamplingOptions& options = {});

struct EpsilonScanOptions {
  /// First grid value; 0 selects the smallest integer above 4D + 1.
  double T_start = 0.0;
  double T_step = 1.0;
  /// Tolerance used for the underlying periodic profiles.
  double profile_tol = 1e-13;
  KSamplingOptions sampling;
};

struct EpsilonScanStep {
  double T = 0.0;
  double eta = 0.0;
  double sup_deviation = 0.0;
};

struct EpsilonScanResult {
  double T = 0.0;
  KRadialProfile profile;
  std::vector<EpsilonScanStep> history;
};

/// Smallest T on the grid T_start + k T_step with sup |K - 1| <= eps.
/// Throws Infeasible if the precision ceiling of the dimension is reached first.
EpsilonScanResult choose_T_for_epsilon(const Dimension& dim, double D, int m, double eps,
                                       const EpsilonScanOptions& options = {});

}  // namespace blowup::glue
