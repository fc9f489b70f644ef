#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "blowup/conformal/point.hpp"
#include "blowup/glue/kfield.hpp"

namespace blowup::verify {

/// K(x) = K(-ln|x|) of the origin-centered two-cycle construction, K(0) = 1.
class RadialKField {
 public:
  explicit RadialKField(std::shared_ptr<const glue::KRadialProfile> k);

  const Dimension& dim() const { return k_->modified().dim(); }
  const glue::KRadialProfile& profile() const { return *k_; }
  double D() const { return k_->modified().D(); }
  double T() const { return k_->modified().period(); }
  /// Glued annulus e^{-T+D} <= |x| <= e^{-D}.
  double inner_radius() const { return std::exp(-T() + D()); }
  double outer_radius() const { return std::exp(-D()); }

  double K_r(double r) const;
  double K(const conformal::Point& x) const { return K_r(x.norm()); }
  /// sup |grad K| = sup |K'(t)| e^t, dense in both windows with local refinement.
  double gradient_bound() const;

 private:
  std::shared_ptr<const glue::KRadialProfile> k_;
};

/// Two-cycle field for (n, D, T).
RadialKField two_cycle_field(const Dimension& dim, double D, double T, double profile_tol = 1e-13,
                             const glue::KSamplingOptions& sampling = {});

struct PairWitness {
  conformal::Point x;
  conformal::Point y;
  double ratio = 0.0;
  std::string pair_case;
};

struct CaseStats {
  std::string name;
  std::size_t count = 0;
  double max_ratio = 0.0;
};

struct PairSamplingOptions {
  std::size_t pairs = 100000;
  std::uint64_t seed = 1;
  int shards = 64;
  /// Optional n x n row-major rotation applied to every sampled pair.
  std::vector<double> rotation;
  par::Exec exec = par::Exec::parallel;
};

struct LipschitzReport {
  std::size_t pairs = 0;
  double max_ratio = 0.0;
  PairWitness worst;
  std::vector<CaseStats> cases;
  /// max |K(x) - 1| / |x| over the y = 0 pairs.
  double y0_max = 0.0;
  double gradient_bound = 0.0;
  double T = 0.0;
  double D = 0.0;
  std::uint64_t seed = 0;
  int shards = 0;
  bool passed = false;
};

/// |K(x) - K(y)| / |x - y|^alpha.
double pair_ratio(const RadialKField& K, const conformal::Point& x, const conformal::Point& y, double alpha = 1.0);

/// Stratified pair sampling for |K(x) - K(y)| <= |x - y|. Refuses n <= 4.
LipschitzReport lipschitz_extension_check(const RadialKField& K, const PairSamplingOptions& options = {});

struct HolderReport {
  double alpha = 0.0;
  double C = 0.0;
  double bound = 0.0;  // 4C
  std::size_t pairs = 0;
  double max_ratio = 0.0;
  double max_ratio_near = 0.0;  // |x - y| <= 1
  double max_ratio_far = 0.0;   // 1 <= |x - y| <= 4
  PairWitness worst;
  bool passed = false;
};

/// |K(x) - K(y)| <= 4C |x - y|^alpha for pairs in the closed ball of radius 2.
HolderReport holder_check(const RadialKField& K, double alpha, double C, const PairSamplingOptions& options = {});

struct CriticalOrderReport {
  double beta = 0.0;
  double exponent = 0.0;  // (n-2)/2 - beta
  double max_ratio = 0.0;  // max |K - 1| / |x|^exponent over the glued annulus
  double witness_t = 0.0;
  std::size_t samples = 0;
  bool passed = false;
};

CriticalOrderReport critical_order_check(const RadialKField& K, double beta, int samples_per_window = 4096);

struct ScanStep {
  double T = 0.0;
  double value = 0.0;
  bool passed = false;
};

struct LipschitzScanOptions {
  double D = 3.0;
  double T_start = 0.0;  // 0: smallest integer above 4D + 1
  std::size_t scan_pairs = 10000;
  PairSamplingOptions certify;
  double profile_tol = 1e-13;
};

struct LipschitzScanResult {
  double T = 0.0;
  std::shared_ptr<RadialKField> field;
  LipschitzReport report;  // certification run with a fresh seed
  std::vector<ScanStep> history;
};

/// Doubling scan, integer refinement, then certification at the accepted T.
LipschitzScanResult lipschitz_T_scan(const Dimension& dim, const LipschitzScanOptions& options = {});

struct CriticalScanResult {
  double T = 0.0;
  std::shared_ptr<RadialKField> field;
  CriticalOrderReport report;
  std::vector<ScanStep> history;
};

CriticalScanResult critical_T_scan(const Dimension& dim, double beta, double D = 3.0, double T_start = 0.0,
                                   double profile_tol = 1e-13);

/// Smallest integer-grid T >= T_start with check(T) true, assuming monotonicity:
/// doubling until a pass, then bisection on integers. Throws Infeasible past T_max.
double scan_period(const std::function<bool(double)>& check, double T_start, double T_max);

}  // namespace blowup::verify
