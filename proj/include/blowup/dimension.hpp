#pragma once

#include <cmath>
#include <numbers>

#include "blowup/error.hpp"

namespace blowup {

/// Ambient dimension n >= 3 together with the constants of
/// v'' - ((n-2)^2/4) v + n(n-2) K v^p = 0, p = (n+2)/(n-2).
class Dimension {
 public:
  explicit Dimension(int n) : n_(n) {
    if (n < 3) throw InvalidArgument("dimension must satisfy n >= 3");
  }

  int n() const { return n_; }
  double nd() const { return static_cast<double>(n_); }

  /// p = (n+2)/(n-2)
  double exponent() const { return (nd() + 2.0) / (nd() - 2.0); }
  /// (n-2)/2, the weight of |x| in the cylindrical transform.
  double weight() const { return 0.5 * (nd() - 2.0); }
  /// (n-2)^2/4
  double linear_coeff() const { return 0.25 * (nd() - 2.0) * (nd() - 2.0); }
  /// n(n-2)
  double nonlinear_coeff() const { return nd() * (nd() - 2.0); }
  /// 2n/(n-2), exponent of the potential term in the first integral.
  double energy_exponent() const { return 2.0 * nd() / (nd() - 2.0); }
  /// (n-2)^2/2, coefficient of the potential term in the first integral.
  double energy_coeff() const { return 0.5 * (nd() - 2.0) * (nd() - 2.0); }

  /// Constant solution ((n-2)/(4n))^((n-2)/4).
  double cylinder_value() const {
    return std::pow((nd() - 2.0) / (4.0 * nd()), 0.25 * (nd() - 2.0));
  }
  /// Period of the linearization at the constant solution, 2 pi / sqrt(n-2).
  double minimal_period() const { return 2.0 * std::numbers::pi / std::sqrt(nd() - 2.0); }
  /// v_s(0) = 2^((2-n)/2), the supremum of every positive periodic profile.
  double canonical_peak() const { return std::pow(2.0, -weight()); }

  /// Above this period the neck size drops below ~e^-60 and a warning is logged.
  double warn_period() const { return 240.0 / (nd() - 2.0); }
  /// Hard ceiling; periods beyond it are rejected (neck ~ e^-300).
  double max_period() const { return 1200.0 / (nd() - 2.0); }

  friend bool operator==(const Dimension&, const Dimension&) = default;

 private:
  int n_;
};

}  // namespace blowup
