#include "blowup/verify/residual.hpp"

#include <algorithm>
#include <cmath>

#include "blowup/verify/rng.hpp"

namespace blowup::verify {
namespace {

struct PointResult {
  std::vector<double> res;
  std::vector<double> rel;
};

void check_steps(std::span<const double> h_list) {
  if (h_list.size() < 2) throw InvalidArgument("residual study needs at least two step sizes");
  for (std::size_t i = 0; i < h_list.size(); ++i) {
    if (!(h_list[i] > 0.0)) throw InvalidArgument("step sizes must be positive");
    if (i > 0 && !(h_list[i] < h_list[i - 1])) throw InvalidArgument("step sizes must decrease");
  }
}

// Collects per-h maxima, orders and the Richardson value from per-point data.
ResidualReport summarize(std::string label, std::span<const double> h_list, const std::vector<PointResult>& pts,
                         const std::vector<double>& where) {
  ResidualReport rep;
  rep.label = std::move(label);
  rep.h.assign(h_list.begin(), h_list.end());
  rep.points = pts.size();
  const std::size_t nh = h_list.size();
  rep.max_residual.assign(nh, 0.0);
  rep.max_relative.assign(nh, 0.0);
  rep.witness.assign(nh, where.empty() ? 0.0 : where.front());
  const double q = h_list[nh - 2] / h_list[nh - 1];
  for (std::size_t k = 0; k < pts.size(); ++k) {
    for (std::size_t j = 0; j < nh; ++j) {
      const double r = std::abs(pts[k].res[j]);
      if (!(r <= rep.max_residual[j])) {
        rep.max_residual[j] = std::isnan(r) ? INFINITY : r;
        rep.witness[j] = where[k];
      }
      rep.max_relative[j] = std::max(rep.max_relative[j], std::abs(pts[k].rel[j]));
    }
    const double rich = (q * q * pts[k].res[nh - 1] - pts[k].res[nh - 2]) / (q * q - 1.0);
    rep.richardson = std::max(rep.richardson, std::abs(rich));
  }
  for (std::size_t j = 0; j + 1 < nh; ++j) {
    rep.orders.push_back(std::log(rep.max_residual[j] / rep.max_residual[j + 1]) / std::log(h_list[j] / h_list[j + 1]));
  }
  return rep;
}

}  // namespace

bool ResidualReport::order_in_band() const {
  if (orders.empty()) return false;
  return std::all_of(orders.begin(), orders.end(), [](double o) { return o >= kOrderLow && o <= kOrderHigh; });
}

ResidualReport cylindrical_residual(const Dimension& dim, const ScalarFunction& v, const ScalarFunction& K,
                                    std::span<const double> ts, std::span<const double> h_list, par::Exec exec) {
  check_steps(h_list);
  if (ts.empty()) throw InvalidArgument("no residual sample points");
  const double a = dim.linear_coeff();
  const double b = dim.nonlinear_coeff();
  const double p = dim.exponent();
  auto pts = par::map_index<PointResult>(
      ts.size(),
      [&](std::size_t i) {
        const double t = ts[i];
        const double v0 = v(t);
        const double bkv = b * K(t) * std::pow(v0, p);
        PointResult pr;
        for (double h : h_list) {
          const double d2 = (v(t + h) - 2.0 * v0 + v(t - h)) / (h * h);
          const double r = d2 - a * v0 + bkv;
          pr.res.push_back(r);
          pr.rel.push_back(r / std::max({std::abs(d2), std::abs(a * v0), std::abs(bkv)}));
        }
        return pr;
      },
      exec);
  return summarize("cylindrical", h_list, pts, std::vector<double>(ts.begin(), ts.end()));
}

ResidualReport cylindrical_residual(const glue::ModifiedProfile& mod, const glue::KRadialProfile& K,
                                    std::span<const double> h_list, int points, par::Exec exec) {
  if (points < 2) throw InvalidArgument("need at least two residual points");
  if (!(h_list.front() / h_list.back() >= 4.0 - 1e-12)) throw InvalidArgument("step sizes must span two halvings");
  const double lo = -2.0 * mod.D();
  const double hi = mod.last_center() + 2.0 * mod.D();
  std::vector<double> ts;
  for (int i = 0; i < points; ++i) ts.push_back(lo + (hi - lo) * i / (points - 1));
  auto rep = cylindrical_residual(
      mod.dim(), [&](double t) { return mod.eval(t).v; }, [&](double t) { return K.K(t); }, ts, h_list, exec);
  rep.label = "modified-cylindrical";
  return rep;
}

ResidualReport euclid_residual(const Dimension& dim, const conformal::RadialEuclidFunction& u,
                               const ScalarFunction& K_of_r, double r_lo, double r_hi, std::span<const double> h_list,
                               const EuclidResidualOptions& opt) {
  check_steps(h_list);
  if (!(r_lo > 0.0) || !(r_hi > r_lo)) throw InvalidArgument("invalid radial window");
  if (opt.points < 2) throw InvalidArgument("need at least two residual points");
  const double hmax = h_list.front();
  if (opt.relative_steps ? !(3.0 * hmax < 1.0) : !(r_lo > 3.0 * hmax)) {
    throw InvalidArgument("radial window is within 3h of the singular center");
  }
  const double b = dim.nonlinear_coeff();
  const double p = dim.exponent();
  const double nm1 = dim.nd() - 1.0;
  std::vector<double> rs;
  for (int i = 0; i < opt.points; ++i) {
    const double s = static_cast<double>(i) / (opt.points - 1);
    rs.push_back(opt.relative_steps ? r_lo * std::pow(r_hi / r_lo, s) : r_lo + (r_hi - r_lo) * s);
  }
  auto pts = par::map_index<PointResult>(
      rs.size(),
      [&](std::size_t i) {
        const double r = rs[i];
        const double u0 = u.radial(r).u;
        const double nl = b * K_of_r(r) * std::pow(u0, p);
        PointResult pr;
        for (double h0 : h_list) {
          const double h = opt.relative_steps ? h0 * r : h0;
          const double up = u.radial(r + h).u;
          const double um = u.radial(r - h).u;
          const double d2 = (up - 2.0 * u0 + um) / (h * h);
          const double d1 = nm1 / r * (up - um) / (2.0 * h);
          const double res = d2 + d1 + nl;
          pr.res.push_back(res);
          pr.rel.push_back(res / std::max({std::abs(d2), std::abs(d1), std::abs(nl)}));
        }
        return pr;
      },
      opt.exec);
  return summarize("euclidean-radial", h_list, pts, rs);
}

ResidualReport assembled_residual(const assembly::BlowupSolution& sol, std::size_t stage,
                                  std::span<const conformal::Point> offsets, std::span<const double> scales,
                                  std::span<const double> h_list, par::Exec exec) {
  check_steps(h_list);
  if (offsets.empty() || offsets.size() != scales.size()) throw InvalidArgument("offsets and scales must match");
  const Dimension& dim = sol.dim();
  const double b = dim.nonlinear_coeff();
  const double p = dim.exponent();
  const std::size_t n = static_cast<std::size_t>(dim.n());
  auto pts = par::map_index<PointResult>(
      offsets.size(),
      [&](std::size_t k) {
        const conformal::Point& w = offsets[k];
        const double u0 = sol.stage_u_offset(stage, w);
        const double nl = b * sol.stage_K_offset(stage, w) * std::pow(u0, p);
        PointResult pr;
        for (double h0 : h_list) {
          const double h = scales[k] * h0;
          double lap = 0.0;
          for (std::size_t i = 0; i < n; ++i) {
            const conformal::Point e = conformal::Point::axis(n, i, h);
            lap += sol.stage_u_offset(stage, w + e) - 2.0 * u0 + sol.stage_u_offset(stage, w - e);
          }
          lap /= h * h;
          const double res = lap + nl;
          pr.res.push_back(res);
          pr.rel.push_back(res / std::max(std::abs(lap), std::abs(nl)));
        }
        return pr;
      },
      exec);
  std::vector<double> where(offsets.size());
  for (std::size_t k = 0; k < where.size(); ++k) where[k] = static_cast<double>(k);
  auto rep = summarize("assembled", h_list, pts, where);
  return rep;
}

StagePoints stage_points(const assembly::BlowupSolution& sol, std::size_t stage, std::span<const double> ts,
                         int per_t, std::uint64_t seed) {
  const assembly::Stage& s = sol.stages().at(stage);
  const std::size_t n = static_cast<std::size_t>(sol.dim().n());
  Rng rng(seed, 0x5747 + stage);
  StagePoints out;
  for (double t : ts) {
    for (int j = 0; j < per_t; ++j) {
      std::vector<double> dir(n);
      double len = 0.0;
      while (!(len > 1e-6)) {
        len = 0.0;
        for (double& c : dir) {
          c = rng.normal();
          len += c * c;
        }
        len = std::sqrt(len);
      }
      conformal::Point y(std::move(dir));
      y = (std::exp(-t) / len) * y;
      out.offsets.push_back(s.pushforward_offset(y));
      out.scales.push_back(y.norm() * s.a * s.a / (y - s.xi).norm2());
    }
  }
  return out;
}

}  // namespace blowup::verify
