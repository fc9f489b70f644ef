#include <doctest.h>

#include <cmath>

#include "blowup/glue/kfield.hpp"

using namespace blowup;
using namespace blowup::glue;

namespace {

const ode::DelaunayProfile& profile25() {
  static const auto p = ode::solve_by_period(Dimension(3), 25.0, 1e-13);
  return p;
}

}  // namespace

TEST_SUITE("cutoff") {
  TEST_CASE("partition of unity and monotone transition") {
    const auto c = build_cutoff(3.0);
    double prev = 2.0;
    for (int i = 0; i <= 900; ++i) {
      const double t = 2.0 + 0.006 * i;
      const double p1 = c.phi1(t).value;
      CHECK(p1 + c.phi2(t) == doctest::Approx(1.0).epsilon(1e-15));
      CHECK(p1 <= prev);
      prev = p1;
    }
    CHECK(c.phi1(3.0).value == 1.0);
    CHECK(c.phi1(6.0).value == 0.0);
    CHECK(c.phi1(4.5).value == doctest::Approx(0.5).epsilon(1e-15));
  }

  TEST_CASE("derivative bounds 2D and the minimal width") {
    const auto c = build_cutoff(3.0);
    CHECK(c.max_d1() <= 6.0);
    CHECK(c.max_d2() <= 6.0);
    CHECK(c.max_d3() <= 6.0);
    CHECK(minimal_cutoff_width() == doctest::Approx(std::pow(26.25, 0.25)).epsilon(1e-14));
    CHECK_THROWS_AS(build_cutoff(2.0), InvalidArgument);
    CHECK_NOTHROW(build_cutoff(2.27));
  }

  TEST_CASE("derivatives match finite differences") {
    const auto c = build_cutoff(3.0);
    const double h = 1e-5;
    for (double t : {3.4, 4.5, 5.7}) {
      const auto j = c.phi1(t);
      CHECK(j.d1 == doctest::Approx((c.phi1(t + h).value - c.phi1(t - h).value) / (2 * h)).epsilon(1e-7));
      CHECK(j.d2 == doctest::Approx((c.phi1(t + h).d1 - c.phi1(t - h).d1) / (2 * h)).epsilon(1e-7));
      CHECK(j.d3 == doctest::Approx((c.phi1(t + h).d2 - c.phi1(t - h).d2) / (2 * h)).epsilon(1e-6));
    }
  }
}

TEST_SUITE("splice") {
  TEST_CASE("layout and validation") {
    const auto mod = splice(profile25(), 3.0, 2);
    REQUIRE(mod.windows().size() == 2);
    CHECK(mod.windows()[0].lo == doctest::Approx(3.0));
    CHECK(mod.windows()[0].hi == doctest::Approx(6.0));
    CHECK(mod.windows()[1].lo == doctest::Approx(mod.period() - 6.0));
    CHECK(mod.windows()[1].hi == doctest::Approx(mod.period() - 3.0));
    CHECK_THROWS_AS(splice(profile25(), 3.0, 1), InvalidArgument);
    const auto short_profile = ode::solve_by_period(Dimension(3), 11.0, 1e-12);
    CHECK_THROWS_AS(splice(short_profile, 3.0, 2), InvalidArgument);
  }

  TEST_CASE("exact pieces: bubbles, Delaunay middle and K = 1 outside the windows") {
    const Dimension d(3);
    const auto mod = splice(profile25(), 3.0, 3);
    for (double t : {-5.0, 0.0, 2.9}) {
      CHECK(mod.eval(t).v == ode::canonical_profile(d, t).v);
      CHECK(mod.K(t) == 1.0);
    }
    const double last = mod.last_center();
    for (double s : {-2.5, 0.0, 8.0}) CHECK(mod.eval(last + s).v == ode::canonical_profile(d, s).v);
    for (double t : {8.0, 12.5, 17.0}) {
      CHECK(mod.eval(t).v == doctest::Approx(profile25().state(t).v).epsilon(1e-14));
      CHECK(mod.k_jet(t).km1 == 0.0);
      CHECK(mod.k_jet(t).dk == 0.0);
    }
    CHECK(mod.windows().size() == 4);
  }

  TEST_CASE("algebraic identity holds everywhere") {
    const auto mod = splice(profile25(), 3.0, 2);
    double worst = 0.0;
    for (int i = 0; i <= 4000; ++i) worst = std::max(worst, std::abs(mod.identity_residual(-5.0 + 0.00875 * i)));
    CHECK(worst < 1e-10);
  }

  TEST_CASE("K' matches a finite difference of K") {
    const auto mod = splice(profile25(), 3.0, 2);
    const double h = 1e-5;
    for (double t : {3.5, 4.4, 5.2, mod.period() - 4.4}) {
      const double fd = (mod.K(t + h) - mod.K(t - h)) / (2 * h);
      CHECK(mod.k_jet(t).dk == doctest::Approx(fd).epsilon(1e-5));
    }
  }

  TEST_CASE("finite-difference v'' converges at order 2") {
    const auto mod = splice(profile25(), 3.0, 2);
    double e[2] = {0.0, 0.0};
    const double hs[2] = {1e-2, 5e-3};
    for (int j = 0; j < 2; ++j)
      for (int i = 0; i <= 1000; ++i) {
        const double t = 2.0 + 0.022 * i;
        const double h = hs[j];
        const double fd = (mod.eval(t + h).v - 2 * mod.eval(t).v + mod.eval(t - h).v) / (h * h);
        e[j] = std::max(e[j], std::abs(fd - mod.eval(t).vsecond));
      }
    const double order = std::log2(e[0] / e[1]);
    CHECK(order > 1.7);
    CHECK(order < 2.3);
  }
}

TEST_SUITE("kfield") {
  TEST_CASE("serial and parallel sampling agree bitwise") {
    const auto mod = splice(profile25(), 3.0, 2);
    KSamplingOptions s;
    s.exec = par::Exec::serial;
    KSamplingOptions p;
    p.exec = par::Exec::parallel;
    const auto a = compute_K(mod, s);
    const auto b = compute_K(mod, p);
    CHECK(a.sup_deviation() == b.sup_deviation());
    CHECK(a.sup_deviation_at() == b.sup_deviation_at());
    CHECK(a.lipschitz_estimate() == b.lipschitz_estimate());
    CHECK(a.min_K() == b.min_K());
  }

  TEST_CASE("sup deviation scales with eta^2") {
    const Dimension d(3);
    std::vector<double> ratios;
    for (double T : {20.0, 30.0}) {
      const auto base = ode::solve_by_period(d, T, 1e-13);
      const auto k = compute_K(splice(base, 3.0, 2));
      ratios.push_back(k.sup_deviation() / (base.neck() * base.neck()));
      CHECK(k.max_identity_residual() < 1e-10);
    }
    CHECK(ratios[1] / ratios[0] < 3.0);
    CHECK(ratios[0] / ratios[1] < 3.0);
  }

  TEST_CASE("sampled maxima dominate a uniform probe") {
    const auto mod = splice(profile25(), 3.0, 2);
    const auto k = compute_K(mod);
    for (int i = 0; i <= 1000; ++i) {
      const double t = 3.0 + 0.003 * i;
      CHECK(std::abs(mod.K(t) - 1.0) <= k.sup_deviation() * (1.0 + 1e-9));
    }
  }

  TEST_CASE("epsilon scan reaches the target with decreasing sup") {
    EpsilonScanOptions o;
    o.T_start = 30.0;
    const auto r = choose_T_for_epsilon(Dimension(3), 3.0, 2, 1e-2, o);
    CHECK(r.T == 39.0);
    CHECK(r.profile.sup_deviation() <= 1e-2);
    for (std::size_t i = 1; i < r.history.size(); ++i)
      CHECK(r.history[i].sup_deviation < r.history[i - 1].sup_deviation);
  }
}
