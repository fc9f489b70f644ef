#include <doctest.h>

#include <cmath>

#include "blowup/verify/lipschitz.hpp"
#include "blowup/verify/report_json.hpp"
#include "blowup/verify/residual.hpp"
#include "blowup/verify/rng.hpp"

using namespace blowup;
using namespace blowup::verify;
using conformal::Point;

namespace {

const RadialKField& field5() {
  static const RadialKField k = two_cycle_field(Dimension(5), 3.0, 41.0);
  return k;
}

}  // namespace

TEST_SUITE("rng") {
  TEST_CASE("streams are reproducible and distinct") {
    Rng a(5, 1), b(5, 1), c(5, 2);
    for (int i = 0; i < 10; ++i) {
      const auto x = a.bits();
      CHECK(x == b.bits());
      CHECK(x != c.bits());
    }
    Rng u(1, 0);
    double mean = 0.0;
    for (int i = 0; i < 10000; ++i) {
      const double x = u.uniform();
      CHECK(x >= 0.0);
      CHECK(x < 1.0);
      mean += x / 10000.0;
    }
    CHECK(mean == doctest::Approx(0.5).epsilon(0.02));
  }
}

TEST_SUITE("residual") {
  TEST_CASE("canonical profile: order 2 and vanishing extrapolation") {
    const Dimension d(3);
    std::vector<double> ts;
    for (int i = 0; i <= 600; ++i) ts.push_back(-30.0 + 0.1 * i);
    const std::vector<double> hs{4e-3, 2e-3, 1e-3};
    const auto r = cylindrical_residual(
        d, [&](double t) { return ode::canonical_profile(d, t).v; }, [](double) { return 1.0; }, ts, hs);
    CHECK(r.order_in_band());
    CHECK(!r.smoothness_flag());
    CHECK(r.richardson < 1e-8);
    CHECK(r.max_residual.back() < 1e-6);
  }

  TEST_CASE("modified profile: error ratio about 4 per halving") {
    const auto base = ode::solve_by_period(Dimension(3), 20.0, 1e-13);
    const auto mod = glue::splice(base, 3.0, 2);
    const auto k = glue::compute_K(mod);
    const std::vector<double> hs{1e-2, 5e-3, 2.5e-3};
    const auto r = cylindrical_residual(mod, k, hs);
    REQUIRE(r.orders.size() == 2);
    for (double o : r.orders) CHECK(o == doctest::Approx(2.0).epsilon(0.15));
    const std::vector<double> one{1e-2};
    CHECK_THROWS_AS(cylindrical_residual(mod, k, one), InvalidArgument);
  }

  TEST_CASE("serial and parallel residuals agree bitwise") {
    const Dimension d(4);
    std::vector<double> ts;
    for (int i = 0; i <= 200; ++i) ts.push_back(-5.0 + 0.05 * i);
    const std::vector<double> hs{1e-2, 5e-3};
    auto v = [&](double t) { return ode::canonical_profile(d, t).v; };
    auto K = [](double) { return 1.0; };
    const auto a = cylindrical_residual(d, v, K, ts, hs, par::Exec::serial);
    const auto b = cylindrical_residual(d, v, K, ts, hs, par::Exec::parallel);
    CHECK(a.max_residual == b.max_residual);
    CHECK(a.witness == b.witness);
  }

  TEST_CASE("window too close to the center is rejected") {
    const Dimension d(3);
    const auto u = conformal::cyl_to_euclid(d, [&](double t) {
      const auto j = ode::canonical_profile(d, t);
      return conformal::CylJet{j.v, j.vprime, j.vsecond};
    });
    const std::vector<double> hs{1e-2, 5e-3};
    CHECK_THROWS_AS(euclid_residual(d, u, [](double) { return 1.0; }, 0.02, 1.0, hs), InvalidArgument);
  }
}

TEST_SUITE("lipschitz") {
  TEST_CASE("refuses n <= 4") {
    const auto k3 = two_cycle_field(Dimension(3), 3.0, 30.0);
    try {
      lipschitz_extension_check(k3);
      FAIL("expected a refusal");
    } catch (const InvalidArgument& e) {
      CHECK(std::string(e.what()).find("n > 4") != std::string::npos);
    }
    CHECK_THROWS_AS(lipschitz_T_scan(Dimension(4)), InvalidArgument);
  }

  TEST_CASE("pairs outside the support have ratio 0, pair ratio is symmetric") {
    const auto& K = field5();
    const Point x{0.5, 0.1, 0.0, 0.0, 0.2};
    const Point y{-0.3, 0.4, 0.1, 0.0, 0.0};
    CHECK(pair_ratio(K, x, y) == 0.0);
    const Point a = Point::axis(5, 0, std::exp(-4.2));
    const Point b = Point::axis(5, 1, std::exp(-4.9));
    CHECK(pair_ratio(K, a, b) == pair_ratio(K, b, a));
    CHECK(K.K(Point::zero(5)) == 1.0);
  }

  TEST_CASE("aligned pairs are the worst case for equal radii") {
    const auto& K = field5();
    const double r1 = std::exp(-4.3), r2 = std::exp(-4.0);
    const Point a = Point::axis(5, 0, r1), b = Point::axis(5, 0, r2);
    const Point c = Point{0.0, r2 * 0.6, 0.0, r2 * 0.8, 0.0};
    CHECK(std::abs(K.K(a) - K.K(b)) == std::abs(K.K(a) - K.K(c)));
    CHECK(distance(a, b) <= distance(a, c));
    CHECK(pair_ratio(K, a, b) >= pair_ratio(K, a, c));
  }

  TEST_CASE("small sample: serial equals parallel, ratio within the gradient bound") {
    PairSamplingOptions s;
    s.pairs = 4000;
    s.exec = par::Exec::serial;
    PairSamplingOptions p = s;
    p.exec = par::Exec::parallel;
    const auto a = lipschitz_extension_check(field5(), s);
    const auto b = lipschitz_extension_check(field5(), p);
    CHECK(a.max_ratio == b.max_ratio);
    CHECK(a.worst.x == b.worst.x);
    CHECK(a.pairs == 4000);
    CHECK(a.max_ratio <= a.gradient_bound * (1.0 + 1e-9));
    CHECK(std::abs(pair_ratio(field5(), a.worst.x, a.worst.y) - a.max_ratio) <= 1e-15);
    CHECK(a.passed);
  }

  TEST_CASE("rotation leaves the report unchanged in value") {
    PairSamplingOptions s;
    s.pairs = 2000;
    PairSamplingOptions r = s;
    r.rotation.assign(25, 0.0);
    // Cyclic permutation of the axes.
    for (int i = 0; i < 5; ++i) r.rotation[static_cast<std::size_t>(i * 5 + (i + 1) % 5)] = 1.0;
    const auto a = lipschitz_extension_check(field5(), s);
    const auto b = lipschitz_extension_check(field5(), r);
    CHECK(a.max_ratio == doctest::Approx(b.max_ratio).epsilon(1e-12));
  }

  TEST_CASE("holder and critical checks") {
    PairSamplingOptions s;
    s.pairs = 4000;
    const auto lip = lipschitz_extension_check(field5(), s);
    for (double alpha : {0.25, 0.5, 1.0}) {
      const auto h = holder_check(field5(), alpha, lip.max_ratio, s);
      CHECK(h.passed);
      CHECK(h.bound == doctest::Approx(4.0 * lip.max_ratio));
    }
    const auto k3 = two_cycle_field(Dimension(3), 3.0, 54.0);
    const auto c = critical_order_check(k3, 0.25);
    CHECK(c.exponent == doctest::Approx(0.25));
    CHECK(c.passed);
    const auto small = two_cycle_field(Dimension(3), 3.0, 20.0);
    CHECK(!critical_order_check(small, 0.25).passed);
  }

  TEST_CASE("scan_period finds the first passing integer") {
    int calls = 0;
    const double T = scan_period([&](double t) { ++calls; return t >= 37.0; }, 13.0, 500.0);
    CHECK(T == 37.0);
    CHECK(calls < 20);
    CHECK_THROWS_AS(scan_period([](double) { return false; }, 13.0, 100.0), Infeasible);
  }

  TEST_CASE("report JSON carries the witness") {
    PairSamplingOptions s;
    s.pairs = 500;
    const auto j = to_json(lipschitz_extension_check(field5(), s));
    CHECK(j.at("pairs").get<std::size_t>() == 500);
    CHECK(j.at("worst").at("x").size() == 5);
    CHECK(j.at("max_ratio").is_string());
  }
}
