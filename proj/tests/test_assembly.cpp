#include <doctest.h>

#include <cmath>
#include <numbers>

#include "blowup/assembly/plan.hpp"

using namespace blowup;
using namespace blowup::assembly;
using conformal::Point;

namespace {

const PlanResult& two_stage() {
  static const PlanResult p = plan_stages(Dimension(3), 0.1, 2, 10.0);
  return p;
}

}  // namespace

TEST_SUITE("plan") {
  TEST_CASE("first stage geometry") {
    const auto& s = two_stage().solution.stages().front();
    CHECK(s.xi.norm() == doctest::Approx(2.0));
    CHECK(s.a * s.a == doctest::Approx(5.0).epsilon(1e-15));
    CHECK(s.D == doctest::Approx(3.0));
    CHECK(s.x_c[0] == doctest::Approx(-0.5).epsilon(1e-15));
    const auto img = conformal::ball_image_ball(s.map(), std::exp(-s.D));
    CHECK(distance(img.center, s.U.center) < 1e-15);
    CHECK(img.radius == doctest::Approx(s.U.radius).epsilon(1e-15));
    CHECK(s.U.contains(s.x_c));
    CHECK(std::exp(s.D) >= 10.0 * s.xi.norm() * (1.0 - 1e-12));
  }

  TEST_CASE("disjoint, small and within epsilon") {
    const auto& p = two_stage();
    CHECK(p.complete);
    CHECK(p.solution.stages().size() == 2);
    CHECK(p.solution.disjoint());
    CHECK(p.solution.total_measure() < 1e-2);
    for (const auto& s : p.solution.stages()) CHECK(s.sup_deviation <= 0.1);
    CHECK(ball_volume(3, 1.0) == doctest::Approx(4.0 * std::numbers::pi / 3.0).epsilon(1e-15));
  }

  TEST_CASE("u_b equals u_s outside the balls, bit for bit") {
    const auto& sol = two_stage().solution;
    for (int i = 1; i <= 400; ++i) {
      const Point x{-0.005 * i, 0.001 * (i % 7), 0.0};
      if (sol.stage_of(x) >= 0) continue;
      CHECK(sol.eval_u(x) == sol.u_s(x));
      CHECK(sol.eval_K(x) == 1.0);
    }
    CHECK_THROWS_AS(sol.eval_u(Point::zero(3)), InvalidArgument);
    CHECK_THROWS_AS(sol.eval_K(Point::zero(3)), InvalidArgument);
  }

  TEST_CASE("continuous across the ball boundary") {
    const auto& sol = two_stage().solution;
    for (std::size_t i = 0; i < sol.stages().size(); ++i) {
      const auto& s = sol.stages()[i];
      const Point x = s.U.center + Point::axis(3, 1, s.U.radius * (1.0 - 1e-12));
      CHECK(sol.stage_u(i, x) == doctest::Approx(sol.u_s(x)).epsilon(1e-9));
      CHECK(sol.stage_K(i, x) == doctest::Approx(1.0).epsilon(1e-12));
    }
  }

  TEST_CASE("diagnostic grows by the requested factor") {
    const auto d = blowup_diagnostic(two_stage().solution);
    CHECK(d.strictly_increasing());
    CHECK(d.min_ratio() >= 10.0);
    for (const auto& e : d.entries) CHECK(e.value == doctest::Approx(e.predicted).epsilon(1e-9));
  }

  TEST_CASE("peak at the offset center") {
    const auto& sol = two_stage().solution;
    const auto& s = sol.stages()[1];
    CHECK(sol.stage_u_offset(1, Point::zero(3)) == doctest::Approx(s.peak).epsilon(1e-9));
    CHECK(sol.eval_u(s.x_c) == doctest::Approx(s.peak).epsilon(1e-9));
  }

  TEST_CASE("anchored reflection inverts") {
    const auto& s = two_stage().solution.stages()[1];
    for (double r : {1e-20, 1e-10, 1e-3}) {
      const Point y{r, -0.5 * r, 0.25 * r};
      const Point w = s.pushforward_offset(y);
      CHECK(distance(s.pullback_offset(w), y) < 1e-12 * y.norm());
    }
  }

  TEST_CASE("JSON round trip") {
    const auto& p = two_stage();
    const std::string text = plan_to_json(p);
    const auto q = plan_from_json(text);
    REQUIRE(q.solution.stages().size() == p.solution.stages().size());
    for (std::size_t i = 0; i < q.solution.stages().size(); ++i) {
      CHECK(q.solution.stages()[i].T == p.solution.stages()[i].T);
      CHECK(q.solution.stages()[i].eta == p.solution.stages()[i].eta);
      CHECK(q.solution.stages()[i].peak == p.solution.stages()[i].peak);
    }
    CHECK(plan_to_json(q) == text);
    CHECK_THROWS_AS(plan_from_json("{"), InvalidArgument);
  }
}
