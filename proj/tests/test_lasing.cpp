#include <doctest.h>

#include <cmath>

#include "dls/errors.hpp"
#include "dls/lasing.hpp"

using namespace dls;

namespace {

PumpShiftScenario linear_scenario(double n_g, double dp) {
  PumpShiftScenario s;
  s.medium = calibrate_linear(n_g, s.cavity.omega_L0);
  s.delta_P = dp;
  return s;
}

PumpShiftScenario super_scenario(double n_g, double dp) {
  PumpShiftScenario s;
  s.medium = fig5_medium();
  s.cavity = fig5_cavity();
  s = calibrate(s, n_g);
  s.delta_P = dp;
  return s;
}

}  // namespace

TEST_CASE("linear index: exact transfer ratio") {
  for (double ng : {1.01, 2.0, 10.0, 1e3, 1e5}) {
    const double dp = kTwoPi * 1.0;
    const auto sol = solve_lasing_frequency(linear_scenario(ng, dp));
    // (w0 + x)(1 + alpha (x - dp)) = w0 as a quadratic in the shift x
    const double w0 = CavityParams{}.omega_L0, alpha = (ng - 1.0) / w0;
    const double a = alpha, b = 1.0 + alpha * (w0 - dp), c = -alpha * w0 * dp;
    const double x = -2 * c / (b + std::sqrt(b * b - 4 * a * c));
    CHECK(sol.delta_L / dp == doctest::Approx(x / dp).epsilon(1e-9));
    CHECK(sol.delta_L / dp == doctest::Approx((ng - 1) / ng).epsilon(1e-6));
    CHECK(sol.n_g == doctest::Approx(ng).epsilon(1e-12));
  }
}

TEST_CASE("group index of a linear medium") {
  const double w0 = kOmegaL0, alpha = 3e-15;
  const double ng = group_index([&](double u) { return alpha * u; }, w0, 1e6);
  CHECK(ng == doctest::Approx(1.0 + alpha * w0).epsilon(1e-10));
}

TEST_CASE("calibration hits the requested group index") {
  for (double inv : {1.0, 3.0, 100.0, 1e4}) {
    const auto s = super_scenario(1.0 / inv, 0.0);
    CHECK(scenario_group_index(s) == doctest::Approx(1.0 / inv).epsilon(1e-9));
  }
  PumpShiftScenario sub;
  sub.medium = MediumParams{1e16, 2.53e-29, 1e6, 0.01};
  for (double ng : {1.5, 10.0, 1e3}) {
    const auto s = calibrate(sub, ng);
    const auto& m = std::get<MediumParams>(s.medium);
    CHECK(scenario_group_index(s) == doctest::Approx(ng).epsilon(1e-6));
    CHECK(peak_gain(m) == doctest::Approx(peak_gain(std::get<MediumParams>(sub.medium))));
  }
  CHECK_THROWS_AS(calibrate(sub, 1.0), UnreachableTarget);
  CHECK_THROWS_AS(super_scenario(50.0, 0.0), UnreachableTarget);  // above the G2 = 0 group index
}

TEST_CASE("sign law: subluminal follows the pump, superluminal opposes it") {
  PumpShiftScenario sub;
  sub.medium = MediumParams{1e16, 2.53e-29, 1e6, 0.01};
  for (double ng : {1.2, 5.0, 1e3}) {
    auto s = calibrate(sub, ng);
    s.delta_P = kTwoPi;
    const double r = solve_lasing_frequency(s).delta_L / s.delta_P;
    CHECK(r > 0);
    CHECK(r < 1);
  }
  for (double inv : {2.0, 50.0, 3e3}) {
    const auto s = super_scenario(1.0 / inv, kTwoPi);
    const double r = solve_lasing_frequency(s).delta_L / s.delta_P;
    CHECK(r < 0);
    CHECK(-r > inv - 1.0 - 0.05 * inv);  // can only fall short of the linear law
  }
}

TEST_CASE("small-shift limit converges to the linear law") {
  const double inv = 3e3, expect = 1.0 - inv;
  double last_err = 1e9;
  for (double dp : {kTwoPi * 10.0, kTwoPi * 1.0, 1.0, 0.1}) {
    const auto sol = solve_lasing_frequency(super_scenario(1.0 / inv, dp));
    const double err = std::abs(sol.delta_L / dp - expect) / std::abs(expect);
    CHECK(err < last_err);
    last_err = err;
  }
  CHECK(last_err < 1e-3);
}

TEST_CASE("pump shift antisymmetry") {
  const auto p = solve_lasing_frequency(super_scenario(1e-2, kTwoPi * 1e3));
  const auto m = solve_lasing_frequency(super_scenario(1e-2, -kTwoPi * 1e3));
  CHECK(p.delta_L == doctest::Approx(-m.delta_L).epsilon(1e-6));
}

TEST_CASE("large pump shifts leave the lasing range") {
  PumpShiftScenario sub;
  sub.medium = MediumParams{1e16, 2.53e-29, 1e6, 0.01};
  auto s = calibrate(sub, 1e3);
  s.delta_P = kTwoPi * 1e9;
  CHECK_THROWS_AS(solve_lasing_frequency(s), BelowThreshold);
}

TEST_CASE("analytic ratio") {
  CHECK(shift_ratio_analytic(2.0) == doctest::Approx(0.5));
  CHECK(shift_ratio_analytic(0.01) == doctest::Approx(-99.0));
  CHECK_THROWS_AS(shift_ratio_analytic(0.0), DomainError);
}

TEST_CASE("sweep rows are sorted, paired and independent of worker count") {
  PumpShiftScenario base;
  base.medium = fig5_medium();
  base.cavity = fig5_cavity();
  const std::vector<double> ng{1.0, 0.1, 0.01};
  const std::vector<double> dp{kTwoPi * 1e3, kTwoPi};
  const auto a = sweep_shift_ratio(base, ng, dp, 1);
  const auto b = sweep_shift_ratio(base, ng, dp, 3);
  REQUIRE(a.rows.size() == 12);
  REQUIRE(b.rows.size() == a.rows.size());
  for (std::size_t i = 0; i < a.rows.size(); ++i) {
    CHECK(a.rows[i].model == b.rows[i].model);
    CHECK(a.rows[i].ratio == b.rows[i].ratio);  // bitwise
    CHECK(a.rows[i].status == ErrorCode::ok);
    if (i > 0) {
      const auto& p = a.rows[i - 1];
      const auto& q = a.rows[i];
      const bool ordered = p.model < q.model || (p.model == q.model && (p.delta_P_hz < q.delta_P_hz ||
                                                                       (p.delta_P_hz == q.delta_P_hz && p.inv_ng < q.inv_ng)));
      CHECK(ordered);
    }
    if (a.rows[i].status == ErrorCode::ok)
      CHECK(a.rows[i].ratio == doctest::Approx(a.rows[i].delta_L_hz / a.rows[i].delta_P_hz));
  }
  CHECK(a.failed() == 0);
}

TEST_CASE("log grid") {
  const auto g = log_grid(1.0, 1e4, 5);
  REQUIRE(g.size() == 5);
  CHECK(g.front() == 1.0);
  CHECK(g.back() == 1e4);
  CHECK(g[2] == doctest::Approx(100.0));
  CHECK_THROWS_AS(log_grid(0.0, 1.0, 3), DomainError);
}
