#include <doctest.h>

#include <cmath>

#include "dls/errors.hpp"
#include "dls/oracle.hpp"

using namespace dls;

namespace {

const DualIsotopeSystem& base_system() {
  static const DualIsotopeSystem s = default_oracle_system();
  return s;
}

DualIsotopeSystem with_depletion(double N2) {
  DualIsotopeSystem s = base_system();
  s.N2 = N2;
  prepare(s);
  return s;
}

}  // namespace

TEST_CASE("weak-probe response matches the Lorentzian model with the same parameters") {
  const DualIsotopeSystem s = with_depletion(3e18);
  const DualMediumParams d = lorentzian_equivalent(s);
  const double g2 = s.isotope2.gamma_eff;
  for (double u : {-3.0 * g2, -0.4 * g2, 0.25 * g2, 2.0 * g2}) {
    const cplx chi = medium_response(s, u, 0.0);
    const auto p = unsaturated_super(d, 0.0, 0.0, u);
    CHECK(-0.5 * chi.imag() == doctest::Approx(p.gain).epsilon(2e-2));
    CHECK(0.5 * chi.real() == doctest::Approx(p.index).epsilon(2e-2));
  }
}

TEST_CASE("without depletion the oracle reduces to a single gain line") {
  const DualIsotopeSystem& s = base_system();
  CHECK(s.N2 == 0.0);
  DualMediumParams d = lorentzian_equivalent(s);
  d.G2 = 0.0;
  const double ng_l = linearized_index_super(d, s.cavity).group_index(s.cavity.omega_L0);
  CHECK(oracle_group_index(s) == doctest::Approx(ng_l).epsilon(1e-2));
  CHECK(std::abs(s.operating_offset) < 1e-3 * s.isotope1.gamma_eff);
}

TEST_CASE("isotope centering makes the gain symmetric at the operating field") {
  const DualIsotopeSystem s = with_depletion(3e18);
  const double E = oracle_saturated_field(s, 0.0);
  for (double frac : {1e-3, 0.3}) {
    const double h = frac * s.isotope2.gamma_eff;
    const auto a = isotope_response(s, h, E), b = isotope_response(s, -h, E);
    CHECK(a.chi1.imag() == doctest::Approx(b.chi1.imag()).epsilon(1e-6));
    CHECK(a.chi2.imag() == doctest::Approx(b.chi2.imag()).epsilon(1e-6));
  }
}

TEST_CASE("saturated field clamps the gain to the loss") {
  const DualIsotopeSystem s = with_depletion(3e18);
  for (double u : {0.0, 2e5, -1e6}) {
    const double E = oracle_saturated_field(s, u);
    CHECK(oracle_gain(s, u, E) * 2.0 * s.cavity.Q == doctest::Approx(1.0).epsilon(1e-10));
  }
  CHECK_THROWS_AS(oracle_saturated_field(s, 20.0 * s.isotope1.gamma_eff), BelowThreshold);
}

TEST_CASE("iteration fixed point") {
  const DualIsotopeSystem s = calibrate_oracle(base_system(), 0.1);
  CHECK(oracle_group_index(s) == doctest::Approx(0.1).epsilon(1e-6));

  IterateOptions opt;
  const auto still = iterate_lasing(s, 0.0, opt);
  CHECK(still.converged);
  CHECK(std::abs(still.delta_L) <= opt.tol_freq);

  const double dp = kTwoPi;
  opt.relaxation = 1.0;
  const auto full = iterate_lasing(s, dp, opt);
  opt.relaxation = 0.5;
  const auto damped = iterate_lasing(s, dp, opt);
  CHECK(full.converged);
  CHECK(damped.converged);
  CHECK(damped.iteration > full.iteration);
  CHECK(full.delta_L == doctest::Approx(damped.delta_L).epsilon(1e-4));
  CHECK(full.residual_field <= opt.tol_field);
  // near the linear law at this modest group index
  CHECK(full.delta_L / dp == doctest::Approx(1.0 - 10.0).epsilon(0.05));

  opt.max_iter = 1;
  CHECK_THROWS_AS(iterate_lasing(s, dp, opt), NoConvergence);
  opt = {};
  opt.relaxation = 0.0;
  CHECK_THROWS_AS(iterate_lasing(s, dp, opt), DomainError);
}

TEST_CASE("a mis-set pump lock acts like a pump shift on the depletion isotope") {
  const DualIsotopeSystem s = with_depletion(3e18);
  DualIsotopeSystem t = s;
  t.pump_lock_offset += kTwoPi * 1e3;
  const double E = oracle_saturated_field(s, 0.0);
  for (double u : {-2e6, 0.0, 5e5}) {
    const auto a = isotope_response(t, u, E);
    const auto b = isotope_response(s, u, E, kTwoPi * 1e3);
    CHECK(std::abs(a.chi2 - b.chi2) < 1e-9 * std::abs(b.chi2));
    CHECK(a.chi1 == isotope_response(s, u, E).chi1);
  }
}

TEST_CASE("response edge cases") {
  const DualIsotopeSystem& s = base_system();
  CHECK(isotope_response(s, 0.0, 1.0).chi2 == cplx(0.0, 0.0));
  CHECK_THROWS_AS(isotope_response(s, 0.0, -1.0), DomainError);
  CHECK_THROWS_AS(calibrate_oracle(s, 50.0), UnreachableTarget);
}
