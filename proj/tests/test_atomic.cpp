#include <doctest.h>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <random>

#include "dls/atomic.hpp"
#include "dls/errors.hpp"

using namespace dls;

namespace {

ThreeLevelParams far_detuned(double delta_diff = 0.0) {
  ThreeLevelParams p;
  p.omega_L = 1e5;
  p.omega_P = 1e7;
  p.delta_p = 6.28e9;
  p.delta_diff = delta_diff;
  p.gamma_eff = 1e6;
  p.gamma_3 = 3.6e7;
  return p;
}

// Lindblad steady state built from jump operators, independent of the
// hand-written equations of motion: null vector of the 9x9 superoperator.
Matrix3c lindblad_steady_state(const ThreeLevelParams& p) {
  using M9 = Eigen::Matrix<cplx, 9, 9>;
  const cplx i(0, 1);
  const Matrix3c h = three_level_hamiltonian(p);
  const Matrix3c id = Matrix3c::Identity();
  auto kron = [](const Matrix3c& a, const Matrix3c& b) {
    M9 k;
    for (int r = 0; r < 3; ++r)
      for (int c = 0; c < 3; ++c) k.block<3, 3>(3 * r, 3 * c) = a(r, c) * b;
    return k;
  };
  // row-major vec: vec(A X B) = (A kron B^T) vec(X)
  M9 L = -i * (kron(h, id) - kron(id, h.transpose()));
  auto jump = [&](int to, int from, double rate) {
    Matrix3c j = Matrix3c::Zero();
    j(to, from) = std::sqrt(rate);
    const Matrix3c jdj = j.adjoint() * j;
    L += kron(j, j.conjugate()) - 0.5 * kron(jdj, id) - 0.5 * kron(id, jdj.transpose());
  };
  if (p.direction == PumpDirection::gain)
    jump(1, 0, p.gamma_eff);
  else
    jump(0, 1, p.gamma_eff);
  jump(0, 2, p.branch_to_1 * p.gamma_3);
  jump(1, 2, (1.0 - p.branch_to_1) * p.gamma_3);
  Eigen::JacobiSVD<M9> svd(L, Eigen::ComputeFullV);
  Eigen::Matrix<cplx, 9, 1> v = svd.matrixV().col(8);
  Matrix3c rho;
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) rho(r, c) = v[3 * r + c];
  return rho / rho.trace();
}

}  // namespace

TEST_CASE("three-level steady state matches an independent Lindblad null vector") {
  for (double dd : {-3e6, -4e5, 0.0, 2.5e5, 7e6}) {
    ThreeLevelParams p = far_detuned(dd);
    p.omega_L = 3e6;  // strong enough to move populations
    p.omega_P = 4e8;
    const Matrix3c a = three_level_steady_state(p).rho;
    const Matrix3c b = lindblad_steady_state(p);
    CHECK((a - b).norm() < 1e-9);
  }
}

TEST_CASE("steady state is a fixed point, Hermitian, trace one") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0, 1);
  for (int k = 0; k < 200; ++k) {
    ThreeLevelParams p;
    p.omega_L = std::pow(10.0, 4 + 4 * u(rng));
    p.omega_P = std::pow(10.0, 6 + 3 * u(rng));
    p.delta_p = (u(rng) < 0.5 ? -1 : 1) * std::pow(10.0, 8 + 3 * u(rng));
    p.delta_diff = (u(rng) - 0.5) * 2e7;
    p.gamma_eff = std::pow(10.0, 5 + 2 * u(rng));
    p.gamma_3 = 3.8e7;
    p.direction = u(rng) < 0.5 ? PumpDirection::gain : PumpDirection::depletion;
    const Matrix3c rho = three_level_steady_state(p).rho;
    const Matrix3c d = three_level_rhs(p, rho);
    const double scale = p.omega_L + p.omega_P + p.gamma_3 + std::abs(p.delta_p);
    CHECK(d.norm() / scale < 1e-10);
    CHECK((rho - rho.adjoint()).norm() == doctest::Approx(0.0));
    CHECK(std::abs(rho.trace() - 1.0) < 1e-12);
    for (int i = 0; i < 3; ++i) CHECK(rho(i, i).real() >= -1e-14);
  }
}

TEST_CASE("far-detuned three-level coherence reduces to the two-level one") {
  // rho31 also carries a small one-photon part that the reduction drops, so it
  // is compared against the scale of the scan
  double rho31_max = 0;
  for (int k = -10; k <= 10; ++k)
    rho31_max = std::max(rho31_max, std::abs(three_level_steady_state(far_detuned(k * 1e6)).rho31()));
  for (int k = -10; k <= 10; ++k) {
    ThreeLevelParams p = far_detuned(k * 1e6);
    const EffectiveTwoLevel e = build_effective_two_level(p);
    const cplx r2 = two_level_steady_state(e).rho21;
    const ThreeLevelState s = three_level_steady_state(p);
    CHECK(std::abs(s.rho21() - r2) <= 1e-2 * std::abs(r2));
    const cplx approx = rho31_approx(e, two_level_steady_state(e)).value;
    CHECK(std::abs(s.rho31() - approx) <= 1e-2 * rho31_max);
  }
}

TEST_CASE("excited-state branching does not matter when |3> stays empty") {
  ThreeLevelParams a = far_detuned(3e5), b = a;
  b.branch_to_1 = 1.0;
  const cplx ra = three_level_steady_state(a).rho21(), rb = three_level_steady_state(b).rho21();
  CHECK(std::abs(ra - rb) < 1e-4 * std::abs(ra));
}

TEST_CASE("two-level steady state is the long-time limit of the equations of motion") {
  EffectiveTwoLevel e;
  e.omega_eff = 4e5;
  e.delta = -3e5;
  e.gamma_eff = 1e6;
  Eigen::Matrix2cd rho = Eigen::Matrix2cd::Zero();
  rho(1, 1) = 1.0;
  const double dt = 2e-9;
  for (int n = 0; n < 20000; ++n) {
    const auto k1 = two_level_rhs(e, rho);
    const auto k2 = two_level_rhs(e, rho + 0.5 * dt * k1);
    const auto k3 = two_level_rhs(e, rho + 0.5 * dt * k2);
    const auto k4 = two_level_rhs(e, rho + dt * k3);
    rho += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  const TwoLevelState s = two_level_steady_state(e);
  CHECK(std::abs(rho(0, 0).real() - s.rho11) < 1e-9);
  CHECK(std::abs(rho(1, 1).real() - s.rho22) < 1e-9);
  CHECK(std::abs(rho(1, 0) - s.rho21) < 1e-9);
}

TEST_CASE("dressed ground states split by the effective Rabi frequency") {
  ThreeLevelParams p = far_detuned();
  p.omega_L = 2e6;
  p.omega_P = 1e8;
  // two-photon resonance including light shifts
  p.delta_diff = -(p.omega_L * p.omega_L - p.omega_P * p.omega_P) / (4 * p.delta_p);
  const EffectiveTwoLevel e = build_effective_two_level(p);
  CHECK(e.delta == doctest::Approx(0.0).epsilon(1e-9));
  Eigen::SelfAdjointEigenSolver<Matrix3c> es(three_level_hamiltonian(p));
  const auto ev = es.eigenvalues();  // ascending; the excited state sits near -delta_p
  const double split = ev[2] - ev[1];
  CHECK(split == doctest::Approx(e.omega_eff).epsilon(1e-3));
  CHECK(e.omega_eff == doctest::Approx(p.omega_L * p.omega_P / (2 * p.delta_p)));
}

TEST_CASE("coherence parity in the detuning") {
  EffectiveTwoLevel e;
  e.omega_eff = 2e4;
  e.gamma_eff = 1e6;
  for (double d : {1e4, 3e5, 2e6}) {
    e.delta = d;
    const cplx p = two_level_steady_state(e).rho21;
    e.delta = -d;
    const cplx m = two_level_steady_state(e).rho21;
    CHECK(p.real() == doctest::Approx(-m.real()));
    CHECK(p.imag() == doctest::Approx(m.imag()));
  }
}

TEST_CASE("coherence purity identity") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int k = 0; k < 500; ++k) {
    EffectiveTwoLevel e;
    e.gamma_eff = std::pow(10.0, 5 + u(rng));
    e.omega_eff = e.gamma_eff * std::pow(10.0, 2 * u(rng));
    e.delta = e.gamma_eff * 5 * u(rng);
    const TwoLevelState s = two_level_steady_state(e);
    const double lhs = std::abs(s.rho21) / std::sqrt(s.rho11 * s.rho22);
    const double g2 = e.gamma_eff * e.gamma_eff + 4 * e.delta * e.delta;
    CHECK(lhs == doctest::Approx(std::sqrt(g2 / (e.omega_eff * e.omega_eff + g2))).epsilon(1e-13));
  }
}

TEST_CASE("input checks") {
  ThreeLevelParams p = far_detuned();
  p.delta_p = 0;
  CHECK_THROWS_AS(build_effective_two_level(p), DomainError);
  p = far_detuned();
  p.gamma_3 = 0;
  CHECK_THROWS_AS(three_level_steady_state(p), DomainError);

  EffectiveTwoLevel e;
  e.gamma_eff = 1e6;
  e.omega_eff = 2e5;
  CHECK(rho31_approx(e, two_level_steady_state(e)).validity_warning);
  e.omega_eff = 5e4;
  CHECK_FALSE(rho31_approx(e, two_level_steady_state(e)).validity_warning);
}

TEST_CASE("elimination regime flags") {
  ThreeLevelParams p;
  p.delta_p = 6.28e9;
  p.omega_P = 1e7;
  p.omega_L = 1e5;
  p.gamma_3 = 3.6e7;
  CHECK(validate_elimination_regime(p).all_pass());
  p.delta_p = p.gamma_3;
  const auto r = validate_elimination_regime(p);
  CHECK_FALSE(r.delta_p_over_gamma3.pass);
  CHECK(r.delta_p_over_gamma3.ratio == doctest::Approx(1.0));
}
