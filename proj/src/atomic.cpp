#include "dls/atomic.hpp"

#include <cmath>
#include <sstream>

#include "dls/errors.hpp"

namespace dls {

namespace {

using Vec9 = Eigen::Matrix<double, 9, 1>;
using Mat9 = Eigen::Matrix<double, 9, 9>;

// Real parametrization: rho11, rho22, rho33, Re/Im rho21, Re/Im rho31, Re/Im rho32
Vec9 to_vec(const Matrix3c& r) {
  Vec9 x;
  x << r(0, 0).real(), r(1, 1).real(), r(2, 2).real(), r(1, 0).real(), r(1, 0).imag(), r(2, 0).real(),
      r(2, 0).imag(), r(2, 1).real(), r(2, 1).imag();
  return x;
}

Matrix3c from_vec(const Vec9& x) {
  Matrix3c r;
  r(0, 0) = x[0];
  r(1, 1) = x[1];
  r(2, 2) = x[2];
  r(1, 0) = cplx(x[3], x[4]);
  r(2, 0) = cplx(x[5], x[6]);
  r(2, 1) = cplx(x[7], x[8]);
  r(0, 1) = std::conj(r(1, 0));
  r(0, 2) = std::conj(r(2, 0));
  r(1, 2) = std::conj(r(2, 1));
  return r;
}

// Non-Hermitian Hamiltonian. The probe coupling carries a minus sign so that
// the reduced coherence takes the form Omega_eff (2 delta - i Gamma)/D.
Matrix3c effective_hamiltonian(const ThreeLevelParams& p) {
  const cplx i(0, 1);
  Matrix3c h = three_level_hamiltonian(p);
  if (p.direction == PumpDirection::gain)
    h(0, 0) -= 0.5 * i * p.gamma_eff;
  else
    h(1, 1) -= 0.5 * i * p.gamma_eff;
  h(2, 2) -= 0.5 * i * p.gamma_3;
  return h;
}

}  // namespace

Matrix3c three_level_hamiltonian(const ThreeLevelParams& p) {
  Matrix3c h = Matrix3c::Zero();
  h(0, 0) = p.delta_diff;
  h(2, 2) = -p.delta_p;
  h(0, 2) = h(2, 0) = -0.5 * p.omega_L;
  h(1, 2) = h(2, 1) = 0.5 * p.omega_P;
  return h;
}

Matrix3c three_level_rhs(const ThreeLevelParams& p, const Matrix3c& rho) {
  const cplx i(0, 1);
  const Matrix3c h = effective_hamiltonian(p);
  Matrix3c d = -i * (h * rho - rho * h.adjoint());
  if (p.direction == PumpDirection::gain)
    d(1, 1) += p.gamma_eff * rho(0, 0);
  else
    d(0, 0) += p.gamma_eff * rho(1, 1);
  const double r33 = rho(2, 2).real();
  d(0, 0) += p.branch_to_1 * p.gamma_3 * r33;
  d(1, 1) += (1.0 - p.branch_to_1) * p.gamma_3 * r33;
  return d;
}

Eigen::Matrix2cd two_level_rhs(const EffectiveTwoLevel& e, const Eigen::Matrix2cd& rho) {
  const cplx i(0, 1);
  Eigen::Matrix2cd h;
  h << e.delta - 0.5 * i * e.gamma_eff, -0.5 * e.omega_eff, -0.5 * e.omega_eff, 0.0;
  Eigen::Matrix2cd d = -i * (h * rho - rho * h.adjoint());
  d(1, 1) += e.gamma_eff * rho(0, 0);
  return d;
}

EffectiveTwoLevel build_effective_two_level(const ThreeLevelParams& p) {
  if (p.delta_p == 0.0 || !std::isfinite(p.delta_p))
    throw DomainError("adiabatic elimination needs a nonzero one-photon detuning");
  EffectiveTwoLevel e;
  e.theta = p.omega_P / (2.0 * p.delta_p);
  e.omega_eff = e.theta * p.omega_L;
  e.delta = p.delta_diff + (p.omega_L * p.omega_L - p.omega_P * p.omega_P) / (4.0 * p.delta_p);
  e.gamma_eff = p.gamma_eff;
  return e;
}

TwoLevelState two_level_steady_state(const EffectiveTwoLevel& e) {
  const double w = e.omega_eff, g = e.gamma_eff, d = e.delta;
  const double den = 2 * w * w + g * g + 4 * d * d;
  TwoLevelState s;
  if (den == 0.0) return s;
  s.rho11 = w * w / den;
  s.rho22 = 1.0 - s.rho11;
  s.rho21 = w * cplx(2 * d, -g) / den;
  return s;
}

ThreeLevelState three_level_steady_state(const ThreeLevelParams& p) {
  if (!(p.gamma_eff > 0) || !(p.gamma_3 > 0))
    throw DomainError("three-level steady state needs positive decay rates");
  Mat9 m;
  Vec9 e = Vec9::Zero();
  for (int k = 0; k < 9; ++k) {
    e.setZero();
    e[k] = 1.0;
    m.col(k) = to_vec(three_level_rhs(p, from_vec(e)));
  }
  m.row(0) << 1, 1, 1, 0, 0, 0, 0, 0, 0;
  Vec9 b = Vec9::Zero();
  b[0] = 1.0;

  Eigen::PartialPivLU<Mat9> lu(m);
  const double rcond = lu.rcond();
  Vec9 x = lu.solve(b);
  if (!(rcond > 1e-18) || !x.allFinite()) {
    Eigen::JacobiSVD<Mat9> svd(m);
    const double smax = svd.singularValues().maxCoeff(), smin = svd.singularValues().minCoeff();
    const double cond = smin > 0 ? smax / smin : INFINITY;
    std::ostringstream os;
    os << "steady-state system is singular (condition number " << cond << ")";
    throw SingularSystem(os.str(), cond);
  }
  ThreeLevelState s;
  s.rho = from_vec(x);
  return s;
}

Rho31Approx rho31_approx(const EffectiveTwoLevel& e, const TwoLevelState& s) {
  Rho31Approx r;
  r.value = e.theta * s.rho21;
  r.validity_warning = e.gamma_eff > 0 ? std::abs(e.omega_eff) / e.gamma_eff > 0.1 : true;
  return r;
}

RegimeReport validate_elimination_regime(const ThreeLevelParams& p, double factor) {
  auto flag = [factor](double num, double den) {
    RegimeFlag f;
    f.ratio = den != 0.0 ? std::abs(num) / std::abs(den) : INFINITY;
    f.pass = f.ratio >= factor;
    return f;
  };
  RegimeReport r;
  r.factor = factor;
  r.delta_p_over_gamma3 = flag(p.delta_p, p.gamma_3);
  r.delta_p_over_omega_p = flag(p.delta_p, p.omega_P);
  r.omega_p_over_omega_L = flag(p.omega_P, p.omega_L);
  return r;
}

}  // namespace dls
