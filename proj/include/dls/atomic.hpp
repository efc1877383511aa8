#pragma once

#include <Eigen/Dense>
#include <complex>

namespace dls {

using cplx = std::complex<double>;
using Matrix3c = Eigen::Matrix3cd;

// Which ground state the incoherent optical pump fills.
// gain: |1> -> |2> (Raman inversion); depletion: |2> -> |1>.
enum class PumpDirection { gain, depletion };

// Lambda system: |1>,|2> ground, |3> excited. Rates and frequencies in rad/s.
struct ThreeLevelParams {
  double omega_L = 0;     // probe Rabi frequency on |1>-|3>
  double omega_P = 0;     // Raman pump Rabi frequency on |2>-|3>
  double delta_p = 0;     // one-photon pump detuning
  double delta_diff = 0;  // two-photon detuning
  double gamma_eff = 0;   // optical pumping rate
  double gamma_3 = 0;     // excited-state decay
  PumpDirection direction = PumpDirection::gain;
  double branch_to_1 = 0.5;  // fraction of Gamma_3 decay landing in |1>
};

struct EffectiveTwoLevel {
  double omega_eff = 0;  // theta * omega_L
  double delta = 0;      // delta_diff + (omega_L^2 - omega_P^2)/(4 delta_p)
  double gamma_eff = 0;
  double theta = 0;      // omega_P/(2 delta_p)
};

struct TwoLevelState {
  double rho11 = 0;
  double rho22 = 1;
  cplx rho21{0, 0};
};

struct ThreeLevelState {
  Matrix3c rho = Matrix3c::Zero();
  cplx rho31() const { return rho(2, 0); }
  cplx rho21() const { return rho(1, 0); }
};

EffectiveTwoLevel build_effective_two_level(const ThreeLevelParams& p);

TwoLevelState two_level_steady_state(const EffectiveTwoLevel& e);

ThreeLevelState three_level_steady_state(const ThreeLevelParams& p);

// d rho/dt of the full Lambda system (time-stepping and residual checks)
Matrix3c three_level_rhs(const ThreeLevelParams& p, const Matrix3c& rho);

// d rho/dt of the reduced two-level system, basis (|1>, |2>)
Eigen::Matrix2cd two_level_rhs(const EffectiveTwoLevel& e, const Eigen::Matrix2cd& rho);

// Hamiltonian (units of hbar) without decay terms, used for the dressed-state picture
Matrix3c three_level_hamiltonian(const ThreeLevelParams& p);

struct Rho31Approx {
  cplx value;
  bool validity_warning = false;  // omega_eff/gamma_eff > 0.1
};

Rho31Approx rho31_approx(const EffectiveTwoLevel& e, const TwoLevelState& s);

struct RegimeFlag {
  double ratio = 0;
  bool pass = false;
};

struct RegimeReport {
  double factor = 10;
  RegimeFlag delta_p_over_gamma3;
  RegimeFlag delta_p_over_omega_p;
  RegimeFlag omega_p_over_omega_L;
  bool all_pass() const {
    return delta_p_over_gamma3.pass && delta_p_over_omega_p.pass && omega_p_over_omega_L.pass;
  }
};

RegimeReport validate_elimination_regime(const ThreeLevelParams& p, double factor = 10.0);

}  // namespace dls
