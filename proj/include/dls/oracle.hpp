#pragma once

#include <string>
#include <vector>

#include "dls/atomic.hpp"
#include "dls/errors.hpp"
#include "dls/lasing.hpp"
#include "dls/medium.hpp"

namespace dls {

// omega_21(87Rb) - omega_21(85Rb)
inline constexpr double kHyperfineDifference = kTwoPi * (6.834682610904e9 - 3.0357324390e9);

// Two Lambda systems sharing one laser field. In each isotope's params
// omega_L is ignored (set from the field) and delta_diff is the two-photon
// offset that places the line center on omega_L0.
struct DualIsotopeSystem {
  ThreeLevelParams isotope1;  // gain
  ThreeLevelParams isotope2;  // depletion
  double N1 = 0, N2 = 0;      // m^-3
  double mu1 = 0, mu2 = 0;    // C m
  CavityParams cavity;
  // omega_P20 - omega_P10; any departure from kHyperfineDifference detunes isotope 2
  double pump_lock_offset = kHyperfineDifference;
  // the cavity mode sits at omega_L0 + operating_offset
  double operating_offset = 0;
};

struct IsotopeResponse {
  cplx chi1;
  cplx chi2;
  cplx total() const { return chi1 + chi2; }
};

// u = omega - omega_L0 (rad/s), E in V/m; E = 0 returns the weak-probe limit
IsotopeResponse isotope_response(const DualIsotopeSystem& s, double u, double E, double delta_P = 0.0);
cplx medium_response(const DualIsotopeSystem& s, double u, double E, double delta_P = 0.0);
double oracle_gain(const DualIsotopeSystem& s, double u, double E, double delta_P = 0.0);

// field where gain = 1/(2Q); throws BelowThreshold if the weak-probe gain is below loss
double oracle_saturated_field(const DualIsotopeSystem& s, double u, double delta_P = 0.0);
// n - 1 at the saturated field
double oracle_saturated_index(const DualIsotopeSystem& s, double u, double delta_P = 0.0);

// Sets each isotope's two-photon offset so its Im chi is even about omega_L0
// at the operating field (absorbs the light shifts).
void center_isotopes(DualIsotopeSystem& s);
// Inflection point of omega n(omega): the minimum of the group index.
double find_operating_point(const DualIsotopeSystem& s);
// center_isotopes + operating point
void prepare(DualIsotopeSystem& s);
// d(n omega)/d omega at the operating point
double oracle_group_index(const DualIsotopeSystem& s);

struct IterateOptions {
  double tol_freq = kDefaultResonanceTol;  // rad/s
  double tol_field = 1e-9;                 // relative gain-clamp residual
  int max_iter = 200;
  double relaxation = 0.7;
  bool require_monotone = false;
};

struct IterativeLasingState {
  double omega_L = 0;
  double delta_L = 0;  // from the unperturbed operating frequency
  double field_amplitude = 0;
  int iteration = 0;
  bool converged = false;
  double residual_freq = 0;
  double residual_field = 0;
  bool monotone_tail = true;
};

IterativeLasingState iterate_lasing(const DualIsotopeSystem& s, double delta_P, const IterateOptions& opt = {});

struct OracleDefaults {
  double mu = 2.53e-29;
  double gamma_3 = 3.8e7;
  double gamma1 = kTwoPi * 30e6;
  double gamma2 = kTwoPi * 10e6;
  double delta_p1 = kTwoPi * 300e9;
  double delta_p2 = kTwoPi * 300e9;
  double theta1 = 0.03;
  double theta2 = 0.002;
  double G1_times_Q = 4.0;  // N1 chosen so that G1 = 4/Q
  double Q = 1e6;
};

DualIsotopeSystem default_oracle_system(const OracleDefaults& d = {});
// N2 adjusted (with re-centering) so the oracle group index equals n_g
DualIsotopeSystem calibrate_oracle(const DualIsotopeSystem& s, double n_g);
// Lorentzian model with the same densities, dipoles, linewidths and theta
DualMediumParams lorentzian_equivalent(const DualIsotopeSystem& s);

struct ComparisonRow {
  double inv_ng = 0;  // target
  double ng_oracle = 0;
  double ng_lorentzian = 0;
  double ratio_oracle = 0;
  double ratio_lorentzian = 0;
  double abs_diff = 0;
  double rel_diff = 0;  // |diff| / max(|ratio_lorentzian|, 1)
  double N2 = 0;
  double G2_lorentzian = 0;
  double operating_offset = 0;
  int iterations = 0;
  ErrorCode status = ErrorCode::ok;
  std::string message;
};

std::vector<ComparisonRow> compare_with_lorentzian(const DualIsotopeSystem& s, const std::vector<double>& ng_targets,
                                                   double delta_P, const IterateOptions& opt = {}, int workers = 1);

}  // namespace dls
