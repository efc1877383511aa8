#pragma once

#include <functional>
#include <string>
#include <variant>
#include <vector>

#include "dls/errors.hpp"
#include "dls/medium.hpp"

namespace dls {

// n - 1 = alpha (omega - omega'_L)
struct LinearIndex {
  double alpha = 0;
};

using Medium = std::variant<LinearIndex, MediumParams, DualMediumParams>;

struct PumpShiftScenario {
  Medium medium = LinearIndex{};
  CavityParams cavity;
  double delta_P = 0;  // rad/s
};

struct LasingSolution {
  double omega_L = 0;
  double delta_L = 0;
  double residual = 0;  // omega_L n'_s(omega_L) - omega_L0, rad/s
  double n_g = 0;
  int iterations = 0;
};

inline constexpr double kDefaultResonanceTol = kTwoPi * 1e-4;

// n_g = d(n omega)/d omega at omega0. index_offset(u) returns n - 1 at
// omega0 + u; scale is the narrowest spectral feature (sets the first step).
double group_index(const std::function<double(double)>& index_offset, double omega0, double scale);

// n'_s - 1 at omega = omega_L0 + u with the pump shift of the scenario applied
double shifted_index(const PumpShiftScenario& s, double u);

// group index of the unshifted scenario at omega_L0
double scenario_group_index(const PumpShiftScenario& s);

// Root of omega n'(omega) = omega_L0 n(omega_L0) nearest omega_L0.
LasingSolution solve_lasing_frequency(const PumpShiftScenario& s, double tol = kDefaultResonanceTol);

enum class Regime { sub, super_linearized };

double shift_ratio_analytic(double n_g, Regime regime = Regime::sub);

// Return copies of the medium adjusted so the group index at omega_L0 equals n_g.
LinearIndex calibrate_linear(double n_g, double omega_L0);
// Gamma = omega_L0/(Q (n_g - 1)); theta rescaled so G0 is unchanged
MediumParams calibrate_sub(const MediumParams& m, const CavityParams& c, double n_g);
// G2 solved to full double precision
DualMediumParams calibrate_g2(const DualMediumParams& d, const CavityParams& c, double n_g);
PumpShiftScenario calibrate(const PumpShiftScenario& s, double n_g);

enum class Model { analytic, linear, lorentzian, oracle };
const char* model_name(Model m);

struct ShiftRow {
  double inv_ng = 0;       // target 1/n_g
  double delta_P_hz = 0;
  double delta_L_hz = 0;
  double ratio = 0;
  Model model = Model::analytic;
  ErrorCode status = ErrorCode::ok;
  double n_g = 0;          // achieved group index
  double residual = 0;     // rad/s
  int iterations = 0;
  std::string message;
};

struct ShiftSweepResult {
  std::vector<ShiftRow> rows;
  void sort();  // by (model, delta_P_hz, inv_ng)
  int failed() const;
};

// delta_P_values in rad/s. Analytic rows (n_g - 1)/n_g are emitted alongside.
ShiftSweepResult sweep_shift_ratio(const PumpShiftScenario& base, const std::vector<double>& ng_targets,
                                   const std::vector<double>& delta_P_values, int workers = 1,
                                   double tol = kDefaultResonanceTol);

std::vector<double> log_grid(double lo, double hi, int points);

}  // namespace dls
