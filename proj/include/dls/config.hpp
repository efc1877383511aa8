#pragma once

#include <string>
#include <vector>

namespace dls {

enum class Experiment { fig4_sub, fig4_super, fig5, fig6, fig7, fig8, custom_sweep };

const char* experiment_name(Experiment e);
Experiment parse_experiment(const std::string& name);

// Everything is kept in file units (Hz, m, m^-3, C m); conversion to rad/s
// happens when physics parameters are built.
struct ExperimentConfig {
  Experiment experiment = Experiment::fig5;

  struct Cavity {
    double q = 1e6;
    double frequency_hz = 384.230e12;
  } cavity;

  // superluminal Lorentzian model (Fig. 5 set)
  struct Lorentzian {
    double g1 = 1.2e5;
    double gamma1_hz = 30e6;
    double gamma2_hz = 10e6;
    double n1 = 9e6;
    double n2 = 1e11;
  } lorentzian;

  struct Subluminal {
    double n = 1e16;
    double mu = 2.53e-29;
    double gamma_hz = 1e6 / 6.283185307179586;
    double theta = 0.01;
  } subluminal;

  struct Oracle {
    double mu = 2.53e-29;
    double gamma3_hz = 3.8e7 / 6.283185307179586;
    double gamma1_hz = 30e6;
    double gamma2_hz = 10e6;
    double delta_p1_hz = 300e9;
    double delta_p2_hz = 300e9;
    double theta1 = 0.03;
    double theta2 = 0.002;
    double g1_q = 4.0;  // G1 * Q
    double pump_lock_offset_hz = 6.834682610904e9 - 3.0357324390e9;
  } oracle;

  // Appendix parameter sets: rho31 scan, saturated three-level index, Rabi bound
  struct Appendix {
    double mu = 2.53e-29;
    double n = 1e16;
    double gamma_eff_hz = 1e6 / 6.283185307179586;
    double gamma3_hz = 3.6e7 / 6.283185307179586;
    double delta_p_hz = 1e9;
    double omega_p_hz = 1e7 / 6.283185307179586;
    double omega_l_hz = 1e5 / 6.283185307179586;
    double length_m = 0.1;
    double wavelength_m = 780e-9;
    double reflectivity = 0.95;
    int fig7_points = 201;
    double fig7_span = 10.0;  // in units of Gamma_eff
    double sat_delta_p_hz = 20e9;
    double sat_theta = 0.01;
    double sat_g0_q = 2.0;  // G0 * Q
    int fig8_points = 41;
  } appendix;

  struct Sweep {
    double inv_ng_min = 1.0;
    double inv_ng_max = 1e4;
    int inv_ng_points = 40;
    double sub_inv_ng_min = 1e-4;
    double sub_inv_ng_max = 0.99;
    std::vector<double> delta_p_hz{1.0, 1e3, 1e5, 1e6};
    double small_delta_p_hz = 1.0;
    int oracle_points = 40;
    std::string custom_model = "lorentzian";  // linear | subluminal | lorentzian
  } sweep;

  struct Solver {
    double tolerance_hz = 1e-4;
    double field_tolerance = 1e-9;
    int max_iter = 200;
    double relaxation = 0.7;
    double agreement_band = 0.1;
  } solver;

  struct Output {
    std::string dir = "out";
    int precision = 12;
  } output;
};

// Throws ConfigError with line information or the offending field name.
ExperimentConfig load_config(const std::string& path);
ExperimentConfig parse_config(const std::string& text);
void validate(const ExperimentConfig& cfg);
// Writes every field; reloading gives a bit-identical config.
std::string format_config(const ExperimentConfig& cfg);

}  // namespace dls
