#pragma once

#include <string>
#include <vector>

#include "dls/atomic.hpp"
#include "dls/config.hpp"
#include "dls/lasing.hpp"
#include "dls/oracle.hpp"

namespace dls {

// Physics blocks built from the config (Hz -> rad/s happens here).
CavityParams cavity_from(const ExperimentConfig& c);
DualMediumParams lorentzian_from(const ExperimentConfig& c);
MediumParams subluminal_from(const ExperimentConfig& c);
OracleDefaults oracle_from(const ExperimentConfig& c);
IterateOptions iterate_options_from(const ExperimentConfig& c);
double resonance_tolerance(const ExperimentConfig& c);  // rad/s

// ng targets from the configured 1/n_g grids
std::vector<double> super_ng_targets(const ExperimentConfig& c);
std::vector<double> sub_ng_targets(const ExperimentConfig& c);
std::vector<double> oracle_ng_targets(const ExperimentConfig& c);

// rho31 of the full Lambda system against theta * rho21 of the reduced one
struct Rho31Row {
  double delta_diff = 0;  // rad/s
  cplx exact;
  cplx approx;
};

struct Rho31Scan {
  std::vector<Rho31Row> rows;
  ThreeLevelParams params;
  RegimeReport regime;
  double omega_eff_over_gamma = 0;
  // max |exact - approx| over the scan, divided by max |exact|, per part
  double dev_re = 0;
  double dev_im = 0;
  bool approx_warning = false;
};

Rho31Scan rho31_scan(const ExperimentConfig& c);

// Saturated index of a single three-level gain isotope across its lasing range
struct SaturatedRow {
  double detuning = 0;  // rad/s from line center
  double index = 0;     // n - 1, explicit three-level
  double linear = 0;    // detuning/(Q Gamma)
  double field = 0;     // V/m
  double gain_residual = 0;  // (gain - loss)/loss at the solved field
};

struct SaturatedScan {
  std::vector<SaturatedRow> rows;
  double Q = 0;
  double G0 = 0;
  double gamma = 0;
  double range_lo = 0, range_hi = 0;
  double slope = 0, intercept = 0, r2 = 0;
  double slope_q = 0;   // 1/(Q Gamma)
  double slope_2q = 0;  // 1/(2 Q Gamma)
  double dev_q = 0, dev_2q = 0;  // |slope/candidate - 1|
  const char* match = "";
  double rabi_center = 0;  // mu E/hbar at line center
  double delta_p = 0;
  RabiBound bound;
  double quoted_bound = 7.65e7;
};

SaturatedScan saturated_index_scan(const ExperimentConfig& c);

struct LineFit {
  double slope = 0, intercept = 0, r2 = 0;
};
LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

enum class ReportFormat { text, csv };

// Summary of a sweep: per-model extremal ratios, convergence statistics,
// error rows and the large-|1/n_g| limit check. Throws on empty input.
std::string emit_report(const ShiftSweepResult& r, ReportFormat f);
void emit_report(const ShiftSweepResult& r, ReportFormat f, const std::string& path);

// Saturation of -ratio with growing 1/n_g for each pump shift.
std::string asymptote_table(const ShiftSweepResult& r);

// CSV bodies (with versioned header), formatted with `precision` significant digits
std::string shift_csv(const ShiftSweepResult& r, int precision);
std::string comparison_csv(const std::vector<ComparisonRow>& rows, double delta_P_hz, int precision);
std::string rho31_csv(const Rho31Scan& s, int precision);
std::string saturated_csv(const SaturatedScan& s, int precision);

struct RunOutput {
  std::vector<std::string> files;  // written paths, in order
  std::string report;              // also written to report.txt
  int exit_code = 0;               // 0 ok, 2 partial failure, 4 non-convergence
  double seconds = 0;              // wall clock, written to timing.txt only
};

RunOutput run_experiment(const ExperimentConfig& c, const std::string& out_dir, int workers = 1);

}  // namespace dls
