#pragma once

#include "dls/constants.hpp"

namespace dls {

// Single-isotope Raman gain medium. gamma is Gamma_eff in rad/s.
struct MediumParams {
  double N = 0;      // m^-3
  double mu = 0;     // C m
  double gamma = 0;  // rad/s
  double theta = 0;  // omega_P/(2 delta_p)
};

// Broad gain (1) minus narrow depletion (2). G1, G2 are the peak gain
// amplitudes; the saturation terms use them directly, so media with an
// unphysical N/G ratio (the Fig. 5 set) are representable.
struct DualMediumParams {
  MediumParams medium1;
  MediumParams medium2;
  double G1 = 0;
  double G2 = 0;

  static DualMediumParams from_media(const MediumParams& m1, const MediumParams& m2);
};

struct CavityParams {
  double Q = 1e6;
  double L0 = 0.1;
  double lambda0 = 780e-9;
  double R = 0.95;
  double omega_L0 = kOmegaL0;
};

// Q = (2 pi L / lambda)/(1 - R)
double q_from_geometry(double L, double lambda, double R);
void validate(const CavityParams& c);
void validate(const MediumParams& m);
void validate(const DualMediumParams& d);

struct GainIndexPoint {
  double gain = 0;   // per-pass amplitude gain, -chi''/2
  double index = 0;  // n - 1
};

double peak_gain(const MediumParams& m);                 // G0
double zeta(const MediumParams& m);                      // hbar N Gamma/(2 eps0)
double eta(const MediumParams& m, double G, double delta);  // (Gamma^2 + 4 delta^2) hbar N/(eps0 G Gamma)
// Omega_L^2 = mu^2 E^2/hbar^2
double rabi_squared(const MediumParams& m, double E2);

GainIndexPoint unsaturated_sub(const MediumParams& m, double omega_L_rabi, double delta);
double gain_at_field_sub(const MediumParams& m, double E2, double delta);
double saturated_field_sub(const MediumParams& m, const CavityParams& c, double delta);
// returns n - 1
double saturated_index_sub(const MediumParams& m, const CavityParams& c, double delta);

GainIndexPoint unsaturated_super(const DualMediumParams& d, double omega1_rabi, double omega2_rabi, double detuning);
double gain_at_field_super(const DualMediumParams& d, double E2, double detuning);
double saturated_field_super(const DualMediumParams& d, const CavityParams& c, double detuning);
// returns n - 1
double saturated_index_super(const DualMediumParams& d, const CavityParams& c, double detuning);

struct LinearizedSuper {
  double alpha_tilde = 0;
  double alpha_prime = 0;
  double beta_prime = 0;
  double E2_center = 0;
  double group_index(double omega_L0) const { return 1.0 + alpha_tilde * omega_L0; }
};

LinearizedSuper linearized_index_super(const DualMediumParams& d, const CavityParams& c);

// Symmetric detuning window where E^2 > 0, found by bisection.
struct LasingRange {
  double lo = 0;
  double hi = 0;
};

LasingRange lasing_range_sub(const MediumParams& m, const CavityParams& c);
LasingRange lasing_range_super(const DualMediumParams& d, const CavityParams& c);

// Largest saturated probe Rabi frequency (delta = 0) for a medium with
// linewidth gamma, in three forms that disagree by constant factors:
//   direct:   sqrt(mu^2 N Gamma Q/(hbar eps0))
//   two_q:    sqrt(mu^2 N Gamma (2Q - 1/G0)/(hbar eps0))
//   chained:  mu/hbar sqrt(2 Q zeta - eta(0)) = sqrt(mu^2 N Gamma (Q - 1/G0)/(hbar eps0))
struct RabiBound {
  double Q = 0;
  double G0 = 0;
  double direct = 0;
  double two_q = 0;
  double chained = 0;
};

RabiBound rabi_bound(double mu, double N, double gamma, double Q, double G0);

// Fig. 5 parameter set
DualMediumParams fig5_medium();
CavityParams fig5_cavity();

}  // namespace dls
