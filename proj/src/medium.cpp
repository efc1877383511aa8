#include "dls/medium.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <sstream>

#include "dls/errors.hpp"

namespace dls {

namespace {

template <class F>
LasingRange symmetric_window(F e2, double scale) {
  // e2(d) must be > 0 at d = 0
  auto above = [&](double d) {
    try {
      return e2(d) > 0.0;
    } catch (const BelowThreshold&) {
      return false;
    }
  };
  if (!above(0.0)) throw BelowThreshold("no lasing at line center", 0.0);
  double good = 0.0, bad = scale;
  while (above(bad)) {
    good = bad;
    bad *= 2.0;
    if (bad > 1e30) throw NumericalError("lasing window is unbounded");
  }
  for (int i = 0; i < 200 && bad - good > 4e-16 * bad; ++i) {
    const double mid = 0.5 * (good + bad);
    (above(mid) ? good : bad) = mid;
  }
  return {-good, good};
}

}  // namespace

DualMediumParams DualMediumParams::from_media(const MediumParams& m1, const MediumParams& m2) {
  DualMediumParams d;
  d.medium1 = m1;
  d.medium2 = m2;
  d.G1 = peak_gain(m1);
  d.G2 = peak_gain(m2);
  return d;
}

double q_from_geometry(double L, double lambda, double R) {
  if (!(L > 0) || !(lambda > 0) || !(R > 0 && R < 1)) throw DomainError("cavity geometry out of range");
  return kTwoPi * L / lambda / (1.0 - R);
}

void validate(const CavityParams& c) {
  if (!(c.Q > 0)) throw DomainError("cavity Q must be positive");
  if (!(c.omega_L0 > 0)) throw DomainError("cavity omega_L0 must be positive");
  if (!(c.R > 0 && c.R < 1)) throw DomainError("cavity reflectivity must be in (0, 1)");
}

void validate(const MediumParams& m) {
  if (!(m.N > 0)) throw DomainError("medium N must be positive");
  if (!(m.mu > 0)) throw DomainError("medium mu must be positive");
  if (!(m.gamma > 0)) throw DomainError("medium gamma must be positive");
  if (!std::isfinite(m.theta)) throw DomainError("medium theta must be finite");
}

void validate(const DualMediumParams& d) {
  if (!(d.medium1.N > 0) || !(d.medium2.N > 0)) throw DomainError("dual medium densities must be positive");
  if (!(d.medium1.gamma > 0) || !(d.medium2.gamma > 0)) throw DomainError("dual medium linewidths must be positive");
  if (!(d.medium2.gamma < d.medium1.gamma)) throw DomainError("depletion must be narrower than gain");
  if (!(d.G1 > 0) || !(d.G2 >= 0)) throw DomainError("G1 must be positive and G2 non-negative");
}

double peak_gain(const MediumParams& m) {
  return 2.0 * m.N * m.theta * m.theta * m.mu * m.mu / (kHbar * kEps0 * m.gamma);
}

double zeta(const MediumParams& m) { return kHbar * m.N * m.gamma / (2.0 * kEps0); }

double eta(const MediumParams& m, double G, double delta) {
  return (m.gamma * m.gamma + 4.0 * delta * delta) * kHbar * m.N / (kEps0 * G * m.gamma);
}

double rabi_squared(const MediumParams& m, double E2) { return m.mu * m.mu * E2 / (kHbar * kHbar); }

GainIndexPoint unsaturated_sub(const MediumParams& m, double omega_L_rabi, double delta) {
  const double g0 = peak_gain(m);
  const double den =
      2.0 * m.theta * m.theta * omega_L_rabi * omega_L_rabi + m.gamma * m.gamma + 4.0 * delta * delta;
  GainIndexPoint p;
  p.gain = 0.5 * g0 * m.gamma * m.gamma / den;
  p.index = g0 * m.gamma * delta / den;
  assert(std::hypot(2.0 * p.gain, 2.0 * p.index) < 0.1);
  return p;
}

double gain_at_field_sub(const MediumParams& m, double E2, double delta) {
  return zeta(m) / (E2 + eta(m, peak_gain(m), delta));
}

double saturated_field_sub(const MediumParams& m, const CavityParams& c, double delta) {
  const double e2 = 2.0 * c.Q * zeta(m) - eta(m, peak_gain(m), delta);
  if (!(e2 > 0)) {
    std::ostringstream os;
    os << "below threshold at detuning " << delta << " rad/s";
    throw BelowThreshold(os.str(), e2);
  }
  return e2;
}

double saturated_index_sub(const MediumParams& m, const CavityParams& c, double delta) {
  const double e2 = saturated_field_sub(m, c, delta);
  return (2.0 * zeta(m) * delta / m.gamma) / (e2 + eta(m, peak_gain(m), delta));
}

GainIndexPoint unsaturated_super(const DualMediumParams& d, double omega1_rabi, double omega2_rabi,
                                 double detuning) {
  auto term = [detuning](const MediumParams& m, double G, double rabi) {
    const double den = 2.0 * m.theta * m.theta * rabi * rabi + m.gamma * m.gamma + 4.0 * detuning * detuning;
    return GainIndexPoint{0.5 * G * m.gamma * m.gamma / den, G * m.gamma * detuning / den};
  };
  const auto a = term(d.medium1, d.G1, omega1_rabi);
  const auto b = term(d.medium2, d.G2, omega2_rabi);
  return {a.gain - b.gain, a.index - b.index};
}

double gain_at_field_super(const DualMediumParams& d, double E2, double detuning) {
  double g = zeta(d.medium1) / (E2 + eta(d.medium1, d.G1, detuning));
  if (d.G2 > 0) g -= zeta(d.medium2) / (E2 + eta(d.medium2, d.G2, detuning));
  return g;
}

double saturated_field_super(const DualMediumParams& d, const CavityParams& c, double detuning) {
  const double z1 = zeta(d.medium1);
  const double e1 = eta(d.medium1, d.G1, detuning);
  double x;
  if (d.G2 > 0) {
    const double z2 = zeta(d.medium2);
    const double e2 = eta(d.medium2, d.G2, detuning);
    // x^2 + b x + c = 0 from the gain-equals-loss condition
    const double b = e1 + e2 - 2.0 * c.Q * (z1 - z2);
    const double cc = e1 * e2 - 2.0 * c.Q * (z1 * e2 - z2 * e1);
    const double t = e1 - e2 - 2.0 * c.Q * (z1 + z2);
    double disc = t * t - 16.0 * c.Q * c.Q * z1 * z2;
    if (std::abs(disc) < 1e-12 * std::max(b * b, std::abs(4.0 * cc))) disc = 0.0;
    if (disc < 0) {
      std::ostringstream os;
      os << "negative discriminant at detuning " << detuning << " rad/s";
      throw BelowThreshold(os.str(), -0.5 * std::sqrt(-disc));
    }
    const double s = std::sqrt(disc);
    x = b >= 0 ? (b + s > 0 ? -2.0 * cc / (b + s) : 0.0) : 0.5 * (-b + s);
  } else {
    x = 2.0 * c.Q * z1 - e1;
  }
  if (!(x > 0)) {
    std::ostringstream os;
    os << "below threshold at detuning " << detuning << " rad/s";
    throw BelowThreshold(os.str(), x);
  }
  return x;
}

double saturated_index_super(const DualMediumParams& d, const CavityParams& c, double detuning) {
  const double x = saturated_field_super(d, c, detuning);
  double n = (2.0 * zeta(d.medium1) * detuning / d.medium1.gamma) / (x + eta(d.medium1, d.G1, detuning));
  if (d.G2 > 0)
    n -= (2.0 * zeta(d.medium2) * detuning / d.medium2.gamma) / (x + eta(d.medium2, d.G2, detuning));
  return n;
}

LinearizedSuper linearized_index_super(const DualMediumParams& d, const CavityParams& c) {
  LinearizedSuper r;
  r.E2_center = saturated_field_super(d, c, 0.0);
  const double z1 = zeta(d.medium1);
  r.alpha_prime = (2.0 * z1 / d.medium1.gamma) / (r.E2_center + 2.0 * z1 / d.G1);
  if (d.G2 > 0) {
    const double z2 = zeta(d.medium2);
    r.beta_prime = (2.0 * z2 / d.medium2.gamma) / (r.E2_center + 2.0 * z2 / d.G2);
  }
  r.alpha_tilde = r.alpha_prime - r.beta_prime;
  return r;
}

LasingRange lasing_range_sub(const MediumParams& m, const CavityParams& c) {
  return symmetric_window([&](double d) { return saturated_field_sub(m, c, d); }, m.gamma);
}

LasingRange lasing_range_super(const DualMediumParams& d, const CavityParams& c) {
  return symmetric_window([&](double x) { return saturated_field_super(d, c, x); }, d.medium2.gamma);
}

DualMediumParams fig5_medium() {
  DualMediumParams d;
  d.medium1.N = 9e6;
  d.medium1.gamma = kTwoPi * 30e6;
  d.medium2.N = 1e11;
  d.medium2.gamma = kTwoPi * 10e6;
  d.G1 = 1.2e5;
  d.G2 = 0.0;
  return d;
}

CavityParams fig5_cavity() {
  CavityParams c;
  c.Q = 1e6;
  return c;
}

RabiBound rabi_bound(double mu, double N, double gamma, double Q, double G0) {
  if (!(mu > 0 && N > 0 && gamma > 0 && Q > 0 && G0 > 0)) throw DomainError("rabi_bound: inputs must be positive");
  const double k = mu * mu * N * gamma / (kHbar * kEps0);
  RabiBound b;
  b.Q = Q;
  b.G0 = G0;
  b.direct = std::sqrt(k * Q);
  b.two_q = std::sqrt(std::max(0.0, k * (2 * Q - 1 / G0)));
  b.chained = std::sqrt(std::max(0.0, k * (Q - 1 / G0)));
  return b;
}

}  // namespace dls
