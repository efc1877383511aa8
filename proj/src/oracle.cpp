#include "dls/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "dls/log.hpp"
#include "dls/parallel.hpp"
#include "dls/roots.hpp"

namespace dls {

namespace {

ThreeLevelParams shifted(const ThreeLevelParams& base, double mu, double u, double E, double shift) {
  ThreeLevelParams p = base;
  p.omega_L = mu * E / kHbar;
  p.delta_p += shift;
  p.delta_diff += u - shift;
  return p;
}

double weak_probe_field(const DualIsotopeSystem& s) {
  const double g = std::min(s.isotope1.gamma_eff, s.isotope2.gamma_eff);
  return 1e-4 * kHbar * g / std::max(s.mu1, s.mu2);
}

double narrow_width(const DualIsotopeSystem& s) { return s.isotope2.gamma_eff; }

cplx chi_of(const ThreeLevelParams& p, double N, double mu, double E) {
  if (N == 0.0) return {0.0, 0.0};
  return 2.0 * N * mu * three_level_steady_state(p).rho31() / (kEps0 * E);
}

}  // namespace

IsotopeResponse isotope_response(const DualIsotopeSystem& s, double u, double E, double delta_P) {
  if (E < 0) throw DomainError("field amplitude must be non-negative");
  if (E == 0.0) E = weak_probe_field(s);
  const double lock_error = s.pump_lock_offset - kHyperfineDifference;
  IsotopeResponse r;
  r.chi1 = chi_of(shifted(s.isotope1, s.mu1, u, E, delta_P), s.N1, s.mu1, E);
  r.chi2 = chi_of(shifted(s.isotope2, s.mu2, u, E, delta_P + lock_error), s.N2, s.mu2, E);
  return r;
}

cplx medium_response(const DualIsotopeSystem& s, double u, double E, double delta_P) {
  return isotope_response(s, u, E, delta_P).total();
}

double oracle_gain(const DualIsotopeSystem& s, double u, double E, double delta_P) {
  return -0.5 * medium_response(s, u, E, delta_P).imag();
}

double oracle_saturated_field(const DualIsotopeSystem& s, double u, double delta_P) {
  const double loss = 0.5 / s.cavity.Q;
  auto f = [&](double lnE) { return oracle_gain(s, u, std::exp(lnE), delta_P) - loss; };
  const double lo = std::log(weak_probe_field(s));
  const double f_lo = f(lo);
  if (!(f_lo > 0)) {
    std::ostringstream os;
    os << "weak-probe gain below loss at u = " << u << " rad/s";
    throw BelowThreshold(os.str(), f_lo);
  }
  double hi = lo + std::log(10.0), f_hi = f(hi);
  for (int k = 0; k < 60 && f_hi > 0; ++k) {
    hi += std::log(10.0);
    f_hi = f(hi);
  }
  if (f_hi > 0) throw NumericalError("gain does not saturate to the loss");
  return std::exp(refine_root(f, lo, hi, f_lo, f_hi).x);
}

double oracle_saturated_index(const DualIsotopeSystem& s, double u, double delta_P) {
  const double E = oracle_saturated_field(s, u, delta_P);
  return 0.5 * medium_response(s, u, E, delta_P).real();
}

void center_isotopes(DualIsotopeSystem& s) {
  for (int it = 0; it < 12; ++it) {
    const double E = oracle_saturated_field(s, 0.0);
    double moved = 0.0;
    for (int i = 0; i < 2; ++i) {
      ThreeLevelParams& iso = i == 0 ? s.isotope1 : s.isotope2;
      if ((i == 0 ? s.N1 : s.N2) == 0.0) continue;
      const double h = 1e-3 * iso.gamma_eff;
      const double o0 = iso.delta_diff;
      auto asym = [&](double o) {
        iso.delta_diff = o;
        const auto a = isotope_response(s, h, E), b = isotope_response(s, -h, E);
        return i == 0 ? a.chi1.imag() - b.chi1.imag() : a.chi2.imag() - b.chi2.imag();
      };
      const auto r = nearest_root(asym, o0, 1e-4 * iso.gamma_eff, 30);
      if (!r) throw NumericalError("isotope line center not found");
      iso.delta_diff = r->x;
      moved = std::max(moved, std::abs(r->x - o0) / iso.gamma_eff);
    }
    if (moved < 1e-12) break;
  }
}

double find_operating_point(const DualIsotopeSystem& s) {
  const double w0 = s.cavity.omega_L0;
  const double n0 = oracle_saturated_index(s, 0.0);
  auto g = [&](double u) {
    const double n = oracle_saturated_index(s, u);
    return u * (1.0 + n) + w0 * (n - n0);
  };
  // searched within a few percent of the dip width around line center
  const double width = s.isotope2.gamma_eff;
  const double h = 5e-3 * width, window = 5e-2 * width;
  auto g2 = [&](double u) { return (g(u + h) - 2.0 * g(u) + g(u - h)) / (h * h); };
  double u = 0.0;
  for (int it = 0; it < 30; ++it) {
    const double a = g2(u);
    const double b = (g2(u + h) - g2(u - h)) / (2.0 * h);
    if (b == 0.0 || !std::isfinite(b)) break;
    const double next = std::clamp(u - a / b, -window, window);
    const double du = next - u;
    u = next;
    if (std::abs(du) < 1e-9 * h) break;
  }
  // no inflection near the dip (e.g. no depletion): keep the symmetric center
  if (std::abs(u) >= window) return 0.0;
  return u;
}

void prepare(DualIsotopeSystem& s) {
  s.operating_offset = 0.0;
  center_isotopes(s);
  s.operating_offset = find_operating_point(s);
  log().debug("oracle prepared: N2 = {:.6e}, offsets = {:.6e}, {:.6e}, operating offset = {:.6e} rad/s", s.N2,
              s.isotope1.delta_diff, s.isotope2.delta_diff, s.operating_offset);
}

double oracle_group_index(const DualIsotopeSystem& s) {
  const double u0 = s.operating_offset;
  return group_index([&](double x) { return oracle_saturated_index(s, u0 + x); }, s.cavity.omega_L0 + u0,
                     0.1 * narrow_width(s));
}

IterativeLasingState iterate_lasing(const DualIsotopeSystem& s, double delta_P, const IterateOptions& opt) {
  const double u0 = s.operating_offset;
  const double W = s.cavity.omega_L0 + u0;
  const double loss = 0.5 / s.cavity.Q;
  const double E_ref = oracle_saturated_field(s, u0);
  const double n_ref = 0.5 * medium_response(s, u0, E_ref).real();
  const double lam = opt.relaxation;
  if (!(lam > 0 && lam <= 1)) throw DomainError("relaxation factor must be in (0, 1]");

  IterativeLasingState st;
  double E = E_ref, D = 0.0;
  std::vector<double> history;
  auto phase = [&](double d, double field) {
    const double n = 0.5 * medium_response(s, u0 + d, field, delta_P).real();
    return d * (1.0 + n) + W * (n - n_ref);
  };
  // Frozen-field alternation is unstable near n_g -> 0 once the operating point
  // sits off line center (dE/domega != 0), so the frequency step uses the field
  // linearized about the current frequency.
  const double hs = 1e-3 * narrow_width(s);
  for (int k = 1; k <= opt.max_iter; ++k) {
    const double E_new = oracle_saturated_field(s, u0 + D, delta_P);
    E += lam * (E_new - E);
    const double slope =
        (oracle_saturated_field(s, u0 + D + hs, delta_P) - oracle_saturated_field(s, u0 + D - hs, delta_P)) / (2.0 * hs);
    const double Dk = D, Ek = E_new;
    const double h0 = delta_P != 0.0 ? 1e-3 * std::abs(delta_P) : 1e-3;
    const auto r = nearest_root([&](double d) { return phase(d, Ek + slope * (d - Dk)); }, D, h0, 120);
    if (!r) throw NoLasingSolution("phase condition has no root at the current field");
    D += lam * (r->x - D);

    st.iteration = k;
    st.residual_freq = std::abs(phase(D, E));
    st.residual_field = std::abs(oracle_gain(s, u0 + D, E, delta_P) - loss) / loss;
    history.push_back(st.residual_freq / opt.tol_freq + st.residual_field / opt.tol_field);
    log().debug("iterate k={} D={:.9e} E={:.9e} rf={:.3e} re={:.3e}", k, D, E, st.residual_freq, st.residual_field);
    if (st.residual_freq <= opt.tol_freq && st.residual_field <= opt.tol_field) {
      st.converged = true;
      break;
    }
  }
  if (history.size() >= 3) {
    const auto n = history.size();
    st.monotone_tail = history[n - 1] <= history[n - 2] && history[n - 2] <= history[n - 3];
  }
  st.delta_L = D;
  st.omega_L = W + D;
  st.field_amplitude = E;
  if (!st.converged) {
    std::ostringstream os;
    os << "lasing iteration did not converge in " << opt.max_iter << " steps";
    throw NoConvergence(os.str(), st.residual_freq, st.residual_field);
  }
  if (opt.require_monotone && !st.monotone_tail) throw NumericalError("residuals not monotone over the last iterations");
  return st;
}

DualIsotopeSystem default_oracle_system(const OracleDefaults& d) {
  DualIsotopeSystem s;
  auto iso = [&](double dp, double theta, double gamma, PumpDirection dir) {
    ThreeLevelParams p;
    p.delta_p = dp;
    p.omega_P = 2.0 * theta * dp;
    p.delta_diff = p.omega_P * p.omega_P / (4.0 * dp);
    p.gamma_eff = gamma;
    p.gamma_3 = d.gamma_3;
    p.direction = dir;
    return p;
  };
  s.isotope1 = iso(d.delta_p1, d.theta1, d.gamma1, PumpDirection::gain);
  s.isotope2 = iso(d.delta_p2, d.theta2, d.gamma2, PumpDirection::depletion);
  s.mu1 = s.mu2 = d.mu;
  s.cavity.Q = d.Q;
  const double G1 = d.G1_times_Q / d.Q;
  s.N1 = G1 * kHbar * kEps0 * d.gamma1 / (2.0 * d.theta1 * d.theta1 * d.mu * d.mu);
  s.N2 = 0.0;
  prepare(s);
  return s;
}

DualIsotopeSystem calibrate_oracle(const DualIsotopeSystem& s, double n_g) {
  DualIsotopeSystem t = s;
  auto ng_of = [&](double n2) {
    t = s;
    t.N2 = n2;
    prepare(t);
    return oracle_group_index(t);
  };
  const double theta2 = s.isotope2.omega_P / (2.0 * s.isotope2.delta_p);
  const double G1 = peak_gain({s.N1, s.mu1, s.isotope1.gamma_eff, s.isotope1.omega_P / (2.0 * s.isotope1.delta_p)});
  const double start = 1e-3 * G1 * kHbar * kEps0 * s.isotope2.gamma_eff / (2.0 * theta2 * theta2 * s.mu2 * s.mu2);
  const double n2 = solve_decreasing(ng_of, n_g, start, 1e-13);
  t = s;
  t.N2 = n2;
  prepare(t);
  return t;
}

DualMediumParams lorentzian_equivalent(const DualIsotopeSystem& s) {
  auto med = [](const ThreeLevelParams& p, double N, double mu) {
    return MediumParams{N, mu, p.gamma_eff, p.omega_P / (2.0 * p.delta_p)};
  };
  return DualMediumParams::from_media(med(s.isotope1, s.N1, s.mu1), med(s.isotope2, s.N2, s.mu2));
}

std::vector<ComparisonRow> compare_with_lorentzian(const DualIsotopeSystem& s, const std::vector<double>& ng_targets,
                                                   double delta_P, const IterateOptions& opt, int workers) {
  std::vector<ComparisonRow> rows(ng_targets.size());
  parallel_for(rows.size(), workers, [&](std::size_t i) {
    ComparisonRow& r = rows[i];
    const double ng = ng_targets[i];
    r.inv_ng = 1.0 / ng;
    try {
      const DualIsotopeSystem o = calibrate_oracle(s, ng);
      r.N2 = o.N2;
      r.operating_offset = o.operating_offset;
      r.ng_oracle = oracle_group_index(o);
      const auto st = iterate_lasing(o, delta_P, opt);
      r.ratio_oracle = st.delta_L / delta_P;
      r.iterations = st.iteration;

      // same knob as the oracle: N2, with G2 following from it
      DualIsotopeSystem t = s;
      auto ng_of = [&](double n2) {
        t.N2 = n2;
        return linearized_index_super(lorentzian_equivalent(t), s.cavity).group_index(s.cavity.omega_L0);
      };
      t.N2 = solve_decreasing(ng_of, ng, 1e-3 * std::max(o.N2, 1.0));
      PumpShiftScenario sc;
      sc.medium = lorentzian_equivalent(t);
      sc.cavity = s.cavity;
      sc.delta_P = delta_P;
      r.G2_lorentzian = std::get<DualMediumParams>(sc.medium).G2;
      const auto sol = solve_lasing_frequency(sc, opt.tol_freq);
      r.ng_lorentzian = sol.n_g;
      r.ratio_lorentzian = sol.delta_L / delta_P;
      r.abs_diff = std::abs(r.ratio_oracle - r.ratio_lorentzian);
      r.rel_diff = r.abs_diff / std::max(std::abs(r.ratio_lorentzian), 1.0);
    } catch (const Error& e) {
      r.status = e.code();
      r.message = e.what();
    } catch (const std::exception& e) {
      r.status = ErrorCode::numerical;
      r.message = e.what();
    }
  });
  return rows;
}

}  // namespace dls
