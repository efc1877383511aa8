#include "dls/lasing.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <tuple>

#include "dls/parallel.hpp"
#include "dls/roots.hpp"

namespace dls {

double group_index(const std::function<double(double)>& index_offset, double omega0, double scale) {
  if (!(scale > 0)) throw DomainError("group_index needs a positive spectral scale");
  const double f0 = index_offset(0.0);
  double h = 1e-2 * scale;
  double best = NAN, prev = NAN, best_change = INFINITY;
  for (int k = 0; k < 40 && h > 1e-9 * scale; ++k, h *= 0.5) {
    const double d1 = (index_offset(h) - index_offset(-h)) / (2.0 * h);
    const double d2 = (index_offset(0.5 * h) - index_offset(-0.5 * h)) / h;
    const double r = (4.0 * d2 - d1) / 3.0;
    if (!std::isfinite(r)) break;
    if (std::isfinite(prev)) {
      const double change = std::abs(omega0 * (r - prev));
      if (change < best_change) {
        best_change = change;
        best = r;
      }
      if (change < 1e-13) break;
    }
    prev = r;
  }
  if (!std::isfinite(best)) throw NumericalError("group index derivative is not finite");
  return 1.0 + f0 + omega0 * best;
}

double shifted_index(const PumpShiftScenario& s, double u) {
  const double x = u - s.delta_P;
  return std::visit(
      [&](const auto& m) -> double {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, LinearIndex>)
          return m.alpha * x;
        else if constexpr (std::is_same_v<T, MediumParams>)
          return saturated_index_sub(m, s.cavity, x);
        else
          return saturated_index_super(m, s.cavity, x);
      },
      s.medium);
}

double scenario_group_index(const PumpShiftScenario& s) {
  const double w0 = s.cavity.omega_L0;
  return std::visit(
      [&](const auto& m) -> double {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, LinearIndex>) {
          return 1.0 + m.alpha * w0;
        } else if constexpr (std::is_same_v<T, MediumParams>) {
          return group_index([&](double u) { return saturated_index_sub(m, s.cavity, u); }, w0, m.gamma);
        } else {
          return linearized_index_super(m, s.cavity).group_index(w0);
        }
      },
      s.medium);
}

LasingSolution solve_lasing_frequency(const PumpShiftScenario& s, double tol) {
  const double w0 = s.cavity.omega_L0;
  PumpShiftScenario base = s;
  base.delta_P = 0.0;
  const double f0 = shifted_index(base, 0.0);
  int evals = 0;
  auto eps = [&](double d) {
    ++evals;
    const double f = shifted_index(s, d);
    return d * (1.0 + f) + w0 * (f - f0);
  };
  // fails with BelowThreshold when the shifted medium does not lase at omega_L0
  shifted_index(s, 0.0);
  const double h0 = s.delta_P != 0.0 ? 1e-3 * std::abs(s.delta_P) : 1.0;
  const auto root = nearest_root(eps, 0.0, h0, 120);
  if (!root) throw NoLasingSolution("no sign change of the resonance residual inside the lasing window");
  if (!(std::abs(root->f) <= tol)) {
    std::ostringstream os;
    os << "resonance residual " << root->f << " rad/s exceeds tolerance " << tol;
    throw NoConvergence(os.str(), root->f, 0.0);
  }
  LasingSolution sol;
  sol.delta_L = root->x;
  sol.omega_L = w0 + root->x;
  sol.residual = root->f;
  sol.n_g = scenario_group_index(base);
  sol.iterations = evals;
  return sol;
}

double shift_ratio_analytic(double n_g, Regime) {
  if (n_g == 0.0 || !std::isfinite(n_g)) throw DomainError("shift ratio has a pole at n_g = 0");
  return (n_g - 1.0) / n_g;
}

LinearIndex calibrate_linear(double n_g, double omega_L0) { return LinearIndex{(n_g - 1.0) / omega_L0}; }

MediumParams calibrate_sub(const MediumParams& m, const CavityParams& c, double n_g) {
  if (!(n_g > 1.0) || !std::isfinite(n_g))
    throw UnreachableTarget("a saturated subluminal medium needs n_g > 1");
  MediumParams out = m;
  out.gamma = c.omega_L0 / (c.Q * (n_g - 1.0));
  out.theta = m.theta * std::sqrt(out.gamma / m.gamma);
  return out;
}

DualMediumParams calibrate_g2(const DualMediumParams& d, const CavityParams& c, double n_g) {
  DualMediumParams w = d;
  auto ng_of = [&](double g2) {
    w.G2 = g2;
    return linearized_index_super(w, c).group_index(c.omega_L0);
  };
  w.G2 = solve_decreasing(ng_of, n_g, 1e-15 * d.G1);
  return w;
}

PumpShiftScenario calibrate(const PumpShiftScenario& s, double n_g) {
  PumpShiftScenario out = s;
  std::visit(
      [&](const auto& m) {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, LinearIndex>)
          out.medium = calibrate_linear(n_g, s.cavity.omega_L0);
        else if constexpr (std::is_same_v<T, MediumParams>)
          out.medium = calibrate_sub(m, s.cavity, n_g);
        else
          out.medium = calibrate_g2(m, s.cavity, n_g);
      },
      s.medium);
  return out;
}

const char* model_name(Model m) {
  switch (m) {
    case Model::analytic: return "analytic";
    case Model::linear: return "linear";
    case Model::lorentzian: return "lorentzian";
    case Model::oracle: return "oracle";
  }
  return "unknown";
}

void ShiftSweepResult::sort() {
  std::stable_sort(rows.begin(), rows.end(), [](const ShiftRow& a, const ShiftRow& b) {
    return std::make_tuple(static_cast<int>(a.model), a.delta_P_hz, a.inv_ng) <
           std::make_tuple(static_cast<int>(b.model), b.delta_P_hz, b.inv_ng);
  });
}

int ShiftSweepResult::failed() const {
  return static_cast<int>(std::count_if(rows.begin(), rows.end(), [](const ShiftRow& r) { return r.status != ErrorCode::ok; }));
}

ShiftSweepResult sweep_shift_ratio(const PumpShiftScenario& base, const std::vector<double>& ng_targets,
                                   const std::vector<double>& delta_P_values, int workers, double tol) {
  const Model numeric = std::holds_alternative<LinearIndex>(base.medium) ? Model::linear : Model::lorentzian;
  const std::size_t nn = ng_targets.size(), np = delta_P_values.size();

  struct Calibrated {
    PumpShiftScenario s;
    ErrorCode status = ErrorCode::ok;
    std::string message;
  };
  std::vector<Calibrated> cal(nn);
  parallel_for(nn, workers, [&](std::size_t i) {
    try {
      cal[i].s = calibrate(base, ng_targets[i]);
    } catch (const Error& e) {
      cal[i].status = e.code();
      cal[i].message = e.what();
    } catch (const std::exception& e) {
      cal[i].status = ErrorCode::numerical;
      cal[i].message = e.what();
    }
  });

  ShiftSweepResult out;
  out.rows.resize(2 * nn * np);
  parallel_for(nn * np, workers, [&](std::size_t k) {
    const std::size_t i = k / np, j = k % np;
    const double ng = ng_targets[i], dp = delta_P_values[j];
    ShiftRow& a = out.rows[2 * k];
    ShiftRow& r = out.rows[2 * k + 1];
    a.inv_ng = r.inv_ng = 1.0 / ng;
    a.delta_P_hz = r.delta_P_hz = rad_to_hz(dp);
    a.model = Model::analytic;
    r.model = numeric;
    a.n_g = ng;
    try {
      a.ratio = shift_ratio_analytic(ng);
      a.delta_L_hz = a.ratio * a.delta_P_hz;
    } catch (const Error& e) {
      a.status = e.code();
      a.message = e.what();
    }
    if (cal[i].status != ErrorCode::ok) {
      r.status = cal[i].status;
      r.message = cal[i].message;
      return;
    }
    try {
      PumpShiftScenario s = cal[i].s;
      s.delta_P = dp;
      const auto sol = solve_lasing_frequency(s, tol);
      r.delta_L_hz = rad_to_hz(sol.delta_L);
      r.ratio = sol.delta_L / dp;
      r.n_g = sol.n_g;
      r.residual = sol.residual;
      r.iterations = sol.iterations;
    } catch (const Error& e) {
      r.status = e.code();
      r.message = e.what();
    } catch (const std::exception& e) {
      r.status = ErrorCode::numerical;
      r.message = e.what();
    }
  });
  out.sort();
  return out;
}

std::vector<double> log_grid(double lo, double hi, int points) {
  if (points < 1 || !(lo > 0) || !(hi > 0)) throw DomainError("log grid needs positive bounds and points");
  std::vector<double> g(static_cast<std::size_t>(points));
  if (points == 1) {
    g[0] = lo;
    return g;
  }
  const double a = std::log10(lo), b = std::log10(hi);
  for (int i = 0; i < points; ++i) g[static_cast<std::size_t>(i)] = std::pow(10.0, a + (b - a) * i / (points - 1));
  g.front() = lo;
  g.back() = hi;
  return g;
}

}  // namespace dls
