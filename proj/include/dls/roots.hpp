#pragma once

#include <boost/math/tools/toms748_solve.hpp>
#include <cmath>
#include <algorithm>
#include <cstdint>
#include <sstream>
#include <optional>
#include <utility>

#include "dls/errors.hpp"

namespace dls {

struct Root {
  double x = 0;
  double f = 0;
  int evaluations = 0;
};

// Refines a sign-change bracket down to adjacent doubles (or an exact zero).
// rel_tol = 0 means adjacent doubles.
template <class F>
Root refine_root(F&& f, double a, double b, double fa, double fb, double rel_tol = 0.0, int max_iter = 400) {
  if (fa == 0.0) return {a, 0.0, 0};
  if (fb == 0.0) return {b, 0.0, 0};
  if ((fa > 0) == (fb > 0)) throw NumericalError("refine_root: interval does not bracket a sign change");
  if (a > b) {
    std::swap(a, b);
    std::swap(fa, fb);
  }
  std::uintmax_t it = static_cast<std::uintmax_t>(max_iter);
  auto tol = [rel_tol](double lo, double hi) {
    if (rel_tol > 0 && hi - lo <= rel_tol * std::max(std::abs(lo), std::abs(hi))) return true;
    return std::nextafter(std::nextafter(lo, hi), hi) >= hi;
  };
  const auto r = boost::math::tools::toms748_solve(f, a, b, fa, fb, tol, it);
  const double x0 = r.first, x1 = r.second;
  const double f0 = f(x0), f1 = f(x1);
  Root out;
  out.evaluations = static_cast<int>(it) + 2;
  if (std::abs(f0) <= std::abs(f1)) {
    out.x = x0;
    out.f = f0;
  } else {
    out.x = x1;
    out.f = f1;
  }
  return out;
}

// Scans outward from `start` in geometrically growing steps and refines the
// sign change closest to `start`. f may throw BelowThreshold outside its
// domain; the scan on that side stops there.
template <class F>
std::optional<Root> nearest_root(F&& f, double start, double h0, int max_doublings = 80) {
  auto eval = [&](double x) -> std::optional<double> {
    try {
      const double v = f(x);
      if (!std::isfinite(v)) return std::nullopt;
      return v;
    } catch (const BelowThreshold&) {
      return std::nullopt;
    }
  };
  const auto f_start = eval(start);
  if (!f_start) return std::nullopt;
  if (*f_start == 0.0) return Root{start, 0.0, 1};
  struct Side {
    double sign;
    double x_prev;
    double f_prev;
    bool alive = true;
  };
  Side sides[2] = {{+1.0, start, *f_start}, {-1.0, start, *f_start}};
  double h = h0;
  for (int k = 0; k < max_doublings; ++k, h *= 2.0) {
    std::optional<std::pair<double, double>> hit[2];
    double hit_f[2][2];
    for (int s = 0; s < 2; ++s) {
      Side& sd = sides[s];
      if (!sd.alive) continue;
      const double x = start + sd.sign * h;
      const auto v = eval(x);
      if (!v) {
        sd.alive = false;
        continue;
      }
      if ((*v > 0) != (sd.f_prev > 0) || *v == 0.0) {
        hit[s] = std::make_pair(sd.x_prev, x);
        hit_f[s][0] = sd.f_prev;
        hit_f[s][1] = *v;
      }
      sd.x_prev = x;
      sd.f_prev = *v;
    }
    if (hit[0] || hit[1]) {
      std::optional<Root> best;
      for (int s = 0; s < 2; ++s) {
        if (!hit[s]) continue;
        Root r = refine_root(f, hit[s]->first, hit[s]->second, hit_f[s][0], hit_f[s][1]);
        if (!best || std::abs(r.x - start) < std::abs(best->x - start)) best = r;
      }
      return best;
    }
    if (!sides[0].alive && !sides[1].alive) break;
  }
  return std::nullopt;
}

// Solves fn(x) = target for x >= 0, where fn decreases away from fn(0) and may
// throw BelowThreshold past some x. Steps up geometrically from x_start.
template <class F>
double solve_decreasing(F&& fn, double target, double x_start, double rel_tol = 0.0) {
  const double f0 = fn(0.0);
  if (target >= f0) {
    if (target == f0) return 0.0;
    std::ostringstream os;
    os << "target " << target << " exceeds the value at zero, " << f0;
    throw UnreachableTarget(os.str());
  }
  double v = 0;
  auto valid = [&](double x) {
    try {
      v = fn(x);
      return std::isfinite(v);
    } catch (const BelowThreshold&) {
      return false;
    }
  };
  double lo = 0.0, f_lo = f0 - target, hi = x_start;
  bool found = false;
  for (int k = 0; k < 400 && !found; ++k) {
    if (valid(hi)) {
      if (v <= target) {
        found = true;
      } else {
        lo = hi;
        f_lo = v - target;
        hi *= 2.0;
      }
      continue;
    }
    double b = hi;
    for (int j = 0; j < 200 && !found && b - lo > 4e-16 * b; ++j) {
      const double mid = 0.5 * (lo + b);
      if (!valid(mid)) {
        b = mid;
      } else if (v <= target) {
        hi = mid;
        found = true;
      } else {
        lo = mid;
        f_lo = v - target;
      }
    }
    break;
  }
  if (!found) {
    std::ostringstream os;
    os << "target " << target << " is not reachable before the lasing threshold";
    throw UnreachableTarget(os.str());
  }
  return refine_root([&](double x) { return fn(x) - target; }, lo, hi, f_lo, v - target, rel_tol).x;
}

}  // namespace dls
