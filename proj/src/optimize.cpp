#include "sqcc/optimize.hpp"

#include <cmath>
#include <limits>
#include <vector>

#include "sqcc/errors.hpp"

namespace sqcc {
namespace {

constexpr double kInfeasible = -std::numeric_limits<double>::infinity();

double guarded(const std::function<double(double)>& f, double x) {
  try {
    return f(x);
  } catch (const NonPositiveCorrelation&) {
    return kInfeasible;
  }
}

}  // namespace

ScalarMaximum grid_golden_maximize(const std::function<double(double)>& f, double lo,
                                   double hi, int grid_points, double tol) {
  if (!(hi > lo) || grid_points < 3) {
    throw DomainError("grid_golden_maximize: need hi > lo and at least 3 grid points");
  }
  const double h = (hi - lo) / (grid_points - 1);
  std::vector<double> values(grid_points);
  int best = 0;
  for (int i = 0; i < grid_points; ++i) {
    values[i] = guarded(f, lo + i * h);
    if (values[i] > values[best]) best = i;
  }
  ScalarMaximum result{lo + best * h, values[best]};

  // Golden-section on the bracket around the best grid point.
  double left = lo + std::max(0, best - 1) * h;
  double right = lo + std::min(grid_points - 1, best + 1) * h;
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = right - inv_phi * (right - left);
  double x2 = left + inv_phi * (right - left);
  double f1 = guarded(f, x1);
  double f2 = guarded(f, x2);
  while (right - left > tol) {
    if (f1 < f2) {
      left = x1;
      x1 = x2;
      f1 = f2;
      x2 = left + inv_phi * (right - left);
      f2 = guarded(f, x2);
    } else {
      right = x2;
      x2 = x1;
      f2 = f1;
      x1 = right - inv_phi * (right - left);
      f1 = guarded(f, x1);
    }
  }
  if (f1 > result.value) result = {x1, f1};
  if (f2 > result.value) result = {x2, f2};
  return result;
}

KeyRateReport optimize_gain(const ProtocolParams& p, SecurityModel mode,
                            const std::optional<FiniteSizeParams>& fs,
                            const GainSearch& search,
                            const FiniteSizeCorrections& corrections) {
  auto report_at = [&](double g) {
    return fs ? finite_size_key_rate(p, g, *fs, mode, corrections)
              : asymptotic_key_rate(p, g, mode);
  };
  const auto best = grid_golden_maximize([&](double g) { return report_at(g).key_rate; }, 0.0,
                                         search.g_max, search.grid_points, search.tolerance);
  if (best.value == kInfeasible) {
    // Nothing feasible: surface the g = 0 failure to the caller.
    return report_at(0.0);
  }
  return report_at(best.x);
}

KeyRateReport optimize_modulation_variance(const ProtocolParams& p, SecurityModel mode,
                                           const std::optional<FiniteSizeParams>& fs,
                                           const VarianceSearch& search,
                                           const FiniteSizeCorrections& corrections) {
  if (!(search.v_min > 0.0 && search.v_max > search.v_min)) {
    throw DomainError("optimize_modulation_variance: need 0 < v_min < v_max");
  }
  auto report_at = [&](double v_mod) {
    ProtocolParams q = p;
    q.v_mod = v_mod;
    return fs ? finite_size_key_rate(q, 0.0, *fs, mode, corrections)
              : asymptotic_key_rate(q, 0.0, mode);
  };
  const auto best = grid_golden_maximize(
      [&](double log_v) { return report_at(std::exp(log_v)).key_rate; }, std::log(search.v_min),
      std::log(search.v_max), search.grid_points, search.tolerance);

  double v_best = std::exp(best.x);
  double value = best.value;
  if (p.v_mod >= search.v_min && p.v_mod <= search.v_max) {
    const double at_nominal = guarded([&](double v) { return report_at(v).key_rate; }, p.v_mod);
    if (at_nominal > value) {
      v_best = p.v_mod;
      value = at_nominal;
    }
  }
  if (value == kInfeasible) return report_at(p.v_mod);
  return report_at(v_best);
}

}  // namespace sqcc
