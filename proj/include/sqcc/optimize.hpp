#pragma once

#include <functional>
#include <optional>

#include "sqcc/finite_size.hpp"
#include "sqcc/keyrate.hpp"
#include "sqcc/model.hpp"

namespace sqcc {

struct ScalarMaximum {
  double x = 0.0;
  double value = 0.0;
};

/// Maximises f on [lo, hi]: best of an evenly spaced grid, then golden-section
/// search on the bracket around it until the bracket is narrower than `tol`.
/// Points where f throws NonPositiveCorrelation are treated as infeasible.
ScalarMaximum grid_golden_maximize(const std::function<double(double)>& f, double lo,
                                   double hi, int grid_points, double tol);

struct GainSearch {
  double g_max = 3.0;
  int grid_points = 64;
  double tolerance = 1e-4;
};

/// Filter gain maximising the asymptotic rate, or the finite-size rate when
/// `fs` is given. g = 0 is always a candidate, so the result never falls below
/// the unfiltered rate.
KeyRateReport optimize_gain(const ProtocolParams& p, SecurityModel mode,
                            const std::optional<FiniteSizeParams>& fs = std::nullopt,
                            const GainSearch& search = {},
                            const FiniteSizeCorrections& corrections =
                                FiniteSizeCorrections::standard());

struct VarianceSearch {
  double v_min = 1e-3;
  double v_max = 100.0;
  int grid_points = 64;
  double tolerance = 1e-6;  ///< on log(V_mod)
};

/// Unfiltered rate maximised over the modulation variance (log-spaced search).
/// The configured p.v_mod is always a candidate.
KeyRateReport optimize_modulation_variance(
    const ProtocolParams& p, SecurityModel mode,
    const std::optional<FiniteSizeParams>& fs = std::nullopt,
    const VarianceSearch& search = {},
    const FiniteSizeCorrections& corrections = FiniteSizeCorrections::standard());

}  // namespace sqcc
