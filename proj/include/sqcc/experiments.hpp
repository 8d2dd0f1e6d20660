#pragma once

#include <functional>
#include <iosfwd>
#include <optional>
#include <vector>

#include "sqcc/config.hpp"
#include "sqcc/keyrate.hpp"

namespace sqcc {

struct FiniteSizeColumns {
  double block_size = 0.0;
  KeyRateReport fixed;
  KeyRateReport post_selected;
  KeyRateReport optimal_variance;
};

struct SweepRow {
  double axis = 0.0;
  double transmittance = 0.0;
  double excess_noise = 0.0;
  KeyRateReport fixed;             ///< g = 0 at the configured V_mod
  KeyRateReport post_selected;     ///< optimised gain (or the axis gain)
  KeyRateReport optimal_variance;  ///< unfiltered, V_mod optimised
  std::vector<FiniteSizeColumns> finite;
};

/// Satellite T scale that puts the fixed-variance asymptotic zero crossing
/// (good weather) at `elevation_deg`.
double calibrate_satellite(const ProtocolParams& protocol, SatLink link,
                           SecurityModel mode, double elevation_deg);

/// The config with its satellite calibration resolved.
RunConfig resolve_calibration(RunConfig cfg);

/// Protocol parameters at one axis value (distance, elevation, or the fixed
/// point of a gain sweep).
ProtocolParams protocol_at(const RunConfig& cfg, double axis_value);

SweepRow evaluate_point(const RunConfig& cfg, double axis_value);

/// Grid points dispatched with OpenMP; rows come back in axis order.
std::vector<SweepRow> run_sweep(const RunConfig& cfg, int threads = 0);
/// Single-threaded reference.
std::vector<SweepRow> run_sweep_serial(const RunConfig& cfg);

void write_sweep_csv(std::ostream& out, const RunConfig& cfg,
                     const std::vector<SweepRow>& rows);

struct DutySeries {
  std::string label;  ///< e.g. "ps_N1e+11"
  double block_size = 0.0;
  bool post_selected = false;
  DutyCycle duty;
};

/// Duty cycle of every fixed / post-selected series of an elevation sweep.
std::vector<DutySeries> duty_cycles(const RunConfig& cfg, const std::vector<SweepRow>& rows);

/// Largest x in [lo, hi] where rate(x) > 0, located on a `step` grid and then
/// refined by bisection. nullopt if the rate is never positive.
std::optional<double> last_positive(const std::function<double(double)>& rate, double lo,
                                    double hi, double step, double tol = 1e-4);

}  // namespace sqcc
