#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "sqcc/channels.hpp"
#include "sqcc/finite_size.hpp"
#include "sqcc/keyrate.hpp"
#include "sqcc/model.hpp"
#include "sqcc/optimize.hpp"

namespace sqcc {

/// Terrestrial defaults: V_mod 7, d 60, xi 0.05, eta 0.95, v_el 0.01, beta 0.95.
ProtocolParams terrestrial_protocol();
/// Satellite defaults: V_mod 7, d 50, eta 0.985, v_el 0.01, beta 0.92.
ProtocolParams satellite_protocol();

enum class ChannelKind { Fiber, Satellite };
enum class AxisKind { Distance, Elevation, Gain };

std::string_view axis_column(AxisKind kind);

struct ChannelSpec {
  ChannelKind kind = ChannelKind::Fiber;
  FiberLink fiber;
  SatLink satellite;
  Weather weather = Weather::Good;
  /// Fixed T scale for the satellite link. When absent it is fitted so that
  /// the fixed-variance asymptotic rate in good weather vanishes at
  /// `calibration_elevation_deg`.
  std::optional<double> calibration;
  double calibration_elevation_deg = 18.0;
};

struct SweepAxis {
  AxisKind kind = AxisKind::Distance;
  double start = 0.0;
  double stop = 80.0;
  double step = 0.5;

  /// Grid values start, start + step, ... <= stop (+ 1e-9 slack).
  std::vector<double> values() const;
};

struct RunConfig {
  std::string name = "custom";
  ProtocolParams protocol = terrestrial_protocol();
  ChannelSpec channel;
  SecurityModel mode = SecurityModel::TrustedReceiver;
  /// Finite-size block sizes to evaluate alongside the asymptotic rate.
  std::vector<double> block_sizes;
  FiniteSizeParams finite;  ///< block_size is overridden per entry of block_sizes
  SweepAxis axis;
  /// Distance (km) or elevation (deg) held fixed on a gain sweep, or the
  /// evaluation point of `optimize`.
  double point = 41.0;
  GainSearch gain_search;
  VarianceSearch variance_search;
  double duty_threshold = 1e-4;
  double window_hours = 3.0;
  std::uint64_t seed = 1;
  std::string output;

  void validate() const;
};

inline constexpr std::string_view kPresetNames[] = {
    "fig2", "fig3", "fig4-good", "fig4-bad", "fig5a", "fig5b", "fig5c", "fig5d"};

/// Throws ConfigError for unknown names.
RunConfig preset(std::string_view name);

/// Reads a JSON key-value tree. Unknown keys and out-of-range values raise
/// ConfigError with the dotted key path. Missing keys take the defaults of
/// `base`.
RunConfig parse_config(const nlohmann::json& doc, RunConfig base = {});
RunConfig load_config(const std::filesystem::path& path, RunConfig base = {});

nlohmann::json to_json(const RunConfig& cfg);

}  // namespace sqcc
