#pragma once

#include <span>
#include <string_view>

namespace sqcc {

struct FiberLink {
  double length_km = 0.0;
  double loss_db_per_km = 0.2;
};

/// 10^(-loss * length / 10).
double fiber_transmittance(const FiberLink& link);

enum class Weather { Good, Bad };

std::string_view to_string(Weather w);
Weather parse_weather(std::string_view name);

/// Satellite-to-ground downlink. Defaults are the low-Earth-orbit scenario:
/// 500 km altitude, ground station at sea level, 1550 nm.
struct SatLink {
  double earth_radius_km = 6371.0;
  double altitude_km = 500.0;          ///< satellite altitude at zenith
  double ground_altitude_km = 0.0;     ///< optical ground station altitude
  double tx_aperture_m = 0.3;
  double rx_aperture_m = 1.0;
  double tx_efficiency = 0.95;
  double rx_efficiency = 0.95;
  double pointing_loss = 0.1;          ///< fraction lost to pointing error
  double atmosphere_km = 20.0;
  double visibility_km = 200.0;
  double cn2 = 1e-16;                  ///< refractive-index structure parameter, m^(-2/3)
  double fade_probability = 1e-6;      ///< p_th, quantile of the worst-case fade
  double wavelength_nm = 1550.0;
  double excess_noise = 0.02;          ///< channel excess noise, elevation independent
  double elevation_deg = 90.0;         ///< 0..180, 90 = zenith
  double calibration = 1.0;            ///< multiplicative scale on T

  void validate() const;
};

/// Visibility and turbulence of the named weather preset.
SatLink with_weather(SatLink link, Weather w);

/// Distance from the ground station to the satellite. The geometry is mirrored
/// about 90 degrees. DomainError at exactly 0 or 180 degrees.
double slant_range_km(const SatLink& link);

struct SatChannel {
  double transmittance = 0.0;
  double excess_noise = 0.0;
  double diffraction = 0.0;   ///< aperture collection fraction
  double atmospheric = 0.0;   ///< extinction
  double turbulence = 0.0;    ///< worst-case scintillation fade
};

/// Link budget at the link's elevation. Throws DegenerateLink when T < 1e-12.
SatChannel satellite_transmittance(const SatLink& link);

/// Kim-model extinction coefficient (1/km) at the given wavelength.
double extinction_coefficient(double visibility_km, double wavelength_nm);

struct ElevationRate {
  double elevation_deg = 0.0;
  double key_rate = 0.0;
};

struct DutyCycle {
  double fraction = 0.0;
  double duration = 0.0;  ///< same unit as the window passed in
};

/// Fraction of a uniform elevation grid whose rate reaches `threshold`; the
/// pass is mapped linearly onto `total_window`. Throws EmptyGrid on no samples
/// and DomainError when the grid is not uniform.
DutyCycle duty_cycle(std::span<const ElevationRate> rates, double threshold,
                     double total_window);

}  // namespace sqcc
