#include "sqcc/channels.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "sqcc/errors.hpp"
#include "sqcc/special.hpp"

namespace sqcc {
namespace {

constexpr double kDegToRad = std::numbers::pi / 180.0;
constexpr double kMinTransmittance = 1e-12;
// Log-irradiance variance at which the scintillation index saturates at 1.
const double kSaturatedLogVariance = std::log(2.0);

double effective_elevation_rad(double elevation_deg) {
  const double e = std::min(elevation_deg, 180.0 - elevation_deg);
  return e * kDegToRad;
}

}  // namespace

double fiber_transmittance(const FiberLink& link) {
  if (!(link.length_km >= 0.0)) throw DomainError("FiberLink.length_km: must be >= 0");
  if (!(link.loss_db_per_km >= 0.0)) throw DomainError("FiberLink.loss_db_per_km: must be >= 0");
  return std::pow(10.0, -link.loss_db_per_km * link.length_km / 10.0);
}

std::string_view to_string(Weather w) { return w == Weather::Good ? "good" : "bad"; }

Weather parse_weather(std::string_view name) {
  if (name == "good") return Weather::Good;
  if (name == "bad") return Weather::Bad;
  throw DomainError("unknown weather preset '" + std::string(name) + "'");
}

SatLink with_weather(SatLink link, Weather w) {
  if (w == Weather::Good) {
    link.visibility_km = 200.0;
    link.cn2 = 1e-16;
  } else {
    link.visibility_km = 20.0;
    link.cn2 = 1e-13;
  }
  return link;
}

void SatLink::validate() const {
  auto positive = [](double x) { return x > 0.0 && std::isfinite(x); };
  auto unit = [](double x) { return x > 0.0 && x <= 1.0; };
  if (!positive(earth_radius_km)) throw DomainError("SatLink.earth_radius_km: must be > 0");
  if (!(altitude_km > ground_altitude_km)) {
    throw DomainError("SatLink.altitude_km: must exceed ground_altitude_km");
  }
  if (!(ground_altitude_km >= 0.0)) throw DomainError("SatLink.ground_altitude_km: must be >= 0");
  if (!positive(tx_aperture_m)) throw DomainError("SatLink.tx_aperture_m: must be > 0");
  if (!positive(rx_aperture_m)) throw DomainError("SatLink.rx_aperture_m: must be > 0");
  if (!unit(tx_efficiency)) throw DomainError("SatLink.tx_efficiency: must be in (0, 1]");
  if (!unit(rx_efficiency)) throw DomainError("SatLink.rx_efficiency: must be in (0, 1]");
  if (!(pointing_loss >= 0.0 && pointing_loss < 1.0)) {
    throw DomainError("SatLink.pointing_loss: must be in [0, 1)");
  }
  if (!positive(atmosphere_km)) throw DomainError("SatLink.atmosphere_km: must be > 0");
  if (!positive(visibility_km)) throw DomainError("SatLink.visibility_km: must be > 0");
  if (!(cn2 >= 0.0)) throw DomainError("SatLink.cn2: must be >= 0");
  if (!(fade_probability > 0.0 && fade_probability < 0.5)) {
    throw DomainError("SatLink.fade_probability: must be in (0, 1/2)");
  }
  if (!positive(wavelength_nm)) throw DomainError("SatLink.wavelength_nm: must be > 0");
  if (!(excess_noise >= 0.0)) throw DomainError("SatLink.excess_noise: must be >= 0");
  if (!(elevation_deg > 0.0 && elevation_deg < 180.0)) {
    throw DomainError("SatLink.elevation_deg: must be in (0, 180)");
  }
  if (!positive(calibration)) throw DomainError("SatLink.calibration: must be > 0");
}

double slant_range_km(const SatLink& link) {
  if (!(link.elevation_deg > 0.0 && link.elevation_deg < 180.0)) {
    throw DomainError("slant_range_km: elevation must be in (0, 180) degrees");
  }
  const double r = link.earth_radius_km + link.ground_altitude_km;
  const double h = link.altitude_km - link.ground_altitude_km;
  const double s = std::sin(effective_elevation_rad(link.elevation_deg));
  return std::sqrt(r * r * s * s + 2.0 * r * h + h * h) - r * s;
}

double extinction_coefficient(double visibility_km, double wavelength_nm) {
  if (!(visibility_km > 0.0)) throw DomainError("extinction_coefficient: visibility must be > 0");
  double q = 0.0;
  if (visibility_km > 50.0) {
    q = 1.6;
  } else if (visibility_km > 6.0) {
    q = 1.3;
  } else if (visibility_km > 1.0) {
    q = 0.16 * visibility_km + 0.34;
  } else if (visibility_km > 0.5) {
    q = visibility_km - 0.5;
  }
  return 3.91 / visibility_km * std::pow(wavelength_nm / 550.0, -q);
}

SatChannel satellite_transmittance(const SatLink& link) {
  link.validate();
  const double slant_m = slant_range_km(link) * 1e3;
  const double lambda_m = link.wavelength_nm * 1e-9;
  const double sin_e = std::sin(effective_elevation_rad(link.elevation_deg));

  SatChannel ch;
  // Gaussian beam from the transmit aperture, collected by the receive aperture.
  const double w0 = 0.5 * link.tx_aperture_m;
  const double z_r = std::numbers::pi * w0 * w0 / lambda_m;
  const double w = w0 * std::sqrt(1.0 + (slant_m / z_r) * (slant_m / z_r));
  const double rx_radius = 0.5 * link.rx_aperture_m;
  ch.diffraction = -std::expm1(-2.0 * rx_radius * rx_radius / (w * w));

  const double path_km = link.atmosphere_km / sin_e;
  ch.atmospheric =
      std::exp(-extinction_coefficient(link.visibility_km, link.wavelength_nm) * path_km);

  const double k = 2.0 * std::numbers::pi / lambda_m;
  const double rytov = 1.23 * link.cn2 * std::pow(k, 7.0 / 6.0) * std::pow(path_km * 1e3, 11.0 / 6.0);
  const double log_var = std::min(rytov, kSaturatedLogVariance);
  const double log_sd = std::sqrt(log_var);
  ch.turbulence = std::min(
      1.0, std::exp(-0.5 * log_var + log_sd * special::normal_quantile(link.fade_probability)));

  const double t = link.calibration * link.tx_efficiency * link.rx_efficiency *
                   (1.0 - link.pointing_loss) * ch.diffraction * ch.atmospheric * ch.turbulence;
  if (!(t >= kMinTransmittance)) {
    throw DegenerateLink("satellite_transmittance: T = " + std::to_string(t) + " at elevation " +
                         std::to_string(link.elevation_deg) + " deg");
  }
  ch.transmittance = std::min(1.0, t);
  ch.excess_noise = link.excess_noise;
  return ch;
}

DutyCycle duty_cycle(std::span<const ElevationRate> rates, double threshold,
                     double total_window) {
  if (rates.empty()) throw EmptyGrid("duty_cycle: no elevation samples");
  if (rates.size() > 2) {
    const double step = rates[1].elevation_deg - rates[0].elevation_deg;
    for (std::size_t i = 2; i < rates.size(); ++i) {
      const double s = rates[i].elevation_deg - rates[i - 1].elevation_deg;
      if (std::abs(s - step) > 1e-6 * std::abs(step)) {
        throw DomainError("duty_cycle: elevation grid is not uniform");
      }
    }
  }
  const auto above = std::count_if(rates.begin(), rates.end(), [&](const ElevationRate& r) {
    return r.key_rate >= threshold;
  });
  DutyCycle d;
  d.fraction = static_cast<double>(above) / static_cast<double>(rates.size());
  d.duration = d.fraction * total_window;
  return d;
}

}  // namespace sqcc
