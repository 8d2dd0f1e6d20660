#include "sqcc/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <string>

#include "sqcc/errors.hpp"

namespace sqcc {

using nlohmann::json;

ProtocolParams terrestrial_protocol() {
  ProtocolParams p;
  p.v_mod = 7.0;
  p.displacement = 60.0;
  p.excess_noise = 0.05;
  p.efficiency = 0.95;
  p.electronic_noise = 0.01;
  p.reconciliation = 0.95;
  return p;
}

ProtocolParams satellite_protocol() {
  ProtocolParams p;
  p.v_mod = 7.0;
  p.displacement = 50.0;
  p.excess_noise = 0.02;
  p.efficiency = 0.985;
  p.electronic_noise = 0.01;
  p.reconciliation = 0.92;
  return p;
}

std::string_view axis_column(AxisKind kind) {
  switch (kind) {
    case AxisKind::Distance: return "distance_km";
    case AxisKind::Elevation: return "elevation_deg";
    case AxisKind::Gain: return "gain";
  }
  return "axis";
}

std::vector<double> SweepAxis::values() const {
  std::vector<double> out;
  if (!(step > 0.0) || !(stop >= start)) return out;
  const auto n = static_cast<long>(std::floor((stop - start) / step + 1e-9)) + 1;
  out.reserve(static_cast<std::size_t>(n));
  for (long i = 0; i < n; ++i) out.push_back(start + static_cast<double>(i) * step);
  return out;
}

void RunConfig::validate() const {
  auto wrap = [](const char* path, auto&& fn) {
    try {
      fn();
    } catch (const ConfigError&) {
      throw;
    } catch (const Error& e) {
      throw ConfigError(path, e.what());
    }
  };
  wrap("protocol", [&] {
    ProtocolParams p = protocol;
    p.transmittance = 0.5;
    p.validate();
  });
  if (axis.values().empty()) throw ConfigError("sweep", "empty grid");
  if (!(axis.step > 0.0)) throw ConfigError("sweep.step", "must be > 0");
  if (axis.kind == AxisKind::Distance && channel.kind != ChannelKind::Fiber) {
    throw ConfigError("sweep.axis", "distance_km requires a fiber channel");
  }
  if (axis.kind == AxisKind::Elevation) {
    if (channel.kind != ChannelKind::Satellite) {
      throw ConfigError("sweep.axis", "elevation_deg requires a satellite channel");
    }
    if (!(axis.start > 0.0 && axis.stop < 180.0)) {
      throw ConfigError("sweep", "elevations must lie strictly inside (0, 180)");
    }
  }
  if (axis.kind == AxisKind::Distance && !(axis.start >= 0.0)) {
    throw ConfigError("sweep.start", "distance must be >= 0");
  }
  if (axis.kind == AxisKind::Gain && !(axis.start >= 0.0)) {
    throw ConfigError("sweep.start", "gain must be >= 0");
  }
  if (channel.kind == ChannelKind::Satellite) {
    wrap("channel", [&] {
      SatLink l = channel.satellite;
      l.elevation_deg = 90.0;
      if (channel.calibration) l.calibration = *channel.calibration;
      l.validate();
    });
  } else if (!(channel.fiber.loss_db_per_km >= 0.0)) {
    throw ConfigError("channel.fiber_loss_db_per_km", "must be >= 0");
  }
  for (std::size_t i = 0; i < block_sizes.size(); ++i) {
    const std::string path = "finite_size.block_sizes[" + std::to_string(i) + "]";
    wrap(path.c_str(), [&] {
      FiniteSizeParams fs = finite;
      fs.block_size = block_sizes[i];
      fs.validate();
    });
  }
  if (!(gain_search.g_max > 0.0)) throw ConfigError("optimizer.gain_max", "must be > 0");
  if (gain_search.grid_points < 3) throw ConfigError("optimizer.gain_grid_points", "must be >= 3");
  if (!(duty_threshold >= 0.0)) {
    throw ConfigError("duty_cycle.threshold_bits_per_use", "must be >= 0");
  }
  if (!(window_hours > 0.0)) throw ConfigError("duty_cycle.window_hours", "must be > 0");
}

namespace {

RunConfig fiber_base(std::string name) {
  RunConfig c;
  c.name = std::move(name);
  c.protocol = terrestrial_protocol();
  c.protocol.v_mod = 9.0;  // V = 10 SNU
  c.channel.kind = ChannelKind::Fiber;
  c.axis = {AxisKind::Distance, 0.0, 80.0, 0.5};
  c.point = 41.0;
  return c;
}

RunConfig satellite_base(std::string name, Weather w) {
  RunConfig c;
  c.name = std::move(name);
  c.protocol = satellite_protocol();
  c.channel.kind = ChannelKind::Satellite;
  c.channel.weather = w;
  c.channel.satellite = with_weather(SatLink{}, w);
  c.axis = {AxisKind::Elevation, 0.5, 179.5, 0.5};
  c.point = 90.0;
  c.block_sizes = {1e12, 1e11};
  return c;
}

RunConfig untrusted(std::string name, double eta, double v_el) {
  RunConfig c = fiber_base(std::move(name));
  c.mode = SecurityModel::UntrustedReceiver;
  c.protocol.efficiency = eta;
  c.protocol.electronic_noise = v_el;
  return c;
}

// Reads one JSON object, remembering which keys were consumed so that the
// leftovers can be reported.
class ObjectReader {
 public:
  ObjectReader(const json& obj, std::string path) : obj_(obj), path_(std::move(path)) {
    if (!obj_.is_object()) throw ConfigError(path_, "expected an object");
  }

  std::string key_path(const std::string& key) const {
    return path_.empty() ? key : path_ + "." + key;
  }

  bool has(const std::string& key) {
    seen_.insert(key);
    return obj_.contains(key);
  }

  const json& raw(const std::string& key) {
    seen_.insert(key);
    return obj_.at(key);
  }

  void number(const std::string& key, double& out) {
    if (!has(key)) return;
    const json& v = obj_.at(key);
    if (!v.is_number()) throw ConfigError(key_path(key), "expected a number");
    out = v.get<double>();
    if (!std::isfinite(out)) throw ConfigError(key_path(key), "must be finite");
  }

  void integer(const std::string& key, int& out) {
    if (!has(key)) return;
    const json& v = obj_.at(key);
    if (!v.is_number_integer()) throw ConfigError(key_path(key), "expected an integer");
    out = v.get<int>();
  }

  void text(const std::string& key, std::string& out) {
    if (!has(key)) return;
    const json& v = obj_.at(key);
    if (!v.is_string()) throw ConfigError(key_path(key), "expected a string");
    out = v.get<std::string>();
  }

  void finish() const {
    for (auto it = obj_.begin(); it != obj_.end(); ++it) {
      if (!seen_.count(it.key())) throw ConfigError(key_path(it.key()), "unknown key");
    }
  }

 private:
  const json& obj_;
  std::string path_;
  std::set<std::string> seen_;
};

template <class Fn>
auto rethrow_at(const std::string& path, Fn&& fn) {
  try {
    return fn();
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError(path, e.what());
  }
}

void parse_protocol(ObjectReader r, ProtocolParams& p) {
  r.number("v_mod_snu", p.v_mod);
  if (r.has("v_snu")) {
    double v = 0.0;
    r.number("v_snu", v);
    if (r.has("v_mod_snu") && std::abs(v - (p.v_mod + 1.0)) > 1e-12) {
      throw ConfigError(r.key_path("v_snu"), "inconsistent with v_mod_snu (V = V_mod + 1)");
    }
    p.v_mod = v - 1.0;
  }
  r.number("displacement_snu", p.displacement);
  r.number("excess_noise_snu", p.excess_noise);
  r.number("detector_efficiency", p.efficiency);
  r.number("detector_noise_snu", p.electronic_noise);
  r.number("reconciliation_efficiency", p.reconciliation);
  if (r.has("thermal_noise_snu")) {
    double w = 0.0;
    r.number("thermal_noise_snu", w);
    p.thermal_noise = w;
  }
  r.finish();
}

void parse_channel(ObjectReader r, ChannelSpec& ch) {
  std::string type = ch.kind == ChannelKind::Fiber ? "fiber" : "satellite";
  r.text("type", type);
  if (type == "fiber") {
    ch.kind = ChannelKind::Fiber;
  } else if (type == "satellite") {
    ch.kind = ChannelKind::Satellite;
  } else {
    throw ConfigError(r.key_path("type"), "expected 'fiber' or 'satellite'");
  }
  r.number("fiber_loss_db_per_km", ch.fiber.loss_db_per_km);

  if (r.has("weather")) {
    std::string w;
    r.text("weather", w);
    ch.weather = rethrow_at(r.key_path("weather"), [&] { return parse_weather(w); });
    ch.satellite = with_weather(ch.satellite, ch.weather);
  }
  SatLink& s = ch.satellite;
  r.number("earth_radius_km", s.earth_radius_km);
  r.number("satellite_altitude_km", s.altitude_km);
  r.number("ground_station_altitude_km", s.ground_altitude_km);
  r.number("tx_aperture_m", s.tx_aperture_m);
  r.number("rx_aperture_m", s.rx_aperture_m);
  r.number("tx_optics_efficiency", s.tx_efficiency);
  r.number("rx_optics_efficiency", s.rx_efficiency);
  r.number("pointing_loss", s.pointing_loss);
  r.number("atmosphere_thickness_km", s.atmosphere_km);
  r.number("visibility_km", s.visibility_km);
  r.number("cn2_m_minus_2_3", s.cn2);
  r.number("probability_threshold", s.fade_probability);
  r.number("wavelength_nm", s.wavelength_nm);
  r.number("excess_channel_noise_snu", s.excess_noise);
  if (r.has("calibration")) {
    const json& v = r.raw("calibration");
    if (v.is_string() && v.get<std::string>() == "auto") {
      ch.calibration.reset();
    } else if (v.is_number()) {
      ch.calibration = v.get<double>();
    } else {
      throw ConfigError(r.key_path("calibration"), "expected a number or \"auto\"");
    }
  }
  r.number("calibration_elevation_deg", ch.calibration_elevation_deg);
  r.finish();
}

void parse_finite(ObjectReader r, RunConfig& cfg) {
  if (r.has("block_sizes")) {
    const json& v = r.raw("block_sizes");
    if (!v.is_array()) throw ConfigError(r.key_path("block_sizes"), "expected an array");
    cfg.block_sizes.clear();
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (!v[i].is_number()) {
        throw ConfigError(r.key_path("block_sizes") + "[" + std::to_string(i) + "]",
                          "expected a number");
      }
      cfg.block_sizes.push_back(v[i].get<double>());
    }
  }
  r.number("eps_pe", cfg.finite.eps_pe);
  r.number("eps_s", cfg.finite.eps_s);
  r.number("eps_h", cfg.finite.eps_h);
  r.number("eps_ent", cfg.finite.eps_ent);
  r.number("frame_success_probability", cfg.finite.frame_success);
  r.integer("discretization_bits", cfg.finite.discretization_bits);
  r.finish();
}

void parse_sweep(ObjectReader r, RunConfig& cfg) {
  if (r.has("axis")) {
    std::string axis;
    r.text("axis", axis);
    if (axis == "distance_km") {
      cfg.axis.kind = AxisKind::Distance;
    } else if (axis == "elevation_deg") {
      cfg.axis.kind = AxisKind::Elevation;
    } else if (axis == "gain") {
      cfg.axis.kind = AxisKind::Gain;
    } else {
      throw ConfigError(r.key_path("axis"), "expected distance_km, elevation_deg or gain");
    }
  }
  r.number("start", cfg.axis.start);
  r.number("stop", cfg.axis.stop);
  r.number("step", cfg.axis.step);
  r.number("point", cfg.point);
  r.finish();
}

void parse_optimizer(ObjectReader r, RunConfig& cfg) {
  r.number("gain_max", cfg.gain_search.g_max);
  r.integer("gain_grid_points", cfg.gain_search.grid_points);
  r.number("gain_tolerance", cfg.gain_search.tolerance);
  r.number("v_mod_min_snu", cfg.variance_search.v_min);
  r.number("v_mod_max_snu", cfg.variance_search.v_max);
  r.integer("v_mod_grid_points", cfg.variance_search.grid_points);
  r.finish();
}

}  // namespace

RunConfig preset(std::string_view name) {
  if (name == "fig2") return fiber_base("fig2");
  if (name == "fig3") {
    RunConfig c = fiber_base("fig3");
    c.block_sizes = {1e10, 1e11};
    return c;
  }
  if (name == "fig4-good") return satellite_base("fig4-good", Weather::Good);
  if (name == "fig4-bad") return satellite_base("fig4-bad", Weather::Bad);
  if (name == "fig5a") return untrusted("fig5a", 0.95, 0.01);
  if (name == "fig5b") return untrusted("fig5b", 0.99, 0.01);
  if (name == "fig5c") return untrusted("fig5c", 0.95, 0.001);
  if (name == "fig5d") return untrusted("fig5d", 0.99, 0.001);
  throw ConfigError("preset", "unknown preset '" + std::string(name) + "'");
}

RunConfig parse_config(const json& doc, RunConfig base) {
  RunConfig cfg = std::move(base);
  ObjectReader root(doc, "");
  if (root.has("preset")) {
    std::string name;
    root.text("preset", name);
    cfg = preset(name);
  }
  root.text("name", cfg.name);
  if (root.has("protocol")) parse_protocol(ObjectReader(root.raw("protocol"), "protocol"), cfg.protocol);
  if (root.has("security_model")) {
    std::string m;
    root.text("security_model", m);
    cfg.mode = rethrow_at("security_model", [&] { return parse_security_model(m); });
  }
  if (root.has("channel")) parse_channel(ObjectReader(root.raw("channel"), "channel"), cfg.channel);
  if (root.has("finite_size")) parse_finite(ObjectReader(root.raw("finite_size"), "finite_size"), cfg);
  if (root.has("sweep")) parse_sweep(ObjectReader(root.raw("sweep"), "sweep"), cfg);
  if (root.has("optimizer")) parse_optimizer(ObjectReader(root.raw("optimizer"), "optimizer"), cfg);
  if (root.has("duty_cycle")) {
    ObjectReader r(root.raw("duty_cycle"), "duty_cycle");
    r.number("threshold_bits_per_use", cfg.duty_threshold);
    r.number("window_hours", cfg.window_hours);
    r.finish();
  }
  if (root.has("seed")) {
    const json& v = root.raw("seed");
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0)) {
      throw ConfigError("seed", "expected a non-negative integer");
    }
    cfg.seed = v.get<std::uint64_t>();
  }
  root.text("output", cfg.output);
  root.finish();
  cfg.validate();
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path, RunConfig base) {
  std::ifstream in(path);
  if (!in) throw IOError("cannot open config file " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("", std::string("malformed JSON: ") + e.what());
  }
  return parse_config(doc, std::move(base));
}

json to_json(const RunConfig& cfg) {
  const auto& p = cfg.protocol;
  json j;
  j["name"] = cfg.name;
  j["protocol"] = {{"v_mod_snu", p.v_mod},
                   {"displacement_snu", p.displacement},
                   {"excess_noise_snu", p.excess_noise},
                   {"detector_efficiency", p.efficiency},
                   {"detector_noise_snu", p.electronic_noise},
                   {"reconciliation_efficiency", p.reconciliation}};
  if (p.thermal_noise) j["protocol"]["thermal_noise_snu"] = *p.thermal_noise;
  j["security_model"] = std::string(to_string(cfg.mode));
  if (cfg.channel.kind == ChannelKind::Fiber) {
    j["channel"] = {{"type", "fiber"}, {"fiber_loss_db_per_km", cfg.channel.fiber.loss_db_per_km}};
  } else {
    const auto& s = cfg.channel.satellite;
    j["channel"] = {{"type", "satellite"},
                    {"weather", std::string(to_string(cfg.channel.weather))},
                    {"earth_radius_km", s.earth_radius_km},
                    {"satellite_altitude_km", s.altitude_km},
                    {"ground_station_altitude_km", s.ground_altitude_km},
                    {"tx_aperture_m", s.tx_aperture_m},
                    {"rx_aperture_m", s.rx_aperture_m},
                    {"tx_optics_efficiency", s.tx_efficiency},
                    {"rx_optics_efficiency", s.rx_efficiency},
                    {"pointing_loss", s.pointing_loss},
                    {"atmosphere_thickness_km", s.atmosphere_km},
                    {"visibility_km", s.visibility_km},
                    {"cn2_m_minus_2_3", s.cn2},
                    {"probability_threshold", s.fade_probability},
                    {"wavelength_nm", s.wavelength_nm},
                    {"excess_channel_noise_snu", s.excess_noise},
                    {"calibration_elevation_deg", cfg.channel.calibration_elevation_deg}};
    if (cfg.channel.calibration) {
      j["channel"]["calibration"] = *cfg.channel.calibration;
    } else {
      j["channel"]["calibration"] = "auto";
    }
  }
  j["finite_size"] = {{"block_sizes", cfg.block_sizes},
                      {"eps_pe", cfg.finite.eps_pe},
                      {"eps_s", cfg.finite.eps_s},
                      {"eps_h", cfg.finite.eps_h},
                      {"eps_ent", cfg.finite.eps_ent},
                      {"frame_success_probability", cfg.finite.frame_success},
                      {"discretization_bits", cfg.finite.discretization_bits}};
  j["sweep"] = {{"axis", std::string(axis_column(cfg.axis.kind))},
                {"start", cfg.axis.start},
                {"stop", cfg.axis.stop},
                {"step", cfg.axis.step},
                {"point", cfg.point}};
  j["optimizer"] = {{"gain_max", cfg.gain_search.g_max},
                    {"gain_grid_points", cfg.gain_search.grid_points},
                    {"gain_tolerance", cfg.gain_search.tolerance},
                    {"v_mod_min_snu", cfg.variance_search.v_min},
                    {"v_mod_max_snu", cfg.variance_search.v_max},
                    {"v_mod_grid_points", cfg.variance_search.grid_points}};
  j["duty_cycle"] = {{"threshold_bits_per_use", cfg.duty_threshold},
                     {"window_hours", cfg.window_hours}};
  j["seed"] = cfg.seed;
  j["output"] = cfg.output;
  return j;
}

}  // namespace sqcc
