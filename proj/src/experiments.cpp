#include "sqcc/experiments.hpp"

#include <cmath>
#include <cstdio>
#include <exception>
#include <limits>
#include <ostream>
#include <string>

#include "sqcc/errors.hpp"
#include "sqcc/finite_size.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace sqcc {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

KeyRateReport infeasible(const ProtocolParams& p, SecurityModel mode, double gain,
                         double block_size) {
  KeyRateReport r;
  r.key_rate = kNaN;
  r.mutual_information = kNaN;
  r.holevo = kNaN;
  r.acceptance = kNaN;
  r.gain = gain;
  r.v_mod = p.v_mod;
  r.block_size = block_size;
  r.mode = mode;
  return r;
}

template <class Fn>
KeyRateReport or_infeasible(const ProtocolParams& p, SecurityModel mode, double gain,
                            double block_size, Fn&& fn) {
  try {
    return fn();
  } catch (const NonPositiveCorrelation&) {
    return infeasible(p, mode, gain, block_size);
  }
}

std::string block_tag(double n) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "N%.0e", n);
  return buf;
}

void put(std::string& line, double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, ",%.12g", v);
  line += buf;
}

SatLink link_at(const RunConfig& cfg, double elevation) {
  SatLink l = cfg.channel.satellite;
  l.elevation_deg = elevation;
  if (cfg.channel.calibration) l.calibration = *cfg.channel.calibration;
  return l;
}

}  // namespace

double calibrate_satellite(const ProtocolParams& protocol, SatLink link, SecurityModel mode,
                           double elevation_deg) {
  link = with_weather(link, Weather::Good);
  link.elevation_deg = elevation_deg;
  link.calibration = 1.0;
  const double raw = satellite_transmittance(link).transmittance;

  auto rate = [&](double t) {
    ProtocolParams p = protocol;
    p.transmittance = t;
    p.excess_noise = link.excess_noise;
    return asymptotic_key_rate(p, 0.0, mode).key_rate;
  };
  // Walk down from T = 1 to the first sign change, then bisect on log T. The
  // rate turns slightly positive again once classical errors saturate at very
  // small T, so a global bracket would pick the wrong root.
  if (rate(1.0) <= 0.0) {
    throw DomainError("calibrate_satellite: no positive fixed-variance rate even at T = 1");
  }
  double hi = 0.0;
  double lo = 0.0;
  const double step = std::log(10.0) / 20.0;
  bool bracketed = false;
  for (double x = -step; x >= std::log(1e-12); x -= step) {
    if (rate(std::exp(x)) <= 0.0) {
      lo = x;
      hi = x + step;
      bracketed = true;
      break;
    }
  }
  if (!bracketed) {
    throw DomainError("calibrate_satellite: fixed-variance rate never vanishes above T = 1e-12");
  }
  for (int i = 0; i < 200 && hi - lo > 1e-14; ++i) {
    const double mid = 0.5 * (lo + hi);
    (rate(std::exp(mid)) > 0.0 ? hi : lo) = mid;
  }
  return std::exp(hi) / raw;
}

RunConfig resolve_calibration(RunConfig cfg) {
  if (cfg.channel.kind == ChannelKind::Satellite && !cfg.channel.calibration) {
    cfg.channel.calibration = calibrate_satellite(cfg.protocol, cfg.channel.satellite, cfg.mode,
                                                  cfg.channel.calibration_elevation_deg);
  }
  return cfg;
}

ProtocolParams protocol_at(const RunConfig& cfg, double axis_value) {
  ProtocolParams p = cfg.protocol;
  const double where = cfg.axis.kind == AxisKind::Gain ? cfg.point : axis_value;
  if (cfg.channel.kind == ChannelKind::Fiber) {
    FiberLink f = cfg.channel.fiber;
    f.length_km = where;
    p.transmittance = fiber_transmittance(f);
  } else {
    const SatChannel ch = satellite_transmittance(link_at(cfg, where));
    p.transmittance = ch.transmittance;
    p.excess_noise = ch.excess_noise;
  }
  return p;
}

SweepRow evaluate_point(const RunConfig& cfg, double axis_value) {
  SweepRow row;
  row.axis = axis_value;
  ProtocolParams p;
  try {
    p = protocol_at(cfg, axis_value);
  } catch (const DegenerateLink&) {
    p = cfg.protocol;
    row.transmittance = 0.0;
    row.excess_noise = cfg.channel.satellite.excess_noise;
    row.fixed = infeasible(p, cfg.mode, 0.0, 0.0);
    row.post_selected = row.fixed;
    row.optimal_variance = row.fixed;
    for (double n : cfg.block_sizes) {
      const auto r = infeasible(p, cfg.mode, 0.0, n);
      row.finite.push_back({n, r, r, r});
    }
    return row;
  }
  row.transmittance = p.transmittance;
  row.excess_noise = p.excess_noise;

  const bool gain_axis = cfg.axis.kind == AxisKind::Gain;
  row.fixed = asymptotic_key_rate(p, 0.0, cfg.mode);
  row.post_selected = gain_axis ? asymptotic_key_rate(p, axis_value, cfg.mode)
                                : optimize_gain(p, cfg.mode, std::nullopt, cfg.gain_search);
  row.optimal_variance =
      optimize_modulation_variance(p, cfg.mode, std::nullopt, cfg.variance_search);

  for (double n : cfg.block_sizes) {
    FiniteSizeParams fs = cfg.finite;
    fs.block_size = n;
    FiniteSizeColumns col;
    col.block_size = n;
    col.fixed = or_infeasible(p, cfg.mode, 0.0, n,
                              [&] { return finite_size_key_rate(p, 0.0, fs, cfg.mode); });
    col.post_selected = or_infeasible(p, cfg.mode, gain_axis ? axis_value : 0.0, n, [&] {
      return gain_axis ? finite_size_key_rate(p, axis_value, fs, cfg.mode)
                       : optimize_gain(p, cfg.mode, fs, cfg.gain_search);
    });
    col.optimal_variance = or_infeasible(p, cfg.mode, 0.0, n, [&] {
      return optimize_modulation_variance(p, cfg.mode, fs, cfg.variance_search);
    });
    row.finite.push_back(col);
  }
  return row;
}

std::vector<SweepRow> run_sweep(const RunConfig& config, int threads) {
  const RunConfig cfg = resolve_calibration(config);
  const auto grid = cfg.axis.values();
  if (grid.empty()) throw ConfigError("sweep", "empty grid");
  std::vector<SweepRow> rows(grid.size());
  std::exception_ptr failure;
  const auto n = static_cast<std::int64_t>(grid.size());

#ifdef _OPENMP
  const int team = threads > 0 ? threads : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic) num_threads(team)
#endif
  for (std::int64_t i = 0; i < n; ++i) {
    try {
      rows[static_cast<std::size_t>(i)] = evaluate_point(cfg, grid[static_cast<std::size_t>(i)]);
    } catch (...) {
#pragma omp critical(sqcc_sweep_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  (void)threads;
  if (failure) std::rethrow_exception(failure);
  return rows;
}

std::vector<SweepRow> run_sweep_serial(const RunConfig& config) {
  const RunConfig cfg = resolve_calibration(config);
  const auto grid = cfg.axis.values();
  if (grid.empty()) throw ConfigError("sweep", "empty grid");
  std::vector<SweepRow> rows;
  rows.reserve(grid.size());
  for (double x : grid) rows.push_back(evaluate_point(cfg, x));
  return rows;
}

void write_sweep_csv(std::ostream& out, const RunConfig& cfg,
                     const std::vector<SweepRow>& rows) {
  std::string header(axis_column(cfg.axis.kind));
  header +=
      ",T,xi,snr,e_c,key_rate_fixed,key_rate_ps,g_opt,P_A,I_AB,I_E,v_opt,key_rate_optV";
  for (double n : cfg.block_sizes) {
    const std::string tag = block_tag(n);
    header += ",key_rate_fixed_" + tag + ",key_rate_ps_" + tag + ",g_opt_" + tag +
              ",v_opt_" + tag + ",key_rate_optV_" + tag;
  }
  out << header << '\n';

  for (const auto& row : rows) {
    char first[40];
    std::snprintf(first, sizeof first, "%.12g", row.axis);
    std::string line = first;
    put(line, row.transmittance);
    put(line, row.excess_noise);
    double snr = kNaN;
    double e_c = kNaN;
    if (row.transmittance > 0.0) {
      ProtocolParams p = cfg.protocol;
      p.transmittance = row.transmittance;
      p.excess_noise = row.excess_noise;
      snr = signal_to_noise(p);
      e_c = classical_bit_error_rate(snr);
    }
    put(line, snr);
    put(line, e_c);
    put(line, row.fixed.key_rate);
    put(line, row.post_selected.key_rate);
    put(line, row.post_selected.gain);
    put(line, row.post_selected.acceptance);
    put(line, row.post_selected.mutual_information);
    put(line, row.post_selected.holevo);
    put(line, row.optimal_variance.v_mod);
    put(line, row.optimal_variance.key_rate);
    for (const auto& col : row.finite) {
      put(line, col.fixed.key_rate);
      put(line, col.post_selected.key_rate);
      put(line, col.post_selected.gain);
      put(line, col.optimal_variance.v_mod);
      put(line, col.optimal_variance.key_rate);
    }
    out << line << '\n';
  }
  if (!out) throw IOError("write_sweep_csv: stream write failed");
}

std::vector<DutySeries> duty_cycles(const RunConfig& cfg, const std::vector<SweepRow>& rows) {
  if (cfg.axis.kind != AxisKind::Elevation) {
    throw ConfigError("sweep.axis", "duty cycles need an elevation sweep");
  }
  auto series = [&](const std::string& label, double n, bool ps, auto&& pick) {
    std::vector<ElevationRate> rates;
    rates.reserve(rows.size());
    for (const auto& row : rows) rates.push_back({row.axis, pick(row)});
    return DutySeries{label, n, ps, duty_cycle(rates, cfg.duty_threshold, cfg.window_hours)};
  };
  std::vector<DutySeries> out;
  out.push_back(series("fixed", 0.0, false, [](const SweepRow& r) { return r.fixed.key_rate; }));
  out.push_back(
      series("ps", 0.0, true, [](const SweepRow& r) { return r.post_selected.key_rate; }));
  for (std::size_t k = 0; k < cfg.block_sizes.size(); ++k) {
    const double n = cfg.block_sizes[k];
    const std::string tag = block_tag(n);
    out.push_back(series("fixed_" + tag, n, false,
                         [k](const SweepRow& r) { return r.finite[k].fixed.key_rate; }));
    out.push_back(series("ps_" + tag, n, true,
                         [k](const SweepRow& r) { return r.finite[k].post_selected.key_rate; }));
  }
  return out;
}

std::optional<double> last_positive(const std::function<double(double)>& rate, double lo,
                                    double hi, double step, double tol) {
  if (!(hi >= lo) || !(step > 0.0)) throw DomainError("last_positive: bad interval");
  const auto n = static_cast<long>(std::floor((hi - lo) / step + 1e-9));
  auto safe = [&](double x) {
    const double v = rate(x);
    return std::isfinite(v) ? v : -1.0;
  };
  long last = -1;
  for (long i = 0; i <= n; ++i) {
    if (safe(lo + static_cast<double>(i) * step) > 0.0) last = i;
  }
  if (last < 0) return std::nullopt;
  double left = lo + static_cast<double>(last) * step;
  if (last == n) return left;
  double right = left + step;
  while (right - left > tol) {
    const double mid = 0.5 * (left + right);
    (safe(mid) > 0.0 ? left : right) = mid;
  }
  return left;
}

}  // namespace sqcc
