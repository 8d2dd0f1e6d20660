// sqcc: sweeps, gain optimisation, Monte Carlo validation and duty cycles.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>

#include <omp.h>

#include "CLI11.hpp"
#include "sqcc/config.hpp"
#include "sqcc/errors.hpp"
#include "sqcc/experiments.hpp"
#include "sqcc/mc_oracle.hpp"
#include "sqcc/validation.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitConfig = 2;
constexpr int kExitValidation = 3;

struct CommonFlags {
  std::string config_path;
  std::string preset;
  std::optional<std::uint64_t> seed;
  std::string out;
  int threads = 0;
};

void add_common(CLI::App* cmd, CommonFlags& f) {
  cmd->add_option("--config", f.config_path, "JSON run configuration")->check(CLI::ExistingFile);
  std::vector<std::string> names(std::begin(sqcc::kPresetNames), std::end(sqcc::kPresetNames));
  cmd->add_option("--preset", f.preset, "Named figure preset")->check(CLI::IsMember(names));
  cmd->add_option("--seed", f.seed, "Random seed");
  cmd->add_option("--out", f.out, "Output CSV path (default: stdout)");
  cmd->add_option("--threads", f.threads, "Worker threads (0 = OpenMP default)")
      ->check(CLI::NonNegativeNumber);
}

sqcc::RunConfig resolve(const CommonFlags& f) {
  sqcc::RunConfig cfg = f.preset.empty() ? sqcc::RunConfig{} : sqcc::preset(f.preset);
  if (!f.config_path.empty()) cfg = sqcc::load_config(f.config_path, cfg);
  if (f.seed) cfg.seed = *f.seed;
  if (!f.out.empty()) cfg.output = f.out;
  cfg.validate();
  return cfg;
}

// Writes to cfg.output, or stdout when it is empty.
class Sink {
 public:
  explicit Sink(const std::string& path) {
    if (path.empty()) return;
    file_ = std::make_unique<std::ofstream>(path);
    if (!*file_) throw sqcc::IOError("cannot open " + path + " for writing");
  }
  std::ostream& stream() { return file_ ? *file_ : std::cout; }

 private:
  std::unique_ptr<std::ofstream> file_;
};

void print_cutoffs(const sqcc::RunConfig& cfg, const std::vector<sqcc::SweepRow>& rows) {
  if (cfg.axis.kind != sqcc::AxisKind::Distance || rows.empty()) return;
  auto last = [&](auto&& pick) {
    double x = -1.0;
    for (const auto& r : rows) {
      if (pick(r) > 0.0) x = r.axis;
    }
    return x;
  };
  auto report = [](const std::string& label, double x) {
    if (x < 0.0) {
      std::fprintf(stderr, "cutoff %-22s none\n", label.c_str());
    } else {
      std::fprintf(stderr, "cutoff %-22s %.1f km\n", label.c_str(), x);
    }
  };
  report("fixed", last([](const sqcc::SweepRow& r) { return r.fixed.key_rate; }));
  report("ps", last([](const sqcc::SweepRow& r) { return r.post_selected.key_rate; }));
  report("optV", last([](const sqcc::SweepRow& r) { return r.optimal_variance.key_rate; }));
  for (std::size_t k = 0; k < cfg.block_sizes.size(); ++k) {
    char tag[32];
    std::snprintf(tag, sizeof tag, "N%.0e", cfg.block_sizes[k]);
    report(std::string("fixed_") + tag,
           last([k](const sqcc::SweepRow& r) { return r.finite[k].fixed.key_rate; }));
    report(std::string("ps_") + tag,
           last([k](const sqcc::SweepRow& r) { return r.finite[k].post_selected.key_rate; }));
  }
}

int run_sweep_cmd(const CommonFlags& f, bool quiet) {
  const auto cfg = resolve(f);
  const auto rows = sqcc::run_sweep(cfg, f.threads);
  Sink sink(cfg.output);
  sqcc::write_sweep_csv(sink.stream(), cfg, rows);
  if (!quiet) print_cutoffs(cfg, rows);
  return kExitOk;
}

int run_optimize_cmd(const CommonFlags& f) {
  auto cfg = sqcc::resolve_calibration(resolve(f));
  const auto row = sqcc::evaluate_point(cfg, cfg.axis.kind == sqcc::AxisKind::Gain
                                                 ? cfg.axis.start
                                                 : cfg.point);
  Sink sink(cfg.output);
  if (cfg.axis.kind == sqcc::AxisKind::Gain) cfg.axis.kind = sqcc::AxisKind::Distance;
  sqcc::write_sweep_csv(sink.stream(), cfg, {row});
  return kExitOk;
}

int run_validate_cmd(const CommonFlags& f, std::uint64_t pulses, double fault,
                     const std::string& dump, std::uint64_t dump_pulses) {
  const auto cfg = resolve(f);
  sqcc::mc::SimulationOptions opts;
  opts.pulses = pulses;
  opts.seed = cfg.seed;
  opts.rescale_fault = fault;
  const auto report = sqcc::run_mc_validation(sqcc::default_validation_grid(), opts);
  Sink sink(cfg.output);
  sqcc::write_validation_csv(sink.stream(), report);
  if (!dump.empty()) {
    const auto& pt = sqcc::default_validation_grid().front();
    const auto records = sqcc::mc::simulate_records(pt.protocol, pt.gain, dump_pulses, cfg.seed);
    Sink out(dump);
    sqcc::mc::write_records_csv(out.stream(), records);
  }
  std::size_t failed = 0;
  for (const auto& c : report.checks) failed += c.pass ? 0 : 1;
  std::fprintf(stderr, "mc-validate: %zu checks, %zu failed\n", report.checks.size(), failed);
  return report.all_pass() ? kExitOk : kExitValidation;
}

int run_duty_cmd(const CommonFlags& f) {
  const auto cfg = sqcc::resolve_calibration(resolve(f));
  if (cfg.axis.kind != sqcc::AxisKind::Elevation) {
    throw sqcc::ConfigError("sweep.axis", "duty-cycle needs an elevation_deg sweep");
  }
  const auto rows = sqcc::run_sweep(cfg, f.threads);
  const auto series = sqcc::duty_cycles(cfg, rows);
  Sink sink(cfg.output);
  auto& out = sink.stream();
  out << "series,block_size,post_selected,threshold,fraction,duration_hours\n";
  char line[256];
  for (const auto& s : series) {
    std::snprintf(line, sizeof line, "%s,%.12g,%d,%.12g,%.12g,%.12g\n", s.label.c_str(),
                  s.block_size, s.post_selected ? 1 : 0, cfg.duty_threshold, s.duty.fraction,
                  s.duty.duration);
    out << line;
  }
  std::fprintf(stderr, "calibration T scale: %.6g\n", cfg.channel.calibration.value_or(1.0));
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Key rates and validation for simultaneous quantum-classical CV-QKD"};
  app.require_subcommand(1);

  CommonFlags sweep_flags, opt_flags, mc_flags, duty_flags;
  bool quiet = false;
  auto* sweep = app.add_subcommand("sweep", "Key-rate sweep over distance, elevation or gain");
  add_common(sweep, sweep_flags);
  sweep->add_flag("--quiet", quiet, "Do not print cutoffs to stderr");

  auto* optimize = app.add_subcommand("optimize", "Optimal gain and variance at one point");
  add_common(optimize, opt_flags);

  std::uint64_t pulses = 10'000'000;
  double fault = 1.0;
  std::string dump;
  std::uint64_t dump_pulses = 100'000;
  auto* validate = app.add_subcommand("mc-validate", "Monte Carlo agreement suite");
  add_common(validate, mc_flags);
  validate->add_option("--pulses", pulses, "Pulses per validation point");
  validate->add_option("--inject-rescale-fault", fault,
                       "Multiply the empirical rescaling gain (negative control)");
  validate->add_option("--dump-records", dump, "Write raw pulse records of the first point");
  validate->add_option("--dump-pulses", dump_pulses, "Number of records to dump");

  auto* duty = app.add_subcommand("duty-cycle", "Duty cycles of a satellite elevation sweep");
  add_common(duty, duty_flags);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  const CommonFlags& active = sweep->parsed()      ? sweep_flags
                              : optimize->parsed() ? opt_flags
                              : validate->parsed() ? mc_flags
                                                   : duty_flags;
  if (active.threads > 0) omp_set_num_threads(active.threads);

  try {
    if (sweep->parsed()) return run_sweep_cmd(active, quiet);
    if (optimize->parsed()) return run_optimize_cmd(active);
    if (validate->parsed()) return run_validate_cmd(active, pulses, fault, dump, dump_pulses);
    return run_duty_cmd(active);
  } catch (const sqcc::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kExitConfig;
  } catch (const sqcc::Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitFailure;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitFailure;
  }
}
