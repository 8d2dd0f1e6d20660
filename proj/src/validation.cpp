#include "sqcc/validation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "sqcc/config.hpp"
#include "sqcc/errors.hpp"
#include "sqcc/postselection.hpp"

namespace sqcc {
namespace {

ValidationCheck compare(const std::string& point, const std::string& quantity, double analytic,
                        const mc::Estimate& empirical, double sigmas) {
  ValidationCheck c;
  c.point = point;
  c.quantity = quantity;
  c.analytic = analytic;
  c.empirical = empirical.value;
  c.stderr_ = empirical.stderr_;
  const double diff = empirical.value - analytic;
  if (c.stderr_ > 0.0) {
    c.z = diff / c.stderr_;
    c.pass = std::abs(c.z) <= sigmas;
  } else {
    // Degenerate sampling distribution (P_A = 1 at g = 0): demand equality.
    c.z = 0.0;
    c.pass = std::abs(diff) <= 1e-12 * std::max(1.0, std::abs(analytic));
  }
  return c;
}

ValidationPoint table_point(std::string label, double t, double gain) {
  ValidationPoint v;
  v.label = std::move(label);
  v.protocol = terrestrial_protocol();
  v.protocol.transmittance = t;
  v.gain = gain;
  v.classical = false;
  return v;
}

ValidationPoint noisy_decoding_point(std::string label, double t, double target_error) {
  ValidationPoint v;
  v.label = std::move(label);
  v.protocol = terrestrial_protocol();
  v.protocol.transmittance = t;
  v.protocol.displacement = min_displacement(v.protocol, target_error);
  v.gain = 0.0;
  v.covariance = false;
  return v;
}

}  // namespace

bool ValidationReport::all_pass() const {
  if (checks.empty()) return false;
  for (const auto& c : checks) {
    if (!c.pass) return false;
  }
  return true;
}

std::vector<ValidationPoint> default_validation_grid() {
  return {
      table_point("T1.00_g0.00", 1.0, 0.0),
      table_point("T0.50_g0.25", 0.5, 0.25),
      table_point("T0.20_g0.80", 0.2, 0.8),
      table_point("T0.10_g0.25", 0.1, 0.25),
      table_point("T0.03_g0.80", 0.03, 0.8),
      noisy_decoding_point("T0.10_eC0.05", 0.1, 0.05),
      noisy_decoding_point("T0.50_eC0.02", 0.5, 0.02),
  };
}

ValidationReport run_mc_validation(const std::vector<ValidationPoint>& grid,
                                   const mc::SimulationOptions& opts, double sigmas) {
  if (grid.empty()) throw EmptyGrid("run_mc_validation: no validation points");
  ValidationReport report;
  for (const auto& pt : grid) {
    const auto block = mc::simulate_block(pt.protocol, pt.gain, opts);
    const auto state = post_selected_pipeline(pt.protocol, pt.gain);
    const double n = static_cast<double>(block.stats.pulses);
    const auto add = [&](const char* q, double analytic, const mc::Estimate& e) {
      report.checks.push_back(compare(pt.label, q, analytic, e, sigmas));
    };

    const double pa = state.acceptance;
    add("P_A", pa, {block.acceptance.value, std::sqrt(pa * (1.0 - pa) / n)});
    add("snr", state.derived.snr, block.snr);

    if (pt.covariance) {
      const double v_tilde = effective_modulation_variance(pt.gain, pt.protocol.v_mod);
      add("V_mod_accepted", v_tilde, block.v_mod_accepted);
      add("bob_second_moment", state.data.b + 1.0, block.bob_second_moment);
      add("cross_moment", state.data.c * std::sqrt(v_tilde / (v_tilde + 2.0)),
          block.cross_moment);
    }
    if (pt.classical) {
      const double ec = state.derived.e_c;
      add("e_C", ec, {block.bit_error_rate.value, std::sqrt(ec * (1.0 - ec) / (2.0 * n))});
      add("N_d", state.derived.n_d, block.rescaling_gain);
    }
  }
  return report;
}

void write_validation_csv(std::ostream& out, const ValidationReport& report) {
  out << "point,quantity,analytic,empirical,stderr,z,pass\n";
  char line[320];
  for (const auto& c : report.checks) {
    std::snprintf(line, sizeof line, "%s,%s,%.12g,%.12g,%.6g,%.4f,%d\n", c.point.c_str(),
                  c.quantity.c_str(), c.analytic, c.empirical, c.stderr_, c.z, c.pass ? 1 : 0);
    out << line;
  }
  if (!out) throw IOError("write_validation_csv: stream write failed");
}

}  // namespace sqcc
