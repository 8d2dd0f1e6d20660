#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "sqcc/mc_oracle.hpp"
#include "sqcc/model.hpp"

namespace sqcc {

struct ValidationPoint {
  std::string label;
  ProtocolParams protocol;
  double gain = 0.0;
  bool covariance = true;      ///< compare the post-selected matrix
  bool classical = true;       ///< compare e_C, SNR and N_d
};

struct ValidationCheck {
  std::string point;
  std::string quantity;
  double analytic = 0.0;
  double empirical = 0.0;
  double stderr_ = 0.0;
  double z = 0.0;
  bool pass = false;
};

struct ValidationReport {
  std::vector<ValidationCheck> checks;
  bool all_pass() const;
};

/// Five points at the terrestrial parameters with T spanning [0.03, 1] and
/// g in {0, 0.25, 0.8}, plus two reduced-displacement points where classical
/// errors are frequent enough to test e_C, SNR and N_d.
std::vector<ValidationPoint> default_validation_grid();

/// Runs the Monte Carlo oracle at every point and compares it to the
/// analytic pipeline at `sigmas` standard errors.
ValidationReport run_mc_validation(const std::vector<ValidationPoint>& grid,
                                   const mc::SimulationOptions& opts, double sigmas = 3.0);

void write_validation_csv(std::ostream& out, const ValidationReport& report);

}  // namespace sqcc
