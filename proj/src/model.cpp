#include "sqcc/model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "sqcc/errors.hpp"
#include "sqcc/special.hpp"

namespace sqcc {
namespace {

void require(bool ok, const char* field, const char* rule) {
  if (!ok) {
    std::ostringstream msg;
    msg << "ProtocolParams." << field << ": " << rule;
    throw DomainError(msg.str());
  }
}

bool finite(double x) { return std::isfinite(x); }

}  // namespace

void ProtocolParams::validate() const {
  require(finite(v_mod) && v_mod > 0.0, "v_mod", "must be > 0");
  require(finite(displacement) && displacement >= 0.0, "displacement", "must be >= 0");
  require(finite(transmittance) && transmittance > 0.0 && transmittance <= 1.0,
          "transmittance", "must be in (0, 1]");
  require(finite(excess_noise) && excess_noise >= 0.0, "excess_noise", "must be >= 0");
  require(finite(efficiency) && efficiency > 0.0 && efficiency <= 1.0, "efficiency",
          "must be in (0, 1]");
  require(finite(electronic_noise) && electronic_noise >= 0.0, "electronic_noise",
          "must be >= 0");
  require(finite(reconciliation) && reconciliation >= 0.0 && reconciliation < 1.0,
          "reconciliation", "must be in [0, 1)");
  if (thermal_noise) {
    require(finite(*thermal_noise) && *thermal_noise >= 1.0, "thermal_noise", "must be >= 1");
  }
}

double ProtocolParams::thermal_term() const noexcept {
  const double t = transmittance;
  if (thermal_noise) return (1.0 - t) * *thermal_noise;
  return excess_noise * t + (1.0 - t);
}

ProtocolParams ProtocolParams::ideal_detector() const {
  ProtocolParams q = *this;
  q.efficiency = 1.0;
  q.electronic_noise = 0.0;
  return q;
}

double bob_variance(const ProtocolParams& p, double v_eff) {
  const double t = p.transmittance;
  const double eta = p.efficiency;
  return eta * (t * v_eff + p.thermal_term()) + (1.0 - eta) + 2.0 * p.electronic_noise;
}

double signal_to_noise(const ProtocolParams& p) {
  p.validate();
  const double alpha = std::sqrt(p.efficiency * p.transmittance) * p.displacement;
  return alpha * alpha / (bob_variance(p, p.variance()) + 1.0);
}

double classical_bit_error_rate(double snr) {
  if (!(snr >= 0.0)) throw DomainError("classical_bit_error_rate: snr must be >= 0");
  return 0.5 * std::erfc(0.5 * std::sqrt(snr));
}

double correlation_decay(double snr) {
  if (!(snr >= 0.0)) throw DomainError("correlation_decay: snr must be >= 0");
  return std::sqrt(snr / std::numbers::pi) * std::exp(-0.25 * snr);
}

double rescaling_gain(const SqccDerived& sd) {
  const double a2 = sd.alpha * sd.alpha;
  const double v_bd = sd.v_b + 2.0 * a2 * sd.e_c - 2.0 * (sd.v_b + 1.0) * sd.delta -
                      2.0 * a2 * sd.e_c * sd.e_c;
  if (!(v_bd > -1.0)) {
    std::ostringstream msg;
    msg << "rescaling_gain: V_bd = " << v_bd << " <= -1";
    throw NonPhysicalRescale(msg.str());
  }
  return std::sqrt((sd.v_b + 1.0) / (v_bd + 1.0));
}

SqccDerived derive(const ProtocolParams& p) {
  p.validate();
  SqccDerived sd;
  sd.alpha = std::sqrt(p.efficiency * p.transmittance) * p.displacement;
  sd.v_b = bob_variance(p, p.variance());
  sd.snr = sd.alpha * sd.alpha / (sd.v_b + 1.0);
  sd.e_c = classical_bit_error_rate(sd.snr);
  sd.delta = correlation_decay(sd.snr);
  const double a2 = sd.alpha * sd.alpha;
  sd.v_bd = sd.v_b + 2.0 * a2 * sd.e_c - 2.0 * (sd.v_b + 1.0) * sd.delta -
            2.0 * a2 * sd.e_c * sd.e_c;
  sd.n_d = rescaling_gain(sd);
  return sd;
}

TwoModeCM build_data_cm(const ProtocolParams& p, const SqccDerived& sd, double v_eff) {
  if (!(v_eff >= 1.0 - kPhysicalTolerance)) {
    throw DomainError("build_data_cm: effective variance below vacuum");
  }
  const double v2m1 = std::max(0.0, v_eff * v_eff - 1.0);
  TwoModeCM cm;
  cm.a = v_eff;
  cm.b = bob_variance(p, v_eff);
  cm.c = sd.n_d * std::sqrt(p.efficiency * p.transmittance * v2m1) * (1.0 - sd.delta);
  return cm;
}

TwoModeCM build_eve_cm(const ProtocolParams& p, double v_eff) {
  const ProtocolParams ideal = p.ideal_detector();
  return build_data_cm(ideal, derive(ideal), v_eff);
}

double min_displacement(const ProtocolParams& p, double target_error_rate) {
  if (!(target_error_rate > 0.0 && target_error_rate < 0.5)) {
    throw DomainError("min_displacement: target bit-error rate must be in (0, 1/2)");
  }
  p.validate();
  const double v_b = bob_variance(p, p.variance());
  return 2.0 * special::erfc_inv(2.0 * target_error_rate) *
         std::sqrt((v_b + 1.0) / p.transmittance);
}

}  // namespace sqcc
