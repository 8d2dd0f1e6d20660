#pragma once

#include <optional>

#include "sqcc/gaussian.hpp"

namespace sqcc {

/// Alice, channel and Bob configuration. Variances in SNU, displacement in
/// sqrt(SNU).
struct ProtocolParams {
  double v_mod = 9.0;            ///< Alice's Gaussian modulation variance
  double displacement = 60.0;    ///< classical displacement magnitude d
  double transmittance = 1.0;    ///< channel transmittance T in (0, 1]
  double excess_noise = 0.0;     ///< excess noise xi
  double efficiency = 1.0;       ///< detector efficiency eta in (0, 1]
  double electronic_noise = 0.0; ///< detector noise v_el
  double reconciliation = 0.95;  ///< reconciliation efficiency beta in [0, 1)
  /// Explicit thermal noise W; derived from xi when absent.
  std::optional<double> thermal_noise;

  /// Throws DomainError naming the offending field.
  void validate() const;

  /// V = V_mod + 1.
  double variance() const noexcept { return v_mod + 1.0; }
  /// (1 - T) W, the thermal variance the channel mixes in. With
  /// W = xi T / (1 - T) + 1 this is xi T + 1 - T, which stays finite at T = 1.
  double thermal_term() const noexcept;
  /// The same link seen through an ideal detector (eta = 1, v_el = 0).
  ProtocolParams ideal_detector() const;
};

/// Quantities derived from the classical displacement layer, always at the
/// prepared (pre-filter) variance.
struct SqccDerived {
  double alpha = 0.0;  ///< re-displacement amplitude sqrt(eta T) d
  double snr = 0.0;
  double e_c = 0.5;    ///< classical bit-error rate
  double delta = 0.0;  ///< correlation decay
  double n_d = 1.0;    ///< electronic rescaling gain
  double v_b = 1.0;    ///< Bob's variance before rescaling
  double v_bd = 1.0;   ///< Bob's variance after re-displacement mistakes
};

/// V_b = eta (T V_eff + (1 - T) W) + (1 - eta) + 2 v_el.
double bob_variance(const ProtocolParams& p, double v_eff);

/// alpha^2 / (V_b + 1) at the prepared variance.
double signal_to_noise(const ProtocolParams& p);

/// e_C = erfc(sqrt(snr) / 2) / 2.
double classical_bit_error_rate(double snr);

/// delta = sqrt(snr / pi) exp(-snr / 4).
double correlation_decay(double snr);

/// N_d = sqrt((V_b + 1) / (V_bd + 1)) with V_bd recomputed from alpha, e_C,
/// delta and V_b of `sd`. Throws NonPhysicalRescale when V_bd <= -1.
double rescaling_gain(const SqccDerived& sd);

/// All derived quantities for `p` at its prepared variance.
SqccDerived derive(const ProtocolParams& p);

/// Data-view matrix (a, b, c) = (V_eff, V_b(V_eff), N_d sqrt(eta T (V_eff^2 - 1)) (1 - delta)).
/// `sd` must come from derive(p): N_d and delta always refer to the prepared
/// variance, even when V_eff is a post-selected variance.
TwoModeCM build_data_cm(const ProtocolParams& p, const SqccDerived& sd, double v_eff);

/// Matrix Eve is bounded on in the trusted-receiver model: every Bob-side
/// quantity recomputed with eta = 1 and v_el = 0.
TwoModeCM build_eve_cm(const ProtocolParams& p, double v_eff);

/// Smallest displacement meeting a target classical bit-error rate:
/// 2 erfc^-1(2 W) sqrt((V_b + 1) / T).
double min_displacement(const ProtocolParams& p, double target_error_rate);

}  // namespace sqcc
