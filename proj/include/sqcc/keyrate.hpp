#pragma once

#include <string_view>

#include "sqcc/gaussian.hpp"
#include "sqcc/model.hpp"

namespace sqcc {

enum class SecurityModel {
  /// Detector loss and noise stay in Bob's lab; Eve is bounded on the
  /// ideal-detector matrix.
  TrustedReceiver,
  /// Detector imperfections are conceded to Eve; she is bounded on the data view.
  UntrustedReceiver,
};

std::string_view to_string(SecurityModel mode);
/// Accepts "trusted" / "untrusted". Throws DomainError otherwise.
SecurityModel parse_security_model(std::string_view name);

struct KeyRateReport {
  double key_rate = 0.0;            ///< bits per channel use, may be negative
  double mutual_information = 0.0; ///< I_AB, bits
  double holevo = 0.0;              ///< I_E, bits
  double acceptance = 1.0;          ///< P_A
  double gain = 0.0;                ///< filter gain g
  double v_mod = 0.0;               ///< modulation variance the rate refers to
  double block_size = 0.0;          ///< 0 for the asymptotic regime
  SecurityModel mode = SecurityModel::TrustedReceiver;

  /// Rate clamped at zero, for consumers that only count secure key.
  double secure_rate() const noexcept { return key_rate > 0.0 ? key_rate : 0.0; }
};

/// I_AB for heterodyne detection on both sides.
double mutual_information(const TwoModeCM& data);

/// S(sigma_AB) - S(sigma_A|b).
double holevo_bound(const TwoModeCM& eve);

/// P_A (beta I_AB - I_E) at filter gain `gain`. Negative rates are returned
/// unchanged.
KeyRateReport asymptotic_key_rate(const ProtocolParams& p, double gain,
                                  SecurityModel mode);

}  // namespace sqcc
