#include "sqcc/keyrate.hpp"

#include <cmath>
#include <string>

#include "sqcc/errors.hpp"
#include "sqcc/postselection.hpp"

namespace sqcc {

std::string_view to_string(SecurityModel mode) {
  return mode == SecurityModel::TrustedReceiver ? "trusted" : "untrusted";
}

SecurityModel parse_security_model(std::string_view name) {
  if (name == "trusted") return SecurityModel::TrustedReceiver;
  if (name == "untrusted") return SecurityModel::UntrustedReceiver;
  throw DomainError("unknown security model '" + std::string(name) + "'");
}

double mutual_information(const TwoModeCM& data) {
  const double v_a = 0.5 * (data.a + 1.0);
  const double v_b = 0.5 * (data.b + 1.0);
  const double phi = 0.5 * data.c;
  const double v_a_given_b = v_a - phi * phi / v_b;
  if (!(v_a_given_b > 0.0)) {
    throw DomainError("mutual_information: conditional variance is not positive");
  }
  return std::log2(v_a / v_a_given_b);
}

double holevo_bound(const TwoModeCM& eve) {
  return entropy_of_cm(eve) - bosonic_entropy(conditional_after_heterodyne(eve));
}

KeyRateReport asymptotic_key_rate(const ProtocolParams& p, double gain, SecurityModel mode) {
  const auto state = post_selected_pipeline(p, gain);
  KeyRateReport r;
  r.mode = mode;
  r.gain = gain;
  r.v_mod = p.v_mod;
  r.acceptance = state.acceptance;
  r.mutual_information = mutual_information(state.data);
  r.holevo = holevo_bound(mode == SecurityModel::TrustedReceiver ? state.eve : state.data);
  r.key_rate = r.acceptance * (p.reconciliation * r.mutual_information - r.holevo);
  return r;
}

}  // namespace sqcc
