#include "sqcc/postselection.hpp"

#include <cmath>

#include "sqcc/errors.hpp"

namespace sqcc {
namespace {

void check_filter(double gain, double v_mod) {
  if (!(gain >= 0.0) || !std::isfinite(gain)) throw DomainError("filter gain must be >= 0");
  if (!(v_mod > 0.0) || !std::isfinite(v_mod)) throw DomainError("v_mod must be > 0");
}

}  // namespace

double acceptance_probability(double gain, double v_mod) {
  check_filter(gain, v_mod);
  return 1.0 / (2.0 * gain * gain * v_mod + 1.0);
}

double effective_modulation_variance(double gain, double v_mod) {
  check_filter(gain, v_mod);
  return v_mod / (2.0 * gain * gain * v_mod + 1.0);
}

double gain_for_target_variance(double v_mod, double target) {
  if (!(target > 0.0 && target <= v_mod)) {
    throw DomainError("gain_for_target_variance: target must be in (0, v_mod]");
  }
  return std::sqrt((v_mod - target) / (2.0 * v_mod * target));
}

PostSelectedState post_selected_pipeline(const ProtocolParams& p, double gain) {
  PostSelectedState out;
  // Bob's rescale is fixed by the prepared state before Alice filters.
  out.derived = derive(p);
  out.acceptance = acceptance_probability(gain, p.v_mod);
  const double v_eff = effective_modulation_variance(gain, p.v_mod) + 1.0;
  out.data = build_data_cm(p, out.derived, v_eff);
  out.eve = build_eve_cm(p, v_eff);
  return out;
}

ChannelEstimate estimate_channel(const TwoModeCM& data, const ProtocolParams& p,
                                 const SqccDerived& sd) {
  const double v = data.a;
  if (!(v > 1.0)) throw DomainError("estimate_channel: Alice's variance must exceed 1");
  const double c_d = data.c / (sd.n_d * (1.0 - sd.delta));
  ChannelEstimate est;
  est.transmittance = c_d * c_d / (p.efficiency * (v * v - 1.0));
  const double t = est.transmittance;
  // b = eta (T V + (1 - T) W) + 1 - eta + 2 v_el, and (1 - T) W = xi T + 1 - T.
  const double thermal =
      (data.b - (1.0 - p.efficiency) - 2.0 * p.electronic_noise) / p.efficiency - t * v;
  est.excess_noise = (thermal - (1.0 - t)) / t;
  return est;
}

}  // namespace sqcc
