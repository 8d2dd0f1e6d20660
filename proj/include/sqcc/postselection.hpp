#pragma once

#include "sqcc/gaussian.hpp"
#include "sqcc/model.hpp"

namespace sqcc {

/// Probability that Alice's Gaussian filter exp(-g^2 (x^2 + p^2)) keeps a symbol.
double acceptance_probability(double gain, double v_mod);

/// Modulation variance of the kept symbols.
double effective_modulation_variance(double gain, double v_mod);

/// Filter gain that maps v_mod onto target (0 < target <= v_mod).
double gain_for_target_variance(double v_mod, double target);

struct PostSelectedState {
  TwoModeCM data;       ///< Alice-Bob matrix after the filter
  TwoModeCM eve;        ///< same with an ideal detector
  double acceptance = 1.0;
  SqccDerived derived;  ///< pre-filter quantities used for both views
};

/// Rescale, then filter. N_d and the classical error terms are fixed by the
/// prepared variance before the filter acts; only V_eff changes.
PostSelectedState post_selected_pipeline(const ProtocolParams& p, double gain);

struct ChannelEstimate {
  double transmittance = 1.0;
  double excess_noise = 0.0;
};

/// Recovers (T, xi) from a data-view matrix given the trusted detector
/// parameters in `p` and the rescaling terms used to build it.
ChannelEstimate estimate_channel(const TwoModeCM& data, const ProtocolParams& p,
                                 const SqccDerived& sd);

}  // namespace sqcc
