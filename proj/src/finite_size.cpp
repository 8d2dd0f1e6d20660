#include "sqcc/finite_size.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "sqcc/errors.hpp"
#include "sqcc/postselection.hpp"
#include "sqcc/special.hpp"

namespace sqcc {

void FiniteSizeParams::validate() const {
  auto in_unit = [](double x) { return x > 0.0 && x < 1.0; };
  if (!(block_size >= 2.0) || !std::isfinite(block_size)) {
    throw DomainError("FiniteSizeParams.block_size: must be >= 2");
  }
  if (!in_unit(eps_pe)) throw DomainError("FiniteSizeParams.eps_pe: must be in (0, 1)");
  if (!in_unit(eps_s)) throw DomainError("FiniteSizeParams.eps_s: must be in (0, 1)");
  if (!in_unit(eps_h)) throw DomainError("FiniteSizeParams.eps_h: must be in (0, 1)");
  if (!in_unit(eps_ent)) throw DomainError("FiniteSizeParams.eps_ent: must be in (0, 1)");
  if (!(frame_success > 0.0 && frame_success <= 1.0)) {
    throw DomainError("FiniteSizeParams.frame_success: must be in (0, 1]");
  }
  if (discretization_bits < 1) {
    throw DomainError("FiniteSizeParams.discretization_bits: must be >= 1");
  }
}

FiniteSizeCorrections FiniteSizeCorrections::standard() {
  FiniteSizeCorrections c;
  c.aep = [](const FiniteSizeParams& fs) {
    const double pf = fs.frame_success;
    const double dims = std::log2(std::exp2(fs.discretization_bits) + 2.0);
    // log2(18 / (p_f^2 eps_s^4)) without forming eps_s^4
    const double l = std::log2(18.0) - 2.0 * std::log2(pf) - 4.0 * std::log2(fs.eps_s);
    return 4.0 * dims * std::sqrt(l);
  };
  c.entropy = [](const FiniteSizeParams& fs) {
    return 2.0 * std::sqrt(std::log2(2.0 / fs.eps_ent));
  };
  c.smoothing = [](const FiniteSizeParams& fs) {
    return std::log2(fs.frame_success * (1.0 - fs.eps_s * fs.eps_s / 3.0));
  };
  c.hashing = [](const FiniteSizeParams& fs) { return 2.0 * std::log2(2.0 * fs.eps_h); };
  return c;
}

FiniteSizeCorrections FiniteSizeCorrections::log_entropy_penalty() {
  auto c = standard();
  c.entropy = [](const FiniteSizeParams& fs) {
    return std::log2(8.0) - 2.0 * std::log2(fs.eps_s);
  };
  return c;
}

double beta_confidence_A(double z, double block_size) {
  if (!(z > 0.0 && z < 1.0)) throw DomainError("beta_confidence_A: z must be in (0, 1)");
  if (!(block_size >= 2.0) || !std::isfinite(block_size)) {
    throw DomainError("beta_confidence_A: block size must be >= 2");
  }
  if (block_size <= kBetaExactLimit) {
    const double shape = 0.5 * block_size;
    return 2.0 * special::beta_quantile(shape, shape, z);
  }
  // Beta(N/2, N/2): mean 1/2, variance 1 / (4 (N + 1)).
  return 1.0 + special::normal_quantile(z) / std::sqrt(block_size + 1.0);
}

WorstCaseCM worst_case_cm(const TwoModeCM& cm, const FiniteSizeParams& fs) {
  fs.validate();
  const double n = fs.block_size;
  const double a1 = beta_confidence_A(fs.eps_pe / 12.0, n);
  const double a2 = beta_confidence_A(fs.eps_pe * fs.eps_pe / 1296.0, n);
  // (240 / eps) exp(-N / 32) in log space
  const double tail = std::exp(std::log(240.0 / fs.eps_pe) - n / 32.0);

  WorstCaseCM w;
  w.delta_var = (2.0 - a1) * (1.0 + tail) - 1.0;
  w.delta_cov = 0.5 * (1.0 - a1) + (1.0 - a2);
  w.a_max = (1.0 + w.delta_var) * cm.a;
  w.b_max = (1.0 + w.delta_var) * cm.b;
  if (!(cm.c > 0.0)) {
    throw NonPositiveCorrelation("worst_case_cm: correlation must be positive");
  }
  w.c_min = (1.0 - 2.0 * std::sqrt(cm.a * cm.b / (cm.c * cm.c)) * w.delta_cov) * cm.c;
  if (!(w.c_min > 0.0)) {
    std::ostringstream msg;
    msg << "worst_case_cm: c_min = " << w.c_min << " at N = " << n;
    throw NonPositiveCorrelation(msg.str());
  }
  return w;
}

KeyRateReport finite_size_key_rate(const ProtocolParams& p, double gain,
                                   const FiniteSizeParams& fs, SecurityModel mode,
                                   const FiniteSizeCorrections& corrections) {
  fs.validate();
  const auto state = post_selected_pipeline(p, gain);
  const TwoModeCM data = worst_case_cm(state.data, fs).matrix();
  const TwoModeCM eve = mode == SecurityModel::TrustedReceiver
                            ? worst_case_cm(state.eve, fs).matrix()
                            : data;

  KeyRateReport r;
  r.mode = mode;
  r.gain = gain;
  r.v_mod = p.v_mod;
  r.block_size = fs.block_size;
  r.acceptance = state.acceptance;
  r.mutual_information = mutual_information(data);
  r.holevo = holevo_bound(eve);

  const double n = fs.block_size;
  const double pf = fs.frame_success;
  const double kept = pf * r.acceptance;
  r.key_rate = kept * (p.reconciliation * r.mutual_information - r.holevo) -
               std::sqrt(kept / n) * corrections.aep(fs) -
               std::sqrt(kept * std::max(0.0, std::log2(kept * n)) / n) * corrections.entropy(fs) +
               corrections.smoothing(fs) / n + corrections.hashing(fs) / n;
  return r;
}

}  // namespace sqcc
