#pragma once

#include <functional>

#include "sqcc/gaussian.hpp"
#include "sqcc/keyrate.hpp"
#include "sqcc/model.hpp"

namespace sqcc {

struct FiniteSizeParams {
  double block_size = 1e10;  ///< N, symbols used for parameter estimation
  double eps_pe = 1e-10;
  double eps_s = 1e-10;
  double eps_h = 1e-10;
  double eps_ent = 1e-10;
  double frame_success = 0.9964;  ///< p_f
  int discretization_bits = 6;    ///< d_rx

  void validate() const;
};

/// Composable correction terms. Each is a function of the finite-size
/// parameters only, so alternative definitions can be swapped in.
struct FiniteSizeCorrections {
  using Term = std::function<double(const FiniteSizeParams&)>;
  Term aep;
  Term entropy;
  Term smoothing;
  Term hashing;

  /// Delta_AEP = 4 log2(2^d + 2) sqrt(log2(18 / (p_f^2 eps_s^4))),
  /// Delta_ent = 2 sqrt(log2(2 / eps_ent)),
  /// Delta_S = log2(p_f (1 - eps_s^2 / 3)), Delta_H = 2 log2(2 eps_h).
  static FiniteSizeCorrections standard();
  /// As standard() but with Delta_ent = log2(8 / eps_s^2).
  static FiniteSizeCorrections log_entropy_penalty();
};

struct WorstCaseCM {
  double a_max = 1.0;
  double b_max = 1.0;
  double c_min = 0.0;
  double delta_var = 0.0;
  double delta_cov = 0.0;

  TwoModeCM matrix() const noexcept { return {a_max, b_max, c_min}; }
};

/// A(z) = 2 * invcdf of Beta(N/2, N/2) at z. Exact below 1e6 symbols, normal
/// approximation 1 + Phi^-1(z) / sqrt(N + 1) above.
double beta_confidence_A(double z, double block_size);

inline constexpr double kBetaExactLimit = 1e6;

/// Pessimistic estimate of (a, b, c) from N samples at confidence eps_PE.
/// Throws NonPositiveCorrelation when c_min <= 0.
WorstCaseCM worst_case_cm(const TwoModeCM& cm, const FiniteSizeParams& fs);

/// Composable finite-size key rate with post-selection.
KeyRateReport finite_size_key_rate(
    const ProtocolParams& p, double gain, const FiniteSizeParams& fs, SecurityModel mode,
    const FiniteSizeCorrections& corrections = FiniteSizeCorrections::standard());

}  // namespace sqcc
