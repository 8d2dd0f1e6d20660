#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "sqcc/gaussian.hpp"
#include "sqcc/model.hpp"

namespace sqcc::mc {

/// One prepare-and-measure pulse. x_b, p_b are Bob's raw heterodyne outcomes,
/// scaled so that their variance around the displacement is V_b + 1.
struct PulseRecord {
  double x_a = 0.0;
  double p_a = 0.0;
  int symbol = 0;          ///< transmitted alphabet index 0..3
  double x_b = 0.0;
  double p_b = 0.0;
  int decoded = 0;         ///< Bob's hard decision
  bool accepted = false;   ///< Alice's filter kept the pulse
};

inline constexpr std::uint64_t kMinPulses = 10'000;
inline constexpr std::uint64_t kChunkPulses = 1 << 16;

/// Sums over a set of pulses, per quadrature, pooled over x and p. Merging is
/// plain addition, so any chunk partition yields the same totals when merged
/// in chunk order.
struct SufficientStats {
  std::uint64_t pulses = 0;
  std::uint64_t accepted = 0;
  std::uint64_t symbol_errors = 0;  ///< wrong quadrature decisions, out of 2 * pulses

  // Pre-rescale record, all pulses.
  double y2 = 0.0;         ///< (record - true displacement)^2
  double y4 = 0.0;
  double signed_mean = 0.0;  ///< s * record, s the true quadrature sign
  double record2 = 0.0;      ///< record^2
  // Re-displaced record r, split by true quadrature sign.
  double r_sum[2] = {0.0, 0.0};
  double r2_sum[2] = {0.0, 0.0};
  std::uint64_t class_count[2] = {0, 0};
  double r4 = 0.0;
  double y2r2 = 0.0;
  // Accepted subset.
  double acc_xa2 = 0.0;
  double acc_r2 = 0.0;
  double acc_xar = 0.0;

  SufficientStats& operator+=(const SufficientStats& o);
};

struct Estimate {
  double value = 0.0;
  double stderr_ = 0.0;
};

/// Empirical statistics of one simulated block.
struct BlockEstimate {
  SufficientStats stats;
  Estimate acceptance;        ///< P_A
  Estimate bit_error_rate;    ///< per-quadrature e_C
  Estimate snr;
  Estimate rescaling_gain;    ///< N_d restoring the pre-error second moment
  Estimate v_mod_accepted;    ///< variance of kept x_a, p_a
  Estimate bob_second_moment; ///< kept, rescaled record: b + 1
  Estimate cross_moment;      ///< kept <x_a, N_d r>
  TwoModeCM cm;               ///< entanglement-based (a, b, c) of the kept data
};

struct SimulationOptions {
  std::uint64_t pulses = 10'000'000;
  std::optional<std::uint64_t> seed;
  /// Multiplies the empirical N_d before it is applied. 1 in normal runs; other
  /// values exist to check that validation catches a broken rescale.
  double rescale_fault = 1.0;
};

/// OpenMP over chunks of kChunkPulses with per-chunk seeds. Bit-identical to
/// simulate_block_serial for any thread count.
BlockEstimate simulate_block(const ProtocolParams& p, double gain,
                             const SimulationOptions& opts);

/// Single-threaded reference implementation.
BlockEstimate simulate_block_serial(const ProtocolParams& p, double gain,
                                    const SimulationOptions& opts);

/// Raw records of the same pulses simulate_block would draw.
std::vector<PulseRecord> simulate_records(const ProtocolParams& p, double gain,
                                          std::uint64_t pulses, std::uint64_t seed);

/// 2 m^2 / noise variance, m the mean signed quadrature of Bob's record.
/// Needs at least 1e5 records.
double empirical_snr(std::span<const PulseRecord> records);

/// CSV with header x_a,p_a,sym,x_b,p_b,dec,acc.
void write_records_csv(std::ostream& out, std::span<const PulseRecord> records);

}  // namespace sqcc::mc
