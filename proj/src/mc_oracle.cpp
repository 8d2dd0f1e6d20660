#include "sqcc/mc_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>
#include <numbers>
#include <ostream>
#include <random>

#include "sqcc/errors.hpp"

namespace sqcc::mc {
namespace {

// Per-pulse constants of the prepare-and-measure chain.
struct Setup {
  double sd_mod = 0.0;        // sqrt(V_mod)
  double half_d = 0.0;        // d / sqrt(2): per-quadrature displacement
  double sqrt_t = 0.0;
  double sd_thermal = 0.0;    // sqrt((1 - T) W)
  double sqrt_eta = 0.0;
  double sd_det_vacuum = 0.0; // sqrt(1 - eta)
  double sd_electronic = 0.0; // sqrt(2 v_el)
  double bob_shift = 0.0;     // sqrt(eta T) d / sqrt(2)
  double gain2 = 0.0;
};

Setup make_setup(const ProtocolParams& p, double gain) {
  p.validate();
  if (!(gain >= 0.0)) throw DomainError("simulate_block: filter gain must be >= 0");
  Setup s;
  s.sd_mod = std::sqrt(p.v_mod);
  s.half_d = p.displacement / std::numbers::sqrt2;
  s.sqrt_t = std::sqrt(p.transmittance);
  s.sd_thermal = std::sqrt(p.thermal_term());
  s.sqrt_eta = std::sqrt(p.efficiency);
  s.sd_det_vacuum = std::sqrt(1.0 - p.efficiency);
  s.sd_electronic = std::sqrt(2.0 * p.electronic_noise);
  s.bob_shift = s.sqrt_eta * s.sqrt_t * s.half_d;
  s.gain2 = gain * gain;
  return s;
}

std::mt19937_64 chunk_engine(std::uint64_t seed, std::uint64_t chunk) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(chunk), static_cast<std::uint32_t>(chunk >> 32),
                    0x53514343u};
  return std::mt19937_64(seq);
}

// One quadrature through coherent-state vacuum, thermal-loss channel, lossy
// noisy detector and the extra vacuum unit of heterodyne detection.
template <class Engine>
double transmit(const Setup& s, double alice, double shift, Engine& eng,
                std::normal_distribution<double>& unit) {
  const double prepared = alice + shift + unit(eng);
  const double channel = s.sqrt_t * prepared + s.sd_thermal * unit(eng);
  const double detected =
      s.sqrt_eta * channel + s.sd_det_vacuum * unit(eng) + s.sd_electronic * unit(eng);
  return detected + unit(eng);
}

struct NoSink {
  void operator()(const PulseRecord&) const noexcept {}
};

template <class Sink>
void run_chunk(const Setup& s, std::uint64_t seed, std::uint64_t chunk, std::uint64_t count,
               SufficientStats& st, Sink&& sink) {
  auto eng = chunk_engine(seed, chunk);
  std::normal_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<int> symbol_dist(0, 3);
  std::uniform_real_distribution<double> accept_dist(0.0, 1.0);

  for (std::uint64_t i = 0; i < count; ++i) {
    PulseRecord rec;
    rec.x_a = s.sd_mod * unit(eng);
    rec.p_a = s.sd_mod * unit(eng);
    rec.symbol = symbol_dist(eng);
    const double sx = (rec.symbol & 1) ? -1.0 : 1.0;
    const double sp = (rec.symbol & 2) ? -1.0 : 1.0;
    rec.x_b = transmit(s, rec.x_a, sx * s.half_d, eng, unit);
    rec.p_b = transmit(s, rec.p_a, sp * s.half_d, eng, unit);
    const double dx = rec.x_b >= 0.0 ? 1.0 : -1.0;
    const double dp = rec.p_b >= 0.0 ? 1.0 : -1.0;
    rec.decoded = (dx < 0.0 ? 1 : 0) | (dp < 0.0 ? 2 : 0);
    const double u = accept_dist(eng);
    rec.accepted = u < std::exp(-s.gain2 * (rec.x_a * rec.x_a + rec.p_a * rec.p_a));

    ++st.pulses;
    if (rec.accepted) ++st.accepted;
    const double alice[2] = {rec.x_a, rec.p_a};
    const double record[2] = {rec.x_b, rec.p_b};
    const double sent[2] = {sx, sp};
    const double dec[2] = {dx, dp};
    for (int q = 0; q < 2; ++q) {
      if (dec[q] != sent[q]) ++st.symbol_errors;
      const double y = record[q] - sent[q] * s.bob_shift;
      const double r = record[q] - dec[q] * s.bob_shift;
      const int cls = sent[q] > 0.0 ? 0 : 1;
      st.y2 += y * y;
      st.y4 += y * y * y * y;
      st.signed_mean += sent[q] * record[q];
      st.record2 += record[q] * record[q];
      st.r_sum[cls] += r;
      st.r2_sum[cls] += r * r;
      ++st.class_count[cls];
      st.r4 += r * r * r * r;
      st.y2r2 += y * y * r * r;
      if (rec.accepted) {
        st.acc_xa2 += alice[q] * alice[q];
        st.acc_r2 += r * r;
        st.acc_xar += alice[q] * r;
      }
    }
    sink(rec);
  }
}

std::uint64_t chunk_count(std::uint64_t pulses) {
  return (pulses + kChunkPulses - 1) / kChunkPulses;
}

std::uint64_t chunk_size(std::uint64_t pulses, std::uint64_t chunk) {
  const std::uint64_t begin = chunk * kChunkPulses;
  return std::min(kChunkPulses, pulses - begin);
}

std::uint64_t checked_seed(const SimulationOptions& opts) {
  if (!opts.seed) throw SeedRequired("simulate_block: a seed is required");
  if (opts.pulses < kMinPulses) {
    throw InsufficientSamples("simulate_block: at least " + std::to_string(kMinPulses) +
                              " pulses are required");
  }
  return *opts.seed;
}

BlockEstimate estimate(const SufficientStats& st, double rescale_fault) {
  BlockEstimate b;
  b.stats = st;
  const double n = static_cast<double>(st.pulses);
  const double m = 2.0 * n;

  const double pa = st.accepted / n;
  b.acceptance = {pa, std::sqrt(pa * (1.0 - pa) / n)};

  const double ec = st.symbol_errors / m;
  b.bit_error_rate = {ec, std::sqrt(ec * (1.0 - ec) / m)};

  const double mean = st.signed_mean / m;
  const double noise = st.record2 / m - mean * mean;
  const double snr = 2.0 * mean * mean / noise;
  b.snr = {snr, snr > 0.0 ? snr * std::sqrt((8.0 / snr + 2.0) / m) : std::sqrt(8.0 / m)};

  const double var_y = st.y2 / m;
  double within = 0.0;
  double r2_total = 0.0;
  for (int c = 0; c < 2; ++c) {
    if (st.class_count[c] == 0) continue;
    within += st.r2_sum[c] - st.r_sum[c] * st.r_sum[c] / static_cast<double>(st.class_count[c]);
    r2_total += st.r2_sum[c];
  }
  const double var_r = within / m;
  const double nd = std::sqrt(var_y / var_r);
  {
    const double er2 = r2_total / m;
    const double vy = (st.y4 / m - var_y * var_y) / m;
    const double vr = (st.r4 / m - er2 * er2) / m;
    const double cov = (st.y2r2 / m - var_y * er2) / m;
    const double rel = vy / (var_y * var_y) + vr / (er2 * er2) - 2.0 * cov / (var_y * er2);
    b.rescaling_gain = {nd, 0.5 * nd * std::sqrt(std::max(rel, 0.0))};
  }

  const double applied = nd * rescale_fault;
  const double m_acc = 2.0 * static_cast<double>(st.accepted);
  if (m_acc > 0.0) {
    const double v_acc = st.acc_xa2 / m_acc;
    const double bob = applied * applied * st.acc_r2 / m_acc;
    const double cross = applied * st.acc_xar / m_acc;
    b.v_mod_accepted = {v_acc, v_acc * std::sqrt(2.0 / m_acc)};
    b.bob_second_moment = {bob, bob * std::sqrt(2.0 / m_acc)};
    b.cross_moment = {cross, std::sqrt((v_acc * bob + cross * cross) / m_acc)};
    // Prepare-and-measure moments to the entanglement-based picture.
    b.cm.a = v_acc + 1.0;
    b.cm.b = bob - 1.0;
    b.cm.c = cross * std::sqrt((v_acc + 2.0) / v_acc);
  }
  return b;
}

}  // namespace

SufficientStats& SufficientStats::operator+=(const SufficientStats& o) {
  pulses += o.pulses;
  accepted += o.accepted;
  symbol_errors += o.symbol_errors;
  y2 += o.y2;
  y4 += o.y4;
  signed_mean += o.signed_mean;
  record2 += o.record2;
  for (int c = 0; c < 2; ++c) {
    r_sum[c] += o.r_sum[c];
    r2_sum[c] += o.r2_sum[c];
    class_count[c] += o.class_count[c];
  }
  r4 += o.r4;
  y2r2 += o.y2r2;
  acc_xa2 += o.acc_xa2;
  acc_r2 += o.acc_r2;
  acc_xar += o.acc_xar;
  return *this;
}

BlockEstimate simulate_block(const ProtocolParams& p, double gain,
                             const SimulationOptions& opts) {
  const std::uint64_t seed = checked_seed(opts);
  const Setup s = make_setup(p, gain);
  const auto chunks = static_cast<std::int64_t>(chunk_count(opts.pulses));
  std::vector<SufficientStats> partial(static_cast<std::size_t>(chunks));

#pragma omp parallel for schedule(dynamic)
  for (std::int64_t c = 0; c < chunks; ++c) {
    const auto chunk = static_cast<std::uint64_t>(c);
    run_chunk(s, seed, chunk, chunk_size(opts.pulses, chunk), partial[chunk], NoSink{});
  }

  SufficientStats total;
  for (const auto& st : partial) total += st;
  return estimate(total, opts.rescale_fault);
}

BlockEstimate simulate_block_serial(const ProtocolParams& p, double gain,
                                    const SimulationOptions& opts) {
  const std::uint64_t seed = checked_seed(opts);
  const Setup s = make_setup(p, gain);
  SufficientStats total;
  for (std::uint64_t c = 0; c < chunk_count(opts.pulses); ++c) {
    SufficientStats st;
    run_chunk(s, seed, c, chunk_size(opts.pulses, c), st, NoSink{});
    total += st;
  }
  return estimate(total, opts.rescale_fault);
}

std::vector<PulseRecord> simulate_records(const ProtocolParams& p, double gain,
                                          std::uint64_t pulses, std::uint64_t seed) {
  const Setup s = make_setup(p, gain);
  std::vector<PulseRecord> out;
  out.reserve(pulses);
  for (std::uint64_t c = 0; c < chunk_count(pulses); ++c) {
    SufficientStats st;
    run_chunk(s, seed, c, chunk_size(pulses, c), st,
              [&](const PulseRecord& r) { out.push_back(r); });
  }
  return out;
}

double empirical_snr(std::span<const PulseRecord> records) {
  if (records.size() < 100'000) {
    throw InsufficientSamples("empirical_snr: at least 1e5 records are required");
  }
  double signed_sum = 0.0;
  double sq_sum = 0.0;
  for (const auto& r : records) {
    const double sx = (r.symbol & 1) ? -1.0 : 1.0;
    const double sp = (r.symbol & 2) ? -1.0 : 1.0;
    signed_sum += sx * r.x_b + sp * r.p_b;
    sq_sum += r.x_b * r.x_b + r.p_b * r.p_b;
  }
  const double m = 2.0 * static_cast<double>(records.size());
  const double mean = signed_sum / m;
  const double noise = sq_sum / m - mean * mean;
  return 2.0 * mean * mean / noise;
}

void write_records_csv(std::ostream& out, std::span<const PulseRecord> records) {
  out << "x_a,p_a,sym,x_b,p_b,dec,acc\n";
  char line[256];
  for (const auto& r : records) {
    std::snprintf(line, sizeof line, "%.17g,%.17g,%d,%.17g,%.17g,%d,%d\n", r.x_a, r.p_a,
                  r.symbol, r.x_b, r.p_b, r.decoded, r.accepted ? 1 : 0);
    out << line;
  }
  if (!out) throw IOError("write_records_csv: stream write failed");
}

}  // namespace sqcc::mc
