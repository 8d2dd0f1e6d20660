#include <cmath>
#include <cstring>
#include <sstream>

#include <gtest/gtest.h>
#include <omp.h>

#include "sqcc/config.hpp"
#include "sqcc/errors.hpp"
#include "sqcc/mc_oracle.hpp"
#include "sqcc/postselection.hpp"
#include "sqcc/validation.hpp"

namespace {

sqcc::ProtocolParams point(double t) {
  auto p = sqcc::terrestrial_protocol();
  p.transmittance = t;
  return p;
}

sqcc::mc::SimulationOptions options(std::uint64_t pulses, std::uint64_t seed) {
  sqcc::mc::SimulationOptions o;
  o.pulses = pulses;
  o.seed = seed;
  return o;
}

bool same_bits(const sqcc::mc::SufficientStats& a, const sqcc::mc::SufficientStats& b) {
  return std::memcmp(&a, &b, sizeof a) == 0;
}

}  // namespace

TEST(MonteCarlo, ReproducibleForFixedSeed) {
  const auto a = sqcc::mc::simulate_block(point(0.3), 0.25, options(200'000, 11));
  const auto b = sqcc::mc::simulate_block(point(0.3), 0.25, options(200'000, 11));
  EXPECT_TRUE(same_bits(a.stats, b.stats));
  const auto c = sqcc::mc::simulate_block(point(0.3), 0.25, options(200'000, 12));
  EXPECT_FALSE(same_bits(a.stats, c.stats));
}

TEST(MonteCarlo, ParallelMatchesSerialForAnyThreadCount) {
  const auto opts = options(300'001, 5);
  const auto serial = sqcc::mc::simulate_block_serial(point(0.2), 0.8, opts);
  for (int threads : {1, 2, 3, 8}) {
    omp_set_num_threads(threads);
    const auto par = sqcc::mc::simulate_block(point(0.2), 0.8, opts);
    EXPECT_TRUE(same_bits(serial.stats, par.stats)) << threads << " threads";
    EXPECT_EQ(serial.cm.c, par.cm.c);
  }
  omp_set_num_threads(omp_get_num_procs());
}

TEST(MonteCarlo, RequiresSeedAndEnoughPulses) {
  sqcc::mc::SimulationOptions o;
  o.pulses = 100'000;
  EXPECT_THROW(sqcc::mc::simulate_block(point(0.5), 0.0, o), sqcc::SeedRequired);
  EXPECT_THROW(sqcc::mc::simulate_block(point(0.5), 0.0, options(1000, 1)),
               sqcc::InsufficientSamples);
}

TEST(MonteCarlo, RecordsMatchSufficientStatistics) {
  const auto p = point(0.4);
  const auto records = sqcc::mc::simulate_records(p, 0.5, 70'000, 3);
  const auto block = sqcc::mc::simulate_block(p, 0.5, options(70'000, 3));
  std::uint64_t accepted = 0;
  std::uint64_t errors = 0;
  for (const auto& r : records) {
    accepted += r.accepted ? 1 : 0;
    errors += ((r.symbol ^ r.decoded) & 1) + (((r.symbol ^ r.decoded) >> 1) & 1);
  }
  EXPECT_EQ(records.size(), 70'000u);
  EXPECT_EQ(accepted, block.stats.accepted);
  EXPECT_EQ(errors, block.stats.symbol_errors);
}

TEST(MonteCarlo, AcceptanceAndSnrAgreeWithModel) {
  auto p = point(0.1);
  p.displacement = sqcc::min_displacement(p, 0.05);
  const auto block = sqcc::mc::simulate_block(p, 0.6, options(1'000'000, 99));
  const auto state = sqcc::post_selected_pipeline(p, 0.6);
  EXPECT_NEAR(block.acceptance.value, state.acceptance, 4.0 * block.acceptance.stderr_);
  EXPECT_NEAR(block.snr.value, state.derived.snr, 4.0 * block.snr.stderr_);
  EXPECT_NEAR(block.bit_error_rate.value, state.derived.e_c, 4.0 * block.bit_error_rate.stderr_);
  EXPECT_NEAR(block.rescaling_gain.value, state.derived.n_d, 0.01 * state.derived.n_d);

  const auto records = sqcc::mc::simulate_records(p, 0.6, 200'000, 99);
  EXPECT_NEAR(sqcc::mc::empirical_snr(records), state.derived.snr, 0.03 * state.derived.snr);
  EXPECT_THROW(sqcc::mc::empirical_snr(std::span(records).first(1000)),
               sqcc::InsufficientSamples);
}

TEST(MonteCarlo, RecordCsvHeader) {
  const auto records = sqcc::mc::simulate_records(point(0.5), 0.0, 3, 1);
  std::ostringstream out;
  sqcc::mc::write_records_csv(out, records);
  std::istringstream in(out.str());
  std::string header;
  std::getline(in, header);
  EXPECT_EQ(header, "x_a,p_a,sym,x_b,p_b,dec,acc");
  int lines = 0;
  for (std::string line; std::getline(in, line);) ++lines;
  EXPECT_EQ(lines, 3);
}

TEST(Validation, SmallRunPassesAndFaultInjectionFails) {
  auto grid = sqcc::default_validation_grid();
  ASSERT_EQ(grid.size(), 7u);
  auto opts = options(200'000, 2024);
  const auto good = sqcc::run_mc_validation(grid, opts);
  EXPECT_TRUE(good.all_pass());
  opts.rescale_fault = 1.1;
  const auto bad = sqcc::run_mc_validation(grid, opts);
  EXPECT_FALSE(bad.all_pass());
  std::ostringstream csv;
  sqcc::write_validation_csv(csv, bad);
  EXPECT_NE(csv.str().find(",0\n"), std::string::npos);
}

TEST(Validation, GridSpansRequiredRange) {
  double t_min = 1.0;
  double t_max = 0.0;
  for (const auto& pt : sqcc::default_validation_grid()) {
    t_min = std::min(t_min, pt.protocol.transmittance);
    t_max = std::max(t_max, pt.protocol.transmittance);
    if (pt.classical) {
      const double ec = sqcc::derive(pt.protocol).e_c;
      EXPECT_GT(ec, 0.0);
      EXPECT_LT(ec, 0.1);
    }
  }
  EXPECT_DOUBLE_EQ(t_min, 0.03);
  EXPECT_DOUBLE_EQ(t_max, 1.0);
  EXPECT_THROW(sqcc::run_mc_validation({}, options(1e5, 1)), sqcc::EmptyGrid);
}
