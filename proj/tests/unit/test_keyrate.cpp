#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "sqcc/channels.hpp"
#include "sqcc/config.hpp"
#include "sqcc/errors.hpp"
#include "sqcc/keyrate.hpp"
#include "sqcc/optimize.hpp"
#include "sqcc/postselection.hpp"

namespace {

sqcc::ProtocolParams fiber_point(double km, double v_mod = 9.0) {
  auto p = sqcc::terrestrial_protocol();
  p.v_mod = v_mod;
  p.transmittance = sqcc::fiber_transmittance({km, 0.2});
  return p;
}

constexpr auto kTrusted = sqcc::SecurityModel::TrustedReceiver;
constexpr auto kUntrusted = sqcc::SecurityModel::UntrustedReceiver;

}  // namespace

TEST(KeyRate, MutualInformationOfIdealChannel) {
  // Noiseless heterodyne on a TMSV of variance V: I = log2((V + 1) / 2).
  const double v = 10.0;
  const sqcc::TwoModeCM cm{v, v, std::sqrt(v * v - 1.0)};
  EXPECT_NEAR(sqcc::mutual_information(cm), std::log2((v + 1.0) / 2.0), 1e-12);
  EXPECT_NEAR(sqcc::mutual_information({v, v, 0.0}), 0.0, 1e-15);
}

TEST(KeyRate, HolevoOfPureLossChannelIsPositive) {
  const double v = 8.0;
  const double t = 0.5;
  const sqcc::TwoModeCM cm{v, t * v + 1.0 - t, std::sqrt(t * (v * v - 1.0))};
  const double chi = sqcc::holevo_bound(cm);
  EXPECT_GT(chi, 0.0);
  EXPECT_LT(chi, sqcc::mutual_information(cm));
}

TEST(KeyRate, InsetValuesAtFortyOneKilometres) {
  const auto p = fiber_point(41.0);
  const auto fixed = sqcc::asymptotic_key_rate(p, 0.0, kTrusted);
  EXPECT_NEAR(fixed.key_rate, -5.64e-3, 0.1 * 5.64e-3);
  const auto ps = sqcc::asymptotic_key_rate(p, 0.25, kTrusted);
  EXPECT_NEAR(ps.key_rate, 5.69e-3, 0.1 * 5.69e-3);
  EXPECT_NEAR(ps.acceptance, 0.4706, 1e-4);
}

TEST(KeyRate, RateDecreasesWithDistance) {
  double prev = 1e9;
  for (double km = 0.0; km <= 37.0; km += 1.0) {
    const double r = sqcc::asymptotic_key_rate(fiber_point(km), 0.0, kTrusted).key_rate;
    EXPECT_LT(r, prev) << km;
    prev = r;
  }
}

TEST(KeyRate, SecurityModelParsing) {
  EXPECT_EQ(sqcc::parse_security_model("trusted"), kTrusted);
  EXPECT_EQ(sqcc::parse_security_model("untrusted"), kUntrusted);
  EXPECT_EQ(sqcc::to_string(kUntrusted), "untrusted");
  EXPECT_THROW(sqcc::parse_security_model("paranoid"), sqcc::DomainError);
}

TEST(KeyRate, SecureRateClampsAtZero) {
  sqcc::KeyRateReport r;
  r.key_rate = -0.3;
  EXPECT_EQ(r.secure_rate(), 0.0);
  r.key_rate = 0.2;
  EXPECT_EQ(r.secure_rate(), 0.2);
}

// Filtering down to V* is the same state as preparing V* directly, scaled by
// the acceptance probability, once classical errors are negligible. Beyond
// ~50 km the correlation decay reaches 1e-7 and the two differ at that level.
TEST(KeyRateProperty, VarianceMapRoundTrip) {
  for (auto mode : {kTrusted, kUntrusted}) {
    for (double km : {5.0, 20.0, 41.0}) {
      const auto p = fiber_point(km);
      for (double v_star : {0.2, 1.0, 3.0, 8.5}) {
        const double g = sqcc::gain_for_target_variance(p.v_mod, v_star);
        const auto ps = sqcc::asymptotic_key_rate(p, g, mode);
        auto q = p;
        q.v_mod = v_star;
        const auto direct = sqcc::asymptotic_key_rate(q, 0.0, mode);
        EXPECT_NEAR(ps.key_rate, ps.acceptance * direct.key_rate, 1e-9)
            << km << " km, V* " << v_star;
      }
    }
  }
}

TEST(OptimizeProperty, GainOptimumDominatesUnfilteredRate) {
  for (auto mode : {kTrusted, kUntrusted}) {
    for (double km = 0.0; km <= 80.0; km += 2.5) {
      const auto p = fiber_point(km);
      const auto best = sqcc::optimize_gain(p, mode);
      const auto none = sqcc::asymptotic_key_rate(p, 0.0, mode);
      EXPECT_GE(best.key_rate, none.key_rate) << km;
      EXPECT_GE(best.gain, 0.0);
    }
  }
}

TEST(Optimize, OptimalGainAtInsetPoint) {
  const auto best = sqcc::optimize_gain(fiber_point(41.0), kTrusted);
  EXPECT_NEAR(best.gain, 0.25, 0.02);
  EXPECT_GT(best.key_rate, 5.69e-3 * 0.9);
}

TEST(Optimize, NoFilterNeededAtShortDistanceUntrusted) {
  auto p = fiber_point(20.0);
  p.efficiency = 0.95;
  p.electronic_noise = 0.01;
  const auto best = sqcc::optimize_gain(p, kUntrusted);
  const auto none = sqcc::asymptotic_key_rate(p, 0.0, kUntrusted);
  EXPECT_NEAR(best.key_rate, none.key_rate, 1e-6 * std::abs(none.key_rate) + 1e-9);
}

TEST(Optimize, VarianceOptimumDominatesNominal) {
  for (double km : {10.0, 30.0, 50.0, 70.0}) {
    const auto p = fiber_point(km);
    const auto best = sqcc::optimize_modulation_variance(p, kTrusted);
    EXPECT_GE(best.key_rate, sqcc::asymptotic_key_rate(p, 0.0, kTrusted).key_rate);
  }
}

TEST(Optimize, GridGoldenFindsParabolaPeak) {
  const auto m = sqcc::grid_golden_maximize([](double x) { return -(x - 1.2345) * (x - 1.2345); },
                                            0.0, 3.0, 16, 1e-8);
  EXPECT_NEAR(m.x, 1.2345, 1e-7);
  EXPECT_NEAR(m.value, 0.0, 1e-12);
  const auto edge = sqcc::grid_golden_maximize([](double x) { return -x; }, 0.0, 3.0, 16, 1e-6);
  EXPECT_EQ(edge.x, 0.0);
  EXPECT_THROW(sqcc::grid_golden_maximize([](double x) { return x; }, 1.0, 0.0, 16, 1e-6),
               sqcc::DomainError);
}

TEST(Optimize, InfeasiblePointsAreSkipped) {
  const auto m = sqcc::grid_golden_maximize(
      [](double x) {
        if (x < 1.0) throw sqcc::NonPositiveCorrelation("too small");
        return -(x - 2.0) * (x - 2.0);
      },
      0.0, 3.0, 31, 1e-8);
  EXPECT_NEAR(m.x, 2.0, 1e-6);
}
