#include <gtest/gtest.h>

#include <random>

#include "wlansim/radio.hpp"

using namespace wlansim;

namespace {

RadioParams default_params() {
  return RadioParams{20.0, -90.0, 40.0, 3.0};
}

TEST(PathLoss, ReferenceDistance) {
  EXPECT_DOUBLE_EQ(path_loss_db(1.0, default_params()), 40.0);
}

TEST(PathLoss, LogDistanceValues) {
  EXPECT_NEAR(path_loss_db(10.0, default_params()), 70.0, 1e-12);
  EXPECT_NEAR(path_loss_db(100.0, default_params()), 100.0, 1e-12);
}

TEST(PathLoss, RejectsNonPositiveDistance) {
  EXPECT_THROW(path_loss_db(0.0, default_params()), std::domain_error);
  EXPECT_THROW(path_loss_db(-3.0, default_params()), std::domain_error);
}

TEST(PathLoss, MonotoneInDistance) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> dist(0.01, 500.0);
  std::uniform_real_distribution<double> exp_dist(1.5, 6.0);
  for (int i = 0; i < 500; ++i) {
    RadioParams p = default_params();
    p.pathloss_exponent = exp_dist(rng);
    double a = dist(rng), b = dist(rng);
    if (a > b) std::swap(a, b);
    EXPECT_LE(path_loss_db(a, p), path_loss_db(b, p));
  }
}

TEST(RateTable, DefaultTierSelection) {
  const auto table = RateTable::dot11b();
  EXPECT_DOUBLE_EQ(phy_rate_kbps(50.0, table), 11000.0);
  EXPECT_DOUBLE_EQ(phy_rate_kbps(4.0, table), 1000.0);  // inclusive boundary
  EXPECT_DOUBLE_EQ(phy_rate_kbps(3.9, table), 0.0);
  EXPECT_DOUBLE_EQ(phy_rate_kbps(18.0, table), 5500.0);
}

TEST(RateTable, ValidationRejectsBadTables) {
  RateTable equal_snr{{{10.0, 2000.0}, {10.0, 1000.0}}};
  EXPECT_THROW(equal_snr.validate(), std::invalid_argument);
  RateTable rate_up{{{10.0, 1000.0}, {5.0, 2000.0}}};
  EXPECT_THROW(rate_up.validate(), std::invalid_argument);
  RateTable zero_rate{{{10.0, 0.0}}};
  EXPECT_THROW(zero_rate.validate(), std::invalid_argument);
  EXPECT_NO_THROW(RateTable::dot11b().validate());
  EXPECT_NO_THROW(RateTable::dot11g().validate());
}

TEST(RateTable, NamedLookup) {
  EXPECT_EQ(RateTable::named("11b").tiers.size(), 4u);
  EXPECT_EQ(RateTable::named("11g").tiers.size(), 8u);
  EXPECT_THROW(RateTable::named("11n"), std::invalid_argument);
}

TEST(PerModel, LogisticMidpoint) {
  const auto table = RateTable::dot11b();
  const auto model = PerModel::for_table(table);
  // Tier 0 midpoint is 20 dB; at midpoint with the reference length, PER = 1/2.
  EXPECT_NEAR(packet_error_prob(20.0, 0, 12000.0, model), 0.5, 1e-12);
}

TEST(PerModel, HighSnrLimit) {
  const auto model = PerModel::for_table(RateTable::dot11b());
  EXPECT_NEAR(packet_error_prob(200.0, 0, 12000.0, model), 0.0, 1e-12);
}

TEST(PerModel, HandEvaluatedLogistic) {
  // base = 1/(1+e^5) at 5 dB above the midpoint.
  const auto model = PerModel::for_table(RateTable::dot11b());
  EXPECT_NEAR(packet_error_prob(25.0, 0, 12000.0, model), 1.0 / (1.0 + std::exp(5.0)), 1e-12);
  EXPECT_NEAR(packet_error_prob(25.0, 0, 12000.0, model), 0.00669, 1e-5);
}

TEST(PerModel, UnknownTierThrows) {
  const auto model = PerModel::for_table(RateTable::dot11b());
  EXPECT_THROW(packet_error_prob(25.0, 7, 12000.0, model), std::out_of_range);
  EXPECT_THROW(packet_error_prob(25.0, -1, 12000.0, model), std::out_of_range);
}

TEST(PerModel, MonotoneInSnrAndLength) {
  const auto model = PerModel::for_table(RateTable::dot11b());
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> snr(-10.0, 60.0);
  std::uniform_real_distribution<double> bits(1.0, 100000.0);
  for (int i = 0; i < 500; ++i) {
    double s1 = snr(rng), s2 = snr(rng);
    if (s1 > s2) std::swap(s1, s2);
    double b1 = bits(rng), b2 = bits(rng);
    if (b1 > b2) std::swap(b1, b2);
    int tier = i % 4;
    EXPECT_GE(packet_error_prob(s1, tier, b1, model), packet_error_prob(s2, tier, b1, model));
    EXPECT_LE(packet_error_prob(s1, tier, b1, model), packet_error_prob(s1, tier, b2, model));
  }
}

TEST(PerModel, SelectedRatesBelowHalfPer) {
  for (const auto& table : {RateTable::dot11b(), RateTable::dot11g()}) {
    const auto model = PerModel::for_table(table);
    for (std::size_t i = 0; i < table.tiers.size(); ++i) {
      EXPECT_LT(model.tiers[i].midpoint_db, table.tiers[i].min_snr_db);
      EXPECT_LT(packet_error_prob(table.tiers[i].min_snr_db, static_cast<int>(i),
                                  model.reference_packet_bits, model),
                0.5);
    }
  }
}

TEST(RadioParams, Validation) {
  RadioParams bad = default_params();
  bad.noise_floor_dbm = 30.0;
  EXPECT_THROW(bad.validate(), std::invalid_argument);
  bad = default_params();
  bad.pathloss_exponent = 1.0;
  EXPECT_THROW(bad.validate(), std::invalid_argument);
  bad = default_params();
  bad.ref_loss_db = 0.0;
  EXPECT_THROW(bad.validate(), std::invalid_argument);
  EXPECT_NO_THROW(default_params().validate());
}

}  // namespace
