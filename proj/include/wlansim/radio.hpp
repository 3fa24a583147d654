#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace wlansim {

/// Physical-layer constants shared by every link in a scenario.
struct RadioParams {
  double tx_power_dbm = 20.0;
  double noise_floor_dbm = -90.0;
  double ref_loss_db = 40.0;  // loss at the 1 m reference distance
  double pathloss_exponent = 3.0;

  void validate() const {
    if (!(noise_floor_dbm < tx_power_dbm))
      throw std::invalid_argument("radio: noise_floor_dbm must be below tx_power_dbm");
    if (!(pathloss_exponent >= 1.5 && pathloss_exponent <= 6.0))
      throw std::invalid_argument("radio: pathloss_exponent must be in [1.5, 6.0]");
    if (!(ref_loss_db > 0.0))
      throw std::invalid_argument("radio: ref_loss_db must be positive");
  }
};

struct RateTier {
  double min_snr_db;    // selection threshold, inclusive
  double phy_rate_kbps;
};

/// SNR -> PHY rate mapping, tiers ordered by descending min_snr.
/// Below the lowest tier the link is down (rate 0).
struct RateTable {
  std::vector<RateTier> tiers;

  void validate() const {
    if (tiers.empty()) throw std::invalid_argument("rate_table: needs at least one tier");
    for (std::size_t i = 0; i < tiers.size(); ++i) {
      if (!(tiers[i].phy_rate_kbps > 0.0))
        throw std::invalid_argument("rate_table: phy_rate_kbps must be positive");
      if (i > 0) {
        if (!(tiers[i].min_snr_db < tiers[i - 1].min_snr_db))
          throw std::invalid_argument("rate_table: min_snr_db must be strictly decreasing");
        if (!(tiers[i].phy_rate_kbps < tiers[i - 1].phy_rate_kbps))
          throw std::invalid_argument("rate_table: phy_rate_kbps must be strictly decreasing");
      }
    }
  }

  static RateTable dot11b() {
    return RateTable{{{25.0, 11000.0}, {18.0, 5500.0}, {10.0, 2000.0}, {4.0, 1000.0}}};
  }

  static RateTable dot11g() {
    return RateTable{{{25.0, 54000.0},
                      {23.0, 48000.0},
                      {19.0, 36000.0},
                      {14.0, 24000.0},
                      {11.0, 18000.0},
                      {8.0, 12000.0},
                      {6.0, 9000.0},
                      {4.0, 6000.0}}};
  }

  static RateTable named(const std::string& name) {
    if (name == "11b") return dot11b();
    if (name == "11g") return dot11g();
    throw std::invalid_argument("rate_table: unknown named table \"" + name + "\"");
  }
};

/// Per-tier logistic packet error model, scaled by packet length.
struct PerModel {
  struct Tier {
    double midpoint_db;
    double slope_per_db;
  };
  std::vector<Tier> tiers;  // parallel to RateTable::tiers
  double reference_packet_bits = 12000.0;

  /// Midpoints sit below each tier's selection threshold so that any
  /// selected rate has per-attempt PER < 0.5 at the reference length.
  static PerModel for_table(const RateTable& table, double midpoint_offset_db = 5.0,
                            double slope_per_db = 1.0, double reference_packet_bits = 12000.0) {
    if (!(midpoint_offset_db > 0.0))
      throw std::invalid_argument("per_model: midpoint_offset_db must be positive");
    if (!(slope_per_db > 0.0))
      throw std::invalid_argument("per_model: slope_per_db must be positive");
    if (!(reference_packet_bits > 0.0))
      throw std::invalid_argument("per_model: reference_packet_bits must be positive");
    PerModel m;
    m.reference_packet_bits = reference_packet_bits;
    m.tiers.reserve(table.tiers.size());
    for (const auto& t : table.tiers)
      m.tiers.push_back({t.min_snr_db - midpoint_offset_db, slope_per_db});
    return m;
  }
};

inline double path_loss_db(double distance_m, const RadioParams& params) {
  if (!(distance_m > 0.0))
    throw std::domain_error("path_loss_db: distance must be positive");
  return params.ref_loss_db + 10.0 * params.pathloss_exponent * std::log10(distance_m);
}

/// Index of the highest tier whose min_snr <= snr; -1 when the link is down.
inline int rate_tier_index(double snr_db, const RateTable& table) {
  for (std::size_t i = 0; i < table.tiers.size(); ++i)
    if (snr_db >= table.tiers[i].min_snr_db) return static_cast<int>(i);
  return -1;
}

inline double phy_rate_kbps(double snr_db, const RateTable& table) {
  int i = rate_tier_index(snr_db, table);
  return i < 0 ? 0.0 : table.tiers[i].phy_rate_kbps;
}

inline double packet_error_prob(double snr_db, int tier, double packet_bits,
                                const PerModel& model) {
  if (tier < 0 || tier >= static_cast<int>(model.tiers.size()))
    throw std::out_of_range("packet_error_prob: unknown rate tier");
  if (!(packet_bits > 0.0))
    throw std::invalid_argument("packet_error_prob: packet_bits must be positive");
  const auto& t = model.tiers[tier];
  double base = 1.0 / (1.0 + std::exp(t.slope_per_db * (snr_db - t.midpoint_db)));
  double per = 1.0 - std::pow(1.0 - base, packet_bits / model.reference_packet_bits);
  if (per < 0.0) per = 0.0;
  if (per > 1.0) per = 1.0;
  return per;
}

}  // namespace wlansim
