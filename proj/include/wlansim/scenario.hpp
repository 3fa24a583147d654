#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "wlansim/radio.hpp"
#include "wlansim/traffic.hpp"

namespace wlansim {

using ApId = std::string;
using StationId = std::string;

struct AccessPoint {
  ApId id;
  double x_m = 0.0;
  double y_m = 0.0;
  int channel = 1;
};

struct Station {
  StationId id;
  double x_m = 0.0;
  double y_m = 0.0;
  double offered_kbps = 0.0;  // declared demand, the load-accounting unit
  TrafficProfile traffic;
};

enum class PolicyKind { StrongestSnr, Lba, SnrAwareLba };

inline const char* to_string(PolicyKind kind) {
  switch (kind) {
    case PolicyKind::StrongestSnr: return "strongest-snr";
    case PolicyKind::Lba: return "lba";
    case PolicyKind::SnrAwareLba: return "snr-lba";
  }
  return "?";
}

inline PolicyKind policy_kind_from_string(const std::string& s) {
  if (s == "strongest-snr") return PolicyKind::StrongestSnr;
  if (s == "lba") return PolicyKind::Lba;
  if (s == "snr-lba") return PolicyKind::SnrAwareLba;
  throw std::invalid_argument("policy: unknown kind \"" + s + "\"");
}

struct PolicyParams {
  double beta = 0.2;               // over/under band half-width around mean load
  double assoc_threshold_db = 4.0; // below this an AP is inaudible
  bool guard_enabled = false;
  int max_handoffs = 1000;

  void validate() const {
    if (!(beta > 0.0)) throw std::invalid_argument("policy: beta must be positive");
    if (max_handoffs < 0) throw std::invalid_argument("policy: max_handoffs must be >= 0");
  }
};

struct SimConfig {
  double duration_s = 60.0;
  std::uint64_t seed = 1;
  int queue_capacity = 500;        // packets per AP, all destinations together
  int retry_limit = 4;             // extra attempts after the first
  double per_packet_overhead_s = 0.0008;

  void validate() const {
    if (!(duration_s > 0.0)) throw std::invalid_argument("sim: duration_s must be positive");
    if (queue_capacity < 1) throw std::invalid_argument("sim: queue_capacity must be >= 1");
    if (retry_limit < 0) throw std::invalid_argument("sim: retry_limit must be >= 0");
    if (per_packet_overhead_s < 0.0)
      throw std::invalid_argument("sim: per_packet_overhead_s must be >= 0");
  }
};

/// Complete description of one testbed: topology, radio constants,
/// traffic demands, pinned SNRs, policy knobs and simulation config.
struct Scenario {
  std::string name = "scenario";
  RadioParams radio;
  RateTable rate_table = RateTable::dot11b();
  PerModel per_model = PerModel::for_table(RateTable::dot11b());
  std::vector<AccessPoint> aps;
  std::vector<Station> stations;
  std::map<std::pair<ApId, StationId>, double> snr_overrides;
  std::map<StationId, ApId> initial_associations;
  PolicyKind policy = PolicyKind::StrongestSnr;
  PolicyParams policy_params;
  SimConfig sim;

  const AccessPoint& ap(const ApId& id) const {
    for (const auto& a : aps)
      if (a.id == id) return a;
    throw std::out_of_range("scenario: unknown ap \"" + id + "\"");
  }

  const Station& station(const StationId& id) const {
    for (const auto& s : stations)
      if (s.id == id) return s;
    throw std::out_of_range("scenario: unknown station \"" + id + "\"");
  }

  std::optional<double> snr_override(const ApId& ap_id, const StationId& station_id) const {
    auto it = snr_overrides.find({ap_id, station_id});
    if (it == snr_overrides.end()) return std::nullopt;
    return it->second;
  }
};

}  // namespace wlansim
