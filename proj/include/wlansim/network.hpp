#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <utility>
#include <vector>

#include "wlansim/scenario.hpp"

namespace wlansim {

enum class HandoffReason { LoadBalance };

/// A recorded reassociation, with both link SNRs read at decision time.
struct Handoff {
  StationId station;
  ApId from_ap;
  ApId to_ap;
  double snr_old_db;
  double snr_new_db;
  HandoffReason reason = HandoffReason::LoadBalance;
};

/// Association map plus the per-AP load cache it implies.
struct NetworkState {
  std::map<StationId, ApId> association;
  std::map<ApId, double> loads_kbps;  // one entry per AP, associated or not
};

inline NetworkState initial_state(const Scenario& scenario) {
  NetworkState state;
  for (const auto& ap : scenario.aps) state.loads_kbps[ap.id] = 0.0;
  return state;
}

inline double ap_load(const NetworkState& state, const ApId& ap) {
  auto it = state.loads_kbps.find(ap);
  if (it == state.loads_kbps.end())
    throw std::out_of_range("ap_load: unknown ap \"" + ap + "\"");
  return it->second;
}

inline NetworkState associate(NetworkState state, const Scenario& scenario,
                              const StationId& station, const ApId& ap) {
  const auto& st = scenario.station(station);
  if (state.loads_kbps.find(ap) == state.loads_kbps.end())
    throw std::out_of_range("associate: unknown ap \"" + ap + "\"");
  auto prev = state.association.find(station);
  if (prev != state.association.end()) {
    if (prev->second == ap) return state;
    state.loads_kbps[prev->second] -= st.offered_kbps;
  }
  state.association[station] = ap;
  state.loads_kbps[ap] += st.offered_kbps;
  return state;
}

inline double snr_db(const Scenario& scenario, const ApId& ap_id, const StationId& station_id) {
  const auto& ap = scenario.ap(ap_id);
  const auto& station = scenario.station(station_id);
  if (auto pinned = scenario.snr_override(ap_id, station_id)) return *pinned;
  const double dx = ap.x_m - station.x_m;
  const double dy = ap.y_m - station.y_m;
  const double distance = std::sqrt(dx * dx + dy * dy);
  return scenario.radio.tx_power_dbm - path_loss_db(distance, scenario.radio) -
         scenario.radio.noise_floor_dbm;
}

/// APs audible to the station, strongest first, ties by ascending AP id.
inline std::vector<std::pair<ApId, double>> audible_aps(const Scenario& scenario,
                                                        const StationId& station,
                                                        double threshold_db) {
  std::vector<std::pair<ApId, double>> out;
  for (const auto& ap : scenario.aps) {
    double snr = snr_db(scenario, ap.id, station);
    if (snr >= threshold_db) out.emplace_back(ap.id, snr);
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  return out;
}

}  // namespace wlansim
