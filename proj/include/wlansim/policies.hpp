#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <vector>

#include "wlansim/network.hpp"
#include "wlansim/scenario.hpp"

namespace wlansim {

enum class BalanceClass { Overloaded, Balanced, Underloaded };

struct Move {
  StationId station;
  ApId from_ap;
  ApId to_ap;
  double snr_old_db = 0.0;
  double snr_new_db = 0.0;
};

inline std::optional<ApId> strongest_snr_associate(const StationId& station,
                                                   const Scenario& scenario,
                                                   const PolicyParams& params) {
  auto audible = audible_aps(scenario, station, params.assoc_threshold_db);
  if (audible.empty()) return std::nullopt;
  return audible.front().first;
}

/// APs more than beta above the mean load are Overloaded, more than beta
/// below it Underloaded. An idle network (mean 0) is all Balanced.
inline std::map<ApId, BalanceClass> classify_load(const NetworkState& state,
                                                  const PolicyParams& params) {
  if (state.loads_kbps.empty())
    throw std::invalid_argument("classify_load: no access points");
  double mean = 0.0;
  for (const auto& [ap, load] : state.loads_kbps) mean += load;
  mean /= static_cast<double>(state.loads_kbps.size());
  std::map<ApId, BalanceClass> classes;
  for (const auto& [ap, load] : state.loads_kbps) {
    if (mean > 0.0 && load > (1.0 + params.beta) * mean)
      classes[ap] = BalanceClass::Overloaded;
    else if (mean > 0.0 && load < (1.0 - params.beta) * mean)
      classes[ap] = BalanceClass::Underloaded;
    else
      classes[ap] = BalanceClass::Balanced;
  }
  return classes;
}

inline bool admission_check(const NetworkState& state, const ApId& ap,
                            const PolicyParams& params) {
  auto classes = classify_load(state, params);
  auto it = classes.find(ap);
  if (it == classes.end())
    throw std::out_of_range("admission_check: unknown ap \"" + ap + "\"");
  return it->second != BalanceClass::Overloaded;
}

/// The target link must keep at least half the old link's SNR (dB values).
/// Exactly half is rejected, so a move to SNR1/2 never happens; a move that
/// does not lose any SNR always passes.
inline bool snr_guard(double snr_old_db, double snr_new_db) {
  return snr_new_db >= snr_old_db || snr_new_db > snr_old_db / 2.0;
}

inline double load_spread(const std::map<ApId, double>& loads) {
  double lo = loads.begin()->second, hi = loads.begin()->second;
  for (const auto& [ap, load] : loads) {
    lo = std::min(lo, load);
    hi = std::max(hi, load);
  }
  return hi - lo;
}

/// A move is distributable when it strictly narrows the global load spread
/// and does not leave the target AP Overloaded.
inline bool distribution_check(const NetworkState& state, const Scenario& scenario,
                               const Move& move, const PolicyParams& params) {
  const double offered = scenario.station(move.station).offered_kbps;
  NetworkState after = state;
  if (after.loads_kbps.find(move.from_ap) == after.loads_kbps.end() ||
      after.loads_kbps.find(move.to_ap) == after.loads_kbps.end())
    throw std::out_of_range("distribution_check: unknown ap in move");
  after.loads_kbps[move.from_ap] -= offered;
  after.loads_kbps[move.to_ap] += offered;
  if (!(load_spread(after.loads_kbps) < load_spread(state.loads_kbps))) return false;
  auto classes = classify_load(after, params);
  return classes[move.to_ap] != BalanceClass::Overloaded;
}

/// One admissible station move from an Overloaded to an Underloaded AP,
/// minimizing the post-move spread. Ties fall to the larger target SNR,
/// then the smaller station id, then the smaller target AP id.
inline std::optional<Move> select_candidate(const NetworkState& state,
                                            const Scenario& scenario,
                                            const PolicyParams& params, bool guard) {
  auto classes = classify_load(state, params);
  std::optional<Move> best;
  double best_spread = 0.0;
  for (const auto& station : scenario.stations) {
    auto assoc = state.association.find(station.id);
    if (assoc == state.association.end()) continue;
    const ApId& from = assoc->second;
    if (classes[from] != BalanceClass::Overloaded) continue;
    for (const auto& [to, snr_new] : audible_aps(scenario, station.id, params.assoc_threshold_db)) {
      if (to == from || classes[to] != BalanceClass::Underloaded) continue;
      Move move{station.id, from, to, snr_db(scenario, from, station.id), snr_new};
      if (!distribution_check(state, scenario, move, params)) continue;
      if (guard && !snr_guard(move.snr_old_db, move.snr_new_db)) continue;
      NetworkState after = state;
      after.loads_kbps[from] -= station.offered_kbps;
      after.loads_kbps[to] += station.offered_kbps;
      const double spread = load_spread(after.loads_kbps);
      if (!best || spread < best_spread ||
          (spread == best_spread &&
           (move.snr_new_db > best->snr_new_db ||
            (move.snr_new_db == best->snr_new_db &&
             (move.station < best->station ||
              (move.station == best->station && move.to_ap < best->to_ap)))))) {
        best = move;
        best_spread = spread;
      }
    }
  }
  return best;
}

/// The full selection/distribution loop: apply admissible moves one at a
/// time until none remains or the handoff budget runs out.
inline std::pair<NetworkState, std::vector<Handoff>> rebalance(NetworkState state,
                                                               const Scenario& scenario,
                                                               const PolicyParams& params,
                                                               PolicyKind kind) {
  if (kind == PolicyKind::StrongestSnr)
    throw std::invalid_argument("rebalance: undefined for strongest-snr");
  const bool guard = kind == PolicyKind::SnrAwareLba;
  std::vector<Handoff> handoffs;
  while (static_cast<int>(handoffs.size()) < params.max_handoffs) {
    auto move = select_candidate(state, scenario, params, guard);
    if (!move) break;
    state = associate(std::move(state), scenario, move->station, move->to_ap);
    handoffs.push_back({move->station, move->from_ap, move->to_ap, move->snr_old_db,
                        move->snr_new_db, HandoffReason::LoadBalance});
  }
  return {std::move(state), std::move(handoffs)};
}

}  // namespace wlansim
