#pragma once

#include <algorithm>
#include <cstdint>
#include <deque>
#include <map>
#include <queue>
#include <stdexcept>
#include <variant>
#include <vector>

#include "wlansim/network.hpp"
#include "wlansim/scenario.hpp"
#include "wlansim/traffic.hpp"

namespace wlansim {

enum class Outcome { Delivered, DroppedQueueFull, DroppedRetryLimit, ResidualInQueue };

struct PacketRecord {
  StationId station;
  std::int64_t frame_id;   // -1 for CBR packets
  std::int64_t packet_id;
  Microseconds birth_us;
  Microseconds enqueue_us;
  double size_bits;
  Outcome outcome = Outcome::ResidualInQueue;
  Microseconds delivered_us = 0;
  int attempts = 0;
};

struct SimCounters {
  std::int64_t generated = 0;
  std::int64_t delivered = 0;
  std::int64_t dropped_queue = 0;
  std::int64_t dropped_retry = 0;
  std::int64_t residual = 0;
};

struct SimResult {
  std::vector<PacketRecord> records;
  std::vector<Handoff> handoffs;  // applied before the run, filled by the caller
  SimConfig config;
  SimCounters counters;
};

namespace detail {

inline std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

/// Counter-based uniform draw keyed by (seed, packet identity, attempt);
/// independent of event ordering, so runs replay bit-identically.
inline double attempt_draw(std::uint64_t seed, const StationId& station, std::int64_t frame_id,
                           std::int64_t packet_id, int attempt) {
  std::uint64_t h = 1469598103934665603ull;
  for (char c : station) h = (h ^ static_cast<unsigned char>(c)) * 1099511628211ull;
  h = mix64(h ^ mix64(seed));
  h = mix64(h ^ static_cast<std::uint64_t>(frame_id + 2));
  h = mix64(h ^ static_cast<std::uint64_t>(packet_id + 1));
  h = mix64(h ^ static_cast<std::uint64_t>(attempt));
  return static_cast<double>(h >> 11) * 0x1.0p-53;
}

}  // namespace detail

/// Downlink MAC run: per-AP tail-drop queue shared by all destinations,
/// round-robin transmit opportunities per backlogged destination, Bernoulli
/// loss with retries. Pure function of (scenario, state, config).
inline SimResult run(const Scenario& scenario, const NetworkState& state,
                     const SimConfig& config) {
  config.validate();
  const Microseconds duration_us = to_us(config.duration_s);
  const Microseconds overhead_us = to_us(config.per_packet_overhead_s);

  struct LinkInfo {
    double rate_kbps = 0.0;
    int tier = -1;
    double per_base = 0.0;  // per-attempt error prob at the reference length
  };

  struct ApState {
    std::vector<StationId> members;                      // ascending id
    std::map<StationId, std::deque<std::size_t>> queues; // record indices
    std::map<StationId, LinkInfo> links;
    int occupancy = 0;
    bool busy = false;
    std::size_t rr_pos = 0;  // index into members of the last served station
  };

  std::map<ApId, ApState> aps;
  for (const auto& ap : scenario.aps) aps[ap.id];

  SimResult result;
  result.config = config;

  // Generate every station's packet stream and pin down its serving AP.
  struct Arrival {
    Microseconds t;
    ApId ap;
    StationId station;
    std::int64_t packet_id;
    std::size_t record;
  };
  std::vector<Arrival> arrivals;
  for (const auto& station : scenario.stations) {
    auto packets = station_packets(station.traffic, config.duration_s);
    auto assoc = state.association.find(station.id);
    if (!packets.empty() && assoc == state.association.end())
      throw std::runtime_error("macsim: traffic sink \"" + station.id + "\" is not associated");
    if (assoc == state.association.end()) continue;
    auto& ap = aps.at(assoc->second);
    ap.members.push_back(station.id);
    const double snr = snr_db(scenario, assoc->second, station.id);
    LinkInfo link;
    link.tier = rate_tier_index(snr, scenario.rate_table);
    if (link.tier >= 0) {
      link.rate_kbps = scenario.rate_table.tiers[link.tier].phy_rate_kbps;
      const auto& pm = scenario.per_model.tiers.at(link.tier);
      link.per_base = 1.0 / (1.0 + std::exp(pm.slope_per_db * (snr - pm.midpoint_db)));
    }
    ap.links[station.id] = link;
    for (const auto& pkt : packets) {
      result.records.push_back({station.id, pkt.frame_id, pkt.packet_id, pkt.birth_us,
                                pkt.birth_us, pkt.size_bits});
      arrivals.push_back({pkt.birth_us, assoc->second, station.id, pkt.packet_id,
                          result.records.size() - 1});
    }
  }
  for (auto& [id, ap] : aps) std::sort(ap.members.begin(), ap.members.end());
  std::sort(arrivals.begin(), arrivals.end(), [](const Arrival& a, const Arrival& b) {
    if (a.t != b.t) return a.t < b.t;
    if (a.ap != b.ap) return a.ap < b.ap;
    if (a.station != b.station) return a.station < b.station;
    return a.packet_id < b.packet_id;
  });

  struct Completion {
    Microseconds t;
    ApId ap;
    StationId station;
    std::int64_t packet_id;
    std::size_t record;
    int attempts;
    bool delivered;
    bool operator>(const Completion& o) const {
      if (t != o.t) return t > o.t;
      if (ap != o.ap) return ap > o.ap;
      if (station != o.station) return station > o.station;
      return packet_id > o.packet_id;
    }
  };
  std::priority_queue<Completion, std::vector<Completion>, std::greater<>> completions;

  auto start_service = [&](const ApId& ap_id, ApState& ap, Microseconds now) {
    const std::size_t n = ap.members.size();
    for (std::size_t step = 1; step <= n; ++step) {
      const std::size_t pos = (ap.rr_pos + step) % n;
      const StationId& sta = ap.members[pos];
      auto& queue = ap.queues[sta];
      const LinkInfo& link = ap.links[sta];
      if (queue.empty() || link.tier < 0) continue;
      const std::size_t rec_idx = queue.front();
      queue.pop_front();
      --ap.occupancy;
      ap.rr_pos = pos;
      ap.busy = true;
      const PacketRecord& rec = result.records[rec_idx];
      const double per = 1.0 - std::pow(1.0 - link.per_base,
                                        rec.size_bits / scenario.per_model.reference_packet_bits);
      const Microseconds airtime =
          static_cast<Microseconds>(std::llround(rec.size_bits * 1000.0 / link.rate_kbps)) +
          overhead_us;
      Microseconds total = 0;
      int attempts = 0;
      bool delivered = false;
      for (int a = 1; a <= config.retry_limit + 1; ++a) {
        total += airtime;
        attempts = a;
        if (detail::attempt_draw(config.seed, sta, rec.frame_id, rec.packet_id, a) >= per) {
          delivered = true;
          break;
        }
      }
      completions.push({now + total, ap_id, sta, rec.packet_id, rec_idx, attempts, delivered});
      return;
    }
    ap.busy = false;
  };

  std::size_t next_arrival = 0;
  for (;;) {
    const bool have_arrival = next_arrival < arrivals.size();
    const bool have_completion = !completions.empty();
    if (!have_arrival && !have_completion) break;
    // Completions outrank arrivals at the same instant: a freed slot is
    // visible to the packet arriving at that tick.
    bool take_completion =
        have_completion && (!have_arrival || completions.top().t <= arrivals[next_arrival].t);
    const Microseconds t = take_completion ? completions.top().t : arrivals[next_arrival].t;
    if (t > duration_us) break;
    if (take_completion) {
      Completion c = completions.top();
      completions.pop();
      PacketRecord& rec = result.records[c.record];
      rec.outcome = c.delivered ? Outcome::Delivered : Outcome::DroppedRetryLimit;
      rec.delivered_us = c.t;
      rec.attempts = c.attempts;
      auto& ap = aps.at(c.ap);
      ap.busy = false;
      start_service(c.ap, ap, c.t);
    } else {
      const Arrival& a = arrivals[next_arrival++];
      auto& ap = aps.at(a.ap);
      if (ap.occupancy >= config.queue_capacity) {
        result.records[a.record].outcome = Outcome::DroppedQueueFull;
      } else {
        ap.queues[a.station].push_back(a.record);
        ++ap.occupancy;
        if (!ap.busy) start_service(a.ap, ap, a.t);
      }
    }
  }

  // Whatever never completed inside the horizon ages out in place.
  auto& counters = result.counters;
  counters.generated = static_cast<std::int64_t>(result.records.size());
  for (auto& rec : result.records) {
    switch (rec.outcome) {
      case Outcome::Delivered: ++counters.delivered; break;
      case Outcome::DroppedQueueFull: ++counters.dropped_queue; break;
      case Outcome::DroppedRetryLimit: ++counters.dropped_retry; break;
      case Outcome::ResidualInQueue:
        rec.delivered_us = 0;
        rec.attempts = 0;
        ++counters.residual;
        break;
    }
  }
  return result;
}

}  // namespace wlansim
