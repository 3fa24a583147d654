#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <span>
#include <stdexcept>
#include <vector>

#include "wlansim/macsim.hpp"

namespace wlansim {

struct PsnrParams {
  double psnr_max_db = 40.0;
  double psnr_min_db = 10.0;
  double playout_deadline_ms = 400.0;

  void validate() const {
    if (!(psnr_max_db > psnr_min_db) || psnr_min_db < 0.0)
      throw std::invalid_argument("psnr: need psnr_max > psnr_min >= 0");
    if (!(playout_deadline_ms > 0.0))
      throw std::invalid_argument("psnr: playout_deadline_ms must be positive");
  }
};

/// One station's QoS panel for a run.
struct QosReport {
  double throughput_kbps = 0.0;
  double delay_mean_ms = 0.0;
  double delay_p95_ms = 0.0;
  double packet_jitter_ms = 0.0;
  double frame_jitter_ms = 0.0;
  double frame_rate_fps = 0.0;
  double loss_ratio = 0.0;
  double psnr_db = 0.0;
  bool has_deliveries = false;
  bool has_complete_frames = false;
};

inline double throughput_kbps(std::span<const PacketRecord> records, double duration_s) {
  if (!(duration_s > 0.0)) throw std::invalid_argument("throughput: duration must be positive");
  double bits = 0.0;
  for (const auto& r : records)
    if (r.outcome == Outcome::Delivered) bits += r.size_bits;
  return bits / duration_s / 1000.0;
}

namespace detail {

inline std::vector<const PacketRecord*> delivered_in_order(std::span<const PacketRecord> records) {
  std::vector<const PacketRecord*> out;
  for (const auto& r : records)
    if (r.outcome == Outcome::Delivered) out.push_back(&r);
  std::sort(out.begin(), out.end(), [](const PacketRecord* a, const PacketRecord* b) {
    if (a->delivered_us != b->delivered_us) return a->delivered_us < b->delivered_us;
    return a->packet_id < b->packet_id;
  });
  return out;
}

}  // namespace detail

/// Mean and nearest-rank 95th percentile of per-packet delay, in ms.
inline std::pair<double, double> delay_stats(std::span<const PacketRecord> records) {
  std::vector<double> delays;
  for (const auto& r : records)
    if (r.outcome == Outcome::Delivered)
      delays.push_back(static_cast<double>(r.delivered_us - r.birth_us) / 1000.0);
  if (delays.empty()) throw std::runtime_error("delay_stats: no deliveries");
  double mean = 0.0;
  for (double d : delays) mean += d;
  mean /= static_cast<double>(delays.size());
  std::sort(delays.begin(), delays.end());
  const auto rank = static_cast<std::size_t>(
      std::ceil(0.95 * static_cast<double>(delays.size())));
  return {mean, delays[rank - 1]};
}

/// RFC 3550 interarrival jitter over successive deliveries: J += (|dT| - J)/16.
inline double packet_jitter_ms(std::span<const PacketRecord> records) {
  auto delivered = detail::delivered_in_order(records);
  if (delivered.size() < 2) throw std::runtime_error("packet_jitter: fewer than 2 deliveries");
  double jitter = 0.0;
  double prev_transit = static_cast<double>(delivered[0]->delivered_us - delivered[0]->birth_us) / 1000.0;
  for (std::size_t i = 1; i < delivered.size(); ++i) {
    double transit = static_cast<double>(delivered[i]->delivered_us - delivered[i]->birth_us) / 1000.0;
    jitter += (std::fabs(transit - prev_transit) - jitter) / 16.0;
    prev_transit = transit;
  }
  return jitter;
}

struct FrameStats {
  double frame_rate_fps = 0.0;
  double delay_mean_ms = 0.0;
  double jitter_ms = 0.0;      // population stddev of complete-frame delays
  double on_time_ratio = 0.0;  // complete frames delivered within the deadline
  std::int64_t complete_frames = 0;
  bool empty = true;           // no complete frame in the run
};

/// A frame counts only when every one of its packets was delivered; its
/// delivery time is the latest packet delivery.
inline FrameStats frame_stats(std::span<const PacketRecord> records, double duration_s,
                              double deadline_ms) {
  struct FrameAcc {
    Microseconds birth_us = 0;
    Microseconds last_delivery_us = 0;
    bool complete = true;
  };
  std::map<std::int64_t, FrameAcc> frames;
  for (const auto& r : records) {
    if (r.frame_id < 0) continue;
    auto& f = frames[r.frame_id];
    f.birth_us = r.birth_us;
    if (r.outcome != Outcome::Delivered)
      f.complete = false;
    else
      f.last_delivery_us = std::max(f.last_delivery_us, r.delivered_us);
  }
  FrameStats stats;
  std::vector<double> delays;
  for (const auto& [id, f] : frames) {
    if (!f.complete) continue;
    delays.push_back(static_cast<double>(f.last_delivery_us - f.birth_us) / 1000.0);
  }
  stats.complete_frames = static_cast<std::int64_t>(delays.size());
  stats.frame_rate_fps = static_cast<double>(stats.complete_frames) / duration_s;
  if (delays.empty()) return stats;
  stats.empty = false;
  double mean = 0.0, on_time = 0.0;
  for (double d : delays) {
    mean += d;
    if (d <= deadline_ms) on_time += 1.0;
  }
  mean /= static_cast<double>(delays.size());
  double var = 0.0;
  for (double d : delays) var += (d - mean) * (d - mean);
  var /= static_cast<double>(delays.size());
  stats.delay_mean_ms = mean;
  stats.jitter_ms = std::sqrt(var);
  stats.on_time_ratio = on_time / static_cast<double>(delays.size());
  return stats;
}

inline double loss_ratio(std::span<const PacketRecord> records) {
  if (records.empty()) throw std::runtime_error("loss_ratio: no generated packets");
  std::int64_t lost = 0;
  for (const auto& r : records)
    if (r.outcome != Outcome::Delivered) ++lost;
  return static_cast<double>(lost) / static_cast<double>(records.size());
}

inline double psnr_proxy(double frame_rate_fps, double on_time_ratio, double source_fps,
                         const PsnrParams& params) {
  if (!(source_fps > 0.0)) throw std::invalid_argument("psnr_proxy: source_fps must be positive");
  params.validate();
  const double q = std::clamp(frame_rate_fps / source_fps, 0.0, 1.0) *
                   std::clamp(on_time_ratio, 0.0, 1.0);
  return params.psnr_min_db + (params.psnr_max_db - params.psnr_min_db) * q;
}

/// Full panel for one station. Frame and PSNR fields stay zero for
/// stations without a video profile.
inline QosReport qos_report(std::span<const PacketRecord> records, double duration_s,
                            const VideoProfile* video, const PsnrParams& psnr = {}) {
  QosReport report;
  if (records.empty()) return report;
  report.throughput_kbps = throughput_kbps(records, duration_s);
  report.loss_ratio = loss_ratio(records);
  std::int64_t delivered = 0;
  for (const auto& r : records)
    if (r.outcome == Outcome::Delivered) ++delivered;
  if (delivered > 0) {
    report.has_deliveries = true;
    auto [mean, p95] = delay_stats(records);
    report.delay_mean_ms = mean;
    report.delay_p95_ms = p95;
    if (delivered >= 2) report.packet_jitter_ms = packet_jitter_ms(records);
  }
  if (video != nullptr) {
    auto fs = frame_stats(records, duration_s, psnr.playout_deadline_ms);
    report.frame_rate_fps = fs.frame_rate_fps;
    report.frame_jitter_ms = fs.jitter_ms;
    report.has_complete_frames = !fs.empty;
    report.psnr_db = psnr_proxy(fs.frame_rate_fps, fs.on_time_ratio, video->fps, psnr);
  }
  return report;
}

}  // namespace wlansim
