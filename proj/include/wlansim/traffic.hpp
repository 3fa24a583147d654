#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <variant>
#include <vector>

namespace wlansim {

using Microseconds = std::int64_t;

inline Microseconds to_us(double seconds) {
  return static_cast<Microseconds>(std::llround(seconds * 1e6));
}

struct VideoProfile {
  double fps = 25.0;
  double mean_frame_bits = 23920.0;
  int gop_length = 10;          // every gop_length-th frame is an I frame
  double i_frame_multiplier = 4.0;
  int mtu_bytes = 1500;

  void validate() const {
    if (!(fps > 0.0)) throw std::invalid_argument("video: fps must be positive");
    if (!(mean_frame_bits > 0.0)) throw std::invalid_argument("video: mean_frame_bits must be positive");
    if (gop_length < 1) throw std::invalid_argument("video: gop_length must be >= 1");
    if (!(i_frame_multiplier >= 1.0)) throw std::invalid_argument("video: i_frame_multiplier must be >= 1");
    if (mtu_bytes < 100) throw std::invalid_argument("video: mtu_bytes must be >= 100");
  }
};

struct CbrProfile {
  double rate_kbps = 0.0;
  int packet_bytes = 1500;

  void validate() const {
    if (rate_kbps < 0.0) throw std::invalid_argument("cbr: rate_kbps must be >= 0");
    if (packet_bytes < 100) throw std::invalid_argument("cbr: packet_bytes must be >= 100");
  }
};

using TrafficProfile = std::variant<std::monostate, VideoProfile, CbrProfile>;

enum class FrameKind { I, P };

struct Frame {
  std::int64_t id;
  Microseconds birth_us;
  double size_bits;
  FrameKind kind;
};

struct Packet {
  std::int64_t packet_id;
  std::int64_t frame_id;  // -1 for CBR packets
  Microseconds birth_us;
  double size_bits;
};

/// Deterministic I/P pattern: P frames carry s bits and every gop_length-th
/// frame carries k*s, with s chosen so the GOP average equals mean_frame_bits.
inline std::vector<Frame> generate_video(const VideoProfile& profile, double duration_s) {
  profile.validate();
  if (!(duration_s > 0.0)) throw std::invalid_argument("generate_video: duration must be positive");
  const auto count = static_cast<std::int64_t>(std::floor(duration_s * profile.fps + 1e-9));
  const double n = profile.gop_length;
  const double s = n * profile.mean_frame_bits / (profile.i_frame_multiplier + n - 1.0);
  std::vector<Frame> frames;
  frames.reserve(static_cast<std::size_t>(count));
  for (std::int64_t i = 0; i < count; ++i) {
    const bool is_i = (i % profile.gop_length) == 0;
    frames.push_back({i, static_cast<Microseconds>(std::llround(i * 1e6 / profile.fps)),
                      is_i ? profile.i_frame_multiplier * s : s, is_i ? FrameKind::I : FrameKind::P});
  }
  return frames;
}

inline std::vector<Packet> packetize(const Frame& frame, int mtu_bytes) {
  if (mtu_bytes < 100) throw std::invalid_argument("packetize: mtu_bytes must be >= 100");
  const double full = mtu_bytes * 8.0;
  std::vector<Packet> packets;
  double remaining = frame.size_bits;
  std::int64_t idx = 0;
  while (remaining > full) {
    packets.push_back({idx++, frame.id, frame.birth_us, full});
    remaining -= full;
  }
  packets.push_back({idx, frame.id, frame.birth_us, remaining});
  return packets;
}

inline std::vector<Packet> generate_cbr(const CbrProfile& profile, double duration_s) {
  profile.validate();
  if (!(duration_s > 0.0)) throw std::invalid_argument("generate_cbr: duration must be positive");
  std::vector<Packet> packets;
  if (profile.rate_kbps == 0.0) return packets;
  const double bits = profile.packet_bytes * 8.0;
  const double spacing_us = bits * 1000.0 / profile.rate_kbps;
  const Microseconds duration_us = to_us(duration_s);
  for (std::int64_t i = 0;; ++i) {
    const auto t = static_cast<Microseconds>(std::llround(i * spacing_us));
    if (t >= duration_us) break;
    packets.push_back({i, -1, t, bits});
  }
  return packets;
}

/// All packets a station's profile emits over the run, with packet ids
/// numbered sequentially across the whole stream.
inline std::vector<Packet> station_packets(const TrafficProfile& profile, double duration_s) {
  std::vector<Packet> out;
  if (const auto* video = std::get_if<VideoProfile>(&profile)) {
    std::int64_t next_id = 0;
    for (const auto& frame : generate_video(*video, duration_s))
      for (auto pkt : packetize(frame, video->mtu_bytes)) {
        pkt.packet_id = next_id++;
        out.push_back(pkt);
      }
  } else if (const auto* cbr = std::get_if<CbrProfile>(&profile)) {
    out = generate_cbr(*cbr, duration_s);
  }
  return out;
}

}  // namespace wlansim
