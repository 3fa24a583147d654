#include <gtest/gtest.h>

#include <random>

#include "wlansim/traffic.hpp"

using namespace wlansim;

namespace {

TEST(GenerateVideo, FrameSpacing) {
  VideoProfile p;
  p.fps = 25.0;
  auto frames = generate_video(p, 1.0);
  ASSERT_EQ(frames.size(), 25u);
  for (std::size_t i = 0; i < frames.size(); ++i)
    EXPECT_EQ(frames[i].birth_us, static_cast<Microseconds>(i * 40000));
}

TEST(GenerateVideo, GopSizes) {
  VideoProfile p;
  p.gop_length = 10;
  p.i_frame_multiplier = 4.0;
  p.mean_frame_bits = 13000.0;
  auto frames = generate_video(p, 1.0);
  ASSERT_GE(frames.size(), 10u);
  // (4 + 9) * s = 10 * 13000  =>  s = 10000
  EXPECT_DOUBLE_EQ(frames[1].size_bits, 10000.0);
  EXPECT_DOUBLE_EQ(frames[0].size_bits, 40000.0);
  EXPECT_EQ(frames[0].kind, FrameKind::I);
  EXPECT_EQ(frames[1].kind, FrameKind::P);
  EXPECT_EQ(frames[10].kind, FrameKind::I);
}

TEST(GenerateVideo, ShortDurationFloors) {
  VideoProfile p;
  p.fps = 25.0;
  EXPECT_TRUE(generate_video(p, 0.02).empty());
}

TEST(GenerateVideo, OfferedRateMatchesMean) {
  VideoProfile p;
  p.fps = 25.0;
  p.mean_frame_bits = 23920.0;
  const double duration = 10.0;
  double total = 0.0;
  for (const auto& f : generate_video(p, duration)) total += f.size_bits;
  EXPECT_NEAR(total, p.fps * p.mean_frame_bits * duration, p.mean_frame_bits);
}

TEST(Packetize, DivisionWithRemainder) {
  Frame frame{0, 0, 40000.0, FrameKind::I};
  auto packets = packetize(frame, 1500);
  ASSERT_EQ(packets.size(), 4u);
  EXPECT_DOUBLE_EQ(packets[0].size_bits, 12000.0);
  EXPECT_DOUBLE_EQ(packets[2].size_bits, 12000.0);
  EXPECT_DOUBLE_EQ(packets[3].size_bits, 4000.0);
}

TEST(Packetize, ExactFitAndMinimum) {
  EXPECT_EQ(packetize({0, 0, 12000.0, FrameKind::P}, 1500).size(), 1u);
  auto tiny = packetize({0, 0, 1.0, FrameKind::P}, 1500);
  ASSERT_EQ(tiny.size(), 1u);
  EXPECT_DOUBLE_EQ(tiny[0].size_bits, 1.0);
}

TEST(Packetize, BitsConserved) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> size(1.0, 300000.0);
  for (int i = 0; i < 200; ++i) {
    Frame frame{i, 0, size(rng), FrameKind::P};
    double total = 0.0;
    for (const auto& p : packetize(frame, 1500)) {
      EXPECT_LE(p.size_bits, 1500.0 * 8.0);
      EXPECT_EQ(p.frame_id, frame.id);
      total += p.size_bits;
    }
    EXPECT_NEAR(total, frame.size_bits, 1e-9);
  }
}

TEST(GenerateCbr, SpacingAndCount) {
  CbrProfile p{1200.0, 1500};
  auto packets = generate_cbr(p, 1.0);
  ASSERT_EQ(packets.size(), 100u);
  EXPECT_EQ(packets[1].birth_us - packets[0].birth_us, 10000);
  EXPECT_EQ(packets[0].frame_id, -1);
}

TEST(GenerateCbr, ZeroRateAndBoundary) {
  EXPECT_TRUE(generate_cbr({0.0, 1500}, 1.0).empty());
  auto packets = generate_cbr({1200.0, 1500}, 0.005);
  ASSERT_EQ(packets.size(), 1u);
  EXPECT_EQ(packets[0].birth_us, 0);
}

TEST(GenerateCbr, AchievedRateWithinOnePacket) {
  CbrProfile p{12237.0, 1500};
  const double duration = 10.0;
  double total = 0.0;
  for (const auto& pkt : generate_cbr(p, duration)) total += pkt.size_bits;
  EXPECT_NEAR(total, p.rate_kbps * 1000.0 * duration, p.packet_bytes * 8.0);
}

TEST(Generation, Deterministic) {
  VideoProfile v;
  auto a = generate_video(v, 7.3);
  auto b = generate_video(v, 7.3);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].birth_us, b[i].birth_us);
    EXPECT_DOUBLE_EQ(a[i].size_bits, b[i].size_bits);
  }
  TrafficProfile profile = CbrProfile{777.0, 1200};
  auto c = station_packets(profile, 3.1);
  auto d = station_packets(profile, 3.1);
  ASSERT_EQ(c.size(), d.size());
  for (std::size_t i = 0; i < c.size(); ++i) EXPECT_EQ(c[i].birth_us, d[i].birth_us);
}

TEST(StationPackets, SequentialIdsAcrossFrames) {
  VideoProfile v;
  TrafficProfile profile = v;
  auto packets = station_packets(profile, 1.0);
  ASSERT_FALSE(packets.empty());
  for (std::size_t i = 0; i < packets.size(); ++i)
    EXPECT_EQ(packets[i].packet_id, static_cast<std::int64_t>(i));
}

}  // namespace
