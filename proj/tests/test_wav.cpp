#include <gtest/gtest.h>

#include <cmath>
#include <fstream>
#include <random>

#include "echo_ranger/wav.hpp"
#include "temp_dir.hpp"

namespace er = echo_ranger;

namespace {
er::SampledSignal test_signal(double fs) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-0.9, 0.9);
  std::vector<double> x(1000);
  for (auto& v : x) v = u(rng);
  return {x, fs};
}
}  // namespace

TEST(Wav, Float32RoundTrip) {
  const auto x = test_signal(8000.0);
  const auto y = er::decode_wav(er::encode_wav(x, er::WavFormat::Float32));
  EXPECT_EQ(y.sample_rate, 8000.0);
  ASSERT_EQ(y.size(), x.size());
  for (std::size_t i = 0; i < x.size(); ++i) EXPECT_NEAR(y.samples[i], x.samples[i], 1e-7);
}

TEST(Wav, Pcm16RoundTrip) {
  const auto x = test_signal(44100.0);
  const auto y = er::decode_wav(er::encode_wav(x, er::WavFormat::Pcm16));
  ASSERT_EQ(y.size(), x.size());
  for (std::size_t i = 0; i < x.size(); ++i) EXPECT_NEAR(y.samples[i], x.samples[i], 1.0 / 32767.0);
}

TEST(Wav, FileRoundTripAndRateRounding) {
  TempDir dir;
  const auto x = test_signal(5512.5);
  er::write_wav(dir.file("a.wav"), x);
  const auto y = er::read_wav(dir.file("a.wav"));
  // The header stores an integer rate.
  EXPECT_EQ(y.sample_rate, 5513.0);
  EXPECT_EQ(y.size(), x.size());
}

TEST(Wav, RejectsGarbage) {
  EXPECT_THROW(er::decode_wav("not a wav file at all, definitely not"), er::Error);
  EXPECT_THROW(er::decode_wav(""), er::Error);
  EXPECT_THROW(er::read_wav("/nonexistent/path.wav"), er::Error);
}
