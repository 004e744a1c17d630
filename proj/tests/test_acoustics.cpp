#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <vector>

#include "echo_ranger/acoustics.hpp"
#include "echo_ranger/harness.hpp"

namespace er = echo_ranger;

namespace {

std::vector<std::size_t> nonzero_indices(const std::vector<double>& h) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < h.size(); ++i)
    if (h[i] != 0.0) out.push_back(i);
  return out;
}

// Direct O(N L) linear convolution, truncated to the length of s.
std::vector<double> naive_convolve(const std::vector<double>& s, const std::vector<double>& h) {
  std::vector<double> out(s.size(), 0.0);
  for (std::size_t n = 0; n < s.size(); ++n)
    for (std::size_t l = 0; l < h.size() && l <= n; ++l) out[n] += h[l] * s[n - l];
  return out;
}

// Single-bin DFT power at an arbitrary frequency.
double dft_power(const std::vector<double>& x, double freq, double fs) {
  std::complex<double> acc(0.0, 0.0);
  const double w = 2.0 * std::numbers::pi * freq / fs;
  for (std::size_t n = 0; n < x.size(); ++n) acc += x[n] * std::polar(1.0, -w * static_cast<double>(n));
  return std::norm(acc) / static_cast<double>(x.size());
}

er::SceneSpec static_at(const er::Vec3& src) {
  er::SceneSpec s;
  s.trajectory = {{0.0, src}};
  return s;
}

}  // namespace

TEST(ImageSource, DirectPathIndex) {
  er::SceneSpec s;
  const er::Vec3 src{4.0, 3.0, 2.5};
  const auto mic = s.mic_position(src);
  EXPECT_EQ(er::direct_path_index(s, src, mic), 3u);
  const auto h = er::direct_path_rir(s, src, mic);
  ASSERT_EQ(nonzero_indices(h.samples), (std::vector<std::size_t>{3}));
  EXPECT_NEAR(h.samples[3], 1.0 / (4.0 * std::numbers::pi * 0.2), 1e-12);
}

TEST(ImageSource, FirstEchoFromNearWall) {
  er::SceneSpec s;
  const er::Vec3 src{0.5, 3.0, 2.5};
  const auto mic = s.mic_position(src);
  const auto h = er::image_source_rir(s, src, mic);
  const auto nz = nonzero_indices(h.samples);
  ASSERT_GE(nz.size(), 2u);
  EXPECT_EQ(nz[0], 3u);
  EXPECT_EQ(static_cast<int>(nz[1]) - 3, 16);
  EXPECT_EQ(er::first_echo_lag(h.samples, 3), 16);
}

TEST(ImageSource, OrderZeroIsSingleImpulse) {
  er::SceneSpec s;
  s.max_image_order = 0;
  const auto h = er::image_source_rir(s, {2.0, 2.0, 2.0}, {5.0, 4.0, 1.0});
  EXPECT_EQ(nonzero_indices(h.samples).size(), 1u);
}

TEST(ImageSource, ImpulsesDecayWithPathLength) {
  er::SceneSpec s;
  s.max_image_order = 1;
  const er::Vec3 src{2.0, 2.5, 1.5}, mic{5.0, 3.5, 2.0};
  const auto h = er::image_source_rir(s, src, mic);
  const double direct = h.samples[er::direct_path_index(s, src, mic)];
  for (double v : h.samples) EXPECT_LE(v, direct + 1e-15);
}

TEST(ImageSource, Errors) {
  er::SceneSpec s;
  EXPECT_THROW(er::image_source_rir(s, {1, 1, 1}, {1, 1, 1}), er::Error);
  EXPECT_THROW(er::image_source_rir(s, {-1, 1, 1}, {1, 1, 1}), er::Error);
  EXPECT_THROW(er::image_source_rir(s, {1, 1, 1}, {9, 1, 1}), er::Error);
  s.t60 = -0.1;
  EXPECT_THROW(s.validate(), er::Error);
  try {
    s.validate();
  } catch (const er::Error& e) {
    EXPECT_NE(std::string(e.what()).find("scene.t60"), std::string::npos);
  }
}

TEST(ReflectionCoefficient, Pinned) {
  // Sabine inversion for 8 x 6 x 5 m (V = 240, S = 236) at T60 = 0.4 s, c = 343.
  const double expected = std::sqrt(1.0 - 24.0 * std::log(10.0) * 240.0 / (343.0 * 236.0 * 0.4));
  EXPECT_NEAR(er::reflection_coefficient_from_t60({8, 6, 5}, 0.4, 343.0), expected, 1e-15);
  EXPECT_NEAR(expected, 0.768367, 1e-6);
}

TEST(ReflectionCoefficient, MonotoneInT60) {
  double prev = 0.0;
  for (double t60 = 0.2; t60 < 20.0; t60 *= 1.3) {
    const double b = er::reflection_coefficient_from_t60({8, 6, 5}, t60, 343.0);
    EXPECT_GT(b, prev);
    EXPECT_LT(b, 1.0);
    prev = b;
  }
  EXPECT_GT(er::reflection_coefficient_from_t60({8, 6, 5}, 1e6, 343.0), 0.999999);
  EXPECT_THROW(er::reflection_coefficient_from_t60({8, 6, 5}, 0.05, 343.0), er::Error);
  EXPECT_THROW(er::reflection_coefficient_from_t60({8, 6, 5}, 0.0, 343.0), er::Error);
}

TEST(ReflectionCoefficient, ShorterT60GivesLessEnergy) {
  er::SceneSpec a, b;
  b.t60 = 0.2;
  const er::Vec3 src{2.0, 2.0, 2.0}, mic{5.0, 4.0, 1.0};
  EXPECT_LT(er::energy(er::image_source_rir(b, src, mic).samples), er::energy(er::image_source_rir(a, src, mic).samples));
}

TEST(Schroeder, RecoversConfiguredT60) {
  er::SceneSpec s;
  s.rir_length = 5512;
  for (double t60 : {0.3, 0.4, 0.5}) {
    s.t60 = t60;
    const auto h = er::image_source_rir(s, {2.0, 3.0, 1.5}, {5.0, 2.0, 2.0});
    const double est = er::estimate_t60_schroeder(h.samples, s.sample_rate);
    EXPECT_NEAR(est, t60, 0.25 * t60) << t60;
  }
}

TEST(Schroeder, SyntheticExponential) {
  // Energy decays by 60 dB in exactly 0.5 s.
  const double fs = 8000.0;
  std::vector<double> h(8000);
  for (std::size_t i = 0; i < h.size(); ++i) h[i] = std::pow(10.0, -3.0 * (static_cast<double>(i) / fs) / 0.5);
  EXPECT_NEAR(er::estimate_t60_schroeder(h, fs), 0.5, 0.01);
}

TEST(MovingConvolve, StaticMatchesDirectConvolution) {
  er::Rng rng(1);
  const auto s = static_at({3.0, 3.0, 2.0});
  const er::SampledSignal src(er::white_noise(5000, rng), s.sample_rate);
  const auto out = er::moving_convolve(src, s);
  const auto h = er::image_source_rir(s, {3.0, 3.0, 2.0}, s.mic_position({3.0, 3.0, 2.0}));
  const auto ref = naive_convolve(src.samples, h.samples);
  ASSERT_EQ(out.size(), ref.size());
  for (std::size_t i = 0; i < ref.size(); ++i) EXPECT_NEAR(out.samples[i], ref[i], 1e-12) << i;
}

TEST(MovingConvolve, ImpulseGivesRir) {
  auto s = static_at({3.0, 3.0, 2.0});
  std::vector<double> impulse(4096, 0.0);
  impulse[0] = 1.0;
  const auto out = er::moving_convolve({impulse, s.sample_rate}, s);
  const auto h = er::image_source_rir(s, {3.0, 3.0, 2.0}, s.mic_position({3.0, 3.0, 2.0}));
  for (std::size_t i = 0; i < h.size(); ++i) EXPECT_NEAR(out.samples[i], h.samples[i], 1e-12);
  for (std::size_t i = h.size(); i < out.size(); ++i) EXPECT_NEAR(out.samples[i], 0.0, 1e-12);
}

TEST(MovingConvolve, RepeatedPositionIsStatic) {
  er::Rng rng(2);
  auto one = static_at({3.0, 3.0, 2.0});
  auto two = one;
  two.trajectory = {{0.0, {3.0, 3.0, 2.0}}, {1.0, {3.0, 3.0, 2.0}}};
  const er::SampledSignal src(er::white_noise(3000, rng), one.sample_rate);
  EXPECT_EQ(er::moving_convolve(src, one).samples, er::moving_convolve(src, two).samples);
}

TEST(MovingConvolve, MotionCrossFadesBetweenRirs) {
  er::Rng rng(3);
  er::SceneSpec s;
  s.hop = 512;
  s.trajectory = {{0.0, {1.0, 3.0, 2.5}}, {1.0, {6.0, 3.0, 2.5}}};
  const er::SampledSignal src(er::white_noise(4096, rng), s.sample_rate);
  const auto out = er::moving_convolve(src, s);
  EXPECT_EQ(out.size(), src.size());
  // At each hop boundary the output equals the convolution with that point's RIR.
  for (std::size_t m0 : {512u, 1024u, 2048u}) {
    const auto p = s.source_at(static_cast<double>(m0) / s.sample_rate);
    const auto h = er::image_source_rir(s, p, s.mic_position(p));
    double ref = 0.0;
    for (std::size_t l = 0; l < h.size() && l <= m0; ++l) ref += h.samples[l] * src.samples[m0 - l];
    EXPECT_NEAR(out.samples[m0], ref, 1e-10);
  }
}

TEST(RotorNoise, UnitVarianceAndHarmonicPeaks) {
  er::Rng rng(4);
  er::RotorNoiseSpec spec;
  spec.duration = 4.0;
  spec.broadband_level = -10.0;
  const double fs = er::kDefaultSampleRate;
  const auto x = er::synth_rotor_noise(spec, fs, rng);
  EXPECT_NEAR(er::variance(x), 1.0, 1e-12);
  std::vector<double> off;
  for (int k = 1; k < 10; ++k) off.push_back(dft_power(x.samples, 140.0 * k + 70.0, fs));
  std::sort(off.begin(), off.end());
  const double floor = off[off.size() / 2];
  for (int k = 1; k <= 10; ++k) EXPECT_GT(dft_power(x.samples, 140.0 * k, fs), 10.0 * floor) << k;
}

TEST(RotorNoise, PureTone) {
  er::Rng rng(5);
  er::RotorNoiseSpec spec;
  spec.num_harmonics = 1;
  spec.broadband_level = -std::numeric_limits<double>::infinity();
  const double fs = 5600.0;
  const auto x = er::synth_rotor_noise(spec, fs, rng);
  // Unit-variance sinusoid has amplitude sqrt(2).
  const double peak = *std::max_element(x.samples.begin(), x.samples.end());
  EXPECT_NEAR(peak, std::sqrt(2.0), 1e-2);
  EXPECT_GT(dft_power(x.samples, 140.0, fs), 1e6 * dft_power(x.samples, 700.0, fs));
}

TEST(RotorNoise, RejectsAliasedHarmonics) {
  er::Rng rng(6);
  er::RotorNoiseSpec spec;
  spec.num_harmonics = 30;
  EXPECT_THROW(er::synth_rotor_noise(spec, er::kDefaultSampleRate, rng), er::Error);
}

TEST(DiffuseNoise, UnitVarianceAndDecorrelated) {
  er::Rng rng(7);
  const er::SampledSignal ref(er::white_noise(8192, rng), er::kDefaultSampleRate);
  const auto d = er::diffuse_noise(ref, 32, ref.sample_rate, rng);
  EXPECT_EQ(d.size(), ref.size());
  EXPECT_NEAR(er::variance(d), 1.0, 1e-9);
  const double rho = er::dot(d.samples, ref.samples) / std::sqrt(er::energy(d.samples) * er::energy(ref.samples));
  EXPECT_LT(std::abs(rho), 0.3);
}

TEST(DiffuseNoise, MoreDirectionsStayNormalized) {
  er::Rng rng(8);
  const er::SampledSignal ref(er::white_noise(4096, rng), er::kDefaultSampleRate);
  for (int k : {8, 64, 128}) EXPECT_NEAR(er::variance(er::diffuse_noise(ref, k, ref.sample_rate, rng)), 1.0, 1e-9);
  EXPECT_THROW(er::diffuse_noise(ref, 4, ref.sample_rate, rng), er::Error);
}

TEST(Resample, DownsampleByEight) {
  const double fs = 44100.0;
  std::vector<double> tone(44100);
  for (std::size_t i = 0; i < tone.size(); ++i) tone[i] = std::sin(2.0 * std::numbers::pi * 100.0 * i / fs);
  const auto out = er::resample({tone, fs}, 5512.5);
  EXPECT_EQ(out.sample_rate, 5512.5);
  EXPECT_NEAR(static_cast<double>(out.size()), 44100.0 / 8.0, 1.0);
  // Least-squares amplitude of the 100 Hz component away from the edges.
  double ss = 0, cc = 0, sc = 0, ys = 0, yc = 0;
  for (std::size_t i = 500; i + 500 < out.size(); ++i) {
    const double w = 2.0 * std::numbers::pi * 100.0 * i / 5512.5;
    const double s = std::sin(w), c = std::cos(w), y = out.samples[i];
    ss += s * s; cc += c * c; sc += s * c; ys += y * s; yc += y * c;
  }
  const double det = ss * cc - sc * sc;
  const double a = (ys * cc - yc * sc) / det, b = (yc * ss - ys * sc) / det;
  EXPECT_NEAR(std::hypot(a, b), 1.0, 0.01);
}

TEST(Resample, IdentityAndErrors) {
  const er::SampledSignal x({0.1, 0.2, -0.3}, 5512.5);
  EXPECT_EQ(er::resample(x, 5512.5).samples, x.samples);
  EXPECT_THROW(er::resample(x, 0.0), er::Error);
}

TEST(Resample, RemovesContentAboveNewNyquist) {
  const double fs = 44100.0;
  std::vector<double> tone(22050);
  for (std::size_t i = 0; i < tone.size(); ++i) tone[i] = std::sin(2.0 * std::numbers::pi * 5000.0 * i / fs);
  const auto out = er::resample({tone, fs}, 5512.5);
  double e = 0.0;
  for (std::size_t i = 300; i + 300 < out.size(); ++i) e += out.samples[i] * out.samples[i];
  EXPECT_LT(e / static_cast<double>(out.size() - 600), 1e-4);
}
