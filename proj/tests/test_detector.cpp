#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

#include "echo_ranger/detector.hpp"

namespace er = echo_ranger;

namespace {

std::vector<double> gaussian(std::size_t n, std::mt19937_64& rng, double sd = 1.0) {
  std::normal_distribution<double> g(0.0, sd);
  std::vector<double> v(n);
  for (auto& x : v) x = g(rng);
  return v;
}

er::FrameObservation noisy_frame(const std::vector<double>& xd, const std::vector<double>& extra, double sigma,
                                 std::mt19937_64& rng, double sigma2) {
  std::normal_distribution<double> g(0.0, sigma);
  std::vector<double> y(xd.size());
  for (std::size_t k = 0; k < y.size(); ++k) y[k] = xd[k] + extra[k] + g(rng);
  return {y, xd, 0, sigma2};
}

}  // namespace

TEST(Detect, NoResidualIsH0) {
  std::mt19937_64 rng(1);
  const auto xd = gaussian(2048, rng);
  const er::FrameObservation f(xd, xd, 0, 1.0);
  const auto out = er::detect(f);
  EXPECT_EQ(out.statistic, 0.0);
  EXPECT_EQ(out.threshold, 5000.0);
  EXPECT_FALSE(out.reflector_present());
}

TEST(Detect, LargeResidualIsH1) {
  const std::vector<double> xd(2048, 0.0);
  const std::vector<double> y(2048, 10.0);
  const auto out = er::detect({y, xd, 0, 1.0});
  EXPECT_EQ(out.statistic, 204800.0);
  EXPECT_TRUE(out.reflector_present());
  EXPECT_EQ(er::reflected_component({y, xd}), y);
}

TEST(Detect, RequiresNoiseVariance) {
  const std::vector<double> xd(16, 1.0);
  EXPECT_THROW(er::detect({xd, xd}), er::Error);
  EXPECT_THROW(er::detect({xd, xd, 0, 0.0}), er::Error);
  try {
    er::detect({xd, xd});
  } catch (const er::Error& e) {
    EXPECT_NE(std::string(e.what()).find("calibrate"), std::string::npos);
  }
}

TEST(Detect, StatisticMeanUnderH0) {
  std::mt19937_64 rng(2);
  const std::size_t n = 2048;
  const double sigma2 = 0.7;
  const auto xd = gaussian(n, rng);
  const std::vector<double> none(n, 0.0);
  double acc = 0.0;
  const int trials = 200;
  for (int t = 0; t < trials; ++t) acc += er::detect(noisy_frame(xd, none, std::sqrt(sigma2), rng, sigma2)).statistic;
  EXPECT_NEAR(acc / trials, n * sigma2, 0.05 * n * sigma2);
}

TEST(Detect, StatisticMeanUnderH1) {
  std::mt19937_64 rng(3);
  const std::size_t n = 2048;
  const auto xd = gaussian(n, rng);
  const auto xr = gaussian(n, rng, 0.4);
  double acc = 0.0;
  const int trials = 200;
  for (int t = 0; t < trials; ++t) acc += er::detect(noisy_frame(xd, xr, 1.0, rng, 1.0)).statistic;
  const double expected = er::energy(xr) + static_cast<double>(n);
  EXPECT_NEAR(acc / trials, expected, 0.05 * expected);
}

TEST(Detect, DoublingResidualQuadruplesStatistic) {
  std::mt19937_64 rng(4);
  const auto xd = gaussian(512, rng);
  const auto r = gaussian(512, rng);
  std::vector<double> y1(512), y2(512);
  for (std::size_t k = 0; k < 512; ++k) {
    y1[k] = xd[k] + r[k];
    y2[k] = xd[k] + 2.0 * r[k];
  }
  const double t1 = er::detect({y1, xd, 0, 1.0}).statistic;
  const double t2 = er::detect({y2, xd, 0, 1.0}).statistic;
  EXPECT_NEAR(t2, 4.0 * t1, 1e-9 * t2);
}

TEST(Detect, MonotoneInLnGamma) {
  std::mt19937_64 rng(5);
  for (int rep = 0; rep < 50; ++rep) {
    const auto xd = gaussian(256, rng);
    const auto r = gaussian(256, rng, 0.5 + rep * 0.05);
    const auto f = noisy_frame(xd, r, 0.0 + 1e-9, rng, 1.0);
    bool prev_h1 = true;
    for (double lg = 0.0; lg < 400.0; lg += 5.0) {
      const bool h1 = er::detect(f, lg).reflector_present();
      EXPECT_TRUE(prev_h1 || !h1) << "H1 reappeared at ln_gamma=" << lg;
      prev_h1 = h1;
    }
  }
}

TEST(Detect, ScaleConsistency) {
  std::mt19937_64 rng(6);
  for (int rep = 0; rep < 50; ++rep) {
    const auto xd = gaussian(300, rng);
    const auto y = gaussian(300, rng);
    const double c = std::exp(static_cast<double>(rep) / 10.0 - 2.5);
    const double sigma2 = 0.5 + rep * 0.03;
    std::vector<double> cy(300), cxd(300);
    for (std::size_t k = 0; k < 300; ++k) {
      cy[k] = c * y[k];
      cxd[k] = c * xd[k];
    }
    const auto a = er::detect({y, xd, 0, sigma2}, 150.0);
    const auto b = er::detect({cy, cxd, 0, c * c * sigma2}, 150.0);
    EXPECT_EQ(a.decision, b.decision);
    EXPECT_NEAR(b.statistic / b.threshold, a.statistic / a.threshold, 1e-12);
  }
}

TEST(Detect, FalseAlarmRateFallsWithThreshold) {
  // Under H0, T / sigma^2 ~ chi^2_N with mean N = 2048 and sd 64, so the
  // threshold 2 ln(gamma) sweeps the distribution across these three points.
  std::mt19937_64 rng(7);
  const std::size_t n = 2048;
  const auto xd = gaussian(n, rng);
  const std::vector<double> none(n, 0.0);
  const std::vector<double> ln_gammas{980.0, 1024.0, 1070.0};
  std::vector<int> alarms(ln_gammas.size(), 0);
  const int trials = 400;
  for (int t = 0; t < trials; ++t) {
    const auto f = noisy_frame(xd, none, 1.0, rng, 1.0);
    for (std::size_t i = 0; i < ln_gammas.size(); ++i) alarms[i] += er::detect(f, ln_gammas[i]).reflector_present();
  }
  EXPECT_GT(alarms[0], alarms[1]);
  EXPECT_GT(alarms[1], alarms[2]);
  EXPECT_GT(alarms[0], trials * 8 / 10);
  EXPECT_LT(alarms[2], trials * 2 / 10);
}

TEST(Calibrate, RecoversUnitVariance) {
  std::mt19937_64 rng(8);
  std::vector<er::FrameObservation> frames;
  const std::vector<double> none(2048, 0.0);
  for (int i = 0; i < 20; ++i) frames.push_back(noisy_frame(gaussian(2048, rng), none, 1.0, rng, 1.0));
  EXPECT_NEAR(er::calibrate_noise_variance(frames), 1.0, 0.02);
}

TEST(Calibrate, Errors) {
  EXPECT_THROW(er::calibrate_noise_variance({}), er::Error);
}
