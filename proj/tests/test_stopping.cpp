#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "fastme/stopping.hpp"
#include "test_support.hpp"

using namespace fastme;
using fastme::testing::error_code_of;

namespace {

double unit(std::uint64_t bits) { return static_cast<double>(bits >> 11) * 0x1.0p-53; }

// Exp(theta) by inverse CDF on raw engine bits.
std::vector<double> exponential_draws(double theta, std::size_t n, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::vector<double> out(n);
  for (auto& v : out) v = -std::log1p(-unit(gen())) / theta;
  return out;
}

// Brute-force empirical CDF.
double cdf_oracle(const std::vector<double>& xs, double y) {
  std::size_t c = 0;
  for (double x : xs) c += x <= y ? 1 : 0;
  return static_cast<double>(c) / static_cast<double>(xs.size());
}

}  // namespace

TEST(SadSampleSet, InsertKeepsSortedAndMean) {
  SadSampleSet s;
  for (double v : {3.0, 1.0, 2.0, 2.0}) s.insert(v);
  EXPECT_EQ(s.sorted(), (std::vector<double>{1, 2, 2, 3}));
  EXPECT_DOUBLE_EQ(s.mean(), 2.0);
  EXPECT_EQ(s.count_at_most(2.0), 3u);
  EXPECT_EQ(s.count_at_most(0.5), 0u);
  EXPECT_EQ(error_code_of([&] { s.insert(-1.0); }), ErrorCode::kPrecondition);
}

TEST(EmpiricalCdf, Examples) {
  const SadSampleSet s(std::vector<double>{1, 2, 3, 4});
  EXPECT_DOUBLE_EQ(empirical_cdf(s, 2.5), 0.5);
  EXPECT_DOUBLE_EQ(empirical_cdf(s, 4), 1.0);
  EXPECT_DOUBLE_EQ(empirical_cdf(s, 0), 0.0);
  EXPECT_EQ(error_code_of([] { empirical_cdf(SadSampleSet{}, 1.0); }), ErrorCode::kPrecondition);
}

TEST(EmpiricalCdf, MatchesBruteForceOnRandomMultisets) {
  std::mt19937_64 gen(11);
  for (int c = 0; c < 200; ++c) {
    std::vector<double> xs(1 + gen() % 40);
    for (auto& x : xs) x = static_cast<double>(gen() % 10);
    const SadSampleSet s(xs);
    double prev = 0.0;
    for (double y = -1; y <= 11; y += 0.5) {
      const double f = empirical_cdf(s, y);
      EXPECT_DOUBLE_EQ(f, cdf_oracle(xs, y));
      EXPECT_GE(f, prev);
      prev = f;
    }
  }
}

TEST(FitExponentialRate, Examples) {
  EXPECT_DOUBLE_EQ(fit_exponential_rate(SadSampleSet(std::vector<double>(5, 2.0))), 0.5);
  EXPECT_DOUBLE_EQ(fit_exponential_rate(std::vector<double>{1, 3}), 0.5);
  EXPECT_EQ(error_code_of([] { fit_exponential_rate(SadSampleSet{}); }), ErrorCode::kPrecondition);
  EXPECT_EQ(error_code_of([] { fit_exponential_rate(std::vector<double>{0, 0}); }),
            ErrorCode::kDegenerateData);
}

TEST(FitExponentialRate, ScaleEquivariant) {
  const auto xs = exponential_draws(1.5, 1000, 3);
  std::vector<double> scaled;
  for (double x : xs) scaled.push_back(4.0 * x);
  EXPECT_NEAR(fit_exponential_rate(scaled), fit_exponential_rate(xs) / 4.0, 1e-12);
}

TEST(FitExponentialRate, RecoversRateFromDraws) {
  EXPECT_NEAR(fit_exponential_rate(exponential_draws(2.0, 100000, 2024)), 2.0, 0.04);
}

TEST(RefitTheta, NeedsEnoughInformativeSamples) {
  EXPECT_DOUBLE_EQ(refit_theta(std::vector<double>(7, 0.5), 1.0), 1.0);
  EXPECT_DOUBLE_EQ(refit_theta(std::vector<double>(8, 0.5), 1.0), 2.0);
  EXPECT_DOUBLE_EQ(refit_theta(std::vector<double>(20, 0.0), 3.0), 3.0);
}

TEST(SadThreshold, Examples) {
  EXPECT_NEAR(sad_threshold(0.05, 1.0), 2.995732273553991, 1e-12);
  EXPECT_EQ(sad_threshold(1.0, 5.0), 0.0);
  EXPECT_FALSE(std::signbit(sad_threshold(1.0, 5.0)));
  EXPECT_NEAR(sad_threshold(0.05, 0.001), 2995.732273553991, 1e-9);
  EXPECT_EQ(error_code_of([] { sad_threshold(0.0, 1.0); }), ErrorCode::kDomain);
  EXPECT_EQ(error_code_of([] { sad_threshold(1.5, 1.0); }), ErrorCode::kDomain);
  EXPECT_EQ(error_code_of([] { sad_threshold(0.5, 0.0); }), ErrorCode::kDomain);
}

TEST(SadThreshold, StrictlyDecreasingInDeltaAndTheta) {
  double prev = INFINITY;
  for (double d = 0.01; d < 1.0; d += 0.01) {
    const double t = sad_threshold(d, 1.0);
    EXPECT_LT(t, prev);
    prev = t;
  }
  prev = INFINITY;
  for (double th = 0.1; th < 10; th += 0.1) {
    const double t = sad_threshold(0.05, th);
    EXPECT_LT(t, prev);
    prev = t;
  }
}

TEST(AdaptiveDelta, ExamplesAndClamp) {
  EXPECT_DOUBLE_EQ(adaptive_delta(0.05, 0.0), 0.05);
  EXPECT_DOUBLE_EQ(adaptive_delta(0.05, 0.5), 0.025);
  EXPECT_GT(adaptive_delta(0.05, 1.0), 0.0);
  EXPECT_NEAR(adaptive_delta(0.05, 1.0), 0.05e-6, 1e-15);
  EXPECT_TRUE(std::isfinite(sad_threshold(adaptive_delta(0.05, 1.0), 1.0)));
}

TEST(AdaptiveDelta, HigherAttentionGivesLargerBoundary) {
  double prev_delta = INFINITY, prev_t = -INFINITY;
  for (int i = 0; i < 100; ++i) {
    const double a = i / 99.0;
    const double d = adaptive_delta(0.05, a);
    const double t = sad_threshold(d, 1.0);
    EXPECT_LT(d, prev_delta);
    EXPECT_GT(t, prev_t);
    prev_delta = d;
    prev_t = t;
  }
}

TEST(BlendedCost, Examples) {
  EXPECT_DOUBLE_EQ(blended_cost(0.0, 0.5, 0.7), 0.15);
  EXPECT_DOUBLE_EQ(blended_cost(0.2, 1.0, 0.5), 0.1);
  EXPECT_DOUBLE_EQ(blended_cost(0.4, 0.3, 1.0), 0.4);
  EXPECT_DOUBLE_EQ(blended_cost(0.4, 0.3, 0.0), 0.7);
}

TEST(NormalizeSad, UnitRange) {
  EXPECT_DOUBLE_EQ(normalize_sad(0, 16), 0.0);
  EXPECT_DOUBLE_EQ(normalize_sad(255u * 256u, 16), 1.0);
  EXPECT_DOUBLE_EQ(normalize_sad(255u * 32u, 8), 0.5);
}

TEST(FixedPointTau, CollapsesToZero) {
  for (double theta : {0.5, 1.0, 2.0, 10.0}) {
    const FixedPointResult r = fixed_point_tau(theta, 1e-10);
    EXPECT_LT(r.residual, 1e-10) << theta;
    EXPECT_NEAR(r.tau, 0.0, 1e-10) << theta;
    EXPECT_GT(r.iterations, 0);
    const double g = (1.0 - std::exp(-theta * r.tau)) / theta;
    EXPECT_NEAR(g, r.tau, 1e-10);
  }
  EXPECT_EQ(error_code_of([] { fixed_point_tau(0.0); }), ErrorCode::kDomain);
  EXPECT_EQ(error_code_of([] { fixed_point_tau(1.0, 0.0); }), ErrorCode::kDomain);
}

TEST(ShouldStopEmpirical, FiresAtFirstSample) {
  SadSampleSet s;
  s.insert(0.9);
  EXPECT_TRUE(should_stop_empirical(s, 0.9, 0.05));
}

TEST(ShouldStopEmpirical, FiresOnlyForLargeValues) {
  SadSampleSet s(std::vector<double>{0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0});
  EXPECT_FALSE(should_stop_empirical(s, 0.1, 0.05));
  EXPECT_TRUE(should_stop_empirical(s, 1.0, 0.05));
  EXPECT_TRUE(should_stop_empirical(s, 0.9, 0.1 + 1e-12));
}

TEST(ShouldStopFastMe, RequiresBoundaryAndStrictImprovement) {
  EXPECT_TRUE(should_stop_fastme(0.15, 3.689, 0.0, INFINITY));
  EXPECT_FALSE(should_stop_fastme(4.0, 3.689, 0.0, INFINITY));
  EXPECT_FALSE(should_stop_fastme(0.1, 3.0, 5.0, 5.0));
  EXPECT_TRUE(should_stop_fastme(0.1, 3.0, 4.0, 5.0));
  EXPECT_TRUE(should_stop_fastme(3.0, 3.0, 4.0, 5.0));
}

TEST(StoppingPolicy, Validation) {
  EXPECT_NO_THROW(StoppingPolicy{}.validate());
  StoppingPolicy p;
  p.delta0 = 0.0;
  EXPECT_EQ(error_code_of([&] { p.validate(); }), ErrorCode::kConfig);
  p = {};
  p.theta = -1;
  EXPECT_EQ(error_code_of([&] { p.validate(); }), ErrorCode::kConfig);
  p = {};
  p.alpha = 1.1;
  EXPECT_EQ(error_code_of([&] { p.validate(); }), ErrorCode::kConfig);
}

TEST(DeltaBound, ReportsWithoutThrowing) {
  EXPECT_TRUE(check_delta_bound(0.5, 0.6).ok);
  const DeltaBoundCheck c = check_delta_bound(0.05, 0.5);
  EXPECT_FALSE(c.ok);
  EXPECT_DOUBLE_EQ(c.bound, 0.5);
  EXPECT_FALSE(c.warning.empty());
}
