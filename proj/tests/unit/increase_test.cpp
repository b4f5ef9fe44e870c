#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "hydeep/error.hpp"
#include "hydeep/increase.hpp"

namespace hydeep {
namespace {

ExpertTriangle tri(std::string expert, std::string factor, double a, double m,
                   double b, TargetKind t = TargetKind::defect_content) {
  return {std::move(expert), std::move(factor), t, a, m, b};
}

// Test-side reference formulas for the triangular distribution.
double triangle_cdf(double x, double a, double m, double b) {
  if (x <= a) return 0.0;
  if (x >= b) return 1.0;
  if (x <= m) return (x - a) * (x - a) / ((b - a) * (m - a));
  return 1.0 - (b - x) * (b - x) / ((b - a) * (b - m));
}

double triangle_variance(double a, double m, double b) {
  return (a * a + m * m + b * b - a * m - a * b - m * b) / 18.0;
}

double sample_mean(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

TEST(SampleTriangle, DegenerateTriangleIsConstant) {
  const auto t = tri("X", "F", 0, 0, 0);
  for (double u : {0.0, 0.3, 0.999}) EXPECT_EQ(sample_triangle(t, u), 0.0);
  const auto c = tri("X", "F", 0.2, 0.2, 0.2);
  EXPECT_EQ(sample_triangle(c, 0.7), 0.2);
}

TEST(SampleTriangle, SymmetricMedianIsMode) {
  EXPECT_DOUBLE_EQ(sample_triangle(tri("X", "F", 0, 0.5, 1), 0.5), 0.5);
}

TEST(SampleTriangle, InverseCdfMatchesDirectCdf) {
  const auto t = tri("X", "F", 0.10, 0.15, 0.25);
  const double x = sample_triangle(t, 0.25);
  EXPECT_NEAR(x, 0.10 + std::sqrt(0.25 * 0.15 * 0.05), 1e-15);
  EXPECT_NEAR(x, 0.14330, 5e-6);
  EXPECT_NEAR(triangle_cdf(x, 0.10, 0.15, 0.25), 0.25, 1e-12);

  for (double u = 0.0; u < 1.0; u += 0.01) {
    const double y = sample_triangle(t, u);
    EXPECT_NEAR(triangle_cdf(y, 0.10, 0.15, 0.25), u, 1e-9) << "u=" << u;
  }
}

TEST(SampleTriangle, ModeAtEndpoints) {
  const auto left = tri("X", "F", 0.0, 0.0, 1.0);
  const auto right = tri("X", "F", 0.0, 1.0, 1.0);
  for (double u = 0.0; u < 1.0; u += 0.05) {
    EXPECT_NEAR(triangle_cdf(sample_triangle(left, u), 0, 0, 1), u, 1e-9);
    EXPECT_NEAR(triangle_cdf(sample_triangle(right, u), 0, 1, 1), u, 1e-9);
  }
}

TEST(FactorStream, UniformInUnitInterval) {
  FactorStream s(3, TargetKind::defect_content, "D1");
  for (int i = 0; i < 10000; ++i) {
    const double u = s.uniform();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
  }
}

TEST(FactorStream, StreamsDependOnSeedTargetAndFactor) {
  FactorStream a(0, TargetKind::defect_content, "D1");
  FactorStream b(0, TargetKind::defect_content, "D2");
  FactorStream c(0, TargetKind::effectiveness, "D1");
  FactorStream d(1, TargetKind::defect_content, "D1");
  FactorStream a2(0, TargetKind::defect_content, "D1");
  const double x = a.uniform();
  EXPECT_NE(x, b.uniform());
  EXPECT_NE(x, c.uniform());
  EXPECT_NE(x, d.uniform());
  EXPECT_EQ(x, a2.uniform());
}

TEST(ExpertMixture, SingleDegenerateTriangle) {
  const std::vector<ExpertTriangle> ts = {tri("X", "F", 0, 0, 0)};
  FactorStream s(0, TargetKind::defect_content, "F");
  for (int i = 0; i < 100; ++i) EXPECT_EQ(expert_mixture_sample(ts, s), 0.0);
}

TEST(ExpertMixture, IdenticalExpertsMatchSingleTriangle) {
  const std::vector<ExpertTriangle> one = {tri("X", "F", 0.1, 0.15, 0.25)};
  const std::vector<ExpertTriangle> two = {tri("X", "F", 0.1, 0.15, 0.25),
                                           tri("Y", "F", 0.1, 0.15, 0.25)};
  FactorStream s1(5, TargetKind::defect_content, "F");
  FactorStream s2(5, TargetKind::defect_content, "F");
  FactorStream s3(6, TargetKind::defect_content, "F");
  std::vector<double> a, b, c;
  for (int i = 0; i < 100000; ++i) {
    a.push_back(expert_mixture_sample(one, s1));
    b.push_back(expert_mixture_sample(two, s2));
    c.push_back(expert_mixture_sample(two, s3));
  }
  EXPECT_EQ(a, b);
  // Two-sample Kolmogorov-Smirnov distance against an independent stream.
  std::sort(a.begin(), a.end());
  std::sort(c.begin(), c.end());
  double ks = 0.0;
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < c.size()) {
    if (a[i] <= c[j]) ++i; else ++j;
    ks = std::max(ks, std::abs(double(i) - double(j)) / double(a.size()));
  }
  EXPECT_LT(ks, 1.63 * std::sqrt(2.0 / a.size()));  // alpha = 0.01
}

TEST(ExpertMixture, MeanOfTwoExperts) {
  const std::vector<ExpertTriangle> ts = {tri("X", "F", 0.10, 0.15, 0.25),
                                          tri("Y", "F", 0.0, 0.10, 0.20)};
  FactorStream s(0, TargetKind::defect_content, "F");
  const int n = 1000000;
  std::vector<double> draws(n);
  for (auto& d : draws) d = expert_mixture_sample(ts, s);
  const double mu1 = 0.5 / 3.0, mu2 = 0.10;
  const double mu = (mu1 + mu2) / 2.0;
  EXPECT_NEAR(mu, 0.133333, 1e-6);
  const double second = (triangle_variance(0.10, 0.15, 0.25) + mu1 * mu1 +
                         triangle_variance(0.0, 0.10, 0.20) + mu2 * mu2) / 2.0;
  const double sigma = std::sqrt(second - mu * mu);
  EXPECT_NEAR(sample_mean(draws), mu, 3.0 * sigma / std::sqrt(double(n)));
}

TEST(ExpertMixture, EmptyListIsAnError) {
  FactorStream s(0, TargetKind::defect_content, "F");
  EXPECT_THROW(expert_mixture_sample({}, s), Error);
}

class IncreaseDistributionTest : public ::testing::Test {
 protected:
  std::vector<ExpertTriangle> triangles = {
      tri("X", "D1", 0.10, 0.15, 0.25), tri("Y", "D1", 0.0, 0.10, 0.20),
      tri("X", "D2", 0.03, 0.06, 0.09), tri("X", "D3", 0.10, 0.15, 0.25)};
};

TEST_F(IncreaseDistributionTest, AllLevelsZeroIsPointMassAtZero) {
  const std::vector<std::string> ids = {"D1", "D2", "D3"};
  IncreaseModel model(TargetKind::defect_content, ids, triangles);
  const LevelMap levels = {{"D1", 0}, {"D2", 0}, {"D3", 0}};
  for (auto strategy : {PointStrategy::analytic_mean, PointStrategy::mc_median}) {
    EngineOptions opt;
    opt.point = strategy;
    const auto r = increase_distribution(model, levels, opt);
    EXPECT_EQ(r.point, 0.0);
    EXPECT_EQ(r.analytic_mean, 0.0);
    EXPECT_TRUE(std::all_of(r.distribution.samples.begin(),
                            r.distribution.samples.end(),
                            [](double s) { return s == 0.0; }));
  }
}

TEST_F(IncreaseDistributionTest, SingleFactorAtTopLevelFollowsTriangle) {
  const std::vector<std::string> ids = {"D3"};
  IncreaseModel model(TargetKind::defect_content, ids, triangles);
  EngineOptions opt;
  opt.samples = 100000;
  const auto r = increase_distribution(model, {{"D3", 3}}, opt);
  ASSERT_EQ(r.distribution.size(), opt.samples);
  const double sigma = std::sqrt(triangle_variance(0.10, 0.15, 0.25));
  EXPECT_NEAR(sample_mean(r.distribution.samples), 0.5 / 3.0,
              3.0 * sigma / std::sqrt(double(opt.samples)));
  for (double s : r.distribution.samples) {
    ASSERT_GE(s, 0.10);
    ASSERT_LE(s, 0.25);
  }
  EXPECT_NEAR(r.analytic_mean, 0.166667, 1e-6);
}

TEST_F(IncreaseDistributionTest, TwoFactorsSumScaledMeans) {
  const std::vector<std::string> ids = {"D1", "D2"};
  IncreaseModel model(TargetKind::defect_content, ids, triangles);
  const LevelMap levels = {{"D1", 3}, {"D2", 1}};
  EngineOptions opt;
  opt.samples = 1000000;
  const auto r = increase_distribution(model, levels, opt);
  EXPECT_NEAR(r.analytic_mean, 0.15333333, 1e-7);

  // Variance oracle: mixture variance for D1 plus (1/3)^2 triangle variance
  // for D2.
  const double mu1 = 0.5 / 3.0, mu2 = 0.10, mu = (mu1 + mu2) / 2.0;
  const double var_d1 = (triangle_variance(0.10, 0.15, 0.25) + mu1 * mu1 +
                         triangle_variance(0.0, 0.10, 0.20) + mu2 * mu2) / 2.0 -
                        mu * mu;
  const double var = var_d1 + triangle_variance(0.03, 0.06, 0.09) / 9.0;
  EXPECT_NEAR(sample_mean(r.distribution.samples), 0.15333333,
              3.0 * std::sqrt(var / double(opt.samples)));
}

TEST_F(IncreaseDistributionTest, AnalyticMeanExamples) {
  const std::vector<std::string> d3 = {"D3"};
  EXPECT_NEAR(analytic_mean_increase(
                  IncreaseModel(TargetKind::defect_content, d3, triangles),
                  {{"D3", 3}}),
              0.5 / 3.0, 1e-15);
  EXPECT_EQ(analytic_mean_increase(
                IncreaseModel(TargetKind::defect_content, d3, triangles),
                {{"D3", 0}}),
            0.0);

  const std::vector<std::string> d1 = {"D1"};
  IncreaseModel model(TargetKind::defect_content, d1, triangles);
  const double analytic = analytic_mean_increase(model, {{"D1", 2}});
  EXPECT_NEAR(analytic, 2.0 / 3.0 * 0.1333333333, 1e-9);
  EXPECT_NEAR(analytic, 0.08889, 5e-6);

  EngineOptions opt;
  opt.samples = 1000000;
  const auto r = increase_distribution(model, {{"D1", 2}}, opt);
  const double mu1 = 0.5 / 3.0, mu2 = 0.10, mu = (mu1 + mu2) / 2.0;
  const double var = (triangle_variance(0.10, 0.15, 0.25) + mu1 * mu1 +
                      triangle_variance(0.0, 0.10, 0.20) + mu2 * mu2) / 2.0 -
                     mu * mu;
  EXPECT_NEAR(sample_mean(r.distribution.samples), analytic,
              3.0 * (2.0 / 3.0) * std::sqrt(var / double(opt.samples)));
}

TEST_F(IncreaseDistributionTest, PointStrategies) {
  const std::vector<std::string> ids = {"D1", "D2"};
  IncreaseModel model(TargetKind::defect_content, ids, triangles);
  const LevelMap levels = {{"D1", 3}, {"D2", 2}};
  EngineOptions opt;
  EXPECT_EQ(increase_point(model, levels, opt),
            analytic_mean_increase(model, levels));
  opt.point = PointStrategy::mc_median;
  const auto r = increase_distribution(model, levels, opt);
  std::vector<double> sorted = r.distribution.samples;
  std::sort(sorted.begin(), sorted.end());
  EXPECT_DOUBLE_EQ(r.point, (sorted[4999] + sorted[5000]) / 2.0);
  EXPECT_EQ(increase_point(model, levels, opt), r.point);
}

TEST_F(IncreaseDistributionTest, DeterministicForSeed) {
  const std::vector<std::string> ids = {"D1", "D2", "D3"};
  IncreaseModel model(TargetKind::defect_content, ids, triangles);
  const LevelMap levels = {{"D1", 1}, {"D2", 2}, {"D3", 3}};
  EngineOptions opt;
  opt.seed = 42;
  const auto a = increase_distribution(model, levels, opt);
  const auto b = increase_distribution(model, levels, opt);
  EXPECT_EQ(a.distribution.samples, b.distribution.samples);
  opt.seed = 43;
  EXPECT_NE(increase_distribution(model, levels, opt).distribution.samples,
            a.distribution.samples);
}

TEST_F(IncreaseDistributionTest, FactorAndExpertOrderDoNotMatter) {
  const std::vector<std::string> ids = {"D1", "D2", "D3"};
  const std::vector<std::string> reversed = {"D3", "D2", "D1"};
  auto shuffled = triangles;
  std::reverse(shuffled.begin(), shuffled.end());
  IncreaseModel a(TargetKind::defect_content, ids, triangles);
  IncreaseModel b(TargetKind::defect_content, reversed, shuffled);
  const LevelMap levels = {{"D1", 2}, {"D2", 1}, {"D3", 3}};
  EngineOptions opt;
  EXPECT_EQ(increase_distribution(a, levels, opt).distribution.samples,
            increase_distribution(b, levels, opt).distribution.samples);
  EXPECT_EQ(analytic_mean_increase(a, levels), analytic_mean_increase(b, levels));
}

TEST_F(IncreaseDistributionTest, RaisingALevelDominatesSampleWise) {
  const std::vector<std::string> ids = {"D1", "D2", "D3"};
  IncreaseModel model(TargetKind::defect_content, ids, triangles);
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int> lvl(0, 3);
  EngineOptions opt;
  opt.samples = 2000;
  for (int trial = 0; trial < 30; ++trial) {
    LevelMap levels = {{"D1", lvl(rng)}, {"D2", lvl(rng)}, {"D3", lvl(rng)}};
    const std::string f = ids[trial % 3];
    if (levels[f] == 3) levels[f] = 2;
    LevelMap raised = levels;
    raised[f] += 1;
    const auto lo = increase_distribution(model, levels, opt);
    const auto hi = increase_distribution(model, raised, opt);
    EXPECT_LE(lo.analytic_mean, hi.analytic_mean);
    for (std::size_t i = 0; i < opt.samples; ++i) {
      ASSERT_LE(lo.distribution.samples[i], hi.distribution.samples[i]);
    }
    const std::vector<double> probs = {0.05, 0.25, 0.5, 0.75, 0.95};
    const auto ql = quantiles(lo.distribution, probs);
    const auto qh = quantiles(hi.distribution, probs);
    for (std::size_t i = 0; i < probs.size(); ++i) EXPECT_LE(ql[i], qh[i]);
  }
}

TEST_F(IncreaseDistributionTest, Errors) {
  const std::vector<std::string> missing = {"D9"};
  try {
    IncreaseModel(TargetKind::defect_content, missing, triangles);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::missing_quantification);
  }
  // D1 is only quantified for defect content.
  const std::vector<std::string> d1 = {"D1"};
  EXPECT_THROW(IncreaseModel(TargetKind::effectiveness, d1, triangles), Error);

  IncreaseModel model(TargetKind::defect_content, d1, triangles);
  try {
    analytic_mean_increase(model, {{"D2", 1}});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::missing_level);
  }
  EXPECT_THROW(analytic_mean_increase(model, {{"D1", 4}}), Error);
  EXPECT_THROW(analytic_mean_increase(model, {{"D1", -1}}), Error);
  EngineOptions opt;
  opt.samples = 0;
  EXPECT_THROW(increase_distribution(model, {{"D1", 1}}, opt), Error);
}

TEST(Quantiles, EmptyDistributionIsAnError) {
  const std::vector<double> probs = {0.5};
  EXPECT_THROW(quantiles(EmpiricalDistribution{}, probs), Error);
}

}  // namespace
}  // namespace hydeep
