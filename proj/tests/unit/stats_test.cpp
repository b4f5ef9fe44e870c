#include <gtest/gtest.h>

#include <numeric>

#include "hydeep/error.hpp"
#include "hydeep/stats.hpp"

namespace hydeep::stats {
namespace {

TEST(Median, OddAndEvenCounts) {
  const std::vector<double> odd = {3, 1, 2};
  const std::vector<double> even = {0.6, 0.4};
  EXPECT_DOUBLE_EQ(median(odd), 2.0);
  EXPECT_DOUBLE_EQ(median(even), 0.5);
  EXPECT_THROW(median(std::vector<double>{}), Error);
}

TEST(NearestRank, Examples) {
  std::vector<double> hundred(100);
  std::iota(hundred.begin(), hundred.end(), 1.0);
  const std::vector<double> probs = {0.5, 0.0, 1.0};
  EXPECT_EQ(quantiles(hundred, probs), (std::vector<double>{50, 1, 100}));

  const std::vector<double> three = {3, 1, 2};
  const std::vector<double> half = {0.5};
  EXPECT_EQ(quantiles(three, half), (std::vector<double>{2}));
}

TEST(NearestRank, ProbabilityRepresentationErrorDoesNotShiftRank) {
  std::vector<double> hundred(100);
  std::iota(hundred.begin(), hundred.end(), 1.0);
  const std::vector<double> probs = {0.29, 0.57};
  EXPECT_EQ(quantiles(hundred, probs), (std::vector<double>{29, 57}));
}

TEST(NearestRank, MonotoneInProbability) {
  const std::vector<double> sample = {5, 3, 9, 1, 1, 7, 2};
  std::vector<double> probs;
  for (int i = 0; i <= 100; ++i) probs.push_back(i / 100.0);
  const auto q = quantiles(sample, probs);
  EXPECT_TRUE(std::is_sorted(q.begin(), q.end()));
}

TEST(NearestRank, Errors) {
  const std::vector<double> sample = {1.0};
  const std::vector<double> bad = {1.5};
  EXPECT_THROW(quantiles(sample, bad), Error);
  EXPECT_THROW(quantiles(std::vector<double>{}, sample), Error);
}

}  // namespace
}  // namespace hydeep::stats
