#include "hydeep/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "hydeep/error.hpp"

namespace hydeep::stats {

double median(std::span<const double> values) {
  if (values.empty()) {
    throw Error(ErrorKind::empty_input, "median of an empty sample");
  }
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  const std::size_t n = sorted.size();
  if (n % 2 == 1) return sorted[n / 2];
  return (sorted[n / 2 - 1] + sorted[n / 2]) / 2.0;
}

double mean(std::span<const double> values) {
  if (values.empty()) {
    throw Error(ErrorKind::empty_input, "mean of an empty sample");
  }
  return std::accumulate(values.begin(), values.end(), 0.0) /
         static_cast<double>(values.size());
}

double nearest_rank(std::span<const double> sorted, double p) {
  if (sorted.empty()) {
    throw Error(ErrorKind::empty_input, "quantile of an empty sample");
  }
  if (!(p >= 0.0 && p <= 1.0)) {
    throw Error(ErrorKind::invalid_argument,
                "quantile probability outside [0, 1]");
  }
  const auto n = static_cast<double>(sorted.size());
  // The small slack absorbs representation error in p * n, e.g. 0.29 * 100.
  const double rank = std::ceil(p * n - 1e-9);
  const auto index = static_cast<std::size_t>(std::clamp(rank, 1.0, n)) - 1;
  return sorted[index];
}

std::vector<double> quantiles(std::span<const double> values,
                              std::span<const double> probs) {
  if (values.empty()) {
    throw Error(ErrorKind::empty_input, "quantiles of an empty sample");
  }
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  std::vector<double> out;
  out.reserve(probs.size());
  for (double p : probs) out.push_back(nearest_rank(sorted, p));
  return out;
}

}  // namespace hydeep::stats
