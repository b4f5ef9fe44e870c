#pragma once

#include <span>
#include <vector>

namespace hydeep::stats {

/// Even counts average the two central order statistics.
/// Throws Error(empty_input) on an empty range.
double median(std::span<const double> values);

double mean(std::span<const double> values);

/// Nearest-rank order statistic: the ceil(p * n)-th smallest value, with
/// p = 0 giving the minimum. `sorted` must be ascending.
double nearest_rank(std::span<const double> sorted, double p);

/// Nearest-rank quantiles for each probability, on an unsorted sample.
std::vector<double> quantiles(std::span<const double> values,
                              std::span<const double> probs);

}  // namespace hydeep::stats
