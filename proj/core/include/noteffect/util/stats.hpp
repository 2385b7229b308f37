#pragma once

#include <optional>
#include <span>
#include <vector>

namespace noteffect::stats {

// Pairwise summation: result depends only on the order of the input.
double pairwise_sum(std::span<const double> values);

double mean(std::span<const double> values);

// Sample standard deviation with the n - 1 denominator; 0 when n < 2.
double sample_sd(std::span<const double> values);

// Linear-interpolation quantile (R type 7) of unsorted data, p in [0, 1].
double quantile(std::vector<double> values, double p);
double quantile_sorted(std::span<const double> sorted, double p);

double median(std::vector<double> values);

}  // namespace noteffect::stats
