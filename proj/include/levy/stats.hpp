#pragma once

#include <span>
#include <vector>

namespace levy {

struct MeanSe {
  double mean = 0.0;
  double se = 0.0;  // sample SD / sqrt(n)
};

MeanSe mean_se(std::span<const double> xs);

double median(std::vector<double> xs);  // by value: reorders its copy

/// Least-squares slope of y against x.
double ls_slope(std::span<const double> x, std::span<const double> y);

}  // namespace levy
