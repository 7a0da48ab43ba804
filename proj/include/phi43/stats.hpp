#pragma once

#include <cstddef>
#include <vector>

namespace phi43 {

struct Estimate {
  double mean = 0.0;
  double se = 0.0;
  std::size_t count = 0;
};

/// Sample mean with the plain iid standard error.
Estimate mean_se(const std::vector<double>& x);

/// Sample mean with a batch-means standard error over `batches` contiguous
/// batches; falls back to the iid error when there are fewer samples than batches.
Estimate batch_means(const std::vector<double>& x, std::size_t batches = 20);

/// Two-sided normal threshold controlling the family-wise error rate at
/// `family_alpha` over `tests` tests (Bonferroni).
double bonferroni_z(std::size_t tests, double family_alpha = 0.0027);

/// Two-sided standard normal quantile for confidence level `level`.
double normal_quantile(double level);

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_se = 0.0;
  double lower = 0.0;  // slope CI
  double upper = 0.0;
  std::size_t points = 0;
};

/// Weighted least squares y ~ a + b x. Weights are inverse variances; pass an
/// empty vector for ordinary least squares. The CI uses the t distribution at
/// the given level.
LinearFit fit_line(const std::vector<double>& x, const std::vector<double>& y, const std::vector<double>& weights = {},
                   double level = 0.95);

}  // namespace phi43
