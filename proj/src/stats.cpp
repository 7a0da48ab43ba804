#include "phi43/stats.hpp"

#include <boost/math/distributions/normal.hpp>
#include <boost/math/distributions/students_t.hpp>

#include <cmath>
#include <stdexcept>

namespace phi43 {

Estimate mean_se(const std::vector<double>& x) {
  Estimate e;
  e.count = x.size();
  if (x.empty()) return e;
  for (double v : x) e.mean += v;
  e.mean /= static_cast<double>(x.size());
  if (x.size() < 2) return e;
  double ss = 0.0;
  for (double v : x) ss += (v - e.mean) * (v - e.mean);
  e.se = std::sqrt(ss / static_cast<double>(x.size() - 1) / static_cast<double>(x.size()));
  return e;
}

Estimate batch_means(const std::vector<double>& x, std::size_t batches) {
  if (batches < 2 || x.size() < 2 * batches) return mean_se(x);
  const std::size_t per = x.size() / batches;
  std::vector<double> means(batches, 0.0);
  for (std::size_t b = 0; b < batches; ++b) {
    // the last batch absorbs the remainder
    const std::size_t end = b + 1 == batches ? x.size() : (b + 1) * per;
    for (std::size_t i = b * per; i < end; ++i) means[b] += x[i];
    means[b] /= static_cast<double>(end - b * per);
  }
  Estimate e = mean_se(x);
  const Estimate m = mean_se(means);
  e.se = m.se;
  return e;
}

double normal_quantile(double level) {
  if (!(level > 0.0 && level < 1.0)) throw std::invalid_argument("confidence level must lie in (0, 1)");
  return boost::math::quantile(boost::math::normal(), 0.5 + 0.5 * level);
}

double bonferroni_z(std::size_t tests, double family_alpha) {
  if (tests == 0) tests = 1;
  return normal_quantile(1.0 - family_alpha / static_cast<double>(tests));
}

LinearFit fit_line(const std::vector<double>& x, const std::vector<double>& y, const std::vector<double>& weights,
                   double level) {
  if (x.size() != y.size() || (!weights.empty() && weights.size() != x.size()))
    throw std::invalid_argument("fit_line: size mismatch");
  LinearFit f;
  f.points = x.size();
  if (x.size() < 3) throw std::invalid_argument("fit_line needs at least three points");
  double sw = 0, sx = 0, sy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double w = weights.empty() ? 1.0 : weights[i];
    sw += w;
    sx += w * x[i];
    sy += w * y[i];
  }
  const double mx = sx / sw, my = sy / sw;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double w = weights.empty() ? 1.0 : weights[i];
    sxx += w * (x[i] - mx) * (x[i] - mx);
    sxy += w * (x[i] - mx) * (y[i] - my);
  }
  if (!(sxx > 0.0)) throw std::invalid_argument("fit_line: degenerate abscissae");
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  double rss = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double w = weights.empty() ? 1.0 : weights[i];
    const double r = y[i] - f.intercept - f.slope * x[i];
    rss += w * r * r;
  }
  const double dof = static_cast<double>(x.size() - 2);
  f.slope_se = std::sqrt(rss / dof / sxx);
  const double t = boost::math::quantile(boost::math::students_t(dof), 0.5 + 0.5 * level);
  f.lower = f.slope - t * f.slope_se;
  f.upper = f.slope + t * f.slope_se;
  return f;
}

}  // namespace phi43
