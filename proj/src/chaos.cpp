#include "phi43/gaussian.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>
#include <stdexcept>

namespace phi43 {

double hermite(int p, double x, double T) {
  if (p < 0) throw std::invalid_argument("Hermite order must be nonnegative");
  if (p == 0) return 1.0;
  double prev = 1.0;
  double cur = x;
  for (int k = 2; k <= p; ++k) {
    const double next = x * cur - (k - 1) * T * prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

Eigen::ArrayXd hermite(int p, const Eigen::ArrayXd& x, double T) {
  if (p < 0) throw std::invalid_argument("Hermite order must be nonnegative");
  if (p == 0) return Eigen::ArrayXd::Ones(x.size());
  Eigen::ArrayXd prev = Eigen::ArrayXd::Ones(x.size());
  Eigen::ArrayXd cur = x;
  for (int k = 2; k <= p; ++k) {
    Eigen::ArrayXd next = x * cur - (k - 1) * T * prev;
    prev = std::move(cur);
    cur = std::move(next);
  }
  return cur;
}

SpectralField wick_power(const SpectralField& f, int p, double c) {
  if (p != 2 && p != 3) throw std::invalid_argument("wick_power supports p = 2 or 3");
  if (c < 0.0) throw std::invalid_argument("renormalisation constant must be nonnegative");
  const auto grid = make_product_grid(f.lattice(), p);
  return grid->from_physical(hermite(p, grid->to_physical(f), c));
}

namespace {

double abs_moment(const std::vector<double>& x, const std::vector<std::size_t>* idx, double p) {
  double s = 0.0;
  const std::size_t n = idx ? idx->size() : x.size();
  for (std::size_t i = 0; i < n; ++i) s += std::pow(std::abs(x[idx ? (*idx)[i] : i]), p);
  return s / static_cast<double>(n);
}

using Statistic = std::function<double(const std::vector<std::size_t>*)>;

MomentRatio bootstrap(const Statistic& stat, std::size_t n, std::uint64_t seed, int resamples, double confidence) {
  MomentRatio out;
  out.value = stat(nullptr);
  std::mt19937_64 gen(seed);
  std::uniform_int_distribution<std::size_t> pick(0, n - 1);
  std::vector<double> values;
  std::vector<std::size_t> idx(n);
  for (int b = 0; b < resamples; ++b) {
    for (auto& i : idx) i = pick(gen);
    values.push_back(stat(&idx));
  }
  double mean = 0.0, sq = 0.0;
  for (double v : values) mean += v;
  mean /= static_cast<double>(values.size());
  for (double v : values) sq += (v - mean) * (v - mean);
  out.se = std::sqrt(sq / static_cast<double>(values.size() - 1));
  std::sort(values.begin(), values.end());
  const double tail = 0.5 * (1.0 - confidence);
  const auto at = [&](double q) {
    const auto k = static_cast<std::size_t>(std::clamp(q * (values.size() - 1), 0.0, double(values.size() - 1)));
    return values[k];
  };
  out.lower = at(tail);
  out.upper = at(1.0 - tail);
  return out;
}

}  // namespace

NelsonReport nelson_check(const std::vector<double>& samples, int chaos, int p, std::uint64_t seed, int resamples,
                          double confidence) {
  if (samples.size() < 2) throw std::invalid_argument("nelson_check needs samples");
  if (abs_moment(samples, nullptr, 2.0) == 0.0) throw std::invalid_argument("degenerate sampler: zero variance");
  NelsonReport r;
  r.chaos = chaos;
  r.p = p;
  r.bound = std::pow(p - 1.0, 0.5 * chaos);
  const Statistic stat = [&](const std::vector<std::size_t>* idx) {
    return std::pow(abs_moment(samples, idx, p), 1.0 / p) / std::sqrt(abs_moment(samples, idx, 2.0));
  };
  r.ratio = bootstrap(stat, samples.size(), seed, resamples, confidence);
  r.violated = r.ratio.lower > r.bound;
  r.margin = r.ratio.upper < r.bound;
  return r;
}

HypercontractivityReport hypercontractivity_check(const std::vector<double>& samples, int chaos, double t, double p,
                                                  std::uint64_t seed, int resamples, double confidence) {
  if (!(t > 0.0)) throw std::invalid_argument("hypercontractivity time must be positive");
  if (p < 2.0) throw std::invalid_argument("hypercontractivity needs p >= 2");
  if (samples.empty()) throw std::invalid_argument("hypercontractivity_check needs samples");
  HypercontractivityReport r;
  r.chaos = chaos;
  r.t = t;
  r.p = p;
  r.q = 1.0 + (p - 1.0) * std::exp(2.0 * t);
  const double damp = std::exp(-chaos * t);
  const Statistic lhs = [&](const std::vector<std::size_t>* idx) {
    return damp * std::pow(abs_moment(samples, idx, r.q), 1.0 / r.q);
  };
  const Statistic rhs = [&](const std::vector<std::size_t>* idx) {
    return std::pow(abs_moment(samples, idx, p), 1.0 / p);
  };
  r.lhs = bootstrap(lhs, samples.size(), seed, resamples, confidence);
  r.rhs = bootstrap(rhs, samples.size(), seed, resamples, confidence);
  r.gap = bootstrap([&](const std::vector<std::size_t>* idx) { return rhs(idx) - lhs(idx); }, samples.size(), seed,
                    resamples, confidence);
  r.violated = r.gap.upper < 0.0;
  r.margin = r.gap.lower > 0.0 || (r.lhs.value == 0.0 && r.rhs.value == 0.0);
  return r;
}

std::vector<double> hermite_chaos_samples(int chaos, std::size_t count, const CounterRng& rng) {
  std::vector<double> out(count);
  for (std::size_t i = 0; i < count; i += 2) {
    const auto z = rng.normal_pair(static_cast<std::uint32_t>(chaos), static_cast<std::uint32_t>(i / 2), 0,
                                   Stream::scalar);
    out[i] = hermite(chaos, z[0], 1.0);
    if (i + 1 < count) out[i + 1] = hermite(chaos, z[1], 1.0);
  }
  return out;
}

}  // namespace phi43
