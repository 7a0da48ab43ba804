#include "phi43/besov.hpp"

#include <algorithm>
#include <stdexcept>

namespace phi43 {

int oversampled_points(int cutoff, int oversample) {
  if (oversample < 2) throw std::invalid_argument("oversample factor must be >= 2");
  return FourierGrid::good_size(oversample * (2 * cutoff + 1));
}

double linf_on_grid(const SpectralField& f, const FourierGrid& grid) {
  return grid.to_physical(f).abs().maxCoeff();
}

double lp_on_grid(const SpectralField& f, const FourierGrid& grid, double p) {
  return std::pow(grid.to_physical(f).abs().pow(p).mean(), 1.0 / p);
}

std::vector<double> besov_terms(const SpectralField& f, double alpha, int oversample, const BlockTable& table) {
  const auto grid = cached_grid(f.lattice(), oversampled_points(f.lattice()->cutoff(), oversample));
  std::vector<double> terms;
  for (int k = -1; k <= table.last(); ++k) {
    const auto block = lp_block(f, k, table);
    terms.push_back(std::exp2(alpha * k) * linf_on_grid(block, *grid));
  }
  return terms;
}

double besov_norm(const SpectralField& f, double alpha, int oversample, const BlockTable& table) {
  const auto terms = besov_terms(f, alpha, oversample, table);
  return *std::max_element(terms.begin(), terms.end());
}

double besov_norm(const SpectralField& f, double alpha, int oversample) {
  return besov_norm(f, alpha, oversample, *make_block_table(f.lattice()));
}

SpectralField heat_semigroup(const SpectralField& f, double t) {
  if (t < 0.0) throw std::invalid_argument("heat semigroup time must be nonnegative");
  SpectralField out(f.lattice());
  out.coeffs() = f.coeffs().array() * (-t * f.lattice()->weights_sq()).exp();
  return out;
}

std::vector<double> heat_smoothing_probe(const SpectralField& f, double alpha, double beta,
                                         const std::vector<double>& times, int oversample,
                                         const BlockTable& table) {
  if (beta < alpha) throw std::invalid_argument("heat smoothing probe needs beta >= alpha");
  std::vector<double> out;
  for (double t : times) {
    if (!(t > 0.0)) throw std::invalid_argument("heat smoothing probe times must be positive");
    out.push_back(besov_norm(heat_semigroup(f, t), beta, oversample, table) * std::pow(t, 0.5 * (beta - alpha)));
  }
  return out;
}

std::vector<BernsteinRow> bernstein_constants(const SpectralField& f, double p, int oversample,
                                              const BlockTable& table) {
  const auto grid = cached_grid(f.lattice(), oversampled_points(f.lattice()->cutoff(), oversample));
  const int d = f.lattice()->dim();
  std::vector<BernsteinRow> rows;
  for (int k = 0; k <= table.last(); ++k) {
    const auto physical = grid->to_physical(lp_block(f, k, table));
    const double linf = physical.abs().maxCoeff();
    const double lp = std::pow(physical.abs().pow(p).mean(), 1.0 / p);
    const double c = lp > 0.0 ? linf / (std::exp2(d * k / p) * lp) : 0.0;
    rows.push_back({k, linf, lp, c});
  }
  return rows;
}

}  // namespace phi43
