#pragma once

#include "phi43/partition.hpp"

#include <vector>

namespace phi43 {

/// Points per dimension used for sup-norm evaluation: good size >= oversample * (2n+1).
int oversampled_points(int cutoff, int oversample);

/// Grid maximum of |f|, a lower bound for the true sup norm.
double linf_on_grid(const SpectralField& f, const FourierGrid& grid);
/// (mean over the grid of |f|^p)^{1/p}.
double lp_on_grid(const SpectralField& f, const FourierGrid& grid, double p);

/// sup_{k >= -1} 2^{alpha k} |delta_k f|_inf with the sup norm taken on an
/// oversampled grid. Throws when oversample < 2.
double besov_norm(const SpectralField& f, double alpha, int oversample, const BlockTable& table);
double besov_norm(const SpectralField& f, double alpha, int oversample = 2);

/// Per-block terms 2^{alpha k} |delta_k f|_inf, k = -1 .. table.last().
std::vector<double> besov_terms(const SpectralField& f, double alpha, int oversample, const BlockTable& table);

/// P_t f: coefficients multiplied by exp(-t <w>^2). Throws for t < 0.
SpectralField heat_semigroup(const SpectralField& f, double t);

/// |P_t f|_{C^beta} * t^{(beta - alpha)/2} for each t.
std::vector<double> heat_smoothing_probe(const SpectralField& f, double alpha, double beta,
                                         const std::vector<double>& times, int oversample,
                                         const BlockTable& table);

struct BernsteinRow {
  int block;
  double linf;
  double lp;
  double constant;  // linf / (2^{d k / p} lp)
};

std::vector<BernsteinRow> bernstein_constants(const SpectralField& f, double p, int oversample,
                                              const BlockTable& table);

}  // namespace phi43
