#pragma once

#include "phi43/partition.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace phi43 {

/// E[X(t, w) X(t + lag, -w)] = e^{-lag <w>^2} / (2 <w>^2).
double moment_linear(const Frequency& w, double lag);

/// 2 sum_{w1 + w2 = w, both in L} 1 / (4 <w1>^2 <w2>^2).
double moment_wick_square(const FrequencyLattice& lattice, const Frequency& w);

/// Lower-square kernel K(alpha, beta, gamma) = int_0^inf int_0^inf e^{-alpha s - beta s' - gamma |s - s'|} ds ds'
///   = (1 / (alpha + beta)) (1 / (beta + gamma) + 1 / (alpha + gamma)).
double lower_square_kernel(double alpha, double beta, double gamma);
/// sum_{j, j' >= 1} p^j q^{j'} r^{|j - j'|} with p = e^{-dt alpha}, q = e^{-dt beta}, r = e^{-dt gamma}.
double lower_square_sum(double alpha, double beta, double gamma, double dt);
/// sum_{j >= 1} e^{-j dt alpha}.
double single_sum(double alpha, double dt);

/// F(a, b) = K(a, a, b) = 1 / (a (a + b)).
double tree_kernel(double a, double b);
/// Discrete counterpart for the zero-order-hold integrator with step dt:
/// w^2 (1 + p r) / ((1 - p^2)(1 - p r)), w = (1 - p)/a, p = e^{-dt a}, r = e^{-dt b}.
double tree_kernel_zoh(double a, double b, double dt);

/// 6 sum_{w1 + w2 + w3 = w} prod_i 1/(2 <w_i>^2) F(<w>^2, sum_i <w_i>^2), all w_i in L.
/// With dt set, F is replaced by its zero-order-hold counterpart.
double moment_tree(const FrequencyLattice& lattice, const Frequency& w, std::optional<double> dt = std::nullopt);

/// moment_tree for many frequencies at once through FFT convolutions, for large
/// cutoffs. The continuous kernel uses a Laplace representation integrated by
/// the trapezoidal rule in log time; the discrete kernel is an exact geometric series.
std::vector<double> moment_tree_fft(const LatticePtr& lattice, const std::vector<std::size_t>& probes,
                                    std::optional<double> dt = std::nullopt);

struct CprimeSums {
  double plain = 0.0;   // w1, w2 in L
  double triple = 0.0;  // w1, w2, w1 + w2 in L
};

CprimeSums cprime_sums_direct(const FrequencyLattice& lattice);
CprimeSums cprime_sums_laplace(const LatticePtr& lattice, double log_step = 0.4);
/// Direct for small lattices, Laplace/FFT otherwise.
CprimeSums cprime_sums(const LatticePtr& lattice);

/// sum_{w1 + w2 = w, both in L} <w1>^{-alpha} <w2>^{-beta}, optionally weighted by the resonant weight.
double convolution_sum(const FrequencyLattice& lattice, const Frequency& w, double alpha, double beta, bool resonant,
                       const DyadicPartition& partition = DyadicPartition());

struct LogdivRow {
  int n = 0;
  double value = 0.0;       // S(n), all three frequencies in the cutoff ball
  double difference = 0.0;  // S(n) - S(previous n), 0 on the first row
  double over_log = 0.0;    // S(n) / ln n, 0 for n <= 1
};

std::vector<LogdivRow> logdiv_reference(const std::vector<int>& cutoffs, int dim = 3,
                                        BallNorm norm = BallNorm::euclidean);

}  // namespace phi43
