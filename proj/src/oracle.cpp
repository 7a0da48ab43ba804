#include "phi43/oracle.hpp"

#include "phi43/paraproduct.hpp"
#include "phi43/spectral_field.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>
#include <tuple>

namespace phi43 {

double moment_linear(const Frequency& w, double lag) {
  const double a = bracket_sq(w);
  return std::exp(-std::abs(lag) * a) / (2.0 * a);
}

double moment_wick_square(const FrequencyLattice& lattice, const Frequency& w) {
  double sum = 0.0;
  for (std::size_t i = 0; i < lattice.size(); ++i) {
    const auto j = lattice.find(w - lattice[i]);
    if (j < 0) continue;
    sum += 1.0 / (4.0 * lattice.weight_sq(i) * lattice.weight_sq(static_cast<std::size_t>(j)));
  }
  return 2.0 * sum;
}

double lower_square_kernel(double alpha, double beta, double gamma) {
  return (1.0 / (beta + gamma) + 1.0 / (alpha + gamma)) / (alpha + beta);
}

double lower_square_sum(double alpha, double beta, double gamma, double dt) {
  const double pq = std::exp(-dt * (alpha + beta));
  const double qr = std::exp(-dt * (beta + gamma));
  const double pr = std::exp(-dt * (alpha + gamma));
  return pq / -std::expm1(-dt * (alpha + beta)) *
         (1.0 + qr / -std::expm1(-dt * (beta + gamma)) + pr / -std::expm1(-dt * (alpha + gamma)));
}

double single_sum(double alpha, double dt) { return std::exp(-dt * alpha) / -std::expm1(-dt * alpha); }

double tree_kernel(double a, double b) { return 1.0 / (a * (a + b)); }

double tree_kernel_zoh(double a, double b, double dt) {
  const double w = -std::expm1(-dt * a) / a;
  const double pr = std::exp(-dt * (a + b));
  return w * w * (1.0 + pr) / (-std::expm1(-2.0 * dt * a) * -std::expm1(-dt * (a + b)));
}

double moment_tree(const FrequencyLattice& lattice, const Frequency& w, std::optional<double> dt) {
  const double a = bracket_sq(w);
  double sum = 0.0;
  for (std::size_t i = 0; i < lattice.size(); ++i) {
    const Frequency rest = w - lattice[i];
    const double a1 = lattice.weight_sq(i);
    for (std::size_t j = 0; j < lattice.size(); ++j) {
      const auto k = lattice.find(rest - lattice[j]);
      if (k < 0) continue;
      const double a2 = lattice.weight_sq(j);
      const double a3 = lattice.weight_sq(static_cast<std::size_t>(k));
      const double b = a1 + a2 + a3;
      const double kernel = dt ? tree_kernel_zoh(a, b, *dt) : tree_kernel(a, b);
      sum += kernel / (8.0 * a1 * a2 * a3);
    }
  }
  return 6.0 * sum;
}

namespace {

// Trapezoidal nodes s = e^u with weights s du.
std::vector<std::pair<double, double>> log_time_nodes(double u_min, double u_max, double h) {
  std::vector<std::pair<double, double>> nodes;
  for (double u = u_min; u <= u_max + 1e-12; u += h) nodes.emplace_back(std::exp(u), h * std::exp(u));
  return nodes;
}

// (g_s)^{*3} truncated to the lattice, g_s(w) = e^{-s a} / (2 a).
Eigen::VectorXcd cubed_kernel(const FourierGrid& grid, const FrequencyLattice& lattice, double s) {
  const Eigen::ArrayXd& a = lattice.weights_sq();
  Eigen::VectorXcd g = ((-s * a).exp() / (2.0 * a)).cast<Complex>().matrix();
  Eigen::ArrayXd x;
  grid.to_physical(g, x);
  Eigen::VectorXcd out;
  grid.from_physical(x.cube(), out);
  return out;
}

}  // namespace

std::vector<double> moment_tree_fft(const LatticePtr& lattice, const std::vector<std::size_t>& probes,
                                    std::optional<double> dt) {
  const auto grid = make_product_grid(lattice, 3);
  std::vector<double> out(probes.size(), 0.0);
  if (probes.empty()) return out;
  if (!dt) {
    for (const auto& [s, weight] : log_time_nodes(-36.0, 4.0, 0.4)) {
      const auto c = cubed_kernel(*grid, *lattice, s);
      for (std::size_t p = 0; p < probes.size(); ++p) {
        const double a = lattice->weight_sq(probes[p]);
        out[p] += weight * std::exp(-s * a) * c[static_cast<Eigen::Index>(probes[p])].real();
      }
    }
    for (std::size_t p = 0; p < probes.size(); ++p) out[p] *= 6.0 / lattice->weight_sq(probes[p]);
    return out;
  }
  const double h = *dt;
  double a_min = lattice->weight_sq(probes[0]);
  for (auto p : probes) a_min = std::min(a_min, lattice->weight_sq(p));
  const auto terms = static_cast<int>(std::ceil(36.0 / (h * (a_min + 3.0)))) + 1;
  std::vector<double> series(probes.size(), 0.0);
  for (int m = 0; m <= terms; ++m) {
    const auto c = cubed_kernel(*grid, *lattice, m * h);
    for (std::size_t p = 0; p < probes.size(); ++p) {
      const double a = lattice->weight_sq(probes[p]);
      const double factor = m == 0 ? 1.0 : 2.0 * std::exp(-m * h * a);
      series[p] += factor * c[static_cast<Eigen::Index>(probes[p])].real();
    }
  }
  for (std::size_t p = 0; p < probes.size(); ++p) {
    const double a = lattice->weight_sq(probes[p]);
    const double w = -std::expm1(-h * a) / a;
    out[p] = 6.0 * w * w / -std::expm1(-2.0 * h * a) * series[p];
  }
  return out;
}

CprimeSums cprime_sums_direct(const FrequencyLattice& lattice) {
  CprimeSums out;
  const auto n = lattice.size();
  for (std::size_t i = 0; i < n; ++i) {
    const double a1 = lattice.weight_sq(i);
    for (std::size_t j = 0; j < n; ++j) {
      const double a2 = lattice.weight_sq(j);
      const Frequency sum = lattice[i] + lattice[j];
      const double term = 1.0 / (a1 * a2 * (a1 + a2 + bracket_sq(sum)));
      out.plain += term;
      if (lattice.find(sum) >= 0) out.triple += term;
    }
  }
  out.plain *= 0.25;
  out.triple *= 0.25;
  return out;
}

CprimeSums cprime_sums_laplace(const LatticePtr& lattice, double log_step) {
  const int n = lattice->cutoff();
  const auto doubled = make_lattice(lattice->dim(), 2 * n, lattice->norm());
  const auto grid = make_grid(doubled, FourierGrid::good_size(4 * n + 1));
  // embedding of L into the doubled lattice
  std::vector<std::size_t> embed(lattice->size());
  for (std::size_t i = 0; i < lattice->size(); ++i) embed[i] = *doubled->index_of((*lattice)[i]);
  std::vector<bool> inside(doubled->size(), false);
  for (auto k : embed) inside[k] = true;

  const Eigen::ArrayXd& a = lattice->weights_sq();
  const Eigen::ArrayXd& a5 = doubled->weights_sq();
  CprimeSums out;
  Eigen::VectorXcd h = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(doubled->size()));
  Eigen::ArrayXd x;
  Eigen::VectorXcd conv;
  for (const auto& [s, weight] : log_time_nodes(-38.0, 4.0, log_step)) {
    for (std::size_t i = 0; i < embed.size(); ++i) {
      const auto ai = a[static_cast<Eigen::Index>(i)];
      h[static_cast<Eigen::Index>(embed[i])] = std::exp(-s * ai) / ai;
    }
    grid->to_physical(h, x);
    grid->from_physical(x.square(), conv);
    double plain = 0.0, triple = 0.0;
    for (std::size_t k = 0; k < doubled->size(); ++k) {
      const double v = std::exp(-s * a5[static_cast<Eigen::Index>(k)]) * conv[static_cast<Eigen::Index>(k)].real();
      plain += v;
      if (inside[k]) triple += v;
    }
    out.plain += weight * plain;
    out.triple += weight * triple;
  }
  out.plain *= 0.25;
  out.triple *= 0.25;
  return out;
}

CprimeSums cprime_sums(const LatticePtr& lattice) {
  static std::mutex m;
  static std::map<std::tuple<int, int, int>, CprimeSums> cache;
  const auto key = std::make_tuple(lattice->dim(), lattice->cutoff(), static_cast<int>(lattice->norm()));
  {
    std::lock_guard<std::mutex> lock(m);
    if (auto it = cache.find(key); it != cache.end()) return it->second;
  }
  const double pairs = static_cast<double>(lattice->size()) * static_cast<double>(lattice->size());
  const auto sums = pairs <= 4.0e8 ? cprime_sums_direct(*lattice) : cprime_sums_laplace(lattice);
  std::lock_guard<std::mutex> lock(m);
  cache[key] = sums;
  return sums;
}

double convolution_sum(const FrequencyLattice& lattice, const Frequency& w, double alpha, double beta, bool resonant,
                       const DyadicPartition& partition) {
  double sum = 0.0;
  for (std::size_t i = 0; i < lattice.size(); ++i) {
    const Frequency w2 = w - lattice[i];
    const auto j = lattice.find(w2);
    if (j < 0) continue;
    double term = std::pow(lattice.weight(i), -alpha) * std::pow(lattice.weight(static_cast<std::size_t>(j)), -beta);
    if (resonant) term *= resonant_weight_radial(lattice.length(i), lattice.length(static_cast<std::size_t>(j)), partition);
    sum += term;
  }
  return sum;
}

std::vector<LogdivRow> logdiv_reference(const std::vector<int>& cutoffs, int dim, BallNorm norm) {
  std::vector<LogdivRow> rows;
  for (std::size_t k = 0; k < cutoffs.size(); ++k) {
    LogdivRow r;
    r.n = cutoffs[k];
    r.value = cprime_sums(make_lattice(dim, r.n, norm)).triple;
    r.difference = k == 0 ? 0.0 : r.value - rows.back().value;
    r.over_log = r.n > 1 ? r.value / std::log(static_cast<double>(r.n)) : 0.0;
    rows.push_back(r);
  }
  return rows;
}

}  // namespace phi43
