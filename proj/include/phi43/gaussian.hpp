#pragma once

#include "phi43/rng.hpp"
#include "phi43/spectral_field.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace phi43 {

/// Uniform time grid t_i = t0 + i dt, i = 0 .. nodes-1.
struct TimeGrid {
  double t0 = 0.0;
  double dt = 1.0 / 64.0;
  std::size_t nodes = 1;

  double time(std::size_t i) const { return t0 + static_cast<double>(i) * dt; }
  /// Validates uniform spacing to 1e-12 relative; throws otherwise.
  static TimeGrid from_times(const std::vector<double>& times);
};

struct FieldTrajectory {
  LatticePtr lattice;
  TimeGrid grid;
  std::vector<SpectralField> fields;
  std::string label;
};

/// Streaming sampler of the stationary linear solution, one exact
/// Ornstein-Uhlenbeck process per mode with rate <w>^2 and stationary variance 1/(2<w>^2).
///
/// The path is drawn on a base grid of step dt * 2^refinement and refined by
/// exact bridge sampling, so the same seed yields the same path at every
/// refinement level: the even nodes of a refined path are the nodes of the
/// coarser one.
class LinearSampler {
 public:
  LinearSampler(LatticePtr lattice, double dt, const CounterRng& rng, std::uint32_t replica, int refinement = 0);

  /// Field at the current node; advances to the next node.
  SpectralField next();
  std::size_t index() const { return index_; }

  const LatticePtr& lattice() const { return lattice_; }
  double dt() const { return dt_; }

 private:
  void advance_interval();
  SpectralField to_field(std::size_t pos) const;

  LatticePtr lattice_;
  double dt_;
  CounterRng rng_;
  std::uint32_t replica_;
  int refinement_;
  std::vector<std::size_t> reps_;       // half-lattice representatives followed by zero
  Eigen::ArrayXd variance_;             // 1/(2 a) per representative
  Eigen::ArrayXd rate_;                 // a = <w>^2 per representative
  Eigen::ArrayXd base_rho_;
  Eigen::ArrayXd base_sd_;
  std::vector<Eigen::ArrayXd> bridge_mean_;
  std::vector<Eigen::ArrayXd> bridge_sd_;
  std::vector<Eigen::ArrayXcd> buffer_;  // fine nodes of the current base interval
  std::size_t interval_ = 0;
  std::size_t pos_ = 0;
  std::size_t index_ = 0;
};

/// Stationary linear solution on the grid for one replica.
FieldTrajectory sample_stationary_linear(LatticePtr lattice, const TimeGrid& grid, const CounterRng& rng,
                                         std::uint32_t replica, int refinement = 0);

/// Independent centred Gaussian coefficients with E|c(w)|^2 = variance(w), Hermitian.
SpectralField sample_gaussian_field(LatticePtr lattice, const Eigen::ArrayXd& variance, const CounterRng& rng,
                                    std::uint32_t replica, std::uint32_t step = 0);

/// H_p(x, T) by the three-term recursion H_p = x H_{p-1} - (p-1) T H_{p-2}.
double hermite(int p, double x, double T);
Eigen::ArrayXd hermite(int p, const Eigen::ArrayXd& x, double T);

/// H_p(f, c) evaluated pointwise on an alias-free grid, truncated to the lattice. p must be 2 or 3.
SpectralField wick_power(const SpectralField& f, int p, double c);

struct MomentRatio {
  double value = 0.0;
  double lower = 0.0;
  double upper = 0.0;
  double se = 0.0;  // bootstrap standard deviation
};

struct NelsonReport {
  int chaos = 0;
  int p = 0;
  MomentRatio ratio;  // (E|X|^p)^{1/p} / (E X^2)^{1/2}
  double bound = 0.0;  // (p-1)^{chaos/2}
  bool violated = false;  // lower CI bound above the bound
  bool margin = false;    // upper CI bound below the bound
};

/// Ratio and bootstrap CI at the given confidence level. Throws on zero variance.
NelsonReport nelson_check(const std::vector<double>& samples, int chaos, int p, std::uint64_t seed,
                          int resamples = 400, double confidence = 0.95);

struct HypercontractivityReport {
  int chaos = 0;
  double t = 0.0;
  double p = 0.0;
  double q = 0.0;
  MomentRatio lhs;  // (E|T_t X|^q)^{1/q} = e^{-chaos t} (E|X|^q)^{1/q}
  MomentRatio rhs;  // (E|X|^p)^{1/p}
  MomentRatio gap;  // rhs - lhs
  bool violated = false;
  bool margin = false;
};

HypercontractivityReport hypercontractivity_check(const std::vector<double>& samples, int chaos, double t, double p,
                                                  std::uint64_t seed, int resamples = 400,
                                                  double confidence = 0.95);

/// Samples of H_chaos(G, 1) for standard normal G drawn from the scalar stream.
std::vector<double> hermite_chaos_samples(int chaos, std::size_t count, const CounterRng& rng);

}  // namespace phi43
