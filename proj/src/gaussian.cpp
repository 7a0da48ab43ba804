#include "phi43/gaussian.hpp"

#include <cmath>
#include <stdexcept>

namespace phi43 {

namespace {

// each of Re, Im carries half of the complex variance
constexpr double kHalfSqrt = 0.70710678118654752440;

}  // namespace

TimeGrid TimeGrid::from_times(const std::vector<double>& times) {
  if (times.empty()) throw std::invalid_argument("empty time grid");
  TimeGrid g;
  g.t0 = times.front();
  g.nodes = times.size();
  if (times.size() == 1) return g;
  g.dt = times[1] - times[0];
  if (!(g.dt > 0.0)) throw std::invalid_argument("time grid must be strictly increasing");
  for (std::size_t i = 1; i < times.size(); ++i) {
    const double expected = g.t0 + static_cast<double>(i) * g.dt;
    if (std::abs(times[i] - expected) > 1e-12 * std::max(1.0, std::abs(expected)))
      throw std::invalid_argument("time grid is not uniform");
  }
  return g;
}

LinearSampler::LinearSampler(LatticePtr lattice, double dt, const CounterRng& rng, std::uint32_t replica,
                             int refinement)
    : lattice_(std::move(lattice)), dt_(dt), rng_(rng), replica_(replica), refinement_(refinement) {
  if (!(dt > 0.0)) throw std::invalid_argument("time step must be positive");
  if (refinement < 0 || refinement > 16) throw std::invalid_argument("refinement level out of range");
  for (std::size_t i = 0; i < lattice_->size(); ++i)
    if (lattice_->is_half_representative(i)) reps_.push_back(i);
  reps_.push_back(lattice_->zero_index());
  const auto m = static_cast<Eigen::Index>(reps_.size());
  rate_.resize(m);
  variance_.resize(m);
  for (Eigen::Index j = 0; j < m; ++j) {
    rate_[j] = lattice_->weight_sq(reps_[static_cast<std::size_t>(j)]);
    variance_[j] = 0.5 / rate_[j];
  }
  const std::size_t fine_steps = std::size_t{1} << refinement_;
  const Eigen::ArrayXd base_rho = (-rate_ * dt_ * static_cast<double>(fine_steps)).exp();
  base_rho_ = base_rho;
  base_sd_ = (variance_ * (1.0 - base_rho.square())).sqrt();
  for (int level = 1; level <= refinement_; ++level) {
    const Eigen::ArrayXd rho = (-rate_ * dt_ * static_cast<double>(fine_steps >> level)).exp();
    bridge_mean_.push_back(rho / (1.0 + rho.square()));
    bridge_sd_.push_back((variance_ * (1.0 - rho.square()) / (1.0 + rho.square())).sqrt());
  }

  // stationary start
  const std::size_t fine = std::size_t{1} << refinement_;
  buffer_.assign(fine + 1, Eigen::ArrayXcd(m));
  auto& x0 = buffer_[fine];  // moved to the front by the first advance
  for (Eigen::Index j = 0; j < m - 1; ++j) {
    const auto z = rng_.normal_pair(replica_, static_cast<std::uint32_t>(reps_[j]), 0, Stream::linear_path);
    const double sd = std::sqrt(0.5 * variance_[j]);
    x0[j] = Complex(sd * z[0], sd * z[1]);
  }
  {
    const auto z = rng_.normal_pair(replica_, static_cast<std::uint32_t>(reps_.back()), 0, Stream::linear_path);
    x0[m - 1] = std::sqrt(variance_[m - 1]) * z[0];
  }
  pos_ = fine;
  interval_ = 0;
}

void LinearSampler::advance_interval() {
  const std::size_t fine = buffer_.size() - 1;
  const auto m = static_cast<Eigen::Index>(reps_.size());
  buffer_[0] = buffer_[fine];
  ++interval_;
  const auto step = static_cast<std::uint32_t>(interval_);

  auto& end = buffer_[fine];
  for (Eigen::Index j = 0; j < m; ++j) {
    const double rho = base_rho_[j];
    const auto z = rng_.normal_pair(replica_, static_cast<std::uint32_t>(reps_[j]), step, Stream::linear_path);
    if (j == m - 1) {
      end[j] = rho * buffer_[0][j].real() + base_sd_[j] * z[0];
    } else {
      const double sd = kHalfSqrt * base_sd_[j];
      end[j] = rho * buffer_[0][j] + Complex(sd * z[0], sd * z[1]);
    }
  }

  // bridge refinement, coarse to fine
  for (int level = 1; level <= refinement_; ++level) {
    const std::size_t half = fine >> level;
    const auto& mean = bridge_mean_[static_cast<std::size_t>(level - 1)];
    const auto& total_sd = bridge_sd_[static_cast<std::size_t>(level - 1)];
    const std::size_t mids = std::size_t{1} << (level - 1);
    for (std::size_t q = 0; q < mids; ++q) {
      const std::size_t pos = (2 * q + 1) * half;
      const auto& left = buffer_[pos - half];
      const auto& right = buffer_[pos + half];
      auto& mid = buffer_[pos];
      const auto key = static_cast<std::uint32_t>((interval_ - 1) * (std::size_t{1} << level) + 2 * q + 1);
      for (Eigen::Index j = 0; j < m; ++j) {
        const auto z = rng_.normal_pair(replica_, static_cast<std::uint32_t>(reps_[j]), key, Stream::linear_path,
                                        static_cast<std::uint32_t>(level));
        if (j == m - 1) {
          mid[j] = mean[j] * (left[j].real() + right[j].real()) + total_sd[j] * z[0];
        } else {
          const double sd = kHalfSqrt * total_sd[j];
          mid[j] = mean[j] * (left[j] + right[j]) + Complex(sd * z[0], sd * z[1]);
        }
      }
    }
  }
  pos_ = 0;
}

SpectralField LinearSampler::to_field(std::size_t pos) const {
  SpectralField f(lattice_);
  const auto& x = buffer_[pos];
  for (std::size_t j = 0; j < reps_.size(); ++j) {
    const auto i = reps_[j];
    const Complex v = x[static_cast<Eigen::Index>(j)];
    f[i] = v;
    f[lattice_->negated(i)] = std::conj(v);
  }
  f[lattice_->zero_index()] = x[static_cast<Eigen::Index>(reps_.size() - 1)].real();
  return f;
}

SpectralField LinearSampler::next() {
  if (pos_ == buffer_.size() - 1) advance_interval();
  auto f = to_field(pos_);
  ++pos_;
  ++index_;
  return f;
}

FieldTrajectory sample_stationary_linear(LatticePtr lattice, const TimeGrid& grid, const CounterRng& rng,
                                         std::uint32_t replica, int refinement) {
  FieldTrajectory out{lattice, grid, {}, "1"};
  LinearSampler sampler(lattice, grid.dt, rng, replica, refinement);
  out.fields.reserve(grid.nodes);
  for (std::size_t i = 0; i < grid.nodes; ++i) out.fields.push_back(sampler.next());
  return out;
}

SpectralField sample_gaussian_field(LatticePtr lattice, const Eigen::ArrayXd& variance, const CounterRng& rng,
                                    std::uint32_t replica, std::uint32_t step) {
  SpectralField f(lattice);
  for (std::size_t i = 0; i < lattice->size(); ++i) {
    const auto v = variance[static_cast<Eigen::Index>(i)];
    if (i == lattice->zero_index()) {
      f[i] = std::sqrt(v) * rng.normal_pair(replica, static_cast<std::uint32_t>(i), step, Stream::random_field)[0];
    } else if (lattice->is_half_representative(i)) {
      const auto z = rng.normal_pair(replica, static_cast<std::uint32_t>(i), step, Stream::random_field);
      const double sd = std::sqrt(0.5 * v);
      f[i] = Complex(sd * z[0], sd * z[1]);
      f[lattice->negated(i)] = std::conj(f[i]);
    }
  }
  return f;
}

}  // namespace phi43
