#pragma once

#include <Eigen/Core>

#include <cmath>
#include <cstddef>
#include <memory>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

namespace phi43 {

/// Integer frequency in Z^d, stored with three components; unused trailing
/// components are zero.
using Frequency = Eigen::Vector3i;

enum class BallNorm { euclidean, max };

std::string to_string(BallNorm norm);
BallNorm ball_norm_from_string(const std::string& name);

/// <omega>^2 = 1 + 4 pi^2 |omega|^2 for a squared Euclidean length.
template <typename Scalar = double>
constexpr Scalar bracket_sq_from_norm_sq(Scalar norm_sq) {
  return Scalar(1) + Scalar(4) * std::numbers::pi_v<Scalar> * std::numbers::pi_v<Scalar> * norm_sq;
}

template <typename Scalar = double>
Scalar bracket_sq(const Frequency& w) {
  return bracket_sq_from_norm_sq<Scalar>(static_cast<Scalar>(w.squaredNorm()));
}

template <typename Scalar = double>
Scalar bracket(const Frequency& w) {
  using std::sqrt;
  return sqrt(bracket_sq<Scalar>(w));
}

/// Truncated frequency set {omega in Z^d : |omega| <= n}.
///
/// Frequencies are enumerated lexicographically over (w0, w1, w2) with each
/// component running from -n to n, so the order depends only on (d, n, norm).
/// The set contains 0 and is closed under negation.
class FrequencyLattice {
 public:
  FrequencyLattice(int dim, int cutoff, BallNorm norm = BallNorm::euclidean);

  int dim() const { return dim_; }
  int cutoff() const { return cutoff_; }
  BallNorm norm() const { return norm_; }
  std::size_t size() const { return freqs_.size(); }

  const Frequency& operator[](std::size_t i) const { return freqs_[i]; }
  const std::vector<Frequency>& frequencies() const { return freqs_; }

  /// <omega> and <omega>^2 of the i-th frequency.
  double weight(std::size_t i) const { return weight_[i]; }
  double weight_sq(std::size_t i) const { return weight_sq_[i]; }
  const Eigen::ArrayXd& weights_sq() const { return weight_sq_; }
  /// Euclidean length |omega|.
  double length(std::size_t i) const { return length_[i]; }
  const Eigen::ArrayXd& lengths() const { return length_; }

  bool contains(const Frequency& w) const;
  /// Index of w, or -1 when w is outside the lattice.
  std::ptrdiff_t find(const Frequency& w) const;
  std::optional<std::size_t> index_of(const Frequency& w) const;
  std::size_t zero_index() const { return zero_; }
  std::size_t negated(std::size_t i) const { return neg_[i]; }

  /// True for exactly one member of every pair {omega, -omega} with omega != 0:
  /// the one whose first nonzero component is positive.
  bool is_half_representative(std::size_t i) const { return half_[i]; }

  /// Largest Euclidean length on the lattice.
  double max_length() const { return max_length_; }

  std::string descriptor() const;

  bool operator==(const FrequencyLattice& other) const {
    return dim_ == other.dim_ && cutoff_ == other.cutoff_ && norm_ == other.norm_;
  }

 private:
  std::size_t box_index(const Frequency& w) const;

  int dim_;
  int cutoff_;
  BallNorm norm_;
  std::vector<Frequency> freqs_;
  Eigen::ArrayXd weight_;
  Eigen::ArrayXd weight_sq_;
  Eigen::ArrayXd length_;
  std::vector<std::ptrdiff_t> box_;  // dense (2n+1)^d lookup
  std::vector<std::size_t> neg_;
  std::vector<bool> half_;
  std::size_t zero_ = 0;
  double max_length_ = 0.0;
};

using LatticePtr = std::shared_ptr<const FrequencyLattice>;

LatticePtr make_lattice(int dim, int cutoff, BallNorm norm = BallNorm::euclidean);

/// Membership rule shared by the lattice and by every oracle sum.
bool in_ball(const Frequency& w, int cutoff, BallNorm norm);

}  // namespace phi43
