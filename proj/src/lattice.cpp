#include "phi43/lattice.hpp"

#include <stdexcept>

namespace phi43 {

std::string to_string(BallNorm norm) { return norm == BallNorm::euclidean ? "euclidean" : "max"; }

BallNorm ball_norm_from_string(const std::string& name) {
  if (name == "euclidean") return BallNorm::euclidean;
  if (name == "max") return BallNorm::max;
  throw std::invalid_argument("unknown ball norm: " + name);
}

bool in_ball(const Frequency& w, int cutoff, BallNorm norm) {
  if (norm == BallNorm::max) return w.cwiseAbs().maxCoeff() <= cutoff;
  return w.squaredNorm() <= cutoff * cutoff;
}

FrequencyLattice::FrequencyLattice(int dim, int cutoff, BallNorm norm)
    : dim_(dim), cutoff_(cutoff), norm_(norm) {
  if (dim < 1 || dim > 3) throw std::invalid_argument("lattice dimension must be 1, 2 or 3");
  if (cutoff < 0) throw std::invalid_argument("lattice cutoff must be nonnegative");

  const int side = 2 * cutoff + 1;
  std::size_t box_size = 1;
  for (int j = 0; j < dim; ++j) box_size *= static_cast<std::size_t>(side);
  box_.assign(box_size, -1);

  const int r1 = dim >= 2 ? cutoff : 0;
  const int r2 = dim >= 3 ? cutoff : 0;
  for (int a = -cutoff; a <= cutoff; ++a)
    for (int b = -r1; b <= r1; ++b)
      for (int c = -r2; c <= r2; ++c) {
        Frequency w(a, b, c);
        if (!in_ball(w, cutoff, norm)) continue;
        box_[box_index(w)] = static_cast<std::ptrdiff_t>(freqs_.size());
        freqs_.push_back(w);
      }

  const auto count = freqs_.size();
  weight_.resize(count);
  weight_sq_.resize(count);
  length_.resize(count);
  neg_.resize(count);
  half_.resize(count);
  for (std::size_t i = 0; i < count; ++i) {
    const auto& w = freqs_[i];
    weight_sq_[i] = bracket_sq(w);
    weight_[i] = std::sqrt(weight_sq_[i]);
    length_[i] = std::sqrt(static_cast<double>(w.squaredNorm()));
    max_length_ = std::max(max_length_, length_[i]);
    neg_[i] = static_cast<std::size_t>(box_[box_index(-w)]);
    if (w.isZero()) zero_ = i;
    bool positive = false;
    for (int j = 0; j < 3; ++j) {
      if (w[j] != 0) {
        positive = w[j] > 0;
        break;
      }
    }
    half_[i] = positive;
  }
}

std::size_t FrequencyLattice::box_index(const Frequency& w) const {
  const int side = 2 * cutoff_ + 1;
  std::size_t idx = 0;
  for (int j = 0; j < dim_; ++j) idx = idx * side + static_cast<std::size_t>(w[j] + cutoff_);
  return idx;
}

bool FrequencyLattice::contains(const Frequency& w) const { return find(w) >= 0; }

std::ptrdiff_t FrequencyLattice::find(const Frequency& w) const {
  for (int j = 0; j < 3; ++j) {
    if (j >= dim_ && w[j] != 0) return -1;
    if (j < dim_ && (w[j] < -cutoff_ || w[j] > cutoff_)) return -1;
  }
  return box_[box_index(w)];
}

std::optional<std::size_t> FrequencyLattice::index_of(const Frequency& w) const {
  const auto i = find(w);
  if (i < 0) return std::nullopt;
  return static_cast<std::size_t>(i);
}

std::string FrequencyLattice::descriptor() const {
  return "d=" + std::to_string(dim_) + ";n=" + std::to_string(cutoff_) + ";norm=" + to_string(norm_) +
         ";size=" + std::to_string(size());
}

LatticePtr make_lattice(int dim, int cutoff, BallNorm norm) {
  return std::make_shared<const FrequencyLattice>(dim, cutoff, norm);
}

}  // namespace phi43
