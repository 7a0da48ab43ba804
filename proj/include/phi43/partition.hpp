#pragma once

#include "phi43/spectral_field.hpp"

#include <Eigen/Core>

#include <cmath>
#include <memory>
#include <vector>

namespace phi43 {

/// Radial dyadic partition of unity.
///
/// low(r) is 1 on [0, 3/4], 0 on [4/3, inf) and interpolates with the smooth
/// step h(s) / (h(s) + h(1-s)), h(s) = exp(-sharpness / s). The annulus is
/// annulus(r) = low(r/2) - low(r), so low + sum_k annulus(r / 2^k) telescopes
/// to low(r / 2^{K+1}), which is 1 once 2^{K+1} * 3/4 >= r.
class DyadicPartition {
 public:
  explicit DyadicPartition(double sharpness = 1.0);

  double sharpness() const { return sharpness_; }

  double low(double r) const;
  double annulus(double r) const;
  /// chi_k(r); k = -1 selects the low-frequency bump.
  double block(int k, double r) const;
  /// Largest k whose block can be nonzero at some radius <= rmax.
  static int last_block(double rmax);

 private:
  double sharpness_;
};

/// Block weights chi_k(|w|) for every lattice frequency, k = -1 .. last.
class BlockTable {
 public:
  BlockTable(LatticePtr lattice, const DyadicPartition& partition);

  const LatticePtr& lattice() const { return lattice_; }
  const DyadicPartition& partition() const { return partition_; }
  int first() const { return -1; }
  int last() const { return last_; }
  int count() const { return last_ + 2; }
  /// Column of weights for block k.
  const Eigen::ArrayXd& weights(int k) const { return weights_[static_cast<std::size_t>(k + 1)]; }

 private:
  LatticePtr lattice_;
  DyadicPartition partition_;
  int last_;
  std::vector<Eigen::ArrayXd> weights_;
};

using BlockTablePtr = std::shared_ptr<const BlockTable>;
BlockTablePtr make_block_table(LatticePtr lattice, const DyadicPartition& partition = DyadicPartition());

DyadicPartition build_partition(double sharpness = 1.0);

/// delta_k f. Blocks past the table range are zero.
SpectralField lp_block(const SpectralField& f, int k, const BlockTable& table);
SpectralField lp_block(const SpectralField& f, int k, const DyadicPartition& partition = DyadicPartition());

/// sum_{j <= k} delta_j f.
SpectralField lp_low(const SpectralField& f, int k, const BlockTable& table);

}  // namespace phi43
