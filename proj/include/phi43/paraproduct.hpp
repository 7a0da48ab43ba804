#pragma once

#include "phi43/partition.hpp"

namespace phi43 {

/// Bony decomposition on one lattice. Products are formed on an alias-free
/// degree-2 grid and truncated back to the lattice.
class Paraproducts {
 public:
  explicit Paraproducts(BlockTablePtr table);
  explicit Paraproducts(LatticePtr lattice, const DyadicPartition& partition = DyadicPartition());

  const BlockTable& table() const { return *table_; }
  const GridPtr& grid() const { return grid_; }

  /// sum_{k < l-1} delta_k f delta_l g
  SpectralField para_low(const SpectralField& f, const SpectralField& g) const;
  /// para_low(g, f)
  SpectralField para_high(const SpectralField& f, const SpectralField& g) const;
  /// sum_{|k-l| <= 1} delta_k f delta_l g
  SpectralField resonant(const SpectralField& f, const SpectralField& g) const;
  /// Truncated pointwise product.
  SpectralField product(const SpectralField& f, const SpectralField& g) const;

 private:
  void check(const SpectralField& f, const SpectralField& g) const;

  BlockTablePtr table_;
  GridPtr grid_;
};

SpectralField para_low(const SpectralField& f, const SpectralField& g);
SpectralField para_high(const SpectralField& f, const SpectralField& g);
SpectralField resonant(const SpectralField& f, const SpectralField& g);

/// sum_{|k-l| <= 1} chi_k(w1) chi_l(w2).
double resonant_weight(const Frequency& w1, const Frequency& w2, const DyadicPartition& partition = DyadicPartition());
double resonant_weight_radial(double r1, double r2, const DyadicPartition& partition = DyadicPartition());

}  // namespace phi43
