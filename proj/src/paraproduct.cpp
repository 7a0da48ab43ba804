#include "phi43/paraproduct.hpp"

#include <stdexcept>

namespace phi43 {

Paraproducts::Paraproducts(BlockTablePtr table)
    : table_(std::move(table)), grid_(make_product_grid(table_->lattice(), 2)) {}

Paraproducts::Paraproducts(LatticePtr lattice, const DyadicPartition& partition)
    : Paraproducts(make_block_table(std::move(lattice), partition)) {}

void Paraproducts::check(const SpectralField& f, const SpectralField& g) const {
  require_same_lattice(f, g);
  if (!(*f.lattice() == *table_->lattice())) throw std::invalid_argument("paraproduct lattice mismatch");
}

SpectralField Paraproducts::para_low(const SpectralField& f, const SpectralField& g) const {
  check(f, g);
  const auto& t = *table_;
  Eigen::ArrayXd acc = Eigen::ArrayXd::Zero(static_cast<Eigen::Index>(grid_->size()));
  Eigen::ArrayXd low, high;
  Eigen::VectorXcd partial = Eigen::VectorXcd::Zero(f.coeffs().size());
  for (int l = 1; l <= t.last(); ++l) {
    partial.array() += f.coeffs().array() * t.weights(l - 2);
    grid_->to_physical(partial, low);
    grid_->to_physical(g.coeffs().array() * t.weights(l), high);
    acc += low * high;
  }
  return grid_->from_physical(acc);
}

SpectralField Paraproducts::para_high(const SpectralField& f, const SpectralField& g) const { return para_low(g, f); }

SpectralField Paraproducts::resonant(const SpectralField& f, const SpectralField& g) const {
  check(f, g);
  const auto& t = *table_;
  Eigen::ArrayXd acc = Eigen::ArrayXd::Zero(static_cast<Eigen::Index>(grid_->size()));
  Eigen::ArrayXd fk, gk;
  for (int k = -1; k <= t.last(); ++k) {
    Eigen::ArrayXd near = t.weights(k);
    if (k - 1 >= -1) near += t.weights(k - 1);
    if (k + 1 <= t.last()) near += t.weights(k + 1);
    grid_->to_physical(f.coeffs().array() * t.weights(k), fk);
    grid_->to_physical(g.coeffs().array() * near, gk);
    acc += fk * gk;
  }
  return grid_->from_physical(acc);
}

SpectralField Paraproducts::product(const SpectralField& f, const SpectralField& g) const {
  check(f, g);
  return grid_->from_physical(grid_->to_physical(f) * grid_->to_physical(g));
}

SpectralField para_low(const SpectralField& f, const SpectralField& g) { return Paraproducts(f.lattice()).para_low(f, g); }
SpectralField para_high(const SpectralField& f, const SpectralField& g) { return Paraproducts(f.lattice()).para_high(f, g); }
SpectralField resonant(const SpectralField& f, const SpectralField& g) { return Paraproducts(f.lattice()).resonant(f, g); }

double resonant_weight_radial(double r1, double r2, const DyadicPartition& partition) {
  const int last = DyadicPartition::last_block(std::max(r1, r2)) + 1;
  double total = 0.0;
  for (int k = -1; k <= last; ++k) {
    const double a = partition.block(k, r1);
    if (a == 0.0) continue;
    for (int l = std::max(-1, k - 1); l <= k + 1; ++l) total += a * partition.block(l, r2);
  }
  return total;
}

double resonant_weight(const Frequency& w1, const Frequency& w2, const DyadicPartition& partition) {
  return resonant_weight_radial(std::sqrt(static_cast<double>(w1.squaredNorm())),
                                std::sqrt(static_cast<double>(w2.squaredNorm())), partition);
}

}  // namespace phi43
