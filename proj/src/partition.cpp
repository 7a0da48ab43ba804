#include "phi43/partition.hpp"

#include <stdexcept>

namespace phi43 {

namespace {

constexpr double kInner = 0.75;
constexpr double kOuter = 4.0 / 3.0;

}  // namespace

DyadicPartition::DyadicPartition(double sharpness) : sharpness_(sharpness) {
  if (!(sharpness > 0.0)) throw std::invalid_argument("partition sharpness must be positive");
}

double DyadicPartition::low(double r) const {
  r = std::abs(r);
  if (r <= kInner) return 1.0;
  if (r >= kOuter) return 0.0;
  const double s = (r - kInner) / (kOuter - kInner);
  const double up = std::exp(-sharpness_ / s);
  const double down = std::exp(-sharpness_ / (1.0 - s));
  return down / (up + down);
}

double DyadicPartition::annulus(double r) const { return low(0.5 * r) - low(r); }

double DyadicPartition::block(int k, double r) const {
  if (k < -1) return 0.0;
  if (k == -1) return low(r);
  return annulus(std::ldexp(r, -k));
}

int DyadicPartition::last_block(double rmax) {
  int k = -1;
  // block k starts at 2^k * 3/4
  while (std::ldexp(kInner, k + 1) < rmax) ++k;
  return k;
}

DyadicPartition build_partition(double sharpness) { return DyadicPartition(sharpness); }

BlockTable::BlockTable(LatticePtr lattice, const DyadicPartition& partition)
    : lattice_(std::move(lattice)), partition_(partition), last_(DyadicPartition::last_block(lattice_->max_length())) {
  const auto& len = lattice_->lengths();
  for (int k = -1; k <= last_; ++k) {
    Eigen::ArrayXd w(len.size());
    for (Eigen::Index i = 0; i < len.size(); ++i) w[i] = partition_.block(k, len[i]);
    weights_.push_back(std::move(w));
  }
}

BlockTablePtr make_block_table(LatticePtr lattice, const DyadicPartition& partition) {
  return std::make_shared<const BlockTable>(std::move(lattice), partition);
}

SpectralField lp_block(const SpectralField& f, int k, const BlockTable& table) {
  if (k < -1) throw std::invalid_argument("block index must be >= -1");
  if (!(*f.lattice() == *table.lattice())) throw std::invalid_argument("block table lattice mismatch");
  SpectralField out(f.lattice());
  if (k > table.last()) return out;
  out.coeffs() = f.coeffs().array() * table.weights(k);
  return out;
}

SpectralField lp_block(const SpectralField& f, int k, const DyadicPartition& partition) {
  return lp_block(f, k, BlockTable(f.lattice(), partition));
}

SpectralField lp_low(const SpectralField& f, int k, const BlockTable& table) {
  SpectralField out(f.lattice());
  for (int j = -1; j <= std::min(k, table.last()); ++j) out.coeffs().array() += f.coeffs().array() * table.weights(j);
  return out;
}

}  // namespace phi43
