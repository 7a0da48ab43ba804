#pragma once

#include "phi43/lattice.hpp"

#include <Eigen/Core>

#include <complex>
#include <memory>
#include <mutex>

namespace phi43 {

using Complex = std::complex<double>;

/// Fourier coefficients of a real periodic field, one per lattice frequency.
class SpectralField {
 public:
  SpectralField() = default;
  explicit SpectralField(LatticePtr lattice);
  SpectralField(LatticePtr lattice, Eigen::VectorXcd coeffs);

  static SpectralField constant(LatticePtr lattice, double value);

  const LatticePtr& lattice() const { return lattice_; }
  std::size_t size() const { return static_cast<std::size_t>(coeffs_.size()); }

  Eigen::VectorXcd& coeffs() { return coeffs_; }
  const Eigen::VectorXcd& coeffs() const { return coeffs_; }

  Complex operator[](std::size_t i) const { return coeffs_[static_cast<Eigen::Index>(i)]; }
  Complex& operator[](std::size_t i) { return coeffs_[static_cast<Eigen::Index>(i)]; }

  /// Coefficient at w, zero outside the lattice.
  Complex at(const Frequency& w) const;

  /// max |c(-w) - conj(c(w))| over the lattice.
  double hermitian_defect() const;
  bool all_finite() const;

  SpectralField& operator+=(const SpectralField& other);
  SpectralField& operator-=(const SpectralField& other);
  SpectralField& operator*=(double s);

 private:
  LatticePtr lattice_;
  Eigen::VectorXcd coeffs_;
};

SpectralField operator+(SpectralField a, const SpectralField& b);
SpectralField operator-(SpectralField a, const SpectralField& b);
SpectralField operator*(double s, SpectralField a);

void require_same_lattice(const SpectralField& a, const SpectralField& b);

/// Physical grid of M^d points on the unit torus, x_j = i_j / M, with cached
/// real-to-complex transforms. Coefficients follow f(x) = sum_w c(w) e^{2 pi i w.x}.
///
/// Plans are created under a global lock and executed with the new-array
/// interface, so one grid can be shared between worker threads.
class FourierGrid {
 public:
  FourierGrid(LatticePtr lattice, int points);
  ~FourierGrid();
  FourierGrid(const FourierGrid&) = delete;
  FourierGrid& operator=(const FourierGrid&) = delete;

  /// Smallest 2^a 3^b 5^c integer >= minimum.
  static int good_size(int minimum);
  /// Points per dimension for alias-free truncated products of `degree` fields.
  static int points_for_degree(int cutoff, int degree);

  const LatticePtr& lattice() const { return lattice_; }
  int points() const { return points_; }
  std::size_t size() const { return real_size_; }

  Eigen::ArrayXd to_physical(const SpectralField& f) const;
  void to_physical(const Eigen::VectorXcd& coeffs, Eigen::ArrayXd& out) const;

  /// Transform and truncate to the lattice. Hermitian symmetry is imposed by
  /// reading one member of each conjugate pair.
  SpectralField from_physical(const Eigen::ArrayXd& values) const;
  void from_physical(const Eigen::ArrayXd& values, Eigen::VectorXcd& coeffs) const;

 private:
  LatticePtr lattice_;
  int points_;
  std::size_t real_size_;
  std::size_t complex_size_;
  std::vector<std::ptrdiff_t> offset_;  // half-spectrum offset, -1 for a negative last component
  std::vector<bool> direct_;            // read from the spectrum rather than by conjugation
  void* forward_ = nullptr;
  void* backward_ = nullptr;
};

using GridPtr = std::shared_ptr<const FourierGrid>;

GridPtr make_grid(LatticePtr lattice, int points);
/// Process-wide cache keyed by lattice parameters and point count.
GridPtr cached_grid(LatticePtr lattice, int points);
/// Alias-free grid for products of `degree` lattice fields.
GridPtr make_product_grid(LatticePtr lattice, int degree);

}  // namespace phi43
