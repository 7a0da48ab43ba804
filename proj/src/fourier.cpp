#include "phi43/spectral_field.hpp"

#include <fftw3.h>

#include <map>
#include <stdexcept>
#include <tuple>

namespace phi43 {

namespace {

std::mutex& planner_mutex() {
  static auto* m = new std::mutex;  // outlives cached grids destroyed at exit
  return *m;
}

int wrap(int k, int m) { return k >= 0 ? k : k + m; }

}  // namespace

SpectralField::SpectralField(LatticePtr lattice)
    : lattice_(std::move(lattice)), coeffs_(Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(lattice_->size()))) {}

SpectralField::SpectralField(LatticePtr lattice, Eigen::VectorXcd coeffs)
    : lattice_(std::move(lattice)), coeffs_(std::move(coeffs)) {
  if (static_cast<std::size_t>(coeffs_.size()) != lattice_->size())
    throw std::invalid_argument("coefficient count does not match lattice size");
}

SpectralField SpectralField::constant(LatticePtr lattice, double value) {
  SpectralField f(lattice);
  f[lattice->zero_index()] = value;
  return f;
}

Complex SpectralField::at(const Frequency& w) const {
  const auto i = lattice_->find(w);
  return i < 0 ? Complex(0.0) : coeffs_[i];
}

double SpectralField::hermitian_defect() const {
  double defect = 0.0;
  for (std::size_t i = 0; i < size(); ++i)
    defect = std::max(defect, std::abs((*this)[lattice_->negated(i)] - std::conj((*this)[i])));
  return defect;
}

bool SpectralField::all_finite() const {
  return coeffs_.real().allFinite() && coeffs_.imag().allFinite();
}

void require_same_lattice(const SpectralField& a, const SpectralField& b) {
  if (!a.lattice() || !b.lattice() || !(*a.lattice() == *b.lattice()))
    throw std::invalid_argument("fields live on different lattices");
}

SpectralField& SpectralField::operator+=(const SpectralField& other) {
  require_same_lattice(*this, other);
  coeffs_ += other.coeffs_;
  return *this;
}

SpectralField& SpectralField::operator-=(const SpectralField& other) {
  require_same_lattice(*this, other);
  coeffs_ -= other.coeffs_;
  return *this;
}

SpectralField& SpectralField::operator*=(double s) {
  coeffs_ *= s;
  return *this;
}

SpectralField operator+(SpectralField a, const SpectralField& b) { return a += b; }
SpectralField operator-(SpectralField a, const SpectralField& b) { return a -= b; }
SpectralField operator*(double s, SpectralField a) { return a *= s; }

int FourierGrid::good_size(int minimum) {
  for (int m = std::max(minimum, 1);; ++m) {
    int r = m;
    for (int p : {2, 3, 5})
      while (r % p == 0) r /= p;
    if (r == 1) return m;
  }
}

int FourierGrid::points_for_degree(int cutoff, int degree) {
  return good_size((std::max(degree, 1) + 1) * cutoff + 1);
}

FourierGrid::FourierGrid(LatticePtr lattice, int points) : lattice_(std::move(lattice)), points_(points) {
  const int d = lattice_->dim();
  const int n = lattice_->cutoff();
  if (points < 2 * n + 1) throw std::invalid_argument("grid too small for the lattice cutoff");

  const int half = points / 2 + 1;
  real_size_ = 1;
  for (int j = 0; j < d; ++j) real_size_ *= static_cast<std::size_t>(points);
  complex_size_ = real_size_ / static_cast<std::size_t>(points) * static_cast<std::size_t>(half);

  const auto count = lattice_->size();
  offset_.assign(count, -1);
  direct_.assign(count, false);
  for (std::size_t i = 0; i < count; ++i) {
    const auto& w = (*lattice_)[i];
    const int last = w[d - 1];
    if (last < 0) continue;
    std::ptrdiff_t off = 0;
    for (int j = 0; j < d - 1; ++j) off = off * points + wrap(w[j], points);
    off = off * half + last;
    offset_[i] = off;
    direct_[i] = last > 0 || lattice_->is_half_representative(i) || i == lattice_->zero_index();
  }

  std::vector<int> dims(static_cast<std::size_t>(d), points);
  auto* r = fftw_alloc_real(real_size_);
  auto* c = fftw_alloc_complex(complex_size_);
  {
    std::lock_guard<std::mutex> lock(planner_mutex());
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    forward_ = fftw_plan_dft_r2c(d, dims.data(), r, c, flags);
    backward_ = fftw_plan_dft_c2r(d, dims.data(), c, r, flags);
  }
  fftw_free(r);
  fftw_free(c);
  if (!forward_ || !backward_) throw std::runtime_error("FFTW planning failed");
}

FourierGrid::~FourierGrid() {
  std::lock_guard<std::mutex> lock(planner_mutex());
  fftw_destroy_plan(static_cast<fftw_plan>(forward_));
  fftw_destroy_plan(static_cast<fftw_plan>(backward_));
}

Eigen::ArrayXd FourierGrid::to_physical(const SpectralField& f) const {
  if (!(*f.lattice() == *lattice_)) throw std::invalid_argument("field lattice does not match grid");
  Eigen::ArrayXd out;
  to_physical(f.coeffs(), out);
  return out;
}

void FourierGrid::to_physical(const Eigen::VectorXcd& coeffs, Eigen::ArrayXd& out) const {
  Eigen::VectorXcd spectrum = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(complex_size_));
  for (std::size_t i = 0; i < offset_.size(); ++i)
    if (offset_[i] >= 0) spectrum[offset_[i]] = coeffs[static_cast<Eigen::Index>(i)];
  out.resize(static_cast<Eigen::Index>(real_size_));
  fftw_execute_dft_c2r(static_cast<fftw_plan>(backward_), reinterpret_cast<fftw_complex*>(spectrum.data()),
                       out.data());
}

SpectralField FourierGrid::from_physical(const Eigen::ArrayXd& values) const {
  SpectralField f(lattice_);
  from_physical(values, f.coeffs());
  return f;
}

void FourierGrid::from_physical(const Eigen::ArrayXd& values, Eigen::VectorXcd& coeffs) const {
  if (static_cast<std::size_t>(values.size()) != real_size_) throw std::invalid_argument("grid size mismatch");
  Eigen::VectorXcd spectrum(static_cast<Eigen::Index>(complex_size_));
  fftw_execute_dft_r2c(static_cast<fftw_plan>(forward_), const_cast<double*>(values.data()),
                       reinterpret_cast<fftw_complex*>(spectrum.data()));
  const double scale = 1.0 / static_cast<double>(real_size_);
  const auto count = lattice_->size();
  coeffs.resize(static_cast<Eigen::Index>(count));
  for (std::size_t i = 0; i < count; ++i)
    if (direct_[i]) coeffs[static_cast<Eigen::Index>(i)] = spectrum[offset_[i]] * scale;
  for (std::size_t i = 0; i < count; ++i)
    if (!direct_[i])
      coeffs[static_cast<Eigen::Index>(i)] = std::conj(coeffs[static_cast<Eigen::Index>(lattice_->negated(i))]);
  const auto z = static_cast<Eigen::Index>(lattice_->zero_index());
  coeffs[z] = coeffs[z].real();
}

GridPtr make_grid(LatticePtr lattice, int points) { return std::make_shared<const FourierGrid>(lattice, points); }

GridPtr cached_grid(LatticePtr lattice, int points) {
  static std::mutex cache_mutex;
  static std::map<std::tuple<int, int, int, int>, GridPtr> cache;
  const auto key = std::make_tuple(lattice->dim(), lattice->cutoff(), static_cast<int>(lattice->norm()), points);
  std::lock_guard<std::mutex> lock(cache_mutex);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  auto grid = make_grid(lattice, points);
  cache[key] = grid;
  return grid;
}

GridPtr make_product_grid(LatticePtr lattice, int degree) {
  const int points = FourierGrid::points_for_degree(lattice->cutoff(), degree);
  return cached_grid(std::move(lattice), points);
}

}  // namespace phi43
