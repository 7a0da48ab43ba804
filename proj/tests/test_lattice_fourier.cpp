#include "phi43/gaussian.hpp"
#include "phi43/spectral_field.hpp"

#include <doctest.h>

#include <cmath>

using namespace phi43;

TEST_CASE("lattice enumeration") {
  const auto L = make_lattice(3, 1);
  CHECK(L->size() == 7);
  CHECK(L->contains(Frequency::Zero()));
  CHECK(L->weight_sq(L->zero_index()) == doctest::Approx(1.0));
  std::size_t half = 0;
  for (std::size_t i = 0; i < L->size(); ++i) {
    CHECK((*L)[L->negated(i)] == -(*L)[i]);
    half += L->is_half_representative(i);
  }
  CHECK(half == 3);
  CHECK(make_lattice(3, 2)->size() == 33);
  CHECK(make_lattice(3, 1, BallNorm::max)->size() == 27);
  CHECK(make_lattice(1, 5)->size() == 11);
  CHECK(!L->contains(Frequency(1, 1, 0)));
  CHECK(L->find(Frequency(1, 1, 0)) == -1);
}

TEST_CASE("bracket") {
  CHECK(bracket_sq(Frequency(1, 0, 0)) == doctest::Approx(1 + 4 * M_PI * M_PI));
  CHECK(bracket(Frequency(0, 0, 0)) == 1.0);
}

TEST_CASE("good sizes") {
  CHECK(FourierGrid::good_size(7) == 8);
  CHECK(FourierGrid::good_size(11) == 12);
  CHECK(FourierGrid::good_size(131) == 135);
  CHECK(FourierGrid::good_size(1) == 1);
}

TEST_CASE("fourier round trip and normalization") {
  const auto L = make_lattice(3, 4);
  const auto grid = make_grid(L, 12);
  Eigen::ArrayXd var = Eigen::ArrayXd::Ones(static_cast<Eigen::Index>(L->size()));
  const auto f = sample_gaussian_field(L, var, CounterRng(5), 0);
  CHECK(f.hermitian_defect() < 1e-15);
  const auto x = grid->to_physical(f);
  const auto g = grid->from_physical(x);
  CHECK((g.coeffs() - f.coeffs()).cwiseAbs().maxCoeff() < 1e-12);

  // c(e1) = c(-e1) = 1/2 is cos(2 pi x)
  SpectralField c(L);
  c[static_cast<std::size_t>(L->find(Frequency(1, 0, 0)))] = 0.5;
  c[static_cast<std::size_t>(L->find(Frequency(-1, 0, 0)))] = 0.5;
  const auto v = grid->to_physical(c);
  CHECK(v[0] == doctest::Approx(1.0));
  CHECK(v.sum() == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(v.maxCoeff() == doctest::Approx(1.0));
  CHECK(v.minCoeff() == doctest::Approx(-1.0));
}

TEST_CASE("truncated products stay hermitian") {
  const auto L = make_lattice(3, 3);
  Eigen::ArrayXd var = 1.0 / (2.0 * L->weights_sq());
  const auto f = sample_gaussian_field(L, var, CounterRng(9), 1);
  for (int p : {2, 3}) {
    const auto w = wick_power(f, p, 0.3);
    CHECK(w.hermitian_defect() < 1e-13);
    CHECK(w.all_finite());
  }
}

TEST_CASE("field arithmetic checks lattices") {
  SpectralField a(make_lattice(3, 2)), b(make_lattice(3, 3));
  CHECK_THROWS(a += b);
  SpectralField c(make_lattice(3, 2));
  CHECK_NOTHROW(a += c);
}
