#include "phi43/gaussian.hpp"
#include "phi43/stats.hpp"

#include <doctest.h>

using namespace phi43;

TEST_CASE("philox known answers") {
  using A = std::array<std::uint32_t, 4>;
  CHECK(philox4x32({0, 0, 0, 0}, {0, 0}) == A{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8});
  CHECK(philox4x32({0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff}, {0xffffffff, 0xffffffff}) ==
        A{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd});
  CHECK(philox4x32({0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, {0xa4093822, 0x299f31d0}) ==
        A{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1});
}

TEST_CASE("normal draws") {
  CounterRng rng(11);
  std::vector<double> x;
  for (std::uint32_t i = 0; i < 20000; ++i) {
    const auto z = rng.normal_pair(i, 0, 0, Stream::scalar);
    x.push_back(z[0]);
    x.push_back(z[1]);
  }
  const auto e = mean_se(x);
  CHECK(std::abs(e.mean) < 5 * e.se);
  double m2 = 0;
  for (double v : x) m2 += v * v;
  CHECK(m2 / x.size() == doctest::Approx(1.0).epsilon(0.03));
  CHECK(rng.normal_pair(3, 4, 5, Stream::scalar) == CounterRng(11).normal_pair(3, 4, 5, Stream::scalar));
  CHECK(rng.normal_pair(3, 4, 5, Stream::scalar) != rng.normal_pair(3, 4, 5, Stream::bootstrap));
}

TEST_CASE("hermite polynomials") {
  CHECK(hermite(0, 1.7, 0.4) == 1.0);
  CHECK(hermite(1, 1.7, 0.4) == 1.7);
  CHECK(hermite(2, 1.7, 0.4) == doctest::Approx(1.7 * 1.7 - 0.4));
  CHECK(hermite(3, 1.7, 0.4) == doctest::Approx(1.7 * 1.7 * 1.7 - 3 * 0.4 * 1.7));
}

TEST_CASE("bridge refinement reproduces the coarse path") {
  const auto L = make_lattice(3, 2);
  CounterRng rng(42);
  LinearSampler coarse(L, 1.0 / 32, rng, 7, 0), fine(L, 1.0 / 64, rng, 7, 1);
  for (int i = 0; i < 40; ++i) {
    const auto c = coarse.next();
    const auto f = fine.next();
    fine.next();
    CHECK((c.coeffs() - f.coeffs()).cwiseAbs().maxCoeff() < 1e-14);
  }
}

TEST_CASE("stationary covariance of the linear path") {
  const auto L = make_lattice(1, 1);
  const std::size_t e1 = static_cast<std::size_t>(L->find(Frequency(1, 0, 0)));
  const double a = L->weight_sq(e1);
  const double h = 1.0 / 64;
  std::vector<double> v0, v1, vz;
  for (std::uint32_t r = 0; r < 4000; ++r) {
    LinearSampler s(L, h, CounterRng(3), r);
    const auto x0 = s.next();
    const auto x1 = s.next();
    v0.push_back(std::norm(x0[e1]));
    v1.push_back(std::real(x0[e1] * std::conj(x1[e1])));
    vz.push_back(std::norm(x0[L->zero_index()]));
    CHECK(std::abs(std::imag(x0[L->zero_index()])) == 0.0);
  }
  const auto m0 = mean_se(v0), m1 = mean_se(v1), mz = mean_se(vz);
  CHECK(std::abs(m0.mean - 1 / (2 * a)) < 5 * m0.se);
  CHECK(std::abs(m1.mean - std::exp(-h * a) / (2 * a)) < 5 * m1.se);
  CHECK(std::abs(mz.mean - 0.5) < 5 * mz.se);
}
