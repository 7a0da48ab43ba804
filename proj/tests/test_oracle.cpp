#include "phi43/diagrams.hpp"
#include "phi43/oracle.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace phi43;
using std::numbers::pi;

TEST_CASE("renormalization constants, small cutoffs") {
  CHECK(renorm_c(*make_lattice(3, 0)) == doctest::Approx(0.5));
  CHECK(renorm_c(*make_lattice(3, 1)) == doctest::Approx(0.5 + 3.0 / (1.0 + 4 * pi * pi)).epsilon(1e-14));
  CHECK(renorm_cprime(*make_lattice(3, 0), CprimeVariant::plain) == doctest::Approx(1.0 / 12).epsilon(1e-14));
  CHECK(renorm_cprime(*make_lattice(3, 0), CprimeVariant::resonant) == doctest::Approx(1.0 / 12).epsilon(1e-14));
  // n = 1 by hand
  const auto L = make_lattice(3, 1);
  double plain = 0.0;
  for (const auto& a : L->frequencies())
    for (const auto& b : L->frequencies())
      plain += 0.25 / (bracket_sq(a) * bracket_sq(b) * (bracket_sq(a) + bracket_sq(b) + bracket_sq(Frequency(a + b))));
  CHECK(renorm_cprime(*L, CprimeVariant::plain) == doctest::Approx(plain).epsilon(1e-14));
  CHECK(renorm_cprime(*L, CprimeVariant::resonant) < plain);
}

TEST_CASE("laplace evaluation of the double sums") {
  for (int n : {2, 4, 8}) {
    const auto L = make_lattice(3, n);
    const auto d = cprime_sums_direct(*L);
    const auto f = cprime_sums_laplace(L);
    CHECK(f.plain == doctest::Approx(d.plain).epsilon(1e-7));
    CHECK(f.triple == doctest::Approx(d.triple).epsilon(1e-7));
  }
}

TEST_CASE("second moments of the linear and square diagrams") {
  const Frequency w(1, 2, 0);
  CHECK(moment_linear(w, 0.0) == doctest::Approx(1 / (2 * bracket_sq(w))));
  CHECK(moment_linear(w, 0.5) == doctest::Approx(std::exp(-0.5 * bracket_sq(w)) / (2 * bracket_sq(w))));
  const auto L = make_lattice(3, 3);
  double s = 0.0;
  for (const auto& a : L->frequencies()) {
    const Frequency b = w - a;
    if (in_ball(b, 3, BallNorm::euclidean)) s += 2.0 / (4 * bracket_sq(a) * bracket_sq(b));
  }
  CHECK(moment_wick_square(*L, w) == doctest::Approx(s).epsilon(1e-14));
}

TEST_CASE("time kernels") {
  for (auto [a, b, g] : {std::array<double, 3>{1.0, 2.0, 3.0}, {40.0, 0.7, 5.0}, {0.5, 0.5, 0.5}}) {
    CHECK(lower_square_kernel(a, b, g) == doctest::Approx(lower_square_kernel(b, a, g)));
    CHECK(tree_kernel(a, g) == doctest::Approx(lower_square_kernel(a, a, g)));
    CHECK(tree_kernel(a, g) == doctest::Approx(1 / (a * (a + g))));
    // the discrete sums approach the integrals as the step shrinks
    const double h = 1e-4;
    CHECK(h * h * lower_square_sum(a, b, g, h) == doctest::Approx(lower_square_kernel(a, b, g)).epsilon(1e-3));
    CHECK(h * single_sum(a, h) == doctest::Approx(1 / a).epsilon(1e-3));
    // zero-order hold: w^2 sum_{j,j'} p^{j+j'} r^{|j-j'|} with w = (1-p)/a
    const double hh = 1.0 / 16, wgt = (1 - std::exp(-hh * a)) / a;
    CHECK(tree_kernel_zoh(a, g, hh) ==
          doctest::Approx(wgt * wgt * lower_square_sum(a, a, g, hh) * std::exp(2 * hh * a)).epsilon(1e-12));
  }
}

TEST_CASE("tree moment through FFT matches the direct sum") {
  const auto L = make_lattice(3, 4);
  std::vector<std::size_t> probes;
  for (Frequency w : {Frequency(0, 0, 0), Frequency(1, 0, 0), Frequency(2, 1, 0), Frequency(3, 2, 1)})
    probes.push_back(static_cast<std::size_t>(L->find(w)));
  const auto cont = moment_tree_fft(L, probes);
  const auto zoh = moment_tree_fft(L, probes, 1.0 / 64);
  for (std::size_t i = 0; i < probes.size(); ++i) {
    CHECK(cont[i] == doctest::Approx(moment_tree(*L, (*L)[probes[i]])).epsilon(1e-6));
    CHECK(zoh[i] == doctest::Approx(moment_tree(*L, (*L)[probes[i]], 1.0 / 64)).epsilon(1e-10));
  }
}

TEST_CASE("logarithmic reference") {
  const auto rows = logdiv_reference({1, 2, 4});
  REQUIRE(rows.size() == 3);
  CHECK(rows[0].difference == 0.0);
  CHECK(rows[2].difference == doctest::Approx(rows[2].value - rows[1].value));
  CHECK(rows[1].value > rows[0].value);
}
