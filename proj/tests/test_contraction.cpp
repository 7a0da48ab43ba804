#include "phi43/contraction.hpp"
#include "phi43/paraproduct.hpp"

#include <doctest.h>

#include <algorithm>
#include <numeric>

using namespace phi43;

namespace {

ContractionGraph linear_pair() {
  using K = GraphVertex::Kind;
  ContractionGraph g;
  g.vertices = {{K::root, 0}, {K::root, 1}, {K::leaf, 0}, {K::leaf, 1}};
  g.edges = {{2, 0, GraphEdge::Role::leaf}, {3, 1, GraphEdge::Role::leaf}};
  g.pairing = {{2, 3}};
  return g;
}

double K(double a, double b, double g) { return (1 / (a + b)) * (1 / (b + g) + 1 / (a + g)); }

}  // namespace

TEST_CASE("kirchhoff on hand-built graphs") {
  const auto g = linear_pair();
  const Frequency w(1, 2, 0);
  CHECK(g.pairing_complete());
  CHECK(kirchhoff_ok(g, {w, Frequency(-w)}, w));
  CHECK(!kirchhoff_ok(g, {w, w}, w));
  CHECK(!kirchhoff_ok(g, {Frequency(-w), w}, w));
  CHECK(!kirchhoff_ok(g, {w}, w));

  // root <- internal <- two leaves, paired with a single-leaf copy is incomplete
  using Kd = GraphVertex::Kind;
  ContractionGraph t;
  t.vertices = {{Kd::root, 0}, {Kd::internal, 0}, {Kd::leaf, 0}, {Kd::leaf, 0}, {Kd::root, 1}, {Kd::leaf, 1}};
  t.edges = {{1, 0, GraphEdge::Role::heat}, {2, 1, GraphEdge::Role::leaf}, {3, 1, GraphEdge::Role::leaf},
             {5, 4, GraphEdge::Role::leaf}};
  t.pairing = {{2, 5}};
  CHECK(!t.pairing_complete());
  const Frequency a(1, 0, 0), b(0, 1, 0);
  // internal vertex must forward the sum of its children
  CHECK(!kirchhoff_ok(t, {a, a, b, Frequency(-a)}, Frequency(a + b)));
}

TEST_CASE("generated graphs are complete and counted") {
  for (auto d : kAllDiagrams)
    for (const auto& [order, terms] : chaos_components(d, 0.1))
      for (const auto& x : terms)
        for (const auto& y : terms)
          for (const auto& g : pair_graphs(x, y)) {
            CHECK(g.pairing_complete());
            CHECK(g.multiplicity != 0.0);
          }
  // linear: one graph of weight one
  const auto lin = chaos_components(Diagram::linear, 0.0).at(1);
  const auto gs = pair_graphs(lin[0], lin[0]);
  REQUIRE(gs.size() == 1);
  const auto L = make_lattice(3, 2);
  for (Frequency w : {Frequency(0, 0, 0), Frequency(1, 1, 0)})
    CHECK(moment_by_contraction(gs[0], *L, w) == doctest::Approx(moment_linear(w, 0.0)));
}

TEST_CASE("enumerator reproduces the square and tree oracles") {
  const auto L = make_lattice(3, 3);
  const auto sq = chaos_components(Diagram::wick_square, 0.0).at(2);
  const auto tr = chaos_components(Diagram::tree, 0.0).at(3);
  for (std::size_t i = 0; i < L->size(); i += 3) {
    const auto& w = (*L)[i];
    CHECK(second_moment(sq, *L, w) == doctest::Approx(moment_wick_square(*L, w)).epsilon(1e-12));
    if (i % 9 == 0) {
      CHECK(second_moment(tr, *L, w) == doctest::Approx(moment_tree(*L, w)).epsilon(1e-12));
      CHECK(second_moment(tr, *L, w, 1.0 / 32) == doctest::Approx(moment_tree(*L, w, 1.0 / 32)).epsilon(1e-12));
    }
  }
}

// E[tau(w) tau(-w)] for the fourth chaos of I(:X^3:) resonant X by summing
// copy-0 frequencies and every leaf bijection onto copy 1.
TEST_CASE("tree-linear fourth chaos by brute force") {
  const int n = 2;
  const auto L = make_lattice(1, n);
  const auto& F = L->frequencies();
  for (Frequency w : {Frequency(0, 0, 0), Frequency(1, 0, 0), Frequency(2, 0, 0)}) {
    double total = 0.0;
    std::array<int, 4> perm{};
    for (const auto& w1 : F)
      for (const auto& w2 : F)
        for (const auto& w3 : F) {
          const Frequency inner = w1 + w2 + w3, w4 = w - inner;
          if (!L->contains(inner) || !L->contains(w4)) continue;
          const std::array<Frequency, 4> leaf{w1, w2, w3, w4};
          const double weight0 = resonant_weight(inner, w4);
          std::iota(perm.begin(), perm.end(), 0);
          do {
            // copy-1 leaf j carries -leaf[perm[j]]; leaves 0..2 hang below the internal vertex
            Frequency inner1 = Frequency::Zero();
            for (int j = 0; j < 3; ++j) inner1 -= leaf[static_cast<std::size_t>(perm[j])];
            const Frequency root1 = -leaf[static_cast<std::size_t>(perm[3])];
            if (!L->contains(inner1)) continue;
            double cov = 1.0, alpha = bracket_sq(inner), beta = bracket_sq(inner1), gamma = 0.0;
            for (int j = 0; j < 4; ++j) {
              const int i = perm[j];  // copy-0 leaf paired with copy-1 leaf j
              const double a = bracket_sq(leaf[static_cast<std::size_t>(i)]);
              cov /= 2 * a;
              const bool in0 = i < 3, in1 = j < 3;
              if (in0 && in1) gamma += a;
              else if (in0) alpha += a;
              else if (in1) beta += a;
            }
            total += weight0 * resonant_weight(inner1, root1) * cov * K(alpha, beta, gamma);
          } while (std::next_permutation(perm.begin(), perm.end()));
        }
    const auto terms = chaos_components(Diagram::tree_linear, 0.05).at(4);
    CHECK(second_moment(terms, *L, w) == doctest::Approx(total).epsilon(1e-12));
  }
}

TEST_CASE("chaos-zero terms are centred") {
  const auto L = make_lattice(1, 2);
  for (auto d : {Diagram::square_square, Diagram::tree_square}) {
    const auto comps = chaos_components(d, renorm_cprime(*L, CprimeVariant::resonant));
    if (!comps.count(0)) continue;
    CHECK(std::abs(first_moment(comps.at(0), *L, Frequency::Zero())) < 1e-12);
  }
}
