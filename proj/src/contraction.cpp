#include "phi43/contraction.hpp"

#include "phi43/paraproduct.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace phi43 {

namespace {

double binom(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

double factorial(int k) {
  double r = 1.0;
  for (int i = 2; i <= k; ++i) r *= i;
  return r;
}

// Wick expansion of (internal group of m leaves) joined with (root group of r leaves).
void expand_join(std::map<int, std::vector<TreeTerm>>& out, int m, int r, bool truncate_root) {
  for (int k = 0; k <= std::min(m, r); ++k) {
    TreeTerm t;
    t.coefficient = binom(m, k) * binom(r, k) * factorial(k);
    t.internal_leaves = m;
    t.root_leaves = r;
    t.contractions = k;
    t.truncate_root_group = truncate_root;
    out[t.free_leaves()].push_back(t);
  }
}

}  // namespace

std::map<int, std::vector<TreeTerm>> chaos_components(Diagram d, double cprime) {
  std::map<int, std::vector<TreeTerm>> out;
  switch (d) {
    case Diagram::linear: {
      TreeTerm t;
      t.root_leaves = 1;
      out[1].push_back(t);
      break;
    }
    case Diagram::wick_square: {
      TreeTerm t;
      t.root_leaves = 2;
      out[2].push_back(t);
      break;
    }
    case Diagram::tree: {
      TreeTerm t;
      t.internal_leaves = 3;
      out[3].push_back(t);
      break;
    }
    case Diagram::tree_linear: expand_join(out, 3, 1, true); break;
    case Diagram::square_square: {
      expand_join(out, 2, 2, true);
      TreeTerm counter;
      counter.coefficient = -2.0 * cprime;
      out[0].push_back(counter);
      break;
    }
    case Diagram::tree_square: {
      expand_join(out, 3, 2, true);
      TreeTerm counter;
      counter.coefficient = -6.0 * cprime;
      counter.root_leaves = 1;
      out[1].push_back(counter);
      break;
    }
  }
  return out;
}

int ContractionGraph::root(int copy) const {
  for (std::size_t v = 0; v < vertices.size(); ++v)
    if (vertices[v].kind == GraphVertex::Kind::root && vertices[v].copy == copy) return static_cast<int>(v);
  return -1;
}

bool ContractionGraph::pairing_complete() const {
  std::vector<int> seen(vertices.size(), 0);
  for (auto [x, y] : pairing) {
    if (x == y) return false;
    ++seen[static_cast<std::size_t>(x)];
    ++seen[static_cast<std::size_t>(y)];
  }
  for (std::size_t v = 0; v < vertices.size(); ++v) {
    const bool leaf = vertices[v].kind == GraphVertex::Kind::leaf;
    if (leaf != (seen[v] == 1) || seen[v] > 1) return false;
  }
  return true;
}

bool kirchhoff_ok(const ContractionGraph& g, const std::vector<Frequency>& edge_freq, const Frequency& w) {
  if (edge_freq.size() != g.edges.size()) return false;
  const auto nv = g.vertices.size();
  std::vector<Frequency> in(nv, Frequency::Zero());
  std::vector<int> out_edge(nv, -1);
  for (std::size_t e = 0; e < g.edges.size(); ++e) {
    in[static_cast<std::size_t>(g.edges[e].parent)] += edge_freq[e];
    out_edge[static_cast<std::size_t>(g.edges[e].child)] = static_cast<int>(e);
  }
  for (auto [x, y] : g.pairing) {
    const auto ex = out_edge[static_cast<std::size_t>(x)];
    const auto ey = out_edge[static_cast<std::size_t>(y)];
    if (ex < 0 || ey < 0) return false;
    if (edge_freq[static_cast<std::size_t>(ex)] + edge_freq[static_cast<std::size_t>(ey)] != Frequency::Zero())
      return false;
  }
  for (std::size_t v = 0; v < nv; ++v) {
    const auto& vx = g.vertices[v];
    if (vx.kind == GraphVertex::Kind::leaf) continue;
    if (vx.kind == GraphVertex::Kind::root) {
      const Frequency target = vx.copy == 0 ? Frequency(w) : Frequency(-w);
      if (in[v] != target) return false;
    } else if (out_edge[v] < 0 || in[v] != edge_freq[static_cast<std::size_t>(out_edge[v])]) {
      return false;
    }
  }
  return true;
}

namespace {

struct CopyLayout {
  int root = -1;
  int internal = -1;
  std::vector<int> internal_leaves;
  std::vector<int> root_leaves;
};

CopyLayout add_copy(ContractionGraph& g, const TreeTerm& t, int copy) {
  CopyLayout c;
  auto add = [&](GraphVertex::Kind k) {
    g.vertices.push_back({k, copy});
    return static_cast<int>(g.vertices.size() - 1);
  };
  c.root = add(GraphVertex::Kind::root);
  if (t.has_internal()) {
    c.internal = add(GraphVertex::Kind::internal);
    g.edges.push_back({c.internal, c.root, GraphEdge::Role::heat});
    for (int i = 0; i < t.internal_leaves; ++i) {
      const int v = add(GraphVertex::Kind::leaf);
      g.edges.push_back({v, c.internal, GraphEdge::Role::leaf});
      c.internal_leaves.push_back(v);
    }
  }
  const auto root_role =
      t.has_internal() ? (t.join == JoinKind::resonant ? GraphEdge::Role::resonant : GraphEdge::Role::plain)
                       : GraphEdge::Role::leaf;
  for (int i = 0; i < t.root_leaves; ++i) {
    const int v = add(GraphVertex::Kind::leaf);
    g.edges.push_back({v, c.root, root_role});
    c.root_leaves.push_back(v);
  }
  for (int i = 0; i < t.contractions; ++i) g.pairing.emplace_back(c.internal_leaves[i], c.root_leaves[i]);
  return c;
}

}  // namespace

std::vector<ContractionGraph> pair_graphs(const TreeTerm& a, const TreeTerm& b) {
  std::vector<ContractionGraph> out;
  if (a.free_leaves() != b.free_leaves()) return out;
  ContractionGraph base;
  base.terms = {a, b};
  const auto ca = add_copy(base, a, 0);
  const auto cb = add_copy(base, b, 1);

  // free leaves, internal ones first
  auto free_of = [](const CopyLayout& c, const TreeTerm& t) {
    std::vector<std::pair<int, bool>> f;  // (vertex, internal?)
    for (std::size_t i = static_cast<std::size_t>(t.contractions); i < c.internal_leaves.size(); ++i)
      f.emplace_back(c.internal_leaves[i], true);
    for (std::size_t i = static_cast<std::size_t>(t.contractions); i < c.root_leaves.size(); ++i)
      f.emplace_back(c.root_leaves[i], false);
    return f;
  };
  const auto fa = free_of(ca, a);
  const auto fb = free_of(cb, b);
  std::vector<int> perm(fb.size());
  std::iota(perm.begin(), perm.end(), 0);
  std::map<std::array<int, 4>, std::pair<int, std::vector<int>>> types;
  do {
    std::array<int, 4> key{0, 0, 0, 0};
    for (std::size_t i = 0; i < fa.size(); ++i) {
      const bool ia = fa[i].second;
      const bool ib = fb[static_cast<std::size_t>(perm[i])].second;
      ++key[static_cast<std::size_t>((ia ? 0 : 2) + (ib ? 0 : 1))];
    }
    auto& entry = types[key];
    if (entry.first == 0) entry.second = perm;
    ++entry.first;
  } while (std::next_permutation(perm.begin(), perm.end()));

  for (const auto& [key, entry] : types) {
    ContractionGraph g = base;
    for (std::size_t i = 0; i < fa.size(); ++i)
      g.pairing.emplace_back(fa[i].first, fb[static_cast<std::size_t>(entry.second[i])].first);
    g.multiplicity = entry.first * a.coefficient * b.coefficient;
    out.push_back(std::move(g));
  }
  return out;
}

double enumeration_size(const ContractionGraph& g, const FrequencyLattice& lattice) {
  int cross = 0;
  for (auto [x, y] : g.pairing)
    if (g.vertices[static_cast<std::size_t>(x)].copy != g.vertices[static_cast<std::size_t>(y)].copy) ++cross;
  const auto free = static_cast<double>(g.pairing.size()) - (cross > 0 ? 1.0 : 0.0);
  return std::pow(static_cast<double>(lattice.size()), free);
}

namespace {

enum class Slot { internal, root };

struct PairInfo {
  int first;   // leaf carrying +eta
  int second;  // leaf carrying -eta
  bool cross;
  int copy_first, copy_second;
  Slot slot_first, slot_second;
};

struct Evaluator {
  const ContractionGraph& g;
  const FrequencyLattice& L;
  Frequency w;
  std::optional<double> dt;
  const DyadicPartition& partition;
  std::vector<PairInfo> pairs;
  std::vector<int> out_edge;
  std::array<int, 2> internal_vertex{-1, -1};

  Evaluator(const ContractionGraph& graph, const FrequencyLattice& lattice, const Frequency& omega,
            std::optional<double> step, const DyadicPartition& part)
      : g(graph), L(lattice), w(omega), dt(step), partition(part) {
    out_edge.assign(g.vertices.size(), -1);
    for (std::size_t e = 0; e < g.edges.size(); ++e) out_edge[static_cast<std::size_t>(g.edges[e].child)] = int(e);
    for (std::size_t v = 0; v < g.vertices.size(); ++v)
      if (g.vertices[v].kind == GraphVertex::Kind::internal)
        internal_vertex[static_cast<std::size_t>(g.vertices[v].copy)] = static_cast<int>(v);
    auto slot = [&](int leaf) {
      const auto parent = g.edges[static_cast<std::size_t>(out_edge[static_cast<std::size_t>(leaf)])].parent;
      return g.vertices[static_cast<std::size_t>(parent)].kind == GraphVertex::Kind::internal ? Slot::internal
                                                                                           : Slot::root;
    };
    auto copy = [&](int v) { return g.vertices[static_cast<std::size_t>(v)].copy; };
    std::vector<PairInfo> within, cross;
    for (auto [x, y] : g.pairing) {
      int a = x, b = y;
      if (copy(a) != copy(b)) {
        if (copy(a) == 1) std::swap(a, b);
      } else if (slot(a) == Slot::root && slot(b) == Slot::internal) {
        std::swap(a, b);
      }
      PairInfo p{a, b, copy(a) != copy(b), copy(a), copy(b), slot(a), slot(b)};
      (p.cross ? cross : within).push_back(p);
    }
    pairs = within;
    pairs.insert(pairs.end(), cross.begin(), cross.end());  // a cross pair last when there is one
  }

  bool has_cross() const { return !pairs.empty() && pairs.back().cross; }

  // value of one frequency tuple; etas indexed like pairs
  double term(const std::vector<Frequency>& etas) {
    std::vector<Frequency> edge_freq(g.edges.size(), Frequency::Zero());
    for (std::size_t k = 0; k < pairs.size(); ++k) {
      edge_freq[static_cast<std::size_t>(out_edge[static_cast<std::size_t>(pairs[k].first)])] = etas[k];
      edge_freq[static_cast<std::size_t>(out_edge[static_cast<std::size_t>(pairs[k].second)])] = -etas[k];
    }
    std::array<Frequency, 2> internal_sum{Frequency::Zero(), Frequency::Zero()};
    std::array<Frequency, 2> root_group{Frequency::Zero(), Frequency::Zero()};
    for (const auto& e : g.edges) {
      const auto& child = g.vertices[static_cast<std::size_t>(e.child)];
      if (child.kind != GraphVertex::Kind::leaf) continue;
      const auto& parent = g.vertices[static_cast<std::size_t>(e.parent)];
      const auto f = edge_freq[static_cast<std::size_t>(&e - g.edges.data())];
      if (parent.kind == GraphVertex::Kind::internal) internal_sum[static_cast<std::size_t>(parent.copy)] += f;
      else root_group[static_cast<std::size_t>(parent.copy)] += f;
    }
    for (int c = 0; c < 2; ++c) {
      const auto iv = internal_vertex[static_cast<std::size_t>(c)];
      if (iv >= 0)
        edge_freq[static_cast<std::size_t>(out_edge[static_cast<std::size_t>(iv)])] =
            internal_sum[static_cast<std::size_t>(c)];
    }
    if (!kirchhoff_ok(g, edge_freq, w)) return 0.0;

    double value = 1.0;
    for (int c = 0; c < 2; ++c) {
      const auto& t = g.terms[static_cast<std::size_t>(c)];
      const auto& is = internal_sum[static_cast<std::size_t>(c)];
      const auto& rg = root_group[static_cast<std::size_t>(c)];
      if (t.has_internal() && t.truncate_internal && !L.contains(is)) return 0.0;
      if (t.root_leaves >= 2 && t.truncate_root_group && !L.contains(rg)) return 0.0;
      if (t.has_internal() && t.root_leaves > 0 && t.join == JoinKind::resonant) {
        value *= resonant_weight(is, rg, partition);
        if (value == 0.0) return 0.0;
      }
    }
    std::array<double, 3> rate{0.0, 0.0, 0.0};  // alpha, beta, gamma
    for (int c = 0; c < 2; ++c)
      if (internal_vertex[static_cast<std::size_t>(c)] >= 0)
        rate[static_cast<std::size_t>(c)] += bracket_sq(internal_sum[static_cast<std::size_t>(c)]);
    for (std::size_t k = 0; k < pairs.size(); ++k) {
      const double a = bracket_sq(etas[k]);
      value /= 2.0 * a;
      const auto& p = pairs[k];
      const bool i1 = p.slot_first == Slot::internal, i2 = p.slot_second == Slot::internal;
      if (i1 && i2) rate[2] += a;  // both internal means different copies
      else if (i1) rate[static_cast<std::size_t>(p.copy_first)] += a;
      else if (i2) rate[static_cast<std::size_t>(p.copy_second)] += a;
    }
    const bool ha = internal_vertex[0] >= 0, hb = internal_vertex[1] >= 0;
    if (!dt) {
      if (ha && hb) value *= lower_square_kernel(rate[0], rate[1], rate[2]);
      else if (ha) value /= rate[0];
      else if (hb) value /= rate[1];
    } else {
      const double h = *dt;
      auto prefactor = [&](int c) {
        const double A = bracket_sq(internal_sum[static_cast<std::size_t>(c)]);
        return -std::expm1(-h * A) / A * std::exp(h * A);
      };
      if (ha && hb) value *= prefactor(0) * prefactor(1) * lower_square_sum(rate[0], rate[1], rate[2], h);
      else if (ha) value *= prefactor(0) * single_sum(rate[0], h);
      else if (hb) value *= prefactor(1) * single_sum(rate[1], h);
    }
    return value;
  }
};

}  // namespace

double moment_by_contraction(const ContractionGraph& g, const FrequencyLattice& lattice, const Frequency& w,
                             std::optional<double> dt, const EnumerationLimits& limits,
                             const DyadicPartition& partition) {
  if (!g.pairing_complete()) throw std::invalid_argument("graph pairing leaves unpaired leaves");
  if (!lattice.contains(w)) return 0.0;
  const double size = enumeration_size(g, lattice);
  if (size > limits.max_tuples) {
    std::ostringstream os;
    os << "contraction enumeration infeasible: about " << size << " tuples (limit " << limits.max_tuples << ")";
    throw std::length_error(os.str());
  }
  Evaluator ev(g, lattice, w, dt, partition);
  const std::size_t np = ev.pairs.size();
  if (np == 0) return w.isZero() ? g.multiplicity : 0.0;
  const bool cross = ev.has_cross();
  if (!cross && !w.isZero()) return 0.0;
  const std::size_t free = cross ? np - 1 : np;
  std::vector<std::size_t> idx(free, 0);
  std::vector<Frequency> etas(np, Frequency::Zero());
  const std::size_t m = lattice.size();
  double total = 0.0;
  while (true) {
    Frequency cross_sum = Frequency::Zero();
    for (std::size_t k = 0; k < free; ++k) {
      etas[k] = lattice[idx[k]];
      if (ev.pairs[k].cross) cross_sum += etas[k];
    }
    bool ok = true;
    if (cross) {
      etas[np - 1] = w - cross_sum;
      ok = lattice.contains(etas[np - 1]);
    }
    if (ok) total += ev.term(etas);
    std::size_t k = 0;
    while (k < free && ++idx[k] == m) idx[k++] = 0;
    if (k == free) break;
  }
  return total * g.multiplicity;
}

double second_moment(const std::vector<TreeTerm>& terms, const FrequencyLattice& lattice, const Frequency& w,
                     std::optional<double> dt, const EnumerationLimits& limits, const DyadicPartition& partition) {
  double total = 0.0;
  for (const auto& a : terms)
    for (const auto& b : terms)
      for (const auto& g : pair_graphs(a, b)) total += moment_by_contraction(g, lattice, w, dt, limits, partition);
  return total;
}

double first_moment(const std::vector<TreeTerm>& terms, const FrequencyLattice& lattice, const Frequency& w,
                    std::optional<double> dt, const DyadicPartition& partition) {
  double total = 0.0;
  TreeTerm unit;  // a constant root on the other side
  for (const auto& t : terms) {
    if (t.free_leaves() != 0) throw std::invalid_argument("first_moment needs chaos-zero terms");
    unit.coefficient = 1.0;
    for (const auto& g : pair_graphs(t, unit)) total += moment_by_contraction(g, lattice, w, dt, {}, partition);
  }
  return total;
}

}  // namespace phi43
