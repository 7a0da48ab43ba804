#pragma once

#include "phi43/diagrams.hpp"
#include "phi43/oracle.hpp"

#include <map>
#include <optional>
#include <vector>

namespace phi43 {

enum class JoinKind { resonant, plain };

/// One term of the Wick expansion of a diagram: a root at time t carrying
/// `root_leaves` linear leaves and, optionally, a heat line from an internal
/// vertex at an earlier time u carrying `internal_leaves` leaves. `contractions`
/// internal leaves are paired with root leaves inside the term.
struct TreeTerm {
  double coefficient = 1.0;
  int root_leaves = 0;
  int internal_leaves = 0;
  int contractions = 0;
  JoinKind join = JoinKind::resonant;
  bool truncate_internal = true;    // internal group frequency in the lattice
  bool truncate_root_group = true;  // root-leaf group frequency in the lattice (two or more leaves)

  bool has_internal() const { return internal_leaves > 0; }
  int free_leaves() const { return internal_leaves + root_leaves - 2 * contractions; }
};

/// Chaos decomposition of a diagram: chaos order -> terms.
std::map<int, std::vector<TreeTerm>> chaos_components(Diagram d, double cprime);

struct GraphVertex {
  enum class Kind { root, internal, leaf };
  Kind kind;
  int copy;  // 0: tau(w), 1: tau(-w)
};

struct GraphEdge {
  enum class Role { leaf, heat, resonant, plain };
  int child;
  int parent;
  Role role;
};

/// Second-moment graph: two copies of a tree term glued along a pairing of leaves.
struct ContractionGraph {
  std::vector<GraphVertex> vertices;
  std::vector<GraphEdge> edges;                // child -> parent, one outgoing edge per non-root vertex
  std::vector<std::pair<int, int>> pairing;     // leaf vertex pairs
  std::array<TreeTerm, 2> terms;
  double multiplicity = 1.0;

  int root(int copy) const;
  /// Every leaf belongs to exactly one pair.
  bool pairing_complete() const;
};

/// Edge frequencies by edge index. Returns true when every pair carries
/// opposite frequencies, every internal vertex and root receives the sum of
/// its children, and the roots emit w and -w.
bool kirchhoff_ok(const ContractionGraph& g, const std::vector<Frequency>& edge_freq, const Frequency& w);

/// Graphs for E[T_a(w) T_b(-w)] grouped by pairing type, with multiplicities.
std::vector<ContractionGraph> pair_graphs(const TreeTerm& a, const TreeTerm& b);

struct EnumerationLimits {
  double max_tuples = 5.0e8;
};

/// Exact value of one graph times its multiplicity. dt selects the
/// zero-order-hold discrete kernels instead of the continuous ones.
double moment_by_contraction(const ContractionGraph& g, const FrequencyLattice& lattice, const Frequency& w,
                             std::optional<double> dt = std::nullopt, const EnumerationLimits& limits = {},
                             const DyadicPartition& partition = DyadicPartition());

/// sum_{a, b} E[T_a(w) T_b(-w)] over a list of terms of one chaos order.
double second_moment(const std::vector<TreeTerm>& terms, const FrequencyLattice& lattice, const Frequency& w,
                     std::optional<double> dt = std::nullopt, const EnumerationLimits& limits = {},
                     const DyadicPartition& partition = DyadicPartition());

/// E[T(w)] for chaos-zero terms (nonzero only at w = 0).
double first_moment(const std::vector<TreeTerm>& terms, const FrequencyLattice& lattice, const Frequency& w,
                    std::optional<double> dt = std::nullopt, const DyadicPartition& partition = DyadicPartition());

/// Enumeration size estimate for one graph.
double enumeration_size(const ContractionGraph& g, const FrequencyLattice& lattice);

}  // namespace phi43
