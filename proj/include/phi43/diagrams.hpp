#pragma once

#include "phi43/gaussian.hpp"
#include "phi43/paraproduct.hpp"

#include <array>
#include <iosfwd>
#include <string>
#include <vector>

namespace phi43 {

enum class Diagram : int { linear = 0, wick_square, tree, tree_linear, square_square, tree_square };

inline constexpr std::array<Diagram, 6> kAllDiagrams = {Diagram::linear,      Diagram::wick_square,
                                                        Diagram::tree,        Diagram::tree_linear,
                                                        Diagram::square_square, Diagram::tree_square};

/// Labels "1", "2", "30", "31p", "22p", "32p".
std::string label(Diagram d);
Diagram diagram_from_label(const std::string& s);
/// Regularity |tau| of each diagram: -1/2, -1, 1/2, 0, 0, -1/2.
double regularity(Diagram d);

enum class CprimeVariant { plain, resonant };
std::string to_string(CprimeVariant v);
CprimeVariant cprime_variant_from_string(const std::string& s);

/// c_n = sum_{w in L} 1 / (2 <w>^2).
double renorm_c(const FrequencyLattice& lattice);

/// plain: (1/4) sum_{w1, w2 in L} [<w1>^2 <w2>^2 (<w1>^2 + <w2>^2 + <w1+w2>^2)]^{-1}.
/// resonant: the same sum restricted to w1 + w2 in L, times the resonant weight
/// at (w1+w2, -(w1+w2)), which is identically 1. This is the stationary value of
/// E[I(2) resonant 2](t, 0) / 2 for the truncated construction.
double renorm_cprime(const FrequencyLattice& lattice, CprimeVariant variant);

struct RenormConstants {
  double c = 0.0;
  double cprime_plain = 0.0;
  double cprime_resonant = 0.0;
  double cprime(CprimeVariant v) const { return v == CprimeVariant::plain ? cprime_plain : cprime_resonant; }
};

/// Memoised per lattice description.
RenormConstants renorm_constants(const FrequencyLattice& lattice);

/// Exponential integrator with zero-order hold:
/// J(t + dt) = e^{-dt A} J(t) + f(t) (1 - e^{-dt A}) / A, A = <w>^2.
class HeatIntegrator {
 public:
  HeatIntegrator(LatticePtr lattice, double dt);
  void step(const SpectralField& forcing);
  const SpectralField& state() const { return state_; }
  void reset();

 private:
  SpectralField state_;
  Eigen::ArrayXd decay_;
  Eigen::ArrayXd gain_;
};

/// Heat integration of a stored trajectory, started from zero at its first
/// node; nodes before burn_in are dropped. burn_in must be grid aligned.
FieldTrajectory heat_integrate(const FieldTrajectory& f, double burn_in, std::vector<std::string>* warnings = nullptr,
                               double minimum_burn_in = 14.0);

struct Provenance {
  std::uint64_t seed = 0;
  std::uint32_t replica = 0;
  double dt = 0.0;
  double burn_in = 0.0;
  int refinement = 0;
  CprimeVariant variant = CprimeVariant::resonant;
  std::vector<std::string> warnings;
};

struct DiagramOptions {
  double dt = 1.0 / 64.0;
  double burn_in = 14.0;
  double minimum_burn_in = 14.0;
  std::size_t report_nodes = 1;
  int refinement = 0;
  CprimeVariant variant = CprimeVariant::resonant;
  std::array<bool, 6> wanted{true, true, true, true, true, true};
  /// Keep the linear path over the burn-in as well, for re-derivation.
  bool keep_linear_path = false;
};

struct DiagramSet {
  LatticePtr lattice;
  TimeGrid grid;  // reporting window
  std::array<FieldTrajectory, 6> trajectories;
  RenormConstants constants;
  Provenance provenance;
  FieldTrajectory linear_path;  // full path when requested

  const FieldTrajectory& operator[](Diagram d) const { return trajectories[static_cast<std::size_t>(d)]; }
  bool has(Diagram d) const { return !(*this)[d].fields.empty(); }
};

/// All requested diagrams from one seeded linear path. The reporting window
/// starts burn_in after the start of the path.
DiagramSet build_diagrams(LatticePtr lattice, const DiagramOptions& options, const CounterRng& rng,
                          std::uint32_t replica);

/// The same construction driven by a stored linear path covering burn-in and window.
DiagramSet build_diagrams_from_linear(const FieldTrajectory& linear, const DiagramOptions& options);

/// tau(t) - tau(s) for reporting-window times s, t; off-grid times throw.
SpectralField time_increment(const DiagramSet& set, Diagram d, double s, double t);

/// Structured-text dump (JSON) with a format version.
void write_diagram_set(std::ostream& os, const DiagramSet& set);
DiagramSet read_diagram_set(std::istream& is);
inline constexpr int kDiagramFormatVersion = 1;

}  // namespace phi43
