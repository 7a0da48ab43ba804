#pragma once

#include "phi43/config.hpp"
#include "phi43/diagrams.hpp"

#include <functional>
#include <string>
#include <vector>

namespace phi43 {

inline constexpr int kReportVersion = 1;

struct Check {
  std::string id;
  bool passed = false;
  double measured = 0.0;
  double threshold = 0.0;
  std::string detail;
};

struct Report {
  std::string command;
  std::string claim;
  std::string config_hash;
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
  std::vector<Check> checks;
  std::vector<std::string> warnings;

  bool passed() const;
  const Check* find(const std::string& id) const;
  /// Table with a leading comment line carrying version, command, claim and config hash.
  std::string csv() const;
  std::string checks_csv() const;
  std::string json() const;
};

/// Fixed-format number text used in every report.
std::string num(double v);

/// Frequencies grouped by the hyperoctahedral symmetry (signed permutations of
/// components), which leaves the law of every diagram invariant.
struct Orbit {
  Frequency representative;  // sorted nonincreasing absolute components
  double radius = 0.0;
  std::vector<std::size_t> members;
};

/// Orbits with radius in [rmin, rmax], or the orbits of an explicit list.
std::vector<Orbit> frequency_orbits(const FrequencyLattice& lattice, double rmin, double rmax,
                                    const std::vector<Frequency>& explicit_probes = {});

/// Runs body(r) for r = 0 .. count-1 on up to `threads` workers. Each r must
/// write only its own output slot; the caller reduces in index order.
void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& body);

Report cmd_constants(const ExperimentConfig& c);
Report cmd_moments(const ExperimentConfig& c);
Report cmd_time_regularity(const ExperimentConfig& c);
Report cmd_besov(const ExperimentConfig& c);
Report cmd_lemmas(const ExperimentConfig& c);
Report cmd_chaos(const ExperimentConfig& c);
/// Writes <out>/diagrams.json and checks reload and re-derivation from the stored linear path.
Report cmd_dump_diagrams(const ExperimentConfig& c);

/// Dispatch by subcommand name; throws ConfigError for an unknown name.
Report run_command(const std::string& name, const ExperimentConfig& c);

/// Writes <out>/<command>.csv and <out>/<command>_checks.csv, or <out>/<command>.json.
void write_report(const Report& r, const ExperimentConfig& c);

/// Exact second-moment oracle of a diagram at lag 0, zero-order-hold time
/// integration when dt is set. Returns false when no oracle is available or the
/// enumeration is infeasible.
bool diagram_oracle(Diagram d, const LatticePtr& lattice, const std::vector<Orbit>& orbits, std::optional<double> dt,
                    double cprime, std::vector<double>& values, std::string* why = nullptr);

}  // namespace phi43
