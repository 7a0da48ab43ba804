#pragma once

#include "phi43/lattice.hpp"

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace phi43 {

/// Invalid configuration or arguments; maps to exit code 2.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ExperimentConfig {
  int dim = 3;
  int cutoff = 8;
  BallNorm norm = BallNorm::euclidean;
  double dt = 1.0 / 64.0;
  double burn_in = 14.0;
  double min_burn_in = 14.0;
  int refinement = 0;
  std::size_t replicas = 10000;
  std::uint64_t seed = 20240601;
  std::vector<std::string> diagrams{"1"};
  std::string variant = "resonant";
  std::size_t report_nodes = 1;
  // frequency rows: radius window, or an explicit list "x,y,z;x,y,z"
  double probe_min = 0.0;
  double probe_max = 16.0;
  std::string probes;
  double fit_min = 4.0;
  double fit_max = 16.0;
  std::vector<int> lags{0};  // in time steps
  double lambda = 0.5;
  std::vector<int> cutoffs{0, 1, 4, 8, 16, 32, 64};
  double confidence = 0.95;
  double family_alpha = 0.0027;
  std::size_t batches = 20;
  double besov_p = 8.0;
  double beta = std::numeric_limits<double>::quiet_NaN();  // nan: regularity - d/p - margin
  std::vector<double> contrast_betas;  // evaluated without the exponent precondition
  double margin = 0.1;
  int oversample = 2;
  std::string check;  // lemmas: conv | resonant-conv | bernstein | partition; chaos: nelson | hypercontractivity
  std::vector<int> chaos_orders{1, 2, 3};
  std::vector<double> moment_orders{4.0, 6.0};
  std::string hyper_cases = "1:0.34657359027997264:2;2:0.5:2;3:0.5:2;1:0.5:4;2:0.25:3";
  std::size_t samples = 100000;
  int resamples = 400;
  int threads = 1;
  std::string format = "csv";
  std::string out = ".";
};

/// Flat "key = value" text; '#' starts a comment. Unknown keys are rejected.
ExperimentConfig parse_config(const std::string& text, ExperimentConfig base = {});
ExperimentConfig load_config(const std::string& path, ExperimentConfig base = {});
/// Canonical text: every key in a fixed order, doubles printed round-trip exact.
std::string to_text(const ExperimentConfig& c);
/// Set one key from its text form.
void set_key(ExperimentConfig& c, const std::string& key, const std::string& value);
/// Checks value ranges; throws ConfigError.
void validate(const ExperimentConfig& c);
/// FNV-1a of the canonical text, as 16 hex digits. Output location and thread
/// count are excluded so that they do not change results.
std::string config_hash(const ExperimentConfig& c);

std::vector<Frequency> parse_frequency_list(const std::string& s, int dim);

}  // namespace phi43
