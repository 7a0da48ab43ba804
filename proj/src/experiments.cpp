#include "phi43/experiments.hpp"

#include "phi43/besov.hpp"
#include "phi43/contraction.hpp"
#include "phi43/oracle.hpp"
#include "phi43/stats.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>

namespace phi43 {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kOracleBudget = 5.0e8;

LatticePtr lattice_of(const ExperimentConfig& c, int cutoff) { return make_lattice(c.dim, cutoff, c.norm); }

std::vector<Diagram> diagrams_of(const ExperimentConfig& c) {
  std::vector<Diagram> out;
  try {
    for (const auto& s : c.diagrams) out.push_back(diagram_from_label(s));
  } catch (const std::exception& e) {
    throw ConfigError(e.what());
  }
  if (out.empty()) throw ConfigError("no diagrams selected");
  return out;
}

DiagramOptions options_of(const ExperimentConfig& c, const std::vector<Diagram>& ds, std::size_t nodes) {
  DiagramOptions o;
  o.dt = c.dt;
  o.burn_in = c.burn_in;
  o.minimum_burn_in = c.min_burn_in;
  o.report_nodes = std::max(nodes, c.report_nodes);
  o.refinement = c.refinement;
  o.variant = cprime_variant_from_string(c.variant);
  o.wanted.fill(false);
  for (auto d : ds) o.wanted[static_cast<std::size_t>(d)] = true;
  return o;
}

std::string freq_text(const Frequency& w, int dim) {
  std::string s;
  for (int i = 0; i < dim; ++i) {
    if (i) s += ' ';
    s += std::to_string(w[i]);
  }
  return s;
}

std::vector<Orbit> probe_orbits(const ExperimentConfig& c, const FrequencyLattice& L) {
  auto orbits = frequency_orbits(L, c.probe_min, c.probe_max, parse_frequency_list(c.probes, c.dim));
  if (orbits.empty()) throw ConfigError("probe set selects no lattice frequency");
  return orbits;
}

std::size_t max_lag(const std::vector<int>& lags) {
  int m = 0;
  for (int l : lags) m = std::max(m, l);
  return static_cast<std::size_t>(m);
}

double exponent_target(Diagram d, int dim) { return -dim - 2.0 * regularity(d); }

Report new_report(const std::string& command, const std::string& claim, const ExperimentConfig& c) {
  Report r;
  r.command = command;
  r.claim = claim;
  r.config_hash = config_hash(c);
  return r;
}

void add_warnings(Report& r, const std::vector<std::string>& w) {
  for (const auto& s : w)
    if (std::find(r.warnings.begin(), r.warnings.end(), s) == r.warnings.end()) r.warnings.push_back(s);
}

}  // namespace

bool diagram_oracle(Diagram d, const LatticePtr& lattice, const std::vector<Orbit>& orbits, std::optional<double> dt,
                    double cprime, std::vector<double>& values, std::string* why) {
  const auto& L = *lattice;
  values.assign(orbits.size(), kNaN);
  switch (d) {
    case Diagram::linear:
      for (std::size_t i = 0; i < orbits.size(); ++i) values[i] = moment_linear(L[orbits[i].members[0]], 0.0);
      return true;
    case Diagram::wick_square:
      for (std::size_t i = 0; i < orbits.size(); ++i) values[i] = moment_wick_square(L, L[orbits[i].members[0]]);
      return true;
    case Diagram::tree: {
      const double n = static_cast<double>(L.size());
      if (n * n * static_cast<double>(orbits.size()) <= kOracleBudget) {
        for (std::size_t i = 0; i < orbits.size(); ++i) values[i] = moment_tree(L, L[orbits[i].members[0]], dt);
      } else {
        std::vector<std::size_t> probes;
        for (const auto& o : orbits) probes.push_back(o.members[0]);
        values = moment_tree_fft(lattice, probes, dt);
      }
      return true;
    }
    default: break;
  }
  const auto comps = chaos_components(d, cprime);
  double size = 0.0;
  for (const auto& [k, terms] : comps)
    for (const auto& a : terms)
      for (const auto& b : terms)
        for (const auto& g : pair_graphs(a, b)) size += enumeration_size(g, L);
  size *= static_cast<double>(orbits.size());
  if (size > kOracleBudget) {
    if (why) *why = "contraction oracle skipped: about " + num(size) + " tuples";
    return false;
  }
  for (std::size_t i = 0; i < orbits.size(); ++i) {
    double total = 0.0;
    for (const auto& [k, terms] : comps) total += second_moment(terms, L, L[orbits[i].members[0]], dt);
    values[i] = total;
  }
  return true;
}

// ---------------------------------------------------------------- constants

Report cmd_constants(const ExperimentConfig& c) {
  auto r = new_report("constants", "constants.divergence_rates", c);
  r.columns = {"n", "lattice_size", "c", "c_over_n", "cprime_plain", "cprime_resonant", "plain_minus_resonant",
               "S_over_log_n", "S_2n_minus_S_n"};
  auto cutoffs = c.cutoffs;
  std::sort(cutoffs.begin(), cutoffs.end());
  cutoffs.erase(std::unique(cutoffs.begin(), cutoffs.end()), cutoffs.end());
  std::map<int, RenormConstants> k;
  for (int n : cutoffs) k[n] = renorm_constants(*lattice_of(c, n));
  std::map<int, double> doubling;
  for (int n : cutoffs)
    if (k.count(2 * n) && n > 0) doubling[n] = k[2 * n].cprime_resonant - k[n].cprime_resonant;
  for (int n : cutoffs) {
    const auto& v = k[n];
    r.rows.push_back({std::to_string(n), std::to_string(lattice_of(c, n)->size()), num(v.c),
                      n > 0 ? num(v.c / n) : "nan", num(v.cprime_plain), num(v.cprime_resonant),
                      num(v.cprime_plain - v.cprime_resonant), n > 1 ? num(v.cprime_resonant / std::log(n)) : "nan",
                      doubling.count(n) ? num(doubling[n]) : "nan"});
  }

  // c_n / n over n >= 8
  std::vector<double> ratio;
  for (int n : cutoffs)
    if (n >= 8) ratio.push_back(k[n].c / n);
  if (ratio.size() >= 2) {
    const double lo = *std::min_element(ratio.begin(), ratio.end());
    const double hi = *std::max_element(ratio.begin(), ratio.end());
    double mean = 0.0;
    for (double v : ratio) mean += v;
    mean /= static_cast<double>(ratio.size());
    const double spread = (hi - lo) / mean;
    r.checks.push_back({"constants.c_over_n.spread", spread <= 0.15, spread, 0.15,
                        "relative spread of c_n/n over n >= 8"});
    const double target = 1.0 / (2.0 * std::numbers::pi);
    double dev = 0.0;
    for (double v : ratio) dev = std::max(dev, std::abs(v / target - 1.0));
    r.checks.push_back({"constants.c_over_n.continuum", dev <= 0.2, dev, 0.2,
                        "largest relative deviation of c_n/n from 1/(2 pi)"});
  }
  // successive doubling differences S(2n) - S(n), n >= 4
  std::vector<double> diffs;
  for (const auto& [n, dv] : doubling)
    if (n >= 4) diffs.push_back(dv);
  if (diffs.size() >= 2) {
    double worst = 0.0;
    for (std::size_t i = 1; i < diffs.size(); ++i)
      worst = std::max(worst, std::abs(diffs[i] - diffs[i - 1]) / std::abs(diffs[i - 1]));
    r.checks.push_back({"constants.cprime.log_rate", worst <= 0.25, worst, 0.25,
                        "largest relative change of successive S(2n)-S(n)"});
  }
  // plain - resonant: increments shrink and the last doubling changes little
  std::vector<std::pair<int, double>> gap;
  for (int n : cutoffs)
    if (n >= 4) gap.emplace_back(n, k[n].cprime_plain - k[n].cprime_resonant);
  if (gap.size() >= 3) {
    bool shrinking = true;
    for (std::size_t i = 2; i < gap.size(); ++i)
      shrinking = shrinking && std::abs(gap[i].second - gap[i - 1].second) <= std::abs(gap[i - 1].second - gap[i - 2].second);
    const double last_change = std::abs(gap.back().second - gap[gap.size() - 2].second) / std::abs(gap.back().second);
    r.checks.push_back({"constants.variant_gap.bounded", shrinking && last_change <= 0.25, last_change, 0.25,
                        std::string("plain-resonant increments ") + (shrinking ? "shrinking" : "not shrinking") +
                            "; measured: relative change over the last doubling"});
  }
  return r;
}

// ---------------------------------------------------------------- moments

Report cmd_moments(const ExperimentConfig& c) {
  auto r = new_report("moments", "moments.second_moment_decay", c);
  const auto L = lattice_of(c, c.cutoff);
  const auto ds = diagrams_of(c);
  const auto orbits = probe_orbits(c, *L);
  const auto lags = c.lags.empty() ? std::vector<int>{0} : c.lags;
  const auto opts = options_of(c, ds, max_lag(lags) + 1);
  const CounterRng rng(c.seed);
  const std::size_t per_d = lags.size() * orbits.size();
  std::vector<std::vector<double>> samples(c.replicas);
  std::vector<std::string> warnings;
  parallel_for(c.replicas, c.threads, [&](std::size_t rep) {
    const auto set = build_diagrams(L, opts, rng, static_cast<std::uint32_t>(rep));
    if (rep == 0) warnings = set.provenance.warnings;
    auto& out = samples[rep];
    out.assign(ds.size() * per_d, 0.0);
    for (std::size_t di = 0; di < ds.size(); ++di) {
      const auto& f = set[ds[di]].fields;
      for (std::size_t li = 0; li < lags.size(); ++li) {
        const auto lag = static_cast<std::size_t>(lags[li]);
        const std::size_t origins = f.size() - lag;
        for (std::size_t oi = 0; oi < orbits.size(); ++oi) {
          double acc = 0.0;
          for (std::size_t i = 0; i < origins; ++i)
            for (auto m : orbits[oi].members) acc += (f[i][m] * std::conj(f[i + lag][m])).real();
          out[di * per_d + li * orbits.size() + oi] =
              acc / static_cast<double>(origins * orbits[oi].members.size());
        }
      }
    }
  });
  add_warnings(r, warnings);
  const auto consts = renorm_constants(*L);
  const double cprime = consts.cprime(cprime_variant_from_string(c.variant));

  r.columns = {"diagram", "lag", "frequency", "radius", "bracket", "orbit_size", "moment", "se", "oracle",
               "oracle_continuous", "z", "in_fit"};
  for (std::size_t di = 0; di < ds.size(); ++di) {
    const auto d = ds[di];
    std::vector<double> zoh, cont;
    std::string why;
    const bool have = diagram_oracle(d, L, orbits, c.dt, cprime, zoh, &why);
    if (have) diagram_oracle(d, L, orbits, std::nullopt, cprime, cont);
    if (!have && !why.empty()) add_warnings(r, {label(d) + ": " + why});
    std::vector<double> zs, fx, fy;
    for (std::size_t li = 0; li < lags.size(); ++li) {
      for (std::size_t oi = 0; oi < orbits.size(); ++oi) {
        const auto& o = orbits[oi];
        std::vector<double> col(c.replicas);
        for (std::size_t rep = 0; rep < c.replicas; ++rep) col[rep] = samples[rep][di * per_d + li * orbits.size() + oi];
        const auto e = batch_means(col, c.batches);
        const auto& w = (*L)[o.members[0]];
        double oz = kNaN, oc = kNaN;
        if (lags[li] == 0 && have) {
          oz = zoh[oi];
          oc = cont[oi];
        } else if (d == Diagram::linear) {
          oz = oc = moment_linear(w, lags[li] * c.dt);
        }
        double z = kNaN;
        if (!std::isnan(oz) && e.se > 0.0) {
          z = (e.mean - oz) / e.se;
          zs.push_back(z);
        }
        const bool in_fit = lags[li] == 0 && o.radius >= c.fit_min - 1e-9 && o.radius <= c.fit_max + 1e-9 && e.mean > 0;
        if (in_fit) {
          fx.push_back(std::log(bracket(w)));
          fy.push_back(std::log(e.mean));
        }
        r.rows.push_back({label(d), std::to_string(lags[li]), freq_text(o.representative, c.dim), num(o.radius),
                          num(bracket(w)), std::to_string(o.members.size()), num(e.mean), num(e.se), num(oz), num(oc),
                          num(z), in_fit ? "1" : "0"});
      }
    }
    if (!zs.empty()) {
      const double thr = bonferroni_z(zs.size(), c.family_alpha);
      double worst = 0.0;
      for (double z : zs) worst = std::max(worst, std::abs(z));
      r.checks.push_back({"moments." + label(d) + ".oracle", worst <= thr, worst, thr,
                          "max |z| against the exact discrete-time oracle over " + std::to_string(zs.size()) + " rows"});
    }
    if (c.fit_max <= L->max_length() + 1e-9 && fx.size() >= 3) {
      const auto fit = fit_line(fx, fy, {}, c.confidence);
      const double target = exponent_target(d, c.dim);
      r.checks.push_back({"moments." + label(d) + ".slope", std::abs(fit.slope - target) <= 0.4, fit.slope, target,
                          "log-moment slope over " + num(c.fit_min) + " <= |w| <= " + num(c.fit_max) + ", CI [" +
                              num(fit.lower) + ", " + num(fit.upper) + "], tolerance 0.4"});
    }
  }
  return r;
}

// ---------------------------------------------------------------- time regularity

Report cmd_time_regularity(const ExperimentConfig& c) {
  auto r = new_report("time-regularity", "time_regularity.increment_bound", c);
  const auto L = lattice_of(c, c.cutoff);
  const auto ds = diagrams_of(c);
  const auto orbits = probe_orbits(c, *L);
  const auto& lags = c.lags;
  if (lags.empty()) throw ConfigError("time-regularity needs lags");
  const auto opts = options_of(c, ds, max_lag(lags) + 1);
  const CounterRng rng(c.seed);
  const std::size_t per_d = lags.size() * orbits.size();
  std::vector<std::vector<double>> samples(c.replicas);
  std::vector<std::string> warnings;
  parallel_for(c.replicas, c.threads, [&](std::size_t rep) {
    const auto set = build_diagrams(L, opts, rng, static_cast<std::uint32_t>(rep));
    if (rep == 0) warnings = set.provenance.warnings;
    auto& out = samples[rep];
    out.assign(ds.size() * per_d, 0.0);
    for (std::size_t di = 0; di < ds.size(); ++di) {
      const auto& f = set[ds[di]].fields;
      for (std::size_t li = 0; li < lags.size(); ++li) {
        const auto lag = static_cast<std::size_t>(lags[li]);
        const std::size_t origins = f.size() - lag;
        for (std::size_t i = 0; i < origins; ++i) {
          const auto inc = time_increment(set, ds[di], set.grid.time(i), set.grid.time(i + lag));
          for (std::size_t oi = 0; oi < orbits.size(); ++oi) {
            double acc = 0.0;
            for (auto m : orbits[oi].members) acc += std::norm(inc[m]);
            out[di * per_d + li * orbits.size() + oi] += acc / static_cast<double>(origins * orbits[oi].members.size());
          }
        }
      }
    }
  });
  add_warnings(r, warnings);
  r.columns = {"diagram", "lag", "frequency", "bracket", "increment_moment", "se", "normalized", "oracle", "z"};
  for (std::size_t di = 0; di < ds.size(); ++di) {
    const auto d = ds[di];
    const double alpha = regularity(d);
    std::vector<double> zs, normalized;
    bool zero_lag_ok = true;
    for (std::size_t li = 0; li < lags.size(); ++li)
      for (std::size_t oi = 0; oi < orbits.size(); ++oi) {
        std::vector<double> col(c.replicas);
        for (std::size_t rep = 0; rep < c.replicas; ++rep) col[rep] = samples[rep][di * per_d + li * orbits.size() + oi];
        const auto e = batch_means(col, c.batches);
        const auto& w = (*L)[orbits[oi].members[0]];
        const double h = lags[li] * c.dt;
        double norm_v = kNaN, oracle = kNaN, z = kNaN;
        if (lags[li] == 0) {
          zero_lag_ok = zero_lag_ok && e.mean == 0.0;
        } else {
          norm_v = e.mean / (std::pow(h, c.lambda) * std::pow(bracket(w), -c.dim - 2.0 * alpha + 2.0 * c.lambda));
          normalized.push_back(norm_v);
          if (d == Diagram::linear) {
            const double a = bracket_sq(w);
            oracle = -std::expm1(-h * a) / a;
            if (e.se > 0) {
              z = (e.mean - oracle) / e.se;
              zs.push_back(z);
            }
          }
        }
        r.rows.push_back({label(d), std::to_string(lags[li]), freq_text(orbits[oi].representative, c.dim),
                          num(bracket(w)), num(e.mean), num(e.se), num(norm_v), num(oracle), num(z)});
      }
    r.checks.push_back({"time." + label(d) + ".zero_lag", zero_lag_ok, 0.0, 0.0, "increments at lag 0 vanish"});
    if (!zs.empty()) {
      const double thr = bonferroni_z(zs.size(), c.family_alpha);
      double worst = 0.0;
      for (double z : zs) worst = std::max(worst, std::abs(z));
      r.checks.push_back({"time." + label(d) + ".oracle", worst <= thr, worst, thr,
                          "max |z| against the exact increment moment over " + std::to_string(zs.size()) + " cells"});
    }
    if (normalized.size() >= 2) {
      const double lo = *std::min_element(normalized.begin(), normalized.end());
      const double hi = *std::max_element(normalized.begin(), normalized.end());
      const double spread = lo > 0 ? hi / lo : std::numeric_limits<double>::infinity();
      r.checks.push_back({"time." + label(d) + ".bounded", spread <= 20.0, spread, 20.0,
                          "max/min of the normalized increment table, lambda = " + num(c.lambda)});
    }
  }
  return r;
}

// ---------------------------------------------------------------- besov

Report cmd_besov(const ExperimentConfig& c) {
  auto r = new_report("besov", "besov.moment_stability", c);
  const auto ds = diagrams_of(c);
  std::vector<int> cutoffs;
  for (int n : c.cutoffs)
    if (n >= 1) cutoffs.push_back(n);
  std::sort(cutoffs.begin(), cutoffs.end());
  if (cutoffs.empty()) throw ConfigError("besov needs positive cutoffs");
  const double p = c.besov_p;
  r.columns = {"diagram", "beta", "contrast", "n", "mean_norm_p", "se", "norm_scale"};
  const CounterRng rng(c.seed);
  for (auto d : ds) {
    const double bound = regularity(d) - c.dim / p;
    const double beta = std::isnan(c.beta) ? bound - c.margin : c.beta;
    if (!(beta < bound))
      throw ConfigError("beta = " + num(beta) + " violates beta < regularity - d/p = " + num(bound) + " for " + label(d));
    std::vector<std::pair<double, bool>> runs{{beta, false}};
    for (double b : c.contrast_betas) runs.emplace_back(b, true);
    // one set of replicas per cutoff; every beta is evaluated on the same fields
    std::vector<std::vector<std::vector<double>>> values(cutoffs.size());
    for (std::size_t ni = 0; ni < cutoffs.size(); ++ni) {
      const auto L = lattice_of(c, cutoffs[ni]);
      const auto table = make_block_table(L);
      const auto opts = options_of(c, {d}, 1);
      auto& v = values[ni];
      v.assign(c.replicas, std::vector<double>(runs.size(), 0.0));
      std::vector<std::string> warnings;
      parallel_for(c.replicas, c.threads, [&](std::size_t rep) {
        const auto set = build_diagrams(L, opts, rng, static_cast<std::uint32_t>(rep));
        if (rep == 0) warnings = set.provenance.warnings;
        const auto& f = set[d].fields.front();
        const auto terms = besov_terms(f, 0.0, c.oversample, *table);
        for (std::size_t b = 0; b < runs.size(); ++b) {
          double sup = 0.0;
          for (std::size_t k = 0; k < terms.size(); ++k)
            sup = std::max(sup, std::pow(2.0, runs[b].first * (static_cast<int>(k) - 1)) * terms[k]);
          v[rep][b] = std::pow(sup, p);
        }
      });
      add_warnings(r, warnings);
    }
    for (std::size_t b = 0; b < runs.size(); ++b) {
      std::vector<double> scale;
      for (std::size_t ni = 0; ni < cutoffs.size(); ++ni) {
        std::vector<double> col;
        for (const auto& row : values[ni]) col.push_back(row[b]);
        const auto e = batch_means(col, c.batches);
        scale.push_back(std::pow(e.mean, 1.0 / p));
        r.rows.push_back({label(d), num(runs[b].first), runs[b].second ? "1" : "0", std::to_string(cutoffs[ni]),
                          num(e.mean), num(e.se), num(scale.back())});
      }
      if (scale.size() < 2) continue;
      if (!runs[b].second) {
        const double hi = *std::max_element(scale.begin(), scale.end());
        const double lo = *std::min_element(scale.begin(), scale.end());
        r.checks.push_back({"besov." + label(d) + ".stable", hi / lo <= 1.25, hi / lo, 1.25,
                            "max/min over cutoffs of (E|tau|^p)^(1/p), beta = " + num(runs[b].first)});
      } else {
        const double growth = scale.back() / scale.front();
        r.checks.push_back({"besov." + label(d) + ".contrast_" + num(runs[b].first), growth >= 1.25, growth, 1.25,
                            "growth of (E|tau|^p)^(1/p) from the smallest to the largest cutoff above the threshold"});
      }
    }
  }
  return r;
}

// ---------------------------------------------------------------- lemmas

namespace {

std::vector<int> axis_range(const ExperimentConfig& c, const FrequencyLattice& L) {
  std::vector<int> ks;
  for (int k = static_cast<int>(std::ceil(c.probe_min)); k <= static_cast<int>(std::floor(c.probe_max)); ++k) {
    Frequency w = Frequency::Zero();
    w[0] = k;
    if (L.contains(w)) ks.push_back(k);
  }
  if (ks.size() < 2) throw ConfigError("probe window selects fewer than two axis frequencies");
  return ks;
}

void lemma_conv(Report& r, const ExperimentConfig& c) {
  const auto L = lattice_of(c, c.cutoff);
  r.columns = {"k", "bracket", "sum_2_2", "ratio"};
  std::vector<double> ratio;
  for (int k : axis_range(c, *L)) {
    const Frequency w(k, 0, 0);
    const double s = convolution_sum(*L, w, 2.0, 2.0, false);
    ratio.push_back(s * bracket(w));
    r.rows.push_back({std::to_string(k), num(bracket(w)), num(s), num(ratio.back())});
  }
  const double spread = *std::max_element(ratio.begin(), ratio.end()) / *std::min_element(ratio.begin(), ratio.end());
  r.checks.push_back({"lemmas.conv.bounded", spread <= 10.0, spread, 10.0,
                      "max/min of sum <w1>^-2 <w2>^-2 times <w>, unrestricted"});
}

void lemma_resonant_conv(Report& r, const ExperimentConfig& c) {
  const auto L = lattice_of(c, c.cutoff);
  r.columns = {"k", "bracket", "resonant_4_2", "resonant_ratio", "plain_4_2", "plain_ratio"};
  std::vector<double> res, plain;
  std::vector<int> ks = axis_range(c, *L);
  for (int k : ks) {
    const Frequency w(k, 0, 0);
    const double a = convolution_sum(*L, w, 4.0, 2.0, true);
    const double b = convolution_sum(*L, w, 4.0, 2.0, false);
    const double s3 = std::pow(bracket(w), 3.0);
    res.push_back(a * s3);
    plain.push_back(b * s3);
    r.rows.push_back({std::to_string(k), num(bracket(w)), num(a), num(res.back()), num(b), num(plain.back())});
  }
  // upper bound only: the restricted sum drops below the bound once the low blocks are excluded
  const double spread = *std::max_element(res.begin(), res.end()) / res.front();
  r.checks.push_back({"lemmas.resonant_conv.bounded", spread <= 10.0, spread, 10.0,
                      "max over the window of the resonant (4,2) sum times <w>^3, relative to the first probe; "
                      "max/min " + num(spread * res.front() / *std::min_element(res.begin(), res.end()))});
  std::size_t start = 0;
  while (start < ks.size() && ks[start] < 2) ++start;
  bool monotone = true;
  for (std::size_t i = start + 1; i < ks.size(); ++i) monotone = monotone && plain[i] > plain[i - 1];
  const double growth = start < ks.size() ? plain.back() / plain[start] : 0.0;
  r.checks.push_back({"lemmas.resonant_conv.plain_growth", monotone && growth >= 2.0, growth, 2.0,
                      std::string("unrestricted (4,2) sum times <w>^3 from |w| = 2 to the last probe, ") +
                          (monotone ? "monotone" : "not monotone")});
}

void lemma_bernstein(Report& r, const ExperimentConfig& c) {
  const auto L = lattice_of(c, c.cutoff);
  const auto table = make_block_table(L);
  const CounterRng rng(c.seed);
  const Eigen::ArrayXd variance = L->weights_sq().pow(-1.5);
  const int kmax = std::min(table->last(), static_cast<int>(std::floor(std::log2(std::max(1, c.cutoff)))));
  const std::size_t fields = std::min<std::size_t>(c.replicas, 50);
  r.columns = {"p", "block", "mean_constant", "max_constant"};
  for (double p : {2.0, 4.0}) {
    std::vector<std::vector<double>> consts(fields);
    parallel_for(fields, c.threads, [&](std::size_t i) {
      const auto f = sample_gaussian_field(L, variance, rng, static_cast<std::uint32_t>(i), 0);
      for (const auto& row : bernstein_constants(f, p, c.oversample, *table)) consts[i].push_back(row.constant);
    });
    std::vector<double> ks, logc;
    for (int k = 0; k <= kmax; ++k) {
      double mean = 0.0, mx = 0.0;
      for (const auto& v : consts) {
        mean += v[static_cast<std::size_t>(k + 1)];
        mx = std::max(mx, v[static_cast<std::size_t>(k + 1)]);
      }
      mean /= static_cast<double>(fields);
      ks.push_back(k);
      logc.push_back(std::log2(mean));
      r.rows.push_back({num(p), std::to_string(k), num(mean), num(mx)});
    }
    if (ks.size() >= 3) {
      const auto fit = fit_line(ks, logc, {}, c.confidence);
      r.checks.push_back({"lemmas.bernstein.p" + num(p), fit.slope <= 0.05, fit.slope, 0.05,
                          "slope of log2 C over blocks 0.." + std::to_string(kmax) + " (no growth)"});
    } else {
      r.checks.push_back({"lemmas.bernstein.p" + num(p), false, kNaN, 0.05, "fewer than three blocks; raise cutoff"});
    }
  }
}

void lemma_partition(Report& r, const ExperimentConfig& c) {
  const DyadicPartition part;
  const int K = DyadicPartition::last_block(std::max(1.0, static_cast<double>(c.cutoff)));
  const double rmax = std::ldexp(1.0, K + 2);
  double residual = 0.0, range_defect = 0.0, support_defect = 0.0, overlap = 0.0;
  const int samples = 10000;
  for (int i = 0; i <= samples; ++i) {
    const double z = rmax * i / samples;
    double sum = part.low(z);
    for (int k = 0; k <= K + 3; ++k) sum += part.block(k, z);
    residual = std::max(residual, std::abs(sum - 1.0));
    for (int k = -1; k <= K + 3; ++k) {
      const double v = part.block(k, z);
      range_defect = std::max(range_defect, std::max(-v, v - 1.0));
      for (int l = k + 2; l <= K + 3; ++l) overlap = std::max(overlap, std::abs(v * part.block(l, z)));
    }
    if (z >= 4.0 / 3.0) support_defect = std::max(support_defect, part.low(z));
    if (z <= 0.75 || z >= 8.0 / 3.0) support_defect = std::max(support_defect, part.annulus(z));
  }
  r.checks.push_back({"lemmas.partition.unity", residual <= 1e-12, residual, 1e-12,
                      "partition-of-unity residual on 10^4 radii up to 2^(K+2)"});
  r.checks.push_back({"lemmas.partition.range", range_defect <= 0.0, range_defect, 0.0, "values inside [0, 1]"});
  r.checks.push_back({"lemmas.partition.support", support_defect == 0.0, support_defect, 0.0, "support bounds"});
  r.checks.push_back({"lemmas.partition.overlap", overlap == 0.0, overlap, 0.0, "chi_k chi_l = 0 for |k - l| >= 2"});

  // Bony exactness on random pairs
  const auto L = lattice_of(c, c.cutoff);
  const Paraproducts para(L);
  const CounterRng rng(c.seed);
  const Eigen::ArrayXd variance = L->weights_sq().inverse();
  const std::size_t pairs = std::min<std::size_t>(c.replicas, 100);
  std::vector<double> defect(pairs, 0.0);
  parallel_for(pairs, c.threads, [&](std::size_t i) {
    const auto f = sample_gaussian_field(L, variance, rng, static_cast<std::uint32_t>(2 * i), 1);
    const auto g = sample_gaussian_field(L, variance, rng, static_cast<std::uint32_t>(2 * i + 1), 1);
    const auto sum = para.para_low(f, g) + para.resonant(f, g) + para.para_high(f, g);
    const auto full = para.product(f, g);
    defect[i] = (sum.coeffs() - full.coeffs()).cwiseAbs().maxCoeff() / std::max(1e-300, full.coeffs().cwiseAbs().maxCoeff());
  });
  const double bony = *std::max_element(defect.begin(), defect.end());
  r.checks.push_back({"lemmas.partition.bony", bony <= 1e-12, bony, 1e-12,
                      "relative defect of para_low + resonant + para_high vs product over " + std::to_string(pairs) +
                          " random pairs"});
  // resonant weight invariants on integer pairs
  double sym = 0.0, wrange = 0.0, vanish = 0.0;
  for (int a = 0; a <= 40; ++a)
    for (int b = 0; b <= 40; ++b) {
      const Frequency w1(a, 0, 0), w2(0, b, 1);
      const double v = resonant_weight(w1, w2, part);
      sym = std::max(sym, std::abs(v - resonant_weight(w2, w1, part)));
      wrange = std::max(wrange, std::max(-v, v - 1.0));
      const double r1 = a, r2 = std::sqrt(b * b + 1.0);
      const double ratio = r1 / r2;
      if ((r1 > 8.0 / 3.0 || r2 > 8.0 / 3.0) && (ratio < 9.0 / 64.0 || ratio > 64.0 / 9.0)) vanish = std::max(vanish, v);
    }
  r.checks.push_back({"lemmas.partition.resonant_weight", sym == 0.0 && wrange <= 0.0 && vanish == 0.0,
                      std::max({sym, wrange, vanish}), 0.0, "symmetry, range and vanishing of the resonant weight"});
  r.columns = {"quantity", "value"};
  r.rows = {{"unity_residual", num(residual)}, {"bony_defect", num(bony)}, {"last_block", std::to_string(K)}};
}

}  // namespace

Report cmd_lemmas(const ExperimentConfig& c) {
  auto r = new_report("lemmas", "lemmas." + c.check, c);
  if (c.check == "conv") lemma_conv(r, c);
  else if (c.check == "resonant-conv") lemma_resonant_conv(r, c);
  else if (c.check == "bernstein") lemma_bernstein(r, c);
  else if (c.check == "partition") lemma_partition(r, c);
  else throw ConfigError("unknown lemma check '" + c.check + "' (conv, resonant-conv, bernstein, partition)");
  return r;
}

// ---------------------------------------------------------------- chaos

namespace {

struct HyperCase {
  int chaos;
  double t;
  double p;
};

std::vector<HyperCase> parse_hyper_cases(const std::string& s) {
  std::vector<HyperCase> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ';')) {
    if (item.find_first_not_of(" \t") == std::string::npos) continue;
    HyperCase h{};
    char c1 = 0, c2 = 0;
    std::stringstream is(item);
    if (!(is >> h.chaos >> c1 >> h.t >> c2 >> h.p) || c1 != ':' || c2 != ':' || h.chaos < 0 || h.t <= 0 || h.p < 2)
      throw ConfigError("bad hyper_cases entry '" + item + "' (chaos:t:p, chaos >= 0, t > 0, p >= 2)");
    out.push_back(h);
  }
  return out;
}

}  // namespace

Report cmd_chaos(const ExperimentConfig& c) {
  auto r = new_report("chaos", "chaos." + c.check, c);
  const CounterRng rng(c.seed);
  if (c.check == "nelson") {
    r.columns = {"sampler", "chaos", "p", "ratio", "lower", "upper", "se", "bound"};
    std::uint64_t case_seed = c.seed;
    auto add = [&](const std::string& name, const std::vector<double>& x, int chaos, int p) {
      const auto rep = nelson_check(x, chaos, p, ++case_seed, c.resamples, c.confidence);
      r.rows.push_back({name, std::to_string(chaos), std::to_string(p), num(rep.ratio.value), num(rep.ratio.lower),
                        num(rep.ratio.upper), num(rep.ratio.se), num(rep.bound)});
      r.checks.push_back({"chaos.nelson." + name + ".p" + std::to_string(p), rep.margin, rep.ratio.upper, rep.bound,
                          "upper CI bound of the moment ratio below (p-1)^(n/2)"});
      return rep;
    };
    for (double pd : c.moment_orders) {
      const int p = static_cast<int>(pd);
      if (p != pd || (p != 4 && p != 6)) throw ConfigError("nelson moment orders must be 4 or 6");
    }
    for (int chaos : c.chaos_orders) {
      if (chaos < 1 || chaos > 6) throw ConfigError("chaos orders must lie in 1..6");
      const auto x = hermite_chaos_samples(chaos, c.samples, rng);
      for (double pd : c.moment_orders) {
        const int p = static_cast<int>(pd);
        const auto rep = add("H" + std::to_string(chaos), x, chaos, p);
        if (chaos == 1 && p == 4) {
          const double exact = std::pow(3.0, 0.25);
          const double z = (rep.ratio.value - exact) / rep.ratio.se;
          r.checks.push_back({"chaos.nelson.gaussian_value", std::abs(z) <= 3.0, std::abs(z), 3.0,
                              "|ratio - 3^(1/4)| / bootstrap se for a standard Gaussian"});
        }
      }
    }
    // constant plus Gaussian lies in chaos <= 1
    auto g = hermite_chaos_samples(1, c.samples, rng);
    for (auto& v : g) v += 1.0;
    for (double pd : c.moment_orders) add("one_plus_H1", g, 1, static_cast<int>(pd));
  } else if (c.check == "hypercontractivity") {
    r.columns = {"chaos", "t", "p", "q", "lhs", "rhs", "gap_lower", "gap_upper"};
    std::uint64_t case_seed = c.seed;
    for (const auto& h : parse_hyper_cases(c.hyper_cases)) {
      const auto x = h.chaos == 0 ? std::vector<double>(c.samples, 0.0) : hermite_chaos_samples(h.chaos, c.samples, rng);
      const auto rep = hypercontractivity_check(x, h.chaos, h.t, h.p, ++case_seed, c.resamples, c.confidence);
      r.rows.push_back({std::to_string(h.chaos), num(h.t), num(h.p), num(rep.q), num(rep.lhs.value), num(rep.rhs.value),
                        num(rep.gap.lower), num(rep.gap.upper)});
      const bool ok = h.chaos == 0 ? !rep.violated : rep.margin;
      r.checks.push_back({"chaos.hyper.c" + std::to_string(h.chaos) + ".t" + num(h.t) + ".p" + num(h.p), ok,
                          rep.gap.lower, 0.0, "lower CI bound of |X|_p - |T_t X|_q"});
    }
  } else {
    throw ConfigError("unknown chaos check '" + c.check + "' (nelson, hypercontractivity)");
  }
  return r;
}

// ---------------------------------------------------------------- dump

namespace {

// Truncated convolution a * b on `out_lattice`, computed by direct summation.
Eigen::VectorXcd direct_convolution(const FrequencyLattice& la, const Eigen::VectorXcd& a, const FrequencyLattice& lb,
                                    const Eigen::VectorXcd& b, const FrequencyLattice& out_lattice) {
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(out_lattice.size()));
  for (std::size_t i = 0; i < la.size(); ++i)
    for (std::size_t j = 0; j < lb.size(); ++j) {
      const auto k = out_lattice.find(la[i] + lb[j]);
      if (k >= 0) out[k] += a[static_cast<Eigen::Index>(i)] * b[static_cast<Eigen::Index>(j)];
    }
  return out;
}

double relative_defect(const Eigen::VectorXcd& x, const Eigen::VectorXcd& ref) {
  return (x - ref).cwiseAbs().maxCoeff() / std::max(1e-300, ref.cwiseAbs().maxCoeff());
}

}  // namespace

Report cmd_dump_diagrams(const ExperimentConfig& c) {
  auto r = new_report("dump-diagrams", "diagrams.construction", c);
  const auto L = lattice_of(c, c.cutoff);
  auto opts = options_of(c, {Diagram::linear, Diagram::wick_square, Diagram::tree, Diagram::tree_linear,
                             Diagram::square_square, Diagram::tree_square},
                         1);
  opts.keep_linear_path = true;
  const CounterRng rng(c.seed);
  const auto set = build_diagrams(L, opts, rng, 0);
  add_warnings(r, set.provenance.warnings);
  namespace fs = std::filesystem;
  fs::create_directories(c.out.empty() ? "." : c.out);
  const auto path = fs::path(c.out.empty() ? "." : c.out) / "diagrams.json";
  {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw ConfigError("cannot write " + path.string());
    write_diagram_set(f, set);
  }
  std::ifstream in(path, std::ios::binary);
  const auto back = read_diagram_set(in);
  double roundtrip = 0.0, rederive = 0.0, hermitian = 0.0;
  const auto again = build_diagrams_from_linear(set.linear_path, opts);
  r.columns = {"diagram", "nodes", "max_abs_coefficient", "hermitian_defect"};
  for (auto d : kAllDiagrams) {
    const auto& a = set[d].fields;
    double mx = 0.0, herm = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
      roundtrip = std::max(roundtrip, (a[i].coeffs() - back[d].fields[i].coeffs()).cwiseAbs().maxCoeff());
      rederive = std::max(rederive, (a[i].coeffs() - again[d].fields[i].coeffs()).cwiseAbs().maxCoeff());
      mx = std::max(mx, a[i].coeffs().cwiseAbs().maxCoeff());
      herm = std::max(herm, a[i].hermitian_defect());
    }
    hermitian = std::max(hermitian, herm / std::max(mx, 1e-300));
    r.rows.push_back({label(d), std::to_string(a.size()), num(mx), num(herm)});
  }
  r.checks.push_back({"dump.roundtrip", roundtrip == 0.0, roundtrip, 0.0, "reloaded coefficients equal the originals"});
  r.checks.push_back({"dump.rederive", rederive == 0.0, rederive, 0.0,
                      "diagrams rebuilt from the stored linear path equal the originals"});
  r.checks.push_back({"dump.hermitian", hermitian <= 1e-12, hermitian, 1e-12, "relative Hermitian defect"});

  // Wick identities against direct Fourier convolution
  const double lsz = static_cast<double>(L->size());
  if (lsz * lsz <= 2.5e7) {
    const auto L2 = make_lattice(L->dim(), 2 * L->cutoff(), L->norm());
    double w2 = 0.0, w3 = 0.0;
    const double cn = set.constants.c;
    for (std::size_t i = 0; i < set[Diagram::linear].fields.size(); ++i) {
      const auto& x = set[Diagram::linear].fields[i];
      Eigen::VectorXcd sq = direct_convolution(*L, x.coeffs(), *L, x.coeffs(), *L);
      sq[static_cast<Eigen::Index>(L->zero_index())] -= cn;
      w2 = std::max(w2, relative_defect(set[Diagram::wick_square].fields[i].coeffs(), sq));
      const Eigen::VectorXcd sq2 = direct_convolution(*L, x.coeffs(), *L, x.coeffs(), *L2);
      Eigen::VectorXcd cube = direct_convolution(*L2, sq2, *L, x.coeffs(), *L) - 3.0 * cn * x.coeffs();
      w3 = std::max(w3, relative_defect(wick_power(x, 3, cn).coeffs(), cube));
    }
    r.checks.push_back({"dump.wick_square", w2 <= 1e-10, w2, 1e-10,
                        "relative defect of the Wick square against direct convolution, all nodes"});
    r.checks.push_back({"dump.wick_cube", w3 <= 1e-10, w3, 1e-10,
                        "relative defect of the Wick cube against direct convolution, all nodes"});
  }
  return r;
}

}  // namespace phi43
