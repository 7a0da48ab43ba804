#include "phi43/config.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>

namespace phi43 {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  if (trim(s).empty()) return out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) out.push_back(trim(item));
  return out;
}

std::string fmt(double v) {
  char buf[32];
  auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, p);
}

template <class T>
T parse_number(const std::string& key, const std::string& v) {
  T out{};
  const auto s = trim(v);
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  if (ec != std::errc() || p != s.data() + s.size()) throw ConfigError("bad value for " + key + ": '" + v + "'");
  return out;
}

template <class T>
std::vector<T> parse_list(const std::string& key, const std::string& v) {
  std::vector<T> out;
  for (const auto& item : split(v, ',')) out.push_back(parse_number<T>(key, item));
  return out;
}

template <class T>
std::string join(const std::vector<T>& xs) {
  std::string s;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) s += ',';
    if constexpr (std::is_same_v<T, std::string>) s += xs[i];
    else if constexpr (std::is_floating_point_v<T>) s += fmt(xs[i]);
    else s += std::to_string(xs[i]);
  }
  return s;
}

struct Field {
  const char* key;
  std::function<std::string(const ExperimentConfig&)> get;
  std::function<void(ExperimentConfig&, const std::string&)> set;
};

#define NUM(name, T)                                                                       \
  Field {                                                                                  \
    #name, [](const ExperimentConfig& c) {                                                 \
      if constexpr (std::is_floating_point_v<T>) return fmt(c.name);                       \
      else return std::to_string(c.name);                                                  \
    },                                                                                     \
        [](ExperimentConfig& c, const std::string& v) { c.name = parse_number<T>(#name, v); } \
  }
#define STR(name) \
  Field { #name, [](const ExperimentConfig& c) { return c.name; }, [](ExperimentConfig& c, const std::string& v) { c.name = trim(v); } }
#define LIST(name, T)                                                   \
  Field {                                                               \
    #name, [](const ExperimentConfig& c) { return join(c.name); },      \
        [](ExperimentConfig& c, const std::string& v) { c.name = parse_list<T>(#name, v); } \
  }

const std::vector<Field>& fields() {
  static const std::vector<Field> f = {
      NUM(dim, int),
      NUM(cutoff, int),
      Field{"norm", [](const ExperimentConfig& c) { return to_string(c.norm); },
            [](ExperimentConfig& c, const std::string& v) {
              try {
                c.norm = ball_norm_from_string(trim(v));
              } catch (const std::exception& e) {
                throw ConfigError(e.what());
              }
            }},
      NUM(dt, double),
      NUM(burn_in, double),
      NUM(min_burn_in, double),
      NUM(refinement, int),
      NUM(replicas, std::size_t),
      NUM(seed, std::uint64_t),
      Field{"diagrams", [](const ExperimentConfig& c) { return join(c.diagrams); },
            [](ExperimentConfig& c, const std::string& v) { c.diagrams = split(v, ','); }},
      STR(variant),
      NUM(report_nodes, std::size_t),
      NUM(probe_min, double),
      NUM(probe_max, double),
      STR(probes),
      NUM(fit_min, double),
      NUM(fit_max, double),
      LIST(lags, int),
      NUM(lambda, double),
      LIST(cutoffs, int),
      NUM(confidence, double),
      NUM(family_alpha, double),
      NUM(batches, std::size_t),
      NUM(besov_p, double),
      NUM(beta, double),
      LIST(contrast_betas, double),
      NUM(margin, double),
      NUM(oversample, int),
      STR(check),
      LIST(chaos_orders, int),
      LIST(moment_orders, double),
      STR(hyper_cases),
      NUM(samples, std::size_t),
      NUM(resamples, int),
      NUM(threads, int),
      STR(format),
      STR(out),
  };
  return f;
}

}  // namespace

void set_key(ExperimentConfig& c, const std::string& key, const std::string& value) {
  for (const auto& f : fields())
    if (key == f.key) {
      f.set(c, value);
      return;
    }
  throw ConfigError("unknown config key: " + key);
}

ExperimentConfig parse_config(const std::string& text, ExperimentConfig base) {
  std::stringstream ss(text);
  std::string line;
  int lineno = 0;
  while (std::getline(ss, line)) {
    ++lineno;
    if (auto h = line.find('#'); h != std::string::npos) line.resize(h);
    if (trim(line).empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
    set_key(base, trim(line.substr(0, eq)), line.substr(eq + 1));
  }
  return base;
}

ExperimentConfig load_config(const std::string& path, ExperimentConfig base) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), std::move(base));
}

std::string to_text(const ExperimentConfig& c) {
  std::string s;
  for (const auto& f : fields()) s += std::string(f.key) + " = " + f.get(c) + "\n";
  return s;
}

void validate(const ExperimentConfig& c) {
  auto need = [](bool ok, const std::string& what) {
    if (!ok) throw ConfigError(what);
  };
  need(c.dim >= 1 && c.dim <= 3, "dim must be 1, 2 or 3");
  need(c.cutoff >= 0, "cutoff must be nonnegative");
  need(c.dt > 0.0, "dt must be positive");
  need(c.burn_in >= 0.0 && c.min_burn_in >= 0.0, "burn_in must be nonnegative");
  need(c.refinement >= 0 && c.refinement <= 16, "refinement must lie in [0, 16]");
  need(c.replicas >= 2, "replicas must be at least 2");
  need(c.report_nodes >= 1, "report_nodes must be positive");
  need(c.variant == "plain" || c.variant == "resonant", "variant must be plain or resonant");
  need(c.probe_max >= c.probe_min && c.probe_min >= 0.0, "probe window must satisfy 0 <= probe_min <= probe_max");
  need(c.fit_max > c.fit_min && c.fit_min > 0.0, "fit window must satisfy 0 < fit_min < fit_max");
  for (const auto& d : c.diagrams)
    need(d == "1" || d == "2" || d == "30" || d == "31p" || d == "22p" || d == "32p", "unknown diagram label: " + d);
  for (int l : c.lags) need(l >= 0, "lags must be nonnegative step counts");
  for (int n : c.cutoffs) need(n >= 0, "cutoffs must be nonnegative");
  need(c.confidence > 0.0 && c.confidence < 1.0, "confidence must lie in (0, 1)");
  need(c.family_alpha > 0.0 && c.family_alpha < 1.0, "family_alpha must lie in (0, 1)");
  need(c.batches >= 2, "batches must be at least 2");
  need(c.besov_p >= 1.0, "besov_p must be at least 1");
  need(c.margin > 0.0, "margin must be positive");
  need(c.oversample >= 2, "oversample must be at least 2");
  need(c.samples >= 2 && c.resamples >= 10, "samples >= 2 and resamples >= 10 required");
  need(c.threads >= 1, "threads must be positive");
  need(c.format == "csv" || c.format == "json", "format must be csv or json");
  need(c.lambda > 0.0 && c.lambda < 1.0, "lambda must lie in (0, 1)");
}

std::string config_hash(const ExperimentConfig& c) {
  ExperimentConfig k = c;
  k.out = "";
  k.threads = 1;
  k.format = "";
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char ch : to_text(k)) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::vector<Frequency> parse_frequency_list(const std::string& s, int dim) {
  std::vector<Frequency> out;
  for (const auto& item : split(s, ';')) {
    const auto parts = split(item, ',');
    if (parts.size() != static_cast<std::size_t>(dim)) throw ConfigError("probe '" + item + "' has wrong dimension");
    Frequency w = Frequency::Zero();
    for (int i = 0; i < dim; ++i) w[i] = parse_number<int>("probes", parts[static_cast<std::size_t>(i)]);
    out.push_back(w);
  }
  return out;
}

}  // namespace phi43
