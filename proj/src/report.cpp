#include "phi43/experiments.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <thread>

namespace phi43 {

std::string num(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

bool Report::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.passed; });
}

const Check* Report::find(const std::string& id) const {
  for (const auto& c : checks)
    if (c.id == id) return &c;
  return nullptr;
}

namespace {

std::string csv_cell(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

std::string csv_line(const std::vector<std::string>& cells) {
  std::string s;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) s += ',';
    s += csv_cell(cells[i]);
  }
  return s + "\n";
}

}  // namespace

std::string Report::csv() const {
  std::string s = "# phi43-verify report version=" + std::to_string(kReportVersion) + " command=" + command +
                  " claim=" + claim + " config=" + config_hash + "\n";
  s += csv_line(columns);
  for (const auto& r : rows) s += csv_line(r);
  return s;
}

std::string Report::checks_csv() const {
  std::string s = "# phi43-verify checks version=" + std::to_string(kReportVersion) + " command=" + command +
                  " claim=" + claim + " config=" + config_hash + "\n";
  s += csv_line({"check", "passed", "measured", "threshold", "detail"});
  for (const auto& c : checks) s += csv_line({c.id, c.passed ? "true" : "false", num(c.measured), num(c.threshold), c.detail});
  return s;
}

std::string Report::json() const {
  nlohmann::ordered_json j;
  j["format"] = "phi43.report";
  j["version"] = kReportVersion;
  j["command"] = command;
  j["claim"] = claim;
  j["config_hash"] = config_hash;
  j["passed"] = passed();
  auto checks_j = nlohmann::ordered_json::array();
  for (const auto& c : checks)
    checks_j.push_back({{"id", c.id}, {"passed", c.passed}, {"measured", num(c.measured)},
                        {"threshold", num(c.threshold)}, {"detail", c.detail}});
  j["checks"] = checks_j;
  j["warnings"] = warnings;
  j["columns"] = columns;
  j["rows"] = rows;
  return j.dump(1) + "\n";
}

std::vector<Orbit> frequency_orbits(const FrequencyLattice& lattice, double rmin, double rmax,
                                    const std::vector<Frequency>& explicit_probes) {
  auto canonical = [](Frequency w) {
    Frequency a = w.cwiseAbs();
    std::sort(a.data(), a.data() + 3, std::greater<int>());
    return a;
  };
  auto key = [](const Frequency& a) { return std::array<int, 3>{a[0], a[1], a[2]}; };
  std::map<std::array<int, 3>, bool> wanted;
  for (const auto& p : explicit_probes) wanted[key(canonical(p))] = true;
  std::map<std::array<int, 3>, Orbit> by_key;
  for (std::size_t i = 0; i < lattice.size(); ++i) {
    const double r = lattice.length(i);
    const auto c = canonical(lattice[i]);
    const auto k = key(c);
    if (explicit_probes.empty() ? (r < rmin - 1e-9 || r > rmax + 1e-9) : !wanted.count(k)) continue;
    auto& o = by_key[k];
    o.representative = c;
    o.radius = r;
    o.members.push_back(i);
  }
  std::vector<Orbit> out;
  for (auto& [k, o] : by_key) out.push_back(std::move(o));
  std::stable_sort(out.begin(), out.end(), [](const Orbit& a, const Orbit& b) { return a.radius < b.radius; });
  return out;
}

void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& body) {
  const auto workers = static_cast<std::size_t>(std::max(1, threads));
  if (workers == 1 || count < 2) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < std::min(workers, count); ++w)
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) {
        try {
          body(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!error) error = std::current_exception();
          next = count;
        }
      }
    });
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

Report run_command(const std::string& name, const ExperimentConfig& c) {
  validate(c);
  if (name == "constants") return cmd_constants(c);
  if (name == "moments") return cmd_moments(c);
  if (name == "time-regularity") return cmd_time_regularity(c);
  if (name == "besov") return cmd_besov(c);
  if (name == "lemmas") return cmd_lemmas(c);
  if (name == "chaos") return cmd_chaos(c);
  if (name == "dump-diagrams") return cmd_dump_diagrams(c);
  throw ConfigError("unknown subcommand: " + name);
}

void write_report(const Report& r, const ExperimentConfig& c) {
  namespace fs = std::filesystem;
  const fs::path dir(c.out.empty() ? "." : c.out);
  fs::create_directories(dir);
  auto write = [](const fs::path& p, const std::string& s) {
    std::ofstream f(p, std::ios::binary);
    if (!f) throw ConfigError("cannot write " + p.string());
    f << s;
  };
  if (c.format == "json") {
    write(dir / (r.command + ".json"), r.json());
  } else {
    write(dir / (r.command + ".csv"), r.csv());
    write(dir / (r.command + "_checks.csv"), r.checks_csv());
  }
}

}  // namespace phi43
