#include "phi43/diagrams.hpp"

#include <json.hpp>

#include <istream>
#include <ostream>
#include <stdexcept>

namespace phi43 {

using nlohmann::json;

namespace {

json field_to_json(const SpectralField& f) {
  json re = json::array(), im = json::array();
  for (std::size_t i = 0; i < f.size(); ++i) {
    re.push_back(f[i].real());
    im.push_back(f[i].imag());
  }
  return json{{"re", re}, {"im", im}};
}

SpectralField field_from_json(const LatticePtr& lattice, const json& j) {
  const auto& re = j.at("re");
  const auto& im = j.at("im");
  if (re.size() != lattice->size() || im.size() != lattice->size())
    throw std::runtime_error("coefficient count does not match lattice");
  SpectralField f(lattice);
  for (std::size_t i = 0; i < lattice->size(); ++i) f[i] = Complex(re[i].get<double>(), im[i].get<double>());
  return f;
}

}  // namespace

void write_diagram_set(std::ostream& os, const DiagramSet& set) {
  const auto& L = *set.lattice;
  json j;
  j["format"] = "phi43.diagram_set";
  j["version"] = kDiagramFormatVersion;
  j["lattice"] = {{"dim", L.dim()}, {"cutoff", L.cutoff()}, {"norm", to_string(L.norm())}, {"size", L.size()}};
  j["grid"] = {{"t0", set.grid.t0}, {"dt", set.grid.dt}, {"nodes", set.grid.nodes}};
  j["constants"] = {{"c", set.constants.c},
                    {"cprime_plain", set.constants.cprime_plain},
                    {"cprime_resonant", set.constants.cprime_resonant}};
  const auto& p = set.provenance;
  j["provenance"] = {{"seed", p.seed},           {"replica", p.replica},
                     {"dt", p.dt},               {"burn_in", p.burn_in},
                     {"refinement", p.refinement}, {"cprime_variant", to_string(p.variant)},
                     {"warnings", p.warnings}};
  json traj = json::object();
  for (auto d : kAllDiagrams) {
    const auto& t = set[d];
    if (t.fields.empty()) continue;
    json nodes = json::array();
    for (const auto& f : t.fields) nodes.push_back(field_to_json(f));
    traj[label(d)] = nodes;
  }
  j["trajectories"] = traj;
  os << j.dump() << '\n';
}

DiagramSet read_diagram_set(std::istream& is) {
  json j;
  is >> j;
  if (j.at("format") != "phi43.diagram_set") throw std::runtime_error("not a diagram set dump");
  if (j.at("version").get<int>() != kDiagramFormatVersion) throw std::runtime_error("unsupported dump version");
  const auto& jl = j.at("lattice");
  DiagramSet set;
  set.lattice = make_lattice(jl.at("dim").get<int>(), jl.at("cutoff").get<int>(),
                             ball_norm_from_string(jl.at("norm").get<std::string>()));
  const auto& jg = j.at("grid");
  set.grid = TimeGrid{jg.at("t0").get<double>(), jg.at("dt").get<double>(), jg.at("nodes").get<std::size_t>()};
  const auto& jc = j.at("constants");
  set.constants = RenormConstants{jc.at("c").get<double>(), jc.at("cprime_plain").get<double>(),
                                  jc.at("cprime_resonant").get<double>()};
  const auto& jp = j.at("provenance");
  set.provenance.seed = jp.at("seed").get<std::uint64_t>();
  set.provenance.replica = jp.at("replica").get<std::uint32_t>();
  set.provenance.dt = jp.at("dt").get<double>();
  set.provenance.burn_in = jp.at("burn_in").get<double>();
  set.provenance.refinement = jp.at("refinement").get<int>();
  set.provenance.variant = cprime_variant_from_string(jp.at("cprime_variant").get<std::string>());
  set.provenance.warnings = jp.at("warnings").get<std::vector<std::string>>();
  for (auto d : kAllDiagrams) {
    auto& t = set.trajectories[static_cast<std::size_t>(d)];
    t.lattice = set.lattice;
    t.grid = set.grid;
    t.label = label(d);
    const auto& jt = j.at("trajectories");
    if (!jt.contains(label(d))) continue;
    for (const auto& node : jt.at(label(d))) t.fields.push_back(field_from_json(set.lattice, node));
  }
  return set;
}

}  // namespace phi43
