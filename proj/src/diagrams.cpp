#include "phi43/diagrams.hpp"

#include "phi43/oracle.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <sstream>
#include <stdexcept>

namespace phi43 {

std::string label(Diagram d) {
  switch (d) {
    case Diagram::linear: return "1";
    case Diagram::wick_square: return "2";
    case Diagram::tree: return "30";
    case Diagram::tree_linear: return "31p";
    case Diagram::square_square: return "22p";
    case Diagram::tree_square: return "32p";
  }
  return "?";
}

Diagram diagram_from_label(const std::string& s) {
  for (auto d : kAllDiagrams)
    if (label(d) == s) return d;
  throw std::invalid_argument("unknown diagram: " + s);
}

double regularity(Diagram d) {
  switch (d) {
    case Diagram::linear: return -0.5;
    case Diagram::wick_square: return -1.0;
    case Diagram::tree: return 0.5;
    case Diagram::tree_linear: return 0.0;
    case Diagram::square_square: return 0.0;
    case Diagram::tree_square: return -0.5;
  }
  return 0.0;
}

std::string to_string(CprimeVariant v) { return v == CprimeVariant::plain ? "plain" : "resonant"; }

CprimeVariant cprime_variant_from_string(const std::string& s) {
  if (s == "plain") return CprimeVariant::plain;
  if (s == "resonant") return CprimeVariant::resonant;
  throw std::invalid_argument("unknown cprime variant: " + s);
}

double renorm_c(const FrequencyLattice& lattice) { return (0.5 / lattice.weights_sq()).sum(); }

double renorm_cprime(const FrequencyLattice& lattice, CprimeVariant variant) {
  const auto sums = cprime_sums(make_lattice(lattice.dim(), lattice.cutoff(), lattice.norm()));
  return variant == CprimeVariant::plain ? sums.plain : sums.triple;
}

RenormConstants renorm_constants(const FrequencyLattice& lattice) {
  RenormConstants k;
  k.c = renorm_c(lattice);
  k.cprime_plain = renorm_cprime(lattice, CprimeVariant::plain);
  k.cprime_resonant = renorm_cprime(lattice, CprimeVariant::resonant);
  return k;
}

HeatIntegrator::HeatIntegrator(LatticePtr lattice, double dt) : state_(lattice) {
  if (!(dt > 0.0)) throw std::invalid_argument("time step must be positive");
  const Eigen::ArrayXd& a = lattice->weights_sq();
  decay_ = (-dt * a).exp();
  gain_ = -(-dt * a).unaryExpr([](double v) { return std::expm1(v); }) / a;
}

void HeatIntegrator::step(const SpectralField& forcing) {
  state_.coeffs() = (state_.coeffs().array() * decay_ + forcing.coeffs().array() * gain_).matrix();
}

void HeatIntegrator::reset() { state_.coeffs().setZero(); }

namespace {

std::size_t aligned_steps(double span, double dt, const char* what) {
  const double k = span / dt;
  const double r = std::round(k);
  if (span < 0.0 || std::abs(k - r) > 1e-9 * std::max(1.0, k))
    throw std::invalid_argument(std::string(what) + " must be a nonnegative multiple of the time step");
  return static_cast<std::size_t>(r);
}

void burn_in_warning(double burn_in, double minimum, std::vector<std::string>* warnings) {
  if (warnings && burn_in < minimum) {
    std::ostringstream os;
    os << "burn_in " << burn_in << " below minimum " << minimum << "; zero-mode start-up error bound "
       << std::exp(-burn_in);
    warnings->push_back(os.str());
  }
}

}  // namespace

FieldTrajectory heat_integrate(const FieldTrajectory& f, double burn_in, std::vector<std::string>* warnings,
                               double minimum_burn_in) {
  const auto skip = aligned_steps(burn_in, f.grid.dt, "burn_in");
  if (skip >= f.fields.size()) throw std::invalid_argument("trajectory shorter than burn-in");
  burn_in_warning(burn_in, minimum_burn_in, warnings);
  HeatIntegrator integ(f.lattice, f.grid.dt);
  FieldTrajectory out{f.lattice, f.grid, {}, "I(" + f.label + ")"};
  out.grid.t0 = f.grid.time(skip);
  out.grid.nodes = f.fields.size() - skip;
  for (std::size_t i = 0; i < f.fields.size(); ++i) {
    if (i >= skip) out.fields.push_back(integ.state());
    integ.step(f.fields[i]);
  }
  return out;
}

namespace {

class Builder {
 public:
  Builder(LatticePtr lattice, const DiagramOptions& opt)
      : lattice_(lattice),
        opt_(opt),
        constants_(renorm_constants(*lattice)),
        cprime_(constants_.cprime(opt.variant)),
        para_(lattice),
        cube_grid_(make_product_grid(lattice, 3)),
        j2_(lattice, opt.dt),
        j3_(lattice, opt.dt) {
    burn_steps_ = aligned_steps(opt.burn_in, opt.dt, "burn_in");
    if (opt.report_nodes == 0) throw std::invalid_argument("report_nodes must be positive");
    const auto& w = opt.wanted;
    need_j2_ = w[4];
    need_j3_ = w[2] || w[3] || w[5];
    need_w2_ = w[1] || w[4] || w[5];
    // the linear path is stationary, so without heat integration there is nothing to burn in
    if (!need_j2_ && !need_j3_) {
      burn_steps_ = 0;
      opt_.burn_in = 0.0;
    }
  }

  std::size_t total_nodes() const { return burn_steps_ + opt_.report_nodes; }

  void feed(std::size_t i, const SpectralField& x, DiagramSet& set) {
    const bool report = i >= burn_steps_;
    const bool need_next = i + 1 < total_nodes();
    SpectralField w2, w3;
    if (need_w2_ || need_j3_) {
      const bool w2_now = (report && need_w2_) || (need_j2_ && need_next);
      const bool w3_now = need_j3_ && need_next;
      if (w2_now || w3_now) {
        const Eigen::ArrayXd phys = cube_grid_->to_physical(x);
        if (w2_now) w2 = cube_grid_->from_physical(hermite(2, phys, constants_.c));
        if (w3_now) w3 = cube_grid_->from_physical(hermite(3, phys, constants_.c));
      }
    }
    if (report) {
      auto put = [&](Diagram d, SpectralField f) { set.trajectories[static_cast<std::size_t>(d)].fields.push_back(std::move(f)); };
      const auto& w = opt_.wanted;
      if (w[0]) put(Diagram::linear, x);
      if (w[1]) put(Diagram::wick_square, w2);
      if (w[2]) put(Diagram::tree, j3_.state());
      if (w[3]) put(Diagram::tree_linear, para_.resonant(j3_.state(), x));
      if (w[4]) {
        auto f = para_.resonant(j2_.state(), w2);
        f[lattice_->zero_index()] -= 2.0 * cprime_;
        put(Diagram::square_square, std::move(f));
      }
      if (w[5]) {
        auto f = para_.resonant(j3_.state(), w2);
        f.coeffs() -= 6.0 * cprime_ * x.coeffs();
        put(Diagram::tree_square, std::move(f));
      }
    }
    if (need_next) {
      if (need_j2_) j2_.step(w2);
      if (need_j3_) j3_.step(w3);
    }
  }

  DiagramSet start(std::uint64_t seed, std::uint32_t replica) const {
    DiagramSet set;
    set.lattice = lattice_;
    set.grid = TimeGrid{opt_.burn_in, opt_.dt, opt_.report_nodes};
    set.constants = constants_;
    set.provenance = Provenance{seed, replica, opt_.dt, opt_.burn_in, opt_.refinement, opt_.variant, {}};
    if (need_j2_ || need_j3_) burn_in_warning(opt_.burn_in, opt_.minimum_burn_in, &set.provenance.warnings);
    for (auto d : kAllDiagrams) {
      auto& t = set.trajectories[static_cast<std::size_t>(d)];
      t.lattice = lattice_;
      t.grid = set.grid;
      t.label = label(d);
    }
    return set;
  }

 private:
  LatticePtr lattice_;
  DiagramOptions opt_;
  RenormConstants constants_;
  double cprime_;
  Paraproducts para_;
  GridPtr cube_grid_;
  HeatIntegrator j2_;
  HeatIntegrator j3_;
  std::size_t burn_steps_ = 0;
  bool need_j2_ = false, need_j3_ = false, need_w2_ = false;
};

}  // namespace

DiagramSet build_diagrams(LatticePtr lattice, const DiagramOptions& options, const CounterRng& rng,
                          std::uint32_t replica) {
  Builder b(lattice, options);
  auto set = b.start(rng.seed(), replica);
  LinearSampler sampler(lattice, options.dt, rng, replica, options.refinement);
  if (options.keep_linear_path) {
    set.linear_path = FieldTrajectory{lattice, TimeGrid{0.0, options.dt, b.total_nodes()}, {}, "1"};
  }
  for (std::size_t i = 0; i < b.total_nodes(); ++i) {
    const auto x = sampler.next();
    if (options.keep_linear_path) set.linear_path.fields.push_back(x);
    b.feed(i, x, set);
  }
  return set;
}

DiagramSet build_diagrams_from_linear(const FieldTrajectory& linear, const DiagramOptions& options) {
  if (std::abs(linear.grid.dt - options.dt) > 1e-15) throw std::invalid_argument("path step differs from options");
  Builder b(linear.lattice, options);
  if (linear.fields.size() < b.total_nodes()) throw std::invalid_argument("linear path too short");
  auto set = b.start(0, 0);
  for (std::size_t i = 0; i < b.total_nodes(); ++i) b.feed(i, linear.fields[i], set);
  return set;
}

SpectralField time_increment(const DiagramSet& set, Diagram d, double s, double t) {
  const auto& traj = set[d];
  if (traj.fields.empty()) throw std::invalid_argument("diagram not present in set");
  auto node = [&](double time) {
    const double k = (time - traj.grid.t0) / traj.grid.dt;
    const double r = std::round(k);
    if (std::abs(k - r) > 1e-9 || r < 0 || r >= static_cast<double>(traj.fields.size()))
      throw std::invalid_argument("time is not a reporting-window grid node");
    return static_cast<std::size_t>(r);
  };
  return traj.fields[node(t)] - traj.fields[node(s)];
}

}  // namespace phi43
