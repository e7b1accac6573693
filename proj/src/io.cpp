#include "nls2d/io.hpp"

#include <json.hpp>

#include <cstdint>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace nls2d {

namespace {

std::ofstream open_out(const std::string& path, std::ios::openmode mode = {}) {
  std::ofstream out(path, mode);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  return out;
}

struct Full {
  double v;
};
std::ostream& operator<<(std::ostream& os, Full f) {
  const auto old = os.precision(17);
  os << f.v;
  os.precision(old);
  return os;
}

double nan_to_null_safe(double v) { return v; }

nlohmann::json num(double v) {
  if (std::isnan(v)) return nullptr;
  return nan_to_null_safe(v);
}

}  // namespace

void write_text(const std::string& path, const std::string& text) {
  open_out(path) << text;
}

void write_monitors_csv(const std::string& path, const Trajectory& traj) {
  auto out = open_out(path);
  out << "t,mass,kinetic,potential,energy,boundary_mass\n";
  for (std::size_t k = 0; k < traj.times.size(); ++k) {
    const NormBundle& nb = traj.monitors[k];
    out << Full{traj.times[k]} << ',' << Full{nb.mass} << ',' << Full{nb.kinetic}
        << ',' << Full{nb.potential} << ',' << Full{nb.energy} << ','
        << Full{traj.boundary_mass[k]} << '\n';
  }
}

void write_morawetz_csv(const std::string& path, const MorawetzSeries& s) {
  auto out = open_out(path);
  out << "t,A,dA_fd,rate_coercive,error_budget,local_potential,"
         "cumulative_spacetime_potential\n";
  for (std::size_t k = 0; k < s.times.size(); ++k) {
    out << Full{s.times[k]} << ',' << Full{s.action[k]} << ','
        << Full{s.rate_fd[k]} << ',' << Full{s.rate_coercive[k]} << ','
        << Full{s.rate_error_budget[k]} << ',' << Full{s.local_potential[k]}
        << ',' << Full{s.cumulative_spacetime[k]} << '\n';
  }
}

void write_morawetz_json(const std::string& path, const MorawetzSeries& s) {
  nlohmann::json j;
  j["R"] = s.R_used.empty() ? 0.0 : s.R_used.back();
  j["sigma"] = s.sigma;
  j["alpha_theory"] = s.alpha_theory;
  j["alpha_fitted"] = num(s.alpha_fitted);
  j["eta_measured"] = s.eta_measured;
  j["C_action_bound"] = s.c_action_bound;
  j["E0"] = s.e0;
  j["spacetime_potential"] = s.spacetime_potential;
  open_out(path) << j.dump(2) << '\n';
}

void write_ground_state_csv(const std::string& path,
                            const GroundStateProfile& g) {
  auto out = open_out(path);
  out << "r,Q\n";
  for (Eigen::Index k = 0; k < g.field.size(); ++k)
    out << Full{g.field.grid->nodes(k)} << ','
        << Full{g.field.values(k).real()} << '\n';
}

std::string ground_state_json(const GroundStateProfile& g) {
  nlohmann::json j;
  j["p"] = g.p;
  j["q0"] = g.q0;
  j["c0"] = g.c0;
  j["mass"] = g.norms.mass;
  j["kinetic"] = g.norms.kinetic;
  j["potential"] = g.norms.potential;
  j["energy"] = g.norms.energy;
  j["threshold_me"] = g.threshold_me;
  j["threshold_kg"] = g.threshold_kg;
  j["graft_radius"] = num(g.graft_radius);
  return j.dump(2) + "\n";
}

std::string threshold_json(const ThresholdReport& rep) {
  nlohmann::json j;
  j["me_ratio"] = num(rep.me_ratio);
  j["kg_ratio"] = rep.kg_ratio;
  j["below"] = rep.below;
  j["e0"] = num(rep.e0);
  j["me_applicable"] = rep.me_applicable;
  j["trivial"] = rep.trivial;
  return j.dump(2) + "\n";
}

std::string verdict_json(const VerdictReport& rep) {
  nlohmann::json j;
  j["classification"] = nlohmann::json::parse(threshold_json(rep.classification));
  j["outcome"] = outcome_name(rep.outcome);
  j["scattering_cauchy"] = rep.scattering_cauchy;
  j["scattering_sum"] = num(rep.scattering_sum);
  j["scattering_tol"] = num(rep.scattering_tol);
  j["l2p_spacetime"] = rep.l2p_spacetime;
  j["halt_time"] = num(rep.halt_time);
  j["rescale_lambda"] = rep.rescale_lambda;
  j["conservation"] = {
      {"max_mass_drift", rep.conservation.max_mass_drift},
      {"max_energy_drift", rep.conservation.max_energy_drift},
      {"max_boundary_fraction", rep.conservation.max_boundary_fraction},
      {"boundary_flagged", rep.conservation.boundary_flagged},
  };
  j["notes"] = rep.notes;
  return j.dump(2) + "\n";
}

void write_trajectory_csv(const std::string& path, const Trajectory& traj) {
  auto out = open_out(path);
  out << "t,r,re_u,im_u\n";
  for (std::size_t k = 0; k < traj.times.size(); ++k)
    for (Eigen::Index i = 0; i < traj.grid->n; ++i)
      out << Full{traj.times[k]} << ',' << Full{traj.grid->nodes(i)} << ','
          << Full{traj.snapshots[k](i).real()} << ','
          << Full{traj.snapshots[k](i).imag()} << '\n';
}

void write_trajectory_binary(const std::string& path, const Trajectory& traj) {
  auto out = open_out(path, std::ios::binary);
  const std::uint64_t n = static_cast<std::uint64_t>(traj.grid->n);
  const double r_max = traj.grid->r_max, p = traj.p, dt = traj.dt;
  out.write(reinterpret_cast<const char*>(&n), sizeof n);
  out.write(reinterpret_cast<const char*>(&r_max), sizeof r_max);
  out.write(reinterpret_cast<const char*>(&p), sizeof p);
  out.write(reinterpret_cast<const char*>(&dt), sizeof dt);
  for (std::size_t k = 0; k < traj.times.size(); ++k) {
    out.write(reinterpret_cast<const char*>(&traj.times[k]), sizeof(double));
    out.write(reinterpret_cast<const char*>(traj.snapshots[k].data()),
              static_cast<std::streamsize>(2 * n * sizeof(double)));
  }
}

Trajectory read_trajectory_binary(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open: " + path);
  std::uint64_t n = 0;
  double r_max = 0, p = 0, dt = 0;
  in.read(reinterpret_cast<char*>(&n), sizeof n);
  in.read(reinterpret_cast<char*>(&r_max), sizeof r_max);
  in.read(reinterpret_cast<char*>(&p), sizeof p);
  in.read(reinterpret_cast<char*>(&dt), sizeof dt);
  if (!in) throw std::runtime_error("truncated trajectory header: " + path);

  Trajectory traj;
  traj.grid = make_grid(r_max, static_cast<Eigen::Index>(n));
  traj.p = p;
  traj.dt = dt;
  for (;;) {
    double t = 0;
    in.read(reinterpret_cast<char*>(&t), sizeof t);
    if (!in) break;
    Eigen::ArrayXcd u(static_cast<Eigen::Index>(n));
    in.read(reinterpret_cast<char*>(u.data()),
            static_cast<std::streamsize>(2 * n * sizeof(double)));
    if (!in) throw std::runtime_error("truncated snapshot: " + path);
    traj.times.push_back(t);
    traj.snapshots.push_back(std::move(u));
    traj.monitors.push_back(
        norm_bundle(ComplexRadialField{traj.grid, traj.snapshots.back()}, p));
    traj.boundary_mass.push_back(0.0);
  }
  return traj;
}

ComplexRadialField read_field_csv(const std::string& path, GridPtr grid) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open initial data file: " + path);
  std::vector<double> r, re, im;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || !(std::isdigit(line[0]) || line[0] == '-' ||
                          line[0] == '+' || line[0] == '.'))
      continue;  // header or comment
    std::istringstream ls(line);
    std::string cell;
    double vals[3] = {0, 0, 0};
    int c = 0;
    while (std::getline(ls, cell, ',') && c < 3) vals[c++] = std::stod(cell);
    if (c < 2) continue;
    r.push_back(vals[0]);
    re.push_back(vals[1]);
    im.push_back(c >= 3 ? vals[2] : 0.0);
  }
  if (r.size() < 2) throw InvalidArgument("initial data file too short: " + path);

  // linear interpolation onto the grid; zero outside the file's range
  ComplexRadialField out;
  out.grid = grid;
  out.values.resize(grid->n);
  std::size_t j = 0;
  for (Eigen::Index k = 0; k < grid->n; ++k) {
    const double x = grid->nodes(k);
    if (x < r.front() || x > r.back()) {
      // even data: below the first sample hold the first value
      out.values(k) = (x < r.front()) ? Complex(re.front(), im.front())
                                      : Complex(0.0, 0.0);
      continue;
    }
    while (j + 2 < r.size() && r[j + 1] < x) ++j;
    const double t = (x - r[j]) / (r[j + 1] - r[j]);
    out.values(k) = Complex(re[j] + t * (re[j + 1] - re[j]),
                            im[j] + t * (im[j + 1] - im[j]));
  }
  return out;
}

}  // namespace nls2d
