#include "nls2d/config.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "nls2d/ground_state.hpp"
#include "nls2d/io.hpp"

namespace nls2d {

namespace {

using KvMap = std::map<std::string, std::string>;

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

KvMap parse_kv(const std::string& text) {
  KvMap kv;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw InvalidArgument("config line " + std::to_string(lineno) +
                            ": expected key = value");
    kv[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  return kv;
}

double to_double(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const double x = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw InvalidArgument("config key '" + key + "': bad number '" + v + "'");
  }
}

long to_long(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const long x = std::stol(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw InvalidArgument("config key '" + key + "': bad integer '" + v + "'");
  }
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw InvalidArgument("config key '" + key + "': bad boolean '" + v + "'");
}

ExperimentConfig from_map(const KvMap& kv) {
  ExperimentConfig c;
  for (const auto& [key, v] : kv) {
    if (key == "p") c.p = to_double(key, v);
    else if (key == "grid.r_max") c.grid_r_max = to_double(key, v);
    else if (key == "grid.n") c.grid_n = to_long(key, v);
    else if (key == "evolve.dt") c.evolve.dt = to_double(key, v);
    else if (key == "evolve.t_end") c.evolve.t_end = to_double(key, v);
    else if (key == "evolve.snapshot_stride") c.evolve.snapshot_stride = static_cast<int>(to_long(key, v));
    else if (key == "evolve.boundary_guard") c.evolve.boundary_guard = to_double(key, v);
    else if (key == "evolve.blowup_factor") c.evolve.blowup_factor = to_double(key, v);
    else if (key == "evolve.nonlinearity") c.evolve.nonlinearity = to_bool(key, v);
    else if (key == "initial.kind") {
      if (v == "gaussian") c.initial.kind = InitialKind::Gaussian;
      else if (v == "ground_state_multiple") c.initial.kind = InitialKind::GroundStateMultiple;
      else if (v == "from_file") c.initial.kind = InitialKind::FromFile;
      else throw InvalidArgument("config: unknown initial.kind '" + v + "'");
    }
    else if (key == "initial.amplitude") c.initial.amplitude = to_double(key, v);
    else if (key == "initial.width") c.initial.width = to_double(key, v);
    else if (key == "initial.multiple") c.initial.multiple = to_double(key, v);
    else if (key == "initial.path") c.initial.path = v;
    else if (key == "morawetz.policy") {
      if (v == "fixed") c.r_policy = RPolicy::Fixed;
      else if (v == "scaling") c.r_policy = RPolicy::Scaling;
      else throw InvalidArgument("config: unknown morawetz.policy '" + v + "'");
    }
    else if (key == "morawetz.R") c.morawetz_R = to_double(key, v);
    else if (key == "morawetz.auto_R_factor") c.auto_R_factor = to_double(key, v);
    else if (key == "morawetz.fit_lo") c.fit_lo = to_double(key, v);
    else if (key == "morawetz.fit_hi") c.fit_hi = to_double(key, v);
    else if (key == "scattering.tol_factor") c.scattering_tol_factor = to_double(key, v);
    else if (key == "scattering.tail_fraction") c.scattering_tail_fraction = to_double(key, v);
    else if (key == "gates.mass_drift_tol") c.mass_drift_tol = to_double(key, v);
    else if (key == "gates.energy_drift_tol") c.energy_drift_tol = to_double(key, v);
    else if (key == "gates.boundary_mass_tol") c.boundary_mass_tol = to_double(key, v);
    else if (key == "outputs.dir") c.output_dir = v;
    else if (key == "outputs.snapshots") {
      if (v == "none") c.snapshots = SnapshotOutput::None;
      else if (v == "csv") c.snapshots = SnapshotOutput::Csv;
      else if (v == "binary") c.snapshots = SnapshotOutput::Binary;
      else if (v == "both") c.snapshots = SnapshotOutput::Both;
      else throw InvalidArgument("config: unknown outputs.snapshots '" + v + "'");
    }
    else throw InvalidArgument("config: unknown key '" + key + "'");
  }
  return c;
}

}  // namespace

ExperimentConfig parse_config_text(const std::string& text) {
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '{') {
    nlohmann::json j = nlohmann::json::parse(text);
    KvMap kv;
    for (auto it = j.begin(); it != j.end(); ++it) {
      const auto& val = it.value();
      if (val.is_string()) kv[it.key()] = val.get<std::string>();
      else if (val.is_boolean()) kv[it.key()] = val.get<bool>() ? "true" : "false";
      else kv[it.key()] = val.dump();
    }
    ExperimentConfig c = from_map(kv);
    validate_config(c);
    return c;
  }
  ExperimentConfig c = from_map(parse_kv(text));
  validate_config(c);
  return c;
}

ExperimentConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open config file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str());
}

std::string serialize_config(const ExperimentConfig& c) {
  std::ostringstream out;
  out.precision(17);
  const char* kind = c.initial.kind == InitialKind::Gaussian ? "gaussian"
                     : c.initial.kind == InitialKind::GroundStateMultiple
                         ? "ground_state_multiple"
                         : "from_file";
  const char* snaps = c.snapshots == SnapshotOutput::None    ? "none"
                      : c.snapshots == SnapshotOutput::Csv   ? "csv"
                      : c.snapshots == SnapshotOutput::Binary ? "binary"
                                                              : "both";
  out << "p = " << c.p << "\n"
      << "grid.r_max = " << c.grid_r_max << "\n"
      << "grid.n = " << c.grid_n << "\n"
      << "evolve.dt = " << c.evolve.dt << "\n"
      << "evolve.t_end = " << c.evolve.t_end << "\n"
      << "evolve.snapshot_stride = " << c.evolve.snapshot_stride << "\n"
      << "evolve.boundary_guard = " << c.evolve.boundary_guard << "\n"
      << "evolve.blowup_factor = " << c.evolve.blowup_factor << "\n"
      << "evolve.nonlinearity = " << (c.evolve.nonlinearity ? "true" : "false") << "\n"
      << "initial.kind = " << kind << "\n"
      << "initial.amplitude = " << c.initial.amplitude << "\n"
      << "initial.width = " << c.initial.width << "\n"
      << "initial.multiple = " << c.initial.multiple << "\n";
  if (!c.initial.path.empty()) out << "initial.path = " << c.initial.path << "\n";
  out << "morawetz.policy = " << (c.r_policy == RPolicy::Fixed ? "fixed" : "scaling") << "\n"
      << "morawetz.R = " << c.morawetz_R << "\n"
      << "morawetz.auto_R_factor = " << c.auto_R_factor << "\n"
      << "morawetz.fit_lo = " << c.fit_lo << "\n"
      << "morawetz.fit_hi = " << c.fit_hi << "\n"
      << "scattering.tol_factor = " << c.scattering_tol_factor << "\n"
      << "scattering.tail_fraction = " << c.scattering_tail_fraction << "\n"
      << "gates.mass_drift_tol = " << c.mass_drift_tol << "\n"
      << "gates.energy_drift_tol = " << c.energy_drift_tol << "\n"
      << "gates.boundary_mass_tol = " << c.boundary_mass_tol << "\n"
      << "outputs.dir = " << c.output_dir << "\n"
      << "outputs.snapshots = " << snaps << "\n";
  return out.str();
}

void validate_config(const ExperimentConfig& c) {
  if (!(c.p >= 2.0)) throw UnsupportedExponent("config: p must be >= 2");
  if (!(c.grid_r_max > 0.0)) throw InvalidArgument("config: grid.r_max must be positive");
  if (c.grid_n < 16) throw InvalidArgument("config: grid.n must be >= 16");
  if (!(c.evolve.dt > 0.0)) throw InvalidArgument("config: evolve.dt must be positive");
  if (!(c.evolve.t_end > 0.0)) throw InvalidArgument("config: evolve.t_end must be positive");
  if (c.evolve.snapshot_stride < 1) throw InvalidArgument("config: snapshot_stride must be >= 1");
  if (!(c.evolve.boundary_guard > 0.0 && c.evolve.boundary_guard < 1.0))
    throw InvalidArgument("config: boundary_guard must lie in (0,1)");
  if (!(c.evolve.blowup_factor > 1.0))
    throw InvalidArgument("config: blowup_factor must exceed 1");
  if (c.initial.kind == InitialKind::FromFile && c.initial.path.empty())
    throw InvalidArgument("config: initial.path required for from_file data");
  if (c.auto_R_factor <= 0.0) {
    if (!(c.morawetz_R >= 1.0)) throw InvalidArgument("config: morawetz.R must be >= 1");
    if (!(2.0 * c.morawetz_R < c.grid_r_max))
      throw InvalidArgument("config: need 2 * morawetz.R < grid.r_max");
  }
  if (!(c.fit_lo >= 0.0 && c.fit_lo < c.fit_hi && c.fit_hi <= 1.0))
    throw InvalidArgument("config: need 0 <= fit_lo < fit_hi <= 1");
  if (!(c.scattering_tail_fraction > 0.0 && c.scattering_tail_fraction < 1.0))
    throw InvalidArgument("config: scattering.tail_fraction must lie in (0,1)");
}

std::vector<std::string> preset_names() {
  return {"subthreshold-p3", "soliton-p2", "negative-energy-p3"};
}

ExperimentConfig preset_config(const std::string& name) {
  ExperimentConfig c;
  if (name == "subthreshold-p3") {
    c.p = 3.0;
    c.grid_r_max = 224.0;  // free dispersion reaches ~4T; keep the guard clean
    c.grid_n = 11264;
    c.evolve.dt = 2e-3;
    c.evolve.t_end = 20.0;
    c.evolve.snapshot_stride = 500;
    c.initial = {InitialKind::Gaussian, 0.45, 1.0, 1.0, ""};
    c.auto_R_factor = 8.0;
    c.output_dir = "runs/subthreshold-p3";
  } else if (name == "soliton-p2") {
    c.p = 2.0;
    c.grid_r_max = 32.0;
    c.grid_n = 2048;
    c.evolve.dt = 2e-3;
    c.evolve.t_end = 10.0;
    c.evolve.snapshot_stride = 250;
    c.initial = {InitialKind::GroundStateMultiple, 0.0, 1.0, 1.0, ""};
    c.morawetz_R = 8.0;
    c.output_dir = "runs/soliton-p2";
  } else if (name == "negative-energy-p3") {
    c.p = 3.0;
    c.grid_r_max = 8.0;
    c.grid_n = 2048;
    c.evolve.dt = 5e-5;
    c.evolve.t_end = 5.0;
    c.evolve.snapshot_stride = 100;
    c.initial = {InitialKind::Gaussian, 3.0, 1.0, 1.0, ""};
    c.morawetz_R = 2.0;
    c.output_dir = "runs/negative-energy-p3";
  } else {
    throw InvalidArgument("unknown preset: " + name);
  }
  return c;
}

double effective_radius(const ComplexRadialField& u) {
  const double mass = integrate(*u.grid, u.values.abs2());
  if (!(mass > 0.0)) return 0.0;
  const double m2 =
      integrate(*u.grid, (u.grid->nodes.square() * u.values.abs2()).eval());
  return 2.0 * std::sqrt(m2 / mass);
}

ComplexRadialField build_initial_data(const ExperimentConfig& cfg, GridPtr grid) {
  switch (cfg.initial.kind) {
    case InitialKind::Gaussian: {
      const double a = cfg.initial.amplitude;
      const double w = cfg.initial.width;
      if (!(w > 0.0)) throw InvalidArgument("initial.width must be positive");
      return make_field(grid, [a, w](double r) {
        return Complex(a * std::exp(-(r / w) * (r / w)), 0.0);
      });
    }
    case InitialKind::GroundStateMultiple: {
      const GroundStateProfile g = shoot_ground_state(cfg.p);
      ComplexRadialField out;
      out.grid = grid;
      out.values = cfg.initial.multiple * resample(g.field, grid->nodes);
      return out;
    }
    case InitialKind::FromFile:
      return read_field_csv(cfg.initial.path, grid);
  }
  throw InvalidArgument("unknown initial data kind");
}

}  // namespace nls2d
