#pragma once

#include <string>
#include <vector>

#include "nls2d/evolve.hpp"
#include "nls2d/morawetz.hpp"

namespace nls2d {

enum class InitialKind { Gaussian, GroundStateMultiple, FromFile };
enum class SnapshotOutput { None, Csv, Binary, Both };

struct InitialData {
  InitialKind kind = InitialKind::Gaussian;
  double amplitude = 0.5;  // gaussian: a * exp(-(r/w)^2)
  double width = 1.0;
  double multiple = 1.0;   // ground_state_multiple: c * Q
  std::string path;        // from_file: CSV of r,re,im
};

struct ExperimentConfig {
  double p = 3.0;
  double grid_r_max = 48.0;
  Eigen::Index grid_n = 3072;
  EvolveConfig evolve;
  InitialData initial;
  RPolicy r_policy = RPolicy::Fixed;
  double morawetz_R = 8.0;
  double auto_R_factor = 0.0;  // > 0: R = factor * effective_radius(u0)
  double fit_lo = 0.25;
  double fit_hi = 1.0;
  double scattering_tol_factor = 1e-2;
  double scattering_tail_fraction = 0.5;
  double mass_drift_tol = 1e-9;
  double energy_drift_tol = 1e-2;
  double boundary_mass_tol = 1e-4;
  std::string output_dir = "runs/exp";
  SnapshotOutput snapshots = SnapshotOutput::None;
};

/// Parses the flat key = value format, or JSON when the text starts with '{'.
ExperimentConfig parse_config_text(const std::string& text);
ExperimentConfig parse_config_file(const std::string& path);

/// Serializes to the key = value format; parse(serialize(c)) == c.
std::string serialize_config(const ExperimentConfig& cfg);

/// Rejects out-of-range values before any computation.
void validate_config(const ExperimentConfig& cfg);

std::vector<std::string> preset_names();
ExperimentConfig preset_config(const std::string& name);

/// Twice the rms radius of |u|^2; the localization scale of the data.
double effective_radius(const ComplexRadialField& u);

/// Builds the configured initial state on the configured grid.  Ground-state
/// data is shot on the reference grid and resampled here.
ComplexRadialField build_initial_data(const ExperimentConfig& cfg, GridPtr grid);

}  // namespace nls2d
