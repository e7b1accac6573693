#pragma once

#include <string>

#include "nls2d/diagnostics.hpp"
#include "nls2d/ground_state.hpp"

namespace nls2d {

// All CSV output prints doubles with 17 significant digits so that identical
// runs are bit-identical and values round-trip.

void write_monitors_csv(const std::string& path, const Trajectory& traj);
void write_morawetz_csv(const std::string& path, const MorawetzSeries& s);
void write_morawetz_json(const std::string& path, const MorawetzSeries& s);
void write_ground_state_csv(const std::string& path, const GroundStateProfile& g);
std::string ground_state_json(const GroundStateProfile& g);
std::string threshold_json(const ThresholdReport& rep);
std::string verdict_json(const VerdictReport& rep);
void write_text(const std::string& path, const std::string& text);

void write_trajectory_csv(const std::string& path, const Trajectory& traj);

/// Little-endian record: header {uint64 n, float64 r_max, float64 p,
/// float64 dt}, then per snapshot a float64 t followed by 2n float64
/// (re, im interleaved).
void write_trajectory_binary(const std::string& path, const Trajectory& traj);
Trajectory read_trajectory_binary(const std::string& path);

/// CSV of r,re,im resampled onto the grid by linear interpolation.
ComplexRadialField read_field_csv(const std::string& path, GridPtr grid);

}  // namespace nls2d
